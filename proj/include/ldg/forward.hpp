#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "ldg/assembly.hpp"
#include "ldg/boundary.hpp"
#include "ldg/errors.hpp"
#include "ldg/mesh.hpp"
#include "ldg/params.hpp"
#include "ldg/qfield.hpp"

namespace ldg {

enum class LinearSolverKind { Direct, ConjugateGradient };

struct SolverConfig {
    double residual_tol = 1e-10;  ///< on the Euclidean norm of the interior residual
    int max_iter = 30;
    LinearSolverKind linear_solver = LinearSolverKind::Direct;
    double cg_tol = 1e-12;
    int max_backtracks = 10;  ///< step halvings tried when a full Newton step increases the residual

    void validate() const {
        require(residual_tol > 0.0, "SolverConfig: residual_tol must be positive");
        require(max_iter >= 1, "SolverConfig: max_iter must be at least 1");
        require(cg_tol > 0.0, "SolverConfig: cg_tol must be positive");
        require(max_backtracks >= 0, "SolverConfig: max_backtracks must be non-negative");
    }
};

enum class BranchKind { D1, D2, R1, R2, R3, R4, WORS, FromField };

inline std::string to_string(BranchKind k) {
    switch (k) {
        case BranchKind::D1: return "D1";
        case BranchKind::D2: return "D2";
        case BranchKind::R1: return "R1";
        case BranchKind::R2: return "R2";
        case BranchKind::R3: return "R3";
        case BranchKind::R4: return "R4";
        case BranchKind::WORS: return "WORS";
        case BranchKind::FromField: return "FromField";
    }
    return "?";
}

inline BranchKind branch_kind_from_string(const std::string& s) {
    for (auto k : {BranchKind::D1, BranchKind::D2, BranchKind::R1, BranchKind::R2, BranchKind::R3, BranchKind::R4,
                   BranchKind::WORS, BranchKind::FromField}) {
        if (to_string(k) == s) return k;
    }
    throw ValidationError("unknown branch seed '" + s + "'");
}

struct BranchSeed {
    BranchKind kind = BranchKind::D1;
    std::optional<QField> field;  ///< only for FromField

    static BranchSeed named(BranchKind k) { return {k, std::nullopt}; }
    static BranchSeed from_field(QField q) { return {BranchKind::FromField, std::move(q)}; }
};

/// Corner splay pattern of a solution on the tangent-BC square.
enum class BranchClass { Diagonal, Rotated, Other };

inline std::string to_string(BranchClass c) {
    switch (c) {
        case BranchClass::Diagonal: return "diagonal";
        case BranchClass::Rotated: return "rotated";
        case BranchClass::Other: return "other";
    }
    return "?";
}

/// Expected class of a named seed; nullopt when the seed makes no claim.
inline std::optional<BranchClass> expected_class(BranchKind k) {
    switch (k) {
        case BranchKind::D1:
        case BranchKind::D2: return BranchClass::Diagonal;
        case BranchKind::R1:
        case BranchKind::R2:
        case BranchKind::R3:
        case BranchKind::R4: return BranchClass::Rotated;
        default: return std::nullopt;
    }
}

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    std::vector<double> residual_history;
    QField solution;
    std::optional<SolverError::Kind> failure;
    BranchClass branch_class = BranchClass::Other;
    bool branch_mismatch = false;

    [[nodiscard]] double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

/// Galerkin system of -alpha Lap Q + (|Q|^2 - beta) Q = 0 with Dirichlet data.
///
/// Unknowns are the interior nodal values, interleaved as (Q11, Q12) per
/// interior node. The Jacobian sparsity pattern is built once; Newton reuses
/// the symbolic factorization across solves. Not thread-safe: give each
/// concurrent task its own instance (mesh and BC may be shared).
class DiscreteProblem {
  public:
    DiscreteProblem(std::shared_ptr<const Mesh> mesh, BCSpec bc) : mesh_(std::move(mesh)), bc_(bc) {
        const auto& m = *mesh_;
        n_dofs_ = 2 * static_cast<Eigen::Index>(m.interior_nodes().size());
        require(n_dofs_ > 0, "DiscreteProblem: mesh has no interior nodes");

        stiffness_.reserve(m.triangle_count());
        for (const auto& g : m.geometry()) stiffness_.push_back(local_stiffness(g));

        std::vector<Eigen::Triplet<double>> pattern;
        pattern.reserve(36 * m.triangle_count());
        for (const auto& tri : m.triangles()) {
            for (int a = 0; a < 3; ++a) {
                const int ra = m.dof(tri[a]);
                if (ra < 0) continue;
                for (int b = 0; b < 3; ++b) {
                    const int cb = m.dof(tri[b]);
                    if (cb < 0) continue;
                    for (int c = 0; c < 2; ++c) {
                        for (int d = 0; d < 2; ++d) pattern.emplace_back(2 * ra + c, 2 * cb + d, 0.0);
                    }
                }
            }
        }
        jacobian_.resize(n_dofs_, n_dofs_);
        jacobian_.setFromTriplets(pattern.begin(), pattern.end());
        jacobian_.makeCompressed();

        // Position of every local (a,c,b,d) entry inside the CSC value array.
        scatter_.assign(36 * m.triangle_count(), -1);
        for (std::size_t t = 0; t < m.triangle_count(); ++t) {
            const auto& tri = m.triangles()[t];
            for (int a = 0; a < 3; ++a) {
                const int ra = m.dof(tri[a]);
                if (ra < 0) continue;
                for (int b = 0; b < 3; ++b) {
                    const int cb = m.dof(tri[b]);
                    if (cb < 0) continue;
                    for (int c = 0; c < 2; ++c) {
                        for (int d = 0; d < 2; ++d) {
                            scatter_[36 * t + 12 * a + 4 * b + 2 * c + d] = value_index(2 * ra + c, 2 * cb + d);
                        }
                    }
                }
            }
        }
    }

    [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }
    [[nodiscard]] std::shared_ptr<const Mesh> mesh_ptr() const noexcept { return mesh_; }
    [[nodiscard]] const BCSpec& bc() const noexcept { return bc_; }
    [[nodiscard]] Eigen::Index dofs() const noexcept { return n_dofs_; }

    /// Interior residual vector, interleaved (r1_i, r2_i).
    [[nodiscard]] Eigen::VectorXd residual(const QField& q, const ReducedParams& p) const {
        Eigen::VectorXd r;
        assemble(q, p, r, nullptr);
        return r;
    }

    /// Exact Frechet derivative of residual() with respect to the interior unknowns.
    [[nodiscard]] SparseMatrix jacobian(const QField& q, const ReducedParams& p) const {
        SparseMatrix j = jacobian_;
        Eigen::VectorXd r;
        assemble(q, p, r, &j);
        return j;
    }

    /// Discrete energy: sum over triangles of alpha/2 |grad Q_h|^2 + 1/4 (|Q_h|^2 - beta)^2.
    [[nodiscard]] double energy(const QField& q, const ReducedParams& p) const {
        const auto& m = *mesh_;
        double e = 0.0;
        for (std::size_t t = 0; t < m.triangle_count(); ++t) {
            const auto& tri = m.triangles()[t];
            const auto& k = stiffness_[t];
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    e += 0.5 * p.alpha * k[a][b] *
                         (q.q11[tri[a]] * q.q11[tri[b]] + q.q12[tri[a]] * q.q12[tri[b]]);
                }
            }
            const double area = m.geometry()[t].area;
            for (std::size_t s = 0; s < kDegree4Rule.weights.size(); ++s) {
                const auto& lam = kDegree4Rule.points[s];
                const double u = lam[0] * q.q11[tri[0]] + lam[1] * q.q11[tri[1]] + lam[2] * q.q11[tri[2]];
                const double v = lam[0] * q.q12[tri[0]] + lam[1] * q.q12[tri[1]] + lam[2] * q.q12[tri[2]];
                const double bulk = u * u + v * v - p.beta;
                e += area * kDegree4Rule.weights[s] * 0.25 * bulk * bulk;
            }
        }
        return e;
    }

    /// Newton's method from `seed`. Boundary values are taken from the BC and
    /// never modified. A backtracking step halving guards against residual
    /// growth far from a solution.
    SolveReport newton_solve(QField seed, const ReducedParams& p, const SolverConfig& cfg) {
        cfg.validate();
        require(p.valid(), "newton_solve: alpha and beta must be positive");
        require(seed.mesh.get() == mesh_.get() || seed.size() == mesh_->node_count(),
                "newton_solve: seed is defined on a different mesh");
        seed.mesh = mesh_;
        seed.impose(bc_);

        SolveReport report;
        report.solution = std::move(seed);
        QField& q = report.solution;

        Eigen::VectorXd r;
        SparseMatrix& jac = jacobian_;
        assemble(q, p, r, &jac);
        double norm = r.norm();
        report.residual_history.push_back(norm);

        QField trial = q;
        Eigen::VectorXd trial_r;
        while (std::isfinite(norm) && norm > cfg.residual_tol && report.iterations < cfg.max_iter) {
            Eigen::VectorXd step;
            if (!solve_linear(jac, r, cfg, step)) {
                report.failure = SolverError::Kind::SingularLinearSolve;
                return report;
            }

            // Full step, with the Jacobian at the trial point.
            apply_step(q, step, 1.0, trial);
            assemble(trial, p, trial_r, &jac);
            double trial_norm = trial_r.norm();
            if (!(trial_norm < norm)) {
                double t = 1.0;
                double best_norm = std::isfinite(trial_norm) ? trial_norm : std::numeric_limits<double>::infinity();
                double best_t = 1.0;
                for (int k = 1; k <= cfg.max_backtracks; ++k) {
                    t *= 0.5;
                    apply_step(q, step, t, trial);
                    assemble(trial, p, trial_r, nullptr);
                    const double n_t = trial_r.norm();
                    if (n_t < best_norm) {
                        best_norm = n_t;
                        best_t = t;
                    }
                    if (n_t < norm) break;
                }
                apply_step(q, step, best_t, trial);
                assemble(trial, p, trial_r, &jac);
                trial_norm = trial_r.norm();
            }
            std::swap(q.q11, trial.q11);
            std::swap(q.q12, trial.q12);
            r.swap(trial_r);
            norm = trial_norm;
            ++report.iterations;
            report.residual_history.push_back(norm);
        }
        report.converged = std::isfinite(norm) && norm <= cfg.residual_tol;
        if (!report.converged) report.failure = SolverError::Kind::NonConvergence;
        return report;
    }

  private:
    [[nodiscard]] int value_index(Eigen::Index row, Eigen::Index col) const {
        const auto* outer = jacobian_.outerIndexPtr();
        const auto* inner = jacobian_.innerIndexPtr();
        const auto* begin = inner + outer[col];
        const auto* end = inner + outer[col + 1];
        const auto* it = std::lower_bound(begin, end, static_cast<int>(row));
        return static_cast<int>(it - inner);
    }

    void apply_step(const QField& q, const Eigen::VectorXd& step, double t, QField& out) const {
        out.q11 = q.q11;
        out.q12 = q.q12;
        const auto& interior = mesh_->interior_nodes();
        for (std::size_t k = 0; k < interior.size(); ++k) {
            out.q11[interior[k]] += t * step[2 * k];
            out.q12[interior[k]] += t * step[2 * k + 1];
        }
    }

    // One pass over the triangles: residual always, Jacobian values when jac != nullptr.
    void assemble(const QField& q, const ReducedParams& p, Eigen::VectorXd& r, SparseMatrix* jac) const {
        const auto& m = *mesh_;
        r.setZero(n_dofs_);
        double* values = nullptr;
        if (jac != nullptr) {
            values = jac->valuePtr();
            std::fill(values, values + jac->nonZeros(), 0.0);
        }
        const auto& rule = kDegree4Rule;
        for (std::size_t t = 0; t < m.triangle_count(); ++t) {
            const auto& tri = m.triangles()[t];
            const auto& k = stiffness_[t];
            const double area = m.geometry()[t].area;
            const std::array<double, 3> u{q.q11[tri[0]], q.q11[tri[1]], q.q11[tri[2]]};
            const std::array<double, 3> v{q.q12[tri[0]], q.q12[tri[1]], q.q12[tri[2]]};

            double res[3][2] = {};
            double mass[3][3][2][2] = {};
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    res[a][0] += p.alpha * k[a][b] * u[b];
                    res[a][1] += p.alpha * k[a][b] * v[b];
                }
            }
            for (std::size_t s = 0; s < rule.weights.size(); ++s) {
                const auto& lam = rule.points[s];
                const double w = area * rule.weights[s];
                const double uq = lam[0] * u[0] + lam[1] * u[1] + lam[2] * u[2];
                const double vq = lam[0] * v[0] + lam[1] * v[1] + lam[2] * v[2];
                const double bulk = uq * uq + vq * vq - p.beta;
                for (int a = 0; a < 3; ++a) {
                    res[a][0] += w * bulk * uq * lam[a];
                    res[a][1] += w * bulk * vq * lam[a];
                }
                if (values == nullptr) continue;
                const double d11 = 3.0 * uq * uq + vq * vq - p.beta;
                const double d12 = 2.0 * uq * vq;
                const double d22 = uq * uq + 3.0 * vq * vq - p.beta;
                for (int a = 0; a < 3; ++a) {
                    for (int b = 0; b < 3; ++b) {
                        const double ww = w * lam[a] * lam[b];
                        mass[a][b][0][0] += ww * d11;
                        mass[a][b][0][1] += ww * d12;
                        mass[a][b][1][0] += ww * d12;
                        mass[a][b][1][1] += ww * d22;
                    }
                }
            }

            for (int a = 0; a < 3; ++a) {
                const int ra = m.dof(tri[a]);
                if (ra < 0) continue;
                r[2 * ra] += res[a][0];
                r[2 * ra + 1] += res[a][1];
                if (values == nullptr) continue;
                for (int b = 0; b < 3; ++b) {
                    const int base = static_cast<int>(36 * t) + 12 * a + 4 * b;
                    if (scatter_[base] < 0) continue;
                    for (int c = 0; c < 2; ++c) {
                        for (int d = 0; d < 2; ++d) {
                            const double diffusion = (c == d) ? p.alpha * k[a][b] : 0.0;
                            values[scatter_[base + 2 * c + d]] += diffusion + mass[a][b][c][d];
                        }
                    }
                }
            }
        }
    }

    bool solve_linear(const SparseMatrix& jac, const Eigen::VectorXd& r, const SolverConfig& cfg,
                      Eigen::VectorXd& step) {
        const double r_norm = r.norm();
        auto acceptable = [&](const Eigen::VectorXd& x) {
            return x.allFinite() && (jac * x + r).norm() <= 1e-8 * std::max(r_norm, 1e-300);
        };

        if (cfg.linear_solver == LinearSolverKind::ConjugateGradient) {
            Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
            cg.setTolerance(cfg.cg_tol);
            cg.compute(jac);
            step = cg.solve(-r);
            if (cg.info() == Eigen::Success && step.allFinite()) return true;
            // CG needs a positive definite Jacobian; fall through to the direct path.
        }

        if (!ldlt_analyzed_) {
            ldlt_.analyzePattern(jac);
            ldlt_analyzed_ = true;
        }
        ldlt_.factorize(jac);
        if (ldlt_.info() == Eigen::Success) {
            step = ldlt_.solve(-r);
            if (acceptable(step)) return true;
        }

        // Symmetric indefinite Jacobians near bifurcations can defeat LDL^T without pivoting.
        Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) return false;
        step = lu.solve(-r);
        return acceptable(step);
    }

    std::shared_ptr<const Mesh> mesh_;
    BCSpec bc_;
    Eigen::Index n_dofs_ = 0;
    std::vector<std::array<std::array<double, 3>, 3>> stiffness_;
    SparseMatrix jacobian_;
    std::vector<int> scatter_;
    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
    bool ldlt_analyzed_ = false;
};

// -----------------------------------------------------------------------------
// Seeds and branch classification
// -----------------------------------------------------------------------------

/// Deterministic initial field for a named branch; boundary nodes carry the BC.
inline QField branch_seed(const BranchSeed& seed, std::shared_ptr<const Mesh> mesh, const BCSpec& bc) {
    if (seed.kind == BranchKind::FromField) {
        require(seed.field.has_value(), "branch_seed: FromField requires a field");
        require(seed.field->size() == mesh->node_count(), "branch_seed: field size does not match the mesh");
        QField q = *seed.field;
        q.mesh = mesh;
        q.impose(bc);
        return q;
    }
    constexpr double pi = std::numbers::pi;
    QField q(mesh);
    for (std::size_t i = 0; i < mesh->node_count(); ++i) {
        const auto [x, y] = mesh->nodes()[i];
        QValue v{};
        switch (seed.kind) {
            case BranchKind::D1: v = q_from_director(1.0, pi / 4.0); break;
            case BranchKind::D2: v = q_from_director(1.0, -pi / 4.0); break;
            case BranchKind::R1: v = q_from_director(1.0, pi * y); break;
            case BranchKind::R2: v = q_from_director(1.0, -pi * y); break;
            case BranchKind::R3: v = q_from_director(1.0, pi * x + pi / 2.0); break;
            case BranchKind::R4: v = q_from_director(1.0, -pi * x + pi / 2.0); break;
            case BranchKind::WORS: v = {-4.0 * (x - y) * (x + y - 1.0), 0.0}; break;
            case BranchKind::FromField: break;
        }
        q.set(static_cast<int>(i), v);
    }
    q.impose(bc);
    return q;
}

/// Field equal to the boundary data's natural interior extension (vortex BC
/// only): the unit radial field about the vortex centre.
inline QField vortex_extension_seed(std::shared_ptr<const Mesh> mesh, const BCSpec& bc) {
    require(bc.kind() == BCSpec::Kind::Vortex, "vortex_extension_seed: requires a vortex BC");
    QField q(mesh);
    for (std::size_t i = 0; i < mesh->node_count(); ++i) {
        const auto [x, y] = mesh->nodes()[i];
        q.set(static_cast<int>(i), bc.vortex_field(x, y));
    }
    q.impose(bc);
    return q;
}

/// Splay-vertex classification. At the interior node nearest each corner the
/// sign of Q12 tells whether the director points into the corner (splay) or
/// across it (bend). Diagonal solutions splay at two opposite corners, rotated
/// ones at two corners sharing an edge.
inline BranchClass classify_branch(const QField& q, double q12_threshold = 1e-3) {
    const auto& m = *q.mesh;
    // Corners in order (0,0), (1,0), (1,1), (0,1); +1 where the diagonal
    // through the corner has slope +1.
    constexpr std::array<std::array<double, 2>, 4> corners{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    constexpr std::array<double, 4> slope{1.0, -1.0, 1.0, -1.0};

    std::array<bool, 4> splay{};
    int count = 0;
    for (int c = 0; c < 4; ++c) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int node : m.interior_nodes()) {
            const auto& p = m.nodes()[node];
            const double d = std::hypot(p.x - corners[c][0], p.y - corners[c][1]);
            if (d < best_d) {
                best_d = d;
                best = node;
            }
        }
        const double q12 = q.q12[best];
        if (std::abs(q12) < q12_threshold) return BranchClass::Other;
        splay[c] = q12 * slope[c] > 0.0;
        count += splay[c] ? 1 : 0;
    }
    if (count != 2) return BranchClass::Other;
    const bool opposite = (splay[0] && splay[2]) || (splay[1] && splay[3]);
    return opposite ? BranchClass::Diagonal : BranchClass::Rotated;
}

// -----------------------------------------------------------------------------
// Free-function entry points
// -----------------------------------------------------------------------------

inline Eigen::VectorXd residual(const QField& q, double alpha, double beta, std::shared_ptr<const Mesh> mesh,
                                const BCSpec& bc) {
    return DiscreteProblem(std::move(mesh), bc).residual(q, {alpha, beta});
}

inline SparseMatrix jacobian(const QField& q, double alpha, double beta, std::shared_ptr<const Mesh> mesh,
                             const BCSpec& bc) {
    return DiscreteProblem(std::move(mesh), bc).jacobian(q, {alpha, beta});
}

inline SolveReport newton_solve(QField seed, double alpha, double beta, std::shared_ptr<const Mesh> mesh,
                                const BCSpec& bc, const SolverConfig& cfg = {}) {
    DiscreteProblem problem(std::move(mesh), bc);
    return problem.newton_solve(std::move(seed), {alpha, beta}, cfg);
}

/// branch_seed followed by newton_solve, with the corner classification attached.
inline SolveReport solve_branch(DiscreteProblem& problem, const BranchSeed& seed, const ReducedParams& p,
                                const SolverConfig& cfg = {}) {
    auto report = problem.newton_solve(branch_seed(seed, problem.mesh_ptr(), problem.bc()), p, cfg);
    report.branch_class = classify_branch(report.solution);
    const auto expected = expected_class(seed.kind);
    report.branch_mismatch = expected.has_value() && *expected != report.branch_class;
    return report;
}

inline SolveReport solve_branch(const BranchSeed& seed, double alpha, double beta, std::shared_ptr<const Mesh> mesh,
                                const BCSpec& bc, const SolverConfig& cfg = {}) {
    DiscreteProblem problem(std::move(mesh), bc);
    return solve_branch(problem, seed, {alpha, beta}, cfg);
}

}  // namespace ldg
