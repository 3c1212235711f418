#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ldg/forward.hpp"
#include "oracles.hpp"

using namespace ldg;

namespace {

std::shared_ptr<const Mesh> mesh(int n) { return std::make_shared<const Mesh>(build_unit_square_mesh(n)); }

QField random_field(std::shared_ptr<const Mesh> m, std::mt19937_64& rng, const BCSpec& bc) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    QField q(m);
    for (std::size_t i = 0; i < q.size(); ++i) {
        q.q11[i] = u(rng);
        q.q12[i] = u(rng);
    }
    q.impose(bc);
    return q;
}

// Shared benchmark solutions on the 32x32 mesh.
struct Benchmark {
    std::shared_ptr<const Mesh> m = mesh(32);
    BCSpec bc = tangent_bc(0.06);
    SolveReport d1 = solve_branch(BranchSeed::named(BranchKind::D1), 0.004, 1.0, m, bc);
    SolveReport r4 = solve_branch(BranchSeed::named(BranchKind::R4), 0.004, 1.0, m, bc);
};

const Benchmark& bench() {
    static const Benchmark b;
    return b;
}

}  // namespace

TEST(Residual, ConstantMinimumIsExactSolution) {
    const double beta = 0.64;
    const auto m = mesh(8);
    const auto bc = tangent_bc(0.06);
    QField q(m);
    std::fill(q.q11.begin(), q.q11.end(), std::sqrt(beta));
    // Boundary values equal to the constant, so the Dirichlet data match.
    EXPECT_LT(residual(q, 0.01, beta, m, bc).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Residual, MatchesDenseHighOrderOracle) {
    std::mt19937_64 rng(42);
    const auto m = mesh(5);
    const auto bc = tangent_bc(0.06);
    DiscreteProblem p(m, bc);
    for (int trial = 0; trial < 5; ++trial) {
        const auto q = random_field(m, rng, bc);
        const double alpha = 0.001 + 0.1 * trial, beta = 0.3 + 0.2 * trial;
        const auto r = p.residual(q, {alpha, beta});
        const auto ref = oracle::dense_residual(q, alpha, beta);
        EXPECT_LT((r - ref).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Jacobian, FiniteDifferenceConsistency) {
    std::mt19937_64 rng(1);
    const auto m = mesh(6);
    const auto bc = tangent_bc(0.06);
    DiscreteProblem p(m, bc);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 20; ++trial) {
        const auto q = random_field(m, rng, bc);
        const ReducedParams prm{0.002 + 0.01 * trial, 0.5 + 0.05 * trial};
        Eigen::VectorXd v(p.dofs());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = n(rng);
        const Eigen::VectorXd jv = p.jacobian(q, prm) * v;
        auto shifted = [&](double eps) {
            QField s = q;
            const auto& in = m->interior_nodes();
            for (std::size_t k = 0; k < in.size(); ++k) {
                s.q11[in[k]] += eps * v[2 * k];
                s.q12[in[k]] += eps * v[2 * k + 1];
            }
            return s;
        };
        auto central = [&](double eps) -> Eigen::VectorXd {
            return (p.residual(shifted(eps), prm) - p.residual(shifted(-eps), prm)) / (2.0 * eps);
        };
        const double eps = 1e-3;
        const double e1 = (central(eps) - jv).norm() / jv.norm();
        const double e2 = (central(eps / 2) - jv).norm() / jv.norm();
        EXPECT_LT(e1, 1e-5) << "trial " << trial;
        // Second-order error quarters with the step.
        EXPECT_NEAR(e2 / e1, 0.25, 0.02) << "trial " << trial;
    }
}

TEST(Jacobian, SymmetricAndBulkBlockAtOrigin) {
    std::mt19937_64 rng(9);
    const auto m = mesh(6);
    const auto bc = tangent_bc(0.06);
    DiscreteProblem p(m, bc);
    const auto q = random_field(m, rng, bc);
    const SparseMatrix j = p.jacobian(q, {0.01, 0.8});
    const SparseMatrix asym = j - SparseMatrix(j.transpose());
    EXPECT_LT(Eigen::MatrixXd(asym).cwiseAbs().maxCoeff(), 1e-10);

    // At Q = 0 the Jacobian is alpha K - beta M with no Q11/Q12 coupling.
    QField zero(m);
    const double alpha = 0.02, beta = 0.7;
    const SparseMatrix j0 = p.jacobian(zero, {alpha, beta});
    const SparseMatrix k = assemble_stiffness(*m);
    const auto& in = m->interior_nodes();
    for (std::size_t a = 0; a < in.size(); ++a) {
        for (std::size_t b = 0; b < in.size(); ++b) {
            const double kab = k.coeff(in[a], in[b]);
            const auto ia = static_cast<Eigen::Index>(2 * a), ib = static_cast<Eigen::Index>(2 * b);
            EXPECT_NEAR(j0.coeff(ia, ib + 1), 0.0, 1e-15);
            EXPECT_NEAR(j0.coeff(ia, ib), j0.coeff(ia + 1, ib + 1), 1e-15);
            // Mass matrix entries are nonnegative, so alpha K - J0 = beta M >= 0.
            EXPECT_GE(alpha * kab - j0.coeff(ia, ib), -1e-15);
        }
    }
    // Row sums of the mass matrix over the whole mesh equal node areas; on the
    // interior block they are bounded by the support area 6 * (h^2/2).
    const double cell = 1.0 / 36.0;
    EXPECT_NEAR(alpha * k.coeff(in[0], in[0]) - j0.coeff(0, 0), beta * cell / 2.0, 1e-14);
}

TEST(Newton, ConvergesQuadraticallyOnBenchmark) {
    const auto& r = bench().d1;
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.final_residual(), SolverConfig{}.residual_tol);
    const auto& h = r.residual_history;
    ASSERT_GE(h.size(), 4u);
    // Final contractions: log gaps grow by about a factor two.
    const std::size_t n = h.size();
    const double g1 = std::log10(h[n - 3] / h[n - 2]);
    const double g0 = std::log10(h[n - 4] / h[n - 3]);
    EXPECT_GT(g1, 1.5 * g0);
}

TEST(Newton, ConvergedSeedTakesAtMostOneIteration) {
    const auto& b = bench();
    DiscreteProblem p(b.m, b.bc);
    for (const auto* r : {&b.d1, &b.r4}) {
        const auto again = p.newton_solve(r->solution, {0.004, 1.0}, {});
        EXPECT_TRUE(again.converged);
        EXPECT_LE(again.iterations, 1);
    }
}

TEST(Newton, EdgeSignPatternOfDiagonalSolution) {
    const auto& r = bench().d1;
    const auto& m = *r.solution.mesh;
    EXPECT_GT(r.solution.q11[m.nearest_node(0.5, 1.0 / 32)], 0.0);
    EXPECT_GT(r.solution.q11[m.nearest_node(0.5, 1.0 - 1.0 / 32)], 0.0);
    EXPECT_LT(r.solution.q11[m.nearest_node(1.0 / 32, 0.5)], 0.0);
    EXPECT_LT(r.solution.q11[m.nearest_node(1.0 - 1.0 / 32, 0.5)], 0.0);
}

TEST(Newton, ReportsNonConvergence) {
    const auto m = mesh(8);
    SolverConfig cfg;
    cfg.max_iter = 1;
    const auto r = newton_solve(branch_seed(BranchSeed::named(BranchKind::D1), m, tangent_bc(0.06)), 0.004, 1.0, m,
                                tangent_bc(0.06), cfg);
    EXPECT_FALSE(r.converged);
    ASSERT_TRUE(r.failure.has_value());
    EXPECT_EQ(*r.failure, SolverError::Kind::NonConvergence);
}

TEST(Newton, RejectsInvalidInputs) {
    const auto m = mesh(4);
    QField q(m);
    EXPECT_THROW(newton_solve(q, -1.0, 1.0, m, tangent_bc(0.06)), ValidationError);
    SolverConfig bad;
    bad.residual_tol = 0.0;
    EXPECT_THROW(newton_solve(q, 0.01, 1.0, m, tangent_bc(0.06), bad), ValidationError);
}

TEST(Newton, ConjugateGradientPathAgreesWithDirect) {
    const auto m = mesh(12);
    const auto bc = tangent_bc(0.06);
    SolverConfig cg;
    cg.linear_solver = LinearSolverKind::ConjugateGradient;
    const auto a = solve_branch(BranchSeed::named(BranchKind::D1), 0.05, 1.0, m, bc);
    const auto b = solve_branch(BranchSeed::named(BranchKind::D1), 0.05, 1.0, m, bc, cg);
    ASSERT_TRUE(a.converged && b.converged);
    for (std::size_t i = 0; i < a.solution.size(); ++i) EXPECT_NEAR(a.solution.q11[i], b.solution.q11[i], 1e-8);
}

TEST(Seeds, NamedSeedValues) {
    const auto m = mesh(8);
    const auto bc = tangent_bc(0.06);
    const auto d1 = branch_seed(BranchSeed::named(BranchKind::D1), m, bc);
    const int c = m->nearest_node(0.5, 0.5);
    EXPECT_NEAR(d1.q11[c], 0.0, 1e-15);
    EXPECT_NEAR(d1.q12[c], 1.0, 1e-15);

    // R4 director angle changes by pi across x at fixed y.
    const auto r4 = branch_seed(BranchSeed::named(BranchKind::R4), m, bc);
    const auto left = director(r4, m->nearest_node(0.125, 0.5));
    const auto right = director(r4, m->nearest_node(0.875, 0.5));
    const double expected_turn = -std::numbers::pi * 0.75;
    double diff = right.theta - left.theta;
    // theta is defined modulo pi
    while (diff - expected_turn > std::numbers::pi / 2) diff -= std::numbers::pi;
    while (diff - expected_turn < -std::numbers::pi / 2) diff += std::numbers::pi;
    EXPECT_NEAR(diff, expected_turn, 1e-12);

    const auto w = branch_seed(BranchSeed::named(BranchKind::WORS), m, bc);
    for (int i : m->interior_nodes()) {
        const auto& p = m->nodes()[i];
        EXPECT_EQ(w.q12[i], 0.0);
        if (std::abs(p.x - p.y) < 1e-12 || std::abs(p.x + p.y - 1.0) < 1e-12) EXPECT_NEAR(w.q11[i], 0.0, 1e-15);
    }
}

TEST(Seeds, FromFieldRequiresMatchingField) {
    const auto m = mesh(4);
    EXPECT_THROW(branch_seed(BranchSeed{BranchKind::FromField, std::nullopt}, m, tangent_bc(0.06)), ValidationError);
    EXPECT_THROW(branch_seed(BranchSeed::from_field(QField(mesh(5))), m, tangent_bc(0.06)), ValidationError);
}

TEST(Branches, DiagonalAndRotatedClassify) {
    EXPECT_TRUE(bench().d1.converged);
    EXPECT_EQ(bench().d1.branch_class, BranchClass::Diagonal);
    EXPECT_FALSE(bench().d1.branch_mismatch);
    EXPECT_TRUE(bench().r4.converged);
    EXPECT_EQ(bench().r4.branch_class, BranchClass::Rotated);
    EXPECT_FALSE(bench().r4.branch_mismatch);
}

TEST(Branches, AllSixNamedSeedsLandOnTheirClass) {
    const auto& b = bench();
    DiscreteProblem p(b.m, b.bc);
    for (auto k : {BranchKind::D2, BranchKind::R1, BranchKind::R2, BranchKind::R3}) {
        const auto r = solve_branch(p, BranchSeed::named(k), {0.004, 1.0});
        EXPECT_TRUE(r.converged) << to_string(k);
        EXPECT_FALSE(r.branch_mismatch) << to_string(k);
    }
}

TEST(Branches, LargeAlphaGivesUniqueCrossSolution) {
    const auto& b = bench();
    const auto d = solve_branch(BranchSeed::named(BranchKind::D1), 10.0, 1.0, b.m, b.bc);
    const auto w = solve_branch(BranchSeed::named(BranchKind::WORS), 10.0, 1.0, b.m, b.bc);
    ASSERT_TRUE(d.converged && w.converged);
    double diff = 0.0;
    for (std::size_t i = 0; i < d.solution.size(); ++i) {
        diff = std::max(diff, std::abs(d.solution.q11[i] - w.solution.q11[i]) + std::abs(d.solution.q12[i] - w.solution.q12[i]));
    }
    EXPECT_LT(diff, 1e-6);
    EXPECT_EQ(d.branch_class, BranchClass::Other);
    EXPECT_TRUE(d.branch_mismatch);
}

TEST(Branches, DiagonalSolutionReflectionSymmetry) {
    // Under (x, y) -> (y, x) the tangent data map Q11 -> -Q11 and D1 is invariant
    // with Q12 unchanged.
    const auto& r = bench().d1;
    const auto& m = *r.solution.mesh;
    const int n = 32;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const int a = j * (n + 1) + i, b = i * (n + 1) + j;
            EXPECT_NEAR(r.solution.q11[a], -r.solution.q11[b], 1e-8);
            EXPECT_NEAR(r.solution.q12[a], r.solution.q12[b], 1e-8);
        }
    }
    (void)m;
}

TEST(Energy, NewtonSolutionIsStationary) {
    const auto& b = bench();
    DiscreteProblem p(b.m, b.bc);
    const double e0 = p.energy(b.d1.solution, {0.004, 1.0});
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n;
    QField pert = b.d1.solution;
    for (int i : b.m->interior_nodes()) {
        pert.q11[i] += 1e-4 * n(rng);
        pert.q12[i] += 1e-4 * n(rng);
    }
    EXPECT_GT(p.energy(pert, {0.004, 1.0}), e0);
}

TEST(SolverConfig, Validation) {
    SolverConfig c;
    EXPECT_NO_THROW(c.validate());
    c.max_iter = 0;
    EXPECT_THROW(c.validate(), ValidationError);
}
