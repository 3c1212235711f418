#pragma once

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "ldg/mesh.hpp"
#include "ldg/qfield.hpp"

namespace ldg {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Triangle quadrature in barycentric coordinates; weights sum to one and are
/// scaled by the triangle area at use.
template <std::size_t N>
struct TriangleRule {
    std::array<std::array<double, 3>, N> points;
    std::array<double, N> weights;
};

/// Six-point rule, exact for polynomials of degree 4 (Strang-Fix / Dunavant).
inline constexpr TriangleRule<6> kDegree4Rule = [] {
    constexpr double a1 = 0.445948490915964886;
    constexpr double b1 = 1.0 - 2.0 * a1;
    constexpr double w1 = 0.223381589678011466;
    constexpr double a2 = 0.091576213509770743;
    constexpr double b2 = 1.0 - 2.0 * a2;
    constexpr double w2 = 0.109951743655321868;
    TriangleRule<6> r{};
    r.points = {{{a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1}, {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}}};
    r.weights = {w1, w1, w1, w2, w2, w2};
    return r;
}();

/// Element stiffness K_T[a][b] = area * grad(phi_a) . grad(phi_b).
inline std::array<std::array<double, 3>, 3> local_stiffness(const TriangleGeometry& g) {
    std::array<std::array<double, 3>, 3> k{};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            k[a][b] = g.area * (g.grad[a].x * g.grad[b].x + g.grad[a].y * g.grad[b].y);
        }
    }
    return k;
}

/// Global P1 stiffness matrix over all nodes (boundary rows included).
inline SparseMatrix assemble_stiffness(const Mesh& mesh) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(9 * mesh.triangle_count());
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const auto k = local_stiffness(mesh.geometry()[t]);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                triplets.emplace_back(tri[a], tri[b], k[a][b]);
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(mesh.node_count());
    SparseMatrix k(n, n);
    k.setFromTriplets(triplets.begin(), triplets.end());
    return k;
}

/// Integrals of (|Q_h|^2 - beta) Q11_h phi_i and (|Q_h|^2 - beta) Q12_h phi_i
/// over the support of node i.
inline std::array<double, 2> quadrature_nonlinear(const Mesh& mesh, const QField& q, double beta, int test_index) {
    std::array<double, 2> out{0.0, 0.0};
    for (int t : mesh.triangles_of(test_index)) {
        const auto& tri = mesh.triangles()[t];
        const double area = mesh.geometry()[t].area;
        int local = 0;
        while (tri[local] != test_index) ++local;
        for (std::size_t k = 0; k < kDegree4Rule.weights.size(); ++k) {
            const auto& lam = kDegree4Rule.points[k];
            double q11 = 0.0;
            double q12 = 0.0;
            for (int a = 0; a < 3; ++a) {
                q11 += lam[a] * q.q11[tri[a]];
                q12 += lam[a] * q.q12[tri[a]];
            }
            const double bulk = q11 * q11 + q12 * q12 - beta;
            const double w = area * kDegree4Rule.weights[k] * lam[local];
            out[0] += w * bulk * q11;
            out[1] += w * bulk * q12;
        }
    }
    return out;
}

}  // namespace ldg
