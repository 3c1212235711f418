#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "ldg/mesh.hpp"
#include "ldg/qfield.hpp"

namespace oracle {

/// Gauss-Legendre nodes and weights on [0, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre01(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = 0.5 * (1.0 - z);
        w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

/// Integral over the triangle (p0, p1, p2) via the collapsed (Duffy) map and a
/// tensor Gauss-Legendre rule with `n` points per direction. `f` receives
/// barycentric coordinates.
inline double triangle_integral(const std::array<ldg::Point2, 3>& p,
                                const std::function<double(const std::array<double, 3>&)>& f, int n = 8) {
    const auto [x, w] = gauss_legendre01(n);
    const double area2 = std::abs((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y));
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double u = x[i];
            const double v = x[j] * (1.0 - u);
            s += w[i] * w[j] * (1.0 - u) * f({1.0 - u - v, u, v});
        }
    }
    return s * area2;
}

/// Residual of -alpha Lap Q + (|Q|^2 - beta) Q in weak form, assembled densely
/// node by node with the collapsed Gauss rule. Interior ordering and
/// interleaving match Mesh::interior_nodes().
inline Eigen::VectorXd dense_residual(const ldg::QField& q, double alpha, double beta) {
    const auto& m = *q.mesh;
    const auto& interior = m.interior_nodes();
    Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(interior.size()));
    for (std::size_t k = 0; k < interior.size(); ++k) {
        const int i = interior[k];
        for (std::size_t t = 0; t < m.triangle_count(); ++t) {
            const auto& tri = m.triangles()[t];
            const auto it = std::find(tri.begin(), tri.end(), i);
            if (it == tri.end()) continue;
            const int li = static_cast<int>(it - tri.begin());
            const std::array<ldg::Point2, 3> p{m.nodes()[tri[0]], m.nodes()[tri[1]], m.nodes()[tri[2]]};

            // Gradients of the hat functions from the inverse of the affine map.
            Eigen::Matrix3d v;
            for (int a = 0; a < 3; ++a) v.row(a) << 1.0, p[a].x, p[a].y;
            const Eigen::Matrix3d coeff = v.inverse();  // column a: (c0, cx, cy) of phi_a
            Eigen::Vector2d g11 = Eigen::Vector2d::Zero(), g12 = Eigen::Vector2d::Zero();
            for (int a = 0; a < 3; ++a) {
                const Eigen::Vector2d ga(coeff(1, a), coeff(2, a));
                g11 += q.q11[tri[a]] * ga;
                g12 += q.q12[tri[a]] * ga;
            }
            const Eigen::Vector2d gi(coeff(1, li), coeff(2, li));
            const double area = 0.5 * std::abs((p[1].x - p[0].x) * (p[2].y - p[0].y) -
                                               (p[2].x - p[0].x) * (p[1].y - p[0].y));
            r[2 * k] += alpha * area * g11.dot(gi);
            r[2 * k + 1] += alpha * area * g12.dot(gi);

            for (int c = 0; c < 2; ++c) {
                r[2 * k + c] += triangle_integral(p, [&](const std::array<double, 3>& lam) {
                    double a11 = 0.0, a12 = 0.0;
                    for (int a = 0; a < 3; ++a) {
                        a11 += lam[a] * q.q11[tri[a]];
                        a12 += lam[a] * q.q12[tri[a]];
                    }
                    const double bulk = a11 * a11 + a12 * a12 - beta;
                    return bulk * (c == 0 ? a11 : a12) * lam[li];
                });
            }
        }
    }
    return r;
}

/// Two-sample KS statistic by evaluating both ECDFs at every pooled point.
inline double ks_brute(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    for (double t : pooled) {
        double fa = 0.0, fb = 0.0;
        for (double v : a) fa += v <= t ? 1.0 : 0.0;
        for (double v : b) fb += v <= t ? 1.0 : 0.0;
        d = std::max(d, std::abs(fa / a.size() - fb / b.size()));
    }
    return d;
}

/// Second transcription of the Berreman matrix, written row by row from the
/// block form with the common factor 1/eps33 kept explicit.
inline Eigen::Matrix4d berreman(const Eigen::Matrix3d& e, double xi, double mu0, double c, double eps0) {
    const double inv33 = 1.0 / e(2, 2);
    Eigen::Matrix4d m;
    m.row(0) << -xi * e(2, 0) * inv33, mu0 * c * (1.0 - xi * xi * inv33), -xi * e(2, 1) * inv33, 0.0;
    m.row(1) << eps0 * c * (e(0, 0) - e(0, 2) * e(2, 0) * inv33), -xi * e(0, 2) * inv33,
        eps0 * c * (e(0, 1) - e(0, 2) * e(2, 1) * inv33), 0.0;
    m.row(2) << 0.0, 0.0, 0.0, mu0 * c;
    m.row(3) << eps0 * c * (e(1, 0) - e(1, 2) * e(2, 0) * inv33), -xi * e(1, 2) * inv33,
        eps0 * c * (e(1, 1) - e(1, 2) * e(2, 1) * inv33 - xi * xi), 0.0;
    return m;
}

}  // namespace oracle
