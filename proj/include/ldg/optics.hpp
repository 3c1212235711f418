#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "ldg/errors.hpp"

namespace ldg {

/// 3x3 symmetric dielectric tensor in units of the vacuum permittivity.
using DielectricTensor = Eigen::Matrix3d;

/// Lifts the reduced (Q11, Q12) to the full traceless 3x3 tensor with fixed
/// out-of-plane eigenvalue 2*q3.
inline Eigen::Matrix3d lift_to_3d(double q11, double q12, double q3) {
    Eigen::Matrix3d q;
    q << q11 - q3, q12, 0.0,
         q12, -q11 - q3, 0.0,
         0.0, 0.0, 2.0 * q3;
    return q;
}

/// eps = tr(eps)/3 I + (eps_par - eps_perp) Q.
inline DielectricTensor dielectric_from_q(const Eigen::Matrix3d& qf, double eps_par, double eps_perp, double tr_eps) {
    return (tr_eps / 3.0) * Eigen::Matrix3d::Identity() + (eps_par - eps_perp) * qf;
}

/// Deviatoric part of eps scaled by the anisotropy.
inline Eigen::Matrix3d q_from_dielectric(const DielectricTensor& eps, double eps_par, double eps_perp) {
    const double anisotropy = eps_par - eps_perp;
    require(anisotropy != 0.0, "q_from_dielectric: eps_par == eps_perp (degenerate anisotropy)");
    return (eps - (eps.trace() / 3.0) * Eigen::Matrix3d::Identity()) / anisotropy;
}

struct Stokes {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
};

/// Stokes parameters of the field (a cos(wt - kz), b cos(wt - kz + delta)).
inline Stokes stokes(double a, double b, double delta) {
    return {a * a + b * b, a * a - b * b, 2.0 * a * b * std::cos(delta), 2.0 * a * b * std::sin(delta)};
}

/// Berreman 4x4 propagation matrix acting on (Ex, Hy, Ey, -Hx).
inline Eigen::Matrix4d berreman_matrix(const DielectricTensor& eps, double xi, double mu0, double c, double eps0) {
    const double e11 = eps(0, 0), e12 = eps(0, 1), e13 = eps(0, 2);
    const double e22 = eps(1, 1), e23 = eps(1, 2), e33 = eps(2, 2);
    require(e33 != 0.0, "berreman_matrix: eps33 must be nonzero");

    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = -(e13 / e33) * xi;
    m(0, 1) = mu0 * c * (e33 - xi * xi) / e33;
    m(0, 2) = -(e23 / e33) * xi;

    m(1, 0) = eps0 * c * (e11 - e13 * e13 / e33);
    m(1, 1) = -(e13 / e33) * xi;
    m(1, 2) = eps0 * c * (e12 - e13 * e23 / e33);

    m(2, 3) = mu0 * c;

    m(3, 0) = eps0 * c * (e12 - e13 * e23 / e33);
    m(3, 1) = -(e23 / e33) * xi;
    m(3, 2) = eps0 * c * (e22 - e23 * e23 / e33 - xi * xi);
    return m;
}

}  // namespace ldg
