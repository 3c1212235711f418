#pragma once

#include <cmath>
#include <string>

#include "ldg/errors.hpp"

namespace ldg {

/// Dimensionless parameters of the rescaled system -alpha*Lap(Q) + (|Q|^2 - beta) Q = 0.
struct ReducedParams {
    double alpha = 0.0;  ///< L / (2 C lambda^2)
    double beta = 0.0;   ///< B^2 / (4 C^2) at the special temperature, |A| / (2C) otherwise

    [[nodiscard]] bool valid() const noexcept { return alpha > 0.0 && beta > 0.0; }
};

/// Physical Landau-de Gennes constants. SI units: L in J/m, A/B/C in J/m^3, lambda in m.
struct MaterialParams {
    double L = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double lambda = 0.0;
};

/// The special temperature A = -B^2/(3C) at which the 2D reduction lifts to exact 3D solutions.
inline double special_temperature(double B, double C) {
    require(C > 0.0, "special_temperature: C must be positive");
    return -B * B / (3.0 * C);
}

/// Reconstructs (L, B, C) from (alpha, beta) at the special temperature.
inline MaterialParams material_from_reduced(const ReducedParams& p, double lambda, double A) {
    require(A < 0.0, "material_from_reduced: temperature A must be negative");
    require(p.valid(), "material_from_reduced: alpha and beta must be positive");
    require(lambda > 0.0, "material_from_reduced: lambda must be positive");
    MaterialParams m;
    m.A = A;
    m.lambda = lambda;
    m.C = -3.0 * A / (4.0 * p.beta);
    m.B = std::sqrt(4.0 * m.C * m.C * p.beta);
    m.L = 2.0 * p.alpha * m.C * lambda * lambda;
    return m;
}

/// Inverse of material_from_reduced: alpha = L/(2 C lambda^2), beta = B^2/(4 C^2).
inline ReducedParams reduced_from_material(const MaterialParams& m) {
    require(m.C > 0.0 && m.lambda > 0.0, "reduced_from_material: C and lambda must be positive");
    return {m.L / (2.0 * m.C * m.lambda * m.lambda), m.B * m.B / (4.0 * m.C * m.C)};
}

struct ElasticBulkPair {
    double C = 0.0;
    double L = 0.0;
};

/// General low-temperature 2D case (B not identifiable): beta = |A|/(2C).
inline ElasticBulkPair material_from_reduced_general(const ReducedParams& p, double lambda, double A) {
    require(A < 0.0, "material_from_reduced_general: temperature A must be negative");
    require(p.valid(), "material_from_reduced_general: alpha and beta must be positive");
    const double C = std::abs(A) / (2.0 * p.beta);
    return {C, 2.0 * p.alpha * lambda * lambda * C};
}

inline ReducedParams reduced_from_material_general(const ElasticBulkPair& m, double lambda, double A) {
    require(m.C > 0.0 && lambda > 0.0, "reduced_from_material_general: C and lambda must be positive");
    return {m.L / (2.0 * lambda * lambda * m.C), std::abs(A) / (2.0 * m.C)};
}

}  // namespace ldg
