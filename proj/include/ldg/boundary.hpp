#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ldg/errors.hpp"
#include "ldg/mesh.hpp"

namespace ldg {

using QValue = std::array<double, 2>;

/// Trapezoidal shape function: t/d on [0,d], 1 on [d,1-d], (1-t)/d on [1-d,1].
inline double trapezoid(double t, double d) {
    if (t <= d) return t / d;
    if (t >= 1.0 - d) return (1.0 - t) / d;
    return 1.0;
}

/// Dirichlet data for (Q11, Q12) on the boundary of the unit square.
class BCSpec {
  public:
    enum class Kind { Tangent, Vortex };

    [[nodiscard]] static BCSpec tangent(double d) {
        require(d > 0.0 && d < 0.5, "tangent_bc: d must lie in (0, 1/2), got " + std::to_string(d));
        BCSpec bc;
        bc.kind_ = Kind::Tangent;
        bc.d_ = d;
        return bc;
    }

    [[nodiscard]] static BCSpec vortex(double a1, double a2) {
        require(a1 > 0.0 && a1 < 1.0 && a2 > 0.0 && a2 < 1.0,
                "vortex_bc: centre must lie strictly inside the unit square");
        BCSpec bc;
        bc.kind_ = Kind::Vortex;
        bc.a1_ = a1;
        bc.a2_ = a2;
        return bc;
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double d() const noexcept { return d_; }
    [[nodiscard]] double a1() const noexcept { return a1_; }
    [[nodiscard]] double a2() const noexcept { return a2_; }

    /// Boundary value at (x, y). Tangent data is only defined on the edges;
    /// on y = 0 and y = 1 the horizontal rule wins (both rules vanish at corners).
    [[nodiscard]] QValue operator()(double x, double y) const {
        if (kind_ == Kind::Tangent) {
            constexpr double tol = Mesh::kBoundaryTol;
            if (std::abs(y) <= tol || std::abs(y - 1.0) <= tol) return {trapezoid(x, d_), 0.0};
            if (std::abs(x) <= tol || std::abs(x - 1.0) <= tol) return {-trapezoid(y, d_), 0.0};
            throw ValidationError("tangent boundary data evaluated off the boundary");
        }
        return vortex_field(x, y);
    }

    /// Unit vector field pointing away from the vortex centre; zero at the centre.
    /// Defined everywhere, so it doubles as an interior extension.
    [[nodiscard]] QValue vortex_field(double x, double y) const {
        const double dx = x - a1_;
        const double dy = y - a2_;
        const double r = std::hypot(dx, dy);
        if (r < 1e-14) return {0.0, 0.0};
        return {dx / r, dy / r};
    }

  private:
    BCSpec() = default;

    Kind kind_ = Kind::Tangent;
    double d_ = 0.06;
    double a1_ = 0.25;
    double a2_ = 0.75;
};

inline BCSpec tangent_bc(double d) { return BCSpec::tangent(d); }
inline BCSpec vortex_bc(double a1, double a2) { return BCSpec::vortex(a1, a2); }

/// Nodal interpolation of the boundary data, aligned with mesh.boundary_nodes().
inline std::vector<QValue> interpolate_boundary(const Mesh& mesh, const BCSpec& bc) {
    std::vector<QValue> values;
    values.reserve(mesh.boundary_nodes().size());
    for (int node : mesh.boundary_nodes()) {
        const auto& p = mesh.nodes()[node];
        values.push_back(bc(p.x, p.y));
    }
    return values;
}

}  // namespace ldg
