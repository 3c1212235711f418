#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ldg/errors.hpp"

namespace ldg {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

using Triangle = std::array<int, 3>;

/// Per-triangle P1 data: area and the constant gradients of the three
/// barycentric (hat) functions.
struct TriangleGeometry {
    double area = 0.0;
    std::array<Point2, 3> grad{};
};

/// Conforming triangulation of the unit square with P1 geometry cached.
///
/// Immutable after construction. Triangles are stored counter-clockwise; the
/// boundary set is every node with a coordinate equal to 0 or 1 (within 1e-12).
class Mesh {
  public:
    static constexpr double kBoundaryTol = 1e-12;

    Mesh(std::vector<Point2> nodes, std::vector<Triangle> triangles, int structured_n = 0)
        : nodes_(std::move(nodes)), triangles_(std::move(triangles)), structured_n_(structured_n) {
        require(nodes_.size() >= 3, "mesh needs at least three nodes");
        require(!triangles_.empty(), "mesh needs at least one triangle");
        const int n_nodes = static_cast<int>(nodes_.size());

        geometry_.reserve(triangles_.size());
        node_triangles_.assign(nodes_.size(), {});
        for (std::size_t t = 0; t < triangles_.size(); ++t) {
            const auto& tri = triangles_[t];
            for (int v : tri) {
                require(v >= 0 && v < n_nodes, "triangle references a node out of range");
                node_triangles_[v].push_back(static_cast<int>(t));
            }
            const Point2& a = nodes_[tri[0]];
            const Point2& b = nodes_[tri[1]];
            const Point2& c = nodes_[tri[2]];
            const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
            require(det > 0.0, "triangle " + std::to_string(t) + " has non-positive area");

            TriangleGeometry g;
            g.area = 0.5 * det;
            // grad lambda_k = rot90(opposite edge) / det
            g.grad[0] = {(b.y - c.y) / det, (c.x - b.x) / det};
            g.grad[1] = {(c.y - a.y) / det, (a.x - c.x) / det};
            g.grad[2] = {(a.y - b.y) / det, (b.x - a.x) / det};
            geometry_.push_back(g);

            const double e0 = std::hypot(b.x - a.x, b.y - a.y);
            const double e1 = std::hypot(c.x - b.x, c.y - b.y);
            const double e2 = std::hypot(a.x - c.x, a.y - c.y);
            h_ = std::max({h_, e0, e1, e2});
        }

        is_boundary_.assign(nodes_.size(), false);
        dof_.assign(nodes_.size(), -1);
        for (int i = 0; i < n_nodes; ++i) {
            const auto [x, y] = nodes_[i];
            const bool on_edge = std::abs(x) <= kBoundaryTol || std::abs(x - 1.0) <= kBoundaryTol ||
                                 std::abs(y) <= kBoundaryTol || std::abs(y - 1.0) <= kBoundaryTol;
            is_boundary_[i] = on_edge;
            if (on_edge) {
                boundary_nodes_.push_back(i);
            } else {
                dof_[i] = static_cast<int>(interior_nodes_.size());
                interior_nodes_.push_back(i);
            }
        }
    }

    [[nodiscard]] const std::vector<Point2>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
    [[nodiscard]] const std::vector<TriangleGeometry>& geometry() const noexcept { return geometry_; }
    [[nodiscard]] const std::vector<int>& boundary_nodes() const noexcept { return boundary_nodes_; }
    [[nodiscard]] const std::vector<int>& interior_nodes() const noexcept { return interior_nodes_; }
    [[nodiscard]] const std::vector<int>& triangles_of(int node) const { return node_triangles_.at(node); }

    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t triangle_count() const noexcept { return triangles_.size(); }
    [[nodiscard]] bool is_boundary(int node) const { return is_boundary_.at(node); }

    /// Interior unknown index of a node, or -1 for boundary nodes.
    [[nodiscard]] int dof(int node) const { return dof_.at(node); }

    /// Maximal element diameter (longest edge over all triangles).
    [[nodiscard]] double h() const noexcept { return h_; }

    /// Subdivisions per side for meshes built by build_unit_square_mesh, 0 otherwise.
    [[nodiscard]] int structured_n() const noexcept { return structured_n_; }

    /// Index of the node closest to (x, y).
    [[nodiscard]] int nearest_node(double x, double y) const {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const double d = std::hypot(nodes_[i].x - x, nodes_[i].y - y);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        return best;
    }

  private:
    std::vector<Point2> nodes_;
    std::vector<Triangle> triangles_;
    std::vector<TriangleGeometry> geometry_;
    std::vector<std::vector<int>> node_triangles_;
    std::vector<bool> is_boundary_;
    std::vector<int> boundary_nodes_;
    std::vector<int> interior_nodes_;
    std::vector<int> dof_;
    double h_ = 0.0;
    int structured_n_ = 0;
};

/// Structured mesh of n x n cells, each cut along its (0,0)-(1,1) diagonal.
/// Nodes are ordered lexicographically by (y, x): node (i, j) sits at
/// (i/n, j/n) with index j*(n+1) + i.
inline Mesh build_unit_square_mesh(int n) {
    require(n >= 2, "build_unit_square_mesh: n must be at least 2, got " + std::to_string(n));
    const int stride = n + 1;
    std::vector<Point2> nodes;
    nodes.reserve(static_cast<std::size_t>(stride) * stride);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            nodes.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
        }
    }
    std::vector<Triangle> triangles;
    triangles.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int a = j * stride + i;
            const int b = a + 1;
            const int c = a + stride + 1;
            const int d = a + stride;
            triangles.push_back({a, b, c});
            triangles.push_back({a, c, d});
        }
    }
    return Mesh(std::move(nodes), std::move(triangles), n);
}

// -----------------------------------------------------------------------------
// CSV persistence: nodes file (index,x,y,is_boundary), triangles file (i,j,k)
// -----------------------------------------------------------------------------

inline void write_mesh_csv(const Mesh& mesh, const std::string& nodes_path, const std::string& triangles_path) {
    std::ofstream nodes_out(nodes_path);
    require(nodes_out.good(), "cannot open " + nodes_path + " for writing");
    nodes_out.precision(17);
    nodes_out << "index,x,y,is_boundary\n";
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        const auto& p = mesh.nodes()[i];
        nodes_out << i << ',' << p.x << ',' << p.y << ',' << (mesh.is_boundary(static_cast<int>(i)) ? 1 : 0)
                  << '\n';
    }
    std::ofstream tri_out(triangles_path);
    require(tri_out.good(), "cannot open " + triangles_path + " for writing");
    tri_out << "i,j,k\n";
    for (const auto& t : mesh.triangles()) {
        tri_out << t[0] << ',' << t[1] << ',' << t[2] << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

}  // namespace detail

inline Mesh read_mesh_csv(const std::string& nodes_path, const std::string& triangles_path) {
    std::ifstream nodes_in(nodes_path);
    require(nodes_in.good(), "cannot open " + nodes_path);
    std::string line;
    std::getline(nodes_in, line);  // header
    std::vector<Point2> nodes;
    while (std::getline(nodes_in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        require(f.size() >= 3, "malformed node row: " + line);
        require(std::stoul(f[0]) == nodes.size(), "node indices must be consecutive from 0");
        nodes.push_back({std::stod(f[1]), std::stod(f[2])});
    }
    std::ifstream tri_in(triangles_path);
    require(tri_in.good(), "cannot open " + triangles_path);
    std::getline(tri_in, line);
    std::vector<Triangle> triangles;
    while (std::getline(tri_in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        require(f.size() == 3, "malformed triangle row: " + line);
        triangles.push_back({std::stoi(f[0]), std::stoi(f[1]), std::stoi(f[2])});
    }
    return Mesh(std::move(nodes), std::move(triangles));
}

}  // namespace ldg
