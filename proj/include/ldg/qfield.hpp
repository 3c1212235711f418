#pragma once

#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "ldg/boundary.hpp"
#include "ldg/errors.hpp"
#include "ldg/mesh.hpp"

namespace ldg {

/// Nodal values of the reduced order parameter (Q11, Q12) on a fixed mesh.
struct QField {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> q11;
    std::vector<double> q12;

    QField() = default;

    explicit QField(std::shared_ptr<const Mesh> m)
        : mesh(std::move(m)), q11(mesh->node_count(), 0.0), q12(mesh->node_count(), 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return q11.size(); }
    [[nodiscard]] QValue at(int node) const { return {q11.at(node), q12.at(node)}; }

    void set(int node, QValue v) {
        q11.at(node) = v[0];
        q12.at(node) = v[1];
    }

    /// Overwrites boundary nodes with nodal BC values.
    void impose(const BCSpec& bc) {
        for (int node : mesh->boundary_nodes()) {
            const auto& p = mesh->nodes()[node];
            set(node, bc(p.x, p.y));
        }
    }
};

struct Director {
    double s = 0.0;
    double theta = 0.0;   ///< radians, in (-pi/2, pi/2]
    bool defect = false;  ///< s below 1e-14; theta is then reported as 0
};

/// s = |Q|, theta = atan2(Q12, Q11) / 2.
inline Director director(QValue q) {
    Director d;
    d.s = std::hypot(q[0], q[1]);
    if (d.s < 1e-14) {
        d.defect = true;
        return d;
    }
    d.theta = 0.5 * std::atan2(q[1], q[0]);
    // atan2 returns (-pi, pi]; halving gives (-pi/2, pi/2]
    return d;
}

inline Director director(const QField& q, int node) { return director(q.at(node)); }

/// Q = s (cos 2theta, sin 2theta).
inline QValue q_from_director(double s, double theta) { return {s * std::cos(2.0 * theta), s * std::sin(2.0 * theta)}; }

// CSV columns: node_index,x,y,q11,q12

inline void write_qfield_csv(const QField& q, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open " + path + " for writing");
    out.precision(17);
    out << "node_index,x,y,q11,q12\n";
    for (std::size_t i = 0; i < q.size(); ++i) {
        const auto& p = q.mesh->nodes()[i];
        out << i << ',' << p.x << ',' << p.y << ',' << q.q11[i] << ',' << q.q12[i] << '\n';
    }
}

/// Reads a QField CSV onto `mesh`; node coordinates must agree within 1e-9.
inline QField read_qfield_csv(const std::string& path, std::shared_ptr<const Mesh> mesh) {
    std::ifstream in(path);
    require(in.good(), "cannot open " + path);
    QField q(mesh);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        require(f.size() == 5, "malformed QField row: " + line);
        const auto idx = std::stoul(f[0]);
        require(idx < mesh->node_count(), "QField node index out of range: " + f[0]);
        const auto& p = mesh->nodes()[idx];
        require(std::abs(p.x - std::stod(f[1])) < 1e-9 && std::abs(p.y - std::stod(f[2])) < 1e-9,
                "QField coordinates do not match the mesh at node " + f[0]);
        q.q11[idx] = std::stod(f[3]);
        q.q12[idx] = std::stod(f[4]);
        ++rows;
    }
    require(rows == mesh->node_count(), "QField row count does not match the mesh node count");
    return q;
}

}  // namespace ldg
