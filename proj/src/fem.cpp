#include "specshape/fem.hpp"

#include <cmath>

#include "specshape/errors.hpp"

namespace specshape {

ElementMatrices element_matrices(const Point2& a, const Point2& b, const Point2& c) {
  const double area2 = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  if (!(area2 > 0.0)) throw Error(ErrorCode::DegenerateTriangle, "element with non-positive area");
  const double area = 0.5 * area2;
  // grad psi_i = (y_j - y_k, x_k - x_j) / (2A) for cyclic (i, j, k).
  const std::array<double, 3> gx{b.y - c.y, c.y - a.y, a.y - b.y};
  const std::array<double, 3> gy{c.x - b.x, a.x - c.x, b.x - a.x};
  ElementMatrices e;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      e.stiffness(i, j) = (gx[i] * gx[j] + gy[i] * gy[j]) / (4.0 * area);
      e.mass(i, j) = area / 12.0 * (i == j ? 2.0 : 1.0);
    }
  }
  return e;
}

Eigen::VectorXd DirichletSystem::expand(const Eigen::VectorXd& interior) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(node_to_interior.size()));
  for (int i = 0; i < interior_count(); ++i) full[interior_nodes[i]] = interior[i];
  return full;
}

DirichletSystem assemble(const TriangleMesh& mesh) {
  const int n = mesh.node_count();
  DirichletSystem sys;
  sys.refinement_level = mesh.refinement_level;
  sys.boundary_nodes = mesh.boundary_nodes;
  sys.boundary_angles = mesh.boundary_angles;

  std::vector<Eigen::Triplet<double>> kt;
  std::vector<Eigen::Triplet<double>> mt;
  kt.reserve(mesh.triangles.size() * 9);
  mt.reserve(mesh.triangles.size() * 9);
  for (const auto& t : mesh.triangles) {
    const ElementMatrices e = element_matrices(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]);
    sys.area += e.mass.sum();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(t[i], t[j], e.stiffness(i, j));
        mt.emplace_back(t[i], t[j], e.mass(i, j));
      }
    }
  }
  sys.stiffness_full.resize(n, n);
  sys.mass_full.resize(n, n);
  sys.stiffness_full.setFromTriplets(kt.begin(), kt.end());
  sys.mass_full.setFromTriplets(mt.begin(), mt.end());

  sys.node_to_interior.assign(static_cast<std::size_t>(n), 0);
  for (int b : mesh.boundary_nodes) sys.node_to_interior[b] = -1;
  for (int v = 0; v < n; ++v) {
    if (sys.node_to_interior[v] == 0) {
      sys.node_to_interior[v] = static_cast<int>(sys.interior_nodes.size());
      sys.interior_nodes.push_back(v);
    }
  }

  std::vector<Eigen::Triplet<double>> ki;
  std::vector<Eigen::Triplet<double>> mi;
  auto restrict = [&](const SparseMatrix& full, std::vector<Eigen::Triplet<double>>& out) {
    for (int col = 0; col < full.outerSize(); ++col) {
      const int cj = sys.node_to_interior[col];
      if (cj < 0) continue;
      for (SparseMatrix::InnerIterator it(full, col); it; ++it) {
        const int ri = sys.node_to_interior[it.row()];
        if (ri >= 0) out.emplace_back(ri, cj, it.value());
      }
    }
  };
  restrict(sys.stiffness_full, ki);
  restrict(sys.mass_full, mi);
  const int m = sys.interior_count();
  sys.stiffness.resize(m, m);
  sys.mass.resize(m, m);
  sys.stiffness.setFromTriplets(ki.begin(), ki.end());
  sys.mass.setFromTriplets(mi.begin(), mi.end());

  const std::size_t nb = mesh.boundary_nodes.size();
  sys.boundary_points.resize(nb);
  sys.boundary_weights.assign(nb, 0.0);
  for (std::size_t i = 0; i < nb; ++i) sys.boundary_points[i] = mesh.nodes[mesh.boundary_nodes[i]];
  for (std::size_t i = 0; i < nb; ++i) {
    const Point2& p = sys.boundary_points[i];
    const Point2& q = sys.boundary_points[(i + 1) % nb];
    const double len = std::hypot(q.x - p.x, q.y - p.y);
    sys.boundary_weights[i] += 0.5 * len;
    sys.boundary_weights[(i + 1) % nb] += 0.5 * len;
  }
  return sys;
}

}  // namespace specshape
