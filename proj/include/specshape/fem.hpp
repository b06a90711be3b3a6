#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

#include "specshape/mesh.hpp"

namespace specshape {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct ElementMatrices {
  Eigen::Matrix3d stiffness;
  Eigen::Matrix3d mass;
};

/// Exact P1 integrals on one triangle: int grad(psi_i).grad(psi_j) and int psi_i psi_j.
ElementMatrices element_matrices(const Point2& a, const Point2& b, const Point2& c);

/// P1 Dirichlet Laplacian. The unreduced matrices keep the boundary rows,
/// which flux recovery needs.
struct DirichletSystem {
  SparseMatrix stiffness_full;
  SparseMatrix mass_full;
  SparseMatrix stiffness;  // interior rows/columns only
  SparseMatrix mass;

  std::vector<int> interior_nodes;    // interior index -> node
  std::vector<int> node_to_interior;  // node -> interior index, -1 on the boundary

  std::vector<int> boundary_nodes;
  std::vector<double> boundary_angles;
  std::vector<Point2> boundary_points;
  /// Lumped boundary mass w_i = int_{dOmega} psi_i ds (half the adjacent edge lengths).
  std::vector<double> boundary_weights;

  double area = 0.0;
  int refinement_level = 0;

  int interior_count() const { return static_cast<int>(interior_nodes.size()); }
  int boundary_count() const { return static_cast<int>(boundary_nodes.size()); }

  /// Interior coefficients padded with zeros on the boundary.
  Eigen::VectorXd expand(const Eigen::VectorXd& interior) const;
};

DirichletSystem assemble(const TriangleMesh& mesh);

}  // namespace specshape
