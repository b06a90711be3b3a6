#pragma once

#include <array>
#include <vector>

#include "json.hpp"
#include "specshape/domain.hpp"

namespace specshape {

/// Conforming triangulation; triangles are counterclockwise and the boundary
/// list walks the boundary once in increasing parameter angle.
struct TriangleMesh {
  std::vector<Point2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_nodes;
  std::vector<double> boundary_angles;
  int refinement_level = 0;

  int node_count() const { return static_cast<int>(nodes.size()); }
  double signed_area(std::size_t triangle) const;
};

/// Reference unit-disk mesh with rings i = 0..n (ring i holds max(1, 6i)
/// nodes) mapped through (s, theta) -> s r(theta) (cos theta, sin theta).
/// The topology depends on n only.
TriangleMesh generate_mesh(const BoundaryShape& shape, int refinement_level);

/// Structured [0, width] x [0, height] mesh with alternating cell diagonals.
/// With even cell counts the mesh carries the full symmetry group of the
/// rectangle. Boundary parameter angles are measured about the center.
TriangleMesh rectangle_mesh(double width, double height, int cells_x, int cells_y);

struct MeshStatistics {
  double h_max = 0.0;
  double total_area = 0.0;
  /// Radians.
  double min_angle = 0.0;
};

MeshStatistics mesh_statistics(const TriangleMesh& mesh);

nlohmann::json to_json(const TriangleMesh& mesh);

}  // namespace specshape
