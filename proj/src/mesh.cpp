#include "specshape/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specshape/errors.hpp"

namespace specshape {

namespace {

int ring_size(int i) { return i == 0 ? 1 : 6 * i; }
int ring_offset(int i) { return i == 0 ? 0 : 1 + 3 * i * (i - 1); }

void check_triangles(const TriangleMesh& mesh, double scale) {
  const double min_area = 1e-14 * scale * scale;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (!(mesh.signed_area(t) > min_area)) {
      throw Error(ErrorCode::DegenerateTriangle,
                  "triangle " + std::to_string(t) + " has non-positive or tiny area");
    }
  }
}

}  // namespace

double TriangleMesh::signed_area(std::size_t triangle) const {
  const auto& t = triangles[triangle];
  const Point2& a = nodes[t[0]];
  const Point2& b = nodes[t[1]];
  const Point2& c = nodes[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

TriangleMesh generate_mesh(const BoundaryShape& shape, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "refinement level must be >= 1");
  TriangleMesh mesh;
  mesh.refinement_level = n;
  const int count = 1 + 3 * n * (n + 1);
  mesh.nodes.reserve(static_cast<std::size_t>(count));

  double scale = 0.0;
  mesh.nodes.push_back({0.0, 0.0});
  for (int i = 1; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    for (int j = 0; j < ring_size(i); ++j) {
      const double theta = kTwoPi * j / ring_size(i);
      const double r = shape.radius(theta);
      scale = std::max(scale, r);
      mesh.nodes.push_back({s * r * std::cos(theta), s * r * std::sin(theta)});
    }
  }

  mesh.triangles.reserve(static_cast<std::size_t>(6 * n * n));
  for (int j = 0; j < 6; ++j) {
    mesh.triangles.push_back({0, ring_offset(1) + j, ring_offset(1) + (j + 1) % 6});
  }
  // Zipper between rings i-1 and i, advancing whichever ring has the smaller
  // next angle; the comparison is done in integers so the pattern repeats
  // exactly in each of the six sectors.
  for (int i = 2; i <= n; ++i) {
    const int a = ring_size(i - 1);
    const int b = ring_size(i);
    const int inner = ring_offset(i - 1);
    const int outer = ring_offset(i);
    int p = 0;
    int q = 0;
    while (p < a || q < b) {
      const bool take_outer = q < b && (p == a || static_cast<long>(q + 1) * a <= static_cast<long>(p + 1) * b);
      if (take_outer) {
        mesh.triangles.push_back({inner + p % a, outer + q, outer + (q + 1) % b});
        ++q;
      } else {
        mesh.triangles.push_back({inner + p, outer + q % b, inner + (p + 1) % a});
        ++p;
      }
    }
  }

  const int bn = ring_size(n);
  mesh.boundary_nodes.resize(static_cast<std::size_t>(bn));
  mesh.boundary_angles.resize(static_cast<std::size_t>(bn));
  for (int j = 0; j < bn; ++j) {
    mesh.boundary_nodes[j] = ring_offset(n) + j;
    mesh.boundary_angles[j] = kTwoPi * j / bn;
  }
  check_triangles(mesh, scale);
  return mesh;
}

TriangleMesh rectangle_mesh(double width, double height, int nx, int ny) {
  if (nx < 1 || ny < 1 || !(width > 0.0) || !(height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "rectangle mesh needs positive size and cell counts");
  }
  TriangleMesh mesh;
  mesh.refinement_level = std::max(nx, ny);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.nodes.push_back({width * i / nx, height * j / ny});
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      if ((i + j) % 2 == 0) {
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
      } else {
        mesh.triangles.push_back({v00, v10, v01});
        mesh.triangles.push_back({v10, v11, v01});
      }
    }
  }
  const double cx = 0.5 * width;
  const double cy = 0.5 * height;
  std::vector<std::pair<double, int>> boundary;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      if (i == 0 || j == 0 || i == nx || j == ny) {
        const Point2& p = mesh.nodes[id(i, j)];
        double a = std::atan2(p.y - cy, p.x - cx);
        if (a < 0.0) a += kTwoPi;
        boundary.emplace_back(a, id(i, j));
      }
    }
  }
  std::sort(boundary.begin(), boundary.end());
  for (const auto& [a, node] : boundary) {
    mesh.boundary_angles.push_back(a);
    mesh.boundary_nodes.push_back(node);
  }
  check_triangles(mesh, std::max(width, height));
  return mesh;
}

MeshStatistics mesh_statistics(const TriangleMesh& mesh) {
  MeshStatistics st;
  st.min_angle = kPi;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    st.total_area += mesh.signed_area(t);
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const Point2& a = mesh.nodes[tri[k]];
      const Point2& b = mesh.nodes[tri[(k + 1) % 3]];
      const Point2& c = mesh.nodes[tri[(k + 2) % 3]];
      const double ux = b.x - a.x, uy = b.y - a.y;
      const double wx = c.x - a.x, wy = c.y - a.y;
      st.h_max = std::max(st.h_max, std::hypot(ux, uy));
      const double angle = std::atan2(std::abs(ux * wy - uy * wx), ux * wx + uy * wy);
      st.min_angle = std::min(st.min_angle, angle);
    }
  }
  return st;
}

nlohmann::json to_json(const TriangleMesh& mesh) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& p : mesh.nodes) nodes.push_back({p.x, p.y});
  nlohmann::json tris = nlohmann::json::array();
  for (const auto& t : mesh.triangles) tris.push_back({t[0], t[1], t[2]});
  return nlohmann::json{{"refinement_level", mesh.refinement_level},
                        {"nodes", std::move(nodes)},
                        {"triangles", std::move(tris)},
                        {"boundary", mesh.boundary_nodes},
                        {"boundary_angles", mesh.boundary_angles}};
}

}  // namespace specshape
