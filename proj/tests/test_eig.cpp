#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "specshape/eig.hpp"
#include "specshape/mesh.hpp"

using namespace specshape;
using testing::error_code;
using testing::rel;

namespace {

void check_pack_invariants(const DirichletSystem& system, const SpectralPack& pack) {
  const Eigen::MatrixXd gram = pack.eigenvectors.transpose() * (system.mass * pack.eigenvectors);
  CHECK((gram - Eigen::MatrixXd::Identity(pack.count(), pack.count())).cwiseAbs().maxCoeff() <= 1e-8);
  for (int i = 0; i < pack.count(); ++i) {
    const Eigen::VectorXd u = pack.eigenvectors.col(i);
    const Eigen::VectorXd mu = system.mass * u;
    const double res = (system.stiffness * u - pack.eigenvalues[i] * mu).norm() / (pack.eigenvalues[i] * mu.norm());
    CHECK(res <= 1e-8);
    if (i > 0) CHECK(pack.eigenvalues[i] >= pack.eigenvalues[i - 1]);
  }
  for (const Cluster& c : pack.clusters) {
    for (int k = c.first + 1; k <= c.last; ++k) {
      CHECK(pack.eigenvalue(k) - pack.eigenvalue(k - 1) <= pack.cluster_tol * pack.eigenvalue(k));
    }
    if (c.last < pack.count()) {
      CHECK(pack.eigenvalue(c.last + 1) - pack.eigenvalue(c.last) > pack.cluster_tol * pack.eigenvalue(c.last + 1));
    }
  }
}

}  // namespace

TEST_CASE("square spectrum on a structured mesh") {
  const DirichletSystem system = assemble(rectangle_mesh(kPi, kPi, 48, 48));
  const SpectralPack pack = solve_spectrum(system, 4);
  const auto exact = oracle::square_spectrum(4);
  for (int k = 1; k <= 4; ++k) CHECK(rel(pack.eigenvalue(k), exact[k - 1]) < 5e-3);
  CHECK(pack.cluster_of(2) == Cluster{2, 3, true});
  CHECK(pack.is_simple(1));
  CHECK(pack.is_simple(4));
  check_pack_invariants(system, pack);
}

TEST_CASE("disk spectrum against Bessel zeros") {
  const SpectralPack pack = solve_on_shape(BoundaryShape::disk(), 32, 6);
  const auto exact = oracle::disk_spectrum(6);
  CHECK(exact[0] == doctest::Approx(5.783185962946784).epsilon(1e-12));
  CHECK(exact[1] == doctest::Approx(14.681970642123893).epsilon(1e-12));
  CHECK(oracle::j01_squared == doctest::Approx(exact[0]).epsilon(1e-12));
  for (int k = 1; k <= 6; ++k) CHECK(rel(pack.eigenvalue(k), exact[k - 1]) < 1e-2);
  CHECK(pack.cluster_of(2) == Cluster{2, 3, true});
  CHECK(pack.cluster_of(4) == Cluster{4, 5, true});
}

TEST_CASE("eigenvalue error decreases at second order") {
  const double e16 = rel(solve_on_shape(BoundaryShape::disk(), 16, 1).eigenvalue(1), oracle::j01_squared);
  const double e32 = rel(solve_on_shape(BoundaryShape::disk(), 32, 1).eigenvalue(1), oracle::j01_squared);
  CHECK(e16 / e32 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("pack invariants on both solver paths") {
  const DirichletSystem system = assemble(generate_mesh(testing::mode_shape(3, 0.2), 14));
  EigenOptions dense;
  dense.dense_threshold = 1 << 30;
  EigenOptions krylov;
  krylov.dense_threshold = 0;
  const SpectralPack a = solve_spectrum(system, 8, dense);
  const SpectralPack b = solve_spectrum(system, 8, krylov);
  check_pack_invariants(system, a);
  check_pack_invariants(system, b);
  for (int k = 1; k <= 8; ++k) CHECK(rel(a.eigenvalue(k), b.eigenvalue(k)) < 1e-10);
}

TEST_CASE("solves are deterministic") {
  EigenOptions krylov;
  krylov.dense_threshold = 0;
  const SpectralPack a = solve_on_shape(testing::ellipse_like(), 16, 5, krylov);
  const SpectralPack b = solve_on_shape(testing::ellipse_like(), 16, 5, krylov);
  CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < a.count(); ++i) {
    Eigen::Index arg;
    a.eigenvectors.col(i).cwiseAbs().maxCoeff(&arg);
    CHECK(a.eigenvectors(arg, i) > 0.0);
  }
}

TEST_CASE("solver errors") {
  const DirichletSystem system = assemble(generate_mesh(BoundaryShape::disk(), 2));
  CHECK(system.interior_count() == 7);
  CHECK(error_code([&] { solve_spectrum(system, 7); }) == ErrorCode::InvalidArgument);
  CHECK(error_code([&] { solve_spectrum(system, 0); }) == ErrorCode::InvalidArgument);
  CHECK(solve_spectrum(system, 6).count() == 6);

  EigenOptions starved;
  starved.dense_threshold = 0;
  starved.max_subspace = 12;
  const DirichletSystem big = assemble(generate_mesh(BoundaryShape::disk(), 24));
  CHECK(error_code([&] { solve_spectrum(big, 10, starved); }) == ErrorCode::NotConverged);
}

TEST_CASE("cluster partition rule and truncation") {
  Eigen::VectorXd values(5);
  values << 1.0, 2.0, 2.0 + 1e-5, 2.0 + 2e-5, 3.0;
  const auto c = partition_clusters(values, 1e-4);
  REQUIRE(c.size() == 3);
  CHECK(c[1] == Cluster{2, 4, true});
  // The pair lambda_2 = lambda_3 is cut when only two values are requested.
  const SpectralPack pack = solve_on_shape(BoundaryShape::disk(), 12, 2);
  CHECK(pack.cluster_of(2).complete == false);
  CHECK(pack.complete_count() == 1);
}

TEST_CASE("ground state flux on the disk") {
  double previous = 1.0;
  for (int n : {8, 16, 32}) {
    const SpectralPack pack = solve_on_shape(BoundaryShape::disk(), n, 1);
    const Eigen::VectorXd d = pack.trace(1).cwiseAbs();
    const double spread = (d.maxCoeff() - d.minCoeff()) / d.mean();
    if (n == 16) CHECK(spread <= 2e-2);
    CHECK(spread < previous);
    previous = spread;
    if (n == 32) CHECK(rel(d.mean(), std::sqrt(oracle::j01_squared / kPi)) < 1e-2);
  }
}

TEST_CASE("square ground state flux follows -sin x on the bottom side") {
  const DirichletSystem system = assemble(rectangle_mesh(kPi, kPi, 32, 32));
  const SpectralPack pack = solve_spectrum(system, 1);
  const Eigen::VectorXd d = pack.trace(1);
  double worst = 0.0;
  int count = 0;
  for (int i = 0; i < pack.boundary_count(); ++i) {
    const Point2 p = pack.boundary_points[i];
    if (std::abs(p.y) > 1e-12 || p.x < 1e-12 || p.x > kPi - 1e-12) continue;
    // phi = (2 / pi) sin x sin y, outward normal (0, -1).
    worst = std::max(worst, std::abs(d[i] - (-2.0 / kPi) * std::sin(p.x)));
    ++count;
  }
  CHECK(count == 31);
  CHECK(worst < 1e-2 * 2.0 / kPi);
}

TEST_CASE("flux identities") {
  const DirichletSystem system = assemble(generate_mesh(testing::mode_shape(3, 0.2), 16));
  const SpectralPack pack = solve_spectrum(system, 6);
  for (int k = 1; k <= pack.count(); ++k) {
    const Eigen::VectorXd d = pack.trace(k);
    double flux = 0.0, energy = 0.0;
    for (int i = 0; i < pack.boundary_count(); ++i) {
      flux += pack.boundary_weights[i] * d[i];
      energy += pack.boundary_weights[i] * d[i] * d[i];
    }
    const Eigen::VectorXd full = system.expand(pack.eigenvectors.col(k - 1));
    const double mean = Eigen::VectorXd::Ones(full.size()).dot(system.mass_full * full);
    // Green's identity with the test function 1: int dphi/dnu = -lambda int phi.
    CHECK(std::abs(flux + pack.eigenvalue(k) * mean) <= 1e-7 * pack.eigenvalue(k) * std::max(1.0, std::abs(mean)));
    CHECK(energy > 0.0);
  }
}

TEST_CASE("disk dilation scales the discrete spectrum exactly") {
  const SpectralPack one = solve_on_shape(BoundaryShape::disk(1.0), 16, 5);
  const SpectralPack two = solve_on_shape(BoundaryShape::disk(1.7), 16, 5);
  for (int k = 1; k <= 5; ++k) CHECK(rel(two.eigenvalue(k) * 1.7 * 1.7, one.eigenvalue(k)) <= 1e-8);
}

TEST_CASE("spectrum CSV") {
  const SpectralPack pack = solve_on_shape(BoundaryShape::disk(), 8, 3);
  std::ostringstream os;
  write_spectrum_csv(os, pack);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,eigenvalue,cluster_id,residual");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}
