#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "specshape/domain.hpp"

using namespace specshape;
using testing::error_code;

TEST_CASE("boundary_point on simple shapes") {
  const auto disk = BoundaryShape::disk();
  CHECK(boundary_point(disk, 0.0).x == doctest::Approx(1.0));
  CHECK(boundary_point(disk, 0.0).y == doctest::Approx(0.0));
  const Point2 top = boundary_point(disk, kPi / 2);
  CHECK(std::abs(top.x) < 1e-15);
  CHECK(top.y == doctest::Approx(1.0));
  const Point2 p = boundary_point(testing::mode_shape(2, 0.1), 0.0);
  CHECK(p.x == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(p.y == 0.0);
}

TEST_CASE("shape validation") {
  CHECK(error_code([] { BoundaryShape(1.0, {}, {}); }) == ErrorCode::InvalidArgument);
  CHECK(error_code([] { BoundaryShape(1.0, {0.0, 0.0}, {0.0}); }) == ErrorCode::InvalidArgument);
  CHECK(error_code([] { BoundaryShape(1.0, {NAN}, {0.0}); }) == ErrorCode::InvalidArgument);
  CHECK(error_code([] { BoundaryShape(1.0, {0.0, 1.2}, {0.0, 0.0}); }) == ErrorCode::NonStarShaped);
  CHECK(error_code([] { BoundaryShape(-1.0, {0.0}, {0.0}); }) == ErrorCode::NonStarShaped);
}

TEST_CASE("geometry_report on disks") {
  for (double R : {1.0, 2.0}) {
    const GeometryReport g = geometry_report(BoundaryShape::disk(R));
    CHECK(g.area == doctest::Approx(kPi * R * R).epsilon(1e-14));
    CHECK(g.perimeter == doctest::Approx(kTwoPi * R).epsilon(1e-14));
    for (double k : g.curvature) CHECK(std::abs(k - 1.0 / R) < 1e-10);
  }
}

TEST_CASE("geometry_report against a fine independent quadrature") {
  const BoundaryShape shape = testing::mode_shape(3, 0.2);
  const oracle::Radial ref{1.0, {0.0, 0.0, 0.2}, {0.0, 0.0, 0.0}};
  const GeometryReport g = geometry_report(shape);
  CHECK(g.area == doctest::Approx(ref.area(5120)).epsilon(1e-12));
  CHECK(g.perimeter == doctest::Approx(ref.perimeter(5120)).epsilon(1e-12));
  CHECK(g.curvature[0] == doctest::Approx(ref.curvature(0.0)).epsilon(1e-12));
  // kappa(0) = (1.2^2 + 0 + 1.2 * 1.8) / 1.2^3
  CHECK(g.curvature[0] == doctest::Approx((1.44 + 2.16) / 1.728).epsilon(1e-12));
}

TEST_CASE("project_zero_mean examples") {
  const auto disk = BoundaryShape::disk();
  const int q = kDefaultQuadrature;
  NormalVelocity z = project_zero_mean(uniform_velocity(q, [](double) { return 1.0; }), disk);
  for (double x : z.values) CHECK(std::abs(x) < 1e-14);

  const NormalVelocity c = uniform_velocity(q, [](double t) { return std::cos(t); });
  const NormalVelocity pc = project_zero_mean(c, disk);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(pc.values[i] - c.values[i]) < 1e-15);

  const double mean = oracle::periodic_integral([](double t) { return std::cos(t) * std::cos(t); }, 4096) / oracle::kPiL / 2;
  const NormalVelocity c2 = project_zero_mean(uniform_velocity(q, [](double t) { return std::cos(t) * std::cos(t); }), disk);
  CHECK(mean == doctest::Approx(0.5).epsilon(1e-14));
  for (std::size_t i = 0; i < c2.size(); ++i) {
    CHECK(std::abs(c2.values[i] - (std::cos(c2.angles[i]) * std::cos(c2.angles[i]) - mean)) < 1e-14);
  }
}

TEST_CASE("project_zero_mean meets the mean bound and is idempotent") {
  const BoundaryShape shape = testing::mode_shape(3, 0.2);
  const NormalVelocity v = uniform_velocity(256, [](double t) { return std::exp(std::sin(t)) + t * 0.0; });
  const NormalVelocity p = project_zero_mean(v, shape);
  const double perimeter = geometry_report(shape, 256).perimeter;
  CHECK(std::abs(boundary_integral(shape, p)) <= 1e-12 * perimeter * p.max_abs());
  const NormalVelocity pp = project_zero_mean(p, shape);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(pp.values[i] - p.values[i]) < 1e-15);
}

TEST_CASE("deform examples") {
  const auto disk = BoundaryShape::disk();
  const int q = kDefaultQuadrature;
  const DeformResult grown = deform(disk, uniform_velocity(q, [](double) { return 1.0; }), 0.1);
  CHECK(grown.shape.r0() == doctest::Approx(1.1).epsilon(1e-12));
  for (int m = 0; m < grown.shape.modes(); ++m) {
    CHECK(std::abs(grown.shape.cos_coeffs()[m]) < 1e-10);
    CHECK(std::abs(grown.shape.sin_coeffs()[m]) < 1e-10);
  }

  const BoundaryShape shape = testing::mode_shape(3, 0.2);
  const NormalVelocity any = uniform_velocity(q, [](double t) { return std::sin(5 * t); });
  CHECK(deform(shape, any, 0.0).shape == shape);

  const DeformResult wave = deform(disk, uniform_velocity(q, [](double t) { return std::cos(2 * t); }), 0.05);
  CHECK(std::abs(wave.shape.r0() - 1.0) < 0.05 * 0.05);
  CHECK(wave.shape.cos_coeffs()[1] == doctest::Approx(0.05).epsilon(0.05));
  CHECK(wave.fit_residual < 1e-4);
}

TEST_CASE("deform errors") {
  const auto disk = BoundaryShape::disk();
  const NormalVelocity shrink = uniform_velocity(kDefaultQuadrature, [](double) { return -1.0; });
  CHECK(error_code([&] { deform(disk, shrink, 1.5); }) == ErrorCode::NonStarShaped);
  DeformOptions strict;
  strict.fit_tolerance = 1e-12;
  const NormalVelocity rough = uniform_velocity(kDefaultQuadrature, [](double t) { return std::cos(40 * t); });
  CHECK(error_code([&] { deform(disk, rough, 0.05, strict); }) == ErrorCode::FitResidualTooLarge);
}

TEST_CASE("deform changes area by the boundary integral of v at first order") {
  const BoundaryShape shape = testing::mode_shape(3, 0.2);
  const int q = kDefaultQuadrature;
  const NormalVelocity v = uniform_velocity(q, [](double t) { return 1.0 + 0.5 * std::cos(3 * t) + 0.3 * std::sin(t); });
  const double h = 1e-4;
  const double rate = (geometry_report(deform(shape, v, h).shape).area -
                       geometry_report(deform(shape, v, -h).shape).area) / (2 * h);
  CHECK(rate == doctest::Approx(boundary_integral(shape, v)).epsilon(1e-6));

  const NormalVelocity z = project_zero_mean(v, shape);
  const double zrate = (geometry_report(deform(shape, z, h).shape).area -
                        geometry_report(deform(shape, z, -h).shape).area) / (2 * h);
  CHECK(std::abs(zrate) <= 1e-6 * geometry_report(shape).perimeter * z.max_abs());
}

TEST_CASE("trigonometric resampling reproduces band-limited velocities") {
  const NormalVelocity v = uniform_velocity(64, [](double t) { return 0.3 + std::cos(3 * t) - 2 * std::sin(7 * t); });
  const std::vector<double> angles{0.1, 1.7, 4.0, 6.2};
  const NormalVelocity r = resample(v, angles);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double t = angles[i];
    CHECK(r.values[i] == doctest::Approx(0.3 + std::cos(3 * t) - 2 * std::sin(7 * t)).epsilon(1e-12));
  }
}

TEST_CASE("shape JSON round trip is bit exact") {
  const BoundaryShape shape(0.1 + 0.2, {1.0 / 30.0, -2e-17, 0.0}, {std::sqrt(2.0) * 1e-3, 0.0, 5e-300});
  const std::string text = to_json(shape).dump();
  const BoundaryShape back = shape_from_json(nlohmann::json::parse(text));
  CHECK(back == shape);
  CHECK(error_code([] { shape_from_json(nlohmann::json::parse(R"({"r0":1,"cos":[0],"extra":1})")); }) ==
        ErrorCode::ConfigError);
}
