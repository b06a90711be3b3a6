#pragma once

// Star-shaped planar domains described by a truncated Fourier series of the
// radial function r(theta), plus boundary quadrature and normal deformations.

#include <functional>
#include <span>
#include <vector>

#include "json.hpp"

namespace specshape {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr int kDefaultQuadrature = 512;
inline constexpr int kDefaultModes = 16;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// r(theta) = r0 + sum_m (a_m cos m theta + b_m sin m theta), m = 1..N.
///
/// Construction validates strict positivity of r on a grid of
/// 4 * kDefaultQuadrature angles and throws NonStarShaped otherwise.
class BoundaryShape {
 public:
  BoundaryShape(double r0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  static BoundaryShape disk(double radius = 1.0, int modes = kDefaultModes);

  double r0() const { return r0_; }
  int modes() const { return static_cast<int>(cos_.size()); }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }

  double radius(double theta) const;
  /// r, r', r'' at theta.
  void radius_derivatives(double theta, double& r, double& dr, double& d2r) const;

  Point2 point(double theta) const;
  /// Outward unit normal at the boundary point with parameter theta.
  Point2 normal(double theta) const;

  /// All coefficients multiplied by s (exact dilation about the origin).
  BoundaryShape scaled(double s) const;

  /// Smallest r over a uniform grid of `points` angles.
  double min_radius(int points) const;

  bool operator==(const BoundaryShape&) const = default;

 private:
  double r0_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

Point2 boundary_point(const BoundaryShape& shape, double theta);

struct GeometryReport {
  double area = 0.0;
  double perimeter = 0.0;
  std::vector<double> angles;
  std::vector<double> curvature;
  /// |p'(theta)|, the arclength density at each node.
  std::vector<double> speed;
};

/// Composite trapezoid on q uniform angles.
GeometryReport geometry_report(const BoundaryShape& shape, int quadrature = kDefaultQuadrature);

/// Uniform angles 2 pi j / count, j = 0..count-1.
std::vector<double> uniform_angles(int count);

/// Scalar normal speed sampled at boundary parameters.
struct NormalVelocity {
  std::vector<double> angles;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double max_abs() const;
};

NormalVelocity sample_velocity(std::span<const double> angles,
                               const std::function<double(double)>& f);
NormalVelocity uniform_velocity(int count, const std::function<double(double)>& f);

/// Normal velocity given by Fourier modes: c0 + sum_m (cos_m cos m theta + sin_m sin m theta).
struct VelocityModes {
  double constant = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  double operator()(double theta) const;
};

/// Trigonometric interpolant through samples on a uniform grid
/// (angles must be 2 pi j / M).
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const NormalVelocity& v);
  double operator()(double theta) const;

 private:
  double constant_ = 0.0;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Resample a uniform-grid velocity at arbitrary angles via trigonometric interpolation.
NormalVelocity resample(const NormalVelocity& v, std::span<const double> angles);

/// Trapezoid approximation of the boundary integral of v ds; v must be uniform.
double boundary_integral(const BoundaryShape& shape, const NormalVelocity& v);

/// v - (int v ds) / perimeter with the trapezoid rule at v's nodes.
NormalVelocity project_zero_mean(const NormalVelocity& v, const BoundaryShape& shape);

struct DeformOptions {
  int quadrature = kDefaultQuadrature;
  /// Maximum allowed |r_samples - r_fit| relative to the fitted r0.
  double fit_tolerance = 1e-6;
};

struct DeformResult {
  BoundaryShape shape;
  double fit_residual = 0.0;
};

/// Moves p(theta) to p(theta) + eps v(theta) nu(theta), recovers the new
/// radial function by ray casting from the origin and projects it onto the
/// shape's N Fourier modes.
DeformResult deform(const BoundaryShape& shape, const NormalVelocity& v, double eps,
                    const DeformOptions& options = {});

nlohmann::json to_json(const BoundaryShape& shape);
BoundaryShape shape_from_json(const nlohmann::json& j);

}  // namespace specshape
