#include "specshape/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specshape/errors.hpp"

namespace specshape {

namespace {

void require_uniform(const NormalVelocity& v, const char* what) {
  const std::size_t m = v.values.size();
  if (m == 0 || v.angles.size() != m) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": empty or mismatched velocity");
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double expected = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    if (std::abs(v.angles[j] - expected) > 1e-9) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(what) + ": velocity must be sampled on a uniform grid 2 pi j / M");
    }
  }
}

// Accumulates sum_m c_m cos(m t) + s_m sin(m t) using the angle-addition recurrence.
double fourier_sum(const std::vector<double>& c, const std::vector<double>& s, double t) {
  const double c1 = std::cos(t);
  const double s1 = std::sin(t);
  double cm = c1;
  double sm = s1;
  double sum = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) {
    sum += c[m] * cm + s[m] * sm;
    const double cn = cm * c1 - sm * s1;
    sm = sm * c1 + cm * s1;
    cm = cn;
  }
  return sum;
}

}  // namespace

BoundaryShape::BoundaryShape(double r0, std::vector<double> cos_coeffs,
                             std::vector<double> sin_coeffs)
    : r0_(r0), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
  if (cos_.empty() || cos_.size() != sin_.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "shape needs N >= 1 cosine and sine amplitudes of equal length");
  }
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::isfinite(r0_) || !std::all_of(cos_.begin(), cos_.end(), finite) ||
      !std::all_of(sin_.begin(), sin_.end(), finite)) {
    throw Error(ErrorCode::InvalidArgument, "shape amplitudes must be finite");
  }
  const double rmin = min_radius(4 * kDefaultQuadrature);
  if (!(rmin > 0.0)) {
    std::ostringstream os;
    os << "r(theta) reaches " << rmin << " on the check grid";
    throw Error(ErrorCode::NonStarShaped, os.str());
  }
}

BoundaryShape BoundaryShape::disk(double radius, int modes) {
  return BoundaryShape(radius, std::vector<double>(static_cast<std::size_t>(modes), 0.0),
                       std::vector<double>(static_cast<std::size_t>(modes), 0.0));
}

double BoundaryShape::radius(double theta) const {
  return r0_ + fourier_sum(cos_, sin_, theta);
}

void BoundaryShape::radius_derivatives(double theta, double& r, double& dr, double& d2r) const {
  const double c1 = std::cos(theta);
  const double s1 = std::sin(theta);
  double cm = c1;
  double sm = s1;
  r = r0_;
  dr = 0.0;
  d2r = 0.0;
  for (std::size_t i = 0; i < cos_.size(); ++i) {
    const double m = static_cast<double>(i + 1);
    r += cos_[i] * cm + sin_[i] * sm;
    dr += m * (sin_[i] * cm - cos_[i] * sm);
    d2r -= m * m * (cos_[i] * cm + sin_[i] * sm);
    const double cn = cm * c1 - sm * s1;
    sm = sm * c1 + cm * s1;
    cm = cn;
  }
}

Point2 BoundaryShape::point(double theta) const {
  const double r = radius(theta);
  return {r * std::cos(theta), r * std::sin(theta)};
}

Point2 BoundaryShape::normal(double theta) const {
  double r, dr, d2r;
  radius_derivatives(theta, r, dr, d2r);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double speed = std::hypot(r, dr);
  return {(r * c + dr * s) / speed, (r * s - dr * c) / speed};
}

BoundaryShape BoundaryShape::scaled(double s) const {
  std::vector<double> c = cos_;
  std::vector<double> sn = sin_;
  for (auto& x : c) x *= s;
  for (auto& x : sn) x *= s;
  return BoundaryShape(r0_ * s, std::move(c), std::move(sn));
}

double BoundaryShape::min_radius(int points) const {
  double rmin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < points; ++j) {
    rmin = std::min(rmin, radius(kTwoPi * j / points));
  }
  return rmin;
}

Point2 boundary_point(const BoundaryShape& shape, double theta) { return shape.point(theta); }

std::vector<double> uniform_angles(int count) {
  std::vector<double> a(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) a[j] = kTwoPi * j / count;
  return a;
}

GeometryReport geometry_report(const BoundaryShape& shape, int quadrature) {
  if (quadrature < 3) throw Error(ErrorCode::InvalidArgument, "quadrature needs >= 3 nodes");
  GeometryReport g;
  g.angles = uniform_angles(quadrature);
  g.curvature.resize(g.angles.size());
  g.speed.resize(g.angles.size());
  const double h = kTwoPi / quadrature;
  for (std::size_t j = 0; j < g.angles.size(); ++j) {
    double r, dr, d2r;
    shape.radius_derivatives(g.angles[j], r, dr, d2r);
    if (!(r > 0.0)) throw Error(ErrorCode::NonStarShaped, "r(theta) <= 0 at a quadrature node");
    const double q = r * r + dr * dr;
    g.speed[j] = std::sqrt(q);
    g.curvature[j] = (r * r + 2.0 * dr * dr - r * d2r) / (q * g.speed[j]);
    g.area += 0.5 * r * r * h;
    g.perimeter += g.speed[j] * h;
  }
  return g;
}

double NormalVelocity::max_abs() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

NormalVelocity sample_velocity(std::span<const double> angles,
                               const std::function<double(double)>& f) {
  NormalVelocity v;
  v.angles.assign(angles.begin(), angles.end());
  v.values.reserve(angles.size());
  for (double a : angles) v.values.push_back(f(a));
  return v;
}

NormalVelocity uniform_velocity(int count, const std::function<double(double)>& f) {
  const auto angles = uniform_angles(count);
  return sample_velocity(angles, f);
}

double VelocityModes::operator()(double theta) const {
  std::vector<double> s = sin_coeffs;
  std::vector<double> c = cos_coeffs;
  const std::size_t n = std::max(c.size(), s.size());
  c.resize(n, 0.0);
  s.resize(n, 0.0);
  return constant + fourier_sum(c, s, theta);
}

TrigInterpolant::TrigInterpolant(const NormalVelocity& v) {
  require_uniform(v, "TrigInterpolant");
  const std::size_t m = v.values.size();
  const std::size_t half = m / 2;
  cos_.assign(half, 0.0);
  sin_.assign(half, 0.0);
  double sum = 0.0;
  for (double x : v.values) sum += x;
  constant_ = sum / static_cast<double>(m);
  for (std::size_t k = 1; k <= half; ++k) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      // Index arithmetic keeps the angle exact modulo the grid.
      const double t = kTwoPi * static_cast<double>((k * j) % m) / static_cast<double>(m);
      a += v.values[j] * std::cos(t);
      b += v.values[j] * std::sin(t);
    }
    const bool nyquist = (2 * k == m);
    const double scale = nyquist ? 1.0 / static_cast<double>(m) : 2.0 / static_cast<double>(m);
    cos_[k - 1] = a * scale;
    sin_[k - 1] = nyquist ? 0.0 : b * scale;
  }
}

double TrigInterpolant::operator()(double theta) const {
  return constant_ + fourier_sum(cos_, sin_, theta);
}

NormalVelocity resample(const NormalVelocity& v, std::span<const double> angles) {
  const TrigInterpolant interp(v);
  return sample_velocity(angles, [&](double t) { return interp(t); });
}

double boundary_integral(const BoundaryShape& shape, const NormalVelocity& v) {
  require_uniform(v, "boundary_integral");
  const auto g = geometry_report(shape, static_cast<int>(v.size()));
  const double h = kTwoPi / static_cast<double>(v.size());
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += v.values[j] * g.speed[j] * h;
  return s;
}

NormalVelocity project_zero_mean(const NormalVelocity& v, const BoundaryShape& shape) {
  require_uniform(v, "project_zero_mean");
  const auto g = geometry_report(shape, static_cast<int>(v.size()));
  double integral = 0.0;
  double length = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    integral += v.values[j] * g.speed[j];
    length += g.speed[j];
  }
  const double mean = integral / length;
  NormalVelocity out = v;
  for (auto& x : out.values) x -= mean;
  return out;
}

DeformResult deform(const BoundaryShape& shape, const NormalVelocity& v, double eps,
                    const DeformOptions& options) {
  if (eps == 0.0) return {shape, 0.0};
  const TrigInterpolant speed(v);
  const int q = options.quadrature;
  const int n_modes = shape.modes();
  if (q <= 2 * n_modes) {
    throw Error(ErrorCode::InvalidArgument, "deform quadrature must exceed twice the mode count");
  }

  auto moved = [&](double t) {
    const Point2 p = shape.point(t);
    const Point2 nu = shape.normal(t);
    const double s = eps * speed(t);
    return Point2{p.x + s * nu.x, p.y + s * nu.y};
  };

  // Unwrapped polar angle of the moved curve on a dense parameter grid; a
  // star-shaped curve (w.r.t. the origin) has strictly increasing angle with
  // total winding 2 pi.
  const int dense = 4 * q;
  std::vector<double> grid_t(static_cast<std::size_t>(dense) + 1);
  std::vector<double> grid_phi(grid_t.size());
  double prev = 0.0;
  for (int j = 0; j <= dense; ++j) {
    const double t = kTwoPi * j / dense;
    const Point2 c = moved(t);
    if (!(c.x * std::cos(t) + c.y * std::sin(t) > 0.0)) {
      throw Error(ErrorCode::NonStarShaped, "deformed boundary crosses the origin");
    }
    double phi = std::atan2(c.y, c.x);
    if (j > 0) {
      while (phi - prev > kPi) phi -= kTwoPi;
      while (phi - prev < -kPi) phi += kTwoPi;
      if (!(phi > prev)) {
        throw Error(ErrorCode::NonStarShaped, "deformed boundary is not a radial graph");
      }
    }
    grid_t[j] = t;
    grid_phi[j] = phi;
    prev = phi;
  }
  if (std::abs(grid_phi.back() - grid_phi.front() - kTwoPi) > 1e-8) {
    throw Error(ErrorCode::NonStarShaped, "deformed boundary does not wind once around the origin");
  }

  const double phi0 = grid_phi.front();
  std::vector<double> r_new(static_cast<std::size_t>(q));
  std::size_t cursor = 0;
  for (int k = 0; k < q; ++k) {
    double target = kTwoPi * k / q;
    while (target < phi0) target += kTwoPi;
    while (target >= phi0 + kTwoPi) target -= kTwoPi;
    // Targets are visited in increasing order except for one wrap.
    if (cursor >= grid_phi.size() - 1 || grid_phi[cursor] > target) cursor = 0;
    while (cursor + 1 < grid_phi.size() - 1 && grid_phi[cursor + 1] <= target) ++cursor;
    double lo = grid_t[cursor];
    double hi = grid_t[cursor + 1];
    const double ref = grid_phi[cursor];
    auto angle_at = [&](double t) {
      const Point2 c = moved(t);
      double phi = std::atan2(c.y, c.x);
      while (phi - ref > kPi) phi -= kTwoPi;
      while (phi - ref < -kPi) phi += kTwoPi;
      return phi;
    };
    for (int it = 0; it < 60 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (angle_at(mid) <= target) lo = mid; else hi = mid;
    }
    const Point2 c = moved(0.5 * (lo + hi));
    r_new[k] = std::hypot(c.x, c.y);
  }

  // Least-squares projection onto the first N modes (discrete orthogonality
  // on the uniform grid makes this a truncated DFT).
  double r0 = 0.0;
  for (double r : r_new) r0 += r;
  r0 /= q;
  std::vector<double> a(static_cast<std::size_t>(n_modes), 0.0);
  std::vector<double> b(static_cast<std::size_t>(n_modes), 0.0);
  for (int m = 1; m <= n_modes; ++m) {
    double sa = 0.0;
    double sb = 0.0;
    for (int k = 0; k < q; ++k) {
      const double t = kTwoPi * static_cast<double>((static_cast<long>(m) * k) % q) / q;
      sa += r_new[k] * std::cos(t);
      sb += r_new[k] * std::sin(t);
    }
    a[m - 1] = 2.0 * sa / q;
    b[m - 1] = 2.0 * sb / q;
  }
  BoundaryShape fitted(r0, a, b);
  double residual = 0.0;
  for (int k = 0; k < q; ++k) {
    residual = std::max(residual, std::abs(r_new[k] - fitted.radius(kTwoPi * k / q)));
  }
  residual /= r0;
  if (residual > options.fit_tolerance) {
    std::ostringstream os;
    os << "Fourier projection residual " << residual << " exceeds " << options.fit_tolerance;
    throw Error(ErrorCode::FitResidualTooLarge, os.str());
  }
  return {std::move(fitted), residual};
}

nlohmann::json to_json(const BoundaryShape& shape) {
  return nlohmann::json{{"r0", shape.r0()}, {"cos", shape.cos_coeffs()}, {"sin", shape.sin_coeffs()}};
}

BoundaryShape shape_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "shape must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "r0" && key != "cos" && key != "sin") {
      throw Error(ErrorCode::ConfigError, "unknown shape key '" + key + "'");
    }
  }
  if (!j.contains("r0") || !j.at("r0").is_number()) {
    throw Error(ErrorCode::ConfigError, "shape.r0 must be a number");
  }
  auto read = [&](const char* key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) throw Error(ErrorCode::ConfigError, std::string("shape.") + key + " must be an array");
    for (const auto& x : j.at(key)) {
      if (!x.is_number()) throw Error(ErrorCode::ConfigError, std::string("shape.") + key + " entries must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  };
  auto c = read("cos");
  auto s = read("sin");
  const std::size_t n = std::max({c.size(), s.size(), static_cast<std::size_t>(1)});
  c.resize(n, 0.0);
  s.resize(n, 0.0);
  return BoundaryShape(j.at("r0").get<double>(), std::move(c), std::move(s));
}

}  // namespace specshape
