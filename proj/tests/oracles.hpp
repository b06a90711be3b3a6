#pragma once

// Independent reference values used by the tests only. Nothing here calls
// into the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// J_m(x) from its power series, summed in long double. Accurate to ~1e-13
// for x below ~20.
inline long double bessel_j_series(int m, long double x) {
  const long double h = x / 2.0L;
  long double term = 1.0L;
  for (int i = 1; i <= m; ++i) term *= h / i;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -h * h / (static_cast<long double>(k) * (k + m));
    sum += term;
    if (std::fabs(term) < 1e-24L * std::fabs(sum)) break;
  }
  return sum;
}

inline long double bisect(const std::function<long double(long double)>& f, long double a,
                          long double b) {
  long double fa = f(a);
  for (int it = 0; it < 200 && b - a > 1e-18L * b; ++it) {
    const long double c = 0.5L * (a + b);
    const long double fc = f(c);
    if ((fc < 0) == (fa < 0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  return 0.5L * (a + b);
}

// s-th positive zero of J_m via a sign scan of the series and bisection.
inline double bessel_zero(int m, int s) {
  auto f = [m](long double x) { return bessel_j_series(m, x); };
  int found = 0;
  long double a = m > 0 ? 0.5L : 0.1L;
  for (long double b = a + 0.05L; b < 40.0L; a = b, b += 0.05L) {
    if ((f(a) < 0) != (f(b) < 0) && ++found == s) return static_cast<double>(bisect(f, a, b));
  }
  return NAN;
}

inline const double j01_squared = [] {
  const double j = bessel_zero(0, 1);
  return j * j;
}();
inline const double j11_squared = [] {
  const double j = bessel_zero(1, 1);
  return j * j;
}();

// Lowest `count` Dirichlet eigenvalues of the unit disk, j_{m,s}^2 with
// multiplicity two for m > 0. Uses std::cyl_bessel_j so large zeros stay accurate.
inline std::vector<double> disk_spectrum(int count) {
  const double limit = 4.0 * count + 60.0;  // Weyl: lambda_k ~ 4k on the unit disk
  std::vector<double> out;
  for (int m = 0; m * m < limit; ++m) {
    auto f = [m](long double x) { return static_cast<long double>(std::cyl_bessel_j(m, static_cast<double>(x))); };
    long double a = m + 0.01L;
    for (long double b = a + 0.02L; b * b < limit; a = b, b += 0.02L) {
      if ((f(a) < 0) != (f(b) < 0)) {
        const double j = static_cast<double>(bisect(f, a, b));
        out.push_back(j * j);
        if (m > 0) out.push_back(j * j);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.resize(std::min<std::size_t>(out.size(), count));
  return out;
}

// Dirichlet eigenvalues of the pi x pi square: m^2 + n^2, m, n >= 1.
inline std::vector<double> square_spectrum(int count) {
  std::vector<double> out;
  for (int m = 1; m <= count; ++m) {
    for (int n = 1; n <= count; ++n) out.push_back(m * m + n * n);
  }
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

// Periodic trapezoid rule on `nodes` points over [0, 2 pi).
inline double periodic_integral(const std::function<double(double)>& f, int nodes) {
  long double s = 0.0L;
  for (int j = 0; j < nodes; ++j) s += f(2.0 * static_cast<double>(kPiL) * j / nodes);
  return static_cast<double>(s * 2.0L * kPiL / nodes);
}

// Radial function r(theta) = r0 + sum a_m cos m theta + b_m sin m theta and its
// first two derivatives, evaluated independently of the library.
struct Radial {
  double r0;
  std::vector<double> a, b;

  double r(double t) const {
    double s = r0;
    for (std::size_t m = 0; m < a.size(); ++m) s += a[m] * std::cos((m + 1) * t) + b[m] * std::sin((m + 1) * t);
    return s;
  }
  double dr(double t) const {
    double s = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
      const double k = m + 1.0;
      s += k * (-a[m] * std::sin(k * t) + b[m] * std::cos(k * t));
    }
    return s;
  }
  double d2r(double t) const {
    double s = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
      const double k = m + 1.0;
      s += -k * k * (a[m] * std::cos(k * t) + b[m] * std::sin(k * t));
    }
    return s;
  }
  double speed(double t) const { return std::hypot(r(t), dr(t)); }
  double curvature(double t) const {
    const double R = r(t), D = dr(t), D2 = d2r(t);
    return (R * R + 2 * D * D - R * D2) / std::pow(R * R + D * D, 1.5);
  }
  double area(int nodes) const {
    return periodic_integral([this](double t) { return 0.5 * r(t) * r(t); }, nodes);
  }
  double perimeter(int nodes) const {
    return periodic_integral([this](double t) { return speed(t); }, nodes);
  }
};

}  // namespace oracle
