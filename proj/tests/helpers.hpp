#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "specshape/domain.hpp"
#include "specshape/errors.hpp"

namespace testing {

inline specshape::BoundaryShape mode_shape(int m, double amplitude, double r0 = 1.0,
                                           int modes = specshape::kDefaultModes) {
  std::vector<double> c(modes, 0.0), s(modes, 0.0);
  c[m - 1] = amplitude;
  return specshape::BoundaryShape(r0, c, s);
}

// r = 1 + 0.15 cos 2 theta.
inline specshape::BoundaryShape ellipse_like() { return mode_shape(2, 0.15); }

template <class F>
std::optional<specshape::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const specshape::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing
