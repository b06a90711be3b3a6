#include "specshape/flow.hpp"

#include <cmath>
#include <ostream>

#include "specshape/errors.hpp"
#include "specshape/format.hpp"
#include "specshape/shape_calculus.hpp"

namespace specshape {

namespace {

SpectralPack solve_for(const BoundaryShape& shape, const FlowConfig& config) {
  return solve_on_shape(shape, config.refinement_level, config.k + 2, config.eigen);
}

// Restricts a boundary-node velocity to the Fourier modes the shape can
// represent and resamples it on the deformation quadrature grid.
NormalVelocity band_limited(const NormalVelocity& v, int modes, int quadrature) {
  const TrigInterpolant full(v);
  const NormalVelocity dense = uniform_velocity(quadrature, [&](double t) { return full(t); });
  VelocityModes low;
  const int q = static_cast<int>(dense.size());
  double c0 = 0.0;
  for (double x : dense.values) c0 += x;
  low.constant = c0 / q;
  for (int m = 1; m <= modes; ++m) {
    double a = 0.0, b = 0.0;
    for (int j = 0; j < q; ++j) {
      const double t = kTwoPi * static_cast<double>((static_cast<long>(m) * j) % q) / q;
      a += dense.values[j] * std::cos(t);
      b += dense.values[j] * std::sin(t);
    }
    low.cos_coeffs.push_back(2.0 * a / q);
    low.sin_coeffs.push_back(2.0 * b / q);
  }
  return uniform_velocity(quadrature, low);
}

bool within_cap(const BoundaryShape& s, double cap) {
  for (int m = 0; m < s.modes(); ++m) {
    if (std::abs(s.cos_coeffs()[m]) > cap * s.r0() || std::abs(s.sin_coeffs()[m]) > cap * s.r0()) return false;
  }
  return true;
}


// Shared by flow_step and run_flow; `pack` is the spectrum of state.shape.
FlowState backtrack(const FlowState& state, const SpectralPack& pack, double eta,
                    const FlowConfig& config) {
  FlowState out = state;
  const NormalVelocity v = descent_direction(pack, config.k);
  if (eta == 0.0) return out;

  const NormalVelocity smooth = band_limited(v, state.shape.modes(), config.deform.quadrature);
  const double lambda = pack.eigenvalue(config.k);
  while (eta >= config.min_step) {
    const BoundaryShape moved = deform(state.shape, smooth, eta, config.deform).shape;
    const double area = geometry_report(moved, config.deform.quadrature).area;
    const BoundaryShape candidate = moved.scaled(std::sqrt(state.area / area));
    if (!within_cap(candidate, config.amplitude_cap)) {
      throw Error(ErrorCode::NonStarShaped, "Fourier amplitude cap reached");
    }
    const double trial = solve_for(candidate, config).eigenvalue(config.k);
    if (trial < lambda) {
      out.shape = candidate;
      out.lambda_history.push_back(trial);
      out.steps += 1;
      out.last_step = eta;
      return out;
    }
    eta *= 0.5;
  }
  throw Error(ErrorCode::StepTooSmall, "backtracking fell below the minimum step");
}

}  // namespace

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Running: return "running";
    case StopReason::Converged: return "converged";
    case StopReason::StepTooSmall: return "step_too_small";
    case StopReason::MaxSteps: return "max_steps";
    case StopReason::Degenerate: return "degenerate";
    case StopReason::AmplitudeCap: return "amplitude_cap";
    case StopReason::NonStarShaped: return "non_star_shaped";
  }
  return "unknown";
}

NormalVelocity descent_direction(const SpectralPack& pack, int k) {
  if (!pack.is_simple(k)) {
    throw Error(ErrorCode::DegenerateEigenvalue, "descent direction needs a simple eigenvalue");
  }
  const Eigen::VectorXd d = pack.trace(k);
  double ws = 0.0, w = 0.0;
  for (int i = 0; i < pack.boundary_count(); ++i) {
    ws += pack.boundary_weights[i] * d[i] * d[i];
    w += pack.boundary_weights[i];
  }
  NormalVelocity v;
  v.angles = pack.boundary_angles;
  v.values.resize(static_cast<std::size_t>(pack.boundary_count()));
  for (int i = 0; i < pack.boundary_count(); ++i) v.values[i] = d[i] * d[i] - ws / w;
  return v;
}

FlowState initial_state(const FlowConfig& config) {
  FlowState s;
  s.shape = config.initial;
  s.area = geometry_report(config.initial, config.deform.quadrature).area;
  s.lambda_history.push_back(solve_for(config.initial, config).eigenvalue(config.k));
  return s;
}

FlowState flow_step(const FlowState& state, double eta, const FlowConfig& config) {
  if (eta == 0.0) return state;
  return backtrack(state, solve_for(state.shape, config), eta, config);
}

GradientNorms gradient_norms(const SpectralPack& pack, int k) {
  const NormalVelocity v = descent_direction(pack, k);
  const Eigen::VectorXd d = pack.trace(k);
  double g2 = 0.0, f2 = 0.0;
  for (int i = 0; i < pack.boundary_count(); ++i) {
    g2 += pack.boundary_weights[i] * v.values[i] * v.values[i];
    f2 += pack.boundary_weights[i] * std::pow(d[i], 4);
  }
  return {std::sqrt(g2), std::sqrt(f2)};
}

FlowResult run_flow(const FlowConfig& config) {
  FlowResult result;
  FlowState state = initial_state(config);
  double eta = config.initial_step;
  auto record = [&](double grad_norm) {
    const GeometryReport g = geometry_report(state.shape, config.deform.quadrature);
    result.trajectory.push_back(
        {state.steps, state.lambda_history.back(), g.area, g.perimeter, grad_norm, state.last_step});
  };

  SpectralPack pack = solve_for(state.shape, config);
  while (true) {
    if (!pack.is_simple(config.k)) {
      record(0.0);
      state.stop_reason = StopReason::Degenerate;
      break;
    }
    const GradientNorms grad = gradient_norms(pack, config.k);
    record(grad.velocity);
    if (state.steps > 0) {
      const auto& h = state.lambda_history;
      if (h[h.size() - 2] - h.back() < config.stop_tol) {
        state.stop_reason = StopReason::Converged;
        break;
      }
    }
    // Predicted first-order decrease eta * int v^2 ds.
    if (eta * grad.velocity * grad.velocity < config.stop_tol) {
      state.stop_reason = StopReason::Converged;
      break;
    }
    if (state.steps >= config.max_steps) {
      state.stop_reason = StopReason::MaxSteps;
      break;
    }
    try {
      state = backtrack(state, pack, eta, config);
      eta = std::min(config.max_step, state.last_step * config.step_growth);
      pack = solve_for(state.shape, config);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::StepTooSmall) {
        state.stop_reason = grad.relative() <= config.stationary_tol ? StopReason::Converged
                                                                     : StopReason::StepTooSmall;
      } else if (e.code() == ErrorCode::NonStarShaped) {
        state.stop_reason = StopReason::AmplitudeCap;
      } else {
        throw;
      }
      break;
    }
  }
  result.state = std::move(state);
  return result;
}

void write_trajectory_csv(std::ostream& out, const std::vector<FlowRecord>& trajectory) {
  out << "step,lambda_k,area,perimeter,grad_norm,step_size\n";
  for (const auto& r : trajectory) {
    out << r.step << ',' << fmt_double(r.lambda_k) << ',' << fmt_double(r.area) << ','
        << fmt_double(r.perimeter) << ',' << fmt_double(r.grad_norm) << ',' << fmt_double(r.step_size)
        << '\n';
  }
}

}  // namespace specshape
