#pragma once

// Area-constrained gradient flow of lambda_k over the boundary Fourier
// coefficients, driven by the Hadamard gradient.

#include <iosfwd>
#include <string>
#include <vector>

#include "specshape/eig.hpp"

namespace specshape {

enum class StopReason {
  Running,
  Converged,
  StepTooSmall,
  MaxSteps,
  Degenerate,
  AmplitudeCap,
  NonStarShaped,
};

const char* to_string(StopReason reason);

struct FlowConfig {
  BoundaryShape initial = BoundaryShape::disk();
  int k = 1;
  double initial_step = 0.05;
  int max_steps = 200;
  /// Stop once |lambda change| of an accepted step, or the predicted first-order
  /// decrease at the current step size, drops below this.
  double stop_tol = 1e-10;
  double min_step = 1e-4;
  /// A failed line search counts as convergence when
  /// ||v|| / ||(d phi / d nu)^2|| (boundary L2 norms) is below this.
  double stationary_tol = 1e-2;
  /// Accepted steps let the next trial grow by this factor, capped at max_step.
  double step_growth = 1.5;
  double max_step = 0.2;
  /// |a_m|, |b_m| <= amplitude_cap * r0.
  double amplitude_cap = 0.5;
  int refinement_level = 32;
  EigenOptions eigen;
  DeformOptions deform{kDefaultQuadrature, 1e-2};
};

struct FlowState {
  BoundaryShape shape = BoundaryShape::disk();
  double area = 0.0;
  std::vector<double> lambda_history;
  int steps = 0;
  double last_step = 0.0;
  StopReason stop_reason = StopReason::Running;
};

struct FlowRecord {
  int step = 0;
  double lambda_k = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
  double grad_norm = 0.0;
  double step_size = 0.0;
};

/// Boundary L2 norms of the descent direction and of (d phi_k / d nu)^2.
struct GradientNorms {
  double velocity = 0.0;
  double flux_squared = 0.0;

  double relative() const { return flux_squared > 0.0 ? velocity / flux_squared : 0.0; }
};

GradientNorms gradient_norms(const SpectralPack& pack, int k);

struct FlowResult {
  FlowState state;
  std::vector<FlowRecord> trajectory;
};

/// v = (d phi_k / d nu)^2 - mean at the boundary nodes (zero-mean under the
/// lumped boundary weights). Throws DegenerateEigenvalue for clustered lambda_k.
NormalVelocity descent_direction(const SpectralPack& pack, int k);

/// Initial state for a config (area and lambda_k of the initial shape).
FlowState initial_state(const FlowConfig& config);

/// One backtracking step: deform by eta v, rescale to the initial area and
/// halve eta until lambda_k decreases. Throws StepTooSmall below min_step.
/// eta = 0 returns the state unchanged.
FlowState flow_step(const FlowState& state, double eta, const FlowConfig& config);

FlowResult run_flow(const FlowConfig& config);

/// Columns: step, lambda_k, area, perimeter, grad_norm, step_size.
void write_trajectory_csv(std::ostream& out, const std::vector<FlowRecord>& trajectory);

}  // namespace specshape
