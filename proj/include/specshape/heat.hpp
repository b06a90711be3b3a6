#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "specshape/domain.hpp"
#include "specshape/eig.hpp"

namespace specshape {

struct HeatTraceSample {
  double t = 0.0;
  double Y = 0.0;
  /// Weyl-type bound on the omitted terms k > N.
  double tail_bound = 0.0;
  int N_used = 0;
};

/// Small-time heat-trace coefficients of a flat planar domain.
struct AsymptoticCoeffs {
  double a0 = 0.0;  // area
  double a1 = 0.0;  // -(sqrt(pi)/2) perimeter
  double a2 = 0.0;  // (1/3) int kappa ds
  double a3 = 0.0;  // (sqrt(pi)/64) int kappa^2 ds
};

/// N = 0 uses every computed eigenvalue.
/// When `accuracy` is set, TailTooLarge is thrown if the tail bound exceeds it.
HeatTraceSample heat_trace(const SpectralPack& pack, double t, int N = 0,
                           std::optional<double> accuracy = std::nullopt);

/// int_N^inf exp(-4 pi k t / area) dk.
double heat_tail_bound(double area, double t, int N);

/// dY/d eps = t sum_k exp(-lambda_k t) int v (d phi_k / d nu)^2 ds, summed over
/// whole clusters (N = 0: every complete cluster). v must be sampled at the
/// pack's boundary nodes.
double heat_trace_derivative(const SpectralPack& pack, const NormalVelocity& v, double t, int N = 0,
                             std::optional<double> accuracy = std::nullopt);

AsymptoticCoeffs asymptotic_coeffs(const BoundaryShape& shape, int quadrature = kDefaultQuadrature);

/// (4 pi t)^{-1} (a0 + a1 t^{1/2} + a2 t + a3 t^{3/2}).
double expansion_eval(const AsymptoticCoeffs& coeffs, double t);

struct MeanCurvatureReport {
  bool constant = false;
  /// (max - min) / mean of the curvature at the quadrature nodes.
  double spread = 0.0;
  double mean = 0.0;
  double tolerance = 0.0;
};

MeanCurvatureReport mean_curvature_report(const BoundaryShape& shape, double tol,
                                          int quadrature = kDefaultQuadrature);

struct HeatSweepRow {
  double t = 0.0;
  double Y_spec = 0.0;
  double tail_bound = 0.0;
  double Y_asym = 0.0;
  double rel_gap = 0.0;
};

std::vector<HeatSweepRow> heat_sweep(const SpectralPack& pack, const AsymptoticCoeffs& coeffs,
                                     const std::vector<double>& times, int N = 0);

/// Columns: t, Y_spec, tail_bound, Y_asym, rel_gap.
void write_heat_csv(std::ostream& out, const std::vector<HeatSweepRow>& rows);

}  // namespace specshape
