#include "specshape/heat.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "specshape/errors.hpp"
#include "specshape/format.hpp"

namespace specshape {

namespace {

int resolve_count(const SpectralPack& pack, int N, bool whole_clusters) {
  if (N == 0) return whole_clusters ? pack.complete_count() : pack.count();
  if (N < 0 || N > pack.count()) {
    throw Error(ErrorCode::InvalidArgument, "heat-trace term count outside the computed spectrum");
  }
  if (whole_clusters) {
    // Truncating inside a cluster would make the flux sum basis dependent.
    const Cluster& c = pack.cluster_of(N);
    if (N != c.last || !c.complete) {
      throw Error(ErrorCode::InvalidArgument,
                  "heat-trace term count " + std::to_string(N) + " splits a cluster");
    }
  }
  return N;
}

void check_tail(double tail, std::optional<double> accuracy) {
  if (accuracy && tail > *accuracy) {
    std::ostringstream os;
    os << "tail bound " << tail << " exceeds requested accuracy " << *accuracy;
    throw Error(ErrorCode::TailTooLarge, os.str());
  }
}

}  // namespace

double heat_tail_bound(double area, double t, int N) {
  const double rate = 4.0 * kPi * t / area;
  return std::exp(-rate * N) / rate;
}

HeatTraceSample heat_trace(const SpectralPack& pack, double t, int N, std::optional<double> accuracy) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "heat trace needs t > 0");
  HeatTraceSample s;
  s.t = t;
  s.N_used = resolve_count(pack, N, false);
  for (int k = 1; k <= s.N_used; ++k) s.Y += std::exp(-pack.eigenvalue(k) * t);
  s.tail_bound = heat_tail_bound(pack.area, t, s.N_used);
  check_tail(s.tail_bound, accuracy);
  return s;
}

double heat_trace_derivative(const SpectralPack& pack, const NormalVelocity& v, double t, int N,
                             std::optional<double> accuracy) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "heat trace needs t > 0");
  if (static_cast<int>(v.size()) != pack.boundary_count()) {
    throw Error(ErrorCode::InvalidArgument, "velocity must be sampled at the pack's boundary nodes");
  }
  const int count = resolve_count(pack, N, true);
  check_tail(heat_tail_bound(pack.area, t, count), accuracy);
  double rate = 0.0;
  for (int k = 1; k <= count; ++k) {
    const Eigen::VectorXd d = pack.trace(k);
    double flux = 0.0;
    for (int i = 0; i < pack.boundary_count(); ++i) {
      flux += pack.boundary_weights[i] * v.values[i] * d[i] * d[i];
    }
    // Chain rule with d lambda_k = -flux: dY = sum -t e^{-lambda_k t} d lambda_k.
    rate += t * std::exp(-pack.eigenvalue(k) * t) * flux;
  }
  return rate;
}

AsymptoticCoeffs asymptotic_coeffs(const BoundaryShape& shape, int quadrature) {
  const GeometryReport g = geometry_report(shape, quadrature);
  const double h = kTwoPi / quadrature;
  double int_kappa = 0.0;
  double int_kappa2 = 0.0;
  for (std::size_t j = 0; j < g.angles.size(); ++j) {
    int_kappa += g.curvature[j] * g.speed[j] * h;
    int_kappa2 += g.curvature[j] * g.curvature[j] * g.speed[j] * h;
  }
  // Flat plane: scal = 0, rho = 0, tr A = kappa, |A|^2 = kappa^2, so
  // a2 = (1/6)(2 int kappa) and a3 = (sqrt(pi)/192) int (-7 + 10) kappa^2.
  AsymptoticCoeffs c;
  c.a0 = g.area;
  c.a1 = -0.5 * std::sqrt(kPi) * g.perimeter;
  c.a2 = int_kappa / 3.0;
  c.a3 = std::sqrt(kPi) / 64.0 * int_kappa2;
  return c;
}

double expansion_eval(const AsymptoticCoeffs& c, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "expansion needs t > 0");
  const double st = std::sqrt(t);
  return (c.a0 + c.a1 * st + c.a2 * t + c.a3 * t * st) / (4.0 * kPi * t);
}

MeanCurvatureReport mean_curvature_report(const BoundaryShape& shape, double tol, int quadrature) {
  const GeometryReport g = geometry_report(shape, quadrature);
  const auto [lo, hi] = std::minmax_element(g.curvature.begin(), g.curvature.end());
  MeanCurvatureReport r;
  r.tolerance = tol;
  double sum = 0.0;
  for (double k : g.curvature) sum += k;
  r.mean = sum / static_cast<double>(g.curvature.size());
  r.spread = (*hi - *lo) / std::abs(r.mean);
  r.constant = r.spread <= tol;
  return r;
}

std::vector<HeatSweepRow> heat_sweep(const SpectralPack& pack, const AsymptoticCoeffs& coeffs,
                                     const std::vector<double>& times, int N) {
  std::vector<HeatSweepRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    const HeatTraceSample s = heat_trace(pack, t, N);
    HeatSweepRow r;
    r.t = t;
    r.Y_spec = s.Y;
    r.tail_bound = s.tail_bound;
    r.Y_asym = expansion_eval(coeffs, t);
    r.rel_gap = std::abs(r.Y_spec - r.Y_asym) / r.Y_spec;
    rows.push_back(r);
  }
  return rows;
}

void write_heat_csv(std::ostream& out, const std::vector<HeatSweepRow>& rows) {
  out << "t,Y_spec,tail_bound,Y_asym,rel_gap\n";
  for (const auto& r : rows) {
    out << fmt_double(r.t) << ',' << fmt_double(r.Y_spec) << ',' << fmt_double(r.tail_bound) << ','
        << fmt_double(r.Y_asym) << ',' << fmt_double(r.rel_gap) << '\n';
  }
}

}  // namespace specshape
