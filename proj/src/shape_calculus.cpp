#include "specshape/shape_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "specshape/errors.hpp"
#include "specshape/format.hpp"

namespace specshape {

namespace {

void require_on_boundary(const SpectralPack& pack, const NormalVelocity& v) {
  if (static_cast<int>(v.size()) != pack.boundary_count()) {
    throw Error(ErrorCode::InvalidArgument, "velocity must be sampled at the pack's boundary nodes");
  }
  if (!v.angles.empty()) {
    for (int i = 0; i < pack.boundary_count(); ++i) {
      if (std::abs(v.angles[i] - pack.boundary_angles[i]) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "velocity angles do not match the boundary nodes");
      }
    }
  }
}

double relative_spread(const Eigen::VectorXd& x) {
  const double mean = x.mean();
  return (x.maxCoeff() - x.minCoeff()) / mean;
}

}  // namespace

NormalVelocity boundary_velocity(const SpectralPack& pack, const std::function<double(double)>& f) {
  return sample_velocity(pack.boundary_angles, f);
}

double hadamard_derivative(const SpectralPack& pack, int k, const NormalVelocity& v) {
  require_on_boundary(pack, v);
  const Cluster& c = pack.cluster_of(k);
  if (c.size() != 1 || !c.complete) {
    throw Error(ErrorCode::DegenerateEigenvalue,
                "lambda_" + std::to_string(k) + " lies in a cluster; use qform_matrix");
  }
  const Eigen::VectorXd d = pack.trace(k);
  double s = 0.0;
  for (int i = 0; i < pack.boundary_count(); ++i) {
    s += pack.boundary_weights[i] * v.values[i] * d[i] * d[i];
  }
  return -s;
}

QFormMatrix qform_matrix(const SpectralPack& pack, const Cluster& cluster, const NormalVelocity& v) {
  require_on_boundary(pack, v);
  if (cluster.first < 1 || cluster.last > pack.count() || cluster.size() < 1) {
    throw Error(ErrorCode::InvalidArgument, "cluster outside the computed spectrum");
  }
  const int p = cluster.size();
  const Eigen::MatrixXd D = pack.normal_derivatives.middleCols(cluster.first - 1, p);
  QFormMatrix q;
  q.cluster = cluster;
  q.matrix.resize(p, p);
  // Same summation order as hadamard_derivative, so a 1x1 form matches it bitwise.
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      double s = 0.0;
      for (int l = 0; l < pack.boundary_count(); ++l) {
        s += pack.boundary_weights[l] * v.values[l] * D(l, i) * D(l, j);
      }
      q.matrix(i, j) = -s;
      q.matrix(j, i) = -s;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.matrix, Eigen::EigenvaluesOnly);
  q.eigenvalues = es.eigenvalues();
  return q;
}

OneSidedDerivatives one_sided_derivatives(const QFormMatrix& q, int k) {
  if (!q.cluster.contains(k)) throw Error(ErrorCode::InvalidArgument, "k outside the cluster");
  const int p = q.cluster.size();
  const int pos = k - q.cluster.first;  // 0-based position, ascending
  OneSidedDerivatives out;
  out.right = q.eigenvalues[pos];
  out.left = q.eigenvalues[p - 1 - pos];
  out.interior_extension = pos != 0 && pos != p - 1;
  return out;
}

SimpleCriticality criticality_simple(const SpectralPack& pack, int k, double tol) {
  const Cluster& c = pack.cluster_of(k);
  if (c.size() != 1 || !c.complete) {
    throw Error(ErrorCode::DegenerateEigenvalue,
                "lambda_" + std::to_string(k) + " lies in a cluster; use criticality_cluster");
  }
  SimpleCriticality r;
  r.k = k;
  r.tolerance = tol;
  r.spread = relative_spread(pack.trace(k).cwiseAbs());
  r.is_critical = r.spread <= tol;
  return r;
}

ClusterCriticality criticality_cluster(const SpectralPack& pack, const Cluster& cluster, double tol) {
  ClusterCriticality r;
  r.cluster = cluster;
  r.tolerance = tol;
  const int p = cluster.size();
  const Eigen::MatrixXd D = pack.normal_derivatives.middleCols(cluster.first - 1, p);
  const Eigen::VectorXd S = D.rowwise().squaredNorm();
  r.identity_spread = relative_spread(S);
  r.identity_critical = r.identity_spread <= tol;

  if (p == 1) {
    const SimpleCriticality s = criticality_simple(pack, cluster.first, tol);
    r.residual = s.spread;
    double ws = 0.0, w = 0.0;
    for (int i = 0; i < pack.boundary_count(); ++i) {
      ws += pack.boundary_weights[i] * S[i];
      w += pack.boundary_weights[i];
    }
    r.gram = Eigen::MatrixXd::Constant(1, 1, w / ws);
    r.psd_certificate = 1.0;
    r.is_critical = s.is_critical;
    return r;
  }

  // Unknowns: G_ii and 2 G_ij (i < j); rows are boundary nodes scaled by sqrt(w).
  const int unknowns = p * (p + 1) / 2;
  const int nb = pack.boundary_count();
  Eigen::MatrixXd A(nb, unknowns);
  Eigen::VectorXd rhs(nb);
  for (int l = 0; l < nb; ++l) {
    const double sw = std::sqrt(pack.boundary_weights[l]);
    int col = 0;
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) {
        A(l, col++) = sw * D(l, i) * D(l, j) * (i == j ? 1.0 : 2.0);
      }
    }
    rhs[l] = sw;
  }
  const Eigen::VectorXd g = A.colPivHouseholderQr().solve(rhs);
  r.gram.resize(p, p);
  int col = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      r.gram(i, j) = g[col];
      r.gram(j, i) = g[col];
      ++col;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.gram, Eigen::EigenvaluesOnly);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  r.psd_certificate = scale > 0.0 ? es.eigenvalues()[0] / scale : -1.0;
  const Eigen::VectorXd fitted = (D * r.gram).cwiseProduct(D).rowwise().sum();
  r.residual = fitted.mean() > 0.0 ? relative_spread(fitted) : std::numeric_limits<double>::infinity();
  r.is_critical = r.psd_certificate >= -tol && r.residual <= tol;
  return r;
}

double deformed_eigenvalue(const BoundaryShape& shape, int k, const NormalVelocity& v, double eps,
                           const FiniteDifferenceOptions& options) {
  const double area0 = geometry_report(shape, options.deform.quadrature).area;
  const DeformResult moved = deform(shape, v, eps, options.deform);
  const double area = geometry_report(moved.shape, options.deform.quadrature).area;
  const BoundaryShape rescaled = moved.shape.scaled(std::sqrt(area0 / area));
  const int count = options.eigen_count > 0 ? options.eigen_count : k + 2;
  return solve_on_shape(rescaled, options.refinement_level, count, options.eigen).eigenvalue(k);
}

FiniteDifferenceTable finite_difference_check(const BoundaryShape& shape, int k,
                                              const NormalVelocity& v,
                                              const std::vector<double>& eps_list,
                                              const FiniteDifferenceOptions& options) {
  const double integral = boundary_integral(shape, v);
  const double perimeter = geometry_report(shape, static_cast<int>(v.size())).perimeter;
  if (std::abs(integral) > 1e-8 * perimeter * std::max(v.max_abs(), 1e-300)) {
    throw Error(ErrorCode::InvalidArgument, "finite_difference_check needs a zero-mean velocity");
  }
  const int count = options.eigen_count > 0 ? options.eigen_count : k + 2;
  const SpectralPack base = solve_on_shape(shape, options.refinement_level, count, options.eigen);
  const NormalVelocity on_nodes = resample(v, base.boundary_angles);
  const Cluster& cluster = base.cluster_of(k);
  const OneSidedDerivatives pred = one_sided_derivatives(qform_matrix(base, cluster, on_nodes), k);

  FiniteDifferenceTable table;
  table.k = k;
  table.lambda = base.eigenvalue(k);
  table.cluster = cluster;
  for (double eps : eps_list) {
    const double plus = deformed_eigenvalue(shape, k, v, eps, options);
    const double minus = deformed_eigenvalue(shape, k, v, -eps, options);
    table.rows.push_back({eps, (plus - table.lambda) / eps, (table.lambda - minus) / eps,
                          pred.right, pred.left});
  }
  return table;
}

void write_fd_csv(std::ostream& out, const FiniteDifferenceTable& table) {
  out << "eps,fwd,bwd,pred_right,pred_left\n";
  for (const auto& r : table.rows) {
    out << fmt_double(r.eps) << ',' << fmt_double(r.forward) << ',' << fmt_double(r.backward) << ','
        << fmt_double(r.predicted_right) << ',' << fmt_double(r.predicted_left) << '\n';
  }
}

nlohmann::json to_json(const SimpleCriticality& report) {
  return nlohmann::json{{"k", report.k},
                        {"is_critical", report.is_critical},
                        {"spread", report.spread},
                        {"tolerance", report.tolerance}};
}

nlohmann::json to_json(const ClusterCriticality& report) {
  nlohmann::json gram = nlohmann::json::array();
  for (Eigen::Index i = 0; i < report.gram.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < report.gram.cols(); ++j) row.push_back(report.gram(i, j));
    gram.push_back(std::move(row));
  }
  return nlohmann::json{{"first", report.cluster.first},
                        {"last", report.cluster.last},
                        {"complete", report.cluster.complete},
                        {"is_critical", report.is_critical},
                        {"residual", report.residual},
                        {"psd_certificate", report.psd_certificate},
                        {"gram", std::move(gram)},
                        {"identity_spread", report.identity_spread},
                        {"identity_critical", report.identity_critical},
                        {"tolerance", report.tolerance}};
}

}  // namespace specshape
