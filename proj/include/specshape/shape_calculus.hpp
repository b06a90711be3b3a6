#pragma once

// First-order shape calculus for Dirichlet eigenvalues: boundary (Hadamard)
// derivatives, the restricted quadratic form on a degenerate eigenspace,
// one-sided derivatives and criticality tests.

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "specshape/domain.hpp"
#include "specshape/eig.hpp"

namespace specshape {

/// Samples f at the pack's boundary node angles.
NormalVelocity boundary_velocity(const SpectralPack& pack, const std::function<double(double)>& f);

/// d lambda_k / d eps = -int v (d phi_k / d nu)^2 ds with the lumped boundary
/// weights. Throws DegenerateEigenvalue if lambda_k belongs to a cluster of size > 1.
double hadamard_derivative(const SpectralPack& pack, int k, const NormalVelocity& v);

/// Q_ij = -int v (d phi_i / d nu)(d phi_j / d nu) ds on one cluster.
struct QFormMatrix {
  Cluster cluster;
  Eigen::MatrixXd matrix;
  /// Ascending.
  Eigen::VectorXd eigenvalues;
};

QFormMatrix qform_matrix(const SpectralPack& pack, const Cluster& cluster, const NormalVelocity& v);

struct OneSidedDerivatives {
  double left = 0.0;   // eps -> 0-
  double right = 0.0;  // eps -> 0+
  /// True when k is neither first nor last of a cluster of size >= 3, where
  /// the order-statistic rule extends the min/max characterization.
  bool interior_extension = false;
};

/// With q the 1-based position of k in its cluster, the right derivative is
/// the q-th smallest eigenvalue of Q and the left derivative the q-th largest.
OneSidedDerivatives one_sided_derivatives(const QFormMatrix& q, int k);

struct SimpleCriticality {
  int k = 1;
  bool is_critical = false;
  /// (max - min) / mean of |d phi_k / d nu| over the boundary nodes.
  double spread = 0.0;
  double tolerance = 0.0;
};

SimpleCriticality criticality_simple(const SpectralPack& pack, int k, double tol);

struct ClusterCriticality {
  Cluster cluster;
  bool is_critical = false;
  /// (max - min) / mean of sum_ij G_ij (d phi_i/d nu)(d phi_j/d nu) for the fitted G.
  double residual = 0.0;
  /// Smallest eigenvalue of G / largest |eigenvalue| (negative means indefinite).
  double psd_certificate = 0.0;
  Eigen::MatrixXd gram;
  /// Same spread for G = I, i.e. for sum_i (d phi_i / d nu)^2.
  double identity_spread = 0.0;
  bool identity_critical = false;
  double tolerance = 0.0;
};

/// Searches a PSD G with sum_ij G_ij (d phi_i/d nu)(d phi_j/d nu) = 1 on the
/// boundary by weighted least squares over symmetric matrices. A cluster of
/// size one is delegated to criticality_simple.
ClusterCriticality criticality_cluster(const SpectralPack& pack, const Cluster& cluster, double tol);

struct FiniteDifferenceOptions {
  int refinement_level = 32;
  EigenOptions eigen;
  DeformOptions deform;
  /// Pairs computed per solve; 0 means k + 2.
  int eigen_count = 0;
};

struct FiniteDifferenceRow {
  double eps = 0.0;
  double forward = 0.0;
  double backward = 0.0;
  double predicted_right = 0.0;
  double predicted_left = 0.0;
};

struct FiniteDifferenceTable {
  int k = 1;
  double lambda = 0.0;
  Cluster cluster;
  std::vector<FiniteDifferenceRow> rows;

  /// (fwd + bwd) / 2 at row i.
  double central(std::size_t i) const { return 0.5 * (rows[i].forward + rows[i].backward); }
};

/// Area-preserving eigenvalue of deform(shape, v, eps): the deformed shape
/// is rescaled to the original area before solving.
double deformed_eigenvalue(const BoundaryShape& shape, int k, const NormalVelocity& v, double eps,
                           const FiniteDifferenceOptions& options);

/// One-sided difference quotients of lambda_k along deform(shape, v, +-eps)
/// (rescaled to constant area) next to the predicted one-sided derivatives.
/// v must be zero-mean on a uniform angle grid.
FiniteDifferenceTable finite_difference_check(const BoundaryShape& shape, int k,
                                              const NormalVelocity& v,
                                              const std::vector<double>& eps_list,
                                              const FiniteDifferenceOptions& options = {});

/// Columns exactly: eps, fwd, bwd, pred_right, pred_left.
void write_fd_csv(std::ostream& out, const FiniteDifferenceTable& table);

nlohmann::json to_json(const SimpleCriticality& report);
nlohmann::json to_json(const ClusterCriticality& report);

}  // namespace specshape
