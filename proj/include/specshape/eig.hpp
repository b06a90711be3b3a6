#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "specshape/fem.hpp"

namespace specshape {

struct EigenOptions {
  /// i and i+1 share a cluster iff lambda_{i+1} - lambda_i <= cluster_tol * lambda_{i+1}.
  double cluster_tol = 1e-4;
  /// ||K u - lambda M u|| / (lambda ||M u||) required for every returned pair.
  double residual_tol = 1e-8;
  std::uint64_t seed = 0x5eed5eedULL;
  /// Block Krylov width; must exceed the largest multiplicity to be resolved by 2.
  int block_size = 4;
  /// Systems with at most this many interior nodes use a dense solver.
  int dense_threshold = 400;
  /// Krylov subspace cap; 0 selects automatically from k.
  int max_subspace = 0;
};

/// Eigenvalue indices are 1-based, matching lambda_1 <= lambda_2 <= ...
struct Cluster {
  int first = 1;
  int last = 1;
  /// False when the cluster may continue beyond the last computed pair.
  bool complete = true;

  int size() const { return last - first + 1; }
  bool contains(int k) const { return first <= k && k <= last; }
  bool operator==(const Cluster&) const = default;
};

struct SpectralPack {
  Eigen::VectorXd eigenvalues;
  /// Interior-node coefficients, one M-orthonormal column per eigenvalue.
  Eigen::MatrixXd eigenvectors;
  /// d(phi)/d(nu) at boundary nodes, one column per eigenvalue.
  Eigen::MatrixXd normal_derivatives;
  Eigen::VectorXd residuals;
  std::vector<Cluster> clusters;
  double cluster_tol = 1e-4;

  std::vector<double> boundary_angles;
  std::vector<Point2> boundary_points;
  std::vector<double> boundary_weights;
  double area = 0.0;
  int refinement_level = 0;

  int count() const { return static_cast<int>(eigenvalues.size()); }
  int boundary_count() const { return static_cast<int>(boundary_weights.size()); }
  double eigenvalue(int k) const;
  Eigen::VectorXd trace(int k) const;
  const Cluster& cluster_of(int k) const;
  bool is_simple(int k) const { return cluster_of(k).size() == 1; }
  /// Clusters that are fully contained in the computed range.
  int complete_count() const;
};

std::vector<Cluster> partition_clusters(const Eigen::VectorXd& eigenvalues, double cluster_tol);

/// (K_full phi - lambda M_full phi)_i / w_i at each boundary node i.
Eigen::VectorXd normal_derivative_trace(const DirichletSystem& system, double lambda,
                                        const Eigen::VectorXd& interior_coeffs);

/// Lowest k eigenpairs of K u = lambda M u on the interior nodes.
SpectralPack solve_spectrum(const DirichletSystem& system, int k, const EigenOptions& options = {});

/// Mesh, assemble and solve in one call.
SpectralPack solve_on_shape(const BoundaryShape& shape, int refinement_level, int k,
                            const EigenOptions& options = {});

/// Columns: index, eigenvalue, cluster_id, residual.
void write_spectrum_csv(std::ostream& out, const SpectralPack& pack);

}  // namespace specshape
