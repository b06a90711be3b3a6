#include "specshape/eig.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "specshape/errors.hpp"
#include "specshape/format.hpp"

namespace specshape {

namespace {

struct RawPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd residuals;
};

Eigen::VectorXd relative_residuals(const SparseMatrix& K, const SparseMatrix& M,
                                   const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors) {
  Eigen::VectorXd res(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const Eigen::VectorXd mu = M * vectors.col(i);
    const Eigen::VectorXd r = K * vectors.col(i) - values[i] * mu;
    res[i] = r.norm() / (std::abs(values[i]) * mu.norm());
  }
  return res;
}

RawPairs solve_dense(const SparseMatrix& K, const SparseMatrix& M, int count) {
  const Eigen::MatrixXd Kd(K);
  const Eigen::MatrixXd Md(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NotConverged, "dense generalized eigensolver failed");
  }
  RawPairs out;
  out.values = es.eigenvalues().head(count);
  out.vectors = es.eigenvectors().leftCols(count);
  for (int i = 0; i < count; ++i) {
    const double norm = std::sqrt(out.vectors.col(i).dot(M * out.vectors.col(i)));
    out.vectors.col(i) /= norm;
  }
  out.residuals = relative_residuals(K, M, out.values, out.vectors);
  return out;
}

// Block Krylov space of K^{-1} M with full M-orthogonalization, followed by
// Rayleigh-Ritz on the pencil (K, M). The basis keeps growing until the
// lowest `count` Ritz pairs meet the residual tolerance.
class BlockKrylov {
 public:
  BlockKrylov(const SparseMatrix& K, const SparseMatrix& M, const EigenOptions& opt, int count)
      : K_(K), M_(M), opt_(opt), count_(count), n_(K.rows()), rng_(opt.seed) {
    const int b = std::max(1, opt.block_size);
    block_ = b;
    const Eigen::Index automatic = std::max<Eigen::Index>(3 * count + 12 * b, count + 80);
    cap_ = std::min<Eigen::Index>(n_, opt.max_subspace > 0 ? opt.max_subspace : automatic);
    V_.resize(n_, cap_);
    MV_.resize(n_, cap_);
    KV_.resize(n_, cap_);
  }

  RawPairs run() {
    ldlt_.compute(K_);
    if (ldlt_.info() != Eigen::Success) {
      throw Error(ErrorCode::NotConverged, "sparse factorization of the stiffness matrix failed");
    }
    Eigen::MatrixXd start(n_, block_);
    fill_random(start);
    Eigen::Index block_begin = m_;
    append_block(start);
    Eigen::Index next_check = std::min<Eigen::Index>(cap_, count_ + 2 * block_);
    RawPairs best;
    while (true) {
      if (m_ >= next_check || m_ >= cap_) {
        if (m_ > count_ && rayleigh_ritz(best)) return best;
        if (m_ >= cap_) break;
        next_check = std::min<Eigen::Index>(cap_, m_ + std::max<Eigen::Index>(2 * block_, m_ / 5));
      }
      const Eigen::Index block_end = m_;
      if (block_end == block_begin) break;  // Krylov space exhausted
      Eigen::MatrixXd w = ldlt_.solve(MV_.middleCols(block_begin, block_end - block_begin));
      block_begin = block_end;
      append_block(w);
    }
    std::ostringstream os;
    os << "Krylov subspace cap " << cap_ << " reached";
    if (best.residuals.size() > 0) os << "; worst attained residual " << best.residuals.maxCoeff();
    throw Error(ErrorCode::NotConverged, os.str());
  }

 private:
  void fill_random(Eigen::MatrixXd& x) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = dist(rng_);
  }

  void append_block(Eigen::MatrixXd& w) {
    for (Eigen::Index j = 0; j < w.cols() && m_ < cap_; ++j) {
      Eigen::VectorXd x = w.col(j);
      for (int attempt = 0; attempt < 3; ++attempt) {
        const double before = std::sqrt(std::max(0.0, x.dot(M_ * x)));
        for (int pass = 0; pass < 2; ++pass) {
          if (m_ > 0) x -= V_.leftCols(m_) * (MV_.leftCols(m_).transpose() * x);
        }
        Eigen::VectorXd mx = M_ * x;
        const double norm = std::sqrt(std::max(0.0, x.dot(mx)));
        if (norm > 1e-10 * before && norm > 0.0) {
          V_.col(m_) = x / norm;
          MV_.col(m_) = mx / norm;
          KV_.col(m_) = K_ * V_.col(m_);
          ++m_;
          break;
        }
        // Deflated direction: replace by a fresh random vector.
        Eigen::MatrixXd r(n_, 1);
        fill_random(r);
        x = r.col(0);
      }
    }
  }

  bool rayleigh_ritz(RawPairs& out) {
    Eigen::MatrixXd H = V_.leftCols(m_).transpose() * KV_.leftCols(m_);
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::MatrixXd Y = es.eigenvectors().leftCols(count_);
    out.values = es.eigenvalues().head(count_);
    out.vectors = V_.leftCols(m_) * Y;
    const Eigen::MatrixXd KU = KV_.leftCols(m_) * Y;
    const Eigen::MatrixXd MU = MV_.leftCols(m_) * Y;
    out.residuals.resize(count_);
    for (Eigen::Index i = 0; i < count_; ++i) {
      out.residuals[i] = (KU.col(i) - out.values[i] * MU.col(i)).norm() /
                         (std::abs(out.values[i]) * MU.col(i).norm());
    }
    return out.residuals.maxCoeff() <= opt_.residual_tol;
  }

  const SparseMatrix& K_;
  const SparseMatrix& M_;
  const EigenOptions& opt_;
  Eigen::Index count_;
  Eigen::Index n_;
  Eigen::Index block_ = 4;
  Eigen::Index cap_ = 0;
  Eigen::Index m_ = 0;
  std::mt19937_64 rng_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  Eigen::MatrixXd V_, MV_, KV_;
};

}  // namespace

double SpectralPack::eigenvalue(int k) const {
  if (k < 1 || k > count()) throw Error(ErrorCode::InvalidArgument, "eigenvalue index out of range");
  return eigenvalues[k - 1];
}

Eigen::VectorXd SpectralPack::trace(int k) const {
  if (k < 1 || k > count()) throw Error(ErrorCode::InvalidArgument, "eigenvalue index out of range");
  return normal_derivatives.col(k - 1);
}

const Cluster& SpectralPack::cluster_of(int k) const {
  for (const auto& c : clusters) {
    if (c.contains(k)) return c;
  }
  throw Error(ErrorCode::InvalidArgument, "eigenvalue index out of range");
}

int SpectralPack::complete_count() const {
  int n = 0;
  for (const auto& c : clusters) {
    if (c.complete) n = c.last;
  }
  return n;
}

std::vector<Cluster> partition_clusters(const Eigen::VectorXd& eigenvalues, double cluster_tol) {
  std::vector<Cluster> out;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    if (i > 0 && eigenvalues[i] - eigenvalues[i - 1] <= cluster_tol * eigenvalues[i]) {
      out.back().last = k;
    } else {
      out.push_back(Cluster{k, k, true});
    }
  }
  return out;
}

Eigen::VectorXd normal_derivative_trace(const DirichletSystem& system, double lambda,
                                        const Eigen::VectorXd& interior_coeffs) {
  const Eigen::VectorXd full = system.expand(interior_coeffs);
  const Eigen::VectorXd r = system.stiffness_full * full - lambda * (system.mass_full * full);
  Eigen::VectorXd out(system.boundary_count());
  for (int i = 0; i < system.boundary_count(); ++i) {
    out[i] = r[system.boundary_nodes[i]] / system.boundary_weights[i];
  }
  return out;
}

SpectralPack solve_spectrum(const DirichletSystem& system, int k, const EigenOptions& options) {
  const int n = system.interior_count();
  if (k < 1 || k >= n) {
    throw Error(ErrorCode::InvalidArgument,
                "eigenpair count must satisfy 1 <= k < interior node count (" + std::to_string(n) + ")");
  }
  // One extra pair tells whether the last cluster is cut off.
  const int count = std::min(k + 1, n - 1);
  RawPairs raw = n <= options.dense_threshold
                     ? solve_dense(system.stiffness, system.mass, count)
                     : BlockKrylov(system.stiffness, system.mass, options, count).run();
  if (raw.residuals.head(k).maxCoeff() > options.residual_tol) {
    std::ostringstream os;
    os << "attained residual " << raw.residuals.head(k).maxCoeff() << " above tolerance "
       << options.residual_tol;
    throw Error(ErrorCode::NotConverged, os.str());
  }

  SpectralPack pack;
  pack.cluster_tol = options.cluster_tol;
  pack.eigenvalues = raw.values.head(k);
  pack.eigenvectors = raw.vectors.leftCols(k);
  pack.residuals = raw.residuals.head(k);
  for (int i = 0; i < k; ++i) {
    Eigen::Index arg;
    pack.eigenvectors.col(i).cwiseAbs().maxCoeff(&arg);
    if (pack.eigenvectors(arg, i) < 0.0) pack.eigenvectors.col(i) *= -1.0;
  }
  const auto all = partition_clusters(raw.values, options.cluster_tol);
  for (const auto& c : all) {
    if (c.first > k) break;
    Cluster kept = c;
    if (kept.last > k) {
      kept.last = k;
      kept.complete = false;
    }
    pack.clusters.push_back(kept);
  }

  pack.normal_derivatives.resize(system.boundary_count(), k);
  for (int i = 0; i < k; ++i) {
    pack.normal_derivatives.col(i) =
        normal_derivative_trace(system, pack.eigenvalues[i], pack.eigenvectors.col(i));
  }
  pack.boundary_angles = system.boundary_angles;
  pack.boundary_points = system.boundary_points;
  pack.boundary_weights = system.boundary_weights;
  pack.area = system.area;
  pack.refinement_level = system.refinement_level;
  return pack;
}

SpectralPack solve_on_shape(const BoundaryShape& shape, int refinement_level, int k,
                            const EigenOptions& options) {
  return solve_spectrum(assemble(generate_mesh(shape, refinement_level)), k, options);
}

void write_spectrum_csv(std::ostream& out, const SpectralPack& pack) {
  out << "index,eigenvalue,cluster_id,residual\n";
  for (int k = 1; k <= pack.count(); ++k) {
    int cluster_id = 0;
    for (std::size_t c = 0; c < pack.clusters.size(); ++c) {
      if (pack.clusters[c].contains(k)) cluster_id = static_cast<int>(c) + 1;
    }
    out << k << ',' << fmt_double(pack.eigenvalue(k)) << ',' << cluster_id << ','
        << fmt_double(pack.residuals[k - 1]) << '\n';
  }
}

}  // namespace specshape
