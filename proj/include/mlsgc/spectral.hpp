#ifndef MLSGC_SPECTRAL_HPP
#define MLSGC_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "mlsgc/errors.hpp"
#include "mlsgc/graph.hpp"

namespace mlsgc {

struct EigenPairs {
  Vector values;   // ascending
  Matrix vectors;  // column i pairs with values(i)
};

/// Upper bound on the spectral radius of a symmetric matrix (Gershgorin).
inline double gershgorin_bound(const Matrix& A) {
  return A.cwiseAbs().rowwise().sum().maxCoeff();
}

namespace detail {

/// LAPACK dsyevr on the index range [1, m]. Returns values and optionally vectors.
inline EigenPairs dsyevr_smallest(const Matrix& A, Eigen::Index m, bool want_vectors) {
  const Eigen::Index n = A.rows();
  Matrix work = A;
  Vector values(n);
  Matrix vectors(want_vectors ? n : 1, want_vectors ? m : 1);
  std::vector<lapack_int> support(static_cast<std::size_t>(2 * std::max<Eigen::Index>(m, 1)));
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'I', 'L',
                                         static_cast<lapack_int>(n), work.data(), static_cast<lapack_int>(n), 0.0, 0.0,
                                         1, static_cast<lapack_int>(m), abstol, &found, values.data(), vectors.data(),
                                         static_cast<lapack_int>(vectors.rows()), support.data());
  if (info != 0) throw NumericalError("eigensolver failed to converge (dsyevr info=" + std::to_string(info) + ")");
  if (found != static_cast<lapack_int>(m))
    throw NumericalError("eigensolver returned " + std::to_string(found) + " of " + std::to_string(m) + " eigenpairs");
  EigenPairs out;
  out.values = values.head(m);
  if (want_vectors) out.vectors = std::move(vectors);
  return out;
}

}  // namespace detail

/// The m smallest eigenpairs of a symmetric matrix, ascending, with
/// orthonormal eigenvectors. Each pair is checked against the residual
/// tolerance 1e-7 * max(1, spectral radius bound); failures throw.
inline EigenPairs smallest_eigenpairs(const Matrix& L, Eigen::Index m) {
  if (L.rows() != L.cols()) throw InvalidArgument("smallest_eigenpairs: matrix not square");
  if (m < 1 || m > L.rows())
    throw InvalidArgument("smallest_eigenpairs: requested " + std::to_string(m) + " pairs of a " +
                          std::to_string(L.rows()) + "x" + std::to_string(L.rows()) + " matrix");
  EigenPairs pairs = detail::dsyevr_smallest(L, m, true);
  const double tol = 1e-7 * std::max(1.0, gershgorin_bound(L));
  const Matrix residual = L * pairs.vectors - pairs.vectors * pairs.values.asDiagonal();
  for (Eigen::Index j = 0; j < m; ++j)
    if (!(residual.col(j).norm() <= tol))
      throw NumericalError("eigenpair " + std::to_string(j + 1) + " failed the residual check");
  return pairs;
}

/// The m smallest eigenvalues only.
inline Vector smallest_eigenvalues(const Matrix& L, Eigen::Index m) {
  if (L.rows() != L.cols()) throw InvalidArgument("smallest_eigenvalues: matrix not square");
  if (m < 1 || m > L.rows()) throw InvalidArgument("smallest_eigenvalues: count out of range");
  return detail::dsyevr_smallest(L, m, false).values;
}

/// S_{2:K}(L) = lambda_2 + ... + lambda_K.
inline double partial_eigenvalue_sum(const Matrix& L, int K) {
  if (K < 2) throw InvalidArgument("partial_eigenvalue_sum: K must be >= 2");
  if (K > L.rows())
    throw InvalidArgument("partial_eigenvalue_sum: K=" + std::to_string(K) + " exceeds n=" + std::to_string(L.rows()));
  const Vector lambda = smallest_eigenvalues(L, K);
  return lambda.tail(K - 1).sum();
}

struct SpectralEmbedding {
  int K = 0;
  Vector eigenvalues;                     // lambda_1..lambda_K of L
  std::optional<double> next_eigenvalue;  // lambda_{K+1}, when K < n
  Matrix Y;                               // n x (K-1), column j pairs with lambda_{j+2}
  bool tie_at_k = false;                  // lambda_K == lambda_{K+1} within tolerance
  bool connected = true;
};

/// Spectral embedding of a Laplacian: the minimizer of trace(X^T L X) over
/// X^T X = I, X^T 1 = 0.
///
/// The all-ones direction is removed by shifting its eigenvalue above the
/// spectrum (L + c 11^T / n, c > lambda_max), so the K-1 smallest eigenpairs
/// of the shifted matrix are lambda_2..lambda_K of L with centered
/// eigenvectors, connected or not.
inline SpectralEmbedding embedding(const Matrix& L, int K) {
  if (K < 2) throw InvalidArgument("embedding: K must be >= 2");
  const Eigen::Index n = L.rows();
  if (L.cols() != n) throw InvalidArgument("embedding: matrix not square");
  if (K > n) throw InvalidArgument("embedding: K exceeds node count");

  const double shift = gershgorin_bound(L) + 1.0;
  Matrix deflated = L;
  deflated.array() += shift / static_cast<double>(n);
  const Eigen::Index m = std::min<Eigen::Index>(K, n - 1);
  const EigenPairs pairs = smallest_eigenpairs(deflated, m);

  SpectralEmbedding emb;
  emb.K = K;
  emb.eigenvalues.resize(K);
  emb.eigenvalues(0) = L.sum() / static_cast<double>(n);  // Rayleigh quotient of the ones vector
  emb.eigenvalues.tail(K - 1) = pairs.values.head(K - 1);
  emb.Y = pairs.vectors.leftCols(K - 1);
  if (m == K) {
    emb.next_eigenvalue = pairs.values(K - 1);
    const double lam_k = emb.eigenvalues(K - 1);
    emb.tie_at_k = (*emb.next_eigenvalue - lam_k) <= 1e-8 * std::max(1.0, std::abs(*emb.next_eigenvalue));
  }
  // Off-diagonal entries of -L are the edge weights.
  Matrix W = -L;
  W.diagonal().setZero();
  emb.connected = is_connected(W);
  return emb;
}

struct SubspaceDistance {
  Vector principal_angles;  // ascending, in [0, pi/2]
  double sin_theta_frobenius = 0.0;
};

/// Principal angles between the column spaces of two n x (K-1) matrices with
/// orthonormal columns, and the Frobenius norm of the entrywise sines.
inline SubspaceDistance principal_angles(const Matrix& Y, const Matrix& Ytilde) {
  if (Y.rows() != Ytilde.rows() || Y.cols() != Ytilde.cols())
    throw InvalidArgument("principal_angles: dimension mismatch");
  const auto check = [](const Matrix& X, const char* name) {
    const Matrix gram = X.transpose() * X;
    const double err = (gram - Matrix::Identity(X.cols(), X.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-6) throw InvalidArgument(std::string("principal_angles: ") + name + " columns are not orthonormal");
  };
  check(Y, "first");
  check(Ytilde, "second");

  const Matrix cross = Y.transpose() * Ytilde;
  Eigen::JacobiSVD<Matrix> svd(cross);
  const Vector sigma = svd.singularValues();  // descending
  SubspaceDistance d;
  d.principal_angles.resize(sigma.size());
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double s = std::clamp(sigma(i), 0.0, 1.0);
    d.principal_angles(i) = std::acos(s);
    const double sine = std::sin(d.principal_angles(i));
    sum_sq += sine * sine;
  }
  d.sin_theta_frobenius = std::sqrt(sum_sq);
  return d;
}

}  // namespace mlsgc

#endif  // MLSGC_SPECTRAL_HPP
