#ifndef MLSGC_TESTS_SUPPORT_HPP
#define MLSGC_TESTS_SUPPORT_HPP

// Test-only helpers: small graph builders, random instance generators, and
// oracles that do not share code paths with the library under test.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "mlsgc/graph.hpp"
#include "mlsgc/random.hpp"

namespace mlsgc::testing {

/// Full spectrum of a symmetric matrix by Eigen's dense solver, ascending.
/// Independent of the LAPACK subset solver used by the library.
inline Vector oracle_spectrum(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline Eigen::SelfAdjointEigenSolver<Matrix> oracle_eigensystem(const Matrix& A) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(A);
}

/// Laplacian written out entry by entry from its definition.
inline Matrix oracle_laplacian(const Matrix& W) {
  const Eigen::Index n = W.rows();
  Matrix L(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double degree = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) degree += W(i, j);
    for (Eigen::Index j = 0; j < n; ++j) L(i, j) = (i == j ? degree : 0.0) - W(i, j);
  }
  return L;
}

inline Matrix path_graph(Eigen::Index n, double w = 1.0) {
  Matrix W = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) W(i, i + 1) = W(i + 1, i) = w;
  return W;
}

inline Matrix complete_graph(Eigen::Index n, double w = 1.0) {
  Matrix W = Matrix::Constant(n, n, w);
  W.diagonal().setZero();
  return W;
}

/// Two cliques of size m joined by one edge of weight `bridge`.
inline Matrix two_cliques(Eigen::Index m, double bridge) {
  Matrix W = Matrix::Zero(2 * m, 2 * m);
  W.topLeftCorner(m, m) = complete_graph(m);
  W.bottomRightCorner(m, m) = complete_graph(m);
  W(m - 1, m) = W(m, m - 1) = bridge;
  return W;
}

/// Random symmetric nonnegative weight matrix; each pair present with
/// probability `density`, weight uniform on (0, max_weight].
inline Matrix random_weights(Rng& rng, Eigen::Index n, double density, double max_weight = 1.0) {
  Matrix W = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (uniform01(rng) < density) W(i, j) = W(j, i) = max_weight * uniform_open01(rng);
  return W;
}

inline MultilayerGraph random_multilayer(Rng& rng, Eigen::Index n, std::size_t layers, double density) {
  std::vector<Matrix> ls;
  for (std::size_t l = 0; l < layers; ++l) ls.push_back(random_weights(rng, n, density));
  return MultilayerGraph(std::move(ls));
}

/// Random point on the simplex that sums to 1 up to rounding of the last entry.
inline LayerWeights random_simplex(Rng& rng, std::size_t L) {
  std::vector<double> w(L);
  double s = 0.0;
  for (auto& x : w) {
    x = -std::log(uniform_open01(rng));
    s += x;
  }
  for (auto& x : w) x /= s;
  double head = 0.0;
  for (std::size_t l = 0; l + 1 < L; ++l) head += w[l];
  w.back() = std::max(0.0, 1.0 - head);
  return LayerWeights(std::move(w));
}

/// Labels with every cluster in 1..K used, otherwise uniform.
inline std::vector<int> random_labels(Rng& rng, std::size_t n, int K) {
  std::vector<int> labels(n);
  for (std::size_t u = 0; u < n; ++u)
    labels[u] = u < static_cast<std::size_t>(K) ? static_cast<int>(u + 1)
                                                 : 1 + static_cast<int>(uniform01(rng) * K);
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

/// Detectability by enumerating every relabelling of the predicted ids.
inline double brute_force_detectability(const std::vector<int>& predicted, const std::vector<int>& truth) {
  int size = 0;
  for (int p : predicted) size = std::max(size, p);
  for (int t : truth) size = std::max(size, t);
  std::vector<int> perm(static_cast<std::size_t>(size));
  std::iota(perm.begin(), perm.end(), 1);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t u = 0; u < predicted.size(); ++u)
      if (perm[static_cast<std::size_t>(predicted[u] - 1)] == truth[u]) ++hits;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(predicted.size());
}

}  // namespace mlsgc::testing

#endif  // MLSGC_TESTS_SUPPORT_HPP
