#ifndef MLSGC_GRAPH_HPP
#define MLSGC_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mlsgc/errors.hpp"

namespace mlsgc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Convex combination weights over layers: nonnegative, summing to one.
class LayerWeights {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit LayerWeights(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw InvalidArgument("layer weights: empty weight vector");
    double sum = 0.0;
    for (double x : w_) {
      if (!std::isfinite(x) || x < 0.0)
        throw InvalidArgument("layer weights: negative or non-finite weight (off the simplex)");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
      throw InvalidArgument("layer weights: weights sum to " + std::to_string(sum) +
                            ", not 1 (off the simplex)");
  }

  /// Two-layer convenience: (w1, 1 - w1).
  static LayerWeights two_layer(double w1) { return LayerWeights({w1, 1.0 - w1}); }

  static LayerWeights uniform(std::size_t layers) {
    return LayerWeights(std::vector<double>(layers, 1.0 / static_cast<double>(layers)));
  }

  static LayerWeights vertex(std::size_t layers, std::size_t index) {
    std::vector<double> w(layers, 0.0);
    w.at(index) = 1.0;
    return LayerWeights(std::move(w));
  }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t l) const { return w_[l]; }
  const std::vector<double>& values() const noexcept { return w_; }

 private:
  std::vector<double> w_;
};

/// Node-to-cluster labels. Cluster ids are 1-based and contiguous: every id in
/// {1..K} must be used at least once.
class ClusterAssignment {
 public:
  explicit ClusterAssignment(std::vector<int> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw InvalidArgument("cluster assignment: no nodes");
    const int k_max = *std::max_element(labels_.begin(), labels_.end());
    if (*std::min_element(labels_.begin(), labels_.end()) < 1)
      throw InvalidArgument("cluster assignment: cluster ids must be >= 1");
    sizes_.assign(static_cast<std::size_t>(k_max), 0);
    members_.assign(static_cast<std::size_t>(k_max), {});
    for (std::size_t u = 0; u < labels_.size(); ++u) {
      const auto k = static_cast<std::size_t>(labels_[u] - 1);
      ++sizes_[k];
      members_[k].push_back(static_cast<int>(u));
    }
    for (std::size_t k = 0; k < sizes_.size(); ++k)
      if (sizes_[k] == 0)
        throw InvalidArgument("cluster assignment: cluster " + std::to_string(k + 1) + " is empty");
  }

  /// Contiguous blocks: the first sizes[0] nodes form cluster 1, and so on.
  static ClusterAssignment from_sizes(const std::vector<std::size_t>& sizes) {
    std::vector<int> labels;
    for (std::size_t k = 0; k < sizes.size(); ++k)
      labels.insert(labels.end(), sizes[k], static_cast<int>(k + 1));
    return ClusterAssignment(std::move(labels));
  }

  std::size_t num_nodes() const noexcept { return labels_.size(); }
  int num_clusters() const noexcept { return static_cast<int>(sizes_.size()); }
  int label(std::size_t u) const { return labels_[u]; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// Size n_k of cluster k (1-based).
  std::size_t size(int k) const { return sizes_.at(checked_index(k)); }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  /// Node indices of cluster k (1-based), ascending.
  const std::vector<int>& members(int k) const { return members_.at(checked_index(k)); }

  std::size_t n_min() const { return *std::min_element(sizes_.begin(), sizes_.end()); }
  std::size_t n_max() const { return *std::max_element(sizes_.begin(), sizes_.end()); }
  /// c = n_min / n_max.
  double size_ratio() const { return static_cast<double>(n_min()) / static_cast<double>(n_max()); }

 private:
  std::size_t checked_index(int k) const {
    if (k < 1 || k > num_clusters())
      throw InvalidArgument("unknown cluster id " + std::to_string(k));
    return static_cast<std::size_t>(k - 1);
  }

  std::vector<int> labels_;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<int>> members_;
};

/// Checks the weight-matrix contract: square, exactly symmetric, nonnegative,
/// zero diagonal. Throws InvalidArgument naming the first violation.
inline void validate_weight_matrix(const Matrix& W, const std::string& what = "weight matrix") {
  if (W.rows() != W.cols()) throw InvalidArgument(what + ": not square");
  const Eigen::Index n = W.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (W(j, j) != 0.0) throw InvalidArgument(what + ": nonzero diagonal entry");
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double a = W(i, j);
      if (!std::isfinite(a) || a < 0.0) throw InvalidArgument(what + ": negative or non-finite weight");
      if (a != W(j, i)) throw InvalidArgument(what + ": not symmetric");
    }
  }
}

/// L weighted layers over a shared node set. Immutable once built.
class MultilayerGraph {
 public:
  explicit MultilayerGraph(std::vector<Matrix> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw InvalidArgument("multilayer graph: no layers");
    const Eigen::Index n = layers_.front().rows();
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      if (layers_[l].rows() != n || layers_[l].cols() != n)
        throw InvalidArgument("multilayer graph: layer " + std::to_string(l + 1) + " has a different node count");
      validate_weight_matrix(layers_[l], "layer " + std::to_string(l + 1));
    }
  }

  std::size_t num_nodes() const noexcept { return static_cast<std::size_t>(layers_.front().rows()); }
  std::size_t num_layers() const noexcept { return layers_.size(); }
  /// 0-based layer access.
  const Matrix& layer(std::size_t l) const { return layers_.at(l); }
  const std::vector<Matrix>& layers() const noexcept { return layers_; }

 private:
  std::vector<Matrix> layers_;
};

/// Accumulates symmetric edges layer by layer; used by readers and generators.
class GraphBuilder {
 public:
  GraphBuilder(std::size_t n, std::size_t layers)
      : n_(n), layers_(layers, Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))) {}

  /// Sets edge (u, v) in 0-based layer l to weight w. Both triangle entries are written.
  void set_edge(std::size_t l, std::size_t u, std::size_t v, double w) {
    if (l >= layers_.size()) throw InvalidArgument("graph builder: layer out of range");
    if (u >= n_ || v >= n_) throw InvalidArgument("graph builder: node out of range");
    if (u == v) throw InvalidArgument("graph builder: self-loops are not supported");
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("graph builder: negative weight");
    layers_[l](static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = w;
    layers_[l](static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = w;
  }

  double weight(std::size_t l, std::size_t u, std::size_t v) const {
    return layers_.at(l)(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  }

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_layers() const noexcept { return layers_.size(); }

  MultilayerGraph build() && { return MultilayerGraph(std::move(layers_)); }
  MultilayerGraph build() const& { return MultilayerGraph(layers_); }

 private:
  std::size_t n_;
  std::vector<Matrix> layers_;
};

/// W^w = sum_l w_l W^(l).
inline Matrix aggregate(const MultilayerGraph& g, const LayerWeights& w) {
  if (w.size() != g.num_layers())
    throw InvalidArgument("aggregate: " + std::to_string(w.size()) + " weights for " +
                          std::to_string(g.num_layers()) + " layers");
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t l = 0; l < g.num_layers(); ++l)
    if (w[l] != 0.0) out.noalias() += w[l] * g.layer(l);
  return out;
}

/// Unnormalized Laplacian diag(W 1) - W.
inline Matrix laplacian(const Matrix& W) {
  validate_weight_matrix(W, "laplacian input");
  Matrix L = -W;
  L.diagonal() = W.rowwise().sum();
  return L;
}

/// Extracts the principal submatrix of W on the given node indices.
inline Matrix principal_submatrix(const Matrix& W, const std::vector<int>& nodes) {
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Matrix out(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) out(i, j) = W(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
  return out;
}

/// L_k^w: Laplacian of the subgraph induced on cluster k (1-based) of the
/// aggregated graph, using within-cluster edges only.
inline Matrix within_cluster_laplacian(const MultilayerGraph& g, const ClusterAssignment& part, int k,
                                       const LayerWeights& w) {
  if (part.num_nodes() != g.num_nodes())
    throw InvalidArgument("within-cluster laplacian: assignment length does not match node count");
  if (w.size() != g.num_layers()) throw InvalidArgument("within-cluster laplacian: weight/layer count mismatch");
  const auto& nodes = part.members(k);
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Matrix Wk = Matrix::Zero(m, m);
  for (std::size_t l = 0; l < g.num_layers(); ++l)
    if (w[l] != 0.0) Wk.noalias() += w[l] * principal_submatrix(g.layer(l), nodes);
  return laplacian(Wk);
}

/// Breadth-first search over strictly positive weights.
inline bool is_connected(const Matrix& W) {
  const Eigen::Index n = W.rows();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<Eigen::Index> frontier;
  frontier.push(0);
  seen[0] = 1;
  Eigen::Index visited = 1;
  while (!frontier.empty()) {
    const Eigen::Index u = frontier.front();
    frontier.pop();
    for (Eigen::Index v = 0; v < n; ++v) {
      if (!seen[static_cast<std::size_t>(v)] && W(v, u) > 0.0) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++visited;
        frontier.push(v);
      }
    }
  }
  return visited == n;
}

}  // namespace mlsgc

#endif  // MLSGC_GRAPH_HPP
