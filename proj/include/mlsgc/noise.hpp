#ifndef MLSGC_NOISE_HPP
#define MLSGC_NOISE_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mlsgc/errors.hpp"
#include "mlsgc/graph.hpp"

namespace mlsgc {

/// Between-cluster noise parameters per layer: edge probability p_ij and mean
/// edge weight Wbar_ij for every cluster pair i != j. The noise level of a
/// block is t_ij = p_ij * Wbar_ij.
class NoiseSpec {
 public:
  /// Block-wise identical noise: one (p, Wbar) per layer.
  static NoiseSpec identical(std::vector<double> p, std::vector<double> mean_weight, int K) {
    if (p.size() != mean_weight.size()) throw InvalidArgument("noise spec: p and mean weight lengths differ");
    std::vector<Matrix> pm, wm;
    for (std::size_t l = 0; l < p.size(); ++l) {
      pm.push_back(Matrix::Constant(K, K, p[l]));
      wm.push_back(Matrix::Constant(K, K, mean_weight[l]));
    }
    return NoiseSpec(std::move(pm), std::move(wm), true);
  }

  /// Unweighted block-wise identical noise (Wbar = 1).
  static NoiseSpec identical_unweighted(std::vector<double> p, int K) {
    std::vector<double> ones(p.size(), 1.0);
    return identical(std::move(p), std::move(ones), K);
  }

  /// Block-wise non-identical noise: one symmetric K x K matrix of p_ij and of
  /// Wbar_ij per layer (diagonals ignored).
  static NoiseSpec non_identical(std::vector<Matrix> p, std::vector<Matrix> mean_weight) {
    return NoiseSpec(std::move(p), std::move(mean_weight), false);
  }

  std::size_t num_layers() const noexcept { return p_.size(); }
  int num_clusters() const noexcept { return static_cast<int>(p_.front().rows()); }
  bool is_identical() const noexcept { return identical_; }

  /// 0-based layer, 1-based clusters.
  double p(std::size_t l, int i, int j) const { return p_.at(l)(i - 1, j - 1); }
  double mean_weight(std::size_t l, int i, int j) const { return wbar_.at(l)(i - 1, j - 1); }
  double t(std::size_t l, int i, int j) const { return p(l, i, j) * mean_weight(l, i, j); }

  /// t^(l) for block-wise identical noise.
  double t(std::size_t l) const {
    if (!identical_) throw InvalidArgument("noise spec: t^(l) is defined only for block-wise identical noise");
    return num_clusters() > 1 ? t(l, 1, 2) : p_.at(l)(0, 0) * wbar_.at(l)(0, 0);
  }

  /// max_{i != j} t_ij^(l).
  double t_max(std::size_t l) const {
    double best = 0.0;
    const int K = num_clusters();
    if (K == 1) return p_.at(l)(0, 0) * wbar_.at(l)(0, 0);
    for (int i = 1; i <= K; ++i)
      for (int j = 1; j <= K; ++j)
        if (i != j) best = std::max(best, t(l, i, j));
    return best;
  }

 private:
  NoiseSpec(std::vector<Matrix> p, std::vector<Matrix> wbar, bool identical)
      : p_(std::move(p)), wbar_(std::move(wbar)), identical_(identical) {
    if (p_.empty()) throw InvalidArgument("noise spec: no layers");
    if (p_.size() != wbar_.size()) throw InvalidArgument("noise spec: p and mean weight layer counts differ");
    const Eigen::Index K = p_.front().rows();
    for (std::size_t l = 0; l < p_.size(); ++l) {
      const Matrix& P = p_[l];
      const Matrix& M = wbar_[l];
      if (P.rows() != K || P.cols() != K || M.rows() != K || M.cols() != K)
        throw InvalidArgument("noise spec: block matrices must all be K x K");
      for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index j = 0; j < K; ++j) {
          if (i == j && K > 1) continue;
          if (!(P(i, j) >= 0.0 && P(i, j) <= 1.0)) throw InvalidArgument("noise spec: probability outside [0,1]");
          if (!(M(i, j) > 0.0) || !std::isfinite(M(i, j)))
            throw InvalidArgument("noise spec: mean weight must be positive");
          if (P(i, j) != P(j, i) || M(i, j) != M(j, i)) throw InvalidArgument("noise spec: blocks not symmetric");
        }
    }
  }

  std::vector<Matrix> p_;
  std::vector<Matrix> wbar_;
  bool identical_;
};

}  // namespace mlsgc

#endif  // MLSGC_NOISE_HPP
