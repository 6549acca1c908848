#ifndef MLSGC_PHASE_HPP
#define MLSGC_PHASE_HPP

// Closed-form phase-transition quantities for spectral clustering of a convex
// layer aggregate under the signal-plus-noise model: aggregated noise levels,
// bounds on the critical noise level, predicted partial eigenvalue sums,
// eigenvector separability statistics, the subspace perturbation bound and
// the critical layer weight of a two-layer graph.
//
// Every quantity here needs the ground-truth clusters; this is a theory
// validation toolkit, not a blind estimator.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlsgc/errors.hpp"
#include "mlsgc/graph.hpp"
#include "mlsgc/noise.hpp"
#include "mlsgc/spectral.hpp"

namespace mlsgc {

struct AggregatedNoise {
  std::optional<double> t_w;  // only for block-wise identical noise
  double t_max_w = 0.0;
};

/// t^w = sum_l w_l t^(l) and t_max^w = sum_l w_l t_max^(l).
inline AggregatedNoise aggregated_noise(const NoiseSpec& noise, const LayerWeights& w) {
  if (noise.num_layers() != w.size()) throw InvalidArgument("aggregated_noise: layer count mismatch");
  AggregatedNoise out;
  double t_max = 0.0;
  for (std::size_t l = 0; l < w.size(); ++l) t_max += w[l] * noise.t_max(l);
  out.t_max_w = t_max;
  if (noise.is_identical()) {
    double t = 0.0;
    for (std::size_t l = 0; l < w.size(); ++l) t += w[l] * noise.t(l);
    out.t_w = t;
  }
  return out;
}

struct CriticalBounds {
  double t_lb = 0.0;
  double t_ub = 0.0;
  double min_partial_sum = 0.0;  // min_k S_{2:K}(L_k^w)
  double c_star = 0.0;           // min_partial_sum / n
};

namespace detail {

inline double cluster_partial_sum(const Matrix& Lk, int K) {
  // A cluster smaller than K cannot host K-1 nontrivial directions; its
  // partial sum uses every eigenvalue it has.
  const int m = std::min<int>(K, static_cast<int>(Lk.rows()));
  if (m < 2) return 0.0;
  // Laplacians are PSD; drop roundoff below zero.
  return std::max(0.0, partial_eigenvalue_sum(Lk, m));
}

inline void require_truth(const MultilayerGraph& g, const ClusterAssignment& truth) {
  if (truth.num_nodes() != g.num_nodes()) throw InvalidArgument("ground truth length does not match node count");
  if (truth.num_clusters() < 2) throw InvalidArgument("phase analysis needs K >= 2 clusters");
}

}  // namespace detail

/// Bounds t_LB^w <= t*^w <= t_UB^w from the sparsest aggregated cluster:
/// min_k S_{2:K}(L_k^w) / ((K-1) n_max) and the same with n_min.
inline CriticalBounds critical_bounds(const MultilayerGraph& g, const ClusterAssignment& truth, const LayerWeights& w) {
  detail::require_truth(g, truth);
  const int K = truth.num_clusters();
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= K; ++k)
    best = std::min(best, detail::cluster_partial_sum(within_cluster_laplacian(g, truth, k, w), K));
  CriticalBounds b;
  b.min_partial_sum = best;
  b.t_lb = best / (static_cast<double>(K - 1) * static_cast<double>(truth.n_max()));
  b.t_ub = best / (static_cast<double>(K - 1) * static_cast<double>(truth.n_min()));
  b.c_star = best / static_cast<double>(g.num_nodes());
  return b;
}

/// S_{2:K}(L_k^(l)) for every layer l (rows) and cluster k (columns).
inline Matrix layer_cluster_partial_sums(const MultilayerGraph& g, const ClusterAssignment& truth) {
  detail::require_truth(g, truth);
  const int K = truth.num_clusters();
  Matrix S(static_cast<Eigen::Index>(g.num_layers()), K);
  for (std::size_t l = 0; l < g.num_layers(); ++l) {
    const LayerWeights only = LayerWeights::vertex(g.num_layers(), l);
    for (int k = 1; k <= K; ++k)
      S(static_cast<Eigen::Index>(l), k - 1) = detail::cluster_partial_sum(within_cluster_laplacian(g, truth, k, only), K);
  }
  return S;
}

/// min_k sum_l w_l S_{2:K}(L_k^(l)) / n: the layer-wise form of the intercept.
/// It never exceeds critical_bounds().c_star because S_{2:K} is concave.
inline double c_star_layerwise(const Matrix& layer_sums, const LayerWeights& w, std::size_t n) {
  if (static_cast<std::size_t>(layer_sums.rows()) != w.size()) throw InvalidArgument("c_star_layerwise: layer count mismatch");
  Eigen::RowVectorXd combined = Eigen::RowVectorXd::Zero(layer_sums.cols());
  for (std::size_t l = 0; l < w.size(); ++l) combined += w[l] * layer_sums.row(static_cast<Eigen::Index>(l));
  return combined.minCoeff() / static_cast<double>(n);
}

/// w-independent lower bound on t_LB^w: min over clusters and layers of
/// S_{2:K}(L_k^(l)) / ((K-1) n_max).
inline double universal_lower_bound(const Matrix& layer_sums, const ClusterAssignment& truth) {
  const int K = truth.num_clusters();
  return layer_sums.minCoeff() / (static_cast<double>(K - 1) * static_cast<double>(truth.n_max()));
}

inline double universal_lower_bound(const MultilayerGraph& g, const ClusterAssignment& truth) {
  return universal_lower_bound(layer_cluster_partial_sums(g, truth), truth);
}

enum class Regime { below, above, boundary, indeterminate };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::below: return "below";
    case Regime::above: return "above";
    case Regime::boundary: return "boundary";
    case Regime::indeterminate: return "indeterminate";
  }
  return "?";
}

/// below iff t < t_LB, above iff t > t_UB; boundary only when the bracket has
/// collapsed onto t; otherwise indeterminate.
inline Regime classify_regime(double t, double t_lb, double t_ub) {
  if (t < t_lb) return Regime::below;
  if (t > t_ub) return Regime::above;
  if (t_lb == t_ub && t == t_lb) return Regime::boundary;
  return Regime::indeterminate;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool is_point() const noexcept { return lo == hi; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Predicted S_{2:K}(L^w)/n. Below the critical value it is (K-1) t^w; above
/// it lies between c* + (K-1)(1 - n_max/n) t^w and c* + (K-1)(1 - n_min/n) t^w,
/// which collapses to c* + (K-1)^2/K t^w for equal cluster sizes. For the
/// boundary and indeterminate verdicts the hull of both cases is returned.
inline Interval predicted_partial_sum(double t_w, double c_star, int K, std::size_t n, std::size_t n_min,
                                      std::size_t n_max, Regime regime) {
  const double km1 = static_cast<double>(K - 1);
  const double below = km1 * t_w;
  Interval above;
  if (n_min == n_max && n_max * static_cast<std::size_t>(K) == n) {
    const double v = c_star + km1 * km1 / static_cast<double>(K) * t_w;
    above = {v, v};
  } else {
    const double nn = static_cast<double>(n);
    above = {c_star + km1 * (1.0 - static_cast<double>(n_max) / nn) * t_w,
             c_star + km1 * (1.0 - static_cast<double>(n_min) / nn) * t_w};
  }
  switch (regime) {
    case Regime::below: return {below, below};
    case Regime::above: return above;
    case Regime::boundary:
    case Regime::indeterminate: return {std::min(below, above.lo), std::max(below, above.hi)};
  }
  return {below, below};
}

/// Row statistics of the embedding restricted to each ground-truth cluster.
struct SeparabilityStats {
  Matrix mean;            // K x (K-1): m_kj, mean of column j over cluster k
  Matrix stddev;          // K x (K-1): s_kj, population standard deviation
  Vector weighted_sum;    // (K-1): sum_k n_k m_kj, ~0 whenever Y^T 1 = 0
  double coherence = 0.0;         // max_kj s_kj
  double max_scaled_mean = 0.0;   // max_kj |m_kj| sqrt(n_k); ~0 when every Y_k^T 1 = 0
  double separation_ratio = 0.0;  // max_k |s_k| / min_{k != k'} |m_k - m_k'|
};

inline SeparabilityStats separability_diagnostic(const Matrix& Y, const ClusterAssignment& truth) {
  if (static_cast<std::size_t>(Y.rows()) != truth.num_nodes())
    throw InvalidArgument("separability_diagnostic: row count does not match assignment");
  const int K = truth.num_clusters();
  const Eigen::Index d = Y.cols();
  SeparabilityStats s;
  s.mean = Matrix::Zero(K, d);
  s.stddev = Matrix::Zero(K, d);
  s.weighted_sum = Vector::Zero(d);
  for (int k = 1; k <= K; ++k) {
    const auto& nodes = truth.members(k);
    const double nk = static_cast<double>(nodes.size());
    for (int u : nodes) s.mean.row(k - 1) += Y.row(u);
    s.mean.row(k - 1) /= nk;
    for (int u : nodes) s.stddev.row(k - 1) += (Y.row(u) - s.mean.row(k - 1)).array().square().matrix();
    s.stddev.row(k - 1) = (s.stddev.row(k - 1) / nk).cwiseSqrt();
    s.weighted_sum += nk * s.mean.row(k - 1).transpose();
    s.max_scaled_mean = std::max(s.max_scaled_mean, s.mean.row(k - 1).cwiseAbs().maxCoeff() * std::sqrt(nk));
  }
  s.coherence = s.stddev.maxCoeff();
  double min_gap = std::numeric_limits<double>::infinity();
  for (int a = 0; a < K; ++a)
    for (int b = a + 1; b < K; ++b) min_gap = std::min(min_gap, (s.mean.row(a) - s.mean.row(b)).norm());
  double max_spread = 0.0;
  for (int k = 0; k < K; ++k) max_spread = std::max(max_spread, s.stddev.row(k).norm());
  s.separation_ratio = min_gap > 0.0 ? max_spread / min_gap : std::numeric_limits<double>::infinity();
  return s;
}

/// delta_{t,n} = min{t, |lambda_{K+1}(L/n) - t|}.
inline double spectral_gap_delta(double lambda_next_over_n, double t_w) {
  return std::min(t_w, std::abs(lambda_next_over_n - t_w));
}

/// ||L - L~||_F / (n delta_{t,n}), with lambda_{K+1} taken from L.
/// Throws NumericalError when delta is not positive.
inline double sin_theta_upper_bound(const Matrix& L_w, const Matrix& L_tilde_w, double t_w, int K, std::size_t n) {
  if (L_w.rows() != L_tilde_w.rows() || L_w.cols() != L_tilde_w.cols())
    throw InvalidArgument("sin_theta_upper_bound: Laplacians differ in size");
  if (K + 1 > L_w.rows()) throw InvalidArgument("sin_theta_upper_bound: need K+1 <= n");
  const double nn = static_cast<double>(n);
  const double lambda_next = smallest_eigenvalues(L_w, K + 1)(K);
  const double delta = spectral_gap_delta(lambda_next / nn, t_w);
  if (!(delta > 1e-12))
    throw NumericalError("sin_theta_upper_bound: degenerate gap delta=" + std::to_string(delta));
  return (L_w - L_tilde_w).norm() / (nn * delta);
}

/// t_max * i / points for i = 1..points.
inline std::vector<double> uniform_noise_grid(double t_max, int points = 50) {
  if (points < 1 || !(t_max > 0.0)) throw InvalidArgument("uniform_noise_grid: need t_max > 0 and points >= 1");
  std::vector<double> grid;
  for (int i = 1; i <= points; ++i) grid.push_back(t_max * i / points);
  return grid;
}

struct MinimizedBound {
  double bound = std::numeric_limits<double>::infinity();
  double t_at_min = 0.0;
  int evaluated = 0;
  int skipped = 0;  // grid points with a degenerate gap
};

/// The minimized bound over t in the grid; make_tilde(t) returns the
/// Laplacian of an independent identical-noise graph at aggregated level t.
inline MinimizedBound min_sin_theta_bound(const Matrix& L_w, std::span<const double> t_grid,
                                          const std::function<Matrix(double)>& make_tilde, int K) {
  if (K + 1 > L_w.rows()) throw InvalidArgument("min_sin_theta_bound: need K+1 <= n");
  const std::size_t n = static_cast<std::size_t>(L_w.rows());
  const double lambda_next = smallest_eigenvalues(L_w, K + 1)(K) / static_cast<double>(n);
  MinimizedBound out;
  for (double t : t_grid) {
    const double delta = spectral_gap_delta(lambda_next, t);
    if (!(delta > 1e-12)) {
      ++out.skipped;
      continue;
    }
    const Matrix tilde = make_tilde(t);
    const double b = (L_w - tilde).norm() / (static_cast<double>(n) * delta);
    ++out.evaluated;
    if (b < out.bound) {
      out.bound = b;
      out.t_at_min = t;
    }
  }
  if (out.evaluated == 0) throw NumericalError("min_sin_theta_bound: every grid point has a degenerate gap");
  return out;
}

enum class CriticalWeightStatus { crossing, all_reliable, all_unreliable, degenerate };

inline const char* to_string(CriticalWeightStatus s) {
  switch (s) {
    case CriticalWeightStatus::crossing: return "crossing";
    case CriticalWeightStatus::all_reliable: return "all_reliable";
    case CriticalWeightStatus::all_unreliable: return "all_unreliable";
    case CriticalWeightStatus::degenerate: return "degenerate";
  }
  return "?";
}

struct CriticalWeight {
  CriticalWeightStatus status = CriticalWeightStatus::degenerate;
  std::optional<double> w1;
  double layer1_intercept = 0.0;  // min_k S_{2:K}(L_k^(1)) / n
  double layer2_intercept = 0.0;
};

/// Solves (K-1)/K [w p1 + (1-w) p2] = w a1 + (1-w) a2 for w, where
/// a_l = min_k S_{2:K}(L_k^(l) / n). Unweighted two-layer graphs only.
inline CriticalWeight critical_weight_from_intercepts(double a1, double a2, double p1, double p2, int K) {
  CriticalWeight out;
  out.layer1_intercept = a1;
  out.layer2_intercept = a2;
  const double r = static_cast<double>(K - 1) / static_cast<double>(K);
  // f(w) = r (p2 + w (p1 - p2)) - a2 - w (a1 - a2): noise minus threshold.
  const double slope = r * (p1 - p2) - (a1 - a2);
  const double f0 = r * p2 - a2;
  const double f1 = f0 + slope;
  const double scale = std::max({1.0, std::abs(r * p1), std::abs(r * p2), std::abs(a1), std::abs(a2)});
  if (std::abs(slope) <= 1e-12 * scale) {
    out.status = CriticalWeightStatus::degenerate;
    return out;
  }
  const double root = -f0 / slope;
  if (root >= 0.0 && root <= 1.0) {
    out.status = CriticalWeightStatus::crossing;
    out.w1 = root;
  } else {
    out.status = (f0 < 0.0 && f1 < 0.0) ? CriticalWeightStatus::all_reliable : CriticalWeightStatus::all_unreliable;
  }
  return out;
}

inline CriticalWeight critical_weight(const MultilayerGraph& g, const ClusterAssignment& truth, double p1, double p2) {
  if (g.num_layers() != 2) throw InvalidArgument("critical_weight: requires exactly two layers");
  const Matrix S = layer_cluster_partial_sums(g, truth);
  const double n = static_cast<double>(g.num_nodes());
  return critical_weight_from_intercepts(S.row(0).minCoeff() / n, S.row(1).minCoeff() / n, p1, p2,
                                         truth.num_clusters());
}

struct PhaseReport {
  std::optional<double> t_w;
  std::optional<double> t_max_w;
  double t_lb_w = 0.0;
  double t_ub_w = 0.0;
  double universal_lb = 0.0;
  double c_star_w = 0.0;
  double c_star_layerwise_w = 0.0;
  std::optional<Interval> predicted_s2k_per_n;
  double observed_s2k_per_n = 0.0;
  Regime regime = Regime::indeterminate;
  bool connected = true;
  bool tie = false;
  std::optional<double> detectability;
};

/// Full report for one weight vector. Without a noise spec the noise fields
/// stay empty and the regime is indeterminate. For non-identical noise the
/// regime is judged on t_max^w.
inline PhaseReport make_phase_report(const MultilayerGraph& g, const ClusterAssignment& truth, const LayerWeights& w,
                                     const std::optional<NoiseSpec>& noise,
                                     const std::optional<SpectralEmbedding>& emb = std::nullopt) {
  detail::require_truth(g, truth);
  const int K = truth.num_clusters();
  PhaseReport r;
  const CriticalBounds b = critical_bounds(g, truth, w);
  const Matrix layer_sums = layer_cluster_partial_sums(g, truth);
  r.t_lb_w = b.t_lb;
  r.t_ub_w = b.t_ub;
  r.c_star_w = b.c_star;
  r.c_star_layerwise_w = c_star_layerwise(layer_sums, w, g.num_nodes());
  r.universal_lb = universal_lower_bound(layer_sums, truth);

  const Matrix Lw = laplacian(aggregate(g, w));
  const SpectralEmbedding e = emb ? *emb : embedding(Lw, K);
  r.observed_s2k_per_n = e.eigenvalues.tail(K - 1).sum() / static_cast<double>(g.num_nodes());
  r.connected = e.connected;
  r.tie = e.tie_at_k;

  if (noise) {
    const AggregatedNoise agg = aggregated_noise(*noise, w);
    r.t_w = agg.t_w;
    r.t_max_w = agg.t_max_w;
    const double t = agg.t_w ? *agg.t_w : agg.t_max_w;
    r.regime = classify_regime(t, r.t_lb_w, r.t_ub_w);
    if (agg.t_w)
      r.predicted_s2k_per_n =
          predicted_partial_sum(*agg.t_w, r.c_star_w, K, g.num_nodes(), truth.n_min(), truth.n_max(), r.regime);
  }
  return r;
}

inline nlohmann::json to_json(const PhaseReport& r) {
  const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["t_w"] = opt(r.t_w);
  j["t_max_w"] = opt(r.t_max_w);
  j["t_LB_w"] = r.t_lb_w;
  j["t_UB_w"] = r.t_ub_w;
  j["universal_LB"] = r.universal_lb;
  j["c_star_w"] = r.c_star_w;
  j["c_star_layerwise_w"] = r.c_star_layerwise_w;
  j["predicted_S2K_per_n"] =
      r.predicted_s2k_per_n ? nlohmann::json::array({r.predicted_s2k_per_n->lo, r.predicted_s2k_per_n->hi})
                            : nlohmann::json(nullptr);
  j["observed_S2K_per_n"] = r.observed_s2k_per_n;
  j["regime"] = to_string(r.regime);
  j["connectivity_flag"] = r.connected;
  j["tie_flag"] = r.tie;
  j["detectability"] = opt(r.detectability);
  return j;
}

}  // namespace mlsgc

#endif  // MLSGC_PHASE_HPP
