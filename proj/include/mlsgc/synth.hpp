#ifndef MLSGC_SYNTH_HPP
#define MLSGC_SYNTH_HPP

// Synthetic multilayer graph generators.
//
// All generators place cluster 1's nodes first, then cluster 2's, and so on.
// Random draws are consumed in a fixed order: layer, then cluster block (i <= j,
// row-major), then node pair (u, v) lexicographic, so a seed fixes the output
// regardless of threading.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mlsgc/errors.hpp"
#include "mlsgc/graph.hpp"
#include "mlsgc/noise.hpp"
#include "mlsgc/random.hpp"

namespace mlsgc {

enum class WeightMode { constant, uniform, exponential };

inline const char* to_string(WeightMode m) {
  switch (m) {
    case WeightMode::constant: return "constant";
    case WeightMode::uniform: return "uniform";
    case WeightMode::exponential: return "exponential";
  }
  return "?";
}

inline WeightMode parse_weight_mode(const std::string& s) {
  if (s == "constant") return WeightMode::constant;
  if (s == "uniform") return WeightMode::uniform;
  if (s == "exponential") return WeightMode::exponential;
  throw InvalidArgument("unknown weight mode '" + s + "' (expected constant, uniform or exponential)");
}

/// One positive edge weight with the given mean. Uniform mode draws from
/// (0, 2*mean); constant mode returns the mean itself.
inline double draw_weight(double mean, WeightMode mode, Rng& rng) {
  switch (mode) {
    case WeightMode::constant: return mean;
    case WeightMode::uniform: return 2.0 * mean * uniform_open01(rng);
    case WeightMode::exponential: return -mean * std::log(uniform_open01(rng));
  }
  return mean;
}

/// Seeded stream of edge weights with a fixed mean.
class WeightSampler {
 public:
  WeightSampler(double mean, WeightMode mode, std::uint64_t seed) : mean_(mean), mode_(mode), rng_(seed) {
    if (!(mean > 0.0) || !std::isfinite(mean)) throw InvalidArgument("weight sampler: mean must be positive");
  }
  double operator()() { return draw_weight(mean_, mode_, rng_); }

 private:
  double mean_;
  WeightMode mode_;
  Rng rng_;
};

struct JointEdgeProbabilities {
  double q11 = 0.3;  // edge in both layers
  double q10 = 0.2;  // layer 1 only
  double q01 = 0.1;  // layer 2 only
  double q00 = 0.4;  // neither

  void validate() const {
    for (double q : {q11, q10, q01, q00})
      if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("joint edge probabilities must lie in [0,1]");
    if (std::abs(q11 + q10 + q01 + q00 - 1.0) > 1e-12)
      throw InvalidArgument("joint edge probabilities q11+q10+q01+q00 must sum to 1");
  }
};

struct CorrelatedTwoLayerParams {
  std::vector<std::size_t> cluster_sizes{200, 200, 200};
  JointEdgeProbabilities q;
  /// Optional per-cluster override of q (one entry per cluster).
  std::vector<JointEdgeProbabilities> per_cluster_q;
  double p1 = 0.0;
  double p2 = 0.0;
  std::uint64_t seed = 0;

  int num_clusters() const { return static_cast<int>(cluster_sizes.size()); }
};

struct GeneratedGraph {
  MultilayerGraph graph;
  ClusterAssignment truth;
};

namespace detail {

inline std::vector<std::size_t> cluster_offsets(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> off(sizes.size() + 1, 0);
  for (std::size_t k = 0; k < sizes.size(); ++k) off[k + 1] = off[k] + sizes[k];
  return off;
}

inline void check_sizes(const std::vector<std::size_t>& sizes) {
  if (sizes.empty()) throw InvalidArgument("generator: at least one cluster required");
  for (std::size_t s : sizes)
    if (s == 0) throw InvalidArgument("generator: cluster sizes must be positive");
}

}  // namespace detail

/// Two correlated unweighted layers: each within-cluster pair draws its joint
/// presence (both / layer 1 only / layer 2 only / neither) from q; each
/// between-cluster pair is an independent Bernoulli(p^(l)) draw per layer.
inline GeneratedGraph generate_correlated_two_layer(const CorrelatedTwoLayerParams& params) {
  detail::check_sizes(params.cluster_sizes);
  params.q.validate();
  if (!params.per_cluster_q.empty()) {
    if (params.per_cluster_q.size() != params.cluster_sizes.size())
      throw InvalidArgument("per-cluster q overrides must have one entry per cluster");
    for (const auto& q : params.per_cluster_q) q.validate();
  }
  for (double p : {params.p1, params.p2})
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("noise probabilities must lie in [0,1]");

  const auto off = detail::cluster_offsets(params.cluster_sizes);
  const std::size_t K = params.cluster_sizes.size();
  GraphBuilder builder(off.back(), 2);
  Rng rng(params.seed);

  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = i; j < K; ++j) {
      if (i == j) {
        const JointEdgeProbabilities& q = params.per_cluster_q.empty() ? params.q : params.per_cluster_q[i];
        for (std::size_t u = off[i]; u < off[i + 1]; ++u)
          for (std::size_t v = u + 1; v < off[i + 1]; ++v) {
            const double r = uniform01(rng);
            if (r < q.q11) {
              builder.set_edge(0, u, v, 1.0);
              builder.set_edge(1, u, v, 1.0);
            } else if (r < q.q11 + q.q10) {
              builder.set_edge(0, u, v, 1.0);
            } else if (r < q.q11 + q.q10 + q.q01) {
              builder.set_edge(1, u, v, 1.0);
            }
          }
      } else {
        for (std::size_t u = off[i]; u < off[i + 1]; ++u)
          for (std::size_t v = off[j]; v < off[j + 1]; ++v) {
            if (bernoulli(rng, params.p1)) builder.set_edge(0, u, v, 1.0);
            if (bernoulli(rng, params.p2)) builder.set_edge(1, u, v, 1.0);
          }
      }
    }
  }
  return {std::move(builder).build(), ClusterAssignment::from_sizes(params.cluster_sizes)};
}

/// Within-cluster structure of one layer: either explicit weight blocks (one
/// n_k x n_k matrix per cluster) or an Erdos-Renyi density per cluster.
struct LayerSignal {
  std::vector<Matrix> blocks;
  std::vector<double> density;

  static LayerSignal explicit_blocks(std::vector<Matrix> b) { return {std::move(b), {}}; }
  static LayerSignal erdos_renyi(std::vector<double> d) { return {{}, std::move(d)}; }
};

/// Random interconnection model: arbitrary within-cluster signal plus
/// Bernoulli(p_ij) between-cluster edges with weights of mean Wbar_ij.
struct RIMParams {
  std::vector<std::size_t> cluster_sizes;
  std::vector<LayerSignal> signal;  // one per layer
  NoiseSpec noise;
  WeightMode weight_mode = WeightMode::constant;
  std::uint64_t seed = 0;
};

inline GeneratedGraph generate_rim(const RIMParams& params) {
  detail::check_sizes(params.cluster_sizes);
  const std::size_t K = params.cluster_sizes.size();
  const std::size_t L = params.signal.size();
  if (L == 0) throw InvalidArgument("rim: at least one layer required");
  if (params.noise.num_layers() != L) throw InvalidArgument("rim: noise spec layer count differs from signal");
  if (static_cast<std::size_t>(params.noise.num_clusters()) != K)
    throw InvalidArgument("rim: noise spec cluster count differs from cluster sizes");
  for (const LayerSignal& s : params.signal) {
    if (!s.blocks.empty()) {
      if (s.blocks.size() != K) throw InvalidArgument("rim: explicit signal needs one block per cluster");
      for (std::size_t k = 0; k < K; ++k) {
        if (static_cast<std::size_t>(s.blocks[k].rows()) != params.cluster_sizes[k])
          throw InvalidArgument("rim: signal block size does not match cluster size");
        validate_weight_matrix(s.blocks[k], "rim signal block");
      }
    } else {
      if (s.density.size() != K) throw InvalidArgument("rim: signal needs one density per cluster");
      for (double d : s.density)
        if (!(d >= 0.0 && d <= 1.0)) throw InvalidArgument("rim: signal density outside [0,1]");
    }
  }

  const auto off = detail::cluster_offsets(params.cluster_sizes);
  GraphBuilder builder(off.back(), L);
  Rng rng(params.seed);
  for (std::size_t l = 0; l < L; ++l) {
    const LayerSignal& signal = params.signal[l];
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = i; j < K; ++j) {
        if (i == j) {
          for (std::size_t u = off[i]; u < off[i + 1]; ++u)
            for (std::size_t v = u + 1; v < off[i + 1]; ++v) {
              if (!signal.blocks.empty()) {
                const double w = signal.blocks[i](static_cast<Eigen::Index>(u - off[i]), static_cast<Eigen::Index>(v - off[i]));
                if (w != 0.0) builder.set_edge(l, u, v, w);
              } else if (bernoulli(rng, signal.density[i])) {
                builder.set_edge(l, u, v, 1.0);
              }
            }
        } else {
          const int ci = static_cast<int>(i + 1), cj = static_cast<int>(j + 1);
          const double p = params.noise.p(l, ci, cj);
          const double mean = params.noise.mean_weight(l, ci, cj);
          for (std::size_t u = off[i]; u < off[i + 1]; ++u)
            for (std::size_t v = off[j]; v < off[j + 1]; ++v)
              if (bernoulli(rng, p)) builder.set_edge(l, u, v, draw_weight(mean, params.weight_mode, rng));
        }
      }
    }
  }
  return {std::move(builder).build(), ClusterAssignment::from_sizes(params.cluster_sizes)};
}

/// Within-cluster blocks of every layer of g, usable as explicit RIM signal.
inline std::vector<LayerSignal> extract_signal(const MultilayerGraph& g, const ClusterAssignment& truth) {
  std::vector<LayerSignal> out;
  for (std::size_t l = 0; l < g.num_layers(); ++l) {
    std::vector<Matrix> blocks;
    for (int k = 1; k <= truth.num_clusters(); ++k) blocks.push_back(principal_submatrix(g.layer(l), truth.members(k)));
    out.push_back(LayerSignal::explicit_blocks(std::move(blocks)));
  }
  return out;
}

inline nlohmann::json to_json(const JointEdgeProbabilities& q) {
  return {{"q11", q.q11}, {"q10", q.q10}, {"q01", q.q01}, {"q00", q.q00}};
}

inline nlohmann::json to_json(const CorrelatedTwoLayerParams& p) {
  nlohmann::json j = {{"model", "correlated"},
                      {"cluster_sizes", p.cluster_sizes},
                      {"q", to_json(p.q)},
                      {"p1", p.p1},
                      {"p2", p.p2},
                      {"seed", p.seed}};
  if (!p.per_cluster_q.empty()) {
    j["per_cluster_q"] = nlohmann::json::array();
    for (const auto& q : p.per_cluster_q) j["per_cluster_q"].push_back(to_json(q));
  }
  return j;
}

inline nlohmann::json to_json(const RIMParams& p) {
  nlohmann::json layers = nlohmann::json::array();
  const int K = static_cast<int>(p.cluster_sizes.size());
  for (std::size_t l = 0; l < p.signal.size(); ++l) {
    nlohmann::json layer;
    if (!p.signal[l].blocks.empty())
      layer["signal"] = "explicit";
    else
      layer["signal_density"] = p.signal[l].density;
    nlohmann::json pm = nlohmann::json::array(), wm = nlohmann::json::array();
    for (int i = 1; i <= K; ++i) {
      nlohmann::json prow = nlohmann::json::array(), wrow = nlohmann::json::array();
      for (int j = 1; j <= K; ++j) {
        prow.push_back(i == j ? 0.0 : p.noise.p(l, i, j));
        wrow.push_back(i == j ? 0.0 : p.noise.mean_weight(l, i, j));
      }
      pm.push_back(prow);
      wm.push_back(wrow);
    }
    layer["p"] = pm;
    layer["mean_weight"] = wm;
    layers.push_back(layer);
  }
  return {{"model", "rim"},
          {"cluster_sizes", p.cluster_sizes},
          {"identical_noise", p.noise.is_identical()},
          {"weight_mode", to_string(p.weight_mode)},
          {"layers", layers},
          {"seed", p.seed}};
}

}  // namespace mlsgc

#endif  // MLSGC_SYNTH_HPP
