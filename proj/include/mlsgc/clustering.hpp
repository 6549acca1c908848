#ifndef MLSGC_CLUSTERING_HPP
#define MLSGC_CLUSTERING_HPP

#include <cstdint>
#include <vector>

#include "mlsgc/assignment.hpp"
#include "mlsgc/graph.hpp"
#include "mlsgc/kmeans.hpp"
#include "mlsgc/spectral.hpp"

namespace mlsgc {

struct SgcResult {
  std::vector<int> labels;  // 1-based
  SpectralEmbedding embedding;
  KMeansResult kmeans;
};

/// Spectral clustering of the convex layer aggregate: aggregate, Laplacian,
/// embedding, then K-means on the raw (not row-normalized) rows of Y.
inline SgcResult multilayer_sgc(const MultilayerGraph& g, const LayerWeights& w, int K, std::uint64_t seed,
                                const KMeansOptions& opt = {}) {
  const Matrix L = laplacian(aggregate(g, w));
  SgcResult out;
  out.embedding = embedding(L, K);
  out.kmeans = kmeans(out.embedding.Y, K, seed, opt);
  out.labels = out.kmeans.labels;
  return out;
}

}  // namespace mlsgc

#endif  // MLSGC_CLUSTERING_HPP
