#include <gtest/gtest.h>

#include "mlsgc/graph.hpp"
#include "mlsgc/synth.hpp"
#include "support.hpp"

using namespace mlsgc;
using namespace mlsgc::testing;

namespace {

MultilayerGraph three_node_pair() {
  GraphBuilder b(3, 2);
  b.set_edge(0, 0, 1, 2.0);
  b.set_edge(1, 1, 2, 4.0);
  return std::move(b).build();
}

}  // namespace

TEST(LayerWeights, AcceptsSimplexPoints) {
  EXPECT_NO_THROW(LayerWeights({1.0, 0.0}));
  EXPECT_NO_THROW(LayerWeights({0.25, 0.75}));
  EXPECT_NO_THROW(LayerWeights::uniform(7));
  EXPECT_DOUBLE_EQ(LayerWeights::two_layer(0.3)[1], 0.7);
  EXPECT_EQ(LayerWeights::vertex(3, 2).values(), (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(LayerWeights, RejectsOffSimplex) {
  EXPECT_THROW(LayerWeights({0.5, 0.6}), InvalidArgument);
  EXPECT_THROW(LayerWeights({-0.1, 1.1}), InvalidArgument);
  EXPECT_THROW(LayerWeights({}), InvalidArgument);
  EXPECT_THROW(LayerWeights({0.5, 0.5 + 1e-10}), InvalidArgument);
}

TEST(ClusterAssignment, DerivedSizes) {
  const ClusterAssignment a({1, 2, 2, 3, 3, 3});
  EXPECT_EQ(a.num_clusters(), 3);
  EXPECT_EQ(a.num_nodes(), 6u);
  EXPECT_EQ(a.n_min(), 1u);
  EXPECT_EQ(a.n_max(), 3u);
  EXPECT_DOUBLE_EQ(a.size_ratio(), 1.0 / 3.0);
  EXPECT_EQ(a.members(2), (std::vector<int>{1, 2}));
  EXPECT_THROW(a.size(4), InvalidArgument);
  EXPECT_THROW(a.members(0), InvalidArgument);
}

TEST(ClusterAssignment, RejectsGapsAndBadIds) {
  EXPECT_THROW(ClusterAssignment({1, 3}), InvalidArgument);
  EXPECT_THROW(ClusterAssignment({0, 1}), InvalidArgument);
  EXPECT_THROW(ClusterAssignment({}), InvalidArgument);
}

TEST(MultilayerGraph, RejectsInvalidLayers) {
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1.0;
  EXPECT_THROW(MultilayerGraph({asym}), InvalidArgument);
  Matrix neg = complete_graph(2, -1.0);
  EXPECT_THROW(MultilayerGraph({neg}), InvalidArgument);
  Matrix diag = Matrix::Identity(2, 2);
  EXPECT_THROW(MultilayerGraph({diag}), InvalidArgument);
  EXPECT_THROW(MultilayerGraph({complete_graph(2), complete_graph(3)}), InvalidArgument);
  EXPECT_THROW(MultilayerGraph(std::vector<Matrix>{}), InvalidArgument);
}

TEST(GraphBuilder, RejectsSelfLoopsAndNegativeWeights) {
  GraphBuilder b(3, 1);
  EXPECT_THROW(b.set_edge(0, 1, 1, 1.0), InvalidArgument);
  EXPECT_THROW(b.set_edge(0, 0, 1, -1.0), InvalidArgument);
  EXPECT_THROW(b.set_edge(1, 0, 1, 1.0), InvalidArgument);
  EXPECT_THROW(b.set_edge(0, 0, 3, 1.0), InvalidArgument);
}

TEST(Aggregate, VertexWeightSelectsLayer) {
  Rng rng(3);
  const MultilayerGraph g = random_multilayer(rng, 8, 2, 0.5);
  EXPECT_EQ(aggregate(g, LayerWeights({1.0, 0.0})), g.layer(0));
  EXPECT_EQ(aggregate(g, LayerWeights({0.0, 1.0})), g.layer(1));
}

TEST(Aggregate, IdenticalLayersGiveSameLayer) {
  Rng rng(4);
  const Matrix W = random_weights(rng, 9, 0.4);
  const MultilayerGraph g({W, W});
  EXPECT_TRUE(aggregate(g, LayerWeights({0.5, 0.5})).isApprox(W, 1e-15));
}

TEST(Aggregate, HandExample) {
  const Matrix Ww = aggregate(three_node_pair(), LayerWeights({0.25, 0.75}));
  EXPECT_DOUBLE_EQ(Ww(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(Ww(1, 2), 3.0);
  EXPECT_DOUBLE_EQ(Ww(0, 2), 0.0);
  // Entrywise oracle.
  const MultilayerGraph g = three_node_pair();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(Ww(i, j), 0.25 * g.layer(0)(i, j) + 0.75 * g.layer(1)(i, j));
}

TEST(Aggregate, LayerCountMismatch) {
  EXPECT_THROW(aggregate(three_node_pair(), LayerWeights({1.0})), InvalidArgument);
}

TEST(Laplacian, SingleEdge) {
  const Matrix L = laplacian(complete_graph(2));
  Matrix expected(2, 2);
  expected << 1, -1, -1, 1;
  EXPECT_EQ(L, expected);
}

TEST(Laplacian, EmptyGraphIsZero) { EXPECT_TRUE(laplacian(Matrix::Zero(5, 5)).isZero(0)); }

TEST(Laplacian, PathSpectrum) {
  const Vector ev = oracle_spectrum(laplacian(path_graph(3)));
  EXPECT_NEAR(ev(0), 0.0, 1e-12);
  EXPECT_NEAR(ev(1), 1.0, 1e-12);
  EXPECT_NEAR(ev(2), 3.0, 1e-12);
}

TEST(Laplacian, MatchesEntrywiseDefinition) {
  Rng rng(5);
  const Matrix W = random_weights(rng, 12, 0.5);
  EXPECT_TRUE(laplacian(W).isApprox(oracle_laplacian(W), 1e-14));
}

TEST(Laplacian, RejectsInvalidInput) {
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1.0;
  EXPECT_THROW(laplacian(asym), InvalidArgument);
  EXPECT_THROW(laplacian(complete_graph(3, -1.0)), InvalidArgument);
}

TEST(WithinClusterLaplacian, NoInternalEdgesGivesZero) {
  GraphBuilder b(4, 2);
  b.set_edge(0, 0, 2, 1.0);
  b.set_edge(1, 1, 3, 1.0);
  const ClusterAssignment part({1, 1, 2, 2});
  const Matrix Lk = within_cluster_laplacian(std::move(b).build(), part, 1, LayerWeights({0.5, 0.5}));
  EXPECT_EQ(Lk.rows(), 2);
  EXPECT_TRUE(Lk.isZero(0));
}

TEST(WithinClusterLaplacian, SingleLayerEqualsInducedSubgraph) {
  Rng rng(6);
  const Matrix W = random_weights(rng, 10, 0.6);
  const ClusterAssignment part({1, 2, 1, 2, 1, 2, 2, 1, 1, 2});
  const MultilayerGraph g({W});
  for (int k = 1; k <= 2; ++k) {
    const auto& nodes = part.members(k);
    Matrix sub(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = 0; b < nodes.size(); ++b) sub(a, b) = W(nodes[a], nodes[b]);
    EXPECT_TRUE(within_cluster_laplacian(g, part, k, LayerWeights({1.0})).isApprox(oracle_laplacian(sub), 1e-14));
  }
}

TEST(WithinClusterLaplacian, IdenticalInternalsAcrossLayers) {
  Rng rng(7);
  const ClusterAssignment part = ClusterAssignment::from_sizes({5, 5});
  const Matrix a = random_weights(rng, 10, 0.7);
  Matrix b = a;
  // Change only between-cluster entries of the second layer.
  for (int u = 0; u < 5; ++u)
    for (int v = 5; v < 10; ++v) b(u, v) = b(v, u) = uniform01(rng);
  const MultilayerGraph g({a, b});
  const MultilayerGraph single({a});
  for (int k = 1; k <= 2; ++k)
    EXPECT_TRUE(within_cluster_laplacian(g, part, k, LayerWeights({0.5, 0.5}))
                    .isApprox(within_cluster_laplacian(single, part, k, LayerWeights({1.0})), 1e-14));
}

TEST(WithinClusterLaplacian, UnknownCluster) {
  const ClusterAssignment part({1, 1, 2});
  EXPECT_THROW(within_cluster_laplacian(three_node_pair(), part, 3, LayerWeights({0.5, 0.5})), InvalidArgument);
}

TEST(WithinClusterLaplacian, BlockExtractionConsistency) {
  // Diagonal block k of L^w equals L_k^w plus the between-cluster degree of
  // each member on the diagonal.
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<std::size_t>(4 + trial % 17);
    const int K = 2 + trial % 3;
    const ClusterAssignment part(random_labels(rng, n, K));
    const MultilayerGraph g = random_multilayer(rng, static_cast<Eigen::Index>(n), 2, 0.5);
    const LayerWeights w = random_simplex(rng, 2);
    const Matrix Ww = aggregate(g, w);
    const Matrix Lw = laplacian(Ww);
    for (int k = 1; k <= K; ++k) {
      const auto& nodes = part.members(k);
      const Matrix Lk = within_cluster_laplacian(g, part, k, w);
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        double between = 0.0;
        for (std::size_t v = 0; v < n; ++v)
          if (part.label(v) != k) between += Ww(nodes[a], static_cast<Eigen::Index>(v));
        for (std::size_t b = 0; b < nodes.size(); ++b) {
          const double expect = Lw(nodes[a], nodes[b]) - (a == b ? between : 0.0);
          EXPECT_NEAR(Lk(a, b), expect, 1e-12);
        }
      }
    }
  }
}

TEST(IsConnected, Basics) {
  EXPECT_TRUE(is_connected(complete_graph(6)));
  Matrix two_edges = Matrix::Zero(4, 4);
  two_edges(0, 1) = two_edges(1, 0) = 1.0;
  two_edges(2, 3) = two_edges(3, 2) = 1.0;
  EXPECT_FALSE(is_connected(two_edges));
  EXPECT_TRUE(is_connected(Matrix::Zero(1, 1)));
  EXPECT_FALSE(is_connected(Matrix::Zero(2, 2)));
}

TEST(IsConnected, AggregatedRimGraphs) {
  int connected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RIMParams params{{60, 60, 60},
                     {LayerSignal::erdos_renyi({0.2, 0.2, 0.2}), LayerSignal::erdos_renyi({0.1, 0.1, 0.1})},
                     NoiseSpec::identical_unweighted({0.05, 0.02}, 3),
                     WeightMode::constant,
                     seed};
    const GeneratedGraph gg = generate_rim(params);
    connected += is_connected(aggregate(gg.graph, LayerWeights({0.5, 0.5})));
  }
  EXPECT_EQ(connected, 100);
}

TEST(Laplacian, LinearityInLayerWeights) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto L = static_cast<std::size_t>(1 + trial % 4);
    const MultilayerGraph g = random_multilayer(rng, 10, L, 0.5);
    const LayerWeights w = random_simplex(rng, L);
    Matrix combined = Matrix::Zero(10, 10);
    for (std::size_t l = 0; l < L; ++l) combined += w[l] * laplacian(g.layer(l));
    EXPECT_TRUE(laplacian(aggregate(g, w)).isApprox(combined, 1e-12)) << "trial " << trial;
  }
}
