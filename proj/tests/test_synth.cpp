#include <cmath>

#include <gtest/gtest.h>

#include "mlsgc/synth.hpp"
#include "support.hpp"

using namespace mlsgc;
using namespace mlsgc::testing;

namespace {

CorrelatedTwoLayerParams correlated(std::vector<std::size_t> sizes, double p1, double p2, std::uint64_t seed) {
  CorrelatedTwoLayerParams p;
  p.cluster_sizes = std::move(sizes);
  p.p1 = p1;
  p.p2 = p2;
  p.seed = seed;
  return p;
}

void expect_valid_layers(const MultilayerGraph& g) {
  for (const Matrix& W : g.layers()) {
    EXPECT_EQ(W, W.transpose());
    EXPECT_GE(W.minCoeff(), 0.0);
    EXPECT_TRUE(W.diagonal().isZero(0));
  }
}

// Two-sided normal approximation to the binomial test at level alpha = 0.001.
bool binomial_consistent(double successes, double trials, double p) {
  const double sd = std::sqrt(trials * p * (1.0 - p));
  return std::abs(successes - trials * p) <= 3.2905 * sd;
}

}  // namespace

TEST(WeightSampler, UniformSupportAndMean) {
  WeightSampler s(1.0, WeightMode::uniform, 5);
  double sum = 0.0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    const double x = s();
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 2.0);
    sum += x;
  }
  EXPECT_NEAR(sum / draws, 1.0, 0.01);
}

TEST(WeightSampler, ExponentialMean) {
  WeightSampler s(2.5, WeightMode::exponential, 6);
  double sum = 0.0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    const double x = s();
    ASSERT_GT(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum / draws, 2.5, 0.025);
}

TEST(WeightSampler, FixedSeedGivesIdenticalStream) {
  WeightSampler a(1.0, WeightMode::uniform, 42), b(1.0, WeightMode::uniform, 42), c(1.0, WeightMode::uniform, 43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a(), y = b(), z = c();
    EXPECT_EQ(x, y);
    differs |= x != z;
  }
  EXPECT_TRUE(differs);
}

TEST(WeightSampler, Errors) {
  EXPECT_THROW(WeightSampler(0.0, WeightMode::uniform, 1), InvalidArgument);
  EXPECT_THROW(WeightSampler(-1.0, WeightMode::exponential, 1), InvalidArgument);
  EXPECT_THROW(parse_weight_mode("gamma"), InvalidArgument);
  EXPECT_EQ(parse_weight_mode("exponential"), WeightMode::exponential);
}

TEST(Correlated, FullyCorrelatedGivesCompleteBlocks) {
  auto p = correlated({5, 7}, 0.0, 0.0, 1);
  p.q = {1.0, 0.0, 0.0, 0.0};
  const GeneratedGraph gg = generate_correlated_two_layer(p);
  for (std::size_t l = 0; l < 2; ++l) {
    const Matrix& W = gg.graph.layer(l);
    EXPECT_TRUE(W.topLeftCorner(5, 5).isApprox(complete_graph(5)));
    EXPECT_TRUE(W.bottomRightCorner(7, 7).isApprox(complete_graph(7)));
    EXPECT_TRUE(W.topRightCorner(5, 7).isZero(0));
  }
}

TEST(Correlated, MarginalDensityAndCrossLayerCovariance) {
  const GeneratedGraph gg = generate_correlated_two_layer(correlated({500, 500}, 0.1, 0.1, 7));
  expect_valid_layers(gg.graph);
  const JointEdgeProbabilities q;
  double pairs = 0.0, e1 = 0.0, e2 = 0.0, both = 0.0;
  for (int k = 1; k <= 2; ++k) {
    const auto& m = gg.truth.members(k);
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        const bool x = gg.graph.layer(0)(m[a], m[b]) > 0, y = gg.graph.layer(1)(m[a], m[b]) > 0;
        pairs += 1;
        e1 += x;
        e2 += y;
        both += x && y;
      }
  }
  EXPECT_NEAR(e1 / pairs, q.q11 + q.q10, 0.02);
  EXPECT_NEAR(e2 / pairs, q.q11 + q.q01, 0.02);
  const double cov = both / pairs - (e1 / pairs) * (e2 / pairs);
  EXPECT_NEAR(cov, q.q11 - (q.q11 + q.q10) * (q.q11 + q.q01), 0.02);
}

TEST(Correlated, BetweenClusterDensities) {
  const GeneratedGraph gg = generate_correlated_two_layer(correlated({500, 500}, 0.2, 0.05, 8));
  const double pairs = 500.0 * 500.0;
  const double e1 = gg.graph.layer(0).topRightCorner(500, 500).sum();
  const double e2 = gg.graph.layer(1).topRightCorner(500, 500).sum();
  EXPECT_TRUE(binomial_consistent(e1, pairs, 0.2)) << e1 / pairs;
  EXPECT_TRUE(binomial_consistent(e2, pairs, 0.05)) << e2 / pairs;
}

TEST(Correlated, SeedDeterminism) {
  const auto a = generate_correlated_two_layer(correlated({30, 30, 30}, 0.3, 0.2, 11));
  const auto b = generate_correlated_two_layer(correlated({30, 30, 30}, 0.3, 0.2, 11));
  const auto c = generate_correlated_two_layer(correlated({30, 30, 30}, 0.3, 0.2, 12));
  EXPECT_EQ(a.graph.layer(0), b.graph.layer(0));
  EXPECT_EQ(a.graph.layer(1), b.graph.layer(1));
  EXPECT_NE(a.graph.layer(0), c.graph.layer(0));
}

TEST(Correlated, PerClusterOverrides) {
  auto p = correlated({6, 6}, 0.0, 0.0, 3);
  p.per_cluster_q = {{1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}};
  const GeneratedGraph gg = generate_correlated_two_layer(p);
  EXPECT_TRUE(gg.graph.layer(0).topLeftCorner(6, 6).isApprox(complete_graph(6)));
  EXPECT_TRUE(gg.graph.layer(0).bottomRightCorner(6, 6).isZero(0));
  p.per_cluster_q.pop_back();
  EXPECT_THROW(generate_correlated_two_layer(p), InvalidArgument);
}

TEST(Correlated, Errors) {
  auto p = correlated({5, 5}, 0.1, 0.1, 1);
  p.q = {0.3, 0.2, 0.1, 0.3};
  EXPECT_THROW(generate_correlated_two_layer(p), InvalidArgument);
  p.q = {};
  p.p1 = 1.5;
  EXPECT_THROW(generate_correlated_two_layer(p), InvalidArgument);
  p.p1 = 0.1;
  p.cluster_sizes = {5, 0};
  EXPECT_THROW(generate_correlated_two_layer(p), InvalidArgument);
}

TEST(Rim, ZeroNoiseIsBlockDiagonal) {
  RIMParams params{{20, 30},
                   {LayerSignal::erdos_renyi({0.5, 0.5}), LayerSignal::erdos_renyi({0.3, 0.7})},
                   NoiseSpec::identical_unweighted({0.0, 0.0}, 2),
                   WeightMode::constant,
                   1};
  const GeneratedGraph gg = generate_rim(params);
  for (const Matrix& W : gg.graph.layers()) EXPECT_TRUE(W.topRightCorner(20, 30).isZero(0));
}

TEST(Rim, BetweenDensityConcentrates) {
  RIMParams params{{500, 500},
                   {LayerSignal::erdos_renyi({0.1, 0.1})},
                   NoiseSpec::identical_unweighted({0.15}, 2),
                   WeightMode::constant,
                   2};
  const GeneratedGraph gg = generate_rim(params);
  expect_valid_layers(gg.graph);
  const double e = gg.graph.layer(0).topRightCorner(500, 500).sum();
  EXPECT_NEAR(e / 250000.0, 0.15, 0.02);
  EXPECT_TRUE(binomial_consistent(e, 250000.0, 0.15));
}

TEST(Rim, WeightedMeanMatches) {
  RIMParams params{{150, 150},
                   {LayerSignal::erdos_renyi({0.1, 0.1})},
                   NoiseSpec::identical({0.5}, {2.0}, 2),
                   WeightMode::uniform,
                   3};
  const GeneratedGraph gg = generate_rim(params);
  const Matrix block = gg.graph.layer(0).topRightCorner(150, 150);
  double sum = 0.0, count = 0.0;
  for (Eigen::Index i = 0; i < block.size(); ++i)
    if (block.data()[i] > 0) {
      sum += block.data()[i];
      count += 1;
      EXPECT_LE(block.data()[i], 4.0);
    }
  ASSERT_GE(count, 1e4);
  EXPECT_NEAR(sum / count, 2.0, 0.04);
}

TEST(Rim, NonIdenticalBlocks) {
  Matrix p(3, 3), wbar = Matrix::Ones(3, 3);
  p << 0, 0.05, 0.4, 0.05, 0, 0.2, 0.4, 0.2, 0;
  RIMParams params{{200, 200, 200},
                   {LayerSignal::erdos_renyi({0.2, 0.2, 0.2})},
                   NoiseSpec::non_identical({p}, {wbar}),
                   WeightMode::constant,
                   4};
  const GeneratedGraph gg = generate_rim(params);
  const Matrix& W = gg.graph.layer(0);
  EXPECT_NEAR(W.block(0, 200, 200, 200).mean(), 0.05, 0.01);
  EXPECT_NEAR(W.block(0, 400, 200, 200).mean(), 0.4, 0.01);
  EXPECT_NEAR(W.block(200, 400, 200, 200).mean(), 0.2, 0.01);
}

TEST(Rim, ExplicitSignalIsCopied) {
  const Matrix a = complete_graph(4, 2.0), b = path_graph(3, 0.5);
  RIMParams params{{4, 3},
                   {LayerSignal::explicit_blocks({a, b})},
                   NoiseSpec::identical_unweighted({0.0}, 2),
                   WeightMode::constant,
                   5};
  const GeneratedGraph gg = generate_rim(params);
  EXPECT_EQ(Matrix(gg.graph.layer(0).topLeftCorner(4, 4)), a);
  EXPECT_EQ(Matrix(gg.graph.layer(0).bottomRightCorner(3, 3)), b);
  const auto signal = extract_signal(gg.graph, gg.truth);
  EXPECT_EQ(signal[0].blocks[0], a);
  EXPECT_EQ(signal[0].blocks[1], b);
}

TEST(Rim, Errors) {
  const auto make = [](std::vector<LayerSignal> s, NoiseSpec noise) {
    return RIMParams{{4, 4}, std::move(s), std::move(noise), WeightMode::constant, 0};
  };
  EXPECT_THROW(generate_rim(make({LayerSignal::erdos_renyi({0.5})}, NoiseSpec::identical_unweighted({0.1}, 2))),
               InvalidArgument);
  EXPECT_THROW(generate_rim(make({LayerSignal::erdos_renyi({0.5, 1.5})}, NoiseSpec::identical_unweighted({0.1}, 2))),
               InvalidArgument);
  EXPECT_THROW(generate_rim(make({LayerSignal::erdos_renyi({0.5, 0.5})}, NoiseSpec::identical_unweighted({0.1, 0.1}, 2))),
               InvalidArgument);
  EXPECT_THROW(generate_rim(make({LayerSignal::explicit_blocks({complete_graph(4), complete_graph(3)})},
                                 NoiseSpec::identical_unweighted({0.1}, 2))),
               InvalidArgument);
  EXPECT_THROW(NoiseSpec::identical_unweighted({1.2}, 2), InvalidArgument);
  EXPECT_THROW(NoiseSpec::identical({0.2}, {0.0}, 2), InvalidArgument);
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 0.3;
  EXPECT_THROW(NoiseSpec::non_identical({asym}, {Matrix::Ones(2, 2)}), InvalidArgument);
}

TEST(Rim, SeedDeterminism) {
  const auto make = [](std::uint64_t seed) {
    return generate_rim(RIMParams{{40, 40},
                                  {LayerSignal::erdos_renyi({0.3, 0.3})},
                                  NoiseSpec::identical({0.2}, {1.0}, 2),
                                  WeightMode::exponential,
                                  seed});
  };
  EXPECT_EQ(make(9).graph.layer(0), make(9).graph.layer(0));
  EXPECT_NE(make(9).graph.layer(0), make(10).graph.layer(0));
}

TEST(Sidecar, CorrelatedParamsEchoed) {
  const auto j = to_json(correlated({3, 4}, 0.1, 0.2, 5));
  EXPECT_EQ(j["model"], "correlated");
  EXPECT_EQ(j["cluster_sizes"], nlohmann::json({3, 4}));
  EXPECT_DOUBLE_EQ(j["q"]["q11"].get<double>(), 0.3);
  EXPECT_EQ(j["seed"], 5);
}
