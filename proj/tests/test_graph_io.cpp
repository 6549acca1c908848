#include <sstream>

#include <gtest/gtest.h>

#include "mlsgc/graph_io.hpp"
#include "support.hpp"

using namespace mlsgc;
using namespace mlsgc::testing;

namespace {

MultilayerGraph parse(const std::string& text) {
  std::istringstream in(text);
  return read_graph(in);
}

ClusterAssignment parse_labels(const std::string& text) {
  std::istringstream in(text);
  return read_labels(in);
}

}  // namespace

TEST(GraphIo, RoundTripIsExact) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const MultilayerGraph g = random_multilayer(rng, 15, 1 + trial % 3, 0.3);
    std::ostringstream out;
    write_graph(g, out);
    const MultilayerGraph back = parse(out.str());
    ASSERT_EQ(back.num_layers(), g.num_layers());
    for (std::size_t l = 0; l < g.num_layers(); ++l) EXPECT_EQ(back.layer(l), g.layer(l));
  }
}

TEST(GraphIo, WriteOrderAndFormat) {
  GraphBuilder b(4, 2);
  b.set_edge(1, 2, 3, 0.5);
  b.set_edge(0, 3, 0, 1.0);
  b.set_edge(0, 1, 2, 2.0);
  std::ostringstream out;
  write_graph(std::move(b).build(), out);
  EXPECT_EQ(out.str(), "#mlgraph n=4 L=2\n1\t0\t3\t1\n1\t1\t2\t2\n2\t2\t3\t0.5\n");
}

TEST(GraphIo, EmptyGraphRoundTrips) {
  const MultilayerGraph g = parse("#mlgraph n=3 L=2\n");
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_layers(), 2u);
  EXPECT_TRUE(g.layer(1).isZero(0));
}

TEST(GraphIo, AcceptsCrlf) {
  const MultilayerGraph g = parse("#mlgraph n=2 L=1\r\n1\t0\t1\t3\r\n");
  EXPECT_DOUBLE_EQ(g.layer(0)(1, 0), 3.0);
}

TEST(GraphIo, RejectsNegativeWeight) {
  try {
    parse("#mlgraph n=3 L=1\n1\t0\t1\t-1\n");
    FAIL() << "expected rejection";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("negative"), std::string::npos);
  }
}

TEST(GraphIo, RejectsLayerOutOfRange) {
  EXPECT_THROW(parse("#mlgraph n=3 L=2\n3\t0\t1\t1\n"), FormatError);
  EXPECT_THROW(parse("#mlgraph n=3 L=2\n0\t0\t1\t1\n"), FormatError);
}

TEST(GraphIo, RejectsNodeOutOfRange) { EXPECT_THROW(parse("#mlgraph n=3 L=1\n1\t0\t3\t1\n"), FormatError); }

TEST(GraphIo, RejectsDuplicateEdge) {
  EXPECT_THROW(parse("#mlgraph n=3 L=1\n1\t0\t1\t1\n1\t0\t1\t2\n"), FormatError);
}

TEST(GraphIo, RejectsUnorderedPairAndSelfLoop) {
  EXPECT_THROW(parse("#mlgraph n=3 L=1\n1\t1\t0\t1\n"), FormatError);
  EXPECT_THROW(parse("#mlgraph n=3 L=1\n1\t1\t1\t1\n"), FormatError);
}

TEST(GraphIo, RejectsMalformedHeaderAndLines) {
  EXPECT_THROW(parse(""), FormatError);
  EXPECT_THROW(parse("#graph n=3 L=1\n"), FormatError);
  EXPECT_THROW(parse("#mlgraph n=3\n"), FormatError);
  EXPECT_THROW(parse("#mlgraph n=x L=1\n"), FormatError);
  EXPECT_THROW(parse("#mlgraph n=3 L=1\n1\t0\t1\n"), FormatError);
  EXPECT_THROW(parse("#mlgraph n=3 L=1\n1\t0\t1\tabc\n"), FormatError);
}

TEST(LabelsIo, RoundTrip) {
  const std::vector<int> labels{2, 1, 1, 3, 2};
  std::ostringstream out;
  write_labels(labels, out);
  EXPECT_EQ(out.str(), "0\t2\n1\t1\n2\t1\n3\t3\n4\t2\n");
  EXPECT_EQ(parse_labels(out.str()).labels(), labels);
}

TEST(LabelsIo, RejectsMissingOrRepeatedNodes) {
  EXPECT_THROW(parse_labels("0\t1\n2\t2\n"), FormatError);
  EXPECT_THROW(parse_labels("0\t1\n0\t2\n"), FormatError);
  EXPECT_THROW(parse_labels("0\t1\t4\n"), FormatError);
  EXPECT_THROW(parse_labels(""), FormatError);
}

TEST(GraphIo, MissingFile) { EXPECT_THROW(read_graph("/nonexistent/graph.tsv"), FormatError); }
