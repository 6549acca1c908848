#ifndef MLSGC_GRAPH_IO_HPP
#define MLSGC_GRAPH_IO_HPP

// Text formats.
//
// Graph file (TSV):
//   #mlgraph n=<n> L=<L>
//   <layer 1-based>\t<u>\t<v>\t<weight>      one line per edge, u < v, 0-based nodes
// Edges are written in (layer, u, v) ascending order. Duplicate edges are rejected.
//
// Labels file (TSV): one line <node>\t<cluster-id> per node.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <vector>

#include "mlsgc/errors.hpp"
#include "mlsgc/graph.hpp"

namespace mlsgc {

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, const std::string& where) {
  T value{};
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || s.empty())
    throw FormatError(where + ": cannot parse '" + std::string(s) + "'");
  return value;
}

inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

inline void write_graph(const MultilayerGraph& g, std::ostream& out) {
  out << "#mlgraph n=" << g.num_nodes() << " L=" << g.num_layers() << '\n';
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  for (std::size_t l = 0; l < g.num_layers(); ++l) {
    const Matrix& W = g.layer(l);
    for (Eigen::Index u = 0; u < n; ++u)
      for (Eigen::Index v = u + 1; v < n; ++v)
        if (W(u, v) != 0.0) out << (l + 1) << '\t' << u << '\t' << v << '\t' << detail::format_double(W(u, v)) << '\n';
  }
}

inline MultilayerGraph read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("graph file: missing header");
  detail::strip_cr(line);
  std::istringstream header(line);
  std::string tag, n_field, l_field, extra;
  header >> tag >> n_field >> l_field;
  if (tag != "#mlgraph" || n_field.rfind("n=", 0) != 0 || l_field.rfind("L=", 0) != 0 || (header >> extra))
    throw FormatError("graph file: malformed header '" + line + "', expected '#mlgraph n=<n> L=<L>'");
  const auto n = detail::parse_number<std::size_t>(std::string_view(n_field).substr(2), "graph header n");
  const auto layers = detail::parse_number<std::size_t>(std::string_view(l_field).substr(2), "graph header L");
  if (layers == 0) throw FormatError("graph file: L must be >= 1");

  GraphBuilder builder(n, layers);
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.empty()) continue;
    const std::string where = "graph file line " + std::to_string(line_no);
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 4) throw FormatError(where + ": expected 4 tab-separated fields");
    const auto layer = detail::parse_number<std::size_t>(fields[0], where);
    const auto u = detail::parse_number<std::size_t>(fields[1], where);
    const auto v = detail::parse_number<std::size_t>(fields[2], where);
    const auto w = detail::parse_number<double>(fields[3], where);
    if (layer < 1 || layer > layers)
      throw FormatError(where + ": layer " + std::to_string(layer) + " out of range 1.." + std::to_string(layers));
    if (u >= n || v >= n) throw FormatError(where + ": node id out of range");
    if (u >= v) throw FormatError(where + ": expected u < v");
    if (!std::isfinite(w) || w < 0.0) throw FormatError(where + ": negative weight");
    if (!seen.emplace(layer, u, v).second) throw FormatError(where + ": duplicate edge");
    builder.set_edge(layer - 1, u, v, w);
  }
  return std::move(builder).build();
}

inline void write_graph(const MultilayerGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_graph(g, out);
  if (!out) throw FormatError("write failed for '" + path + "'");
}

inline MultilayerGraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

inline void write_labels(const std::vector<int>& labels, std::ostream& out) {
  for (std::size_t u = 0; u < labels.size(); ++u) out << u << '\t' << labels[u] << '\n';
}

/// Reads a labels file; every node 0..n-1 must appear exactly once.
inline ClusterAssignment read_labels(std::istream& in) {
  std::vector<std::pair<std::size_t, int>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.empty()) continue;
    const std::string where = "labels file line " + std::to_string(line_no);
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 2) throw FormatError(where + ": expected 2 tab-separated fields");
    entries.emplace_back(detail::parse_number<std::size_t>(fields[0], where),
                         detail::parse_number<int>(fields[1], where));
  }
  std::vector<int> labels(entries.size(), 0);
  for (const auto& [node, k] : entries) {
    if (node >= labels.size()) throw FormatError("labels file: node id " + std::to_string(node) + " out of range");
    if (labels[node] != 0) throw FormatError("labels file: node " + std::to_string(node) + " listed twice");
    if (k < 1) throw FormatError("labels file: cluster ids must be >= 1");
    labels[node] = k;
  }
  try {
    return ClusterAssignment(std::move(labels));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("labels file: ") + e.what());
  }
}

inline void write_labels(const std::vector<int>& labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_labels(labels, out);
}

inline ClusterAssignment read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open labels file '" + path + "'");
  return read_labels(in);
}

}  // namespace mlsgc

#endif  // MLSGC_GRAPH_IO_HPP
