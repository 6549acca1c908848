#ifndef MLSGC_EXPERIMENTS_HPP
#define MLSGC_EXPERIMENTS_HPP

// Detectability sweeps over the two-layer correlated generator.
//
// Noise sweep: a (p1, p2) grid, evaluated at one or more aggregation weights.
// Weight sweep: a w1 line at fixed (p1, p2).
//
// Repetition r of the cell at (p1, p2) generates its graph from
// derive_seed(seed_root, {p1, p2, r}), so every aggregation weight sees the
// same graphs and results do not depend on thread scheduling.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mlsgc/assignment.hpp"
#include "mlsgc/clustering.hpp"
#include "mlsgc/graph_io.hpp"
#include "mlsgc/parallel.hpp"
#include "mlsgc/phase.hpp"
#include "mlsgc/random.hpp"
#include "mlsgc/synth.hpp"

namespace mlsgc {

struct GeneratorConfig {
  std::vector<std::size_t> cluster_sizes{200, 200, 200};
  JointEdgeProbabilities q;
};

/// Grid values lo, lo + step, ..., hi (inclusive), rounded to 1e-10 so that
/// e.g. 0.1 * 3 prints as 0.3.
inline std::vector<double> grid_values(double lo, double hi, double step) {
  if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw InvalidArgument("grid must lie within [0,1]");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e10) / 1e10);
  return out;
}

inline std::uint64_t seed_coordinate(double x) { return static_cast<std::uint64_t>(std::llround(x * 1e9)); }

inline std::uint64_t cell_seed(std::uint64_t root, double p1, double p2, int rep) {
  return derive_seed(root, {seed_coordinate(p1), seed_coordinate(p2), static_cast<std::uint64_t>(rep)});
}

struct NoiseSweepSpec {
  GeneratorConfig generator;
  std::vector<double> p1_values = grid_values(0.0, 1.0, 0.05);
  std::vector<double> p2_values = grid_values(0.0, 1.0, 0.05);
  std::vector<double> w1_values{0.8, 0.5, 0.2};
  int reps = 10;
  std::uint64_t seed_root = 1;
  unsigned threads = 0;

  void validate() const {
    if (reps < 1) throw InvalidArgument("sweep: repetitions must be >= 1");
    if (p1_values.empty() || p2_values.empty() || w1_values.empty()) throw InvalidArgument("sweep: empty grid");
    for (const auto* v : {&p1_values, &p2_values, &w1_values})
      for (double x : *v)
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("sweep: grid values must lie in [0,1]");
    if (generator.cluster_sizes.size() < 2) throw InvalidArgument("sweep: need at least two clusters");
    generator.q.validate();
  }
};

struct NoiseCell {
  double p1 = 0.0, p2 = 0.0, w1 = 0.0;
  double detect_mean = 0.0, detect_std = 0.0;
  double t_w = 0.0, t_lb = 0.0, t_ub = 0.0, universal_lb = 0.0;
  Regime regime = Regime::indeterminate;
  int reps = 0;
};

namespace detail {

inline double sample_std(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

inline double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

struct RepOutcome {
  std::vector<double> detect;  // per weight
  std::vector<double> t_lb;    // per weight
  std::vector<double> t_ub;    // per weight
  double universal_lb = 0.0;
  double intercept1 = 0.0;  // min_k S_{2:K}(L_k^(1)) / n
  double intercept2 = 0.0;
};

inline RepOutcome evaluate_rep(const GeneratorConfig& gen, double p1, double p2, const std::vector<double>& w1_values,
                               std::uint64_t seed) {
  CorrelatedTwoLayerParams params;
  params.cluster_sizes = gen.cluster_sizes;
  params.q = gen.q;
  params.p1 = p1;
  params.p2 = p2;
  params.seed = seed;
  const GeneratedGraph gg = generate_correlated_two_layer(params);
  const int K = gg.truth.num_clusters();
  const Matrix layer_sums = layer_cluster_partial_sums(gg.graph, gg.truth);
  const double n = static_cast<double>(gg.graph.num_nodes());

  RepOutcome out;
  out.universal_lb = universal_lower_bound(layer_sums, gg.truth);
  out.intercept1 = layer_sums.row(0).minCoeff() / n;
  out.intercept2 = layer_sums.row(1).minCoeff() / n;
  for (std::size_t i = 0; i < w1_values.size(); ++i) {
    const LayerWeights w = LayerWeights::two_layer(w1_values[i]);
    const SgcResult sgc = multilayer_sgc(gg.graph, w, K, derive_seed(seed, {0x6b6d65616e73ULL, i}));
    out.detect.push_back(detectability(sgc.labels, gg.truth));
    const CriticalBounds b = critical_bounds(gg.graph, gg.truth, w);
    out.t_lb.push_back(b.t_lb);
    out.t_ub.push_back(b.t_ub);
  }
  return out;
}

}  // namespace detail

/// One row per (p1, p2, w1): mean detectability over repetitions plus the
/// repetition-averaged critical bounds and the regime verdict.
inline std::vector<NoiseCell> run_noise_sweep(const NoiseSweepSpec& spec) {
  spec.validate();
  std::vector<std::pair<double, double>> cells;
  for (double p1 : spec.p1_values)
    for (double p2 : spec.p2_values) cells.emplace_back(p1, p2);

  const std::size_t reps = static_cast<std::size_t>(spec.reps);
  std::vector<detail::RepOutcome> outcomes(cells.size() * reps);
  parallel_for(outcomes.size(), worker_count(spec.threads), [&](std::size_t item) {
    const auto& [p1, p2] = cells[item / reps];
    const int rep = static_cast<int>(item % reps);
    outcomes[item] = detail::evaluate_rep(spec.generator, p1, p2, spec.w1_values, cell_seed(spec.seed_root, p1, p2, rep));
  });

  std::vector<NoiseCell> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t i = 0; i < spec.w1_values.size(); ++i) {
      std::vector<double> det, lb, ub, ulb;
      for (std::size_t r = 0; r < reps; ++r) {
        const auto& o = outcomes[c * reps + r];
        det.push_back(o.detect[i]);
        lb.push_back(o.t_lb[i]);
        ub.push_back(o.t_ub[i]);
        ulb.push_back(o.universal_lb);
      }
      NoiseCell row;
      row.p1 = cells[c].first;
      row.p2 = cells[c].second;
      row.w1 = spec.w1_values[i];
      row.detect_mean = detail::mean_of(det);
      row.detect_std = detail::sample_std(det);
      row.t_w = row.w1 * row.p1 + (1.0 - row.w1) * row.p2;
      row.t_lb = detail::mean_of(lb);
      row.t_ub = detail::mean_of(ub);
      row.universal_lb = detail::mean_of(ulb);
      row.regime = classify_regime(row.t_w, row.t_lb, row.t_ub);
      row.reps = spec.reps;
      rows.push_back(row);
    }
  }
  return rows;
}

struct GeoMeanCell {
  double p1 = 0.0, p2 = 0.0;
  double detect_geomean = 0.0;
  double universal_lb = 0.0;
  int weights = 0;
};

/// Geometric mean of detect_mean across all weight rows of each (p1, p2) cell.
inline std::vector<GeoMeanCell> geometric_mean_over_weights(const std::vector<NoiseCell>& rows) {
  std::map<std::pair<double, double>, std::vector<const NoiseCell*>> groups;
  std::vector<std::pair<double, double>> order;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.p1, r.p2);
    if (groups.find(key) == groups.end()) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<GeoMeanCell> out;
  for (const auto& key : order) {
    const auto& members = groups[key];
    double log_sum = 0.0;
    bool zero = false;
    for (const NoiseCell* r : members) {
      if (r->detect_mean <= 0.0) zero = true;
      else log_sum += std::log(r->detect_mean);
    }
    GeoMeanCell g;
    g.p1 = key.first;
    g.p2 = key.second;
    g.weights = static_cast<int>(members.size());
    g.detect_geomean = zero ? 0.0 : std::exp(log_sum / static_cast<double>(members.size()));
    g.universal_lb = members.front()->universal_lb;
    out.push_back(g);
  }
  return out;
}

struct WeightSweepSpec {
  GeneratorConfig generator;
  double p1 = 0.2;
  double p2 = 0.5;
  std::vector<double> w1_values = grid_values(0.0, 1.0, 0.05);
  int reps = 20;
  std::uint64_t seed_root = 1;
  unsigned threads = 0;

  void validate() const {
    if (reps < 1) throw InvalidArgument("sweep: repetitions must be >= 1");
    if (w1_values.empty()) throw InvalidArgument("sweep: empty weight line");
    for (double x : w1_values)
      if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("sweep: weights must lie in [0,1]");
    if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) throw InvalidArgument("sweep: noise must lie in [0,1]");
    if (generator.cluster_sizes.size() < 2) throw InvalidArgument("sweep: need at least two clusters");
    generator.q.validate();
  }
};

struct WeightPoint {
  double w1 = 0.0, p1 = 0.0, p2 = 0.0;
  double detect_mean = 0.0, detect_std = 0.0;
  double t_w = 0.0, t_lb = 0.0, t_ub = 0.0;
  Regime regime = Regime::indeterminate;
  int reps = 0;
};

struct WeightSweepResult {
  std::vector<WeightPoint> points;
  CriticalWeight predicted;  // from repetition-averaged layer intercepts
};

inline WeightSweepResult run_weight_sweep(const WeightSweepSpec& spec) {
  spec.validate();
  const std::size_t reps = static_cast<std::size_t>(spec.reps);
  std::vector<detail::RepOutcome> outcomes(reps);
  parallel_for(reps, worker_count(spec.threads), [&](std::size_t r) {
    outcomes[r] = detail::evaluate_rep(spec.generator, spec.p1, spec.p2, spec.w1_values,
                                       cell_seed(spec.seed_root, spec.p1, spec.p2, static_cast<int>(r)));
  });

  WeightSweepResult result;
  std::vector<double> a1, a2;
  for (const auto& o : outcomes) {
    a1.push_back(o.intercept1);
    a2.push_back(o.intercept2);
  }
  result.predicted = critical_weight_from_intercepts(detail::mean_of(a1), detail::mean_of(a2), spec.p1, spec.p2,
                                                     static_cast<int>(spec.generator.cluster_sizes.size()));
  for (std::size_t i = 0; i < spec.w1_values.size(); ++i) {
    std::vector<double> det, lb, ub;
    for (const auto& o : outcomes) {
      det.push_back(o.detect[i]);
      lb.push_back(o.t_lb[i]);
      ub.push_back(o.t_ub[i]);
    }
    WeightPoint pt;
    pt.w1 = spec.w1_values[i];
    pt.p1 = spec.p1;
    pt.p2 = spec.p2;
    pt.detect_mean = detail::mean_of(det);
    pt.detect_std = detail::sample_std(det);
    pt.t_w = pt.w1 * spec.p1 + (1.0 - pt.w1) * spec.p2;
    pt.t_lb = detail::mean_of(lb);
    pt.t_ub = detail::mean_of(ub);
    pt.regime = classify_regime(pt.t_w, pt.t_lb, pt.t_ub);
    pt.reps = spec.reps;
    result.points.push_back(pt);
  }
  return result;
}

/// First x at which the piecewise-linear curve (x_i, y_i) reaches `level`.
inline std::optional<double> first_crossing(const std::vector<double>& x, const std::vector<double>& y, double level) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = y[i] - level, b = y[i + 1] - level;
    if (a == 0.0) return x[i];
    if ((a < 0.0) != (b < 0.0)) return x[i] + (x[i + 1] - x[i]) * a / (a - b);
  }
  if (!y.empty() && y.back() == level) return x.back();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kNoiseCsvHeader = "p1,p2,w1,detect_mean,detect_std,t_w,t_lb,t_ub,universal_lb,regime,reps";
inline constexpr const char* kWeightCsvHeader = "w1,p1,p2,detect_mean,detect_std,t_w,t_lb,t_ub,regime,reps,w1_star";
inline constexpr const char* kGeoMeanCsvHeader = "p1,p2,detect_geomean,universal_lb,weights";

namespace detail {

inline Regime parse_regime(const std::string& s) {
  for (Regime r : {Regime::below, Regime::above, Regime::boundary, Regime::indeterminate})
    if (s == to_string(r)) return r;
  throw FormatError("unknown regime '" + s + "'");
}

inline std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::vector<std::vector<std::string>> read_csv_rows(std::istream& in, const char* header) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("csv: missing header");
  strip_cr(line);
  if (line != header) throw FormatError("csv: unexpected header '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (!line.empty()) rows.push_back(split_commas(line));
  }
  return rows;
}

inline double csv_double(const std::string& s) { return parse_number<double>(s, "csv"); }

}  // namespace detail

inline void write_noise_csv(const std::vector<NoiseCell>& rows, std::ostream& out) {
  using detail::format_double;
  out << kNoiseCsvHeader << '\n';
  for (const auto& r : rows)
    out << format_double(r.p1) << ',' << format_double(r.p2) << ',' << format_double(r.w1) << ','
        << format_double(r.detect_mean) << ',' << format_double(r.detect_std) << ',' << format_double(r.t_w) << ','
        << format_double(r.t_lb) << ',' << format_double(r.t_ub) << ',' << format_double(r.universal_lb) << ','
        << to_string(r.regime) << ',' << r.reps << '\n';
}

inline std::vector<NoiseCell> read_noise_csv(std::istream& in) {
  std::vector<NoiseCell> rows;
  for (const auto& f : detail::read_csv_rows(in, kNoiseCsvHeader)) {
    if (f.size() != 11) throw FormatError("noise csv: expected 11 columns");
    NoiseCell r;
    r.p1 = detail::csv_double(f[0]);
    r.p2 = detail::csv_double(f[1]);
    r.w1 = detail::csv_double(f[2]);
    r.detect_mean = detail::csv_double(f[3]);
    r.detect_std = detail::csv_double(f[4]);
    r.t_w = detail::csv_double(f[5]);
    r.t_lb = detail::csv_double(f[6]);
    r.t_ub = detail::csv_double(f[7]);
    r.universal_lb = detail::csv_double(f[8]);
    r.regime = detail::parse_regime(f[9]);
    r.reps = detail::parse_number<int>(f[10], "csv");
    rows.push_back(r);
  }
  return rows;
}

inline void write_geomean_csv(const std::vector<GeoMeanCell>& rows, std::ostream& out) {
  using detail::format_double;
  out << kGeoMeanCsvHeader << '\n';
  for (const auto& r : rows)
    out << format_double(r.p1) << ',' << format_double(r.p2) << ',' << format_double(r.detect_geomean) << ','
        << format_double(r.universal_lb) << ',' << r.weights << '\n';
}

inline std::vector<GeoMeanCell> read_geomean_csv(std::istream& in) {
  std::vector<GeoMeanCell> rows;
  for (const auto& f : detail::read_csv_rows(in, kGeoMeanCsvHeader)) {
    if (f.size() != 5) throw FormatError("geomean csv: expected 5 columns");
    rows.push_back({detail::csv_double(f[0]), detail::csv_double(f[1]), detail::csv_double(f[2]),
                    detail::csv_double(f[3]), detail::parse_number<int>(f[4], "csv")});
  }
  return rows;
}

inline void write_weight_csv(const WeightSweepResult& res, std::ostream& out) {
  using detail::format_double;
  out << kWeightCsvHeader << '\n';
  const std::string star = res.predicted.w1 ? format_double(*res.predicted.w1) : std::string();
  for (const auto& p : res.points)
    out << format_double(p.w1) << ',' << format_double(p.p1) << ',' << format_double(p.p2) << ','
        << format_double(p.detect_mean) << ',' << format_double(p.detect_std) << ',' << format_double(p.t_w) << ','
        << format_double(p.t_lb) << ',' << format_double(p.t_ub) << ',' << to_string(p.regime) << ',' << p.reps << ','
        << star << '\n';
}

inline WeightSweepResult read_weight_csv(std::istream& in) {
  WeightSweepResult res;
  for (const auto& f : detail::read_csv_rows(in, kWeightCsvHeader)) {
    if (f.size() != 11) throw FormatError("weight csv: expected 11 columns");
    WeightPoint p;
    p.w1 = detail::csv_double(f[0]);
    p.p1 = detail::csv_double(f[1]);
    p.p2 = detail::csv_double(f[2]);
    p.detect_mean = detail::csv_double(f[3]);
    p.detect_std = detail::csv_double(f[4]);
    p.t_w = detail::csv_double(f[5]);
    p.t_lb = detail::csv_double(f[6]);
    p.t_ub = detail::csv_double(f[7]);
    p.regime = detail::parse_regime(f[8]);
    p.reps = detail::parse_number<int>(f[9], "csv");
    if (!f[10].empty()) {
      res.predicted.w1 = detail::csv_double(f[10]);
      res.predicted.status = CriticalWeightStatus::crossing;
    }
    res.points.push_back(p);
  }
  return res;
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  writer(out);
  if (!out) throw FormatError("write failed for '" + path + "'");
}

}  // namespace mlsgc

#endif  // MLSGC_EXPERIMENTS_HPP
