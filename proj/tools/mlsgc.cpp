// mlsgc: command-line front end for multilayer spectral graph clustering.
//
// Subcommands: generate, cluster, bounds, sweep-noise, sweep-weight, sintheta.
// Every subcommand accepts --config <file.json>; keys are flag names without
// the leading dashes, and flags given on the command line win.
//
// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlsgc/mlsgc.hpp"

namespace {

using namespace mlsgc;
using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct GeneratorFlags {
  std::vector<std::size_t> sizes{200, 200, 200};
  double q11 = 0.3, q10 = 0.2, q01 = 0.1, q00 = 0.4;

  void add(CLI::App* app) {
    app->add_option("--sizes", sizes, "cluster sizes")->delimiter(',');
    app->add_option("--q11", q11, "within-cluster pair in both layers");
    app->add_option("--q10", q10, "within-cluster pair in layer 1 only");
    app->add_option("--q01", q01, "within-cluster pair in layer 2 only");
    app->add_option("--q00", q00, "within-cluster pair in neither layer");
  }
  GeneratorConfig config() const { return {sizes, {q11, q10, q01, q00}}; }
};

std::string json_to_flag_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + json_to_flag_value(v[i]);
    return out;
  }
  return v.dump();
}

/// Applies a JSON config file as option defaults of the selected subcommand.
void apply_config(CLI::App& app, int argc, char** argv) {
  CLI::App* sub = nullptr;
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (!sub) {
      for (CLI::App* s : app.get_subcommands({}))
        if (s->get_name() == arg) sub = s;
    }
    if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
  }
  if (path.empty()) return;
  if (!sub) throw CLI::ValidationError("--config", "no subcommand selected");
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw CLI::ValidationError("--config", std::string("invalid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw CLI::ValidationError("--config", "top level must be an object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") continue;
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt) throw CLI::ValidationError("--config", "unknown key '" + key + "' for " + sub->get_name());
    if (opt->get_expected_min() == 0) {
      // Flags ignore default_val; record an occurrence instead.
      if (value.is_boolean() ? value.get<bool>() : json_to_flag_value(value) == "true") opt->add_result("true");
      continue;
    }
    opt->default_val(json_to_flag_value(value));
    opt->required(false);
  }
}

std::optional<NoiseSpec> noise_from_flags(const std::vector<double>& p, const std::vector<double>& wbar,
                                          std::size_t layers, int K) {
  if (p.empty()) return std::nullopt;
  if (p.size() != layers) throw InvalidArgument("--p needs one value per layer");
  std::vector<double> means = wbar.empty() ? std::vector<double>(layers, 1.0) : wbar;
  if (means.size() != layers) throw InvalidArgument("--wbar needs one value per layer");
  return NoiseSpec::identical(p, means, K);
}

void print_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    write_file(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  }
}

std::string weight_suffix(double w1) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_w%.2f.svg", w1);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilayer spectral graph clustering via convex layer aggregation"};
  app.require_subcommand(1);
  std::string config_path;

  // generate -----------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "generate a synthetic multilayer graph and its labels");
  GeneratorFlags gen_flags;
  std::string gen_model = "correlated", gen_out, gen_labels_out, gen_params_out, gen_weight_mode = "constant";
  double gen_p1 = 0.2, gen_p2 = 0.2;
  std::vector<double> gen_p, gen_wbar, gen_density;
  std::uint64_t gen_seed = 1;
  gen->add_option("--config", config_path, "JSON config file");
  gen->add_option("--model", gen_model, "correlated | rim")->check(CLI::IsMember({"correlated", "rim"}));
  gen_flags.add(gen);
  gen->add_option("--p1", gen_p1, "layer-1 between-cluster edge probability (correlated)");
  gen->add_option("--p2", gen_p2, "layer-2 between-cluster edge probability (correlated)");
  gen->add_option("--p", gen_p, "per-layer between-cluster probability (rim)")->delimiter(',');
  gen->add_option("--wbar", gen_wbar, "per-layer mean between-cluster weight (rim)")->delimiter(',');
  gen->add_option("--density", gen_density, "per-layer within-cluster density (rim)")->delimiter(',');
  gen->add_option("--weight-mode", gen_weight_mode, "constant | uniform | exponential (rim)");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "graph file")->required();
  gen->add_option("--labels-out", gen_labels_out, "ground-truth labels file");
  gen->add_option("--params-out", gen_params_out, "parameter sidecar JSON (default <out>.json)");

  // cluster ------------------------------------------------------------------
  auto* clu = app.add_subcommand("cluster", "cluster a graph file");
  std::string clu_graph, clu_labels, clu_out, clu_report;
  std::vector<double> clu_w, clu_p, clu_wbar;
  int clu_K = 0;
  std::uint64_t clu_seed = 1;
  clu->add_option("--config", config_path, "JSON config file");
  clu->add_option("--graph", clu_graph, "graph file")->required();
  clu->add_option("--labels", clu_labels, "ground-truth labels file (enables the report)");
  clu->add_option("--w", clu_w, "layer weights on the simplex")->delimiter(',')->required();
  clu->add_option("--K", clu_K, "number of clusters (default: from --labels)");
  clu->add_option("--seed", clu_seed, "K-means seed");
  clu->add_option("--out", clu_out, "predicted labels file (default stdout)");
  clu->add_option("--report", clu_report, "phase report JSON path (default: stdout, or stderr when labels go to stdout)");
  clu->add_option("--p", clu_p, "per-layer noise probability for the report")->delimiter(',');
  clu->add_option("--wbar", clu_wbar, "per-layer mean noise weight for the report")->delimiter(',');

  // bounds -------------------------------------------------------------------
  auto* bnd = app.add_subcommand("bounds", "phase report for a graph and its ground truth");
  std::string bnd_graph, bnd_labels, bnd_out;
  std::vector<double> bnd_w, bnd_p, bnd_wbar;
  bnd->add_option("--config", config_path, "JSON config file");
  bnd->add_option("--graph", bnd_graph, "graph file")->required();
  bnd->add_option("--labels", bnd_labels, "ground-truth labels file")->required();
  bnd->add_option("--w", bnd_w, "layer weights on the simplex")->delimiter(',')->required();
  bnd->add_option("--p", bnd_p, "per-layer noise probability")->delimiter(',');
  bnd->add_option("--wbar", bnd_wbar, "per-layer mean noise weight")->delimiter(',');
  bnd->add_option("--out", bnd_out, "output JSON (default stdout)");

  // sweep-noise --------------------------------------------------------------
  auto* swn = app.add_subcommand("sweep-noise", "detectability over a (p1, p2) grid");
  GeneratorFlags swn_gen;
  double swn_step = 0.05, swn_pmin = 0.0, swn_pmax = 1.0;
  std::vector<double> swn_w1{0.8, 0.5, 0.2};
  bool swn_geomean = false;
  int swn_reps = 10;
  std::uint64_t swn_seed = 1;
  unsigned swn_threads = 0;
  std::string swn_csv, swn_svg;
  swn->add_option("--config", config_path, "JSON config file");
  swn_gen.add(swn);
  swn->add_option("--step", swn_step, "grid step");
  swn->add_option("--p-min", swn_pmin, "grid start");
  swn->add_option("--p-max", swn_pmax, "grid end");
  swn->add_option("--w1", swn_w1, "layer-1 weights to evaluate")->delimiter(',');
  swn->add_flag("--geomean", swn_geomean, "also evaluate w1 = 0, 0.1, ..., 1 and write their geometric mean");
  swn->add_option("--reps", swn_reps, "repetitions per cell");
  swn->add_option("--seed", swn_seed, "seed root");
  swn->add_option("--threads", swn_threads, "worker threads (capped by MLSGC_THREADS)");
  swn->add_option("--csv", swn_csv, "output CSV")->required();
  swn->add_option("--svg", swn_svg, "SVG path prefix");

  // sweep-weight -------------------------------------------------------------
  auto* sww = app.add_subcommand("sweep-weight", "detectability along w1 at fixed noise");
  GeneratorFlags sww_gen;
  double sww_p1 = 0.2, sww_p2 = 0.5, sww_step = 0.05;
  int sww_reps = 20;
  std::uint64_t sww_seed = 1;
  unsigned sww_threads = 0;
  std::string sww_csv, sww_svg;
  sww->add_option("--config", config_path, "JSON config file");
  sww_gen.add(sww);
  sww->add_option("--p1", sww_p1, "layer-1 noise probability");
  sww->add_option("--p2", sww_p2, "layer-2 noise probability");
  sww->add_option("--w-step", sww_step, "w1 step");
  sww->add_option("--reps", sww_reps, "repetitions per point");
  sww->add_option("--seed", sww_seed, "seed root");
  sww->add_option("--threads", sww_threads, "worker threads (capped by MLSGC_THREADS)");
  sww->add_option("--csv", sww_csv, "output CSV")->required();
  sww->add_option("--svg", sww_svg, "SVG path");

  // sintheta -----------------------------------------------------------------
  auto* sin = app.add_subcommand("sintheta", "subspace distance to an identical-noise reference and its bound");
  std::string sin_graph, sin_labels, sin_tilde, sin_out;
  std::vector<double> sin_w;
  std::optional<double> sin_t, sin_tmax;
  int sin_grid = 50;
  std::uint64_t sin_seed = 1;
  sin->add_option("--config", config_path, "JSON config file");
  sin->add_option("--graph", sin_graph, "graph file")->required();
  sin->add_option("--labels", sin_labels, "ground-truth labels file")->required();
  sin->add_option("--w", sin_w, "layer weights on the simplex")->delimiter(',')->required();
  sin->add_option("--tilde-graph", sin_tilde, "reference graph (default: regenerate from the signal)");
  sin->add_option("--t", sin_t, "aggregated noise level of the reference");
  sin->add_option("--t-max", sin_tmax, "minimize the bound over a grid in (0, t-max]");
  sin->add_option("--grid", sin_grid, "grid points for --t-max");
  sin->add_option("--seed", sin_seed, "seed for regenerated references");
  sin->add_option("--out", sin_out, "output JSON (default stdout)");

  try {
    apply_config(app, argc, argv);
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      json sidecar;
      GeneratedGraph gg = [&]() -> GeneratedGraph {
        if (gen_model == "correlated") {
          CorrelatedTwoLayerParams params;
          params.cluster_sizes = gen_flags.sizes;
          params.q = {gen_flags.q11, gen_flags.q10, gen_flags.q01, gen_flags.q00};
          params.p1 = gen_p1;
          params.p2 = gen_p2;
          params.seed = gen_seed;
          sidecar = to_json(params);
          return generate_correlated_two_layer(params);
        }
        const std::size_t layers = gen_density.size();
        if (layers == 0) throw InvalidArgument("rim model needs --density (one value per layer)");
        const int K = static_cast<int>(gen_flags.sizes.size());
        std::vector<LayerSignal> signal;
        for (double d : gen_density) signal.push_back(LayerSignal::erdos_renyi(std::vector<double>(gen_flags.sizes.size(), d)));
        auto noise = noise_from_flags(gen_p.empty() ? std::vector<double>(layers, 0.0) : gen_p, gen_wbar, layers, K);
        RIMParams params{gen_flags.sizes, std::move(signal), *noise, parse_weight_mode(gen_weight_mode), gen_seed};
        sidecar = to_json(params);
        return generate_rim(params);
      }();
      write_graph(gg.graph, gen_out);
      if (!gen_labels_out.empty()) write_labels(gg.truth.labels(), gen_labels_out);
      print_json(sidecar, gen_params_out.empty() ? gen_out + ".json" : gen_params_out);
      return 0;
    }

    if (*clu) {
      const MultilayerGraph g = read_graph(clu_graph);
      const LayerWeights w(clu_w);
      std::optional<ClusterAssignment> truth;
      if (!clu_labels.empty()) truth = read_labels(clu_labels);
      const int K = clu_K > 0 ? clu_K : (truth ? truth->num_clusters() : 0);
      if (K < 2) throw InvalidArgument("--K is required (>= 2) when no --labels file is given");
      const SgcResult res = multilayer_sgc(g, w, K, clu_seed);
      if (!res.embedding.connected) std::cerr << "warning: aggregated graph is disconnected\n";
      if (res.embedding.tie_at_k) std::cerr << "warning: eigenvalue tie at lambda_K; embedding is basis-dependent\n";
      if (clu_out.empty() || clu_out == "-")
        write_labels(res.labels, std::cout);
      else
        write_labels(res.labels, clu_out);
      if (truth) {
        const auto noise = noise_from_flags(clu_p, clu_wbar, g.num_layers(), truth->num_clusters());
        PhaseReport report = make_phase_report(g, *truth, w, noise, res.embedding);
        report.detectability = detectability(res.labels, *truth);
        if (!clu_report.empty())
          print_json(to_json(report), clu_report);
        else if (!clu_out.empty() && clu_out != "-")
          print_json(to_json(report), "-");
        else
          std::cerr << to_json(report).dump(2) << '\n';  // stdout carries the labels
      }
      return 0;
    }

    if (*bnd) {
      const MultilayerGraph g = read_graph(bnd_graph);
      const ClusterAssignment truth = read_labels(bnd_labels);
      const LayerWeights w(bnd_w);
      const auto noise = noise_from_flags(bnd_p, bnd_wbar, g.num_layers(), truth.num_clusters());
      const PhaseReport report = make_phase_report(g, truth, w, noise);
      if (!report.connected) std::cerr << "warning: aggregated graph is disconnected\n";
      print_json(to_json(report), bnd_out);
      return 0;
    }

    if (*swn) {
      NoiseSweepSpec spec;
      spec.generator = swn_gen.config();
      spec.p1_values = grid_values(swn_pmin, swn_pmax, swn_step);
      spec.p2_values = spec.p1_values;
      spec.w1_values = swn_w1;
      if (swn_geomean)
        for (double w : grid_values(0.0, 1.0, 0.1))
          if (std::find(spec.w1_values.begin(), spec.w1_values.end(), w) == spec.w1_values.end())
            spec.w1_values.push_back(w);
      spec.reps = swn_reps;
      spec.seed_root = swn_seed;
      spec.threads = swn_threads;
      const auto rows = run_noise_sweep(spec);
      write_file(swn_csv, [&](std::ostream& out) { write_noise_csv(rows, out); });
      std::vector<GeoMeanCell> geo;
      if (swn_geomean) {
        std::vector<NoiseCell> unit_rows;
        for (const auto& r : rows)
          for (double w : grid_values(0.0, 1.0, 0.1))
            if (r.w1 == w) unit_rows.push_back(r);
        geo = geometric_mean_over_weights(unit_rows);
        const std::string geo_csv = swn_csv + ".geomean.csv";
        write_file(geo_csv, [&](std::ostream& out) { write_geomean_csv(geo, out); });
      }
      if (!swn_svg.empty()) {
        // Rendered from the CSV just written, so the figure matches the table.
        std::ifstream in(swn_csv);
        const auto parsed = read_noise_csv(in);
        for (double w1 : swn_w1)
          write_file(swn_svg + weight_suffix(w1), [&](std::ostream& out) { out << render_noise_svg(parsed, w1); });
        if (swn_geomean) {
          std::ifstream gin(swn_csv + ".geomean.csv");
          const auto geo_parsed = read_geomean_csv(gin);
          write_file(swn_svg + "_geomean.svg", [&](std::ostream& out) { out << render_geomean_svg(geo_parsed); });
        }
      }
      return 0;
    }

    if (*sww) {
      WeightSweepSpec spec;
      spec.generator = sww_gen.config();
      spec.p1 = sww_p1;
      spec.p2 = sww_p2;
      spec.w1_values = grid_values(0.0, 1.0, sww_step);
      spec.reps = sww_reps;
      spec.seed_root = sww_seed;
      spec.threads = sww_threads;
      const auto res = run_weight_sweep(spec);
      write_file(sww_csv, [&](std::ostream& out) { write_weight_csv(res, out); });
      std::cerr << "predicted w1*: " << to_string(res.predicted.status);
      if (res.predicted.w1) std::cerr << " at " << *res.predicted.w1;
      std::cerr << '\n';
      if (!sww_svg.empty()) {
        std::ifstream in(sww_csv);
        const auto parsed = read_weight_csv(in);
        write_file(sww_svg, [&](std::ostream& out) { out << render_weight_svg(parsed); });
      }
      return 0;
    }

    if (*sin) {
      const MultilayerGraph g = read_graph(sin_graph);
      const ClusterAssignment truth = read_labels(sin_labels);
      const LayerWeights w(sin_w);
      const int K = truth.num_clusters();
      const std::size_t n = g.num_nodes();
      const Matrix Lw = laplacian(aggregate(g, w));
      const SpectralEmbedding emb = embedding(Lw, K);

      const auto reference = [&](double t) {
        if (!sin_tilde.empty()) return read_graph(sin_tilde);
        if (t > 1.0) throw InvalidArgument("regenerated references need t <= 1");
        RIMParams params{truth.sizes(), extract_signal(g, truth),
                         NoiseSpec::identical_unweighted(std::vector<double>(g.num_layers(), t), K),
                         WeightMode::constant, derive_seed(sin_seed, {seed_coordinate(t)})};
        return generate_rim(params).graph;
      };

      json out;
      double t_used = 0.0;
      if (sin_tmax) {
        if (!sin_tilde.empty()) throw InvalidArgument("--t-max regenerates references; drop --tilde-graph");
        const auto grid = uniform_noise_grid(*sin_tmax, sin_grid);
        const MinimizedBound mb = min_sin_theta_bound(
            Lw, grid, [&](double t) { return laplacian(aggregate(reference(t), w)); }, K);
        t_used = mb.t_at_min;
        out["mode"] = "minimized";
        out["bound"] = mb.bound;
        out["grid_points_evaluated"] = mb.evaluated;
        out["grid_points_skipped"] = mb.skipped;
      } else {
        if (!sin_t) throw InvalidArgument("give --t or --t-max");
        t_used = *sin_t;
        out["mode"] = "fixed";
        out["bound"] = sin_theta_upper_bound(Lw, laplacian(aggregate(reference(t_used), w)), t_used, K, n);
      }
      const SpectralEmbedding ref = embedding(laplacian(aggregate(reference(t_used), w)), K);
      const SubspaceDistance d = principal_angles(emb.Y, ref.Y);
      out["t"] = t_used;
      out["sin_theta_frobenius"] = d.sin_theta_frobenius;
      out["principal_angles"] = std::vector<double>(d.principal_angles.data(), d.principal_angles.data() + d.principal_angles.size());
      print_json(out, sin_out);
      return 0;
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
