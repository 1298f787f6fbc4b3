#include "mlsn/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlsn/evaluation.hpp"
#include "mlsn/features.hpp"
#include "mlsn/io.hpp"
#include "mlsn/report.hpp"
#include "mlsn/synthgen.hpp"

namespace mlsn {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct GraphFlags {
  std::string edges;
  std::string layers = "twitter,foursquare";
  std::vector<std::string> reciprocal;

  void attach(CLI::App& cmd) {
    cmd.add_option("--edges", edges, "Edge file (layer,src,dst)")->required();
    cmd.add_option("--layers", layers, "Comma-separated layer names, in layer-id order")
        ->capture_default_str();
    cmd.add_option("--reciprocal", reciprocal,
                   "Layer whose rows are directed follows; keep mutual pairs only");
  }

  MultilayerGraph load(std::ostream& err) const {
    EdgeFileOptions opts;
    opts.layers = split_list(layers);
    opts.reciprocal = {reciprocal.begin(), reciprocal.end()};
    EdgeFileReport rep;
    MultilayerGraph g = read_edge_file(edges, opts, &rep);
    if (rep.self_loops) err << "warning: " << rep.self_loops << " self-loops dropped\n";
    if (rep.duplicates) err << "warning: " << rep.duplicates << " duplicate edges dropped\n";
    if (rep.one_way_dropped) {
      err << "warning: " << rep.one_way_dropped << " one-way follows dropped\n";
    }
    return g;
  }
};

json stats_json(const MultilayerGraph& g) {
  const DatasetStats s = dataset_stats(g);
  json j = s;
  j["layers"] = g.layer_names();
  return j;
}

void print_stats(std::ostream& out, const MultilayerGraph& g) {
  const DatasetStats s = dataset_stats(g);
  out << fmt::format("{:<24}{}\n", "nodes", s.node_count);
  out << fmt::format("{:<24}{}\n", "multiplex edges", s.multiplex_edge_count);
  for (std::size_t l = 0; l < s.exclusive_edge_counts.size(); ++l) {
    out << fmt::format("{:<24}{}\n", g.layer_name(static_cast<LayerId>(l)) + " only edges",
                       s.exclusive_edge_counts[l]);
  }
  out << fmt::format("{:<24}{}\n", "union edges", s.union_edge_count);
  out << fmt::format("{:<24}{:.2f}\n", "mean global degree", s.mean_global_degree);
  out << fmt::format("{:<24}{:.2f}\n", "mean core degree", s.mean_core_degree);
}

int cmd_stats(const GraphFlags& gf, bool as_json, std::ostream& out, std::ostream& err) {
  const MultilayerGraph g = gf.load(err);
  if (as_json) {
    out << stats_json(g).dump(2) << '\n';
  } else {
    print_stats(out, g);
  }
  return kExitOk;
}

struct FeatureFlags {
  std::string checkins;
  std::string interactions;
  std::string set = "multilayer";
  std::string task = "multiplex";
  double neg_ratio = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::int64_t window = kColocationWindowSeconds;
  double sim_exponent = 2.0;
  double dist_exponent = 1.0;
};

int cmd_features(const GraphFlags& gf, const FeatureFlags& ff, std::ostream& out,
                 std::ostream& err) {
  const FeatureSetKind kind = parse_feature_set(ff.set);
  const MultilayerGraph g = gf.load(err);
  const PredictionTask task = parse_task(ff.task, g);
  const auto checkins = read_checkin_file(ff.checkins);
  const auto inter = read_interaction_file(ff.interactions);
  const EventIndex events(checkins, inter.mentions, inter.hashtags);
  if (events.report().self_mentions_dropped) {
    err << "warning: " << events.report().self_mentions_dropped << " self-mentions dropped\n";
  }

  FeatureOptions opts;
  opts.roles = default_roles(g);
  opts.colocation_window = ff.window;
  opts.similarity_exponent = ff.sim_exponent;
  opts.distance_exponent = ff.dist_exponent;

  const auto pairs = sample_pairs(g, task, ff.neg_ratio, ff.seed);
  LabeledDataset ds = assemble(g, events, pairs, kind, opts);
  ds.task = describe(task, g);
  ds.seed = ff.seed;
  ds.negative_ratio = ff.neg_ratio;

  {
    auto f = open_out(ff.out);
    write_features(f, ds);
    if (!f) throw InputError("failed writing '" + ff.out + "'");
  }
  json meta = {
      {"schema_version", kReportSchemaVersion},
      {"task", ds.task},
      {"feature_set", std::string(to_string(kind))},
      {"columns", feature_names(kind)},
      {"seed", ff.seed},
      {"negative_ratio", ff.neg_ratio},
      {"pairs", ds.pairs.size()},
      {"positives", ds.positives()},
      {"negatives", ds.negatives()},
      {"imputed_distance_km", ds.imputed_distance_km},
      {"distance_imputed_pairs", ds.imputed_count},
      {"colocation_window_seconds", ff.window},
      {"similarity_exponent", ff.sim_exponent},
      {"distance_exponent", ff.dist_exponent},
      {"graph", stats_json(g)},
  };
  {
    auto f = open_out(ff.out + ".meta.json");
    f << meta.dump(2) << '\n';
  }
  out << fmt::format("wrote {} pairs ({} positive, {} negative) to {}\n", ds.pairs.size(),
                     ds.positives(), ds.negatives(), ff.out);
  return kExitOk;
}

struct EvalFlags {
  std::string features;
  std::size_t trees = 45;
  std::size_t depth = 25;
  std::size_t folds = 10;
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string roc_out;
  std::string report_out;
  std::string model_out;
  bool roc_per_fold = false;
};

int cmd_evaluate(const EvalFlags& ef, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const LabeledDataset ds = read_feature_file(ef.features);
  const Samples samples = to_samples(ds);

  ForestConfig cfg;
  cfg.n_trees = ef.trees;
  cfg.max_depth = ef.depth;
  cfg.min_samples_split = ef.min_samples_split;
  cfg.seed = ef.seed;
  cfg.threads = ef.threads;
  const CvReport cv = cross_validate(samples, cfg, ef.folds, ef.seed);

  MetricsReport report;
  report.feature_set = std::string(to_string(ds.kind));
  report.forest = cfg;
  report.forest.threads = 0;
  report.folds = ef.folds;
  report.fold_seed = ef.seed;
  report.fold_auc = cv.fold_auc;
  report.mean_auc = cv.mean_auc;
  report.pairs = ds.pairs.size();
  report.positives = ds.positives();
  report.negatives = ds.negatives();
  const std::string meta_path = ef.features + ".meta.json";
  if (fs::exists(meta_path)) {
    const json meta = json::parse(read_text(meta_path));
    report.task = meta.value("task", "");
    report.graph_stats = meta.value("graph", json::object());
  }

  if (!ef.roc_out.empty()) {
    auto f = open_out(ef.roc_out);
    write_roc(f, cv.averaged);
    if (ef.roc_per_fold) {
      const fs::path base(ef.roc_out);
      for (std::size_t k = 0; k < cv.folds.size(); ++k) {
        fs::path p = base;
        p.replace_filename(base.stem().string() + ".fold" + std::to_string(k) +
                           base.extension().string());
        auto pf = open_out(p.string());
        write_roc(pf, cv.folds[k]);
      }
    }
  }
  if (!ef.model_out.empty()) {
    RandomForest::train(samples, cfg).save(ef.model_out);
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!ef.report_out.empty()) {
    auto f = open_out(ef.report_out);
    f << json(report).dump(2) << '\n';
  }
  for (std::size_t k = 0; k < cv.fold_auc.size(); ++k) {
    out << fmt::format("fold {:>2}  AUC {:.4f}\n", k, cv.fold_auc[k]);
  }
  out << fmt::format("mean AUC {:.4f}\n", cv.mean_auc);
  return kExitOk;
}

struct GenerateFlags {
  std::string out_dir;
  std::string config_file;
  std::vector<std::string> settings;
};

int cmd_generate(const GenerateFlags& gf, std::ostream& out) {
  GenConfig cfg;
  if (!gf.config_file.empty()) apply_config_text(cfg, read_text(gf.config_file), gf.config_file);
  for (const auto& kv : gf.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  validate(cfg);

  std::error_code ec;
  fs::create_directories(gf.out_dir, ec);
  if (ec || !fs::is_directory(gf.out_dir)) {
    throw InputError("cannot create output directory '" + gf.out_dir + "'");
  }
  const SyntheticDataset data = generate(cfg);

  const fs::path dir(gf.out_dir);
  const std::string edges = (dir / "edges.csv").string();
  const std::string checkins = (dir / "checkins.csv").string();
  const std::string interactions = (dir / "interactions.csv").string();
  {
    auto f = open_out(edges);
    write_edges(f, data.graph);
  }
  {
    auto f = open_out(checkins);
    write_checkins(f, data.checkins);
  }
  {
    auto f = open_out(interactions);
    write_interactions(f, data.mentions, data.hashtags);
  }
  json manifest = {
      {"schema_version", kReportSchemaVersion},
      {"seed", cfg.seed},
      {"config", config_to_json(cfg)},
      {"layers", data.graph.layer_names()},
      {"files",
       {{"edges", {{"path", "edges.csv"}, {"fnv1a64", file_digest(edges)}}},
        {"checkins", {{"path", "checkins.csv"}, {"fnv1a64", file_digest(checkins)}}},
        {"interactions", {{"path", "interactions.csv"}, {"fnv1a64", file_digest(interactions)}}}}},
      {"counts",
       {{"nodes", data.graph.node_count()},
        {"checkins", data.checkins.size()},
        {"mentions", data.mentions.size()},
        {"hashtags", data.hashtags.size()}}},
  };
  {
    auto f = open_out((dir / "manifest.json").string());
    f << manifest.dump(2) << '\n';
  }
  out << fmt::format("wrote synthetic dataset (seed {}) to {}\n", cfg.seed, gf.out_dir);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilayer geo-social link prediction"};
  app.name(args.empty() ? "mlsn" : args.front());
  app.require_subcommand(1);

  GraphFlags stats_graph;
  bool stats_json_flag = false;
  auto* stats = app.add_subcommand("stats", "Edge-set counts and multilayer degree averages");
  stats_graph.attach(*stats);
  stats->add_flag("--json", stats_json_flag, "Print JSON instead of a table");

  GraphFlags feat_graph;
  FeatureFlags ff;
  auto* features = app.add_subcommand("features", "Sample pairs and write a feature matrix");
  feat_graph.attach(*features);
  features->add_option("--checkins", ff.checkins, "Check-in file")->required();
  features->add_option("--interactions", ff.interactions, "Interaction file")->required();
  features->add_option("--set", ff.set, "twitter | foursquare | multilayer")->capture_default_str();
  features->add_option("--task", ff.task, "multiplex | cross:<layer>-><layer>")
      ->capture_default_str();
  features->add_option("--neg-ratio", ff.neg_ratio, "Negatives per positive")->capture_default_str();
  features->add_option("--seed", ff.seed, "Sampling seed")->capture_default_str();
  features->add_option("--out", ff.out, "Output CSV")->required();
  features->add_option("--window", ff.window, "Colocation window in seconds")->capture_default_str();
  features->add_option("--sim-exponent", ff.sim_exponent)->capture_default_str();
  features->add_option("--dist-exponent", ff.dist_exponent)->capture_default_str();

  EvalFlags ef;
  auto* evaluate = app.add_subcommand("evaluate", "Random-forest cross-validation with ROC/AUC");
  evaluate->add_option("--features", ef.features, "Feature CSV")->required();
  evaluate->add_option("--trees", ef.trees)->capture_default_str();
  evaluate->add_option("--depth", ef.depth)->capture_default_str();
  evaluate->add_option("--folds", ef.folds)->capture_default_str();
  evaluate->add_option("--min-samples-split", ef.min_samples_split)->capture_default_str();
  evaluate->add_option("--seed", ef.seed)->capture_default_str();
  evaluate->add_option("--threads", ef.threads, "0 = all cores")->capture_default_str();
  evaluate->add_option("--roc-out", ef.roc_out, "Averaged ROC CSV");
  evaluate->add_option("--report-out", ef.report_out, "Metrics report JSON");
  evaluate->add_option("--model-out", ef.model_out, "Save a forest trained on all pairs");
  evaluate->add_flag("--roc-per-fold", ef.roc_per_fold, "Also write one ROC CSV per fold");

  GenerateFlags gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic dataset");
  generate_cmd->add_option("--out-dir", gen.out_dir)->required();
  generate_cmd->add_option("--config", gen.config_file, "key = value settings file");
  generate_cmd->add_option("--set", gen.settings, "Override one setting, key=value");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("mlsn");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[usage] " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*stats) return cmd_stats(stats_graph, stats_json_flag, out, err);
    if (*features) return cmd_features(feat_graph, ff, out, err);
    if (*evaluate) return cmd_evaluate(ef, out);
    if (*generate_cmd) return cmd_generate(gen, out);
  } catch (const DataShapeError& e) {
    err << "error[data-shape] " << e.what() << '\n';
    return kExitDataShape;
  } catch (const InputError& e) {
    err << "error[input] " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error[input] " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error[internal] " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace mlsn
