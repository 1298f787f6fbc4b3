#include "mlsn/report.hpp"

#include <charconv>
#include <functional>
#include <sstream>

namespace mlsn {

void to_json(nlohmann::json& j, const MetricsReport& r) {
  j = nlohmann::json{
      {"schema_version", r.schema_version},
      {"task", r.task},
      {"feature_set", r.feature_set},
      {"config",
       {{"trees", r.forest.n_trees},
        {"depth", r.forest.max_depth},
        {"min_samples_split", r.forest.min_samples_split},
        {"bootstrap", r.forest.bootstrap},
        {"seed", r.forest.seed},
        {"folds", r.folds},
        {"fold_seed", r.fold_seed}}},
      {"per_fold_auc", r.fold_auc},
      {"mean_auc", r.mean_auc},
      {"dataset", {{"pairs", r.pairs}, {"positives", r.positives}, {"negatives", r.negatives}}},
      {"graph_stats", r.graph_stats},
      {"elapsed_seconds", r.elapsed_seconds},
  };
}

void from_json(const nlohmann::json& j, MetricsReport& r) {
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kReportSchemaVersion) {
    throw InputError("unsupported report schema version " + std::to_string(r.schema_version));
  }
  j.at("task").get_to(r.task);
  j.at("feature_set").get_to(r.feature_set);
  const auto& c = j.at("config");
  c.at("trees").get_to(r.forest.n_trees);
  c.at("depth").get_to(r.forest.max_depth);
  c.at("min_samples_split").get_to(r.forest.min_samples_split);
  c.at("bootstrap").get_to(r.forest.bootstrap);
  c.at("seed").get_to(r.forest.seed);
  c.at("folds").get_to(r.folds);
  c.at("fold_seed").get_to(r.fold_seed);
  j.at("per_fold_auc").get_to(r.fold_auc);
  j.at("mean_auc").get_to(r.mean_auc);
  const auto& d = j.at("dataset");
  d.at("pairs").get_to(r.pairs);
  d.at("positives").get_to(r.positives);
  d.at("negatives").get_to(r.negatives);
  r.graph_stats = j.at("graph_stats");
  j.at("elapsed_seconds").get_to(r.elapsed_seconds);
}

void to_json(nlohmann::json& j, const DatasetStats& s) {
  j = nlohmann::json{{"nodes", s.node_count},
                     {"union_edges", s.union_edge_count},
                     {"multiplex_edges", s.multiplex_edge_count},
                     {"exclusive_edges", s.exclusive_edge_counts},
                     {"mean_global_degree", s.mean_global_degree},
                     {"mean_core_degree", s.mean_core_degree}};
}

namespace {

struct Field {
  const char* name;
  std::function<void(GenConfig&, const std::string&)> set;
  std::function<nlohmann::json(const GenConfig&)> get;
};

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("bad value '" + text + "' for generator setting '" + key + "'");
  }
  return v;
}

template <typename T>
Field field(const char* name, T GenConfig::*member) {
  return {name, [name, member](GenConfig& c, const std::string& v) { c.*member = parse_value<T>(name, v); },
          [member](const GenConfig& c) { return nlohmann::json(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      field("n_users", &GenConfig::n_users),
      field("n_venues", &GenConfig::n_venues),
      field("n_neighbourhoods", &GenConfig::n_neighbourhoods),
      field("city_extent_km", &GenConfig::city_extent_km),
      field("neighbourhood_spread_km", &GenConfig::neighbourhood_spread_km),
      field("base_graph_mean_degree", &GenConfig::base_graph_mean_degree),
      field("circle_size", &GenConfig::circle_size),
      field("circle_link_prob", &GenConfig::circle_link_prob),
      field("weak_tie_locality", &GenConfig::weak_tie_locality),
      field("multiplex_fraction", &GenConfig::multiplex_fraction),
      field("strong_tie_tilt", &GenConfig::strong_tie_tilt),
      field("mention_rate", &GenConfig::mention_rate),
      field("colocation_rate", &GenConfig::colocation_rate),
      field("shared_hashtag_rate", &GenConfig::shared_hashtag_rate),
      field("single_layer_factor", &GenConfig::single_layer_factor),
      field("background_factor", &GenConfig::background_factor),
      field("checkins_per_user", &GenConfig::checkins_per_user),
      field("home_share", &GenConfig::home_share),
      field("hashtag_vocabulary", &GenConfig::hashtag_vocabulary),
      field("hashtag_zipf", &GenConfig::hashtag_zipf),
      field("hashtags_per_user", &GenConfig::hashtags_per_user),
      field("start_time", &GenConfig::start_time),
      field("span_days", &GenConfig::span_days),
      field("origin_lat", &GenConfig::origin_lat),
      field("origin_lon", &GenConfig::origin_lon),
      field("seed", &GenConfig::seed),
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void set_config_value(GenConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.name) {
      f.set(cfg, value);
      return;
    }
  }
  throw InputError("unknown generator setting '" + key + "'");
}

void apply_config_text(GenConfig& cfg, const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(source + ":" + std::to_string(n) + ": expected 'key = value'");
    }
    try {
      set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const InputError& e) {
      throw InputError(source + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

nlohmann::json config_to_json(const GenConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : fields()) j[f.name] = f.get(cfg);
  return j;
}

}  // namespace mlsn
