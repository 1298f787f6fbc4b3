#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mlsn/forest.hpp"
#include "mlsn/graph.hpp"
#include "mlsn/synthgen.hpp"

namespace mlsn {

inline constexpr int kReportSchemaVersion = 1;

struct MetricsReport {
  int schema_version = kReportSchemaVersion;
  std::string task;
  std::string feature_set;
  ForestConfig forest;
  std::size_t folds = 10;
  std::uint64_t fold_seed = 0;
  std::vector<double> fold_auc;
  double mean_auc = 0.0;
  std::size_t pairs = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  // Graph statistics copied from the feature sidecar when one exists.
  nlohmann::json graph_stats = nlohmann::json::object();
  double elapsed_seconds = 0.0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

void to_json(nlohmann::json& j, const MetricsReport& r);
void from_json(const nlohmann::json& j, MetricsReport& r);

void to_json(nlohmann::json& j, const DatasetStats& s);

// Generator settings as "key = value" text; '#' starts a comment.
void apply_config_text(GenConfig& cfg, const std::string& text, const std::string& source);
void set_config_value(GenConfig& cfg, const std::string& key, const std::string& value);
nlohmann::json config_to_json(const GenConfig& cfg);

}  // namespace mlsn
