#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mlsn/graph.hpp"
#include "mlsn/interaction.hpp"

namespace mlsn {

inline constexpr std::size_t kFeatureArity = 4;
using FeatureVector = std::array<double, kFeatureArity>;

enum class FeatureSetKind { Twitter, Foursquare, Multilayer };

// Column names in their fixed order.
const std::array<std::string_view, kFeatureArity>& feature_names(FeatureSetKind kind);
std::string_view to_string(FeatureSetKind kind);
FeatureSetKind parse_feature_set(std::string_view name);

struct PredictionTask {
  enum class Kind { CrossNetwork, Multiplex };
  Kind kind = Kind::Multiplex;
  LayerId feature_layer = 0;
  LayerId target_layer = 0;

  static PredictionTask cross(LayerId feature_layer, LayerId target_layer);
  static PredictionTask multiplex() { return {}; }
};

// "multiplex" or "cross:<feature layer>-><target layer>".
PredictionTask parse_task(std::string_view text, const MultilayerGraph& g);
std::string describe(const PredictionTask& task, const MultilayerGraph& g);

struct CandidatePair {
  NodeId i = 0;  // i < j
  NodeId j = 0;
  int label = 0;  // +1 or -1
};

class SamplingError : public DataShapeError {
 public:
  SamplingError(const std::string& what, double max_ratio)
      : DataShapeError(what), max_ratio_(max_ratio) {}
  double achievable_ratio() const { return max_ratio_; }

 private:
  double max_ratio_;
};

// Cross-network: positives are the target layer's edges, negatives uniform
// non-edges of that layer. Multiplex: positives are linked on every layer,
// negatives on none; pairs linked on some but not all layers never appear.
// Negatives number round(ratio * positives). Deterministic per seed.
std::vector<CandidatePair> sample_pairs(const MultilayerGraph& g, const PredictionTask& task,
                                        double negative_ratio = 1.0, std::uint64_t seed = 0);

// Which layer carries mentions and hashtags and which carries check-ins.
struct LayerRoles {
  LayerId social = 0;
  LayerId location = 1;
};

// Layers named "twitter" and "foursquare" when present, else 0 and 1.
LayerRoles default_roles(const MultilayerGraph& g);

struct FeatureOptions {
  LayerRoles roles;
  std::int64_t colocation_window = kColocationWindowSeconds;
  double similarity_exponent = 2.0;
  double distance_exponent = 1.0;
};

struct LabeledPair {
  std::string i;
  std::string j;
  FeatureVector features{};
  int label = 0;
  bool distance_imputed = false;
};

struct LabeledDataset {
  FeatureSetKind kind = FeatureSetKind::Multilayer;
  std::string task;
  std::vector<LabeledPair> pairs;
  std::uint64_t seed = 0;
  double negative_ratio = 1.0;
  // Median defined pair distance used for users without a mode location.
  double imputed_distance_km = 0.0;
  std::size_t imputed_count = 0;

  std::size_t positives() const;
  std::size_t negatives() const;
};

LabeledDataset assemble(const MultilayerGraph& g, const EventIndex& events,
                        const std::vector<CandidatePair>& pairs, FeatureSetKind kind,
                        const FeatureOptions& options);

}  // namespace mlsn
