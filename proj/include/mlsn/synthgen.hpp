#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlsn/graph.hpp"
#include "mlsn/interaction.hpp"

namespace mlsn {

// Parameters of the synthetic city. Users live in neighbourhoods scattered
// over a square city; the social graph is made of small friend circles (strong
// ties) plus weak ties. Strong ties are promoted to multiplex more often, and
// event rates scale with the planted link class.
struct GenConfig {
  std::size_t n_users = 2000;
  std::size_t n_venues = 1500;
  std::size_t n_neighbourhoods = 40;
  double city_extent_km = 30.0;
  double neighbourhood_spread_km = 1.5;
  // 2E/V of the base (union) graph.
  double base_graph_mean_degree = 6.0;
  std::size_t circle_size = 6;
  double circle_link_prob = 0.5;
  // Share of weak ties that stay inside the neighbourhood.
  double weak_tie_locality = 0.7;

  double multiplex_fraction = 0.4;
  // How much more likely a circle tie is to be multiplex than average.
  double strong_tie_tilt = 1.5;

  // Poisson means per multiplex pair; other classes are scaled below.
  double mention_rate = 1.0;
  double colocation_rate = 1.0;
  double shared_hashtag_rate = 1.5;
  double single_layer_factor = 0.3;
  double background_factor = 0.05;

  double checkins_per_user = 20.0;
  double home_share = 0.4;
  std::size_t hashtag_vocabulary = 500;
  double hashtag_zipf = 1.1;
  double hashtags_per_user = 15.0;

  std::int64_t start_time = 1335830400;  // 2012-05-01 UTC
  std::int64_t span_days = 150;
  double origin_lat = 40.70;
  double origin_lon = -74.00;

  std::uint64_t seed = 1;
};

// Throws InputError when the configuration cannot be realized.
void validate(const GenConfig& cfg);

enum class LinkClass { Multiplex, SingleLayer, Unconnected };

struct SyntheticDataset {
  MultilayerGraph graph;
  std::vector<CheckinRecord> checkins;
  std::vector<MentionRecord> mentions;
  std::vector<HashtagRecord> hashtags;
};

// Layers are "twitter" (0) and "foursquare" (1). Fully deterministic per seed.
SyntheticDataset generate(const GenConfig& cfg);

LinkClass link_class(const MultilayerGraph& g, NodeId i, NodeId j);

}  // namespace mlsn
