#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "mlsn/features.hpp"
#include "mlsn/structural.hpp"

using namespace mlsn;

namespace {

constexpr std::int64_t T0 = 1335830400;

std::set<std::pair<NodeId, NodeId>> as_set(const std::vector<CandidatePair>& pairs, int label) {
  std::set<std::pair<NodeId, NodeId>> out;
  for (const auto& p : pairs) {
    if (p.label == label) out.insert({p.i, p.j});
  }
  return out;
}

// Six users on two layers with events for every feature.
struct SmallWorld {
  MultilayerGraph g = build_graph(
      {"twitter", "foursquare"}, {"a", "b", "c", "d", "e", "f"},
      {{0, "a", "b"}, {0, "a", "c"}, {0, "b", "c"}, {0, "c", "d"}, {0, "d", "e"}, {0, "e", "f"},
       {1, "a", "b"}, {1, "a", "c"}, {1, "b", "c"}, {1, "b", "d"}, {1, "d", "f"}, {1, "c", "e"}});
  std::vector<CheckinRecord> checkins = {
      {"a", "v1", 40.70, -74.00, T0},        {"a", "v1", 40.70, -74.00, T0 + 90000},
      {"a", "v2", 40.75, -73.98, T0 + 200},  {"b", "v1", 40.70, -74.00, T0 + 600},
      {"b", "v3", 40.80, -73.95, T0 + 10},   {"b", "v3", 40.80, -73.95, T0 + 20},
      {"b", "v3", 40.80, -73.95, T0 + 30},   {"c", "v2", 40.75, -73.98, T0 + 900},
      {"c", "v2", 40.75, -73.98, T0 + 1000}, {"c", "v2", 40.75, -73.98, T0 + 1100},
      {"d", "v1", 40.70, -74.00, T0 + 90500}};
  std::vector<MentionRecord> mentions = {{"a", "b", T0}, {"b", "a", T0}, {"c", "a", T0},
                                         {"d", "e", T0}};
  std::vector<HashtagRecord> hashtags = {{"a", "x", T0}, {"a", "y", T0}, {"b", "x", T0},
                                         {"b", "y", T0}, {"c", "y", T0}, {"e", "z", T0}};
  EventIndex ev{checkins, mentions, hashtags};
};

}  // namespace

TEST_CASE("feature names and order") {
  using A = std::array<std::string_view, 4>;
  CHECK(feature_names(FeatureSetKind::Twitter) == A{"mentions", "hashtags", "overlap_T", "aa_sim_T"});
  CHECK(feature_names(FeatureSetKind::Foursquare) == A{"colocs", "dist", "overlap_F", "aa_sim_F"});
  CHECK(feature_names(FeatureSetKind::Multilayer) ==
        A{"int_GN", "sim_GN", "overlap_CN", "aa_sim_CN"});
  CHECK(parse_feature_set("foursquare") == FeatureSetKind::Foursquare);
  CHECK_THROWS_AS(parse_feature_set("facebook"), InputError);
}

TEST_CASE("task parsing") {
  auto g = build_graph({"twitter", "foursquare"}, {}, {{0, "a", "b"}});
  auto t = parse_task("cross:twitter->foursquare", g);
  CHECK(t.kind == PredictionTask::Kind::CrossNetwork);
  CHECK(t.feature_layer == 0);
  CHECK(t.target_layer == 1);
  CHECK(describe(t, g) == "cross:twitter->foursquare");
  CHECK(parse_task("multiplex", g).kind == PredictionTask::Kind::Multiplex);
  CHECK_THROWS_AS(parse_task("cross:twitter->twitter", g), InputError);
  CHECK_THROWS_AS(parse_task("cross:twitter", g), InputError);
  CHECK_THROWS_AS(parse_task("cross:twitter->myspace", g), InputError);
  CHECK_THROWS_AS(PredictionTask::cross(1, 1), InputError);
}

TEST_CASE("cross-network sampling on a small graph") {
  std::vector<LayerEdgeRecord> edges = {{0, "n0", "n1"}, {0, "n2", "n3"}};
  for (int k = 0; k < 5; ++k) edges.push_back({1, testing::node(k), testing::node(k + 5)});
  std::vector<std::string> nodes;
  for (int k = 0; k < 10; ++k) nodes.push_back(testing::node(k));
  auto g = build_graph({"twitter", "foursquare"}, nodes, edges);
  auto pairs = sample_pairs(g, PredictionTask::cross(0, 1), 1.0, 7);
  const auto pos = as_set(pairs, 1), neg = as_set(pairs, -1);
  CHECK(pos.size() == 5);
  CHECK(neg.size() == 5);
  for (auto [i, j] : neg) {
    CHECK(i < j);
    CHECK_FALSE(g.has_edge(1, i, j));
  }
  for (auto [i, j] : pos) CHECK(g.has_edge(1, i, j));
  CHECK(as_set(sample_pairs(g, PredictionTask::cross(0, 1), 3.0, 7), -1).size() == 15);
}

TEST_CASE("sampling is deterministic per seed") {
  std::mt19937_64 rng(1);
  const auto g = testing::to_graph(testing::random_raw(rng, 60, 2, 0.08));
  auto a = sample_pairs(g, PredictionTask::multiplex(), 1.0, 42);
  auto b = sample_pairs(g, PredictionTask::multiplex(), 1.0, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].i == b[k].i);
    CHECK(a[k].j == b[k].j);
    CHECK(a[k].label == b[k].label);
  }
}

TEST_CASE("multiplex sampling excludes single-layer pairs") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    const auto raw = testing::random_raw(rng, 20 + rep % 20, 2, 0.15);
    const auto g = testing::to_graph(raw);
    std::size_t both = 0;
    for (auto e : raw.layers[0]) both += raw.layers[1].count(e);
    if (both == 0) continue;
    const double ratio = 0.5 + (rep % 4) * 0.5;
    const auto pairs = sample_pairs(g, PredictionTask::multiplex(), ratio, rep);
    const auto pos = as_set(pairs, 1), neg = as_set(pairs, -1);
    REQUIRE(pos.size() == both);
    REQUIRE(neg.size() == static_cast<std::size_t>(std::llround(ratio * both)));
    REQUIRE(pos.size() + neg.size() == pairs.size());
    for (auto [i, j] : pos) REQUIRE((raw.linked(0, i, j) && raw.linked(1, i, j)));
    for (auto [i, j] : neg) REQUIRE((!raw.linked(0, i, j) && !raw.linked(1, i, j)));
  }
}

TEST_CASE("dense graphs reject unachievable ratios") {
  std::vector<LayerEdgeRecord> edges;
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) {
      edges.push_back({0, testing::node(a), testing::node(b)});
      if ((a + b) % 2) edges.push_back({1, testing::node(a), testing::node(b)});
    }
  }
  auto full = build_graph({"t", "f"}, {}, edges);
  CHECK_THROWS_AS(sample_pairs(full, PredictionTask::multiplex()), SamplingError);

  // Layer 1 has 6 edges out of 10 pairs: 4 negatives available.
  try {
    sample_pairs(full, PredictionTask::cross(0, 1), 1.0);
    FAIL("expected rejection");
  } catch (const SamplingError& e) {
    CHECK(e.achievable_ratio() == doctest::Approx(4.0 / 6.0));
  }
  CHECK(sample_pairs(full, PredictionTask::cross(0, 1), 4.0 / 6.0).size() == 10);
}

TEST_CASE("assembled features equal direct calls") {
  SmallWorld w;
  const auto& g = w.g;
  std::vector<CandidatePair> pairs;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    for (NodeId j = i + 1; j < g.node_count(); ++j) {
      pairs.push_back({i, j, g.multiplicity(i, j) == 2 ? 1 : -1});
    }
  }
  FeatureOptions opt;
  opt.roles = default_roles(g);
  const auto tw = assemble(g, w.ev, pairs, FeatureSetKind::Twitter, opt);
  const auto fs = assemble(g, w.ev, pairs, FeatureSetKind::Foursquare, opt);
  const auto ml = assemble(g, w.ev, pairs, FeatureSetKind::Multilayer, opt);

  // Only a, b, c have a mode location; median of their three distances.
  std::vector<double> defined = {*w.ev.pair_distance("a", "b"), *w.ev.pair_distance("a", "c"),
                                 *w.ev.pair_distance("b", "c")};
  std::sort(defined.begin(), defined.end());
  CHECK(fs.imputed_distance_km == defined[1]);
  CHECK(tw.imputed_count == 0);

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const NodeId i = pairs[k].i, j = pairs[k].j;
    const std::string a = g.node_name(i), b = g.node_name(j);
    const auto d = w.ev.pair_distance(a, b);
    const double dist = d.value_or(fs.imputed_distance_km);
    CHECK(tw.pairs[k].features ==
          FeatureVector{double(w.ev.mentions(a, b)), double(w.ev.common_hashtags(a, b)),
                        jaccard(g, i, j, Scope::single(0)), adamic_adar(g, i, j, Scope::single(0))});
    CHECK(fs.pairs[k].features == FeatureVector{w.ev.colocations(a, b), dist,
                                                jaccard(g, i, j, Scope::single(1)),
                                                adamic_adar(g, i, j, Scope::single(1))});
    CHECK(fs.pairs[k].distance_imputed == !d.has_value());
    CHECK(ml.pairs[k].features ==
          FeatureVector{w.ev.colocations(a, b) + double(w.ev.mentions(a, b)),
                        similarity_over_distance(double(w.ev.common_hashtags(a, b)), dist),
                        jaccard(g, i, j, Scope::core()), adamic_adar(g, i, j, Scope::core())});
    CHECK(tw.pairs[k].label == pairs[k].label);
    CHECK(tw.pairs[k].i == a);
  }
  // a-b: one weighted colocation at v1 plus two mentions.
  const auto& ab = ml.pairs[0];
  CHECK(ab.i == "a");
  CHECK(ab.j == "b");
  CHECK(ab.features[0] == doctest::Approx(2.0 + 1.0 / std::log(5.0)));
}

TEST_CASE("pair without events or neighbours assembles to zeros") {
  auto g = build_graph({"twitter", "foursquare"}, {"p", "q", "r", "s"},
                       {{0, "r", "s"}, {1, "r", "s"}});
  std::vector<CheckinRecord> c = {{"r", "v", 1, 2, T0}, {"r", "v", 1, 2, T0}, {"r", "v", 1, 2, T0},
                                  {"s", "w", 1, 3, T0}, {"s", "w", 1, 3, T0}, {"s", "w", 1, 3, T0}};
  EventIndex ev(c, {}, {});
  const std::vector<CandidatePair> pairs = {{0, 1, -1}, {2, 3, 1}};
  auto ds = assemble(g, ev, pairs, FeatureSetKind::Foursquare, {});
  CHECK(ds.imputed_count == 1);
  CHECK(ds.pairs[0].distance_imputed);
  CHECK(ds.pairs[0].features[1] == ds.imputed_distance_km);
  CHECK(ds.imputed_distance_km == doctest::Approx(haversine_km({1, 2}, {1, 3})));
  CHECK(ds.pairs[0].features[0] == 0.0);
  CHECK(ds.pairs[0].features[2] == 0.0);
  CHECK(ds.pairs[0].features[3] == 0.0);

  auto tw = assemble(g, ev, pairs, FeatureSetKind::Twitter, {});
  CHECK(tw.pairs[0].features == FeatureVector{0, 0, 0, 0});

  // With no defined distance at all the imputed value is zero.
  auto bare = assemble(g, EventIndex{}, pairs, FeatureSetKind::Multilayer, {});
  CHECK(bare.imputed_distance_km == 0.0);
  CHECK(bare.pairs[0].features == FeatureVector{0, 0, 0, 0});
}

TEST_CASE("identical core neighbourhoods put 1.0 in the third column") {
  auto g = build_graph({"twitter", "foursquare"}, {},
                       {{0, "i", "x"}, {0, "j", "x"}, {1, "i", "x"}, {1, "j", "x"},
                        {0, "i", "y"}, {0, "j", "y"}, {1, "i", "y"}, {1, "j", "y"}, {0, "i", "q"}});
  const std::vector<CandidatePair> pairs = {{g.node_id("i"), g.node_id("j"), -1}};
  auto ds = assemble(g, EventIndex{}, pairs, FeatureSetKind::Multilayer, {});
  CHECK(ds.pairs[0].features[2] == 1.0);
}

TEST_CASE("assemble rejects unknown nodes") {
  auto g = build_graph({"twitter", "foursquare"}, {"a", "b"}, {});
  CHECK_THROWS_AS(assemble(g, EventIndex{}, {{0, 9, 1}}, FeatureSetKind::Twitter, {}), InputError);
}

TEST_CASE("assembled features are symmetric and deterministic") {
  SmallWorld w;
  std::vector<CandidatePair> fwd, rev;
  for (NodeId i = 0; i < w.g.node_count(); ++i) {
    for (NodeId j = i + 1; j < w.g.node_count(); ++j) {
      fwd.push_back({i, j, 1});
      rev.push_back({j, i, 1});
    }
  }
  for (auto kind : {FeatureSetKind::Twitter, FeatureSetKind::Foursquare, FeatureSetKind::Multilayer}) {
    const auto a = assemble(w.g, w.ev, fwd, kind, {});
    const auto b = assemble(w.g, w.ev, rev, kind, {});
    const auto c = assemble(w.g, w.ev, fwd, kind, {});
    for (std::size_t k = 0; k < fwd.size(); ++k) {
      CHECK(a.pairs[k].features == b.pairs[k].features);
      CHECK(a.pairs[k].features == c.pairs[k].features);
    }
  }
}

TEST_CASE("layer roles") {
  auto named = build_graph({"foursquare", "twitter"}, {}, {});
  CHECK(default_roles(named).social == 1);
  CHECK(default_roles(named).location == 0);
  auto other = build_graph({"x", "y", "z"}, {}, {});
  CHECK(default_roles(other).social == 0);
  CHECK(default_roles(other).location == 1);
}
