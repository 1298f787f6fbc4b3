#include "mlsn/features.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <unordered_set>

#include "mlsn/structural.hpp"

namespace mlsn {

namespace {

constexpr std::array<std::string_view, kFeatureArity> kTwitterNames = {
    "mentions", "hashtags", "overlap_T", "aa_sim_T"};
constexpr std::array<std::string_view, kFeatureArity> kFoursquareNames = {
    "colocs", "dist", "overlap_F", "aa_sim_F"};
constexpr std::array<std::string_view, kFeatureArity> kMultilayerNames = {
    "int_GN", "sim_GN", "overlap_CN", "aa_sim_CN"};

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

const std::array<std::string_view, kFeatureArity>& feature_names(FeatureSetKind kind) {
  switch (kind) {
    case FeatureSetKind::Twitter:
      return kTwitterNames;
    case FeatureSetKind::Foursquare:
      return kFoursquareNames;
    case FeatureSetKind::Multilayer:
      return kMultilayerNames;
  }
  throw InputError("bad feature set");
}

std::string_view to_string(FeatureSetKind kind) {
  switch (kind) {
    case FeatureSetKind::Twitter:
      return "twitter";
    case FeatureSetKind::Foursquare:
      return "foursquare";
    case FeatureSetKind::Multilayer:
      return "multilayer";
  }
  throw InputError("bad feature set");
}

FeatureSetKind parse_feature_set(std::string_view name) {
  if (name == "twitter") return FeatureSetKind::Twitter;
  if (name == "foursquare") return FeatureSetKind::Foursquare;
  if (name == "multilayer") return FeatureSetKind::Multilayer;
  throw InputError("unknown feature set '" + std::string(name) +
                   "' (expected twitter, foursquare or multilayer)");
}

PredictionTask PredictionTask::cross(LayerId feature_layer, LayerId target_layer) {
  if (feature_layer == target_layer) {
    throw InputError("cross-network task needs two distinct layers");
  }
  return {Kind::CrossNetwork, feature_layer, target_layer};
}

PredictionTask parse_task(std::string_view text, const MultilayerGraph& g) {
  if (text == "multiplex") {
    if (g.layer_count() < 2) throw InputError("multiplex task needs at least two layers");
    return PredictionTask::multiplex();
  }
  constexpr std::string_view prefix = "cross:";
  const auto arrow = text.find("->");
  if (text.substr(0, prefix.size()) != prefix || arrow == std::string_view::npos) {
    throw InputError("bad task '" + std::string(text) +
                     "' (expected multiplex or cross:<layer>-><layer>)");
  }
  auto from = text.substr(prefix.size(), arrow - prefix.size());
  auto to = text.substr(arrow + 2);
  return PredictionTask::cross(g.layer_id(from), g.layer_id(to));
}

std::string describe(const PredictionTask& task, const MultilayerGraph& g) {
  if (task.kind == PredictionTask::Kind::Multiplex) return "multiplex";
  return "cross:" + g.layer_name(task.feature_layer) + "->" + g.layer_name(task.target_layer);
}

std::vector<CandidatePair> sample_pairs(const MultilayerGraph& g, const PredictionTask& task,
                                        double negative_ratio, std::uint64_t seed) {
  if (g.node_count() < 2) throw DataShapeError("graph needs at least two nodes");
  if (!(negative_ratio > 0.0) || !std::isfinite(negative_ratio)) {
    throw InputError("negative ratio must be positive");
  }
  const bool multiplex = task.kind == PredictionTask::Kind::Multiplex;
  if (!multiplex && (task.target_layer >= g.layer_count() ||
                     task.feature_layer >= g.layer_count() ||
                     task.feature_layer == task.target_layer)) {
    throw InputError("cross-network task layers invalid");
  }
  if (multiplex && g.layer_count() < 2) {
    throw InputError("multiplex task needs at least two layers");
  }

  std::vector<CandidatePair> out;
  // Pairs that may not be drawn as negatives.
  std::unordered_set<std::uint64_t> excluded;
  if (multiplex) {
    for (LayerId l = 0; l < g.layer_count(); ++l) {
      for (const Edge& e : g.edges(l)) excluded.insert(pair_key(e.a, e.b));
    }
    for (const Edge& e : g.edges(0)) {
      if (g.multiplicity(e.a, e.b) == g.layer_count()) out.push_back({e.a, e.b, +1});
    }
  } else {
    for (const Edge& e : g.edges(task.target_layer)) {
      excluded.insert(pair_key(e.a, e.b));
      out.push_back({e.a, e.b, +1});
    }
  }
  const std::size_t positives = out.size();
  if (positives == 0) throw DataShapeError("task has no positive pairs");

  const std::uint64_t n = g.node_count();
  const std::uint64_t all_pairs = n * (n - 1) / 2;
  const std::uint64_t available = all_pairs - excluded.size();
  const auto wanted = static_cast<std::uint64_t>(
      std::llround(negative_ratio * static_cast<double>(positives)));
  const double max_ratio = static_cast<double>(available) / static_cast<double>(positives);
  if (available == 0) {
    throw SamplingError("no valid negative pairs: every pair is linked", 0.0);
  }
  if (wanted > available) {
    throw SamplingError("negative ratio " + std::to_string(negative_ratio) +
                            " not achievable; maximum is " + std::to_string(max_ratio),
                        max_ratio);
  }

  std::mt19937_64 rng(seed);
  if (wanted * 2 <= available) {
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    std::unordered_set<std::uint64_t> chosen;
    while (chosen.size() < wanted) {
      NodeId a = pick(rng);
      NodeId b = pick(rng);
      if (a == b) continue;
      const std::uint64_t key = pair_key(a, b);
      if (excluded.count(key) || !chosen.insert(key).second) continue;
      out.push_back({std::min(a, b), std::max(a, b), -1});
    }
  } else {
    // Dense case: enumerate every candidate and take a seeded partial shuffle.
    std::vector<CandidatePair> pool;
    pool.reserve(available);
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        if (!excluded.count(pair_key(a, b))) pool.push_back({a, b, -1});
      }
    }
    for (std::uint64_t k = 0; k < wanted; ++k) {
      std::uniform_int_distribution<std::uint64_t> pick(k, pool.size() - 1);
      std::swap(pool[k], pool[pick(rng)]);
      out.push_back(pool[k]);
    }
  }
  return out;
}

LayerRoles default_roles(const MultilayerGraph& g) {
  LayerRoles roles;
  const auto& names = g.layer_names();
  auto find = [&](std::string_view name) -> std::optional<LayerId> {
    for (LayerId l = 0; l < names.size(); ++l) {
      if (names[l] == name) return l;
    }
    return std::nullopt;
  };
  roles.social = find("twitter").value_or(0);
  roles.location = find("foursquare").value_or(roles.social == 1 ? 0 : 1);
  return roles;
}

std::size_t LabeledDataset::positives() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const auto& p) { return p.label > 0; }));
}

std::size_t LabeledDataset::negatives() const { return pairs.size() - positives(); }

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lo + hi) / 2.0;
}

}  // namespace

LabeledDataset assemble(const MultilayerGraph& g, const EventIndex& events,
                        const std::vector<CandidatePair>& pairs, FeatureSetKind kind,
                        const FeatureOptions& options) {
  const LayerRoles& roles = options.roles;
  if (roles.social >= g.layer_count() || roles.location >= g.layer_count()) {
    throw InputError("layer roles out of range");
  }
  for (const auto& p : pairs) {
    if (p.i >= g.node_count() || p.j >= g.node_count()) {
      throw InputError("pair references unknown node id");
    }
    if (p.i == p.j) throw InputError("pair with identical endpoints");
    if (p.label != 1 && p.label != -1) throw InputError("pair label must be +1 or -1");
  }

  const bool needs_distance = kind != FeatureSetKind::Twitter;
  std::vector<std::optional<double>> distance(pairs.size());
  std::vector<double> defined;
  if (needs_distance) {
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      distance[k] = events.pair_distance(g.node_name(pairs[k].i), g.node_name(pairs[k].j));
      if (distance[k]) defined.push_back(*distance[k]);
    }
  }

  LabeledDataset ds;
  ds.kind = kind;
  ds.imputed_distance_km = median(std::move(defined));
  ds.pairs.reserve(pairs.size());

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& p = pairs[k];
    const std::string& a = g.node_name(p.i);
    const std::string& b = g.node_name(p.j);
    LabeledPair out{a, b, {}, p.label, false};
    double dist = 0.0;
    if (needs_distance) {
      out.distance_imputed = !distance[k].has_value();
      dist = distance[k].value_or(ds.imputed_distance_km);
      if (out.distance_imputed) ++ds.imputed_count;
    }
    switch (kind) {
      case FeatureSetKind::Twitter: {
        const Scope s = Scope::single(roles.social);
        out.features = {static_cast<double>(events.mentions(a, b)),
                        static_cast<double>(events.common_hashtags(a, b)),
                        jaccard(g, p.i, p.j, s), adamic_adar(g, p.i, p.j, s)};
        break;
      }
      case FeatureSetKind::Foursquare: {
        const Scope s = Scope::single(roles.location);
        out.features = {events.colocations(a, b, options.colocation_window), dist,
                        jaccard(g, p.i, p.j, s), adamic_adar(g, p.i, p.j, s)};
        break;
      }
      case FeatureSetKind::Multilayer: {
        const std::array<double, 2> per_layer = {
            events.colocations(a, b, options.colocation_window),
            static_cast<double>(events.mentions(a, b))};
        const double sim = similarity_over_distance(
            static_cast<double>(events.common_hashtags(a, b)), dist,
            options.similarity_exponent, options.distance_exponent);
        out.features = {global_interaction(per_layer), sim, jaccard(g, p.i, p.j, Scope::core()),
                        adamic_adar(g, p.i, p.j, Scope::core())};
        break;
      }
    }
    ds.pairs.push_back(std::move(out));
  }
  return ds;
}

}  // namespace mlsn
