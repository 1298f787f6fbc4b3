#include "mlsn/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

namespace mlsn {

void validate(const GenConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InputError(std::string("invalid generator config: ") + what);
  };
  require(cfg.n_users >= 2, "n_users must be at least 2");
  require(cfg.n_venues >= 1, "n_venues must be positive");
  require(cfg.n_neighbourhoods >= 1, "n_neighbourhoods must be positive");
  require(cfg.city_extent_km > 0.0, "city_extent_km must be positive");
  require(cfg.neighbourhood_spread_km >= 0.0, "neighbourhood_spread_km must be non-negative");
  require(cfg.base_graph_mean_degree > 0.0, "base_graph_mean_degree must be positive");
  require(cfg.base_graph_mean_degree < static_cast<double>(cfg.n_users) - 1.0,
          "base_graph_mean_degree must be below n_users - 1");
  require(cfg.circle_size >= 1, "circle_size must be positive");
  require(cfg.circle_link_prob >= 0.0 && cfg.circle_link_prob <= 1.0,
          "circle_link_prob must lie in [0,1]");
  require(cfg.weak_tie_locality >= 0.0 && cfg.weak_tie_locality <= 1.0,
          "weak_tie_locality must lie in [0,1]");
  require(cfg.multiplex_fraction >= 0.0 && cfg.multiplex_fraction <= 1.0,
          "multiplex_fraction must lie in [0,1]");
  require(cfg.strong_tie_tilt >= 1.0, "strong_tie_tilt must be at least 1");
  require(cfg.mention_rate >= 0.0 && cfg.colocation_rate >= 0.0 &&
              cfg.shared_hashtag_rate >= 0.0 && cfg.single_layer_factor >= 0.0 &&
              cfg.background_factor >= 0.0,
          "rates must be non-negative");
  require(cfg.single_layer_factor <= 1.0 && cfg.background_factor <= cfg.single_layer_factor,
          "rates must satisfy multiplex >= single-layer >= background");
  require(cfg.checkins_per_user >= 0.0 && cfg.hashtags_per_user >= 0.0,
          "activity means must be non-negative");
  require(cfg.home_share >= 0.0 && cfg.home_share <= 1.0, "home_share must lie in [0,1]");
  require(cfg.hashtag_vocabulary >= 1, "hashtag_vocabulary must be positive");
  require(cfg.span_days >= 1, "span_days must be positive");
  require(valid_coordinates(cfg.origin_lat, cfg.origin_lon), "origin out of range");
}

LinkClass link_class(const MultilayerGraph& g, NodeId i, NodeId j) {
  const std::size_t m = g.multiplicity(i, j);
  if (m == 0) return LinkClass::Unconnected;
  return m == g.layer_count() ? LinkClass::Multiplex : LinkClass::SingleLayer;
}

namespace {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

std::string padded(char prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
  return buf;
}

int digits(std::size_t n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

class Generator {
 public:
  explicit Generator(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  SyntheticDataset run() {
    place();
    build_social_graph();
    SyntheticDataset out{assign_layers(), {}, {}, {}};
    emit_events(out);
    return out;
  }

 private:
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<int>(mean)(rng_);
  }
  double gauss(double sd) { return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng_) : 0.0; }
  std::int64_t random_time() {
    const std::int64_t span = cfg_.span_days * 86400;
    return cfg_.start_time + std::uniform_int_distribution<std::int64_t>(0, span - 1)(rng_);
  }

  Point jitter(Point c) {
    Point p{c.x + gauss(cfg_.neighbourhood_spread_km), c.y + gauss(cfg_.neighbourhood_spread_km)};
    p.x = std::clamp(p.x, 0.0, cfg_.city_extent_km);
    p.y = std::clamp(p.y, 0.0, cfg_.city_extent_km);
    return p;
  }

  GeoPoint to_geo(Point p) const {
    constexpr double km_per_deg = 111.32;
    const double lat = cfg_.origin_lat + p.y / km_per_deg;
    const double lon =
        cfg_.origin_lon + p.x / (km_per_deg * std::cos(cfg_.origin_lat * std::numbers::pi / 180.0));
    // Round to 1e-6 degrees so coordinates survive a CSV round trip.
    return {std::round(lat * 1e6) / 1e6, std::round(lon * 1e6) / 1e6};
  }

  void place() {
    centres_.resize(cfg_.n_neighbourhoods);
    for (auto& c : centres_) c = {unit() * cfg_.city_extent_km, unit() * cfg_.city_extent_km};
    hood_of_user_.resize(cfg_.n_users);
    members_.assign(cfg_.n_neighbourhoods, {});
    home_.resize(cfg_.n_users);
    for (std::size_t u = 0; u < cfg_.n_users; ++u) {
      hood_of_user_[u] = pick(cfg_.n_neighbourhoods);
      members_[hood_of_user_[u]].push_back(u);
      home_[u] = jitter(centres_[hood_of_user_[u]]);
    }
    venue_pos_.resize(cfg_.n_venues);
    venues_in_hood_.assign(cfg_.n_neighbourhoods, {});
    for (std::size_t v = 0; v < cfg_.n_venues; ++v) {
      const std::size_t h = pick(cfg_.n_neighbourhoods);
      venues_in_hood_[h].push_back(v);
      venue_pos_[v] = jitter(centres_[h]);
    }
    // A few venues act as city-wide hubs.
    std::vector<std::size_t> rank(cfg_.n_venues);
    for (std::size_t v = 0; v < rank.size(); ++v) rank[v] = v;
    std::shuffle(rank.begin(), rank.end(), rng_);
    std::vector<double> weights(cfg_.n_venues);
    for (std::size_t v = 0; v < rank.size(); ++v) weights[v] = 1.0 / static_cast<double>(rank[v] + 1);
    hubs_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());

    home_venue_.resize(cfg_.n_users);
    for (std::size_t u = 0; u < cfg_.n_users; ++u) {
      const auto& local = venues_in_hood_[hood_of_user_[u]];
      double best = std::numeric_limits<double>::infinity();
      auto consider = [&](std::size_t v) {
        const double dx = venue_pos_[v].x - home_[u].x;
        const double dy = venue_pos_[v].y - home_[u].y;
        const double d = dx * dx + dy * dy;
        if (d < best) {
          best = d;
          home_venue_[u] = v;
        }
      };
      if (local.empty()) {
        for (std::size_t v = 0; v < cfg_.n_venues; ++v) consider(v);
      } else {
        for (auto v : local) consider(v);
      }
    }
  }

  bool add_tie(std::size_t a, std::size_t b, bool strong) {
    if (a == b) return false;
    const Edge e(static_cast<NodeId>(a), static_cast<NodeId>(b));
    if (!ties_.insert(e).second) return false;
    (strong ? strong_ : weak_).push_back(e);
    ++degree_[a];
    ++degree_[b];
    return true;
  }

  std::size_t weak_partner(std::size_t u) {
    const auto& local = members_[hood_of_user_[u]];
    if (local.size() > 1 && unit() < cfg_.weak_tie_locality) return local[pick(local.size())];
    return pick(cfg_.n_users);
  }

  void build_social_graph() {
    degree_.assign(cfg_.n_users, 0);
    for (auto& hood : members_) {
      std::vector<std::size_t> order = hood;
      std::shuffle(order.begin(), order.end(), rng_);
      for (std::size_t start = 0; start < order.size(); start += cfg_.circle_size) {
        const std::size_t end = std::min(order.size(), start + cfg_.circle_size);
        for (std::size_t a = start; a < end; ++a) {
          for (std::size_t b = a + 1; b < end; ++b) {
            if (unit() < cfg_.circle_link_prob) add_tie(order[a], order[b], true);
          }
        }
      }
    }
    const auto target = static_cast<std::size_t>(
        std::llround(cfg_.base_graph_mean_degree * static_cast<double>(cfg_.n_users) / 2.0));
    // Everyone gets at least one tie so the node universe survives export.
    for (std::size_t u = 0; u < cfg_.n_users; ++u) {
      while (degree_[u] == 0) add_tie(u, weak_partner(u), false);
    }
    std::size_t attempts = 0;
    const std::size_t max_pairs = cfg_.n_users * (cfg_.n_users - 1) / 2;
    while (ties_.size() < std::min(target, max_pairs)) {
      if (++attempts > 1000 * target + 1000) throw InputError("could not place weak ties");
      const std::size_t u = pick(cfg_.n_users);
      add_tie(u, weak_partner(u), false);
    }
  }

  MultilayerGraph assign_layers() {
    const double mu = cfg_.multiplex_fraction;
    const double total = static_cast<double>(strong_.size() + weak_.size());
    const double ns = static_cast<double>(strong_.size());
    const double nw = static_cast<double>(weak_.size());
    double p_strong = std::min(1.0, cfg_.strong_tie_tilt * mu);
    if (ns > 0.0) p_strong = std::min(p_strong, mu * total / ns);
    double p_weak = nw > 0.0 ? std::clamp((mu * total - ns * p_strong) / nw, 0.0, 1.0) : 0.0;

    GraphBuilder builder({"twitter", "foursquare"});
    const int width = digits(cfg_.n_users - 1);
    for (std::size_t u = 0; u < cfg_.n_users; ++u) builder.add_node(padded('u', u, width));

    std::vector<std::pair<Edge, bool>> all;
    for (const auto& e : strong_) all.emplace_back(e, true);
    for (const auto& e : weak_) all.emplace_back(e, false);
    std::sort(all.begin(), all.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [e, strong] : all) {
      const double p = strong ? p_strong : p_weak;
      if (unit() < p) {
        builder.add_edge(0, e.a, e.b);
        builder.add_edge(1, e.a, e.b);
      } else {
        builder.add_edge(unit() < 0.5 ? 0 : 1, e.a, e.b);
      }
    }
    return std::move(builder).build();
  }

  void checkin(SyntheticDataset& out, std::size_t user, std::size_t venue, std::int64_t t) {
    const GeoPoint g = to_geo(venue_pos_[venue]);
    out.checkins.push_back({out.graph.node_name(static_cast<NodeId>(user)), venue_names_[venue],
                            g.lat, g.lon, t});
  }

  void mention(SyntheticDataset& out, std::size_t a, std::size_t b) {
    if (unit() < 0.5) std::swap(a, b);
    out.mentions.push_back({out.graph.node_name(static_cast<NodeId>(a)),
                            out.graph.node_name(static_cast<NodeId>(b)), random_time()});
  }

  void joint_outing(SyntheticDataset& out, std::size_t a, std::size_t b) {
    const std::size_t host = unit() < 0.5 ? a : b;
    const auto& local = venues_in_hood_[hood_of_user_[host]];
    const std::size_t v = local.empty() ? home_venue_[host] : local[pick(local.size())];
    const std::int64_t t = random_time();
    const std::int64_t lag = std::uniform_int_distribution<std::int64_t>(-2400, 2400)(rng_);
    checkin(out, a, v, t);
    checkin(out, b, v, t + lag);
  }

  void shared_tag(SyntheticDataset& out, std::size_t a, std::size_t b) {
    const std::string& tag = tag_names_[pick(tag_names_.size())];
    out.hashtags.push_back({out.graph.node_name(static_cast<NodeId>(a)), tag, random_time()});
    out.hashtags.push_back({out.graph.node_name(static_cast<NodeId>(b)), tag, random_time()});
  }

  void emit_events(SyntheticDataset& out) {
    const MultilayerGraph& g = out.graph;
    venue_names_.resize(cfg_.n_venues);
    const int vw = digits(cfg_.n_venues - 1);
    for (std::size_t v = 0; v < cfg_.n_venues; ++v) venue_names_[v] = padded('v', v, vw);
    tag_names_.resize(cfg_.hashtag_vocabulary);
    const int tw = digits(cfg_.hashtag_vocabulary - 1);
    for (std::size_t k = 0; k < tag_names_.size(); ++k) tag_names_[k] = padded('t', k, tw);
    std::vector<double> zipf(cfg_.hashtag_vocabulary);
    for (std::size_t k = 0; k < zipf.size(); ++k) {
      zipf[k] = 1.0 / std::pow(static_cast<double>(k + 1), cfg_.hashtag_zipf);
    }
    std::discrete_distribution<std::size_t> popular_tag(zipf.begin(), zipf.end());

    // Individual activity.
    for (std::size_t u = 0; u < cfg_.n_users; ++u) {
      const int n = poisson(cfg_.checkins_per_user);
      const auto& local = venues_in_hood_[hood_of_user_[u]];
      for (int k = 0; k < n; ++k) {
        std::size_t v;
        const double r = unit();
        if (r < cfg_.home_share) {
          v = home_venue_[u];
        } else if (!local.empty() && unit() < 0.7) {
          v = local[pick(local.size())];
        } else {
          v = hubs_(rng_);
        }
        checkin(out, u, v, random_time());
      }
      const int tags = poisson(cfg_.hashtags_per_user);
      for (int k = 0; k < tags; ++k) {
        out.hashtags.push_back({g.node_name(static_cast<NodeId>(u)), tag_names_[popular_tag(rng_)],
                                random_time()});
      }
    }

    // Planted interaction on linked pairs, scaled by link class.
    std::set<Edge> linked;
    for (LayerId l = 0; l < g.layer_count(); ++l) linked.insert(g.edges(l).begin(), g.edges(l).end());
    for (const Edge& e : linked) {
      const double scale =
          link_class(g, e.a, e.b) == LinkClass::Multiplex ? 1.0 : cfg_.single_layer_factor;
      for (int k = poisson(cfg_.mention_rate * scale); k > 0; --k) mention(out, e.a, e.b);
      for (int k = poisson(cfg_.colocation_rate * scale); k > 0; --k) joint_outing(out, e.a, e.b);
      for (int k = poisson(cfg_.shared_hashtag_rate * scale); k > 0; --k) shared_tag(out, e.a, e.b);
    }

    // Background interaction with arbitrary users, proportional to sociability.
    const double reach = cfg_.background_factor * cfg_.base_graph_mean_degree;
    for (std::size_t u = 0; u < cfg_.n_users; ++u) {
      auto other = [&] {
        std::size_t v = pick(cfg_.n_users - 1);
        return v >= u ? v + 1 : v;
      };
      for (int k = poisson(reach * cfg_.mention_rate); k > 0; --k) mention(out, u, other());
      for (int k = poisson(reach * cfg_.colocation_rate); k > 0; --k) joint_outing(out, u, other());
      for (int k = poisson(reach * cfg_.shared_hashtag_rate); k > 0; --k) shared_tag(out, u, other());
    }

    std::sort(out.checkins.begin(), out.checkins.end(), [](const auto& a, const auto& b) {
      return std::tie(a.timestamp, a.user, a.venue) < std::tie(b.timestamp, b.user, b.venue);
    });
    std::sort(out.mentions.begin(), out.mentions.end(), [](const auto& a, const auto& b) {
      return std::tie(a.timestamp, a.source, a.target) < std::tie(b.timestamp, b.source, b.target);
    });
    std::sort(out.hashtags.begin(), out.hashtags.end(), [](const auto& a, const auto& b) {
      return std::tie(a.timestamp, a.user, a.tag) < std::tie(b.timestamp, b.user, b.tag);
    });
  }

  const GenConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<Point> centres_;
  std::vector<std::size_t> hood_of_user_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<Point> home_;
  std::vector<Point> venue_pos_;
  std::vector<std::vector<std::size_t>> venues_in_hood_;
  std::vector<std::size_t> home_venue_;
  std::discrete_distribution<std::size_t> hubs_;
  std::set<Edge> ties_;
  std::vector<Edge> strong_;
  std::vector<Edge> weak_;
  std::vector<std::size_t> degree_;
  std::vector<std::string> venue_names_;
  std::vector<std::string> tag_names_;
};

}  // namespace

SyntheticDataset generate(const GenConfig& cfg) {
  validate(cfg);
  return Generator(cfg).run();
}

}  // namespace mlsn
