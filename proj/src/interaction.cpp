#include "mlsn/interaction.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>

namespace mlsn {

double haversine_km(GeoPoint a, GeoPoint b) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * rad;
  const double dlon = (b.lon - a.lon) * rad;
  const double s = std::sin(dlat / 2.0);
  const double t = std::sin(dlon / 2.0);
  double h = s * s + std::cos(a.lat * rad) * std::cos(b.lat * rad) * t * t;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double similarity_over_distance(double sim, double dist_km, double a, double b) {
  if (sim < 0.0 || dist_km < 0.0 || a < 0.0 || b < 0.0 || std::isnan(sim) ||
      std::isnan(dist_km)) {
    throw EventError("similarity_over_distance: inputs must be non-negative");
  }
  if (sim == 0.0) return 0.0;
  return std::pow(sim, a) / std::pow(std::max(dist_km, kDistanceFloorKm), b);
}

double global_interaction(std::span<const double> per_layer) {
  double total = 0.0;
  for (double v : per_layer) total += v;
  return total;
}

std::string normalize_hashtag(std::string_view tag) {
  if (!tag.empty() && tag.front() == '#') tag.remove_prefix(1);
  std::string out(tag);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool valid_coordinates(double lat, double lon) {
  return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

std::uint32_t EventIndex::intern_user(std::string_view name) {
  if (name.empty()) throw EventError("empty user id");
  auto [it, inserted] =
      users_.try_emplace(std::string(name), static_cast<std::uint32_t>(users_.size()));
  if (inserted) {
    tags_.emplace_back();
    visits_.emplace_back();
  }
  return it->second;
}

std::optional<std::uint32_t> EventIndex::user_key(std::string_view name) const {
  auto it = users_.find(std::string(name));
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

EventIndex::EventIndex(std::span<const CheckinRecord> checkins,
                       std::span<const MentionRecord> mentions,
                       std::span<const HashtagRecord> hashtags) {
  // Venue keys follow lexicographic order of venue ids.
  std::map<std::string_view, GeoPoint> venue_coords;
  for (const auto& c : checkins) {
    if (c.venue.empty()) throw EventError("empty venue id");
    if (!valid_coordinates(c.lat, c.lon)) {
      throw EventError("coordinates out of range for venue '" + c.venue + "'");
    }
    auto [it, inserted] = venue_coords.try_emplace(c.venue, GeoPoint{c.lat, c.lon});
    if (!inserted && !(it->second == GeoPoint{c.lat, c.lon})) {
      throw EventError("venue '" + c.venue + "' has conflicting coordinates");
    }
  }
  venues_.reserve(venue_coords.size());
  for (const auto& [name, where] : venue_coords) {
    venue_index_.emplace(std::string(name), static_cast<std::uint32_t>(venues_.size()));
    venues_.push_back({std::string(name), where, 0});
  }

  for (const auto& c : checkins) {
    const std::uint32_t u = intern_user(c.user);
    const std::uint32_t v = venue_index_.at(c.venue);
    visits_[u].push_back({v, c.timestamp});
    ++venues_[v].popularity;
  }
  report_.checkins = checkins.size();

  for (const auto& m : mentions) {
    const std::uint32_t a = intern_user(m.source);
    const std::uint32_t b = intern_user(m.target);
    if (a == b) {
      ++report_.self_mentions_dropped;
      continue;
    }
    ++mention_counts_[pair_key(a, b)];
    ++report_.mentions;
  }

  std::unordered_map<std::string, std::uint32_t> tag_ids;
  for (const auto& h : hashtags) {
    std::string tag = normalize_hashtag(h.tag);
    if (tag.empty()) throw EventError("empty hashtag for user '" + h.user + "'");
    const std::uint32_t u = intern_user(h.user);
    auto [it, _] =
        tag_ids.try_emplace(std::move(tag), static_cast<std::uint32_t>(tag_ids.size()));
    tags_[u].push_back(it->second);
    ++report_.hashtags;
  }
  for (auto& t : tags_) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }

  mode_venue_.assign(users_.size(), std::nullopt);
  for (std::uint32_t u = 0; u < visits_.size(); ++u) {
    auto& vs = visits_[u];
    std::sort(vs.begin(), vs.end(), [](const Visit& x, const Visit& y) {
      return x.venue != y.venue ? x.venue < y.venue : x.time < y.time;
    });
    if (vs.size() <= 2) continue;
    std::uint32_t best = vs.front().venue;
    std::size_t best_count = 0;
    for (std::size_t k = 0; k < vs.size();) {
      std::size_t e = k;
      while (e < vs.size() && vs[e].venue == vs[k].venue) ++e;
      if (e - k > best_count) {
        best_count = e - k;
        best = vs[k].venue;
      }
      k = e;
    }
    mode_venue_[u] = best;
  }
}

std::size_t EventIndex::mentions(std::string_view i, std::string_view j) const {
  auto a = user_key(i);
  auto b = user_key(j);
  if (!a || !b || *a == *b) return 0;
  auto it = mention_counts_.find(pair_key(*a, *b));
  return it == mention_counts_.end() ? 0 : it->second;
}

std::size_t EventIndex::common_hashtags(std::string_view i, std::string_view j) const {
  auto a = user_key(i);
  auto b = user_key(j);
  if (!a || !b) return 0;
  const auto& ta = tags_[*a];
  const auto& tb = tags_[*b];
  std::size_t n = 0;
  auto x = ta.begin();
  auto y = tb.begin();
  while (x != ta.end() && y != tb.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      ++n;
      ++x;
      ++y;
    }
  }
  return n;
}

template <typename F>
void EventIndex::for_each_colocation(std::uint32_t a, std::uint32_t b, std::int64_t window,
                                     F&& f) const {
  if (window <= 0) throw EventError("colocation window must be positive");
  const auto& va = visits_[a];
  const auto& vb = visits_[b];
  std::size_t x = 0;
  std::size_t y = 0;
  while (x < va.size() && y < vb.size()) {
    if (va[x].venue < vb[y].venue) {
      ++x;
    } else if (vb[y].venue < va[x].venue) {
      ++y;
    } else {
      // Same venue: two-pointer over the time-sorted runs.
      const std::int64_t ta = va[x].time;
      const std::int64_t tb = vb[y].time;
      if (tb < ta - window) {
        ++y;
      } else if (tb > ta + window) {
        ++x;
      } else {
        f(va[x].venue);
        ++x;
        ++y;
      }
    }
  }
}

double EventIndex::colocations(std::string_view i, std::string_view j,
                               std::int64_t window) const {
  if (window <= 0) throw EventError("colocation window must be positive");
  auto a = user_key(i);
  auto b = user_key(j);
  if (!a || !b || *a == *b) return 0.0;
  double total = 0.0;
  for_each_colocation(*a, *b, window, [&](std::uint32_t v) {
    total += 1.0 / std::log(1.0 + static_cast<double>(venues_[v].popularity));
  });
  return total;
}

std::size_t EventIndex::colocation_count(std::string_view i, std::string_view j,
                                         std::int64_t window) const {
  if (window <= 0) throw EventError("colocation window must be positive");
  auto a = user_key(i);
  auto b = user_key(j);
  if (!a || !b || *a == *b) return 0;
  std::size_t n = 0;
  for_each_colocation(*a, *b, window, [&](std::uint32_t) { ++n; });
  return n;
}

std::optional<GeoPoint> EventIndex::most_frequent_location(std::string_view user) const {
  auto u = user_key(user);
  if (!u || !mode_venue_[*u]) return std::nullopt;
  return venues_[*mode_venue_[*u]].where;
}

std::optional<double> EventIndex::pair_distance(std::string_view i, std::string_view j) const {
  auto a = most_frequent_location(i);
  auto b = most_frequent_location(j);
  if (!a || !b) return std::nullopt;
  return haversine_km(*a, *b);
}

std::size_t EventIndex::venue_popularity(std::string_view venue) const {
  auto it = venue_index_.find(std::string(venue));
  return it == venue_index_.end() ? 0 : venues_[it->second].popularity;
}

std::size_t EventIndex::checkin_count(std::string_view user) const {
  auto u = user_key(user);
  return u ? visits_[*u].size() : 0;
}

}  // namespace mlsn
