#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mlsn/errors.hpp"

namespace mlsn {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr std::int64_t kColocationWindowSeconds = 3600;
inline constexpr double kDistanceFloorKm = 0.1;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct CheckinRecord {
  std::string user;
  std::string venue;
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t timestamp = 0;
};

struct MentionRecord {
  std::string source;
  std::string target;
  std::int64_t timestamp = 0;
};

struct HashtagRecord {
  std::string user;
  std::string tag;
  std::int64_t timestamp = 0;
};

class EventError : public InputError {
 public:
  using InputError::InputError;
};

// Great-circle distance in km.
double haversine_km(GeoPoint a, GeoPoint b);

// sim^a / max(dist, 0.1 km)^b. Throws on negative inputs.
double similarity_over_distance(double sim, double dist_km, double a = 2.0, double b = 1.0);

// Unweighted sum of per-layer interaction volumes.
double global_interaction(std::span<const double> per_layer);

// Lowercase, leading '#' removed.
std::string normalize_hashtag(std::string_view tag);

bool valid_coordinates(double lat, double lon);

struct EventReport {
  std::size_t checkins = 0;
  std::size_t mentions = 0;
  std::size_t hashtags = 0;
  std::size_t self_mentions_dropped = 0;
};

// Per-user indices over check-ins, mentions and hashtags. Built once,
// read-only afterwards; all pair queries are symmetric in (i, j) and return
// zero / nullopt for users never seen in any record.
class EventIndex {
 public:
  EventIndex() = default;
  EventIndex(std::span<const CheckinRecord> checkins, std::span<const MentionRecord> mentions,
             std::span<const HashtagRecord> hashtags);

  // Mentions i->j plus j->i.
  std::size_t mentions(std::string_view i, std::string_view j) const;
  // Distinct tags used by both.
  std::size_t common_hashtags(std::string_view i, std::string_view j) const;

  // Check-in pairs at the same venue within the window, matched one-to-one in
  // time order. colocations() weights each match by 1/ln(1 + popularity).
  double colocations(std::string_view i, std::string_view j,
                     std::int64_t window = kColocationWindowSeconds) const;
  std::size_t colocation_count(std::string_view i, std::string_view j,
                               std::int64_t window = kColocationWindowSeconds) const;

  // Coordinates of the user's mode venue, ties to the lowest venue id. Only
  // defined for users with more than two check-ins.
  std::optional<GeoPoint> most_frequent_location(std::string_view user) const;
  std::optional<double> pair_distance(std::string_view i, std::string_view j) const;

  std::size_t venue_popularity(std::string_view venue) const;
  std::size_t checkin_count(std::string_view user) const;

  const EventReport& report() const { return report_; }

 private:
  struct Visit {
    std::uint32_t venue;
    std::int64_t time;
  };
  struct Venue {
    std::string name;
    GeoPoint where;
    std::size_t popularity = 0;
  };

  std::optional<std::uint32_t> user_key(std::string_view name) const;
  std::uint32_t intern_user(std::string_view name);
  template <typename F>
  void for_each_colocation(std::uint32_t a, std::uint32_t b, std::int64_t window, F&& f) const;

  std::unordered_map<std::string, std::uint32_t> users_;
  std::unordered_map<std::uint64_t, std::uint32_t> mention_counts_;
  std::vector<std::vector<std::uint32_t>> tags_;
  std::vector<std::vector<Visit>> visits_;
  std::vector<Venue> venues_;
  std::vector<std::optional<std::uint32_t>> mode_venue_;
  std::unordered_map<std::string, std::uint32_t> venue_index_;
  EventReport report_;
};

}  // namespace mlsn
