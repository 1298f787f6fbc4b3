#include "mlsn/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include <fmt/format.h>

namespace mlsn {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& message)
    : InputError(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

std::string format_double(double v) { return fmt::format("{}", v); }

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Line-oriented CSV reader that checks the header and column count.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string source, std::string_view header)
      : CsvReader(in, std::move(source), std::vector<std::string>{std::string(header)}) {}

  // Accepts any one of several headers; matched() tells which.
  CsvReader(std::istream& in, std::string source, const std::vector<std::string>& headers)
      : in_(in), source_(std::move(source)) {
    if (!next_line()) throw ParseError(source_, 1, "missing header, expected '" + headers.front() + "'");
    const auto it = std::find(headers.begin(), headers.end(), line_);
    if (it == headers.end()) {
      throw ParseError(source_, line_no_, "bad header '" + line_ + "', expected '" + headers.front() + "'");
    }
    matched_ = static_cast<std::size_t>(std::distance(headers.begin(), it));
    columns_ = split(*it).size();
  }

  std::size_t matched() const { return matched_; }

  // Next non-blank data row, or false at end of input.
  bool next(std::vector<std::string_view>& fields) {
    while (next_line()) {
      if (line_.empty()) continue;
      fields = split(line_);
      if (fields.size() != columns_) {
        fail("expected " + std::to_string(columns_) + " columns, got " +
             std::to_string(fields.size()));
      }
      for (auto f : fields) {
        if (f.empty()) fail("empty field");
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(source_, line_no_, message);
  }

  double number(std::string_view text) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      fail("bad number '" + std::string(text) + "'");
    }
    return v;
  }

  std::int64_t integer(std::string_view text) const {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      fail("bad integer '" + std::string(text) + "'");
    }
    return v;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  bool next_line() {
    if (!std::getline(in_, line_)) return false;
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    return true;
  }

  std::istream& in_;
  std::string source_;
  std::string line_;
  std::size_t line_no_ = 0;
  std::size_t columns_ = 0;
  std::size_t matched_ = 0;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

MultilayerGraph read_edges(std::istream& in, const std::string& source,
                           const EdgeFileOptions& options, EdgeFileReport* report) {
  for (const auto& r : options.reciprocal) {
    if (std::find(options.layers.begin(), options.layers.end(), r) == options.layers.end()) {
      throw InputError("reciprocal layer '" + r + "' is not a declared layer");
    }
  }
  GraphBuilder builder(options.layers);
  EdgeFileReport rep;
  // Directed rows of reciprocal layers are held back until the file is read.
  std::vector<std::vector<std::pair<std::string, std::string>>> directed(options.layers.size());

  CsvReader csv(in, source, "layer,src,dst");
  std::vector<std::string_view> f;
  while (csv.next(f)) {
    ++rep.rows;
    LayerId layer = 0;
    try {
      layer = builder.layer_id(f[0]);
    } catch (const GraphError&) {
      csv.fail("unknown layer '" + std::string(f[0]) + "'");
    }
    if (options.reciprocal.count(std::string(f[0]))) {
      // Register both endpoints now so node ids follow file order.
      builder.add_node(f[1]);
      builder.add_node(f[2]);
      directed[layer].emplace_back(f[1], f[2]);
      continue;
    }
    if (!builder.add_edge(layer, f[1], f[2])) ++rep.self_loops;
  }
  for (LayerId l = 0; l < directed.size(); ++l) {
    if (directed[l].empty()) continue;
    std::set<std::pair<std::string, std::string>> arcs;
    for (const auto& [u, v] : directed[l]) {
      if (u == v) {
        ++rep.self_loops;
        continue;
      }
      if (!arcs.emplace(u, v).second) ++rep.duplicates;
    }
    const auto mutual = reciprocal_reduce(directed[l]);
    rep.one_way_dropped = arcs.size() - 2 * mutual.size();
    for (const auto& [u, v] : mutual) builder.add_edge(l, u, v);
  }
  MultilayerGraph g = std::move(builder).build();
  rep.duplicates += g.report().duplicates;
  if (report) *report = rep;
  return g;
}

MultilayerGraph read_edge_file(const std::string& path, const EdgeFileOptions& options,
                               EdgeFileReport* report) {
  auto in = open_in(path);
  return read_edges(in, path, options, report);
}

void write_edges(std::ostream& out, const MultilayerGraph& g) {
  out << "layer,src,dst\n";
  for (LayerId l = 0; l < g.layer_count(); ++l) {
    for (const Edge& e : g.edges(l)) {
      out << g.layer_name(l) << ',' << g.node_name(e.a) << ',' << g.node_name(e.b) << '\n';
    }
  }
}

std::vector<CheckinRecord> read_checkins(std::istream& in, const std::string& source) {
  CsvReader csv(in, source, "user,venue,lat,lon,timestamp");
  std::vector<CheckinRecord> out;
  std::map<std::string, GeoPoint, std::less<>> venues;
  std::vector<std::string_view> f;
  while (csv.next(f)) {
    CheckinRecord r{std::string(f[0]), std::string(f[1]), csv.number(f[2]), csv.number(f[3]),
                    csv.integer(f[4])};
    if (!valid_coordinates(r.lat, r.lon)) csv.fail("coordinates out of range");
    auto [it, inserted] = venues.try_emplace(r.venue, GeoPoint{r.lat, r.lon});
    if (!inserted && !(it->second == GeoPoint{r.lat, r.lon})) {
      csv.fail("venue '" + r.venue + "' has conflicting coordinates");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckinRecord> read_checkin_file(const std::string& path) {
  auto in = open_in(path);
  return read_checkins(in, path);
}

void write_checkins(std::ostream& out, std::span<const CheckinRecord> records) {
  out << "user,venue,lat,lon,timestamp\n";
  for (const auto& r : records) {
    out << r.user << ',' << r.venue << ',' << format_double(r.lat) << ','
        << format_double(r.lon) << ',' << r.timestamp << '\n';
  }
}

InteractionRecords read_interactions(std::istream& in, const std::string& source) {
  CsvReader csv(in, source, "kind,user_a,user_b_or_tag,timestamp");
  InteractionRecords out;
  std::vector<std::string_view> f;
  while (csv.next(f)) {
    const std::int64_t t = csv.integer(f[3]);
    if (f[0] == "mention") {
      out.mentions.push_back({std::string(f[1]), std::string(f[2]), t});
    } else if (f[0] == "hashtag") {
      std::string tag = normalize_hashtag(f[2]);
      if (tag.empty()) csv.fail("empty hashtag");
      out.hashtags.push_back({std::string(f[1]), std::move(tag), t});
    } else {
      csv.fail("unknown interaction kind '" + std::string(f[0]) + "'");
    }
  }
  return out;
}

InteractionRecords read_interaction_file(const std::string& path) {
  auto in = open_in(path);
  return read_interactions(in, path);
}

void write_interactions(std::ostream& out, std::span<const MentionRecord> mentions,
                        std::span<const HashtagRecord> hashtags) {
  out << "kind,user_a,user_b_or_tag,timestamp\n";
  for (const auto& m : mentions) {
    out << "mention," << m.source << ',' << m.target << ',' << m.timestamp << '\n';
  }
  for (const auto& h : hashtags) {
    out << "hashtag," << h.user << ',' << h.tag << ',' << h.timestamp << '\n';
  }
}

void write_features(std::ostream& out, const LabeledDataset& ds) {
  out << "i,j,label";
  for (auto name : feature_names(ds.kind)) out << ',' << name;
  out << '\n';
  for (const auto& p : ds.pairs) {
    out << p.i << ',' << p.j << ',' << p.label;
    for (double v : p.features) out << ',' << format_double(v);
    out << '\n';
  }
}

LabeledDataset read_features(std::istream& in, const std::string& source) {
  // The header decides the feature set.
  constexpr std::array kinds = {FeatureSetKind::Twitter, FeatureSetKind::Foursquare,
                                FeatureSetKind::Multilayer};
  std::vector<std::string> headers;
  for (auto kind : kinds) {
    std::string h = "i,j,label";
    for (auto name : feature_names(kind)) h += "," + std::string(name);
    headers.push_back(std::move(h));
  }
  CsvReader csv(in, source, headers);
  LabeledDataset ds;
  ds.kind = kinds[csv.matched()];
  std::vector<std::string_view> f;
  while (csv.next(f)) {
    LabeledPair p;
    p.i = std::string(f[0]);
    p.j = std::string(f[1]);
    const auto label = csv.integer(f[2]);
    if (label != 1 && label != -1) csv.fail("label must be 1 or -1");
    p.label = static_cast<int>(label);
    for (std::size_t k = 0; k < kFeatureArity; ++k) {
      p.features[k] = csv.number(f[3 + k]);
      if (!std::isfinite(p.features[k])) csv.fail("non-finite feature value");
    }
    ds.pairs.push_back(std::move(p));
  }
  return ds;
}

LabeledDataset read_feature_file(const std::string& path) {
  auto in = open_in(path);
  return read_features(in, path);
}

Samples to_samples(const LabeledDataset& ds) {
  Samples s(kFeatureArity);
  for (const auto& p : ds.pairs) s.add(p.features, p.label);
  return s;
}

void write_roc(std::ostream& out, const RocResult& roc) {
  out << "threshold,fpr,tpr\n";
  for (const auto& p : roc.points) {
    out << format_double(p.threshold) << ',' << format_double(p.fpr) << ','
        << format_double(p.tpr) << '\n';
  }
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize k = 0; k < in.gcount(); ++k) {
      h ^= static_cast<unsigned char>(buf[k]);
      h *= 0x100000001b3ULL;
    }
  }
  return fmt::format("{:016x}", h);
}

}  // namespace mlsn
