#pragma once

#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mlsn/evaluation.hpp"
#include "mlsn/features.hpp"
#include "mlsn/graph.hpp"
#include "mlsn/interaction.hpp"

namespace mlsn {

// Malformed file content. what() reads "<source>:<line>: <message>".
class ParseError : public InputError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Edge file: header "layer,src,dst". Rows of layers listed in `reciprocal`
// are directed follows and only mutual pairs are kept.
struct EdgeFileOptions {
  std::vector<std::string> layers = {"twitter", "foursquare"};
  std::set<std::string> reciprocal;
};

struct EdgeFileReport {
  std::size_t rows = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
  std::size_t one_way_dropped = 0;
};

MultilayerGraph read_edges(std::istream& in, const std::string& source,
                           const EdgeFileOptions& options, EdgeFileReport* report = nullptr);
MultilayerGraph read_edge_file(const std::string& path, const EdgeFileOptions& options,
                               EdgeFileReport* report = nullptr);
void write_edges(std::ostream& out, const MultilayerGraph& g);

// Check-in file: "user,venue,lat,lon,timestamp".
std::vector<CheckinRecord> read_checkins(std::istream& in, const std::string& source);
std::vector<CheckinRecord> read_checkin_file(const std::string& path);
void write_checkins(std::ostream& out, std::span<const CheckinRecord> records);

// Interaction file: "kind,user_a,user_b_or_tag,timestamp" with kind mention
// (source, target) or hashtag (user, tag).
struct InteractionRecords {
  std::vector<MentionRecord> mentions;
  std::vector<HashtagRecord> hashtags;
};
InteractionRecords read_interactions(std::istream& in, const std::string& source);
InteractionRecords read_interaction_file(const std::string& path);
void write_interactions(std::ostream& out, std::span<const MentionRecord> mentions,
                        std::span<const HashtagRecord> hashtags);

// Feature matrix: "i,j,label,<four feature names>".
void write_features(std::ostream& out, const LabeledDataset& ds);
LabeledDataset read_features(std::istream& in, const std::string& source);
LabeledDataset read_feature_file(const std::string& path);
Samples to_samples(const LabeledDataset& ds);

// "threshold,fpr,tpr", one row per curve point.
void write_roc(std::ostream& out, const RocResult& roc);

// Shortest text that parses back to the same double.
std::string format_double(double v);

// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

}  // namespace mlsn
