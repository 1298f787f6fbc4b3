#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlsn/errors.hpp"

namespace mlsn {

// Row-major feature matrix with +1/-1 labels.
class Samples {
 public:
  Samples() = default;
  explicit Samples(std::size_t n_features) : n_features_(n_features) {}

  void add(std::span<const double> row, int label);

  std::size_t size() const { return labels_.size(); }
  std::size_t n_features() const { return n_features_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * n_features_, n_features_};
  }
  double at(std::size_t i, std::size_t f) const { return values_[i * n_features_ + f]; }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }

  Samples subset(std::span<const std::size_t> rows) const;
  std::size_t positives() const;

 private:
  std::size_t n_features_ = 0;
  std::vector<double> values_;
  std::vector<int> labels_;
};

struct ForestConfig {
  std::size_t n_trees = 45;
  std::size_t max_depth = 25;
  std::size_t min_samples_split = 2;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  // 0 means one thread per hardware core.
  std::size_t threads = 0;

  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

// Axis-aligned binary tree; a sample goes left when x[feature] <= threshold.
// Leaves hold the positive-class fraction of the training rows they saw.
class DecisionTree {
 public:
  struct Node {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
    bool leaf() const { return feature < 0; }
  };

  double predict(std::span<const double> x) const;
  std::size_t depth() const;
  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  friend class TreeTrainer;
  friend class RandomForest;
  std::vector<Node> nodes_;
};

class RandomForest {
 public:
  // Throws DataShapeError for empty or single-class data.
  static RandomForest train(const Samples& data, const ForestConfig& cfg);

  // Mean of per-tree leaf probabilities. Throws InputError on arity mismatch.
  double predict_proba(std::span<const double> x) const;
  std::vector<double> predict_proba(const Samples& data) const;

  std::size_t n_features() const { return n_features_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

  // Text format with hex-float values; save/load round-trips exactly.
  void save(std::ostream& out) const;
  static RandomForest load(std::istream& in);
  void save(const std::string& path) const;
  static RandomForest load(const std::string& path);

 private:
  std::size_t n_features_ = 0;
  std::vector<DecisionTree> trees_;
};

}  // namespace mlsn
