#include "mlsn/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace mlsn {

void Samples::add(std::span<const double> row, int label) {
  if (row.size() != n_features_) throw InputError("row arity does not match sample arity");
  if (label != 1 && label != -1) throw InputError("labels must be +1 or -1");
  for (double v : row) {
    if (!std::isfinite(v)) throw InputError("non-finite feature value");
  }
  values_.insert(values_.end(), row.begin(), row.end());
  labels_.push_back(label);
}

Samples Samples::subset(std::span<const std::size_t> rows) const {
  Samples out(n_features_);
  out.values_.reserve(rows.size() * n_features_);
  out.labels_.reserve(rows.size());
  for (std::size_t r : rows) {
    auto x = row(r);
    out.values_.insert(out.values_.end(), x.begin(), x.end());
    out.labels_.push_back(labels_[r]);
  }
  return out;
}

std::size_t Samples::positives() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

}  // namespace

// Grows one tree. Each node draws its feature subset from a generator seeded
// by (tree seed, heap position), so a shallower tree is always a prefix of a
// deeper one trained with the same seed.
class TreeTrainer {
 public:
  TreeTrainer(const Samples& data, const ForestConfig& cfg, std::uint64_t seed)
      : data_(data), cfg_(cfg), seed_(seed) {
    const auto d = data.n_features();
    mtry_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
  }

  DecisionTree grow(std::vector<std::uint32_t> rows) {
    tree_ = DecisionTree{};
    grow_node(rows, 0, 1);
    return std::move(tree_);
  }

 private:
  struct Split {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double score = -1.0;
  };

  struct Entry {
    double x;
    int y;
  };

  // Best midpoint split on one feature; feature stays -1 when it is constant
  // within the node.
  Split best_on_feature(const std::vector<std::uint32_t>& rows, std::size_t f,
                        std::size_t pos_total) {
    entries_.clear();
    for (auto r : rows) entries_.push_back({data_.at(r, f), data_.label(r)});
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.x < b.x; });
    Split best;
    if (entries_.front().x == entries_.back().x) return best;
    const double n = static_cast<double>(entries_.size());
    const double pt = static_cast<double>(pos_total);
    double lp = 0.0;
    for (std::size_t k = 0; k + 1 < entries_.size(); ++k) {
      if (entries_[k].y > 0) lp += 1.0;
      if (!(entries_[k].x < entries_[k + 1].x)) continue;
      const double nl = static_cast<double>(k + 1);
      const double nr = n - nl;
      const double ln = nl - lp;
      const double rp = pt - lp;
      const double rn = nr - rp;
      const double score = (lp * lp + ln * ln) / nl + (rp * rp + rn * rn) / nr;
      if (score > best.score) {
        double mid = entries_[k].x + (entries_[k + 1].x - entries_[k].x) / 2.0;
        if (!(mid < entries_[k + 1].x)) mid = entries_[k].x;
        best = {static_cast<std::int32_t>(f), mid, score};
      }
    }
    return best;
  }

  std::int32_t make_leaf(double value) {
    DecisionTree::Node node;
    node.value = value;
    tree_.nodes_.push_back(node);
    return static_cast<std::int32_t>(tree_.nodes_.size() - 1);
  }

  std::int32_t grow_node(std::vector<std::uint32_t>& rows, std::size_t depth,
                         std::uint64_t heap) {
    std::size_t pos = 0;
    for (auto r : rows) pos += data_.label(r) > 0 ? 1 : 0;
    const double value = static_cast<double>(pos) / static_cast<double>(rows.size());
    if (depth >= cfg_.max_depth || rows.size() < cfg_.min_samples_split || pos == 0 ||
        pos == rows.size()) {
      return make_leaf(value);
    }

    std::mt19937_64 rng(mix(seed_, heap));
    std::vector<std::size_t> order(data_.n_features());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Split> candidates;
    for (std::size_t f : order) {
      if (candidates.size() == mtry_) break;
      Split s = best_on_feature(rows, f, pos);
      if (s.feature >= 0) candidates.push_back(s);
    }
    if (candidates.empty()) return make_leaf(value);
    Split best = candidates.front();
    for (const Split& s : candidates) {
      if (s.score > best.score ||
          (s.score == best.score &&
           (s.feature < best.feature || (s.feature == best.feature && s.threshold < best.threshold)))) {
        best = s;
      }
    }

    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
    for (auto r : rows) {
      (data_.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const auto self = make_leaf(value);
    tree_.nodes_[self].feature = best.feature;
    tree_.nodes_[self].threshold = best.threshold;
    const auto l = grow_node(left, depth + 1, heap * 2);
    const auto r = grow_node(right, depth + 1, heap * 2 + 1);
    tree_.nodes_[self].left = l;
    tree_.nodes_[self].right = r;
    return self;
  }

  const Samples& data_;
  const ForestConfig& cfg_;
  std::uint64_t seed_;
  std::size_t mtry_ = 1;
  DecisionTree tree_;
  std::vector<Entry> entries_;
};

double DecisionTree::predict(std::span<const double> x) const {
  std::int32_t k = 0;
  while (!nodes_[k].leaf()) {
    const auto& n = nodes_[k];
    k = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes_[k].value;
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::size_t deepest = 0;
  std::vector<std::pair<std::int32_t, std::size_t>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto [k, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes_[k].leaf()) {
      stack.push_back({nodes_[k].left, d + 1});
      stack.push_back({nodes_[k].right, d + 1});
    }
  }
  return deepest;
}

RandomForest RandomForest::train(const Samples& data, const ForestConfig& cfg) {
  if (data.size() == 0) throw DataShapeError("cannot train on an empty dataset");
  const std::size_t pos = data.positives();
  if (pos == 0 || pos == data.size()) {
    throw DataShapeError("training data must contain both labels");
  }
  if (cfg.n_trees == 0 || cfg.max_depth == 0 || cfg.min_samples_split == 0) {
    throw InputError("forest config values must be positive");
  }
  if (data.n_features() == 0) throw InputError("samples have no features");

  RandomForest forest;
  forest.n_features_ = data.n_features();
  forest.trees_.resize(cfg.n_trees);

  auto train_one = [&](std::size_t t) {
    const std::uint64_t tree_seed = mix(cfg.seed, t + 1);
    std::vector<std::uint32_t> rows(data.size());
    if (cfg.bootstrap) {
      std::mt19937_64 rng(tree_seed);
      std::uniform_int_distribution<std::uint32_t> pick(0,
                                                        static_cast<std::uint32_t>(data.size() - 1));
      for (auto& r : rows) r = pick(rng);
    } else {
      std::iota(rows.begin(), rows.end(), 0u);
    }
    TreeTrainer trainer(data, cfg, tree_seed);
    forest.trees_[t] = trainer.grow(std::move(rows));
  };

  std::size_t threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, cfg.n_trees);
  if (threads == 1) {
    for (std::size_t t = 0; t < cfg.n_trees; ++t) train_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < cfg.n_trees; t = next++) train_one(t);
      });
    }
  }
  return forest;
}

double RandomForest::predict_proba(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw InputError("feature vector has " + std::to_string(x.size()) + " values, forest expects " +
                     std::to_string(n_features_));
  }
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.predict(x);
  return sum / static_cast<double>(trees_.size());
}

std::vector<double> RandomForest::predict_proba(const Samples& data) const {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = predict_proba(data.row(i));
  return out;
}

namespace {

constexpr const char* kMagic = "mlsn-forest";
constexpr int kFormatVersion = 1;

std::string hex(double v) {
  std::ostringstream s;
  s << std::hexfloat << v;
  return s.str();
}

double parse_double(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw InputError("bad number '" + tok + "' in model");
  return v;
}

void expect(std::istream& in, const char* word) {
  std::string tok;
  if (!(in >> tok) || tok != word) {
    throw InputError(std::string("model file: expected '") + word + "'");
  }
}

}  // namespace

void RandomForest::save(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "features " << n_features_ << '\n';
  out << "trees " << trees_.size() << '\n';
  for (const auto& t : trees_) {
    out << "tree " << t.nodes_.size() << '\n';
    for (const auto& n : t.nodes_) {
      out << n.feature << ' ' << hex(n.threshold) << ' ' << n.left << ' ' << n.right << ' '
          << hex(n.value) << '\n';
    }
  }
}

RandomForest RandomForest::load(std::istream& in) {
  expect(in, kMagic);
  int version = 0;
  if (!(in >> version) || version != kFormatVersion) {
    throw InputError("unsupported model format version");
  }
  RandomForest f;
  std::size_t n_trees = 0;
  expect(in, "features");
  in >> f.n_features_;
  expect(in, "trees");
  in >> n_trees;
  if (!in) throw InputError("truncated model header");
  f.trees_.resize(n_trees);
  for (auto& t : f.trees_) {
    std::size_t n_nodes = 0;
    expect(in, "tree");
    if (!(in >> n_nodes) || n_nodes == 0) throw InputError("bad tree size in model");
    t.nodes_.resize(n_nodes);
    for (std::size_t k = 0; k < n_nodes; ++k) {
      auto& n = t.nodes_[k];
      std::string thr, val;
      if (!(in >> n.feature >> thr >> n.left >> n.right >> val)) {
        throw InputError("truncated tree in model");
      }
      n.threshold = parse_double(thr);
      n.value = parse_double(val);
      // Children always follow their parent, which rules out cycles.
      const auto self = static_cast<std::int32_t>(k);
      const auto limit = static_cast<std::int32_t>(n_nodes);
      if (n.feature >= static_cast<std::int32_t>(f.n_features_) ||
          (!n.leaf() && (n.left <= self || n.right <= self || n.left >= limit ||
                         n.right >= limit))) {
        throw InputError("corrupt node in model");
      }
    }
  }
  return f;
}

void RandomForest::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model to " + path);
  save(out);
}

RandomForest RandomForest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read model " + path);
  return load(in);
}

}  // namespace mlsn
