#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mlsn/forest.hpp"

using namespace mlsn;

namespace {

Samples separable(std::uint64_t seed, std::size_t n = 200) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Samples s(2);
  while (s.size() < n) {
    const double x = u(rng), y = u(rng);
    const double margin = x + 0.5 * y;
    if (std::abs(margin) < 0.05) continue;
    s.add(std::vector<double>{x, y}, margin > 0 ? 1 : -1);
  }
  return s;
}

Samples noisy(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> z(0, 1);
  Samples s(d);
  std::vector<double> row(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : row) v = std::round(z(rng) * 4) / 4;
    const double signal = row[0] - 0.5 * row[d - 1] + z(rng);
    s.add(row, signal > 0 ? 1 : -1);
  }
  return s;
}

double accuracy(const RandomForest& f, const Samples& s) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int guess = f.predict_proba(s.row(i)) > 0.5 ? 1 : -1;
    hit += guess == s.label(i);
  }
  return static_cast<double>(hit) / static_cast<double>(s.size());
}

}  // namespace

TEST_CASE("defaults match the reference configuration") {
  ForestConfig cfg;
  CHECK(cfg.n_trees == 45);
  CHECK(cfg.max_depth == 25);
  CHECK(cfg.min_samples_split == 2);
  CHECK(cfg.bootstrap);
}

TEST_CASE("sample validation") {
  Samples s(2);
  CHECK_THROWS_AS(s.add(std::vector<double>{1.0}, 1), InputError);
  CHECK_THROWS_AS(s.add(std::vector<double>{1.0, 2.0}, 0), InputError);
  CHECK_THROWS_AS(s.add(std::vector<double>{1.0, NAN}, 1), InputError);
  CHECK_THROWS_AS(s.add(std::vector<double>{INFINITY, 2.0}, 1), InputError);
}

TEST_CASE("separable data is learned") {
  const auto s = separable(1);
  const auto f = RandomForest::train(s, {});
  CHECK(accuracy(f, s) >= 0.99);
}

TEST_CASE("single-class and empty input are rejected") {
  Samples s(1);
  CHECK_THROWS_AS(RandomForest::train(s, {}), DataShapeError);
  s.add(std::vector<double>{1.0}, 1);
  s.add(std::vector<double>{2.0}, 1);
  CHECK_THROWS_AS(RandomForest::train(s, {}), DataShapeError);
}

TEST_CASE("same seed gives identical predictions") {
  const auto s = separable(2);
  ForestConfig cfg;
  cfg.seed = 99;
  const auto a = RandomForest::train(s, cfg);
  const auto b = RandomForest::train(s, cfg);
  cfg.threads = 1;
  const auto c = RandomForest::train(s, cfg);
  const auto probe = separable(3, 50);
  CHECK(a.predict_proba(probe) == b.predict_proba(probe));
  CHECK(a.predict_proba(probe) == c.predict_proba(probe));
}

TEST_CASE("probe in an all-positive region scores 1") {
  Samples s(1);
  for (int k = -20; k <= 20; ++k) {
    if (k != 0) s.add(std::vector<double>{double(k)}, k > 0 ? 1 : -1);
  }
  const auto f = RandomForest::train(s, {});
  CHECK(f.predict_proba(std::vector<double>{100.0}) == 1.0);
  CHECK(f.predict_proba(std::vector<double>{-100.0}) == 0.0);
}

TEST_CASE("a single stump returns its leaf fractions") {
  Samples s(1);
  // Left of zero: 8 negatives, 2 positives; right: the mirror image.
  for (int k = 1; k <= 10; ++k) {
    s.add(std::vector<double>{-double(k)}, (k == 5 || k == 6) ? 1 : -1);
    s.add(std::vector<double>{double(k)}, (k == 5 || k == 6) ? -1 : 1);
  }
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.max_depth = 1;
  cfg.bootstrap = false;
  const auto f = RandomForest::train(s, cfg);
  CHECK(f.trees()[0].depth() == 1);
  CHECK(f.predict_proba(std::vector<double>{-100.0}) == doctest::Approx(0.2));
  CHECK(f.predict_proba(std::vector<double>{100.0}) == doctest::Approx(0.8));
  for (int k = -12; k <= 12; ++k) {
    const double p = f.predict_proba(std::vector<double>{k + 0.5});
    CHECK((p == doctest::Approx(0.2) || p == doctest::Approx(0.8)));
  }
}

TEST_CASE("forest output is the mean of its trees") {
  std::mt19937_64 rng(4);
  const auto s = noisy(rng, 300, 4);
  ForestConfig cfg;
  cfg.n_trees = 13;
  const auto f = RandomForest::train(s, cfg);
  const auto probe = noisy(rng, 100, 4);
  for (std::size_t i = 0; i < probe.size(); ++i) {
    double sum = 0;
    for (const auto& t : f.trees()) sum += t.predict(probe.row(i));
    REQUIRE(f.predict_proba(probe.row(i)) == doctest::Approx(sum / 13.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(f.predict_proba(std::vector<double>{1.0, 2.0}), InputError);
}

TEST_CASE("trees respect max depth and hold probabilities") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const auto s = noisy(rng, 80 + rep, 1 + rep % 5);
    ForestConfig cfg;
    cfg.n_trees = 3;
    cfg.max_depth = 1 + rep % 8;
    cfg.seed = rep;
    cfg.threads = 1;
    const auto f = RandomForest::train(s, cfg);
    for (const auto& t : f.trees()) {
      REQUIRE(t.depth() <= cfg.max_depth);
      for (const auto& node : t.nodes()) {
        if (node.leaf()) {
          REQUIRE(node.value >= 0.0);
          REQUIRE(node.value <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("deeper trees never lose training accuracy") {
  // One tree without bootstrap, so every depth sees the same rows.
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    const auto s = noisy(rng, 120, 2 + rep % 4);
    double prev = 0.0;
    for (std::size_t depth = 1; depth <= 12; ++depth) {
      ForestConfig cfg;
      cfg.n_trees = 1;
      cfg.bootstrap = false;
      cfg.max_depth = depth;
      cfg.seed = rep;
      const double acc = accuracy(RandomForest::train(s, cfg), s);
      REQUIRE(acc >= prev);
      prev = acc;
    }
  }
}

TEST_CASE("min_samples_split stops growth") {
  const auto s = separable(7, 60);
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.bootstrap = false;
  cfg.min_samples_split = 1000;
  const auto f = RandomForest::train(s, cfg);
  CHECK(f.trees()[0].nodes().size() == 1);
  CHECK(f.trees()[0].nodes()[0].value == doctest::Approx(s.positives() / 60.0));
}

TEST_CASE("save and load round-trip exactly") {
  std::mt19937_64 rng(8);
  const auto s = noisy(rng, 200, 4);
  ForestConfig cfg;
  cfg.n_trees = 7;
  const auto f = RandomForest::train(s, cfg);
  std::stringstream buf;
  f.save(buf);
  const auto g = RandomForest::load(buf);
  CHECK(g.n_features() == 4);
  const auto probe = noisy(rng, 100, 4);
  CHECK(f.predict_proba(probe) == g.predict_proba(probe));

  std::stringstream again;
  g.save(again);
  std::stringstream first;
  f.save(first);
  CHECK(again.str() == first.str());

  std::stringstream junk("mlsn-forest 1\nfeatures 2\ntrees 1\ntree 1\n0 0x1p+0 0 0 0x0p+0\n");
  CHECK_THROWS_AS(RandomForest::load(junk), InputError);
  std::stringstream wrong("not a forest\n");
  CHECK_THROWS_AS(RandomForest::load(wrong), InputError);
}
