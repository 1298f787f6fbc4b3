#include "mlsn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace mlsn {

RocResult roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw InputError("scores and labels differ in length");
  }
  std::size_t pos = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] != 1 && labels[k] != -1) throw InputError("labels must be +1 or -1");
    if (std::isnan(scores[k])) throw InputError("NaN score");
    pos += labels[k] > 0 ? 1 : 0;
  }
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw DataShapeError("ROC needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocResult out;
  out.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  const double P = static_cast<double>(pos);
  const double N = static_cast<double>(neg);
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = scores[order[k]];
    while (k < order.size() && scores[order[k]] == s) {
      (labels[order[k]] > 0 ? tp : fp) += 1;
      ++k;
    }
    const RocPoint prev = out.points.back();
    RocPoint next{s, static_cast<double>(fp) / N, static_cast<double>(tp) / P};
    out.auc += (next.fpr - prev.fpr) * (next.tpr + prev.tpr) / 2.0;
    out.points.push_back(next);
  }
  return out;
}

namespace {

// Index of the last vertex with fpr <= x.
std::size_t last_vertex_at(const RocResult& roc, double x) {
  const auto& p = roc.points;
  auto it = std::upper_bound(p.begin(), p.end(), x,
                             [](double v, const RocPoint& q) { return v < q.fpr; });
  return it == p.begin() ? 0 : static_cast<std::size_t>(std::distance(p.begin(), it)) - 1;
}

}  // namespace

std::vector<double> tpr_at(const RocResult& roc, std::span<const double> fpr_grid) {
  if (roc.points.empty()) throw InputError("empty ROC curve");
  std::vector<double> out;
  out.reserve(fpr_grid.size());
  const auto& p = roc.points;
  for (double x : fpr_grid) {
    const std::size_t i = last_vertex_at(roc, x);
    if (p[i].fpr == x || i + 1 == p.size()) {
      out.push_back(p[i].tpr);
      continue;
    }
    const double t = (x - p[i].fpr) / (p[i + 1].fpr - p[i].fpr);
    out.push_back(p[i].tpr + t * (p[i + 1].tpr - p[i].tpr));
  }
  return out;
}

RocResult vertical_average(std::span<const RocResult> curves, std::size_t grid_points) {
  if (curves.empty()) throw InputError("no curves to average");
  if (grid_points < 2) throw InputError("FPR grid needs at least two points");
  std::vector<double> grid(grid_points);
  for (std::size_t g = 0; g < grid_points; ++g) {
    grid[g] = static_cast<double>(g) / static_cast<double>(grid_points - 1);
  }
  std::vector<double> tpr(grid_points, 0.0);
  std::vector<double> thr(grid_points, 0.0);
  for (const auto& c : curves) {
    const auto t = tpr_at(c, grid);
    for (std::size_t g = 0; g < grid_points; ++g) {
      tpr[g] += t[g];
      thr[g] += c.points[last_vertex_at(c, grid[g])].threshold;
    }
  }
  const double n = static_cast<double>(curves.size());
  RocResult out;
  for (std::size_t g = 0; g < grid_points; ++g) {
    out.points.push_back({thr[g] / n, grid[g], tpr[g] / n});
    if (g > 0) {
      const auto& a = out.points[g - 1];
      const auto& b = out.points[g];
      out.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
  }
  return out;
}

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k,
                                          std::uint64_t seed) {
  if (k < 2) throw InputError("cross-validation needs k >= 2");
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] > 0 ? pos : neg).push_back(i);
  if (pos.size() < k || neg.size() < k) {
    throw DataShapeError("dataset too small for stratified " + std::to_string(k) +
                         "-fold split (" + std::to_string(pos.size()) + " positives, " +
                         std::to_string(neg.size()) + " negatives)");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  std::vector<std::size_t> fold_of(labels.size());
  std::size_t slot = 0;
  for (auto i : pos) fold_of[i] = slot++ % k;
  for (auto i : neg) fold_of[i] = slot++ % k;
  return fold_of;
}

CvReport cross_validate(const Samples& data, const ForestConfig& cfg, std::size_t k,
                        std::uint64_t seed) {
  CvReport report;
  report.seed = seed;
  report.fold_of = stratified_folds(data.labels(), k, seed);
  for (std::size_t fold = 0; fold < k; ++fold) {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
      (report.fold_of[i] == fold ? test_rows : train_rows).push_back(i);
    }
    const Samples train = data.subset(train_rows);
    const Samples test = data.subset(test_rows);
    ForestConfig fold_cfg = cfg;
    fold_cfg.seed = cfg.seed * 0x100000001b3ULL + fold;
    const RandomForest forest = RandomForest::train(train, fold_cfg);
    const auto scores = forest.predict_proba(test);
    report.folds.push_back(roc_auc(scores, test.labels()));
    report.fold_auc.push_back(report.folds.back().auc);
  }
  report.mean_auc = std::accumulate(report.fold_auc.begin(), report.fold_auc.end(), 0.0) /
                    static_cast<double>(k);
  report.averaged = vertical_average(report.folds);
  return report;
}

}  // namespace mlsn
