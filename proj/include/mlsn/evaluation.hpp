#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mlsn/forest.hpp"

namespace mlsn {

struct RocPoint {
  // Scores >= threshold are called positive. The first point uses +inf.
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocResult {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// Threshold sweep over the distinct scores, highest first, with trapezoidal
// AUC. Tied scores form one step, which gives them half credit.
RocResult roc_auc(std::span<const double> scores, std::span<const int> labels);

// TPR of a curve at each FPR grid value, taking the upper envelope at
// vertical segments and interpolating linearly between vertices.
std::vector<double> tpr_at(const RocResult& roc, std::span<const double> fpr_grid);

// Vertical average of several curves over an evenly spaced FPR grid. The
// threshold column is the mean threshold of the vertex each curve reached.
RocResult vertical_average(std::span<const RocResult> curves, std::size_t grid_points = 101);

// Stratified fold index for each sample. Classes are shuffled separately and
// dealt round-robin, so fold sizes differ by at most one and every fold holds
// both classes. Throws DataShapeError when a class has fewer than k members.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k,
                                          std::uint64_t seed);

struct CvReport {
  std::vector<RocResult> folds;
  std::vector<double> fold_auc;
  std::vector<std::size_t> fold_of;
  double mean_auc = 0.0;
  std::uint64_t seed = 0;
  RocResult averaged;
};

CvReport cross_validate(const Samples& data, const ForestConfig& cfg, std::size_t k = 10,
                        std::uint64_t seed = 0);

}  // namespace mlsn
