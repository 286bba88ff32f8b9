#pragma once

#include <vector>

#include "imblab/dataset.hpp"

namespace imblab {

struct CdfPoint {
  double score = 0.0;
  double fraction = 0.0;  // fraction of the class with kdn <= score
};

/// Per-instance k-disagreeing-neighbors scores: the fraction of an
/// instance's k nearest other instances carrying a different label.
/// Scores lie exactly on the grid {0, 1/k, ..., 1}.
struct KdnReport {
  int k = 0;
  std::vector<double> scores;
  double mean_negative = 0.0;
  double mean_positive = 0.0;
  std::vector<CdfPoint> cdf_negative;  // step points at distinct scores
  std::vector<CdfPoint> cdf_positive;

  double class_mean(Label l) const {
    return l == Label::positive ? mean_positive : mean_negative;
  }
};

/// Requires |data| > k. Distance ties resolve to the lower row index; the
/// instance itself is never its own neighbor.
KdnReport kdn_scores(const Dataset& data, int k = 5);

/// Before/after hardness comparison (e.g. around a balancing step).
/// Synthetic rows in `after` participate as ordinary instances.
struct HardnessShift {
  KdnReport before;
  KdnReport after;
  double delta_negative = 0.0;  // after minus before class mean
  double delta_positive = 0.0;
};

HardnessShift hardness_shift(const Dataset& before, const Dataset& after,
                             int k = 5);

}  // namespace imblab
