#include "imblab/hardness.hpp"

#include <algorithm>

#include "imblab/errors.hpp"
#include "imblab/neighbors.hpp"

namespace imblab {

namespace {

std::vector<CdfPoint> class_cdf(const std::vector<double>& scores,
                                const std::vector<Label>& labels,
                                Label which) {
  std::vector<double> values;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == which) values.push_back(scores[i]);
  }
  std::vector<CdfPoint> cdf;
  if (values.empty()) return cdf;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 == values.size() || values[i + 1] != values[i]) {
      cdf.push_back({values[i], static_cast<double>(i + 1) / n});
    }
  }
  return cdf;
}

}  // namespace

KdnReport kdn_scores(const Dataset& data, int k) {
  if (k < 1) throw ConfigError("kdn_scores: k must be >= 1");
  if (data.rows() <= static_cast<Eigen::Index>(k)) {
    throw ConfigError("kdn_scores: need more than k instances");
  }

  NeighborIndex index(data.features);
  KdnReport report;
  report.k = k;
  report.scores.resize(static_cast<std::size_t>(data.rows()));

  double sums[2] = {0.0, 0.0};
  std::size_t counts[2] = {0, 0};
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const Label own = data.labels[static_cast<std::size_t>(i)];
    int disagree = 0;
    for (const auto& [d2, j] : index.query_row(i, k, true)) {
      if (data.labels[static_cast<std::size_t>(j)] != own) ++disagree;
    }
    const double score = static_cast<double>(disagree) / static_cast<double>(k);
    report.scores[static_cast<std::size_t>(i)] = score;
    sums[label_index(own)] += score;
    ++counts[label_index(own)];
  }
  report.mean_negative =
      counts[0] ? sums[0] / static_cast<double>(counts[0]) : 0.0;
  report.mean_positive =
      counts[1] ? sums[1] / static_cast<double>(counts[1]) : 0.0;
  report.cdf_negative = class_cdf(report.scores, data.labels, Label::negative);
  report.cdf_positive = class_cdf(report.scores, data.labels, Label::positive);
  return report;
}

HardnessShift hardness_shift(const Dataset& before, const Dataset& after,
                             int k) {
  HardnessShift shift;
  shift.before = kdn_scores(before, k);
  shift.after = kdn_scores(after, k);
  shift.delta_negative = shift.after.mean_negative - shift.before.mean_negative;
  shift.delta_positive = shift.after.mean_positive - shift.before.mean_positive;
  return shift;
}

}  // namespace imblab
