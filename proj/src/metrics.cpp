#include "imblab/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "imblab/errors.hpp"

namespace imblab {

ConfusionMatrix confusion(const std::vector<Label>& predicted,
                          const std::vector<Label>& truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw ConfigError("confusion: prediction/truth lengths must match and be >= 1");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == Label::positive) {
      ++(predicted[i] == Label::positive ? cm.tp : cm.fn);
    } else {
      ++(predicted[i] == Label::positive ? cm.fp : cm.tn);
    }
  }
  return cm;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  const double tp = static_cast<double>(cm.tp);
  const double fp = static_cast<double>(cm.fp);
  const double fn = static_cast<double>(cm.fn);
  const double tn = static_cast<double>(cm.tn);

  MetricsReport r;
  auto ratio = [&r](double num, double den) {
    if (den == 0.0) {
      r.zero_division = true;
      return 0.0;
    }
    return num / den;
  };

  r.recall = ratio(tp, tp + fn);
  r.precision = ratio(tp, tp + fp);
  r.f1 = ratio(2.0 * r.precision * r.recall, r.precision + r.recall);
  const double specificity = ratio(tn, tn + fp);
  r.g_mean = std::sqrt(r.recall * specificity);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) {
    r.zero_division = true;
    r.mcc = 0.0;
  } else {
    r.mcc = (tp * tn - fp * fn) / std::sqrt(denom);
  }
  r.accuracy = ratio(tp + tn, tp + fp + fn + tn);
  return r;
}

AggregateReport aggregate(const std::vector<MetricsReport>& runs) {
  if (runs.empty()) throw ConfigError("aggregate: no runs");
  AggregateReport agg;
  agg.runs = runs.size();

  auto cell = [&runs](double MetricsReport::*field) {
    double sum = 0.0;
    for (const auto& r : runs) sum += r.*field;
    const double mean = sum / static_cast<double>(runs.size());
    double ss = 0.0;
    for (const auto& r : runs) {
      const double d = r.*field - mean;
      ss += d * d;
    }
    AggregateCell c;
    c.mean = mean;
    c.stddev = runs.size() > 1
                   ? std::sqrt(ss / static_cast<double>(runs.size() - 1))
                   : 0.0;
    return c;
  };

  agg.recall = cell(&MetricsReport::recall);
  agg.precision = cell(&MetricsReport::precision);
  agg.f1 = cell(&MetricsReport::f1);
  agg.g_mean = cell(&MetricsReport::g_mean);
  agg.mcc = cell(&MetricsReport::mcc);
  agg.accuracy = cell(&MetricsReport::accuracy);
  return agg;
}

std::string format_cell(const AggregateCell& cell) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f(%.2f)", cell.mean * 100.0,
                cell.stddev * 100.0);
  return buf;
}

}  // namespace imblab
