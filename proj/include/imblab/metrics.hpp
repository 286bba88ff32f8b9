#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "imblab/dataset.hpp"

namespace imblab {

/// Positive = malware convention: tp counts correctly detected positives.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

/// Ratios in [0,1] except mcc in [-1,1]. Any ratio whose denominator is
/// zero is reported as 0 and zero_division is set.
struct MetricsReport {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double g_mean = 0.0;
  double mcc = 0.0;
  double accuracy = 0.0;
  bool zero_division = false;
};

struct AggregateCell {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1); 0 for a single run
};

/// Cross-run mean/std per metric. Display scale is x100 with two
/// decimals, rendered by format_cell as "MM.MM(S.SS)".
struct AggregateReport {
  AggregateCell recall, precision, f1, g_mean, mcc, accuracy;
  std::size_t runs = 0;
};

ConfusionMatrix confusion(const std::vector<Label>& predicted,
                          const std::vector<Label>& truth);

MetricsReport compute_metrics(const ConfusionMatrix& cm);

AggregateReport aggregate(const std::vector<MetricsReport>& runs);

/// "86.69(0.68)" style rendering of a mean/std pair (x100 scale).
std::string format_cell(const AggregateCell& cell);

}  // namespace imblab
