#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "imblab/dataset.hpp"

namespace imblab {

/// One bootstrap draw: a multiset of source row indices, |rows| equal to
/// the source size, plus the balanced materialization when balancing ran.
struct BootstrapSample {
  std::vector<Eigen::Index> rows;
  std::uint64_t seed = 0;
  std::optional<Dataset> balanced_view;
};

struct SmoteConfig {
  int k_neighbors = 5;
  std::uint64_t seed = 0;
  /// When set, every synthetic row uses this interpolation factor instead
  /// of a uniform draw (deterministic geometry for tests/debugging).
  std::optional<double> g_override;
};

/// Uniform sampling with replacement, sample size == |data|.
BootstrapSample bootstrap(const Dataset& data, std::uint64_t seed);

/// Copy the sampled rows into a standalone dataset.
Dataset materialize(const Dataset& source, const BootstrapSample& sample);

/// SMOTE oversampling to exact class parity: appends synthetic minority
/// rows x + g*(x_nn - x) with g uniform in [0,1), x a random minority row
/// and x_nn one of its k nearest minority neighbors (Euclidean). Original
/// rows are never removed or modified. A lone minority row is duplicated;
/// k is clamped to minority_count - 1.
Dataset smote(const Dataset& data, const SmoteConfig& config);

/// Bootstrap-based balancing: n bootstraps with derived seeds (seed + i),
/// each balanced independently by smote. The source training set itself
/// is never balanced. A single-class bootstrap is redrawn with a stepped
/// seed, up to 100 attempts per slot.
std::vector<BootstrapSample> bbb_generate(const Dataset& train, int n,
                                          const SmoteConfig& smote_config,
                                          std::uint64_t seed);

/// Baseline: smote applied once to the whole training set.
Dataset whole_set_balance(const Dataset& train, const SmoteConfig& config);

}  // namespace imblab
