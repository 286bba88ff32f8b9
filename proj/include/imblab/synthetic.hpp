#pragma once

#include <cstdint>

#include "imblab/dataset.hpp"

namespace imblab {

/// Two Gaussian blobs with a configurable imbalance ratio. The majority
/// (negative) blob sits at the origin; the minority (positive) blob
/// center is `separation` away in Euclidean distance. Lower separation
/// means more class overlap.
struct BlobConfig {
  std::size_t n_total = 2000;
  double imbalance_ratio = 20.0;  // majority / minority
  int dim = 4;
  double separation = 2.5;
  double cluster_std = 1.0;
  std::uint64_t seed = 0;
};

Dataset make_blobs(const BlobConfig& config);

}  // namespace imblab
