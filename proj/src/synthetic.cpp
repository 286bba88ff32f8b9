#include "imblab/synthetic.hpp"

#include <cmath>

#include "imblab/errors.hpp"
#include "imblab/rng.hpp"

namespace imblab {

Dataset make_blobs(const BlobConfig& config) {
  if (config.n_total < 4) throw ConfigError("make_blobs: need at least 4 rows");
  if (config.dim < 1) throw ConfigError("make_blobs: dim must be >= 1");
  if (config.imbalance_ratio < 1.0) {
    throw ConfigError("make_blobs: imbalance_ratio must be >= 1");
  }
  if (config.cluster_std <= 0.0 || config.separation < 0.0) {
    throw ConfigError("make_blobs: bad spread parameters");
  }

  const std::size_t minority = static_cast<std::size_t>(std::lround(
      static_cast<double>(config.n_total) / (1.0 + config.imbalance_ratio)));
  if (minority < 2 || minority > config.n_total - 2) {
    throw ConfigError("make_blobs: imbalance leaves fewer than 2 rows in a class");
  }
  const std::size_t majority = config.n_total - minority;

  // minority center offset per axis, so the center distance is `separation`
  const double offset =
      config.separation / std::sqrt(static_cast<double>(config.dim));

  Rng rng(config.seed);
  Eigen::MatrixXd features(static_cast<Eigen::Index>(config.n_total),
                           config.dim);
  std::vector<Label> labels;
  labels.reserve(config.n_total);
  for (std::size_t i = 0; i < config.n_total; ++i) {
    const bool positive = i >= majority;
    for (int d = 0; d < config.dim; ++d) {
      features(static_cast<Eigen::Index>(i), d) =
          (positive ? offset : 0.0) + config.cluster_std * rng.normal();
    }
    labels.push_back(positive ? Label::positive : Label::negative);
  }
  return dataset_from_dense(features, std::move(labels));
}

}  // namespace imblab
