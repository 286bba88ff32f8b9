#include "imblab/balancing.hpp"

#include <algorithm>
#include <string>

#include "imblab/errors.hpp"
#include "imblab/neighbors.hpp"
#include "imblab/rng.hpp"

namespace imblab {

BootstrapSample bootstrap(const Dataset& data, std::uint64_t seed) {
  if (data.rows() == 0) throw ConfigError("bootstrap: empty dataset");
  Rng rng(seed);
  BootstrapSample sample;
  sample.seed = seed;
  const std::size_t n = static_cast<std::size_t>(data.rows());
  sample.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    sample.rows.push_back(static_cast<Eigen::Index>(rng.uniform_index(n)));
  }
  return sample;
}

Dataset materialize(const Dataset& source, const BootstrapSample& sample) {
  return take_rows(source, sample.rows);
}

Dataset smote(const Dataset& data, const SmoteConfig& config) {
  if (config.k_neighbors < 1) throw ConfigError("smote: k_neighbors must be >= 1");
  const auto counts = data.class_counts();
  if (counts[0] == counts[1]) return data;  // already balanced

  const Label minority_label =
      counts[1] < counts[0] ? Label::positive : Label::negative;
  const std::size_t minority = std::min(counts[0], counts[1]);
  const std::size_t majority = std::max(counts[0], counts[1]);
  if (minority == 0) {
    throw ConfigError("smote: no minority instances to oversample");
  }

  std::vector<Eigen::Index> minority_rows;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    if (data.labels[static_cast<std::size_t>(i)] == minority_label) {
      minority_rows.push_back(i);
    }
  }

  Rng rng(config.seed);
  const std::size_t n_synthetic = majority - minority;
  std::vector<SpVec> synthetic;
  synthetic.reserve(n_synthetic);

  if (minority == 1) {
    // random-oversampling fallback: duplicate the lone minority row
    const SpVec only = sparse_row(data.features, minority_rows[0]);
    for (std::size_t t = 0; t < n_synthetic; ++t) synthetic.push_back(only);
  } else {
    const int k = std::min<int>(config.k_neighbors,
                                static_cast<int>(minority - 1));
    Dataset minority_set = take_rows(data, minority_rows);
    NeighborIndex index(minority_set.features);
    // Neighbor candidates skip zero-distance rows, so bootstrap-duplicated
    // points interpolate toward a distinct neighbor instead of copying
    // themselves. Lists are query-order stable; compute once per base row.
    std::vector<std::vector<Neighbor>> neighbor_cache(minority);
    std::vector<char> cached(minority, 0);
    auto neighbors_of = [&](std::size_t base) -> const std::vector<Neighbor>& {
      if (!cached[base]) {
        cached[base] = 1;
        auto ranked = index.query_row(static_cast<Eigen::Index>(base),
                                      static_cast<int>(minority - 1), true);
        auto& kept = neighbor_cache[base];
        for (const auto& neighbor : ranked) {
          if (neighbor.first > 0.0) kept.push_back(neighbor);
          if (static_cast<int>(kept.size()) == k) break;
        }
      }
      return neighbor_cache[base];
    };
    for (std::size_t t = 0; t < n_synthetic; ++t) {
      const std::size_t base = rng.uniform_index(minority);
      const auto& neighbors = neighbors_of(base);
      const SpVec x = sparse_row(minority_set.features,
                                 static_cast<Eigen::Index>(base));
      if (neighbors.empty()) {
        // every minority row equals this one; duplication is all that's left
        synthetic.push_back(x);
        continue;
      }
      const std::size_t pick = rng.uniform_index(neighbors.size());
      const double g =
          config.g_override ? *config.g_override : rng.uniform_real();
      const SpVec x_nn =
          sparse_row(minority_set.features, neighbors[pick].second);
      SpVec synth = (x + g * (x_nn - x)).pruned();
      synthetic.push_back(std::move(synth));
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (SpMat::InnerIterator it(data.features, i); it; ++it) {
      triplets.emplace_back(i, it.col(), it.value());
    }
  }
  Eigen::Index r = data.rows();
  for (const SpVec& row : synthetic) {
    for (SpVec::InnerIterator it(row); it; ++it) {
      triplets.emplace_back(r, it.index(), it.value());
    }
    ++r;
  }

  Dataset out;
  out.features.resize(r, data.cols());
  out.features.setFromTriplets(triplets.begin(), triplets.end());
  out.features.makeCompressed();
  out.labels = data.labels;
  out.labels.insert(out.labels.end(), n_synthetic, minority_label);
  out.vocabulary = data.vocabulary;
  return out;
}

std::vector<BootstrapSample> bbb_generate(const Dataset& train, int n,
                                          const SmoteConfig& smote_config,
                                          std::uint64_t seed) {
  if (n < 1) throw ConfigError("bbb_generate: pool size must be >= 1");
  const auto counts = train.class_counts();
  if (counts[0] == 0 || counts[1] == 0) {
    throw ConfigError("bbb_generate: training set must contain both classes");
  }

  std::vector<BootstrapSample> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    BootstrapSample sample;
    bool ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      // attempt 0 uses the documented seed + i derivation; retries step far
      // away so they cannot collide with another slot's first draw
      const std::uint64_t draw_seed =
          seed + static_cast<std::uint64_t>(i) +
          static_cast<std::uint64_t>(attempt) * 1000003ull;
      sample = bootstrap(train, draw_seed);
      std::array<std::size_t, 2> drawn{0, 0};
      for (Eigen::Index row : sample.rows) {
        ++drawn[label_index(train.labels[static_cast<std::size_t>(row)])];
      }
      if (drawn[0] > 0 && drawn[1] > 0) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError("bbb_generate: bootstrap " + std::to_string(i) +
                        " drew a single class 100 times in a row");
    }
    SmoteConfig per_bootstrap = smote_config;
    per_bootstrap.seed = smote_config.seed + static_cast<std::uint64_t>(i);
    sample.balanced_view = smote(materialize(train, sample), per_bootstrap);
    samples.push_back(std::move(sample));
  }
  return samples;
}

Dataset whole_set_balance(const Dataset& train, const SmoteConfig& config) {
  return smote(train, config);
}

}  // namespace imblab
