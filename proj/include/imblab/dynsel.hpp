#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "imblab/classifiers.hpp"
#include "imblab/dataset.hpp"
#include "imblab/neighbors.hpp"
#include "imblab/pool.hpp"

namespace imblab {

/// Dynamic-selection dataset: held-out unbalanced rows with every pool
/// member's outputs precomputed. A row's output profile is the
/// concatenation of all member class supports (member i occupies columns
/// [2i, 2i+1]).
struct Dsel {
  Dataset data;
  Eigen::MatrixXd profiles;  // |data| x 2n
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>
      predictions;           // |data| x n, label indices
  NeighborIndex features_nn;
  NeighborIndex profiles_nn;

  Eigen::Index rows() const { return data.rows(); }
  int pool_size() const { return static_cast<int>(predictions.cols()); }
};

/// Stratified carve-out of dsel_fraction from the training set, done
/// before any pool is built so DSEL rows never enter a bootstrap.
/// Returns (pool_train, dsel_data).
std::pair<Dataset, Dataset> dsel_split(const Dataset& train,
                                       double dsel_fraction,
                                       std::uint64_t seed);

/// Precompute every member's predictions and supports over the DSEL rows.
Dsel build_dsel(Dataset dsel_data, const ClassifierPool& pool);

/// The query's local region: k nearest DSEL rows in feature space,
/// ordered by non-decreasing distance (ties -> lower index). k is clamped
/// to |DSEL|.
struct RegionOfCompetence {
  std::vector<Eigen::Index> indices;
  std::vector<double> distances;
};

RegionOfCompetence region_of_competence(const Dsel& dsel, const SpVec& xq,
                                        int k = 7);

/// Overall local accuracy: the single member most accurate over the
/// region of competence predicts (ties -> lower member index).
Label ola_select(const ClassifierPool& pool, const Dsel& dsel, const SpVec& xq,
                 int k = 7);

/// K-nearest output profiles: members vote weighted by how many of the
/// query's k profile-space neighbors they classify correctly; when no
/// member is competent the whole pool votes unweighted.
Label knop_select(const ClassifierPool& pool, const Dsel& dsel,
                  const SpVec& xq, int k = 7);

struct MetaDesConfig {
  int K = 7;                        // feature-space neighbors
  int Kp = 5;                       // profile-space neighbors
  double consensus_threshold = 0.7; // rows below this train the meta level
  double selection_threshold = 0.5; // competence cut at query time
  double nb_alpha = 1.0;
  std::uint64_t seed = 0;
};

constexpr int meta_feature_length(int K, int Kp) { return 2 * K + Kp + 2; }

/// Meta-classifier estimating per-member competence from local behavior.
/// Meta-feature layout: [K correctness bits over the feature-space region,
/// K posteriors of the true class, local accuracy, Kp correctness bits
/// over the profile-space region, confidence on the query] — 2K + Kp + 2
/// values, all in [0,1].
class MetaDesModel {
 public:
  MetaDesModel(std::unique_ptr<Classifier> meta, MetaDesConfig config,
               double used_threshold)
      : meta_(std::move(meta)),
        config_(config),
        used_threshold_(used_threshold) {}

  const MetaDesConfig& config() const { return config_; }
  /// Consensus threshold actually used after relaxation.
  double used_threshold() const { return used_threshold_; }

  /// Probability that a member producing this meta-feature vector
  /// classifies the query correctly.
  double competence(const Eigen::VectorXd& meta_features) const;

 private:
  std::unique_ptr<Classifier> meta_;
  MetaDesConfig config_;
  double used_threshold_;
};

/// Train the competence meta-classifier on DSEL rows with low pool
/// consensus. When the selected rows yield fewer than two meta-labels of
/// a class, the consensus threshold is relaxed in 0.1 steps (up to
/// admitting every row); training fails only if a meta-class is entirely
/// absent even then.
MetaDesModel metades_train(const ClassifierPool& pool, const Dsel& dsel,
                           const MetaDesConfig& config = {});

/// Members whose estimated competence reaches the selection threshold
/// vote unweighted; an empty selection falls back to the whole pool.
Label metades_select(const MetaDesModel& model, const ClassifierPool& pool,
                     const Dsel& dsel, const SpVec& xq);

}  // namespace imblab
