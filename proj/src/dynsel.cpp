#include "imblab/dynsel.hpp"

#include <algorithm>
#include <cmath>

#include "imblab/errors.hpp"

namespace imblab {

std::pair<Dataset, Dataset> dsel_split(const Dataset& train,
                                       double dsel_fraction,
                                       std::uint64_t seed) {
  const auto counts = train.class_counts();
  if (counts[0] < 2 || counts[1] < 2) {
    throw ConfigError("dsel_split: need at least two rows of each class");
  }
  SplitPair split = stratified_split(train, dsel_fraction, seed);
  return {std::move(split.train), std::move(split.test)};
}

Dsel build_dsel(Dataset dsel_data, const ClassifierPool& pool) {
  if (pool.members.empty()) throw ConfigError("build_dsel: empty pool");
  if (dsel_data.rows() == 0) throw ConfigError("build_dsel: empty DSEL");

  const Eigen::Index rows = dsel_data.rows();
  const int n = pool.n();
  Eigen::MatrixXd profiles(rows, 2 * n);
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> predictions(
      rows, n);

  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixX2d s = pool.members[static_cast<std::size_t>(i)]
                                   ->support_all(dsel_data.features);
    profiles.col(2 * i) = s.col(0);
    profiles.col(2 * i + 1) = s.col(1);
    for (Eigen::Index r = 0; r < rows; ++r) {
      predictions(r, i) = s(r, 1) >= s(r, 0) ? 1 : 0;
    }
  }

  NeighborIndex features_nn(dsel_data.features);
  NeighborIndex profiles_nn(profiles);
  return Dsel{std::move(dsel_data), std::move(profiles),
              std::move(predictions), std::move(features_nn),
              std::move(profiles_nn)};
}

RegionOfCompetence region_of_competence(const Dsel& dsel, const SpVec& xq,
                                        int k) {
  const auto neighbors = dsel.features_nn.query(xq, k);
  RegionOfCompetence region;
  region.indices.reserve(neighbors.size());
  region.distances.reserve(neighbors.size());
  for (const auto& [d2, idx] : neighbors) {
    region.indices.push_back(idx);
    region.distances.push_back(std::sqrt(d2));
  }
  return region;
}

namespace {

int truth_index(const Dsel& dsel, Eigen::Index row) {
  return label_index(dsel.data.labels[static_cast<std::size_t>(row)]);
}

/// Correct-count of each member over the given DSEL rows.
std::vector<int> region_correct_counts(const ClassifierPool& pool,
                                       const Dsel& dsel,
                                       const std::vector<Eigen::Index>& rows) {
  std::vector<int> counts(pool.members.size(), 0);
  for (Eigen::Index r : rows) {
    const int truth = truth_index(dsel, r);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (dsel.predictions(r, static_cast<int>(i)) == truth) ++counts[i];
    }
  }
  return counts;
}

Eigen::VectorXd output_profile(const ClassifierPool& pool, const SpVec& xq) {
  Eigen::VectorXd profile(2 * pool.n());
  for (int i = 0; i < pool.n(); ++i) {
    const Eigen::Vector2d s =
        pool.members[static_cast<std::size_t>(i)]->support(xq);
    profile(2 * i) = s(0);
    profile(2 * i + 1) = s(1);
  }
  return profile;
}

}  // namespace

Label ola_select(const ClassifierPool& pool, const Dsel& dsel, const SpVec& xq,
                 int k) {
  if (pool.members.empty()) throw ConfigError("ola_select: empty pool");
  const RegionOfCompetence region = region_of_competence(dsel, xq, k);
  const auto counts = region_correct_counts(pool, dsel, region.indices);
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[best]) best = i;
  }
  return pool.members[best]->predict(xq);
}

Label knop_select(const ClassifierPool& pool, const Dsel& dsel,
                  const SpVec& xq, int k) {
  if (pool.members.empty()) throw ConfigError("knop_select: empty pool");
  const Eigen::VectorXd profile = output_profile(pool, xq);
  const auto neighbors = dsel.profiles_nn.query(profile, k);

  std::vector<Eigen::Index> rows;
  rows.reserve(neighbors.size());
  for (const auto& [d2, idx] : neighbors) rows.push_back(idx);
  const auto counts = region_correct_counts(pool, dsel, rows);

  bool any = false;
  std::vector<double> weights(counts.size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    weights[i] = static_cast<double>(counts[i]);
    any = any || counts[i] > 0;
  }
  if (!any) return majority_vote(pool, xq);  // no competent member found

  std::vector<Label> votes;
  votes.reserve(pool.members.size());
  for (const auto& member : pool.members) votes.push_back(member->predict(xq));
  return weighted_plurality(votes, &weights);
}

namespace {

Eigen::VectorXd meta_features(const Dsel& dsel, int member,
                              const std::vector<Eigen::Index>& region,
                              const std::vector<Eigen::Index>& profile_region,
                              const Eigen::Vector2d& member_support_on_query,
                              int K, int Kp) {
  Eigen::VectorXd v(meta_feature_length(K, Kp));
  int pos = 0;
  double correct_sum = 0.0;
  // f1: correctness over the feature-space region (short regions pad with 0)
  for (int j = 0; j < K; ++j) {
    double bit = 0.0;
    if (j < static_cast<int>(region.size())) {
      const Eigen::Index r = region[static_cast<std::size_t>(j)];
      bit = dsel.predictions(r, member) == truth_index(dsel, r) ? 1.0 : 0.0;
    }
    correct_sum += bit;
    v(pos++) = bit;
  }
  // f2: member's posterior for the true class of each region row
  for (int j = 0; j < K; ++j) {
    double posterior = 0.0;
    if (j < static_cast<int>(region.size())) {
      const Eigen::Index r = region[static_cast<std::size_t>(j)];
      posterior = dsel.profiles(r, 2 * member + truth_index(dsel, r));
    }
    v(pos++) = posterior;
  }
  // f3: local accuracy
  v(pos++) = correct_sum / static_cast<double>(K);
  // f4: correctness over the profile-space region
  for (int j = 0; j < Kp; ++j) {
    double bit = 0.0;
    if (j < static_cast<int>(profile_region.size())) {
      const Eigen::Index r = profile_region[static_cast<std::size_t>(j)];
      bit = dsel.predictions(r, member) == truth_index(dsel, r) ? 1.0 : 0.0;
    }
    v(pos++) = bit;
  }
  // f5: confidence on the query = support of the member's predicted class
  v(pos++) = member_support_on_query.maxCoeff();
  return v;
}

}  // namespace

MetaDesModel metades_train(const ClassifierPool& pool, const Dsel& dsel,
                           const MetaDesConfig& config) {
  if (pool.members.empty()) throw ConfigError("metades_train: empty pool");
  if (config.K < 1 || config.Kp < 1) {
    throw ConfigError("metades_train: K and Kp must be >= 1");
  }
  if (dsel.rows() <= std::max(config.K, config.Kp)) {
    throw ConfigError("metades_train: DSEL smaller than the neighborhoods");
  }

  const Eigen::Index rows = dsel.rows();
  const int n = pool.n();

  // pool consensus per DSEL row: fraction agreeing with the plurality
  std::vector<double> consensus(static_cast<std::size_t>(rows), 0.0);
  for (Eigen::Index r = 0; r < rows; ++r) {
    int tally[2] = {0, 0};
    for (int i = 0; i < n; ++i) ++tally[dsel.predictions(r, i)];
    consensus[static_cast<std::size_t>(r)] =
        static_cast<double>(std::max(tally[0], tally[1])) /
        static_cast<double>(n);
  }

  // per-row neighborhoods, excluding the row itself
  std::vector<std::vector<Eigen::Index>> regions(
      static_cast<std::size_t>(rows));
  std::vector<std::vector<Eigen::Index>> profile_regions(
      static_cast<std::size_t>(rows));
  auto region_of = [&](Eigen::Index r) -> const std::vector<Eigen::Index>& {
    auto& cached = regions[static_cast<std::size_t>(r)];
    if (cached.empty()) {
      for (const auto& [d2, idx] : dsel.features_nn.query_row(r, config.K)) {
        cached.push_back(idx);
      }
    }
    return cached;
  };
  auto profile_region_of =
      [&](Eigen::Index r) -> const std::vector<Eigen::Index>& {
    auto& cached = profile_regions[static_cast<std::size_t>(r)];
    if (cached.empty()) {
      const Eigen::VectorXd q = dsel.profiles.row(r).transpose();
      for (const auto& [d2, idx] : dsel.profiles_nn.query(q, config.Kp, r)) {
        cached.push_back(idx);
      }
    }
    return cached;
  };

  // relax the admission threshold until both meta-classes are populated;
  // one step past 1.0 admits every row
  double threshold = config.consensus_threshold;
  std::vector<Eigen::VectorXd> samples;
  std::vector<Label> meta_labels;
  std::size_t class_count[2] = {0, 0};
  for (;;) {
    samples.clear();
    meta_labels.clear();
    class_count[0] = class_count[1] = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!(consensus[static_cast<std::size_t>(r)] < threshold)) continue;
      const auto& region = region_of(r);
      const auto& profile_region = profile_region_of(r);
      const int truth = truth_index(dsel, r);
      for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d support_on_row(dsel.profiles(r, 2 * i),
                                             dsel.profiles(r, 2 * i + 1));
        samples.push_back(meta_features(dsel, i, region, profile_region,
                                        support_on_row, config.K, config.Kp));
        const bool correct = dsel.predictions(r, i) == truth;
        meta_labels.push_back(correct ? Label::positive : Label::negative);
        ++class_count[correct ? 1 : 0];
      }
    }
    if (class_count[0] >= 2 && class_count[1] >= 2) break;
    if (threshold > 1.0) break;  // already admitting everything
    threshold += 0.1;
  }
  if (class_count[0] == 0 || class_count[1] == 0) {
    throw ConfigError(
        "metades_train: meta-training is degenerate (every member is "
        "uniformly correct or uniformly wrong on DSEL)");
  }

  Eigen::MatrixXd features(static_cast<Eigen::Index>(samples.size()),
                           meta_feature_length(config.K, config.Kp));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    features.row(static_cast<Eigen::Index>(s)) = samples[s].transpose();
  }
  Dataset meta_set = dataset_from_dense(features, meta_labels);
  return MetaDesModel(train_bernoulli_nb(meta_set, config.nb_alpha), config,
                      threshold);
}

double MetaDesModel::competence(const Eigen::VectorXd& features) const {
  return meta_->support(features.sparseView())(1);
}

Label metades_select(const MetaDesModel& model, const ClassifierPool& pool,
                     const Dsel& dsel, const SpVec& xq) {
  const MetaDesConfig& cfg = model.config();
  const RegionOfCompetence roc = region_of_competence(dsel, xq, cfg.K);

  const Eigen::VectorXd profile = output_profile(pool, xq);
  const auto profile_neighbors = dsel.profiles_nn.query(profile, cfg.Kp);
  std::vector<Eigen::Index> profile_region;
  profile_region.reserve(profile_neighbors.size());
  for (const auto& [d2, idx] : profile_neighbors) profile_region.push_back(idx);

  std::vector<Label> votes;
  std::vector<Label> selected;
  for (int i = 0; i < pool.n(); ++i) {
    const Eigen::Vector2d support(profile(2 * i), profile(2 * i + 1));
    const Eigen::VectorXd mf = meta_features(
        dsel, i, roc.indices, profile_region, support, cfg.K, cfg.Kp);
    const Label vote =
        support(1) >= support(0) ? Label::positive : Label::negative;
    votes.push_back(vote);
    if (model.competence(mf) >= cfg.selection_threshold) {
      selected.push_back(vote);
    }
  }
  return weighted_plurality(selected.empty() ? votes : selected);
}

}  // namespace imblab
