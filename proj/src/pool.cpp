#include "imblab/pool.hpp"

#include <algorithm>
#include <cmath>

#include "imblab/errors.hpp"
#include "imblab/metrics.hpp"

namespace imblab {

const char* base_kind_name(BaseKind kind) {
  switch (kind) {
    case BaseKind::tree: return "tree";
    case BaseKind::knn: return "knn";
    case BaseKind::nb: return "nb";
  }
  return "?";
}

const char* balance_mode_name(BalanceMode mode) {
  switch (mode) {
    case BalanceMode::none: return "none";
    case BalanceMode::bbb: return "bbb";
    case BalanceMode::whole_set: return "whole_set";
  }
  return "?";
}

BaseKind base_kind_from_name(const std::string& name) {
  if (name == "tree") return BaseKind::tree;
  if (name == "knn") return BaseKind::knn;
  if (name == "nb") return BaseKind::nb;
  throw ConfigError("unknown base kind: " + name);
}

BalanceMode balance_mode_from_name(const std::string& name) {
  if (name == "none") return BalanceMode::none;
  if (name == "bbb") return BalanceMode::bbb;
  if (name == "whole_set") return BalanceMode::whole_set;
  throw ConfigError("unknown balance mode: " + name);
}

namespace {

std::shared_ptr<const Classifier> train_member(const Dataset& view,
                                               const PoolConfig& config,
                                               int member) {
  switch (config.base_kind) {
    case BaseKind::tree: {
      TreeConfig tc = config.tree;
      if (config.rf_feature_subsample) {
        int m = *config.rf_feature_subsample;
        if (m < 1) {
          m = std::max(
              1, static_cast<int>(std::lround(std::sqrt(
                     static_cast<double>(view.cols())))));
        }
        tc.feature_subsample = m;
      }
      tc.seed = (config.seed ^ 0x9e3779b97f4a7c15ull) +
                static_cast<std::uint64_t>(member);
      return train_decision_tree(view, tc);
    }
    case BaseKind::knn:
      return train_knn(view, config.knn_k);
    case BaseKind::nb:
      return train_bernoulli_nb(view, config.nb_alpha);
  }
  throw ConfigError("unknown base kind");
}

double member_score(const Classifier& member, const Dataset& validation,
                    RankMetric metric) {
  const auto predictions = member.predict_all(validation.features);
  if (metric == RankMetric::accuracy) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      if (predictions[i] == validation.labels[i]) ++correct;
    }
    return static_cast<double>(correct) /
           static_cast<double>(predictions.size());
  }
  return compute_metrics(confusion(predictions, validation.labels)).g_mean;
}

}  // namespace

ClassifierPool build_pool(const Dataset& train, const PoolConfig& config) {
  if (config.n < 1) throw ConfigError("build_pool: pool size must be >= 1");
  const auto counts = train.class_counts();
  if (counts[0] == 0 || counts[1] == 0) {
    throw ConfigError("build_pool: training set must contain both classes");
  }
  if (config.rf_feature_subsample && config.base_kind != BaseKind::tree) {
    throw ConfigError("build_pool: feature subsampling needs tree members");
  }

  ClassifierPool pool;
  pool.base_kind = config.base_kind;
  pool.balance = config.balance;
  pool.members.reserve(static_cast<std::size_t>(config.n));
  pool.provenance.reserve(static_cast<std::size_t>(config.n));

  switch (config.balance) {
    case BalanceMode::bbb: {
      const auto samples =
          bbb_generate(train, config.n, config.smote, config.seed);
      for (int i = 0; i < config.n; ++i) {
        const auto& sample = samples[static_cast<std::size_t>(i)];
        pool.members.push_back(
            train_member(*sample.balanced_view, config, i));
        pool.provenance.push_back({sample.seed, true});
      }
      break;
    }
    case BalanceMode::whole_set: {
      const Dataset balanced = whole_set_balance(train, config.smote);
      for (int i = 0; i < config.n; ++i) {
        const auto sample =
            bootstrap(balanced, config.seed + static_cast<std::uint64_t>(i));
        pool.members.push_back(
            train_member(materialize(balanced, sample), config, i));
        pool.provenance.push_back({sample.seed, true});
      }
      break;
    }
    case BalanceMode::none: {
      for (int i = 0; i < config.n; ++i) {
        const auto sample =
            bootstrap(train, config.seed + static_cast<std::uint64_t>(i));
        pool.members.push_back(
            train_member(materialize(train, sample), config, i));
        pool.provenance.push_back({sample.seed, false});
      }
      break;
    }
  }
  return pool;
}

Label weighted_plurality(const std::vector<Label>& votes,
                         const std::vector<double>* weights) {
  if (votes.empty()) throw ConfigError("weighted_plurality: no votes");
  if (weights && weights->size() != votes.size()) {
    throw ConfigError("weighted_plurality: weight count != vote count");
  }
  double tally[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < votes.size(); ++i) {
    const double w = weights ? (*weights)[i] : 1.0;
    if (w < 0.0) throw ConfigError("weighted_plurality: negative weight");
    tally[label_index(votes[i])] += w;
  }
  return tally[1] >= tally[0] ? Label::positive : Label::negative;
}

Label majority_vote(const ClassifierPool& pool, const SpVec& x,
                    const std::vector<double>* weights) {
  std::vector<Label> votes;
  votes.reserve(pool.members.size());
  for (const auto& member : pool.members) votes.push_back(member->predict(x));
  return weighted_plurality(votes, weights);
}

std::vector<Label> majority_vote_all(const ClassifierPool& pool,
                                     const SpMat& rows) {
  std::vector<Label> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    out.push_back(majority_vote(pool, sparse_row(rows, i)));
  }
  return out;
}

std::size_t single_best_index(const ClassifierPool& pool,
                              const Dataset& validation, RankMetric metric) {
  if (pool.members.empty()) throw ConfigError("single_best: empty pool");
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < pool.members.size(); ++i) {
    const double score = member_score(*pool.members[i], validation, metric);
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

const Classifier& single_best(const ClassifierPool& pool,
                              const Dataset& validation, RankMetric metric) {
  return *pool.members[single_best_index(pool, validation, metric)];
}

PoolClassifier::PoolClassifier(ClassifierPool pool) : pool_(std::move(pool)) {
  if (pool_.members.empty()) throw ConfigError("PoolClassifier: empty pool");
}

Eigen::Vector2d PoolClassifier::support(const SpVec& x) const {
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (const auto& member : pool_.members) sum += member->support(x);
  return sum / static_cast<double>(pool_.members.size());
}

ClassifierPool static_selection(const ClassifierPool& pool,
                                const Dataset& validation,
                                double keep_fraction, RankMetric metric) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw ConfigError("static_selection: keep_fraction must be in (0,1]");
  }
  const std::size_t n = pool.members.size();
  const std::size_t keep = static_cast<std::size_t>(
      std::ceil(keep_fraction * static_cast<double>(n)));

  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ranked.emplace_back(member_score(*pool.members[i], validation, metric), i);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  std::vector<std::size_t> retained;
  for (std::size_t i = 0; i < keep; ++i) retained.push_back(ranked[i].second);
  std::sort(retained.begin(), retained.end());

  ClassifierPool sub;
  sub.base_kind = pool.base_kind;
  sub.balance = pool.balance;
  for (std::size_t i : retained) {
    sub.members.push_back(pool.members[i]);
    sub.provenance.push_back(pool.provenance[i]);
  }
  return sub;
}

}  // namespace imblab
