#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imblab/balancing.hpp"
#include "imblab/classifiers.hpp"
#include "imblab/dataset.hpp"

namespace imblab {

enum class BaseKind { tree, knn, nb };
enum class BalanceMode { none, bbb, whole_set };
enum class RankMetric { accuracy, g_mean };

const char* base_kind_name(BaseKind kind);
const char* balance_mode_name(BalanceMode mode);
BaseKind base_kind_from_name(const std::string& name);
BalanceMode balance_mode_from_name(const std::string& name);

struct MemberProvenance {
  std::uint64_t bootstrap_seed = 0;
  bool balanced = false;
};

/// An ordered pool of fitted base classifiers. Members are shared
/// immutable objects, so sub-pools (static selection) alias rather than
/// retrain.
struct ClassifierPool {
  std::vector<std::shared_ptr<const Classifier>> members;
  std::vector<MemberProvenance> provenance;
  BaseKind base_kind = BaseKind::tree;
  BalanceMode balance = BalanceMode::none;

  int n() const { return static_cast<int>(members.size()); }
};

struct PoolConfig {
  BaseKind base_kind = BaseKind::tree;
  int n = 100;
  BalanceMode balance = BalanceMode::none;
  SmoteConfig smote;
  std::uint64_t seed = 0;
  /// Random-forest mode for tree pools: candidate features per node.
  /// Values < 1 select round(sqrt(d)).
  std::optional<int> rf_feature_subsample;
  TreeConfig tree;
  int knn_k = 5;
  double nb_alpha = 1.0;
};

/// Train a pool of n members over bootstrap views of the training set.
/// balance=bbb balances each bootstrap independently; balance=whole_set
/// balances the training set once and bootstraps the result; balance=none
/// uses plain bootstraps. The caller's training set is never modified.
ClassifierPool build_pool(const Dataset& train, const PoolConfig& config);

/// Weighted plurality over label votes; exact ties resolve to positive.
Label weighted_plurality(const std::vector<Label>& votes,
                         const std::vector<double>* weights = nullptr);

/// Plurality of member predictions on one instance. weights, when given,
/// must be per-member and non-negative.
Label majority_vote(const ClassifierPool& pool, const SpVec& x,
                    const std::vector<double>* weights = nullptr);
std::vector<Label> majority_vote_all(const ClassifierPool& pool,
                                     const SpMat& rows);

/// Index of the member scoring highest on the validation set
/// (ties -> lowest member index).
std::size_t single_best_index(const ClassifierPool& pool,
                              const Dataset& validation,
                              RankMetric metric = RankMetric::accuracy);
const Classifier& single_best(const ClassifierPool& pool,
                              const Dataset& validation,
                              RankMetric metric = RankMetric::accuracy);

/// Sub-pool of the ceil(keep_fraction * n) members scoring highest on the
/// validation set (ties -> lower index), in original member order.
ClassifierPool static_selection(const ClassifierPool& pool,
                                const Dataset& validation,
                                double keep_fraction = 0.5,
                                RankMetric metric = RankMetric::accuracy);

/// A whole pool exposed through the single-classifier contract (support =
/// mean of member supports), so pools can themselves serve as members of
/// an outer pool.
class PoolClassifier final : public Classifier {
 public:
  explicit PoolClassifier(ClassifierPool pool);
  static std::unique_ptr<PoolClassifier> from_json(const nlohmann::json& j);

  Eigen::Vector2d support(const SpVec& x) const override;
  std::string kind() const override { return "pool"; }
  nlohmann::json to_json() const override;

  const ClassifierPool& pool() const { return pool_; }

 private:
  ClassifierPool pool_;
};

}  // namespace imblab
