#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imblab/dataset.hpp"
#include "imblab/neighbors.hpp"
#include "json.hpp"

namespace imblab {

/// Uniform train/predict/support contract for base learners. Fitted
/// classifiers are immutable and safe to share across threads.
class Classifier {
 public:
  virtual ~Classifier() = default;

  /// Per-class scores [negative, positive], each in [0,1], summing to 1.
  virtual Eigen::Vector2d support(const SpVec& x) const = 0;

  virtual std::string kind() const = 0;

  /// Model payload for the artifact file (self-describing, versioned by
  /// the envelope written in model_io).
  virtual nlohmann::json to_json() const = 0;

  /// argmax of support; exact ties resolve to the positive class.
  Label predict(const SpVec& x) const {
    const Eigen::Vector2d s = support(x);
    return s(1) >= s(0) ? Label::positive : Label::negative;
  }

  std::vector<Label> predict_all(const SpMat& rows) const;
  Eigen::MatrixX2d support_all(const SpMat& rows) const;
};

struct TreeConfig {
  std::optional<int> max_depth;       // unlimited when unset
  int min_samples_split = 2;
  std::optional<int> feature_subsample;  // random-forest mode when set
  std::uint64_t seed = 0;             // used only by feature subsampling
};

/// One node of a CART tree. Internal nodes route value <= threshold to
/// the left child; leaves hold raw class counts.
struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double counts[2] = {0.0, 0.0};

  bool is_leaf() const { return feature < 0; }
};

class DecisionTree final : public Classifier {
 public:
  static std::unique_ptr<DecisionTree> train(const Dataset& data,
                                             const TreeConfig& config);
  static std::unique_ptr<DecisionTree> from_json(const nlohmann::json& j);

  Eigen::Vector2d support(const SpVec& x) const override;
  std::string kind() const override { return "decision_tree"; }
  nlohmann::json to_json() const override;

  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  std::vector<TreeNode> nodes_;
};

/// Lazy k-nearest-neighbor learner. Distance ties resolve to the lower
/// training-row index; support is the class fraction among the k
/// neighbors. k is clamped to the number of training rows.
class KnnClassifier final : public Classifier {
 public:
  KnnClassifier(Dataset train, int k);
  static std::unique_ptr<KnnClassifier> from_json(const nlohmann::json& j);

  Eigen::Vector2d support(const SpVec& x) const override;
  std::string kind() const override { return "knn"; }
  nlohmann::json to_json() const override;

  int k() const { return k_; }

 private:
  Dataset train_;
  NeighborIndex index_;
  int k_;
};

/// Bernoulli naive Bayes over features binarized at 0.5, with Laplace
/// smoothing alpha. Support is the normalized exponentiated log-posterior.
class BernoulliNb final : public Classifier {
 public:
  BernoulliNb(const Dataset& data, double alpha);
  static std::unique_ptr<BernoulliNb> from_json(const nlohmann::json& j);

  Eigen::Vector2d support(const SpVec& x) const override;
  std::string kind() const override { return "bernoulli_nb"; }
  nlohmann::json to_json() const override;

 private:
  BernoulliNb() = default;
  double alpha_ = 1.0;
  Eigen::Vector2d log_prior_;
  Eigen::MatrixX2d log_p_;      // d x 2, log P(f=1 | class)
  Eigen::MatrixX2d log_not_p_;  // d x 2, log P(f=0 | class)
  Eigen::Vector2d all_zero_base_;  // per-class sum of log_not_p
};

std::unique_ptr<Classifier> train_decision_tree(const Dataset& data,
                                                const TreeConfig& config = {});
std::unique_ptr<Classifier> train_knn(const Dataset& data, int k = 5);
std::unique_ptr<Classifier> train_bernoulli_nb(const Dataset& data,
                                               double alpha = 1.0);

}  // namespace imblab
