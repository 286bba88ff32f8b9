#include "imblab/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stack>

#include "imblab/errors.hpp"
#include "imblab/rng.hpp"

namespace imblab {

std::vector<Label> Classifier::predict_all(const SpMat& rows) const {
  std::vector<Label> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    out.push_back(predict(sparse_row(rows, i)));
  }
  return out;
}

Eigen::MatrixX2d Classifier::support_all(const SpMat& rows) const {
  Eigen::MatrixX2d out(rows.rows(), 2);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    out.row(i) = support(sparse_row(rows, i)).transpose();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decision tree

namespace {

double gini(const double counts[2]) {
  const double n = counts[0] + counts[1];
  if (n == 0.0) return 0.0;
  const double p0 = counts[0] / n;
  const double p1 = counts[1] / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = -std::numeric_limits<double>::infinity();
};

struct PendingNode {
  std::int32_t index;
  std::vector<Eigen::Index> rows;
  int depth;
};

}  // namespace

std::unique_ptr<DecisionTree> DecisionTree::train(const Dataset& data,
                                                  const TreeConfig& config) {
  if (data.rows() == 0) throw ConfigError("decision tree: empty training set");
  if (config.min_samples_split < 2) {
    throw ConfigError("decision tree: min_samples_split must be >= 2");
  }

  // column-major copy for per-feature scans
  const Eigen::SparseMatrix<double> columns(data.features);
  const Eigen::Index n_features = data.cols();
  Rng rng(config.seed);

  auto tree = std::make_unique<DecisionTree>();
  auto& nodes = tree->nodes_;

  std::vector<Eigen::Index> all_rows(static_cast<std::size_t>(data.rows()));
  for (std::size_t i = 0; i < all_rows.size(); ++i) {
    all_rows[i] = static_cast<Eigen::Index>(i);
  }

  nodes.emplace_back();
  std::stack<PendingNode> pending;
  pending.push({0, std::move(all_rows), 0});

  std::vector<double> values(static_cast<std::size_t>(data.rows()));
  std::vector<char> in_node(static_cast<std::size_t>(data.rows()), 0);

  while (!pending.empty()) {
    PendingNode work = std::move(pending.top());
    pending.pop();
    TreeNode& node = nodes[static_cast<std::size_t>(work.index)];

    double counts[2] = {0.0, 0.0};
    for (Eigen::Index r : work.rows) {
      counts[label_index(data.labels[static_cast<std::size_t>(r)])] += 1.0;
    }
    node.counts[0] = counts[0];
    node.counts[1] = counts[1];

    const bool pure = counts[0] == 0.0 || counts[1] == 0.0;
    const bool too_small =
        work.rows.size() < static_cast<std::size_t>(config.min_samples_split);
    const bool at_depth = config.max_depth && work.depth >= *config.max_depth;
    if (pure || too_small || at_depth) continue;  // leaf

    // candidate feature set: all features, or a random subset per node
    std::vector<int> candidates;
    if (config.feature_subsample &&
        *config.feature_subsample < static_cast<int>(n_features)) {
      const int m = std::max(1, *config.feature_subsample);
      std::vector<int> all(static_cast<std::size_t>(n_features));
      for (std::size_t f = 0; f < all.size(); ++f) all[f] = static_cast<int>(f);
      for (int j = 0; j < m; ++j) {
        const std::size_t pick =
            static_cast<std::size_t>(j) +
            rng.uniform_index(all.size() - static_cast<std::size_t>(j));
        std::swap(all[static_cast<std::size_t>(j)], all[pick]);
      }
      candidates.assign(all.begin(), all.begin() + m);
      std::sort(candidates.begin(), candidates.end());
    } else {
      candidates.resize(static_cast<std::size_t>(n_features));
      for (std::size_t f = 0; f < candidates.size(); ++f) {
        candidates[f] = static_cast<int>(f);
      }
    }

    for (Eigen::Index r : work.rows) in_node[static_cast<std::size_t>(r)] = 1;
    const double n_total = counts[0] + counts[1];
    const double parent_gini = gini(counts);

    SplitChoice best;
    std::vector<std::pair<double, Label>> ordered;
    for (int f : candidates) {
      // gather this feature's value for every row in the node
      for (Eigen::Index r : work.rows) values[static_cast<std::size_t>(r)] = 0.0;
      for (Eigen::SparseMatrix<double>::InnerIterator it(columns, f); it;
           ++it) {
        if (in_node[static_cast<std::size_t>(it.row())]) {
          values[static_cast<std::size_t>(it.row())] = it.value();
        }
      }
      ordered.clear();
      for (Eigen::Index r : work.rows) {
        ordered.emplace_back(values[static_cast<std::size_t>(r)],
                             data.labels[static_cast<std::size_t>(r)]);
      }
      std::sort(ordered.begin(), ordered.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      double left[2] = {0.0, 0.0};
      for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
        left[label_index(ordered[i].second)] += 1.0;
        if (ordered[i].first == ordered[i + 1].first) continue;
        const double threshold =
            ordered[i].first + (ordered[i + 1].first - ordered[i].first) / 2.0;
        const double right[2] = {counts[0] - left[0], counts[1] - left[1]};
        const double n_left = left[0] + left[1];
        const double n_right = right[0] + right[1];
        const double gain = parent_gini - (n_left / n_total) * gini(left) -
                            (n_right / n_total) * gini(right);
        // strictly-greater keeps the lowest feature/threshold on exact ties
        if (gain > best.gain) {
          best.found = true;
          best.feature = f;
          best.threshold = threshold;
          best.gain = gain;
        }
      }
    }
    for (Eigen::Index r : work.rows) in_node[static_cast<std::size_t>(r)] = 0;

    if (!best.found) continue;  // no usable split in the candidate set

    // re-gather the chosen feature to partition the rows
    std::vector<Eigen::Index> left_rows, right_rows;
    for (Eigen::Index r : work.rows) {
      values[static_cast<std::size_t>(r)] = 0.0;
      in_node[static_cast<std::size_t>(r)] = 1;
    }
    for (Eigen::SparseMatrix<double>::InnerIterator it(columns, best.feature);
         it; ++it) {
      if (in_node[static_cast<std::size_t>(it.row())]) {
        values[static_cast<std::size_t>(it.row())] = it.value();
      }
    }
    for (Eigen::Index r : work.rows) {
      in_node[static_cast<std::size_t>(r)] = 0;
      (values[static_cast<std::size_t>(r)] <= best.threshold ? left_rows
                                                             : right_rows)
          .push_back(r);
    }

    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = static_cast<std::int32_t>(nodes.size());
    node.right = node.left + 1;
    nodes.emplace_back();
    nodes.emplace_back();
    const int depth = work.depth + 1;
    const std::int32_t left_index = nodes[static_cast<std::size_t>(work.index)].left;
    const std::int32_t right_index = nodes[static_cast<std::size_t>(work.index)].right;
    pending.push({right_index, std::move(right_rows), depth});
    pending.push({left_index, std::move(left_rows), depth});
  }
  return tree;
}

Eigen::Vector2d DecisionTree::support(const SpVec& x) const {
  const TreeNode* node = &nodes_[0];
  while (!node->is_leaf()) {
    const double v = x.coeff(node->feature);
    node = &nodes_[static_cast<std::size_t>(v <= node->threshold ? node->left
                                                                 : node->right)];
  }
  const double total = node->counts[0] + node->counts[1];
  return Eigen::Vector2d(node->counts[0] / total, node->counts[1] / total);
}

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const TreeNode& n : nodes_) {
    arr.push_back({n.feature, n.threshold, n.left, n.right, n.counts[0],
                   n.counts[1]});
  }
  return {{"nodes", std::move(arr)}};
}

std::unique_ptr<DecisionTree> DecisionTree::from_json(const nlohmann::json& j) {
  auto tree = std::make_unique<DecisionTree>();
  for (const auto& row : j.at("nodes")) {
    TreeNode n;
    n.feature = row.at(0).get<std::int32_t>();
    n.threshold = row.at(1).get<double>();
    n.left = row.at(2).get<std::int32_t>();
    n.right = row.at(3).get<std::int32_t>();
    n.counts[0] = row.at(4).get<double>();
    n.counts[1] = row.at(5).get<double>();
    tree->nodes_.push_back(n);
  }
  if (tree->nodes_.empty()) throw DataError("decision tree artifact has no nodes");
  return tree;
}

// ---------------------------------------------------------------------------
// k-nearest neighbors

KnnClassifier::KnnClassifier(Dataset train, int k)
    : train_(std::move(train)), index_(train_.features), k_(k) {
  if (train_.rows() == 0) throw ConfigError("knn: empty training set");
  if (k < 1) throw ConfigError("knn: k must be >= 1");
  k_ = std::min<int>(k, static_cast<int>(train_.rows()));
}

Eigen::Vector2d KnnClassifier::support(const SpVec& x) const {
  const auto neighbors = index_.query(x, k_);
  double counts[2] = {0.0, 0.0};
  for (const auto& [dist, row] : neighbors) {
    counts[label_index(train_.labels[static_cast<std::size_t>(row)])] += 1.0;
  }
  const double total = counts[0] + counts[1];
  return Eigen::Vector2d(counts[0] / total, counts[1] / total);
}

nlohmann::json KnnClassifier::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < train_.rows(); ++i) {
    for (SpMat::InnerIterator it(train_.features, i); it; ++it) {
      entries.push_back({i, it.col(), it.value()});
    }
  }
  nlohmann::json labels = nlohmann::json::array();
  for (Label l : train_.labels) labels.push_back(label_index(l));
  return {{"k", k_},
          {"rows", train_.rows()},
          {"cols", train_.cols()},
          {"labels", std::move(labels)},
          {"entries", std::move(entries)}};
}

std::unique_ptr<KnnClassifier> KnnClassifier::from_json(
    const nlohmann::json& j) {
  Dataset train;
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& e : j.at("entries")) {
    triplets.emplace_back(e.at(0).get<Eigen::Index>(),
                          e.at(1).get<Eigen::Index>(), e.at(2).get<double>());
  }
  train.features.resize(rows, cols);
  train.features.setFromTriplets(triplets.begin(), triplets.end());
  train.features.makeCompressed();
  for (const auto& l : j.at("labels")) {
    train.labels.push_back(label_from_index(l.get<int>()));
  }
  return std::make_unique<KnnClassifier>(std::move(train), j.at("k").get<int>());
}

// ---------------------------------------------------------------------------
// Bernoulli naive Bayes

BernoulliNb::BernoulliNb(const Dataset& data, double alpha) : alpha_(alpha) {
  if (data.rows() == 0) throw ConfigError("naive bayes: empty training set");
  if (alpha <= 0.0) throw ConfigError("naive bayes: alpha must be > 0");

  const auto counts = data.class_counts();
  const double total = static_cast<double>(counts[0] + counts[1]);
  const Eigen::Index d = data.cols();

  Eigen::MatrixX2d ones = Eigen::MatrixX2d::Zero(d, 2);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const int c = label_index(data.labels[static_cast<std::size_t>(i)]);
    for (SpMat::InnerIterator it(data.features, i); it; ++it) {
      if (it.value() > 0.5) ones(it.col(), c) += 1.0;
    }
  }

  log_prior_ = Eigen::Vector2d(
      std::log(static_cast<double>(counts[0]) / total),
      std::log(static_cast<double>(counts[1]) / total));
  log_p_.resize(d, 2);
  log_not_p_.resize(d, 2);
  for (int c = 0; c < 2; ++c) {
    const double denom = static_cast<double>(counts[c]) + 2.0 * alpha;
    for (Eigen::Index f = 0; f < d; ++f) {
      const double p = (ones(f, c) + alpha) / denom;
      log_p_(f, c) = std::log(p);
      log_not_p_(f, c) = std::log(1.0 - p);
    }
  }
  all_zero_base_ = log_not_p_.colwise().sum().transpose();
}

Eigen::Vector2d BernoulliNb::support(const SpVec& x) const {
  Eigen::Vector2d lp = log_prior_ + all_zero_base_;
  for (SpVec::InnerIterator it(x); it; ++it) {
    if (it.value() > 0.5 && it.index() < log_p_.rows()) {
      lp(0) += log_p_(it.index(), 0) - log_not_p_(it.index(), 0);
      lp(1) += log_p_(it.index(), 1) - log_not_p_(it.index(), 1);
    }
  }
  const double peak = lp.maxCoeff();
  const Eigen::Vector2d s = (lp.array() - peak).exp().matrix();
  return s / s.sum();
}

nlohmann::json BernoulliNb::to_json() const {
  auto column = [](const auto& m, int c) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) arr.push_back(m(i, c));
    return arr;
  };
  return {{"alpha", alpha_},
          {"log_prior", {log_prior_(0), log_prior_(1)}},
          {"log_p", {column(log_p_, 0), column(log_p_, 1)}},
          {"log_not_p", {column(log_not_p_, 0), column(log_not_p_, 1)}}};
}

std::unique_ptr<BernoulliNb> BernoulliNb::from_json(const nlohmann::json& j) {
  std::unique_ptr<BernoulliNb> nb(new BernoulliNb());
  nb->alpha_ = j.at("alpha").get<double>();
  nb->log_prior_ = Eigen::Vector2d(j.at("log_prior").at(0).get<double>(),
                                   j.at("log_prior").at(1).get<double>());
  const auto& lp = j.at("log_p");
  const auto& lnp = j.at("log_not_p");
  const Eigen::Index d = static_cast<Eigen::Index>(lp.at(0).size());
  nb->log_p_.resize(d, 2);
  nb->log_not_p_.resize(d, 2);
  for (int c = 0; c < 2; ++c) {
    for (Eigen::Index f = 0; f < d; ++f) {
      nb->log_p_(f, c) = lp.at(c).at(f).get<double>();
      nb->log_not_p_(f, c) = lnp.at(c).at(f).get<double>();
    }
  }
  nb->all_zero_base_ = nb->log_not_p_.colwise().sum().transpose();
  return nb;
}

std::unique_ptr<Classifier> train_decision_tree(const Dataset& data,
                                                const TreeConfig& config) {
  return DecisionTree::train(data, config);
}

std::unique_ptr<Classifier> train_knn(const Dataset& data, int k) {
  return std::make_unique<KnnClassifier>(data, k);
}

std::unique_ptr<Classifier> train_bernoulli_nb(const Dataset& data,
                                               double alpha) {
  return std::make_unique<BernoulliNb>(data, alpha);
}

}  // namespace imblab
