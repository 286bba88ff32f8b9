#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "imblab/dataset.hpp"

namespace imblab {

/// (squared Euclidean distance, row index)
using Neighbor = std::pair<double, Eigen::Index>;

double squared_distance(const SpMat& a, Eigen::Index i, const SpMat& b,
                        Eigen::Index j);
double squared_distance(const SpVec& q, const SpMat& m, Eigen::Index j);

SpVec sparse_row(const SpMat& m, Eigen::Index i);
Eigen::VectorXd dense_row(const SpMat& m, Eigen::Index i);

/// Brute-force exact k-nearest-neighbor search over the rows of a matrix.
/// Row storage is densified when the matrix is narrow, which is much
/// faster for the low-dimensional case; wide sparse data stays sparse.
/// Neighbor order is non-decreasing squared distance with ties broken by
/// lower row index.
class NeighborIndex {
 public:
  explicit NeighborIndex(const SpMat& rows);
  explicit NeighborIndex(Eigen::MatrixXd rows);

  Eigen::Index size() const { return n_rows_; }

  /// k nearest rows to an external query point. k is clamped to the number
  /// of available rows.
  std::vector<Neighbor> query(const SpVec& q, int k,
                              std::optional<Eigen::Index> exclude = {}) const;
  std::vector<Neighbor> query(const Eigen::VectorXd& q, int k,
                              std::optional<Eigen::Index> exclude = {}) const;

  /// k nearest rows to the index's own row i, optionally excluding i.
  std::vector<Neighbor> query_row(Eigen::Index i, int k,
                                  bool exclude_self = true) const;

 private:
  std::vector<Neighbor> select(std::vector<Neighbor> all, int k) const;

  SpMat sparse_rows_;
  Eigen::MatrixXd dense_rows_;
  bool dense_ = false;
  Eigen::Index n_rows_ = 0;
};

}  // namespace imblab
