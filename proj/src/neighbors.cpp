#include "imblab/neighbors.hpp"

#include <algorithm>

#include "imblab/errors.hpp"

namespace imblab {

namespace {

// Wide sparse data (Drebin-style one-hot) stays sparse; everything
// narrower is cheaper as contiguous dense rows.
constexpr Eigen::Index kDenseWidthLimit = 256;

}  // namespace

double squared_distance(const SpMat& a, Eigen::Index i, const SpMat& b,
                        Eigen::Index j) {
  SpMat::InnerIterator ita(a, i);
  SpMat::InnerIterator itb(b, j);
  double sum = 0.0;
  while (ita && itb) {
    if (ita.col() == itb.col()) {
      const double d = ita.value() - itb.value();
      sum += d * d;
      ++ita;
      ++itb;
    } else if (ita.col() < itb.col()) {
      sum += ita.value() * ita.value();
      ++ita;
    } else {
      sum += itb.value() * itb.value();
      ++itb;
    }
  }
  for (; ita; ++ita) sum += ita.value() * ita.value();
  for (; itb; ++itb) sum += itb.value() * itb.value();
  return sum;
}

double squared_distance(const SpVec& q, const SpMat& m, Eigen::Index j) {
  SpVec::InnerIterator itq(q);
  SpMat::InnerIterator itm(m, j);
  double sum = 0.0;
  while (itq && itm) {
    if (itq.index() == itm.col()) {
      const double d = itq.value() - itm.value();
      sum += d * d;
      ++itq;
      ++itm;
    } else if (itq.index() < itm.col()) {
      sum += itq.value() * itq.value();
      ++itq;
    } else {
      sum += itm.value() * itm.value();
      ++itm;
    }
  }
  for (; itq; ++itq) sum += itq.value() * itq.value();
  for (; itm; ++itm) sum += itm.value() * itm.value();
  return sum;
}

SpVec sparse_row(const SpMat& m, Eigen::Index i) {
  SpVec out(m.cols());
  for (SpMat::InnerIterator it(m, i); it; ++it) {
    out.insertBack(it.col()) = it.value();
  }
  return out;
}

Eigen::VectorXd dense_row(const SpMat& m, Eigen::Index i) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m.cols());
  for (SpMat::InnerIterator it(m, i); it; ++it) out(it.col()) = it.value();
  return out;
}

NeighborIndex::NeighborIndex(const SpMat& rows) : n_rows_(rows.rows()) {
  if (rows.cols() <= kDenseWidthLimit) {
    dense_ = true;
    dense_rows_ = Eigen::MatrixXd(rows);
  } else {
    sparse_rows_ = rows;
    sparse_rows_.makeCompressed();
  }
}

NeighborIndex::NeighborIndex(Eigen::MatrixXd rows)
    : dense_rows_(std::move(rows)), dense_(true), n_rows_(dense_rows_.rows()) {}

std::vector<Neighbor> NeighborIndex::select(std::vector<Neighbor> all,
                                            int k) const {
  const std::size_t keep =
      std::min<std::size_t>(static_cast<std::size_t>(k), all.size());
  std::partial_sort(all.begin(), all.begin() + keep, all.end());
  all.resize(keep);
  return all;
}

std::vector<Neighbor> NeighborIndex::query(
    const SpVec& q, int k, std::optional<Eigen::Index> exclude) const {
  if (k < 1) throw ConfigError("neighbor count k must be >= 1");
  if (dense_) return query(Eigen::VectorXd(q), k, exclude);
  std::vector<Neighbor> all;
  all.reserve(static_cast<std::size_t>(n_rows_));
  for (Eigen::Index j = 0; j < n_rows_; ++j) {
    if (exclude && *exclude == j) continue;
    all.emplace_back(squared_distance(q, sparse_rows_, j), j);
  }
  return select(std::move(all), k);
}

std::vector<Neighbor> NeighborIndex::query(
    const Eigen::VectorXd& q, int k,
    std::optional<Eigen::Index> exclude) const {
  if (k < 1) throw ConfigError("neighbor count k must be >= 1");
  if (!dense_) {
    SpVec sq = q.sparseView();
    return query(sq, k, exclude);
  }
  std::vector<Neighbor> all;
  all.reserve(static_cast<std::size_t>(n_rows_));
  for (Eigen::Index j = 0; j < n_rows_; ++j) {
    if (exclude && *exclude == j) continue;
    all.emplace_back((dense_rows_.row(j).transpose() - q).squaredNorm(), j);
  }
  return select(std::move(all), k);
}

std::vector<Neighbor> NeighborIndex::query_row(Eigen::Index i, int k,
                                               bool exclude_self) const {
  std::optional<Eigen::Index> exclude;
  if (exclude_self) exclude = i;
  if (dense_) {
    return query(Eigen::VectorXd(dense_rows_.row(i).transpose()), k, exclude);
  }
  return query(sparse_row(sparse_rows_, i), k, exclude);
}

}  // namespace imblab
