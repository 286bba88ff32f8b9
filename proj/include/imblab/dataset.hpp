#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace imblab {

/// Binary class label. The positive class is the rare/interesting one
/// (malware in the original setting).
enum class Label : std::uint8_t { negative = 0, positive = 1 };

inline int label_index(Label l) { return static_cast<int>(l); }
inline Label label_from_index(int i) {
  return i == 0 ? Label::negative : Label::positive;
}
inline const char* label_name(Label l) {
  return l == Label::positive ? "positive" : "negative";
}

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SpVec = Eigen::SparseVector<double>;

/// A labeled feature matrix. Features are sparse row-major; values are
/// binary 0/1 after ingestion and may be fractional after SMOTE.
/// Immutable by convention once built: all library functions take it by
/// const reference and never modify it in place.
struct Dataset {
  SpMat features;
  std::vector<Label> labels;
  std::optional<std::vector<std::string>> vocabulary;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index cols() const { return features.cols(); }

  /// {negative count, positive count}
  std::array<std::size_t, 2> class_counts() const;

  /// Throws ConfigError when an invariant is broken: label/row mismatch,
  /// non-finite values, vocabulary size or duplicate-name violations.
  /// When require_binary is set, also rejects values outside {0,1}.
  void validate(bool require_binary = false) const;
};

/// Train/test split of a source dataset; the two parts are row-disjoint.
struct SplitPair {
  Dataset train;
  Dataset test;
  std::uint64_t seed = 0;
};

/// Class counts plus the imbalance ratio (majority/minority, >= 1;
/// infinity when one class is absent).
struct DatasetSummary {
  std::size_t total = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t n_features = 0;
  double imbalance_ratio = 1.0;
};

/// Build a Dataset from a dense matrix (used by the synthetic generator
/// and tests). Values must be finite.
Dataset dataset_from_dense(const Eigen::MatrixXd& features,
                           std::vector<Label> labels);

/// Concatenate rows of two datasets (vocabulary taken from the first).
Dataset concat_rows(const Dataset& a, const Dataset& b);

/// Copy the given rows (duplicates allowed) into a new dataset.
Dataset take_rows(const Dataset& data, const std::vector<Eigen::Index>& rows);

/// Ingest the Drebin on-disk layout: a directory with one plain-text
/// feature file per application (one `category::feature` string per line)
/// and a CSV manifest with a `sha256` column listing the malware file
/// stems. Keeps features occurring in at least min_feature_count
/// applications; the vocabulary is sorted lexicographically. Rows are
/// ordered by sorted file name.
Dataset ingest_drebin(const std::filesystem::path& feature_dir,
                      const std::filesystem::path& label_manifest,
                      std::size_t min_feature_count = 10);

/// Load a headered CSV whose last column is the 0/1 label.
Dataset load_csv(const std::filesystem::path& path);

/// Load/save the sparse dataset text format written by `ingest`
/// (see README for the layout).
Dataset load_sparse(const std::filesystem::path& path);
void save_sparse(const Dataset& data, const std::filesystem::path& path);

/// Save as dense CSV (f0..fN,label header). Intended for small data.
void save_csv(const Dataset& data, const std::filesystem::path& path);

/// Load a dataset picking the reader from the file extension
/// (.csv -> load_csv, anything else -> load_sparse).
Dataset load_any(const std::filesystem::path& path);

/// Stratified split: per-class test counts are round-half-up of
/// class_count * test_fraction, clamped so every class keeps at least one
/// training row and, when it has two or more rows, at least one test row.
/// Deterministic under (data, fraction, seed).
SplitPair stratified_split(const Dataset& data, double test_fraction,
                           std::uint64_t seed);

DatasetSummary summarize(const Dataset& data);

/// Two-decimal display form of an imbalance ratio, e.g. "22.20" or "inf".
std::string format_ratio(double value);

}  // namespace imblab
