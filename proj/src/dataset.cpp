#include "imblab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "imblab/errors.hpp"
#include "imblab/rng.hpp"

namespace imblab {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t file_row,
                    std::size_t column) {
  const std::string t = trim(field);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || t.empty() || !std::isfinite(value)) {
    throw DataError("non-numeric cell at row " + std::to_string(file_row) +
                    ", column " + std::to_string(column) + ": '" + t + "'");
  }
  return value;
}

}  // namespace

std::array<std::size_t, 2> Dataset::class_counts() const {
  std::array<std::size_t, 2> counts{0, 0};
  for (Label l : labels) ++counts[label_index(l)];
  return counts;
}

void Dataset::validate(bool require_binary) const {
  if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
    throw ConfigError("dataset row count (" + std::to_string(features.rows()) +
                      ") != label count (" + std::to_string(labels.size()) +
                      ")");
  }
  for (Eigen::Index i = 0; i < features.outerSize(); ++i) {
    for (SpMat::InnerIterator it(features, i); it; ++it) {
      if (!std::isfinite(it.value())) {
        throw ConfigError("non-finite feature value at row " +
                          std::to_string(it.row()));
      }
      if (require_binary && it.value() != 0.0 && it.value() != 1.0) {
        throw ConfigError("non-binary feature value at row " +
                          std::to_string(it.row()));
      }
    }
  }
  if (vocabulary) {
    if (static_cast<Eigen::Index>(vocabulary->size()) != features.cols()) {
      throw ConfigError("vocabulary size != column count");
    }
    std::set<std::string> seen(vocabulary->begin(), vocabulary->end());
    if (seen.size() != vocabulary->size()) {
      throw ConfigError("duplicate vocabulary names");
    }
  }
}

Dataset dataset_from_dense(const Eigen::MatrixXd& features,
                           std::vector<Label> labels) {
  Dataset out;
  out.features = features.sparseView();
  out.features.makeCompressed();
  out.labels = std::move(labels);
  out.validate();
  return out;
}

Dataset take_rows(const Dataset& data, const std::vector<Eigen::Index>& rows) {
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<Label> labels;
  labels.reserve(rows.size());
  Eigen::Index r = 0;
  for (Eigen::Index src : rows) {
    if (src < 0 || src >= data.rows()) {
      throw ConfigError("row index out of range: " + std::to_string(src));
    }
    for (SpMat::InnerIterator it(data.features, src); it; ++it) {
      triplets.emplace_back(r, it.col(), it.value());
    }
    labels.push_back(data.labels[static_cast<std::size_t>(src)]);
    ++r;
  }
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), data.cols());
  out.features.setFromTriplets(triplets.begin(), triplets.end());
  out.features.makeCompressed();
  out.labels = std::move(labels);
  out.vocabulary = data.vocabulary;
  return out;
}

Dataset concat_rows(const Dataset& a, const Dataset& b) {
  if (a.cols() != b.cols()) {
    throw ConfigError("cannot concatenate datasets with different widths");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (SpMat::InnerIterator it(a.features, i); it; ++it) {
      triplets.emplace_back(i, it.col(), it.value());
    }
  }
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    for (SpMat::InnerIterator it(b.features, i); it; ++it) {
      triplets.emplace_back(a.rows() + i, it.col(), it.value());
    }
  }
  Dataset out;
  out.features.resize(a.rows() + b.rows(), a.cols());
  out.features.setFromTriplets(triplets.begin(), triplets.end());
  out.features.makeCompressed();
  out.labels = a.labels;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  out.vocabulary = a.vocabulary;
  return out;
}

Dataset ingest_drebin(const std::filesystem::path& feature_dir,
                      const std::filesystem::path& label_manifest,
                      std::size_t min_feature_count) {
  namespace fs = std::filesystem;
  if (min_feature_count < 1) {
    throw ConfigError("min_feature_count must be >= 1");
  }
  if (!fs::is_directory(feature_dir)) {
    throw DataError("feature directory not found: " + feature_dir.string());
  }
  if (!fs::is_regular_file(label_manifest)) {
    throw DataError("label manifest not found: " + label_manifest.string());
  }

  // One file per application; row order is the sorted file name.
  std::vector<fs::path> app_files;
  for (const auto& entry : fs::directory_iterator(feature_dir)) {
    if (entry.is_regular_file()) app_files.push_back(entry.path());
  }
  std::sort(app_files.begin(), app_files.end());
  if (app_files.empty()) {
    throw DataError("no application files in " + feature_dir.string());
  }

  std::ifstream manifest(label_manifest);
  std::string line;
  if (!std::getline(manifest, line)) {
    throw DataError("empty manifest: " + label_manifest.string());
  }
  const std::vector<std::string> header = split_csv_line(line);
  std::size_t sha_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == "sha256") sha_col = i;
  }
  if (sha_col == header.size()) {
    throw DataError("manifest has no 'sha256' column: " +
                    label_manifest.string());
  }
  std::set<std::string> malware;
  while (std::getline(manifest, line)) {
    const auto fields = split_csv_line(line);
    if (sha_col >= fields.size()) continue;
    const std::string id = trim(fields[sha_col]);
    if (!id.empty()) malware.insert(id);
  }

  std::set<std::string> stems;
  for (const auto& f : app_files) stems.insert(f.stem().string());
  for (const auto& id : malware) {
    if (!stems.count(id)) {
      throw DataError("manifest lists '" + id +
                      "' but no such application file exists on disk");
    }
  }

  // First pass: document frequency of every feature string.
  std::map<std::string, std::size_t> frequency;
  std::vector<std::set<std::string>> per_app(app_files.size());
  for (std::size_t a = 0; a < app_files.size(); ++a) {
    std::ifstream in(app_files[a]);
    if (!in) throw DataError("cannot read " + app_files[a].string());
    while (std::getline(in, line)) {
      const std::string feat = trim(line);
      if (feat.empty()) continue;
      if (per_app[a].insert(feat).second) ++frequency[feat];
    }
  }

  std::vector<std::string> vocab;
  for (const auto& [feat, count] : frequency) {
    if (count >= min_feature_count) vocab.push_back(feat);
  }
  // std::map iteration is already lexicographic; keep the sort explicit.
  std::sort(vocab.begin(), vocab.end());
  if (vocab.empty()) {
    throw ConfigError("empty vocabulary after min_feature_count=" +
                      std::to_string(min_feature_count) + " cutoff");
  }
  std::map<std::string, Eigen::Index> vocab_index;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    vocab_index[vocab[i]] = static_cast<Eigen::Index>(i);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<Label> labels;
  labels.reserve(app_files.size());
  for (std::size_t a = 0; a < app_files.size(); ++a) {
    for (const auto& feat : per_app[a]) {
      auto it = vocab_index.find(feat);
      if (it != vocab_index.end()) {
        triplets.emplace_back(static_cast<Eigen::Index>(a), it->second, 1.0);
      }
    }
    labels.push_back(malware.count(app_files[a].stem().string())
                         ? Label::positive
                         : Label::negative);
  }

  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(app_files.size()),
                      static_cast<Eigen::Index>(vocab.size()));
  out.features.setFromTriplets(triplets.begin(), triplets.end());
  out.features.makeCompressed();
  out.labels = std::move(labels);
  out.vocabulary = std::move(vocab);
  return out;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty CSV (missing header): " + path.string());
  }
  const auto header = split_csv_line(line);
  if (header.size() < 2) {
    throw DataError("CSV needs at least one feature column and a label: " +
                    path.string());
  }
  const std::size_t n_cols = header.size();
  const Eigen::Index n_features = static_cast<Eigen::Index>(n_cols - 1);

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<Label> labels;
  std::size_t file_row = 1;
  while (std::getline(in, line)) {
    ++file_row;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != n_cols) {
      throw DataError("row " + std::to_string(file_row) + " has " +
                      std::to_string(fields.size()) + " columns, expected " +
                      std::to_string(n_cols));
    }
    const Eigen::Index r = static_cast<Eigen::Index>(labels.size());
    for (std::size_t c = 0; c + 1 < n_cols; ++c) {
      const double v = parse_number(fields[c], file_row, c + 1);
      if (v != 0.0) triplets.emplace_back(r, static_cast<Eigen::Index>(c), v);
    }
    const double raw_label = parse_number(fields[n_cols - 1], file_row, n_cols);
    if (raw_label != 0.0 && raw_label != 1.0) {
      throw DataError("label at row " + std::to_string(file_row) +
                      " is not 0/1 (binary labels only)");
    }
    labels.push_back(raw_label == 1.0 ? Label::positive : Label::negative);
  }

  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(labels.size()), n_features);
  out.features.setFromTriplets(triplets.begin(), triplets.end());
  out.features.makeCompressed();
  out.labels = std::move(labels);
  return out;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (Eigen::Index c = 0; c < data.cols(); ++c) out << "f" << c << ",";
  out << "label\n";
  Eigen::VectorXd row(data.cols());
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    row.setZero();
    for (SpMat::InnerIterator it(data.features, i); it; ++it) {
      row(it.col()) = it.value();
    }
    char buf[64];
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row(c));
      out << buf << ",";
    }
    out << label_index(data.labels[static_cast<std::size_t>(i)]) << "\n";
  }
}

void save_sparse(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "imblab-dataset 1\n";
  out << "rows " << data.rows() << " cols " << data.cols() << " vocab "
      << (data.vocabulary ? data.vocabulary->size() : 0) << "\n";
  if (data.vocabulary) {
    for (const auto& name : *data.vocabulary) out << name << "\n";
  }
  char buf[64];
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    out << label_index(data.labels[static_cast<std::size_t>(i)]);
    for (SpMat::InnerIterator it(data.features, i); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << " " << it.col() << ":" << buf;
    }
    out << "\n";
  }
}

Dataset load_sparse(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path.string());
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "imblab-dataset" || version != 1) {
    throw DataError("not an imblab-dataset v1 file: " + path.string());
  }
  std::string key;
  Eigen::Index rows = 0, cols = 0;
  std::size_t vocab_size = 0;
  in >> key >> rows >> key >> cols >> key >> vocab_size;
  std::string line;
  std::getline(in, line);  // finish the header line

  Dataset out;
  if (vocab_size > 0) {
    std::vector<std::string> vocab;
    vocab.reserve(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i) {
      if (!std::getline(in, line)) {
        throw DataError("truncated vocabulary in " + path.string());
      }
      vocab.push_back(trim(line));
    }
    out.vocabulary = std::move(vocab);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<Label> labels;
  labels.reserve(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) {
      throw DataError("truncated data rows in " + path.string());
    }
    std::istringstream row(line);
    int lbl = 0;
    if (!(row >> lbl) || (lbl != 0 && lbl != 1)) {
      throw DataError("bad label in " + path.string() + " data row " +
                      std::to_string(r));
    }
    labels.push_back(label_from_index(lbl));
    std::string pair;
    while (row >> pair) {
      const auto colon = pair.find(':');
      if (colon == std::string::npos) {
        throw DataError("bad idx:val pair '" + pair + "' in " + path.string());
      }
      const Eigen::Index c = std::stoll(pair.substr(0, colon));
      const double v = std::strtod(pair.c_str() + colon + 1, nullptr);
      if (c < 0 || c >= cols) {
        throw DataError("column index out of range in " + path.string());
      }
      triplets.emplace_back(r, c, v);
    }
  }
  out.features.resize(rows, cols);
  out.features.setFromTriplets(triplets.begin(), triplets.end());
  out.features.makeCompressed();
  out.labels = std::move(labels);
  out.validate();
  return out;
}

Dataset load_any(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return load_csv(path);
  return load_sparse(path);
}

SplitPair stratified_split(const Dataset& data, double test_fraction,
                           std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must be in (0,1)");
  }
  const auto counts = data.class_counts();
  if (counts[0] == 0 || counts[1] == 0) {
    throw ConfigError("stratified_split requires both classes present");
  }

  std::array<std::vector<Eigen::Index>, 2> by_class;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    by_class[label_index(data.labels[static_cast<std::size_t>(i)])].push_back(
        i);
  }

  Rng rng(seed);
  std::vector<Eigen::Index> test_rows, train_rows;
  for (auto& indices : by_class) {
    const std::size_t n = indices.size();
    // round-half-up, then clamp: >=1 in train always; >=1 in test when the
    // class has >=2 rows
    std::size_t t = static_cast<std::size_t>(std::floor(
        static_cast<double>(n) * test_fraction + 0.5));
    if (t >= n) t = n - 1;
    if (n >= 2 && t == 0) t = 1;
    rng.shuffle(indices);
    for (std::size_t i = 0; i < n; ++i) {
      (i < t ? test_rows : train_rows).push_back(indices[i]);
    }
  }
  std::sort(test_rows.begin(), test_rows.end());
  std::sort(train_rows.begin(), train_rows.end());

  SplitPair out;
  out.train = take_rows(data, train_rows);
  out.test = take_rows(data, test_rows);
  out.seed = seed;
  return out;
}

DatasetSummary summarize(const Dataset& data) {
  if (data.rows() == 0) throw ConfigError("cannot summarize an empty dataset");
  const auto counts = data.class_counts();
  DatasetSummary s;
  s.total = counts[0] + counts[1];
  s.negatives = counts[0];
  s.positives = counts[1];
  s.n_features = static_cast<std::size_t>(data.cols());
  const double majority = static_cast<double>(std::max(counts[0], counts[1]));
  const double minority = static_cast<double>(std::min(counts[0], counts[1]));
  s.imbalance_ratio = minority == 0.0
                          ? std::numeric_limits<double>::infinity()
                          : majority / minority;
  return s;
}

std::string format_ratio(double value) {
  if (std::isinf(value)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

}  // namespace imblab
