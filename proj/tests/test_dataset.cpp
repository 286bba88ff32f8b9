#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "imblab/dataset.hpp"
#include "imblab/errors.hpp"
#include "imblab/rng.hpp"
#include "test_support.hpp"

using namespace imblab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("imblab_test_" + std::to_string(std::rand()) +
            std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

fs::path make_drebin_layout(const TempDir& dir) {
  fs::create_directories(dir.path / "feature_vectors");
  write_file(dir.path / "feature_vectors" / "app1", "perm::A\napi::B\n");
  write_file(dir.path / "feature_vectors" / "app2", "api::B\n");
  write_file(dir.path / "feature_vectors" / "app3", "url::C\n");
  write_file(dir.path / "sha256_family.csv", "sha256,family\napp3,Geinimi\n");
  return dir.path;
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("drebin ingestion builds a one-hot matrix over the vocabulary") {
  TempDir dir;
  const fs::path root = make_drebin_layout(dir);
  const Dataset ds = ingest_drebin(root / "feature_vectors",
                                   root / "sha256_family.csv", 1);
  ds.validate(true);
  CHECK(ds.rows() == 3);
  CHECK(ds.cols() == 3);
  REQUIRE(ds.vocabulary.has_value());
  CHECK(*ds.vocabulary == std::vector<std::string>{"api::B", "perm::A", "url::C"});
  CHECK(ds.labels == std::vector<Label>{Label::negative, Label::negative,
                                        Label::positive});
  // app1 = {perm::A, api::B}
  CHECK(ds.features.coeff(0, 0) == 1.0);
  CHECK(ds.features.coeff(0, 1) == 1.0);
  CHECK(ds.features.coeff(0, 2) == 0.0);
  // app3 = {url::C}
  CHECK(ds.features.coeff(2, 2) == 1.0);
}

TEST_CASE("drebin frequency cutoff keeps only common features") {
  TempDir dir;
  const fs::path root = make_drebin_layout(dir);
  const Dataset ds = ingest_drebin(root / "feature_vectors",
                                   root / "sha256_family.csv", 2);
  CHECK(ds.cols() == 1);  // only api::B occurs in two apps
  CHECK(*ds.vocabulary == std::vector<std::string>{"api::B"});
  CHECK(ds.features.coeff(0, 0) == 1.0);
  CHECK(ds.features.coeff(1, 0) == 1.0);
  CHECK(ds.features.coeff(2, 0) == 0.0);
}

TEST_CASE("drebin ingestion error contracts") {
  TempDir dir;
  const fs::path root = make_drebin_layout(dir);
  CHECK_THROWS_AS(ingest_drebin(root / "nope", root / "sha256_family.csv", 1),
                  DataError);
  CHECK_THROWS_AS(ingest_drebin(root / "feature_vectors", root / "nope.csv", 1),
                  DataError);
  // manifest entry with no file on disk
  write_file(root / "bad_manifest.csv", "sha256\nghost_app\n");
  CHECK_THROWS_AS(
      ingest_drebin(root / "feature_vectors", root / "bad_manifest.csv", 1),
      DataError);
  // cutoff that wipes out the vocabulary
  CHECK_THROWS_AS(
      ingest_drebin(root / "feature_vectors", root / "sha256_family.csv", 10),
      ConfigError);
}

TEST_CASE("ingest then summarize reports the manifest's positive count") {
  TempDir dir;
  const fs::path root = make_drebin_layout(dir);
  const Dataset ds = ingest_drebin(root / "feature_vectors",
                                   root / "sha256_family.csv", 1);
  CHECK(summarize(ds).positives == 1);

  // vocabulary ordering is deterministic across ingests
  const Dataset again = ingest_drebin(root / "feature_vectors",
                                      root / "sha256_family.csv", 1);
  CHECK(*again.vocabulary == *ds.vocabulary);
  CHECK(Eigen::MatrixXd(again.features) == Eigen::MatrixXd(ds.features));
}

TEST_CASE("csv loading") {
  TempDir dir;
  const fs::path file = dir.path / "toy.csv";

  SUBCASE("single data row") {
    write_file(file, "f1,f2,label\n0,1,1\n");
    const Dataset ds = load_csv(file);
    CHECK(ds.rows() == 1);
    CHECK(ds.cols() == 2);
    CHECK(ds.labels == std::vector<Label>{Label::positive});
    CHECK(ds.features.coeff(0, 1) == 1.0);
  }
  SUBCASE("header-only file is an empty dataset") {
    write_file(file, "f1,f2,label\n");
    const Dataset ds = load_csv(file);
    CHECK(ds.rows() == 0);
    CHECK(ds.cols() == 2);
  }
  SUBCASE("non-numeric cell names the file row") {
    write_file(file, "f1,f2,label\n0,x,1\n");
    CHECK_THROWS_WITH_AS(load_csv(file),
                         doctest::Contains("row 2"), DataError);
  }
  SUBCASE("ragged rows are rejected") {
    write_file(file, "f1,f2,label\n0,1\n");
    CHECK_THROWS_AS(load_csv(file), DataError);
  }
  SUBCASE("multi-class labels are rejected") {
    write_file(file, "f1,label\n0,2\n");
    CHECK_THROWS_AS(load_csv(file), DataError);
  }
}

TEST_CASE("stratified split hits exact per-class proportions") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 100; ++i) {
    rows.push_back({static_cast<double>(i)});
    labels.push_back(i < 90 ? 0 : 1);
  }
  const Dataset ds = testsupport::make_dataset(rows, labels);
  const SplitPair split = stratified_split(ds, 0.2, 7);
  const auto test_counts = split.test.class_counts();
  CHECK(test_counts[0] == 18);
  CHECK(test_counts[1] == 2);
  CHECK(split.train.rows() + split.test.rows() == 100);
}

TEST_CASE("stratified split clamps tiny classes") {
  const Dataset ds = testsupport::make_dataset(
      {{0}, {1}, {2}, {3}, {4}, {5}, {6}}, {0, 0, 0, 0, 0, 1, 1});
  const SplitPair split = stratified_split(ds, 0.2, 3);
  const auto test_counts = split.test.class_counts();
  CHECK(test_counts[0] == 1);
  CHECK(test_counts[1] == 1);
  const auto train_counts = split.train.class_counts();
  CHECK(train_counts[0] == 4);
  CHECK(train_counts[1] == 1);
}

TEST_CASE("stratified split is deterministic under the seed") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    rows.push_back({static_cast<double>(i), static_cast<double>(i % 3)});
    labels.push_back(i % 5 == 0 ? 1 : 0);
  }
  const Dataset ds = testsupport::make_dataset(rows, labels);
  const SplitPair a = stratified_split(ds, 0.25, 99);
  const SplitPair b = stratified_split(ds, 0.25, 99);
  CHECK(Eigen::MatrixXd(a.train.features) == Eigen::MatrixXd(b.train.features));
  CHECK(Eigen::MatrixXd(a.test.features) == Eigen::MatrixXd(b.test.features));
  CHECK(a.train.labels == b.train.labels);
  CHECK(a.test.labels == b.test.labels);

  const SplitPair c = stratified_split(ds, 0.25, 100);
  CHECK(Eigen::MatrixXd(a.test.features) != Eigen::MatrixXd(c.test.features));
}

TEST_CASE("stratified split partitions the source exactly") {
  // row identity lives in column 0, so the parts can be audited
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10 + static_cast<int>(rng.uniform_index(60));
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    int positives = 0;
    for (int i = 0; i < n; ++i) {
      rows.push_back({static_cast<double>(i)});
      const int label = rng.uniform_real() < 0.3 ? 1 : 0;
      positives += label;
      labels.push_back(label);
    }
    if (positives == 0 || positives == n) continue;
    const Dataset ds = testsupport::make_dataset(rows, labels);
    const double fraction = 0.1 + 0.8 * rng.uniform_real();
    const SplitPair split =
        stratified_split(ds, fraction, rng.next_u64());

    const auto source = ds.class_counts();
    const auto train = split.train.class_counts();
    const auto test = split.test.class_counts();
    CHECK(train[0] + test[0] == source[0]);
    CHECK(train[1] + test[1] == source[1]);

    std::set<double> seen;
    for (const auto* part : {&split.train, &split.test}) {
      for (Eigen::Index i = 0; i < part->rows(); ++i) {
        seen.insert(part->features.coeff(i, 0));
      }
    }
    CHECK(seen.size() == static_cast<std::size_t>(n));  // disjoint + complete
  }
}

TEST_CASE("split rejects single-class and bad fractions") {
  const Dataset ds = testsupport::make_dataset({{0}, {1}}, {0, 0});
  CHECK_THROWS_AS(stratified_split(ds, 0.2, 1), ConfigError);
  const Dataset ok = testsupport::make_dataset({{0}, {1}}, {0, 1});
  CHECK_THROWS_AS(stratified_split(ok, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(stratified_split(ok, 1.0, 1), ConfigError);
}

TEST_CASE("summary reports the imbalance ratio") {
  SUBCASE("metadata-scale counts give 22.20") {
    std::vector<Label> labels(129013, Label::negative);
    for (int i = 0; i < 5560; ++i) labels[static_cast<std::size_t>(i)] = Label::positive;
    Dataset ds;
    ds.features.resize(129013, 1);
    ds.labels = std::move(labels);
    const DatasetSummary s = summarize(ds);
    CHECK(s.total == 129013);
    CHECK(s.positives == 5560);
    CHECK(s.negatives == 123453);
    CHECK(s.imbalance_ratio == doctest::Approx(22.20).epsilon(0.0002));
    CHECK(format_ratio(s.imbalance_ratio) == "22.20");
  }
  SUBCASE("balanced data has IR 1.00") {
    std::vector<std::vector<double>> rows(20, {0.0});
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i) labels.push_back(i < 10 ? 0 : 1);
    const DatasetSummary s = summarize(testsupport::make_dataset(rows, labels));
    CHECK(s.imbalance_ratio == 1.0);
    CHECK(format_ratio(s.imbalance_ratio) == "1.00");
  }
  SUBCASE("7 negatives / 3 positives") {
    // hand division: 7/3 = 2.3333...
    std::vector<std::vector<double>> rows(10, {0.0});
    std::vector<int> labels{0, 0, 0, 0, 0, 0, 0, 1, 1, 1};
    const DatasetSummary s = summarize(testsupport::make_dataset(rows, labels));
    CHECK(s.imbalance_ratio == doctest::Approx(7.0 / 3.0));
    CHECK(format_ratio(s.imbalance_ratio) == "2.33");
  }
  SUBCASE("absent class reports the infinite sentinel") {
    const Dataset ds = testsupport::make_dataset({{0}, {1}}, {0, 0});
    CHECK(std::isinf(summarize(ds).imbalance_ratio));
    CHECK(format_ratio(summarize(ds).imbalance_ratio) == "inf");
  }
  SUBCASE("empty dataset is an error") {
    Dataset ds;
    ds.features.resize(0, 1);
    CHECK_THROWS_AS(summarize(ds), ConfigError);
  }
}

TEST_CASE("sparse dataset file round trip") {
  TempDir dir;
  Rng rng(5);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 25; ++i) {
    rows.push_back({rng.uniform_real(), 0.0, rng.uniform_real() > 0.5 ? 1.0 : 0.0});
    labels.push_back(static_cast<int>(rng.uniform_index(2)));
  }
  Dataset ds = testsupport::make_dataset(rows, labels);
  ds.vocabulary = std::vector<std::string>{"alpha", "beta", "gamma"};

  const fs::path file = dir.path / "round.ds";
  save_sparse(ds, file);
  const Dataset back = load_sparse(file);
  CHECK(back.labels == ds.labels);
  CHECK(*back.vocabulary == *ds.vocabulary);
  CHECK(Eigen::MatrixXd(back.features) == Eigen::MatrixXd(ds.features));

  // csv writer round-trips through the csv loader too
  const fs::path csv = dir.path / "round.csv";
  save_csv(ds, csv);
  const Dataset csv_back = load_csv(csv);
  CHECK(csv_back.labels == ds.labels);
  CHECK(Eigen::MatrixXd(csv_back.features) == Eigen::MatrixXd(ds.features));
}

TEST_CASE("dataset validation catches broken invariants") {
  Dataset ds = testsupport::make_dataset({{0.5}, {1}}, {0, 1});
  CHECK_NOTHROW(ds.validate());
  CHECK_THROWS_AS(ds.validate(true), ConfigError);  // 0.5 is not binary

  ds.labels.pop_back();
  CHECK_THROWS_AS(ds.validate(), ConfigError);

  Dataset vocab_mismatch = testsupport::make_dataset({{0, 1}}, {0});
  vocab_mismatch.vocabulary = std::vector<std::string>{"only_one"};
  CHECK_THROWS_AS(vocab_mismatch.validate(), ConfigError);
  vocab_mismatch.vocabulary = std::vector<std::string>{"dup", "dup"};
  CHECK_THROWS_AS(vocab_mismatch.validate(), ConfigError);
}

TEST_SUITE_END();
