#include <algorithm>
#include <set>

#include "doctest.h"
#include "imblab/dynsel.hpp"
#include "imblab/errors.hpp"
#include "imblab/rng.hpp"
#include "test_support.hpp"

using namespace imblab;
using testsupport::make_dataset;
using testsupport::rule_member;
using testsupport::vec;

TEST_SUITE_BEGIN("dynsel");

namespace {

// DSEL rows keyed by feature 0; scripted members decide from the key.
int key_of(const SpVec& x) { return static_cast<int>(x.coeff(0)); }

Dataset keyed_dataset(const std::vector<int>& labels) {
  std::vector<std::vector<double>> rows;
  std::vector<int> l;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    rows.push_back({static_cast<double>(i)});
    l.push_back(labels[i]);
  }
  return make_dataset(rows, l);
}

Label truth_of(const std::vector<int>& labels, int key) {
  return label_from_index(labels[static_cast<std::size_t>(key)]);
}

/// Member that is correct exactly on the keys in `correct`; off-DSEL keys
/// (>= labels.size()) get the fallback vote.
std::shared_ptr<const Classifier> scripted_member(
    std::vector<int> labels, std::vector<int> correct, Label fallback) {
  return rule_member([labels = std::move(labels),
                      correct = std::move(correct), fallback](const SpVec& x) {
    const int key = key_of(x);
    if (key >= static_cast<int>(labels.size())) return fallback;
    const Label truth = truth_of(labels, key);
    const bool is_correct =
        std::find(correct.begin(), correct.end(), key) != correct.end();
    if (is_correct) return truth;
    return truth == Label::positive ? Label::negative : Label::positive;
  });
}

ClassifierPool pool_of(
    std::vector<std::shared_ptr<const Classifier>> members) {
  ClassifierPool pool;
  pool.members = std::move(members);
  pool.provenance.resize(pool.members.size());
  return pool;
}

Dataset random_train(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < n; ++i) {
    rows.push_back({rng.uniform_real() * 3.0, rng.uniform_real() * 3.0});
    labels.push_back(rows.back()[0] + rng.uniform_real() > 1.8 ? 1 : 0);
  }
  if (std::count(labels.begin(), labels.end(), 1) < 2) labels[0] = labels[1] = 1;
  if (std::count(labels.begin(), labels.end(), 0) < 2) labels[2] = labels[3] = 0;
  return make_dataset(rows, labels);
}

}  // namespace

TEST_CASE("dsel carve-out splits before pooling and never overlaps") {
  // 80 negatives + 20 positives with row identity in feature 0
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 100; ++i) {
    rows.push_back({static_cast<double>(i)});
    labels.push_back(i < 80 ? 0 : 1);
  }
  const Dataset train = make_dataset(rows, labels);
  const auto [pool_train, dsel_data] = dsel_split(train, 0.25, 12);
  CHECK(pool_train.rows() == 75);
  CHECK(dsel_data.rows() == 25);

  std::set<double> ids;
  for (Eigen::Index i = 0; i < pool_train.rows(); ++i) {
    ids.insert(pool_train.features.coeff(i, 0));
  }
  for (Eigen::Index i = 0; i < dsel_data.rows(); ++i) {
    const bool inserted = ids.insert(dsel_data.features.coeff(i, 0)).second;
    CHECK(inserted);  // no row appears on both sides
  }
  CHECK(ids.size() == 100);

  CHECK_THROWS_AS(dsel_split(make_dataset({{0}, {1}, {2}}, {0, 0, 1}), 0.25, 1),
                  ConfigError);
}

TEST_CASE("dsel precomputation equals re-running the members") {
  const Dataset train = random_train(80, 31);
  const auto [pool_train, dsel_data] = dsel_split(train, 0.25, 7);
  PoolConfig cfg;
  cfg.n = 3;
  cfg.seed = 5;
  const ClassifierPool pool = build_pool(pool_train, cfg);
  const Dsel dsel = build_dsel(dsel_data, pool);

  REQUIRE(dsel.predictions.rows() == dsel_data.rows());
  REQUIRE(dsel.predictions.cols() == 3);
  for (Eigen::Index r = 0; r < dsel.rows(); ++r) {
    const SpVec x = sparse_row(dsel.data.features, r);
    for (int i = 0; i < 3; ++i) {
      const auto& member = *pool.members[static_cast<std::size_t>(i)];
      CHECK(label_from_index(dsel.predictions(r, i)) == member.predict(x));
      const Eigen::Vector2d s = member.support(x);
      CHECK(dsel.profiles(r, 2 * i) == s(0));
      CHECK(dsel.profiles(r, 2 * i + 1) == s(1));
      CHECK(s.sum() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("region of competence") {
  const std::vector<int> labels{0, 0, 1, 1, 1};
  std::vector<std::vector<double>> rows{{0.0}, {0.25}, {0.5}, {0.75}, {1.0}};
  const Dataset data = make_dataset(rows, labels);
  const ClassifierPool pool =
      pool_of({rule_member([](const SpVec&) { return Label::negative; })});
  const Dsel dsel = build_dsel(data, pool);

  SUBCASE("query equal to a DSEL row with k=1 returns that row") {
    const RegionOfCompetence region =
        region_of_competence(dsel, vec({0.75}), 1);
    REQUIRE(region.indices.size() == 1);
    CHECK(region.indices[0] == 3);
    CHECK(region.distances[0] == 0.0);
  }
  SUBCASE("k equal to the DSEL size returns every row") {
    const RegionOfCompetence region = region_of_competence(dsel, vec({0.3}), 5);
    CHECK(region.indices.size() == 5);
  }
  SUBCASE("two nearest of xq=0.4 match the linear-scan oracle") {
    Eigen::MatrixXd dense(5, 1);
    dense << 0.0, 0.25, 0.5, 0.75, 1.0;
    Eigen::VectorXd q(1);
    q << 0.4;
    const auto oracle = testsupport::linear_scan_knn(dense, q, 2);
    const RegionOfCompetence region = region_of_competence(dsel, vec({0.4}), 2);
    REQUIRE(region.indices.size() == 2);
    CHECK(region.indices[0] == oracle[0]);
    CHECK(region.indices[1] == oracle[1]);
    CHECK(region.indices[0] == 2);  // |0.5-0.4| < |0.25-0.4|
    CHECK(region.indices[1] == 1);
  }
  SUBCASE("k beyond the DSEL size clamps") {
    CHECK(region_of_competence(dsel, vec({0.0}), 50).indices.size() == 5);
  }
}

TEST_CASE("ola picks the locally most accurate member") {
  const std::vector<int> labels{0, 1, 0};

  SUBCASE("3-of-3 beats 2-of-3 in the region") {
    const Dataset data = keyed_dataset(labels);
    const auto strong = scripted_member(labels, {0, 1, 2}, Label::negative);
    const auto weak = scripted_member(labels, {0, 1}, Label::positive);
    const ClassifierPool pool = pool_of({weak, strong});
    const Dsel dsel = build_dsel(data, pool);
    // query at key 2: weak answers positive, strong answers the truth
    CHECK(ola_select(pool, dsel, vec({2.0}), 3) == Label::negative);
  }
  SUBCASE("k=1 with a single competent member lets it decide") {
    const std::vector<int> one_row{1};
    const Dataset data = keyed_dataset(one_row);
    const auto wrong_a = scripted_member(one_row, {}, Label::negative);
    const auto wrong_b = scripted_member(one_row, {}, Label::negative);
    const auto right = scripted_member(one_row, {0}, Label::negative);
    const ClassifierPool pool = pool_of({wrong_a, wrong_b, right});
    const Dsel dsel = build_dsel(data, pool);
    CHECK(ola_select(pool, dsel, vec({0.0}), 1) == Label::positive);
  }
  SUBCASE("identical members reduce to the single member") {
    const Dataset train = random_train(60, 3);
    const auto [pool_train, dsel_data] = dsel_split(train, 0.3, 2);
    std::shared_ptr<const Classifier> fitted = train_knn(pool_train, 3);
    const ClassifierPool pool = pool_of({fitted, fitted, fitted, fitted});
    const Dsel dsel = build_dsel(dsel_data, pool);
    Rng rng(4);
    for (int probe = 0; probe < 40; ++probe) {
      const SpVec x = vec({rng.uniform_real() * 3.0, rng.uniform_real() * 3.0});
      CHECK(ola_select(pool, dsel, x) == fitted->predict(x));
    }
  }
}

TEST_CASE("ola with the whole DSEL as region equals single best") {
  const Dataset train = random_train(90, 47);
  const auto [pool_train, dsel_data] = dsel_split(train, 0.3, 9);
  PoolConfig cfg;
  cfg.n = 5;
  cfg.seed = 77;
  const ClassifierPool pool = build_pool(pool_train, cfg);
  const Dsel dsel = build_dsel(dsel_data, pool);
  const Classifier& best = single_best(pool, dsel.data);
  for (Eigen::Index r = 0; r < dsel.rows(); ++r) {
    const SpVec x = sparse_row(dsel.data.features, r);
    CHECK(ola_select(pool, dsel, x, static_cast<int>(dsel.rows())) ==
          best.predict(x));
  }
}

TEST_CASE("knop weighs members by profile-neighborhood competence") {
  SUBCASE("k=1: only the members correct on the neighbor vote") {
    const std::vector<int> one_row{1};
    const Dataset data = keyed_dataset(one_row);
    // members 1 and 3 are correct on the single DSEL row and vote negative
    // on the query; members 0 and 2 are wrong there and vote positive
    const ClassifierPool pool = pool_of({
        scripted_member(one_row, {}, Label::positive),
        scripted_member(one_row, {0}, Label::negative),
        scripted_member(one_row, {}, Label::positive),
        scripted_member(one_row, {0}, Label::negative),
    });
    const Dsel dsel = build_dsel(data, pool);
    CHECK(knop_select(pool, dsel, vec({9.0}), 1) == Label::negative);
  }
  SUBCASE("hand correctness matrix gives weights 3,2,1") {
    const std::vector<int> labels{1, 0, 1};
    const Dataset data = keyed_dataset(labels);
    // correctness by member: {0,1,2}, {0,2}, {2}
    const ClassifierPool pool = pool_of({
        scripted_member(labels, {0, 1, 2}, Label::positive),
        scripted_member(labels, {0, 2}, Label::negative),
        scripted_member(labels, {2}, Label::negative),
    });
    const Dsel dsel = build_dsel(data, pool);
    // enumeration oracle: weighted tally pos=3 (member 0) vs neg=2+1,
    // exact tie resolves positive; unweighted plurality would say negative
    CHECK(knop_select(pool, dsel, vec({9.0}), 3) == Label::positive);
  }
  SUBCASE("competence weights outvote the unweighted plurality") {
    const std::vector<int> labels{1, 0, 1, 0, 1};
    const Dataset data = keyed_dataset(labels);
    // weights 4, 1, 1: the lone positive voter carries the decision
    const ClassifierPool pool = pool_of({
        scripted_member(labels, {0, 1, 2, 3}, Label::positive),
        scripted_member(labels, {0}, Label::negative),
        scripted_member(labels, {1}, Label::negative),
    });
    const Dsel dsel = build_dsel(data, pool);
    CHECK(knop_select(pool, dsel, vec({9.0}), 5) == Label::positive);
  }
  SUBCASE("zero competence everywhere falls back to the full-pool vote") {
    const std::vector<int> one_row{1};
    const Dataset data = keyed_dataset(one_row);
    const ClassifierPool pool = pool_of({
        scripted_member(one_row, {}, Label::negative),
        scripted_member(one_row, {}, Label::negative),
        scripted_member(one_row, {}, Label::positive),
    });
    const Dsel dsel = build_dsel(data, pool);
    CHECK(knop_select(pool, dsel, vec({9.0}), 1) == Label::negative);
  }
  SUBCASE("identical members reduce to the single member") {
    const Dataset train = random_train(60, 5);
    const auto [pool_train, dsel_data] = dsel_split(train, 0.3, 2);
    std::shared_ptr<const Classifier> fitted = train_knn(pool_train, 3);
    const ClassifierPool pool = pool_of({fitted, fitted, fitted});
    const Dsel dsel = build_dsel(dsel_data, pool);
    Rng rng(6);
    for (int probe = 0; probe < 40; ++probe) {
      const SpVec x = vec({rng.uniform_real() * 3.0, rng.uniform_real() * 3.0});
      CHECK(knop_select(pool, dsel, x) == fitted->predict(x));
    }
  }
}

TEST_CASE("knop competence weights are integers bounded by k") {
  // indirectly: votes of a two-member pool can only move in unit steps,
  // so competences beyond k or below 0 would break the counting identity
  const std::vector<int> labels{1, 1, 0, 0, 1};
  const Dataset data = keyed_dataset(labels);
  const ClassifierPool pool = pool_of({
      scripted_member(labels, {0, 1, 2, 3, 4}, Label::positive),
      scripted_member(labels, {0, 1}, Label::negative),
  });
  const Dsel dsel = build_dsel(data, pool);
  // member 0 weight 5, member 1 weight 2: member 0 must win
  CHECK(knop_select(pool, dsel, vec({9.0}), 5) == Label::positive);
}

TEST_CASE("meta-feature vector length follows 2K + Kp + 2") {
  CHECK(meta_feature_length(7, 5) == 21);
  CHECK(meta_feature_length(1, 1) == 5);
}

TEST_CASE("metades trains on low-consensus rows and selects by competence") {
  SUBCASE("perfect vs anti-perfect members") {
    // member 0 is always correct, member 1 always wrong; consensus is 0.5
    // everywhere so every row trains the meta level
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) labels.push_back(i % 2);
    const Dataset data = keyed_dataset(labels);
    std::vector<int> all_keys;
    for (int i = 0; i < 12; ++i) all_keys.push_back(i);
    const auto perfect = scripted_member(labels, all_keys, Label::positive);
    const auto anti = scripted_member(labels, {}, Label::negative);
    const ClassifierPool pool = pool_of({perfect, anti});
    const Dsel dsel = build_dsel(data, pool);

    MetaDesConfig cfg;
    cfg.K = 3;
    cfg.Kp = 2;
    const MetaDesModel meta = metades_train(pool, dsel, cfg);
    CHECK(meta.used_threshold() == doctest::Approx(0.7));

    // end-to-end: only the perfect member should be selected, so the
    // output tracks the true labeling rule on DSEL keys
    for (int key = 0; key < 12; ++key) {
      const SpVec x = vec({static_cast<double>(key)});
      CHECK(metades_select(meta, pool, dsel, x) == truth_of(labels, key));
    }
  }
  SUBCASE("identical imperfect members exercise threshold relaxation") {
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) labels.push_back(i < 5 ? 0 : 1);
    const Dataset data = keyed_dataset(labels);
    // one shared behavior, wrong on keys 0, 7 and 8
    const auto shared = scripted_member(labels, {1, 2, 3, 4, 5, 6, 9},
                                        Label::negative);
    const ClassifierPool pool = pool_of({shared, shared, shared});
    const Dsel dsel = build_dsel(data, pool);

    MetaDesConfig cfg;
    cfg.K = 3;
    cfg.Kp = 2;
    const MetaDesModel meta = metades_train(pool, dsel, cfg);
    CHECK(meta.used_threshold() > 0.7);  // consensus is 1.0 on every row

    for (int key = 0; key < 10; ++key) {
      const SpVec x = vec({static_cast<double>(key)});
      CHECK(metades_select(meta, pool, dsel, x) == shared->predict(x));
    }
  }
  SUBCASE("uniformly correct pools cannot train a meta level") {
    std::vector<int> labels;
    for (int i = 0; i < 8; ++i) labels.push_back(i % 2);
    const Dataset data = keyed_dataset(labels);
    std::vector<int> all_keys;
    for (int i = 0; i < 8; ++i) all_keys.push_back(i);
    const auto perfect = scripted_member(labels, all_keys, Label::positive);
    const ClassifierPool pool = pool_of({perfect, perfect});
    const Dsel dsel = build_dsel(data, pool);
    MetaDesConfig cfg;
    cfg.K = 2;
    cfg.Kp = 2;
    CHECK_THROWS_AS(metades_train(pool, dsel, cfg), ConfigError);
  }
  SUBCASE("DSEL smaller than the neighborhoods is rejected") {
    const std::vector<int> labels{0, 1};
    const Dataset data = keyed_dataset(labels);
    const ClassifierPool pool =
        pool_of({scripted_member(labels, {0}, Label::negative)});
    const Dsel dsel = build_dsel(data, pool);
    CHECK_THROWS_AS(metades_train(pool, dsel, MetaDesConfig{}), ConfigError);
  }
}

TEST_CASE("selectors are deterministic given identical inputs") {
  const Dataset train = random_train(70, 91);
  const auto [pool_train, dsel_data] = dsel_split(train, 0.3, 4);
  PoolConfig cfg;
  cfg.n = 4;
  cfg.seed = 10;
  const ClassifierPool pool = build_pool(pool_train, cfg);
  const Dsel dsel = build_dsel(dsel_data, pool);
  MetaDesConfig md;
  md.K = 3;
  md.Kp = 3;
  const MetaDesModel meta_a = metades_train(pool, dsel, md);
  const MetaDesModel meta_b = metades_train(pool, dsel, md);
  Rng rng(12);
  for (int probe = 0; probe < 30; ++probe) {
    const SpVec x = vec({rng.uniform_real() * 3.0, rng.uniform_real() * 3.0});
    CHECK(ola_select(pool, dsel, x, 3) == ola_select(pool, dsel, x, 3));
    CHECK(knop_select(pool, dsel, x, 3) == knop_select(pool, dsel, x, 3));
    CHECK(metades_select(meta_a, pool, dsel, x) ==
          metades_select(meta_b, pool, dsel, x));
  }
}

TEST_SUITE_END();
