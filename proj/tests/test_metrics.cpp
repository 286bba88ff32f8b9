#include <cmath>

#include "doctest.h"
#include "imblab/errors.hpp"
#include "imblab/metrics.hpp"
#include "imblab/rng.hpp"
#include "test_support.hpp"

using namespace imblab;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("confusion counting") {
  SUBCASE("perfect prediction") {
    std::vector<Label> truth, pred;
    for (int i = 0; i < 4; ++i) truth.push_back(Label::positive);
    for (int i = 0; i < 6; ++i) truth.push_back(Label::negative);
    pred = truth;
    const ConfusionMatrix cm = confusion(pred, truth);
    CHECK(cm.tp == 4);
    CHECK(cm.tn == 6);
    CHECK(cm.fp == 0);
    CHECK(cm.fn == 0);
  }
  SUBCASE("all-positive prediction on all-negative truth") {
    const std::vector<Label> truth(8, Label::negative);
    const std::vector<Label> pred(8, Label::positive);
    const ConfusionMatrix cm = confusion(pred, truth);
    CHECK(cm.fp == 8);
    CHECK(cm.tp + cm.fn + cm.tn == 0);
  }
  SUBCASE("hand-counted mixed case") {
    auto lab = [](char c) { return c == 'p' ? Label::positive : Label::negative; };
    std::vector<Label> pred, truth;
    for (char c : {'p', 'p', 'p', 'n', 'n', 'n', 'n', 'n', 'n', 'n'}) pred.push_back(lab(c));
    for (char c : {'p', 'p', 'n', 'p', 'p', 'n', 'n', 'n', 'n', 'n'}) truth.push_back(lab(c));
    const ConfusionMatrix cm = confusion(pred, truth);
    CHECK(cm.tp == 2);
    CHECK(cm.fp == 1);
    CHECK(cm.fn == 2);
    CHECK(cm.tn == 5);
  }
  SUBCASE("length mismatch and empty input are rejected") {
    CHECK_THROWS_AS(confusion({Label::positive}, {}), ConfigError);
    CHECK_THROWS_AS(confusion({}, {}), ConfigError);
  }
}

TEST_CASE("metric formulas against hand evaluation") {
  SUBCASE("perfect prediction") {
    const MetricsReport r = compute_metrics({10, 0, 0, 20});
    CHECK(r.recall == 1.0);
    CHECK(r.f1 == 1.0);
    CHECK(r.g_mean == 1.0);
    CHECK(r.mcc == 1.0);
    CHECK_FALSE(r.zero_division);
  }
  SUBCASE("tp=3 fp=1 fn=2 tn=4") {
    const MetricsReport r = compute_metrics({3, 1, 2, 4});
    CHECK(r.recall == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(r.precision == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.g_mean == doctest::Approx(std::sqrt(0.48)).epsilon(1e-12));
    CHECK(r.mcc == doctest::Approx(10.0 / std::sqrt(600.0)).epsilon(1e-12));
  }
  SUBCASE("nothing predicted positive flags the zero-division convention") {
    const MetricsReport r = compute_metrics({0, 0, 3, 7});
    CHECK(r.precision == 0.0);
    CHECK(r.mcc == 0.0);
    CHECK(r.zero_division);
  }
}

TEST_CASE("random confusion matrices match the closed-form oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const ConfusionMatrix cm{rng.uniform_index(51), rng.uniform_index(51),
                             rng.uniform_index(51), rng.uniform_index(51)};
    if (cm.total() == 0) continue;
    const MetricsReport r = compute_metrics(cm);
    const auto o = testsupport::oracle_metrics(cm.tp, cm.fp, cm.fn, cm.tn);
    CHECK(std::abs(r.recall - o.recall) <= 1e-12);
    CHECK(std::abs(r.precision - o.precision) <= 1e-12);
    CHECK(std::abs(r.f1 - o.f1) <= 1e-12);
    CHECK(std::abs(r.g_mean - o.g_mean) <= 1e-12);
    CHECK(std::abs(r.mcc - o.mcc) <= 1e-12);
    CHECK(std::abs(r.accuracy - o.accuracy) <= 1e-12);
  }
}

TEST_CASE("mcc is invariant under class swap") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t tp = rng.uniform_index(50), fp = rng.uniform_index(50);
    const std::size_t fn = rng.uniform_index(50), tn = rng.uniform_index(50);
    const double a = compute_metrics({tp, fp, fn, tn}).mcc;
    const double b = compute_metrics({tn, fn, fp, tp}).mcc;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("g_mean vanishes when either class has no correct prediction") {
  CHECK(compute_metrics({0, 3, 5, 10}).g_mean == 0.0);  // no tp
  CHECK(compute_metrics({5, 3, 1, 0}).g_mean == 0.0);   // no tn
}

TEST_CASE("aggregation mean, sample std and display format") {
  SUBCASE("hand mean/std") {
    MetricsReport a, b, c;
    a.recall = 0.01;
    b.recall = 0.02;
    c.recall = 0.03;
    const AggregateReport agg = aggregate({a, b, c});
    CHECK(agg.runs == 3);
    CHECK(format_cell(agg.recall) == "2.00(1.00)");
  }
  SUBCASE("identical runs have zero spread") {
    MetricsReport r;
    r.f1 = 0.5;
    const AggregateReport agg = aggregate({r, r, r, r});
    CHECK(format_cell(agg.f1) == "50.00(0.00)");
  }
  SUBCASE("two-decimal table rendering") {
    AggregateCell cell{0.8669, 0.0068};
    CHECK(format_cell(cell) == "86.69(0.68)");
  }
  SUBCASE("single run renders std 0") {
    MetricsReport r;
    r.mcc = 0.25;
    CHECK(format_cell(aggregate({r}).mcc) == "25.00(0.00)");
  }
  SUBCASE("aggregate mean stays within the per-run range") {
    Rng rng(5);
    std::vector<MetricsReport> runs;
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 12; ++i) {
      MetricsReport r;
      r.g_mean = rng.uniform_real();
      lo = std::min(lo, r.g_mean);
      hi = std::max(hi, r.g_mean);
      runs.push_back(r);
    }
    const AggregateReport agg = aggregate(runs);
    CHECK(agg.g_mean.mean >= lo);
    CHECK(agg.g_mean.mean <= hi);
  }
  SUBCASE("empty aggregation is rejected") {
    CHECK_THROWS_AS(aggregate({}), ConfigError);
  }
}

TEST_SUITE_END();
