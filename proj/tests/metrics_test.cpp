//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/metrics.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace {
  using namespace revpref;

  constexpr Action kYes = Action::kDiagnosePositive;
  constexpr Action kNo = Action::kDiagnoseNegative;
  constexpr Action kDefer = Action::kDefer;
  constexpr State k0 = State::kAbsent;
  constexpr State k1 = State::kPresent;

  CaseRecord record(std::string id, double p, Action baseline) {
    CaseRecord r;
    r.case_id = std::move(id);
    r.domain = "d";
    r.p_elicited = Belief(p);
    r.actions[DecisionRegime::baseline()] = baseline;
    return r;
  }

  TEST(IlfcTest, CountsOptimalActions) {
    const CostVector cost(1, 1, 0.3);
    // Optimal: p = 0.9 -> Yes, 0.1 -> No, 0.5 -> Defer.
    std::vector<CaseRecord> cases { record("a", 0.9, kYes),
                                    record("b", 0.1, kNo),
                                    record("c", 0.5, kDefer),
                                    record("d", 0.9, kNo) };
    EXPECT_DOUBLE_EQ(ilfc(std::span(cases).first(3),
                          DecisionRegime::baseline(),
                          BeliefSource::kElicited, cost),
                     100.0);
    EXPECT_DOUBLE_EQ(ilfc(std::span(cases).subspan(2),
                          DecisionRegime::baseline(),
                          BeliefSource::kElicited, cost),
                     50.0);
    EXPECT_DOUBLE_EQ(ilfc(cases, DecisionRegime::baseline(),
                          BeliefSource::kElicited, cost.scaled(7.0)),
                     75.0);
  }

  TEST(IlfcTest, OracleActionsScoreFull) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const CostVector cost(2, 3, 0.4);
    std::vector<CaseRecord> cases;
    for (int i = 0; i < 300; ++i) {
      const double p = u(rng);
      cases.push_back(
          record(std::to_string(i), p, optimal_action(cost, Belief(p))));
    }
    EXPECT_EQ(ilfc(cases, DecisionRegime::baseline(), BeliefSource::kElicited,
                   cost),
              100.0);
  }

  TEST(IlfcTest, PerCaseCosts) {
    std::vector<CaseRecord> cases { record("a", 0.5, kDefer),
                                    record("b", 0.5, kYes) };
    cases[0].self_report_case = CostVector(1, 1, 0.1);
    cases[1].self_report_case = CostVector(1, 1, 10);
    const double v = ilfc(cases, DecisionRegime::baseline(),
                          BeliefSource::kElicited,
                          [](const CaseRecord &r) { return *r.self_report_case; });
    EXPECT_EQ(v, 100.0);
  }

  TEST(IlfcTest, IncompleteRecordsNameTheCase) {
    std::vector<CaseRecord> cases { record("ok", 0.5, kYes),
                                    record("lonely", 0.5, kYes) };
    try {
      ilfc(cases, DecisionRegime::true_prob(), BeliefSource::kElicited,
           { 1, 1, 1 });
      ADD_FAILURE() << "no error";
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::kIncompleteRecord);
      EXPECT_NE(std::string(e.what()).find("'ok'"), std::string::npos);
    }
    cases[0].p_true = Belief(0.2);
    try {
      ilfc(cases, DecisionRegime::baseline(), BeliefSource::kTrue,
           { 1, 1, 1 });
      ADD_FAILURE() << "no error";
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::kIncompleteRecord);
      EXPECT_NE(std::string(e.what()).find("lonely"), std::string::npos);
    }
  }

  TEST(CounterfactualTest, Identities) {
    const BenchmarkCost bench { "b", { 1, 1, 0.3 } };
    const std::vector<Belief> p { Belief(0.2), Belief(0.5), Belief(0.7) };
    const std::vector<State> s { k0, k1, k1 };
    EXPECT_EQ(counterfactual_reduction(bench, { 1, 4, 0.5 }, p, { 1, 4, 0.5 },
                                       p, s),
              0.0);

    // (1, 1, 0) defers everywhere in (0, 1); certain beliefs under the
    // benchmark decide correctly.
    const std::vector<Belief> certain { Belief(0.0), Belief(1.0), Belief(1.0) };
    EXPECT_EQ(counterfactual_reduction(bench, { 1, 1, 0 }, p, bench.cost,
                                       certain, s),
              100.0);
  }

  TEST(CounterfactualTest, HandComputedReduction) {
    // Baseline (1,1,0.3) at these beliefs: Defer, Defer, Yes.
    // Counterfactual (1,1,10): No, Yes, Yes. States 0, 0, 1.
    // Benchmark (1,2,0.5) losses: baseline 0.5+0.5+0 = 1; new 0+1+0 = 1.
    const BenchmarkCost bench { "b", { 1, 2, 0.5 } };
    const std::vector<Belief> p { Belief(0.4), Belief(0.6), Belief(0.9) };
    const std::vector<State> s { k0, k0, k1 };
    EXPECT_DOUBLE_EQ(
        counterfactual_reduction(bench, { 1, 1, 0.3 }, p, { 1, 1, 10 }, p, s),
        0.0);
    const std::vector<State> s2 { k0, k1, k1 };
    // Baseline loss 1; new loss 0 -> 100.
    EXPECT_DOUBLE_EQ(
        counterfactual_reduction(bench, { 1, 1, 0.3 }, p, { 1, 1, 10 }, p, s2),
        100.0);
  }

  TEST(CounterfactualTest, Errors) {
    const BenchmarkCost bench { "b", { 1, 1, 0.3 } };
    const std::vector<Belief> certain { Belief(0.0), Belief(1.0) };
    const std::vector<State> s { k0, k1 };
    EXPECT_ERROR_KIND(counterfactual_reduction(bench, { 1, 1, 0.3 }, certain,
                                               { 1, 1, 0.3 }, certain, s),
                      ErrorKind::kUndefinedDenominator);
    const std::vector<Belief> one { Belief(0.3) };
    EXPECT_ERROR_KIND(counterfactual_reduction(bench, { 1, 1, 0.3 }, one,
                                               { 1, 1, 0.3 }, certain, s),
                      ErrorKind::kDimension);
  }

  TEST(RealizedReductionTest, WorkedValues) {
    const BenchmarkCost bench { "b", { 1, 1, 0.3 } };
    const std::vector<Action> defer { kDefer, kDefer, kDefer };
    const std::vector<Action> correct { kNo, kYes, kYes };
    const std::vector<State> s { k0, k1, k1 };
    EXPECT_EQ(realized_reduction(bench, defer, defer, s), 0.0);
    EXPECT_EQ(realized_reduction(bench, defer, correct, s), 100.0);
    EXPECT_ERROR_KIND(realized_reduction(bench, correct, defer, s),
                      ErrorKind::kUndefinedDenominator);
    // Defer -> one wrong Yes: 0.9 -> 1.0.
    const std::vector<Action> worse { kYes, kYes, kYes };
    EXPECT_NEAR(realized_reduction(bench, defer, worse, s),
                100.0 * (0.9 - 1.0) / 0.9, 1e-12);
  }

  TEST(SteeringProgressTest, WorkedValues) {
    EXPECT_EQ(steering_progress(8, 8, 2), 0.0);
    EXPECT_EQ(steering_progress(8, 2, 2), 1.0);
    EXPECT_EQ(steering_progress(8, 16, 2), -0.5);
    EXPECT_EQ(steering_progress(8, 1, 2), 1.5);
    // Baseline below the target.
    EXPECT_EQ(steering_progress(0.5, 1, 2), 0.5);
  }

  TEST(SteeringProgressTest, ReciprocalInvariance) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
      const double b = std::exp2(u(rng)), s = std::exp2(u(rng)),
                   t = std::exp2(u(rng));
      EXPECT_NEAR(steering_progress(b, s, t),
                  steering_progress(1 / b, 1 / s, 1 / t), 1e-9);
    }
  }

  TEST(SteeringProgressTest, Errors) {
    EXPECT_ERROR_KIND(steering_progress(2, 3, 2), ErrorKind::kUndefinedProgress);
    EXPECT_ERROR_KIND(steering_progress(0, 3, 2), ErrorKind::kParameter);
    EXPECT_ERROR_KIND(steering_progress(1, -3, 2), ErrorKind::kParameter);
  }

  TEST(ClassifySteeringTest, Bands) {
    EXPECT_EQ(classify_steering(-0.5), SteeringClass::kWrong);
    EXPECT_EQ(classify_steering(-1e-12), SteeringClass::kWrong);
    EXPECT_EQ(classify_steering(0.0), SteeringClass::kUnder);
    EXPECT_EQ(classify_steering(0.4), SteeringClass::kUnder);
    EXPECT_EQ(classify_steering(0.8), SteeringClass::kTarget);
    EXPECT_EQ(classify_steering(1.0), SteeringClass::kTarget);
    EXPECT_EQ(classify_steering(1.2), SteeringClass::kTarget);
    EXPECT_EQ(classify_steering(1.21), SteeringClass::kOver);
    EXPECT_EQ(classify_steering(1.3), SteeringClass::kOver);
    EXPECT_ERROR_KIND(classify_steering(std::nan("")), ErrorKind::kParameter);
    EXPECT_ERROR_KIND(classify_steering(INFINITY), ErrorKind::kParameter);
  }

  TEST(SteeringTallyTest, CountsAndExclusions) {
    SteeringTally t;
    t.add(8, 16, 2);  // wrong
    t.add(8, 2, 2);   // target
    t.add(4, 1, 1);   // target
    t.add(0.5, 2, 2); // target
    t.add(2, 5, 2);   // excluded, b = 0
    EXPECT_EQ(t.counts, (std::array<int, 4> { 1, 0, 3, 0 }));
    EXPECT_EQ(t.excluded, 1);
    EXPECT_EQ(t.total(), 4);
  }

  TEST(PearsonTest, WorkedValues) {
    const std::vector<double> x { 1, 2, 3, 4 };
    std::vector<double> y;
    for (const double v: x)
      y.push_back(2 * v + 3);
    EXPECT_NEAR(pearson_r(x, y), 1.0, 1e-15);
    const std::vector<double> neg { -1, -2, -3, -4 };
    EXPECT_NEAR(pearson_r(x, neg), -1.0, 1e-15);
    const std::vector<double> y2 { 2, 1, 4, 3 };
    EXPECT_NEAR(pearson_r(x, y2), 0.6, 1e-15);
  }

  TEST(PearsonTest, AffineInvarianceAndErrors) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z;
    std::vector<double> x(50), y(50), xt(50), yt(50);
    for (int i = 0; i < 50; ++i) {
      x[i] = z(rng);
      y[i] = x[i] + z(rng);
      xt[i] = 3.5 * x[i] - 2;
      yt[i] = 0.1 * y[i] + 40;
    }
    EXPECT_NEAR(pearson_r(x, y), pearson_r(xt, yt), 1e-12);

    const std::vector<double> flat { 1, 1, 1 }, three { 1, 2, 3 };
    EXPECT_ERROR_KIND(pearson_r(flat, three), ErrorKind::kDegenerateInput);
    EXPECT_ERROR_KIND(pearson_r(x, three), ErrorKind::kDimension);
  }

  TEST(RmsdTest, WorkedValues) {
    const std::vector<Belief> a { Belief(0.2), Belief(0.4) };
    const std::vector<Belief> b { Belief(0.4), Belief(0.8) };
    EXPECT_EQ(rmsd(a, a), 0.0);
    EXPECT_NEAR(rmsd(a, b), std::sqrt(0.1), 1e-15);
    EXPECT_NEAR(rmsd(a, b), 0.31623, 5e-6);
    const std::vector<Belief> c { Belief(0), Belief(1) };
    const std::vector<Belief> d { Belief(1), Belief(0) };
    EXPECT_EQ(rmsd(c, d), 1.0);
    EXPECT_ERROR_KIND(rmsd({}, {}), ErrorKind::kEmptyDataset);
    EXPECT_ERROR_KIND(rmsd(a, std::span(c).first(1)), ErrorKind::kDimension);
  }

  TEST(RmsdTest, IsAMetric) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&] {
      std::vector<Belief> v;
      for (int i = 0; i < 10; ++i)
        v.emplace_back(u(rng));
      return v;
    };
    for (int t = 0; t < 200; ++t) {
      const auto a = draw(), b = draw(), c = draw();
      EXPECT_GE(rmsd(a, b), 0.0);
      EXPECT_EQ(rmsd(a, b), rmsd(b, a));
      EXPECT_LE(rmsd(a, c), rmsd(a, b) + rmsd(b, c) + 1e-12);
    }
  }
}  // namespace
