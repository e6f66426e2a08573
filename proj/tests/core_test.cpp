//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/core.hpp"

#include <cmath>
#include <limits>
#include <random>
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

  TEST(BeliefTest, RejectsOutOfRange) {
    EXPECT_NO_THROW(Belief(0.0));
    EXPECT_NO_THROW(Belief(1.0));
    EXPECT_ERROR_KIND(Belief(-0.01), ErrorKind::kRange);
    EXPECT_ERROR_KIND(Belief(1.01), ErrorKind::kRange);
    EXPECT_ERROR_KIND(Belief(std::nan("")), ErrorKind::kRange);
  }

  TEST(CostVectorTest, ValidatesAndDerivesRatios) {
    const CostVector c(2.0, 8.0, 0.5);
    EXPECT_DOUBLE_EQ(c.fn_fp(), 4.0);
    EXPECT_DOUBLE_EQ(c.defer_fp(), 0.25);
    EXPECT_ERROR_KIND(CostVector(-1.0, 1.0, 1.0), ErrorKind::kRange);
    EXPECT_ERROR_KIND(
        CostVector(1.0, std::numeric_limits<double>::infinity(), 1.0),
        ErrorKind::kRange);
    EXPECT_ERROR_KIND(CostVector(0.0, 1.0, 1.0).fn_fp(),
                      ErrorKind::kUndefinedRatio);
    EXPECT_ERROR_KIND(CostVector(0.0, 1.0, 1.0).defer_fp(),
                      ErrorKind::kUndefinedRatio);
  }

  TEST(DecisionRegimeTest, KeysRoundTrip) {
    for (const auto &r:
         { DecisionRegime::baseline(), DecisionRegime::elicited_prob(),
           DecisionRegime::true_prob(), DecisionRegime::cost_prompt("fn4-d0.3"),
           DecisionRegime { DecisionRegime::Kind::kSelfReportGlobal, {} },
           DecisionRegime { DecisionRegime::Kind::kSelfReportCase, {} } })
      EXPECT_EQ(DecisionRegime::from_key(r.key()), r) << r.key();
    EXPECT_EQ(DecisionRegime::cost_prompt("x").key(), "cost:x");
    EXPECT_ERROR_KIND(DecisionRegime::from_key("prompt_b"), ErrorKind::kParse);
    EXPECT_ERROR_KIND(DecisionRegime::from_key("cost:"), ErrorKind::kParse);
  }

  TEST(RealizedLossTest, WorkedValues) {
    const CostVector c(1.0, 4.0, 0.5);
    EXPECT_EQ(realized_loss(c, kYes, k1), 0.0);
    EXPECT_EQ(realized_loss(c, kDefer, k0), 0.5);
    EXPECT_EQ(realized_loss(c, kNo, k1), 4.0);
    EXPECT_EQ(realized_loss(c, kYes, k0), 1.0);
    EXPECT_EQ(realized_loss(c, kNo, k0), 0.0);
    EXPECT_EQ(realized_loss(c, kDefer, k1), 0.5);
  }

  TEST(ExpectedLossTest, WorkedValues) {
    EXPECT_DOUBLE_EQ(expected_loss({ 1, 1, 0.3 }, Belief(0.0), kYes), 1.0);
    EXPECT_DOUBLE_EQ(expected_loss({ 1, 1, 0.3 }, Belief(0.9), kNo), 0.9);
    EXPECT_DOUBLE_EQ(expected_loss({ 2, 5, 0.3 }, Belief(0.5), kDefer), 0.3);
  }

  TEST(ExpectedLossTest, AgreesWithRealizedLossExpectation) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0), c(0.0, 10.0);
    for (int t = 0; t < 200; ++t) {
      const CostVector cost(c(rng), c(rng), c(rng));
      const double p = u(rng);
      for (const auto a: kAllActions) {
        const double oracle = p * realized_loss(cost, a, k1)
                              + (1 - p) * realized_loss(cost, a, k0);
        EXPECT_NEAR(expected_loss(cost, Belief(p), a), oracle, 1e-12);
      }
    }
  }

  TEST(OptimalActionTest, WorkedValuesAndTies) {
    EXPECT_EQ(optimal_action({ 1, 1, 10 }, Belief(0.7)), kYes);
    EXPECT_EQ(optimal_action({ 1, 1, 0.3 }, Belief(0.5)), kDefer);
    EXPECT_EQ(optimal_action({ 1, 1, 1 }, Belief(0.5)), kYes);
    // No vs defer tie at p = 0.125 resolves to No.
    EXPECT_EQ(optimal_action({ 1, 4, 0.5 }, Belief(0.125)), kNo);
  }

  // Brute-force argmin over the three actions in declaration order.
  Action argmin_oracle(const CostVector &c, double p) {
    const double losses[3] = { c.c_fp() * (1 - p), c.c_fn() * p,
                               c.c_defer() };
    int best = 0;
    for (int a = 1; a < 3; ++a) {
      if (losses[a] < losses[best])
        best = a;
    }
    return static_cast<Action>(best);
  }

  TEST(OptimalActionTest, MatchesBruteForceAndScaleInvariance) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0), c(0.01, 20.0);
    for (int t = 0; t < 500; ++t) {
      const CostVector cost(c(rng), c(rng), c(rng));
      const double p = u(rng);
      const Action a = optimal_action(cost, Belief(p));
      EXPECT_EQ(a, argmin_oracle(cost, p));
      for (const double lambda: { 0.5, 3.0, 1000.0 })
        EXPECT_EQ(optimal_action(cost.scaled(lambda), Belief(p)), a);
    }
  }

  TEST(OptimalActionTest, ThresholdStructure) {
    // Along increasing p: a block of No, then optionally Defer, then Yes.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> c(0.05, 10.0);
    for (int t = 0; t < 100; ++t) {
      const CostVector cost(c(rng), c(rng), c(rng));
      int stage = 0;  // 0 = No, 1 = Defer, 2 = Yes
      for (int i = 0; i <= 1000; ++i) {
        const Action a = optimal_action(cost, Belief(i / 1000.0));
        const int s = a == kNo ? 0 : a == kDefer ? 1 : 2;
        EXPECT_GE(s, stage) << "cost " << cost.c_fp() << "," << cost.c_fn()
                            << "," << cost.c_defer() << " p " << i / 1000.0;
        stage = s;
      }
    }
  }

  TEST(TotalBenchmarkLossTest, WorkedValues) {
    const BenchmarkCost b { "b", { 1, 1, 0.3 } };
    const std::vector<Action> defers { kDefer, kDefer };
    const std::vector<State> states { k0, k1 };
    EXPECT_DOUBLE_EQ(total_benchmark_loss(b, defers, states), 0.6);

    const std::vector<Action> correct { kNo, kYes };
    EXPECT_EQ(total_benchmark_loss(b, correct, states), 0.0);

    const BenchmarkCost b2 { "b2", { 1, 4, 0.5 } };
    const std::vector<Action> mixed { kNo, kYes };
    const std::vector<State> ones { k1, k1 };
    EXPECT_DOUBLE_EQ(total_benchmark_loss(b2, mixed, ones), 4.0);
  }

  TEST(TotalBenchmarkLossTest, ErrorsAndAdditivity) {
    const BenchmarkCost b { "b", { 1, 2, 0.3 } };
    const std::vector<Action> one { kYes };
    const std::vector<State> two { k0, k1 };
    EXPECT_ERROR_KIND(total_benchmark_loss(b, one, two),
                      ErrorKind::kDimension);
    EXPECT_ERROR_KIND(total_benchmark_loss(b, {}, {}),
                      ErrorKind::kEmptyDataset);

    std::mt19937_64 rng(1);
    std::vector<Action> actions;
    std::vector<State> states;
    for (int i = 0; i < 40; ++i) {
      actions.push_back(static_cast<Action>(rng() % 3));
      states.push_back(static_cast<State>(rng() % 2));
    }
    const std::span<const Action> a(actions);
    const std::span<const State> s(states);
    const double whole = total_benchmark_loss(b, a, s);
    const double parts = total_benchmark_loss(b, a.first(17), s.first(17))
                         + total_benchmark_loss(b, a.subspan(17), s.subspan(17));
    EXPECT_NEAR(whole, parts, 1e-12);
  }
}  // namespace
