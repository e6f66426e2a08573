//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/response_parser.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace {
  using namespace revpref;

  TEST(ProbabilityResponseTest, DocumentedExamples) {
    EXPECT_EQ(parse_probability_response("No: 0.30\nYes: 0.70").p(), 0.70);
    EXPECT_EQ(parse_probability_response("No: 0.50\nYes: 0.50").p(), 0.50);
    EXPECT_ERROR_KIND(parse_probability_response("No: 0.40\nYes: 0.70"),
                      ErrorKind::kParse);
  }

  TEST(ProbabilityResponseTest, ToleranceAndLayout) {
    // Two-decimal rounding: 0.33 + 0.66 = 0.99 renormalizes.
    EXPECT_NEAR(parse_probability_response("No: 0.33\nYes: 0.66").p(),
                0.66 / 0.99, 1e-15);
    EXPECT_NEAR(parse_probability_response("No: 0.50\nYes: 0.52").p(),
                0.52 / 1.02, 1e-15);
    EXPECT_ERROR_KIND(parse_probability_response("No: 0.50\nYes: 0.53"),
                      ErrorKind::kParse);
    EXPECT_EQ(
        parse_probability_response("\n  Yes: 0.25  \r\n\n No:0.75\n\n").p(),
        0.25);
    EXPECT_EQ(parse_probability_response("no: 0.1\nYES: 0.9").p(), 0.9);
  }

  TEST(ProbabilityResponseTest, MalformedVariants) {
    for (const char *text:
         { "Yes: 0.70", "No: 0.30\nYes: seventy", "No: 0.30\nYes: 0.70\nMaybe",
           "No: 0.30\nYes: 0.70\nYes: 0.70", "No 0.30\nYes 0.70", "",
           "No: 0.30\nYes: 0.70x", "No: \nYes: 0.70" })
      EXPECT_ERROR_KIND(parse_probability_response(text), ErrorKind::kParse)
          << text;
    EXPECT_ERROR_KIND(parse_probability_response("No: 1.2\nYes: -0.2"),
                      ErrorKind::kRange);
  }

  TEST(DecisionResponseTest, DocumentedExamples) {
    EXPECT_EQ(parse_decision_response("Can decide: Yes\nDecision: Yes"),
              Action::kDiagnosePositive);
    EXPECT_EQ(parse_decision_response("Can decide: Yes\nDecision: No"),
              Action::kDiagnoseNegative);
    EXPECT_EQ(parse_decision_response("Can decide: No\nDecision: Yes"),
              Action::kDefer);
    EXPECT_ERROR_KIND(parse_decision_response("Can decide: Maybe\nDecision: Yes"),
                      ErrorKind::kParse);
  }

  TEST(DecisionResponseTest, ForcedChoiceIsKept) {
    const auto d = parse_decision_response_detail("Can decide: No\nDecision: No");
    EXPECT_EQ(d.action, Action::kDefer);
    EXPECT_EQ(d.forced_choice, Action::kDiagnoseNegative);
  }

  TEST(DecisionResponseTest, MalformedVariants) {
    for (const char *text:
         { "Can decide: Yes", "Decision: Yes", "Can decide: Yes\nDecision: 1",
           "Can decide: Yes\nDecision: Yes\nNote: sure",
           "Can decide: Yes\nCan decide: No\nDecision: Yes" })
      EXPECT_ERROR_KIND(parse_decision_response(text), ErrorKind::kParse)
          << text;
  }

  TEST(SelfReportTest, DocumentedExamples) {
    EXPECT_EQ(parse_self_report("False Positive: 1\nFalse Negative: 10\nDeferral: 2"),
              CostVector(1, 10, 2));
    EXPECT_ERROR_KIND(
        parse_self_report("False Positive: -1\nFalse Negative: 10\nDeferral: 2"),
        ErrorKind::kRange);
    EXPECT_EQ(parse_self_report("Deferral: 2\nFalse Positive: 1\nFalse Negative: 10"),
              CostVector(1, 10, 2));
  }

  TEST(SelfReportTest, MalformedVariants) {
    for (const char *text:
         { "False Positive: 1\nFalse Negative: 10",
           "False Positive: one\nFalse Negative: 10\nDeferral: 2",
           "False Positive: 1\nFalse Negative: 10\nDeferral: 2\nTrue Positive: 0",
           "False Positive: 1\nFalse Positive: 1\nDeferral: 2" })
      EXPECT_ERROR_KIND(parse_self_report(text), ErrorKind::kParse) << text;
  }
}  // namespace
