//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <ostream>

#include <gtest/gtest.h>

#include "revpref/error.hpp"

namespace revpref {
  inline void PrintTo(ErrorKind kind, std::ostream *os) {
    *os << to_string(kind);
  }
}  // namespace revpref

namespace revpref::testing {
  template <class Fn>
  ::testing::AssertionResult raises(Fn &&fn, ErrorKind expected,
                                    const char *text) {
    try {
      fn();
    } catch (const Error &e) {
      if (e.kind() == expected)
        return ::testing::AssertionSuccess();
      return ::testing::AssertionFailure()
             << text << " raised " << to_string(e.kind()) << " instead of "
             << to_string(expected) << ": " << e.what();
    }
    return ::testing::AssertionFailure()
           << text << " did not raise " << to_string(expected);
  }
}  // namespace revpref::testing

// Fails unless `stmt` throws revpref::Error of the given kind.
#define EXPECT_ERROR_KIND(stmt, expected)                                \
  EXPECT_TRUE(::revpref::testing::raises([&] { stmt; }, expected, #stmt))
