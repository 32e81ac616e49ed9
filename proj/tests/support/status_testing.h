// Copyright 2026 The Netshuffle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NETSHUFFLE_TESTS_SUPPORT_STATUS_TESTING_H_
#define NETSHUFFLE_TESTS_SUPPORT_STATUS_TESTING_H_

#include <gtest/gtest.h>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define NETSHUFFLE_TESTING_CONCAT_INNER(a, b) a##b
#define NETSHUFFLE_TESTING_CONCAT(a, b) NETSHUFFLE_TESTING_CONCAT_INNER(a, b)

namespace netshuffle::testing_internal {

inline const absl::Status& ToStatus(const absl::Status& status) {
  return status;
}
template <typename T>
absl::Status ToStatus(const absl::StatusOr<T>& status_or) {
  return status_or.status();
}

}  // namespace netshuffle::testing_internal

#define EXPECT_OK(expr) \
  EXPECT_EQ(::netshuffle::testing_internal::ToStatus(expr), absl::OkStatus())
#define ASSERT_OK(expr) \
  ASSERT_EQ(::netshuffle::testing_internal::ToStatus(expr), absl::OkStatus())

#define ASSERT_OK_AND_ASSIGN(lhs, rexpr)                                  \
  auto NETSHUFFLE_TESTING_CONCAT(_statusor_, __LINE__) = (rexpr);         \
  ASSERT_TRUE(NETSHUFFLE_TESTING_CONCAT(_statusor_, __LINE__).ok())       \
      << NETSHUFFLE_TESTING_CONCAT(_statusor_, __LINE__).status();        \
  lhs = *std::move(NETSHUFFLE_TESTING_CONCAT(_statusor_, __LINE__))

#endif  // NETSHUFFLE_TESTS_SUPPORT_STATUS_TESTING_H_
