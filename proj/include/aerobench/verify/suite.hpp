//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_VERIFY_SUITE_HPP
#define AEROBENCH_VERIFY_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace aerobench::verify {

/// Self-checks of the numerical kernels against brute-force oracles, run by
/// `bench verify`.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<std::string> list_checks();

/// Throws std::invalid_argument for an unknown name.
CheckResult run_check(const std::string &name, std::uint64_t seed = 1);

std::vector<CheckResult> run_all_checks(std::uint64_t seed = 1);

}  // namespace aerobench::verify

#endif  // AEROBENCH_VERIFY_SUITE_HPP
