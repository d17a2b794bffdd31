//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_VERSION_HPP
#define AEROBENCH_VERSION_HPP

namespace aerobench {

inline constexpr const char *kVersion = "0.1.0";

}  // namespace aerobench

#endif  // AEROBENCH_VERSION_HPP
