// Copyright 2026 The qmask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>

namespace qmask {

/// base^exp in 64-bit unsigned arithmetic; nullopt on overflow.
constexpr std::optional<std::uint64_t> checked_pow(std::uint64_t base,
                                                   std::uint64_t exp) {
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
            return std::nullopt;
        }
        result *= base;
    }
    return result;
}

/// Smallest t >= 0 with base^t >= value. Requires base >= 2.
constexpr std::uint64_t ceil_log(std::uint64_t value, std::uint64_t base) {
    std::uint64_t t = 0;
    std::uint64_t power = 1;
    while (power < value) {
        if (power > std::numeric_limits<std::uint64_t>::max() / base) {
            return t + 1;
        }
        power *= base;
        ++t;
    }
    return t;
}

} // namespace qmask
