#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The pfr-f2 Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Seeded randomized property suites over the whole library. Trial i draws
// from Rng(trial_seed(seed, i)), so a suite's outcome depends only on
// (n, trials, seed) and not on how trials are spread over workers.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pfr/checks.hpp"

namespace pfr {

enum class Suite
{
  kMeasures,
  kFibring,
  kBsg,
  kTau,
  kBridge,
};

std::string_view     suite_name(Suite s);
std::optional<Suite> parse_suite(std::string_view name);

struct SuiteOptions
{
  int           n      = 3;
  int           trials = 100;
  std::uint64_t seed   = 0;
  int           jobs   = 1;
};

inline constexpr int kSuiteMaxDim = 8;

/// Default tolerances, in bits.
inline constexpr double kIdentityTolerance    = 1e-9;
inline constexpr double kInequalityTolerance  = 1e-9;
inline constexpr double kConvolutionTolerance = 1e-10;
inline constexpr double kOracleTolerance      = 1e-6;

/// Runs every trial of the suite. Throws std::invalid_argument unless
/// 1 <= n <= kSuiteMaxDim, trials >= 1 and jobs >= 1.
CheckReport run_suite(Suite suite, SuiteOptions const &options);

/// One trial on its own; run_suite merges these in trial order.
CheckReport run_suite_trial(Suite suite, int n, std::uint64_t seed, int trial);

}  // namespace pfr
