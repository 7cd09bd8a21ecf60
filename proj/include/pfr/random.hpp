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

// Seeded, portable randomness for property suites.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Reals and bounded integers are derived from raw 64-bit outputs by
// the rules below (not by <random> distributions, whose algorithms vary
// between standard libraries), so a suite run is reproducible anywhere:
//
//   uniform()  = (next() >> 11) * 2^-53
//   below(m)   = next() % m, redrawing while next() >= 2^64 - (2^64 mod m)
//   trial_seed(seed, i) = splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15)

#include <cstdint>
#include <random>
#include <vector>

#include "pfr/info.hpp"

namespace pfr {

class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(seed)
  {}

  std::uint64_t next() { return engine_(); }
  double        uniform();
  double        uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t m);
  bool          coin(double p) { return uniform() < p; }

private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// Dense random law; each entry is zero with probability zero_fraction and
/// otherwise drawn from [0.05, 1) before normalisation. Never all-zero.
Dist random_dist(Rng &rng, int n, double zero_fraction = 0.0);
/// Random subset with exactly `size` distinct elements.
F2Set random_set(Rng &rng, int n, std::size_t size);
/// Random subset with a size drawn uniformly from [1, 2^n].
F2Set random_nonempty_set(Rng &rng, int n);
Subspace random_subspace(Rng &rng, int n, int rank);
Joint2   random_joint(Rng &rng, int n_x, int n_z, double zero_fraction = 0.0);
/// Images of the unit vectors under a random invertible linear map.
std::vector<Element> random_invertible_map(Rng &rng, int n);

}  // namespace pfr
