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

#include "pfr/random.hpp"

#include <algorithm>
#include <limits>

namespace pfr {

double Rng::uniform()
{
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t m)
{
  if (m == 0)
  {
    throw std::invalid_argument("Rng::below(0)");
  }
  std::uint64_t const limit = std::numeric_limits<std::uint64_t>::max() -
                              (std::numeric_limits<std::uint64_t>::max() % m + 1) % m;
  std::uint64_t r = next();
  while (r > limit)
  {
    r = next();
  }
  return r % m;
}

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial)
{
  return splitmix64(seed + (trial + 1) * 0x9E3779B97F4A7C15ull);
}

Dist random_dist(Rng &rng, int n, double zero_fraction)
{
  check_dim(n);
  std::vector<double> p(space_size(n), 0.0);
  bool                any = false;
  for (auto &v : p)
  {
    if (!rng.coin(zero_fraction))
    {
      v   = rng.uniform(0.05, 1.0);
      any = true;
    }
  }
  if (!any)
  {
    p[rng.below(p.size())] = 1.0;
  }
  return Dist::normalized(n, std::move(p));
}

F2Set random_set(Rng &rng, int n, std::size_t size)
{
  check_dim(n);
  std::size_t const nn = space_size(n);
  size                 = std::min(size, nn);
  // Partial Fisher-Yates over the whole space.
  std::vector<Element> all(nn);
  for (std::size_t i = 0; i < nn; ++i)
  {
    all[i] = static_cast<Element>(i);
  }
  for (std::size_t i = 0; i < size; ++i)
  {
    std::size_t const j = i + rng.below(nn - i);
    std::swap(all[i], all[j]);
  }
  all.resize(size);
  return F2Set(n, std::move(all));
}

F2Set random_nonempty_set(Rng &rng, int n)
{
  return random_set(rng, n, 1 + rng.below(space_size(n)));
}

Subspace random_subspace(Rng &rng, int n, int rank)
{
  check_dim(n);
  rank = std::clamp(rank, 0, n);
  std::vector<Element> vecs;
  Subspace             v(n);
  while (v.rank() < rank)
  {
    vecs.push_back(static_cast<Element>(rng.below(space_size(n))));
    v = Subspace::span(vecs, n);
  }
  return v;
}

Joint2 random_joint(Rng &rng, int n_x, int n_z, double zero_fraction)
{
  Dist flat = random_dist(rng, n_x + n_z, zero_fraction);
  return Joint2(n_x, n_z, std::vector<double>(flat.probs().begin(), flat.probs().end()));
}

std::vector<Element> random_invertible_map(Rng &rng, int n)
{
  std::vector<Element> images(static_cast<std::size_t>(n));
  do
  {
    for (auto &e : images)
    {
      e = static_cast<Element>(rng.below(space_size(n)));
    }
  } while (Subspace::span(images, n).rank() != n);
  return images;
}

}  // namespace pfr
