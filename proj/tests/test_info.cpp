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

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "gtest/gtest.h"

#include "oracles.hpp"
#include "pfr/info.hpp"
#include "pfr/random.hpp"

namespace pfr {
namespace {

constexpr double kTol = 1e-9;

F2Set a3()
{
  return F2Set(2, {0b00, 0b01, 0b10});
}

Joint2 joint_of(int nx, int nz, std::vector<std::pair<std::pair<Element, Element>, double>> cells)
{
  std::vector<double> p(space_size(nx) * space_size(nz), 0.0);
  for (auto const &[xz, v] : cells)
  {
    p[(std::size_t{xz.first} << nz) | xz.second] = v;
  }
  return Joint2(nx, nz, p);
}

TEST(DistTest, Validation)
{
  EXPECT_THROW(Dist(2, {0.5, 0.5}), DimensionError);
  EXPECT_THROW(Dist(1, {0.7, 0.7}), std::invalid_argument);
  EXPECT_THROW(Dist(1, {1.5, -0.5}), std::invalid_argument);
  EXPECT_NO_THROW(Dist(1, {0.25, 0.75}));
  EXPECT_THROW(Dist::normalized(2, {0, 0, 0, 0}), std::invalid_argument);
  EXPECT_DOUBLE_EQ(Dist::normalized(1, {1, 3})[1], 0.75);
}

TEST(DistTest, TranslationAndLinearMapsPermute)
{
  Rng        rng(2);
  Dist const p = random_dist(rng, 4, 0.3);
  Dist const t = p.translated(0b1010);
  for (Element x = 0; x < 16; ++x)
  {
    EXPECT_EQ(t[x ^ 0b1010], p[x]);
  }
  auto const map = random_invertible_map(rng, 4);
  Dist const m   = p.mapped(map);
  auto       a   = oracle::probs(p);
  auto       b   = oracle::probs(m);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_THROW(p.mapped(std::vector<Element>{1, 2, 3, 0}), std::invalid_argument);
}

TEST(EntropyTest, Examples)
{
  EXPECT_NEAR(entropy(Dist::uniform(3)), 3.0, 1e-12);
  EXPECT_EQ(entropy(Dist::point_mass(3, 5)), 0.0);
  EXPECT_NEAR(entropy(Dist::uniform_on(a3())), std::log2(3.0), 1e-12);
  EXPECT_NEAR(entropy(Dist::uniform_on(a3())), 1.584963, 1e-6);
}

TEST(EntropyTest, AgreesWithOracle)
{
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial)
  {
    Dist const p = random_dist(rng, 1 + static_cast<int>(rng.below(8)), 0.4);
    EXPECT_NEAR(entropy(p), oracle::entropy(p), 1e-12);
  }
}

TEST(KlTest, Examples)
{
  Rng        rng(6);
  Dist const p = random_dist(rng, 3, 0.2);
  EXPECT_EQ(kl_divergence(p, p), 0.0);
  EXPECT_NEAR(kl_divergence(Dist::point_mass(3, 0), Dist::uniform(3)), 3.0, 1e-12);
  Dist const two = Dist::uniform_on(F2Set(2, {0b00, 0b01}));
  EXPECT_EQ(kl_divergence(two, Dist::point_mass(2, 0)), std::numeric_limits<double>::infinity());
}

TEST(MutualInformationTest, Examples)
{
  Rng rng(1);
  EXPECT_NEAR(mutual_information(Joint2::product(random_dist(rng, 2), random_dist(rng, 3))), 0.0,
              kTol);

  // X = Z uniform on 2^2 points.
  std::vector<std::pair<std::pair<Element, Element>, double>> diag;
  for (Element x = 0; x < 4; ++x)
  {
    diag.push_back({{x, x}, 0.25});
  }
  EXPECT_NEAR(mutual_information(joint_of(2, 2, diag)), 2.0, 1e-12);

  // Z = X + c for a fixed c, with X non-uniform.
  Dist const                                                  x = random_dist(rng, 2);
  std::vector<std::pair<std::pair<Element, Element>, double>> shifted;
  for (Element e = 0; e < 4; ++e)
  {
    shifted.push_back({{e, e ^ 0b11}, x[e]});
  }
  EXPECT_NEAR(mutual_information(joint_of(2, 2, shifted)), entropy(x), 1e-12);
}

TEST(ConditionalEntropyTest, Examples)
{
  Rng        rng(9);
  Dist const x = random_dist(rng, 3);
  EXPECT_NEAR(conditional_entropy(Joint2::product(x, random_dist(rng, 2))), entropy(x), 1e-12);

  // X a function of Z.
  std::vector<std::pair<std::pair<Element, Element>, double>> fn;
  for (Element z = 0; z < 4; ++z)
  {
    fn.push_back({{z & 1u, z}, 0.25});
  }
  EXPECT_NEAR(conditional_entropy(joint_of(1, 2, fn)), 0.0, 1e-12);

  // X uniform on two points given each of two equally likely z.
  Joint2 const two =
      joint_of(2, 1, {{{0, 0}, 0.25}, {{1, 0}, 0.25}, {{2, 1}, 0.25}, {{3, 1}, 0.25}});
  EXPECT_NEAR(conditional_entropy(two), 1.0, 1e-12);
  EXPECT_NEAR(entropy(CondFamily::of_joint(two)), 1.0, 1e-12);
}

TEST(CondFamilyTest, DropsLightConditionsAndRenormalises)
{
  std::vector<Condition> conds{{0, 0.5, Dist::point_mass(2, 0)},
                               {1, 1e-12, Dist::point_mass(2, 1)},
                               {2, 0.5, Dist::point_mass(2, 2)}};
  CondFamily const       f(conds);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[1].label, 2u);
  EXPECT_DOUBLE_EQ(f[0].weight + f[1].weight, 1.0);
  EXPECT_DOUBLE_EQ(f.marginal()[0], 0.5);
}

TEST(ConvolutionTest, Examples)
{
  EXPECT_EQ(xor_convolve(Dist::point_mass(3, 5), Dist::point_mass(3, 3)), Dist::point_mass(3, 6));

  Rng            rng(2);
  Subspace const v  = random_subspace(rng, 4, 2);
  Dist const     uv = Dist::uniform_on(v);
  Dist const     vv = xor_convolve(uv, uv);
  for (Element x = 0; x < 16; ++x)
  {
    EXPECT_NEAR(vv[x], uv[x], 1e-15);
  }

  // Enumerating the nine ordered pairs of {00, 01, 10}: 00 arises three
  // times and each other element twice.
  Dist const          ua = Dist::uniform_on(a3());
  std::vector<double> expected(4, 0.0);
  for (Element a : a3())
  {
    for (Element b : a3())
    {
      expected[a ^ b] += 1.0 / 9.0;
    }
  }
  EXPECT_NEAR(expected[0], 3.0 / 9.0, 1e-15);
  for (auto method :
       {ConvolutionMethod::kAuto, ConvolutionMethod::kDirect, ConvolutionMethod::kWalshHadamard})
  {
    Dist const c = xor_convolve(ua, ua, method);
    for (Element x = 0; x < 4; ++x)
    {
      EXPECT_NEAR(c[x], expected[x], 1e-15);
    }
  }
}

TEST(ConvolutionTest, MethodsAgreeWithOracle)
{
  Rng rng(12);
  for (int n = 1; n <= 8; ++n)
  {
    for (int trial = 0; trial < 10; ++trial)
    {
      Dist const x      = random_dist(rng, n, 0.5);
      Dist const y      = random_dist(rng, n, 0.2);
      auto const brute  = oracle::convolve(oracle::probs(x), oracle::probs(y));
      Dist const fast   = xor_convolve(x, y, ConvolutionMethod::kWalshHadamard);
      Dist const direct = xor_convolve(x, y, ConvolutionMethod::kDirect);
      for (std::size_t e = 0; e < brute.size(); ++e)
      {
        ASSERT_NEAR(fast.probs()[e], brute[e], 1e-10);
        ASSERT_NEAR(direct.probs()[e], brute[e], 1e-10);
      }
    }
  }
}

TEST(ConvolutionTest, FwhtIsAnInvolutionUpToScale)
{
  Rng                 rng(3);
  std::vector<double> v(64);
  for (auto &e : v)
  {
    e = rng.uniform(-1.0, 1.0);
  }
  auto w = v;
  fwht(w);
  fwht(w);
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    EXPECT_NEAR(w[i] / 64.0, v[i], 1e-14);
  }
}

TEST(ConvolutionTest, LargeDimension)
{
  Rng          rng(20);
  Dist const   x     = random_dist(rng, 20);
  Dist const   y     = random_dist(rng, 20);
  auto const   start = std::chrono::steady_clock::now();
  Dist const   z     = xor_convolve(x, y, ConvolutionMethod::kWalshHadamard);
  double const secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 1.0);
  EXPECT_NEAR(entropy(z), 20.0, 1e-2);
}

TEST(MeasureProperties, RandomInstances)
{
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial)
  {
    int const    n  = 1 + static_cast<int>(rng.below(4));
    Joint2 const j  = random_joint(rng, n, 2, 0.3);
    double const hx = entropy(j.marginal_x());
    double const hz = entropy(j.marginal_z());
    EXPECT_LE(entropy(j), hx + hz + kTol);
    EXPECT_GE(mutual_information(j), -kTol);
    EXPECT_NEAR(conditional_entropy(j), entropy(j) - hz, kTol);

    Dist const p = random_dist(rng, n, 0.3);
    Dist const q = random_dist(rng, n);
    for (double lambda : {0.0, 0.25, 0.5, 1.0})
    {
      Dist const m = mixture(p, q, lambda);
      EXPECT_GE(entropy(m), lambda * entropy(p) + (1 - lambda) * entropy(q) - kTol);
    }
    EXPECT_GE(kl_divergence(p, q), -kTol);

    auto const map = random_invertible_map(rng, n);
    EXPECT_NEAR(entropy(p.mapped(map)), entropy(p), kTol);
    EXPECT_NEAR(kl_divergence(p.mapped(map), q.mapped(map)), kl_divergence(p, q), kTol);
  }
}

TEST(DistFile, RoundTripIsExact)
{
  Rng               rng(14);
  Dist const        p = random_dist(rng, 3, 0.3);
  std::stringstream ss;
  write_dist(ss, p);
  Dist const back = read_dist(ss);
  for (Element x = 0; x < 8; ++x)
  {
    EXPECT_NEAR(back[x], p[x], 1e-16);
  }
}

TEST(DistFile, RejectsMalformedInput)
{
  auto parse = [](std::string const &text) {
    std::istringstream in(text);
    return read_dist(in);
  };
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("dim=2\n00 0.5\n"), ParseError);
  EXPECT_THROW(parse("dim=2\n00 0.5\n00 0.5\n"), ParseError);
  EXPECT_THROW(parse("dim=2\n00 -0.5\n01 1.5\n"), ParseError);
  EXPECT_THROW(parse("dim=2\n00 x\n"), ParseError);
  EXPECT_THROW(parse("dim=2\n000 1\n"), ParseError);
  EXPECT_DOUBLE_EQ(parse("dim=2\n11 1\n")[3], 1.0);
}

}  // namespace
}  // namespace pfr
