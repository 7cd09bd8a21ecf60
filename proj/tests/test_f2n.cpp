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

#include <bit>
#include <sstream>

#include "gtest/gtest.h"

#include "pfr/f2n.hpp"
#include "pfr/random.hpp"

namespace pfr {
namespace {

Element bits(std::string_view s)
{
  return parse_binary(s, static_cast<int>(s.size()));
}

F2Set set_of(int n, std::initializer_list<std::string_view> xs)
{
  std::vector<Element> m;
  for (auto s : xs)
  {
    m.push_back(parse_binary(s, n));
  }
  return F2Set(n, m);
}

F2Set subset_from_mask(int n, std::uint64_t mask)
{
  std::vector<Element> m;
  for (Element x = 0; x < (Element{1} << n); ++x)
  {
    if ((mask >> x) & 1u)
    {
      m.push_back(x);
    }
  }
  return F2Set(n, m);
}

TEST(Binary, MostSignificantCoordinateFirst)
{
  EXPECT_EQ(to_binary(1, 3), "001");
  EXPECT_EQ(to_binary(6, 3), "110");
  EXPECT_EQ(parse_binary("100", 3), 4u);
  EXPECT_THROW(parse_binary("10", 3), ParseError);
  EXPECT_THROW(parse_binary("1a0", 3), ParseError);
}

TEST(F2SetTest, SortsAndDeduplicates)
{
  F2Set const s(3, {5, 1, 5, 0});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], 0u);
  EXPECT_EQ(s[2], 5u);
  EXPECT_TRUE(s.contains(1));
  EXPECT_FALSE(s.contains(2));
  EXPECT_THROW(F2Set(2, {4}), DimensionError);
  EXPECT_THROW(F2Set(0, {}), DimensionError);
  EXPECT_THROW(F2Set(kMaxDim + 1, {}), DimensionError);
}

TEST(SubspaceTest, ReducedEchelonExamples)
{
  Subspace const v = subspace_from_vectors(std::vector{bits("011"), bits("001")}, 3);
  ASSERT_EQ(v.rank(), 2);
  EXPECT_EQ(v.basis()[0], bits("010"));
  EXPECT_EQ(v.basis()[1], bits("001"));

  EXPECT_EQ(subspace_from_vectors({}, 3).rank(), 0);

  Subspace const dup = subspace_from_vectors(std::vector{bits("101"), bits("101")}, 3);
  ASSERT_EQ(dup.rank(), 1);
  EXPECT_EQ(dup.basis()[0], bits("101"));
}

TEST(SubspaceTest, Membership)
{
  Subspace const v = subspace_from_vectors(std::vector{bits("010"), bits("001")}, 3);
  EXPECT_TRUE(subspace_membership(v, bits("011")));
  EXPECT_FALSE(subspace_membership(v, bits("100")));
  EXPECT_TRUE(subspace_membership(Subspace(3), 0));
  EXPECT_FALSE(subspace_membership(Subspace(3), 1));
}

TEST(SubspaceTest, IdempotentAndCanonical)
{
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const            n = 1 + static_cast<int>(rng.below(8));
    std::vector<Element> vs;
    for (int k = static_cast<int>(rng.below(6)); k > 0; --k)
    {
      vs.push_back(static_cast<Element>(rng.below(space_size(n))));
    }
    Subspace const v = subspace_from_vectors(vs, n);
    EXPECT_EQ(subspace_from_vectors(v.basis(), n), v);

    // Pivots strictly decrease and are cleared in every other row.
    for (int i = 0; i < v.rank(); ++i)
    {
      Element const pivot = std::bit_floor(v.basis()[static_cast<std::size_t>(i)]);
      if (i > 0)
      {
        EXPECT_LT(pivot, std::bit_floor(v.basis()[static_cast<std::size_t>(i - 1)]));
      }
      for (int j = 0; j < v.rank(); ++j)
      {
        if (j != i)
        {
          EXPECT_EQ(v.basis()[static_cast<std::size_t>(j)] & pivot, 0u);
        }
      }
    }

    // The span is the same whichever generating list was used.
    std::vector<Element> shuffled(vs.rbegin(), vs.rend());
    for (Element e : v.elements())
    {
      shuffled.push_back(e);
    }
    EXPECT_EQ(subspace_from_vectors(shuffled, n), v);
    for (Element x : vs)
    {
      EXPECT_TRUE(v.contains(x));
    }
  }
}

TEST(SubspaceTest, ReduceGivesMinimumOfCoset)
{
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial)
  {
    int const      n = 1 + static_cast<int>(rng.below(6));
    Subspace const v =
        random_subspace(rng, n, static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1)));
    auto const x      = static_cast<Element>(rng.below(space_size(n)));
    Element    lowest = x;
    for (Element e : v.elements())
    {
      lowest = std::min(lowest, x ^ e);
    }
    EXPECT_EQ(v.reduce(x), lowest);
  }
}

TEST(SumsetTest, Examples)
{
  F2Set const a = set_of(2, {"00", "01", "10"});
  EXPECT_EQ(sumset(a, a), set_of(2, {"00", "01", "10", "11"}));
  EXPECT_EQ(sumset(set_of(3, {"101"}), set_of(3, {"101"})), set_of(3, {"000"}));

  Subspace const v  = subspace_from_vectors(std::vector{bits("110"), bits("011")}, 3);
  F2Set const    vs = F2Set::of_subspace(v);
  EXPECT_EQ(sumset(vs, vs), vs);
  EXPECT_THROW(sumset(a, set_of(3, {"000"})), DimensionError);
}

TEST(SumsetTest, DoublingConstant)
{
  EXPECT_DOUBLE_EQ(doubling_constant(set_of(2, {"00", "01", "10"})), 4.0 / 3.0);
  Rng rng(1);
  EXPECT_DOUBLE_EQ(doubling_constant(F2Set::of_subspace(random_subspace(rng, 4, 2))), 1.0);
  EXPECT_DOUBLE_EQ(doubling_constant(set_of(3, {"000"})), 1.0);
  EXPECT_THROW(doubling_constant(F2Set(3, {})), std::invalid_argument);
}

TEST(SumsetTest, SizeBoundsAndCosetCharacterisation)
{
  // Exhaustive over every nonempty subset of F_2^3 and F_2^4.
  for (int n : {3, 4})
  {
    std::uint64_t const subsets = std::uint64_t{1} << space_size(n);
    for (std::uint64_t mask = 1; mask < subsets; ++mask)
    {
      F2Set const a  = subset_from_mask(n, mask);
      F2Set const aa = sumset(a, a);
      ASSERT_LE(a.size(), aa.size());
      ASSERT_LE(aa.size(), std::min<std::size_t>(a.size() * a.size(), space_size(n)));

      Element const        base = a[0];
      std::vector<Element> diffs;
      for (Element x : a)
      {
        diffs.push_back(x ^ base);
      }
      Subspace const span  = subspace_from_vectors(diffs, n);
      bool const     coset = span.size() == a.size();
      ASSERT_EQ(aa.size() == a.size(), coset) << "mask " << mask;
    }
  }
}

TEST(SumsetTest, CommutativeAndContainsSetWithZero)
{
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial)
  {
    int const n = 1 + static_cast<int>(rng.below(6));
    F2Set     a = random_nonempty_set(rng, n);
    F2Set     b = random_nonempty_set(rng, n);
    EXPECT_EQ(sumset(a, b), sumset(b, a));
    std::vector<Element> with_zero(a.begin(), a.end());
    with_zero.push_back(0);
    F2Set const z(n, with_zero);
    for (Element x : z)
    {
      EXPECT_TRUE(sumset(z, z).contains(x));
    }
  }
}

TEST(CosetSliceTest, Examples)
{
  F2Set const      a = set_of(2, {"00", "01", "10"});
  Subspace const   v = subspace_from_vectors(std::vector{bits("01")}, 2);
  CosetSlice const s = coset_intersection_max(a, v);
  EXPECT_EQ(s.translate, 0u);
  EXPECT_EQ(s.size, 2u);

  Subspace const whole = subspace_from_vectors(std::vector{bits("01"), bits("10")}, 2);
  EXPECT_EQ(coset_intersection_max(a, whole).translate, 0u);
  EXPECT_EQ(coset_intersection_max(a, whole).size, 3u);

  CosetSlice const single = coset_intersection_max(a, Subspace(2));
  EXPECT_EQ(single.size, 1u);
  EXPECT_TRUE(a.contains(single.translate));
}

TEST(CosetSliceTest, SliceTimesCosetCountCoversA)
{
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const      n = 1 + static_cast<int>(rng.below(7));
    F2Set const    a = random_nonempty_set(rng, n);
    Subspace const v =
        random_subspace(rng, n, static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1)));
    CosetSlice const s = coset_intersection_max(a, v);
    EXPECT_GE(s.size * cosets_meeting(a, v), a.size());

    std::size_t brute = 0;
    for (Element t = 0; t < space_size(n); ++t)
    {
      std::size_t hits = 0;
      for (Element x : a)
      {
        hits += v.contains(x ^ t);
      }
      brute = std::max(brute, hits);
    }
    EXPECT_EQ(s.size, brute);
    EXPECT_EQ(s.translate, v.reduce(s.translate));
  }
}

TEST(SetFile, RoundTrip)
{
  F2Set const       a = set_of(3, {"000", "011", "110"});
  std::stringstream ss;
  write_set(ss, a);
  EXPECT_EQ(ss.str(), "dim=3\n000\n011\n110\n");
  EXPECT_EQ(read_set(ss), a);
}

TEST(SetFile, RejectsMalformedInput)
{
  auto parse = [](std::string const &text) {
    std::istringstream in(text);
    return read_set(in);
  };
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("dim=3\n"), ParseError);
  EXPECT_THROW(parse("dimension=3\n000\n"), ParseError);
  EXPECT_THROW(parse("dim=3\n00\n"), ParseError);
  EXPECT_THROW(parse("dim=3\n0120\n"), ParseError);
  EXPECT_THROW(parse("dim=0\n"), std::exception);
  EXPECT_EQ(parse("dim=2\r\n01\r\n").size(), 1u);
}

}  // namespace
}  // namespace pfr
