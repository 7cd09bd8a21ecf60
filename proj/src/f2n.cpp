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

#include "pfr/f2n.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace pfr {

void check_dim(int n)
{
  if (n < 1 || n > kMaxDim)
  {
    throw DimensionError("dimension " + std::to_string(n) + " outside [1, " +
                         std::to_string(kMaxDim) + "]");
  }
}

std::string to_binary(Element x, int n)
{
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
  {
    if ((x >> i) & 1u)
    {
      s[static_cast<std::size_t>(n - 1 - i)] = '1';
    }
  }
  return s;
}

Element parse_binary(std::string_view s, int n)
{
  if (static_cast<int>(s.size()) != n)
  {
    throw ParseError("expected " + std::to_string(n) + " binary digits, got '" + std::string(s) +
                     "'");
  }
  Element x = 0;
  for (char c : s)
  {
    if (c != '0' && c != '1')
    {
      throw ParseError("invalid binary digit in '" + std::string(s) + "'");
    }
    x = (x << 1) | static_cast<Element>(c == '1');
  }
  return x;
}

// ---------------------------------------------------------------------------
// F2Set

F2Set::F2Set(int dim, std::vector<Element> members)
  : dim_(dim)
  , members_(std::move(members))
{
  check_dim(dim);
  for (Element x : members_)
  {
    if (!fits(x, dim))
    {
      throw DimensionError("element " + std::to_string(x) + " does not fit in dimension " +
                           std::to_string(dim));
    }
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

F2Set F2Set::of_subspace(Subspace const &v, Element shift)
{
  std::vector<Element> m = v.elements();
  for (auto &x : m)
  {
    x ^= shift;
  }
  return F2Set(v.dim(), std::move(m));
}

bool F2Set::contains(Element x) const
{
  return std::binary_search(members_.begin(), members_.end(), x);
}

F2Set F2Set::translated(Element s) const
{
  std::vector<Element> m(members_);
  for (auto &x : m)
  {
    x ^= s;
  }
  return F2Set(dim_, std::move(m));
}

// ---------------------------------------------------------------------------
// Subspace

namespace {

int leading_bit(Element x)
{
  return std::bit_width(x) - 1;
}

}  // namespace

Subspace Subspace::span(std::span<const Element> vectors, int dim)
{
  check_dim(dim);
  std::array<Element, 32> by_pivot{};
  for (Element v : vectors)
  {
    if (!fits(v, dim))
    {
      throw DimensionError("vector " + std::to_string(v) + " does not fit in dimension " +
                           std::to_string(dim));
    }
    while (v != 0)
    {
      int p = leading_bit(v);
      if (by_pivot[p] == 0)
      {
        by_pivot[p] = v;
        break;
      }
      v ^= by_pivot[p];
    }
  }

  // Clear each pivot column from the rows above it. Working upward keeps every
  // row already reduced against the lower pivots.
  for (int b = 0; b < dim; ++b)
  {
    if (by_pivot[b] == 0)
    {
      continue;
    }
    for (int c = b + 1; c < dim; ++c)
    {
      if ((by_pivot[c] >> b) & 1u)
      {
        by_pivot[c] ^= by_pivot[b];
      }
    }
  }

  Subspace s(dim);
  for (int b = dim - 1; b >= 0; --b)
  {
    if (by_pivot[b] != 0)
    {
      s.basis_.push_back(by_pivot[b]);
    }
  }
  return s;
}

Element Subspace::reduce(Element x) const
{
  for (Element row : basis_)
  {
    if ((x >> leading_bit(row)) & 1u)
    {
      x ^= row;
    }
  }
  return x;
}

Subspace Subspace::prefix(int k) const
{
  Subspace s(dim_);
  s.basis_.assign(basis_.begin(), basis_.begin() + std::clamp(k, 0, rank()));
  return s;
}

std::vector<Element> Subspace::elements() const
{
  std::vector<Element> out{0};
  out.reserve(size());
  for (Element row : basis_)
  {
    std::size_t const m = out.size();
    for (std::size_t i = 0; i < m; ++i)
    {
      out.push_back(out[i] ^ row);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Subspace subspace_from_vectors(std::span<const Element> vectors, int dim)
{
  return Subspace::span(vectors, dim);
}

bool subspace_membership(Subspace const &v, Element x)
{
  return v.contains(x);
}

// ---------------------------------------------------------------------------
// Sumsets and slices

F2Set sumset(F2Set const &a, F2Set const &b)
{
  if (a.dim() != b.dim())
  {
    throw DimensionError("sumset of sets with different dimensions");
  }
  std::vector<bool> hit(space_size(a.dim()), false);
  for (Element x : a)
  {
    for (Element y : b)
    {
      hit[x ^ y] = true;
    }
  }
  std::vector<Element> out;
  for (std::size_t z = 0; z < hit.size(); ++z)
  {
    if (hit[z])
    {
      out.push_back(static_cast<Element>(z));
    }
  }
  return F2Set(a.dim(), std::move(out));
}

double doubling_constant(F2Set const &a)
{
  if (a.empty())
  {
    throw std::invalid_argument("doubling constant of an empty set");
  }
  return static_cast<double>(sumset(a, a).size()) / static_cast<double>(a.size());
}

namespace {

std::vector<std::pair<Element, std::size_t>> coset_counts(F2Set const &a, Subspace const &v)
{
  if (a.dim() != v.dim())
  {
    throw DimensionError("set and subspace have different dimensions");
  }
  std::vector<Element> reps;
  reps.reserve(a.size());
  for (Element x : a)
  {
    reps.push_back(v.reduce(x));
  }
  std::sort(reps.begin(), reps.end());
  std::vector<std::pair<Element, std::size_t>> counts;
  for (Element r : reps)
  {
    if (counts.empty() || counts.back().first != r)
    {
      counts.emplace_back(r, 0);
    }
    ++counts.back().second;
  }
  return counts;
}

}  // namespace

CosetSlice coset_intersection_max(F2Set const &a, Subspace const &v)
{
  CosetSlice best;
  for (auto const &[rep, count] : coset_counts(a, v))
  {
    if (count > best.size)
    {
      best = {rep, count};
    }
  }
  return best;
}

std::size_t cosets_meeting(F2Set const &a, Subspace const &v)
{
  return coset_counts(a, v).size();
}

// ---------------------------------------------------------------------------
// Set files

int parse_dim_line(std::string_view line)
{
  if (!line.empty() && line.back() == '\r')
  {
    line.remove_suffix(1);
  }
  constexpr std::string_view prefix = "dim=";
  if (line.substr(0, prefix.size()) != prefix || line.size() == prefix.size())
  {
    throw ParseError("expected header 'dim=<n>', got '" + std::string(line) + "'");
  }
  int n = 0;
  for (char c : line.substr(prefix.size()))
  {
    if (c < '0' || c > '9' || n > kMaxDim)
    {
      throw ParseError("malformed dimension in '" + std::string(line) + "'");
    }
    n = n * 10 + (c - '0');
  }
  try
  {
    check_dim(n);
  }
  catch (DimensionError const &e)
  {
    throw ParseError(e.what());
  }
  return n;
}

F2Set read_set(std::istream &in)
{
  std::string line;
  if (!std::getline(in, line))
  {
    throw ParseError("empty set file");
  }
  int const n = parse_dim_line(line);

  std::vector<Element> members;
  std::size_t          line_no = 1;
  while (std::getline(in, line))
  {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
    {
      line.pop_back();
    }
    try
    {
      members.push_back(parse_binary(line, n));
    }
    catch (ParseError const &e)
    {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (members.empty())
  {
    throw ParseError("set file has no elements");
  }
  return F2Set(n, std::move(members));
}

F2Set read_set_file(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open '" + path + "'");
  }
  return read_set(in);
}

void write_set(std::ostream &out, F2Set const &a)
{
  out << "dim=" << a.dim() << '\n';
  for (Element x : a)
  {
    out << to_binary(x, a.dim()) << '\n';
  }
}

}  // namespace pfr
