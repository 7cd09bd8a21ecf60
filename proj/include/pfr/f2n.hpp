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

// Group arithmetic and GF(2) linear algebra on F_2^n. Elements are bitmasks:
// bit i is coordinate i, and addition is XOR.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pfr {

using Element = std::uint32_t;

/// Largest supported ambient dimension. Dense distributions hold 2^n doubles.
inline constexpr int kMaxDim = 24;

class DimensionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Throws DimensionError unless 1 <= n <= kMaxDim.
void check_dim(int n);

inline std::size_t space_size(int n)
{
  return std::size_t{1} << n;
}

inline bool fits(Element x, int n)
{
  return (static_cast<std::uint64_t>(x) >> n) == 0;
}

/// Binary string of exactly n characters, coordinate n-1 first.
std::string to_binary(Element x, int n);
Element     parse_binary(std::string_view s, int n);

class Subspace;

/// A finite subset of F_2^n, stored strictly sorted.
class F2Set
{
public:
  F2Set() = default;
  /// Sorts and removes duplicates. Throws DimensionError on out-of-range members.
  F2Set(int dim, std::vector<Element> members);

  static F2Set of_subspace(Subspace const &v, Element shift = 0);

  int                      dim() const { return dim_; }
  std::size_t              size() const { return members_.size(); }
  bool                     empty() const { return members_.empty(); }
  std::span<const Element> members() const { return members_; }
  auto                     begin() const { return members_.begin(); }
  auto                     end() const { return members_.end(); }
  Element                  operator[](std::size_t i) const { return members_[i]; }

  bool  contains(Element x) const;
  F2Set translated(Element s) const;

  bool operator==(F2Set const &) const = default;

private:
  int                  dim_ = 0;
  std::vector<Element> members_;
};

/// Linear subspace of F_2^n held as a reduced row-echelon basis. Rows are in
/// decreasing order of their leading bit, and each leading bit is cleared in
/// every other row, so two spans are equal iff their bases compare equal.
class Subspace
{
public:
  Subspace() = default;
  explicit Subspace(int dim) : dim_(dim) {}

  static Subspace span(std::span<const Element> vectors, int dim);

  int                      dim() const { return dim_; }
  int                      rank() const { return static_cast<int>(basis_.size()); }
  std::span<const Element> basis() const { return basis_; }
  std::uint64_t            size() const { return std::uint64_t{1} << rank(); }

  /// Minimum element of the coset x + V.
  Element reduce(Element x) const;
  bool    contains(Element x) const { return reduce(x) == 0; }

  /// Span of the first k basis rows.
  Subspace prefix(int k) const;

  /// All 2^rank members, ascending.
  std::vector<Element> elements() const;

  bool operator==(Subspace const &) const = default;

private:
  int                  dim_ = 0;
  std::vector<Element> basis_;
};

Subspace subspace_from_vectors(std::span<const Element> vectors, int dim);
bool     subspace_membership(Subspace const &v, Element x);

F2Set  sumset(F2Set const &a, F2Set const &b);
double doubling_constant(F2Set const &a);

struct CosetSlice
{
  Element     translate = 0;  // minimum element of the coset
  std::size_t size      = 0;
};

/// Coset V+t maximising |A ∩ (V+t)|; ties go to the smallest representative.
CosetSlice coset_intersection_max(F2Set const &a, Subspace const &v);

/// Number of distinct cosets of V that meet A.
std::size_t cosets_meeting(F2Set const &a, Subspace const &v);

// Set file: "dim=<n>" followed by one n-character binary string per line.
F2Set       read_set(std::istream &in);
F2Set       read_set_file(std::string const &path);
void        write_set(std::ostream &out, F2Set const &a);
int         parse_dim_line(std::string_view line);

}  // namespace pfr
