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

// From a dense coset slice to a covering of A by few translates of a subspace.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pfr/descent.hpp"
#include "pfr/f2n.hpp"

namespace pfr {

struct Cover
{
  Subspace             vprime;
  std::vector<Element> translates;  // minimum representatives of the cosets of V′
  double               k     = 1.0;
  double               bound = 0.0;

  bool covers_a   = false;  // checked member by member
  bool size_ok    = false;  // |V′| <= |A|
  bool count_ok   = false;  // translates.size() <= bound

  std::size_t count() const { return translates.size(); }
  bool        certified() const { return covers_a && size_ok && count_ok; }
};

/// Greedy maximal packing: scans A upwards and keeps x whenever x+B misses every
/// translate kept so far. Then A ⊆ X + (B-B) and |X| <= |A+B|/|B|; both are
/// checked and a violation throws std::logic_error.
std::vector<Element> ruzsa_cover(F2Set const &a, F2Set const &b);

struct ShrunkSubspace
{
  Subspace      vprime;
  std::uint64_t count = 1;  // translates of V′ needed to cover V
};

/// V itself when |V| <= limit, otherwise the span of the first k basis rows with
/// 2^k <= limit < 2^(k+1).
ShrunkSubspace shrink_subspace(Subspace const &v, std::uint64_t limit);

/// True when every member of A lies in one of the cosets v + t.
bool verify_cover(F2Set const &a, Subspace const &v, std::vector<Element> const &translates);

struct SliceCover
{
  Cover       cover;
  CosetSlice  slice;      // the densest coset V + t*
  double      r_factor = 0.0;  // max(|A|, |V|) / |A ∩ (V+t*)|
  std::size_t packing  = 0;    // translates of B-B from the packing
};

/// Covers A by translates of a subspace of size at most |A|, at most 2KR of them.
SliceCover slice_to_cover(F2Set const &a, Subspace const &v);

class DescentFailed : public std::runtime_error
{
public:
  DescentFailed(DescentStatus status, std::string const &what)
    : std::runtime_error(what)
    , status_(status)
  {}

  DescentStatus status() const { return status_; }

private:
  DescentStatus status_;
};

struct PfrCoverResult
{
  Cover         cover;
  DescentResult descent;
  Subspace      v;              // subspace found by the descent
  double        k       = 1.0;
  double        log_k   = 0.0;  // bits
  double        d_aa    = 0.0;  // d[U_A;U_A]
  double        r       = 0.0;  // τ⁻(U_V) + τ⁺(U_V), closed form
  double        r_bound = 0.0;  // log K / η + slack
  CosetSlice    slice;
  double        r_factor = 0.0;

  bool d_aa_ok   = false;  // d[U_A;U_A] <= log K
  bool r_ok      = false;
  bool slice_ok  = false;  // |A ∩ (V+t)| >= 2^-r max(|A|, |V|)

  bool certified() const
  {
    return d_aa_ok && r_ok && slice_ok && descent.ok() && cover.certified();
  }
};

/// Runs the covering-τ descent from (U_A, U_A) and turns the resulting subspace
/// into a cover of A by at most 2K^9 translates. Throws DescentFailed when the
/// descent does not converge to a coset.
PfrCoverResult pfr_cover(F2Set const &a, DescentConfig const &config = {},
                         KlInfOptions const &kl = {});

}  // namespace pfr
