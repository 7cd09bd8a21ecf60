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

// Entropic Ruzsa distance and the fibring machinery built on it.
//
// For a pair (X, Y) take independent copies X1, X2 ~ X and Y1, Y2 ~ Y and set
//
//   T = X1+Y1   T̄ = X2+Y2   V = X1+Y2   V̄ = X2+Y1   W = X1+X2   W̄ = Y1+Y2
//   S = X1+X2+Y1+Y2.
//
// Every one of these is a function of (T, V, S): W̄ = T+V, T̄ = S+T, V̄ = S+V and
// W = S+T+V. The law of (T, V, S) is therefore all the four-variable product
// law is ever needed for, and it is computed with a single inner sum.

#include <cstdint>
#include <vector>

#include "pfr/info.hpp"

namespace pfr {

/// d[X;Y] = H(X'+Y') - (H(X)+H(Y))/2 for independent copies, in bits.
double ruzsa_distance(Dist const &x, Dist const &y);

/// E_{z,w} d[X|z ; Y|w] over independent families.
double conditional_ruzsa_distance(CondFamily const &fx, CondFamily const &fy);

struct PairedCondition
{
  std::uint64_t label  = 0;
  double        weight = 0.0;
  Dist          first;
  Dist          second;
};

/// A family {(A, B) | Z = z} where both components share the conditioning.
class PairedFamily
{
public:
  PairedFamily() = default;
  explicit PairedFamily(std::vector<PairedCondition> conditions,
                        double                       min_weight = kMinConditionWeight);

  std::size_t                      size() const { return conditions_.size(); }
  bool                             empty() const { return conditions_.empty(); }
  PairedCondition const           &operator[](std::size_t i) const { return conditions_[i]; }
  std::span<const PairedCondition> conditions() const { return conditions_; }
  auto                             begin() const { return conditions_.begin(); }
  auto                             end() const { return conditions_.end(); }

private:
  std::vector<PairedCondition> conditions_;
};

/// E_z d[A|z ; B|z].
double paired_ruzsa_distance(PairedFamily const &f);

/// Law of R1 given R1+R2 = s for independent R1 ~ first, R2 ~ second, labelled by s.
CondFamily fibre_given_sum(Dist const &first, Dist const &second);

/// Joint law of (T, V, S) for the pair (X, Y).
class TripleJoint
{
public:
  TripleJoint(Dist const &x, Dist const &y);

  int    dim() const { return dim_; }
  double at(Element t, Element v, Element s) const { return p_[index(t, v, s)]; }
  std::span<const double> probs() const { return p_; }

  /// I(T : V | S).
  double i1() const;
  /// I(T : W | S), computed as I(T : T+V | S).
  double i2() const;

  std::size_t index(Element t, Element v, Element s) const
  {
    return (std::size_t{t} << (2 * dim_)) | (std::size_t{v} << dim_) | s;
  }

private:
  int                 dim_ = 0;
  std::vector<double> p_;
};

struct FibringReport
{
  double d_xy = 0.0;
  double d_xx = 0.0;
  double d_yy = 0.0;
  Dist   dist_t;  // law of T (and of T̄)
  Dist   dist_w;  // law of W
  Dist   dist_wbar;
  Dist   dist_s;
  double d_sum_t = 0.0;  // d[T;T̄]
  double d_fib_t = 0.0;  // d[X1|T ; Y2|T̄]
  double d_sum_w = 0.0;  // d[W;W̄]
  double d_fib_w = 0.0;  // d[X1|W ; Y1|W̄]
  double i1      = 0.0;
  double i2      = 0.0;

  /// Signed residuals of the three identities; each is zero in exact arithmetic.
  double residual_t() const { return d_sum_t + d_fib_t - (2.0 * d_xy - i1); }
  double residual_w() const { return d_sum_w + d_fib_w - (2.0 * d_xy - i2); }
  double residual_self() const { return d_xx + d_yy - (2.0 * d_xy + (i2 - i1)); }
};

FibringReport fibring_report(Dist const &x, Dist const &y);

struct BsgResult
{
  double lhs = 0.0;  // d[(R1;R2) | R1+R2]
  double rhs = 0.0;  // 3 I(R1:R2) + 2 H(R1+R2) - H(R1) - H(R2)
};

/// Balog-Szemerédi-Gowers bound for a joint (R1, R2) on G x G.
BsgResult bsg_bound(Joint2 const &j);

struct EndgamePair
{
  PairedFamily        family;
  std::vector<double> distances;  // per-condition Ruzsa distance
  double              average = 0.0;
};

struct EndgameReport
{
  EndgamePair tv_given_wbar_s;  // (T;V) | W̄,S, labels (w̄ << n) | s
  EndgamePair vw_given_tbar_s;  // (V;W) | T̄,S, labels (t̄ << n) | s
  EndgamePair wt_given_vbar_s;  // (W;T) | V̄,S, labels (v̄ << n) | s
  double      i1        = 0.0;
  double      i2        = 0.0;
  double      lhs_sum   = 0.0;
  double      rhs_bound = 0.0;  // 3 I1 + 6 I2
  /// Within every condition the second component is the first shifted by the
  /// conditioning value, and this held bit-for-bit.
  bool shift_structure_ok = false;

  double min_pair() const;
};

EndgameReport endgame_candidates(Dist const &x, Dist const &y);
EndgameReport endgame_candidates(TripleJoint const &joint);

}  // namespace pfr
