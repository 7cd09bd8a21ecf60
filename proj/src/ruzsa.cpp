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

#include "pfr/ruzsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pfr {

namespace {

double clamp_distance(double d)
{
  return (d < 0.0 && d > -kClampSlack) ? 0.0 : d;
}

void require_same_dim(Dist const &x, Dist const &y)
{
  if (x.dim() != y.dim())
  {
    throw DimensionError("distributions have different dimensions");
  }
}

}  // namespace

double ruzsa_distance(Dist const &x, Dist const &y)
{
  require_same_dim(x, y);
  double const h_sum = entropy(xor_convolve(x, y));
  return clamp_distance(h_sum - 0.5 * (entropy(x) + entropy(y)));
}

double conditional_ruzsa_distance(CondFamily const &fx, CondFamily const &fy)
{
  if (fx.empty() || fy.empty())
  {
    throw std::invalid_argument("conditional Ruzsa distance of an empty family");
  }
  if (fx.dim() != fy.dim())
  {
    throw DimensionError("families have different dimensions");
  }
  std::vector<double> hy;
  hy.reserve(fy.size());
  for (auto const &c : fy)
  {
    hy.push_back(entropy(c.dist));
  }
  double total = 0.0;
  for (auto const &cx : fx)
  {
    double const hx  = entropy(cx.dist);
    double       row = 0.0;
    for (std::size_t j = 0; j < fy.size(); ++j)
    {
      double const d = entropy(xor_convolve(cx.dist, fy[j].dist)) - 0.5 * (hx + hy[j]);
      row += fy[j].weight * d;
    }
    total += cx.weight * row;
  }
  return clamp_distance(total);
}

PairedFamily::PairedFamily(std::vector<PairedCondition> conditions, double min_weight)
{
  double total = 0.0;
  for (auto &c : conditions)
  {
    if (c.first.dim() != c.second.dim())
    {
      throw DimensionError("paired condition components have different dimensions");
    }
    if (c.weight >= min_weight && c.weight > 0.0)
    {
      total += c.weight;
      conditions_.push_back(std::move(c));
    }
  }
  for (auto &c : conditions_)
  {
    c.weight /= total;
  }
}

double paired_ruzsa_distance(PairedFamily const &f)
{
  if (f.empty())
  {
    throw std::invalid_argument("paired Ruzsa distance of an empty family");
  }
  double total = 0.0;
  for (auto const &c : f)
  {
    total += c.weight * ruzsa_distance(c.first, c.second);
  }
  return clamp_distance(total);
}

CondFamily fibre_given_sum(Dist const &first, Dist const &second)
{
  require_same_dim(first, second);
  int const              n  = first.dim();
  std::size_t const      nn = space_size(n);
  Dist const             sum_law = xor_convolve(first, second);
  std::vector<Condition> conds;
  for (std::size_t s = 0; s < nn; ++s)
  {
    if (sum_law.probs()[s] < kMinConditionWeight)
    {
      continue;
    }
    std::vector<double> p(nn);
    double              mass = 0.0;
    for (std::size_t x = 0; x < nn; ++x)
    {
      p[x] = first.probs()[x] * second.probs()[x ^ s];
      mass += p[x];
    }
    if (mass < kSupportCutoff)
    {
      continue;
    }
    conds.push_back({s, sum_law.probs()[s], Dist::normalized(n, std::move(p))});
  }
  return CondFamily(std::move(conds));
}

// ---------------------------------------------------------------------------
// (T, V, S)

TripleJoint::TripleJoint(Dist const &x, Dist const &y)
  : dim_(x.dim())
{
  require_same_dim(x, y);
  if (3 * dim_ > kMaxDim + 6)
  {
    throw DimensionError("triple joint too large for dimension " + std::to_string(dim_));
  }
  std::size_t const nn = space_size(dim_);
  p_.assign(nn * nn * nn, 0.0);
  auto const px = x.probs();
  auto const py = y.probs();

  // P(t, v, s) = sum_{x1} X(x1) Y(t+x1) Y(v+x1) X(s+t+v+x1)
  for (std::size_t x1 = 0; x1 < nn; ++x1)
  {
    if (px[x1] == 0.0)
    {
      continue;
    }
    for (std::size_t t = 0; t < nn; ++t)
    {
      double const a = px[x1] * py[t ^ x1];
      if (a == 0.0)
      {
        continue;
      }
      for (std::size_t v = 0; v < nn; ++v)
      {
        double const b = a * py[v ^ x1];
        if (b == 0.0)
        {
          continue;
        }
        std::size_t const base = (t << (2 * dim_)) | (v << dim_);
        std::size_t const off  = t ^ v ^ x1;
        for (std::size_t s = 0; s < nn; ++s)
        {
          p_[base | s] += b * px[s ^ off];
        }
      }
    }
  }
}

namespace {

// Entropies of the (A, S) marginal where A = f(t, v).
template <typename F>
double pair_with_s_entropy(TripleJoint const &j, F f)
{
  std::size_t const   nn = space_size(j.dim());
  std::vector<double> m(nn * nn, 0.0);
  for (std::size_t t = 0; t < nn; ++t)
  {
    for (std::size_t v = 0; v < nn; ++v)
    {
      std::size_t const a = f(t, v);
      for (std::size_t s = 0; s < nn; ++s)
      {
        m[a * nn + s] += j.at(static_cast<Element>(t), static_cast<Element>(v), static_cast<Element>(s));
      }
    }
  }
  return entropy_bits(m);
}

double s_entropy(TripleJoint const &j)
{
  std::size_t const   nn = space_size(j.dim());
  std::vector<double> m(nn, 0.0);
  for (std::size_t i = 0; i < j.probs().size(); ++i)
  {
    m[i & (nn - 1)] += j.probs()[i];
  }
  return entropy_bits(m);
}

double clamp_information(double i)
{
  return (i < 0.0 && i > -kClampSlack) ? 0.0 : i;
}

}  // namespace

double TripleJoint::i1() const
{
  double const h_ts  = pair_with_s_entropy(*this, [](std::size_t t, std::size_t) { return t; });
  double const h_vs  = pair_with_s_entropy(*this, [](std::size_t, std::size_t v) { return v; });
  double const h_tvs = entropy_bits(p_);
  return clamp_information(h_ts + h_vs - h_tvs - s_entropy(*this));
}

double TripleJoint::i2() const
{
  double const h_ts   = pair_with_s_entropy(*this, [](std::size_t t, std::size_t) { return t; });
  double const h_wbs  = pair_with_s_entropy(*this, [](std::size_t t, std::size_t v) { return t ^ v; });
  double const h_tvs  = entropy_bits(p_);
  return clamp_information(h_ts + h_wbs - h_tvs - s_entropy(*this));
}

// ---------------------------------------------------------------------------
// Fibring

FibringReport fibring_report(Dist const &x, Dist const &y)
{
  require_same_dim(x, y);
  FibringReport r;
  r.d_xy      = ruzsa_distance(x, y);
  r.d_xx      = ruzsa_distance(x, x);
  r.d_yy      = ruzsa_distance(y, y);
  r.dist_t    = xor_convolve(x, y);
  r.dist_w    = xor_convolve(x, x);
  r.dist_wbar = xor_convolve(y, y);
  r.dist_s    = xor_convolve(r.dist_w, r.dist_wbar);

  r.d_sum_t = ruzsa_distance(r.dist_t, r.dist_t);
  r.d_sum_w = ruzsa_distance(r.dist_w, r.dist_wbar);
  r.d_fib_t = conditional_ruzsa_distance(fibre_given_sum(x, y), fibre_given_sum(y, x));
  r.d_fib_w = conditional_ruzsa_distance(fibre_given_sum(x, x), fibre_given_sum(y, y));

  TripleJoint const joint(x, y);
  r.i1 = joint.i1();
  r.i2 = joint.i2();
  return r;
}

// ---------------------------------------------------------------------------
// BSG

BsgResult bsg_bound(Joint2 const &j)
{
  if (j.dim_x() != j.dim_z())
  {
    throw DimensionError("BSG bound needs a joint on G x G");
  }
  int const         n  = j.dim_x();
  std::size_t const nn = space_size(n);

  std::vector<double> sum_law(nn, 0.0);
  for (std::size_t a = 0; a < nn; ++a)
  {
    for (std::size_t b = 0; b < nn; ++b)
    {
      sum_law[a ^ b] += j.at(static_cast<Element>(a), static_cast<Element>(b));
    }
  }

  std::vector<PairedCondition> conds;
  for (std::size_t s = 0; s < nn; ++s)
  {
    std::vector<double> first(nn), second(nn);
    for (std::size_t a = 0; a < nn; ++a)
    {
      first[a]  = j.at(static_cast<Element>(a), static_cast<Element>(a ^ s));
      second[a] = j.at(static_cast<Element>(a ^ s), static_cast<Element>(a));
    }
    double const mass = std::accumulate(first.begin(), first.end(), 0.0);
    if (mass < kSupportCutoff)
    {
      continue;
    }
    conds.push_back({s, sum_law[s], Dist::normalized(n, std::move(first)),
                     Dist::normalized(n, std::move(second))});
  }

  BsgResult r;
  r.lhs = paired_ruzsa_distance(PairedFamily(std::move(conds)));
  r.rhs = 3.0 * mutual_information(j) + 2.0 * entropy_bits(sum_law) - entropy(j.marginal_x()) -
          entropy(j.marginal_z());
  return r;
}

// ---------------------------------------------------------------------------
// Endgame

namespace {

// Builds one endgame family. For every key (c, s) `fill` writes the raw
// first and second component vectors and returns the shift relating them.
template <typename Fill>
EndgamePair build_endgame_pair(TripleJoint const &joint, Fill fill, bool &shift_ok)
{
  int const                    n  = joint.dim();
  std::size_t const            nn = space_size(n);
  std::vector<PairedCondition> conds;
  std::vector<double>          first(nn), second(nn);
  for (std::size_t c = 0; c < nn; ++c)
  {
    for (std::size_t s = 0; s < nn; ++s)
    {
      Element const shift = fill(static_cast<Element>(c), static_cast<Element>(s), first, second);
      double const  mass  = std::accumulate(first.begin(), first.end(), 0.0);
      if (mass < kMinConditionWeight)
      {
        continue;
      }
      bool exact = true;
      for (std::size_t x = 0; x < nn && exact; ++x)
      {
        exact = second[x] == first[x ^ shift];
      }
      shift_ok = shift_ok && exact;
      Dist a = Dist::normalized(n, first);
      Dist b = exact ? a.translated(shift) : Dist::normalized(n, second);
      conds.push_back({(std::uint64_t{c} << n) | s, mass, std::move(a), std::move(b)});
    }
  }

  EndgamePair pair{PairedFamily(std::move(conds)), {}, 0.0};
  pair.distances.reserve(pair.family.size());
  for (auto const &c : pair.family)
  {
    double const d = ruzsa_distance(c.first, c.second);
    pair.distances.push_back(d);
    pair.average += c.weight * d;
  }
  return pair;
}

}  // namespace

double EndgameReport::min_pair() const
{
  return std::min({tv_given_wbar_s.average, vw_given_tbar_s.average, wt_given_vbar_s.average});
}

EndgameReport endgame_candidates(Dist const &x, Dist const &y)
{
  require_same_dim(x, y);
  return endgame_candidates(TripleJoint(x, y));
}

EndgameReport endgame_candidates(TripleJoint const &joint)
{
  std::size_t const nn = space_size(joint.dim());
  EndgameReport     r;
  r.i1               = joint.i1();
  r.i2               = joint.i2();
  bool shift_ok      = true;

  // (T;V) | W̄ = wb, S = s. W̄ = T+V, so V = T + wb.
  r.tv_given_wbar_s = build_endgame_pair(
    joint,
    [&](Element wb, Element s, std::vector<double> &first, std::vector<double> &second) {
      for (std::size_t u = 0; u < nn; ++u)
      {
        Element const e = static_cast<Element>(u);
        first[u]        = joint.at(e, e ^ wb, s);
        second[u]       = joint.at(e ^ wb, e, s);
      }
      return wb;
    },
    shift_ok);

  // (V;W) | T̄ = tb, S = s. T = tb + s is fixed and W = S+T+V = V + tb.
  r.vw_given_tbar_s = build_endgame_pair(
    joint,
    [&](Element tb, Element s, std::vector<double> &first, std::vector<double> &second) {
      Element const t = tb ^ s;
      for (std::size_t u = 0; u < nn; ++u)
      {
        Element const e = static_cast<Element>(u);
        first[u]        = joint.at(t, e, s);
        second[u]       = joint.at(t, e ^ tb, s);
      }
      return tb;
    },
    shift_ok);

  // (W;T) | V̄ = vb, S = s. V = vb + s is fixed and W = S+T+V = T + vb.
  r.wt_given_vbar_s = build_endgame_pair(
    joint,
    [&](Element vb, Element s, std::vector<double> &first, std::vector<double> &second) {
      Element const v = vb ^ s;
      for (std::size_t u = 0; u < nn; ++u)
      {
        Element const e = static_cast<Element>(u);
        first[u]        = joint.at(e ^ vb, v, s);
        second[u]       = joint.at(e, v, s);
      }
      return vb;
    },
    shift_ok);

  r.shift_structure_ok = shift_ok;
  r.lhs_sum   = r.tv_given_wbar_s.average + r.vw_given_tbar_s.average + r.wt_given_vbar_s.average;
  r.rhs_bound = 3.0 * r.i1 + 6.0 * r.i2;
  return r;
}

}  // namespace pfr
