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

#include "pfr/covering.hpp"

#include <algorithm>
#include <cmath>

namespace pfr {

namespace {

constexpr double kBoundSlack = 1e-9;

std::vector<bool> indicator(F2Set const &s)
{
  std::vector<bool> out(space_size(s.dim()), false);
  for (Element x : s)
  {
    out[x] = true;
  }
  return out;
}

}  // namespace

std::vector<Element> ruzsa_cover(F2Set const &a, F2Set const &b)
{
  if (a.dim() != b.dim())
  {
    throw DimensionError("ruzsa_cover on sets of different dimensions");
  }
  if (b.empty())
  {
    throw std::invalid_argument("ruzsa_cover needs a nonempty B");
  }

  std::vector<bool>    taken(space_size(a.dim()), false);
  std::vector<Element> picked;
  for (Element x : a)
  {
    bool const free = std::none_of(b.begin(), b.end(), [&](Element y) { return taken[x ^ y]; });
    if (free)
    {
      picked.push_back(x);
      for (Element y : b)
      {
        taken[x ^ y] = true;
      }
    }
  }

  std::vector<bool> const diff = indicator(sumset(b, b));
  for (Element x : a)
  {
    bool const hit = std::any_of(picked.begin(), picked.end(), [&](Element p) { return diff[x ^ p]; });
    if (!hit)
    {
      throw std::logic_error("ruzsa_cover: packing does not cover A");
    }
  }
  if (picked.size() * b.size() > sumset(a, b).size())
  {
    throw std::logic_error("ruzsa_cover: packing exceeds |A+B|/|B|");
  }
  return picked;
}

ShrunkSubspace shrink_subspace(Subspace const &v, std::uint64_t limit)
{
  if (limit < 1)
  {
    throw std::invalid_argument("shrink_subspace needs limit >= 1");
  }
  if (v.size() <= limit)
  {
    return {v, 1};
  }
  int k = 0;
  while ((std::uint64_t{2} << k) <= limit)
  {
    ++k;
  }
  ShrunkSubspace out{v.prefix(k), std::uint64_t{1} << (v.rank() - k)};
  if (out.vprime.size() > limit || out.count * limit > 2 * v.size())
  {
    throw std::logic_error("shrink_subspace: size bounds violated");
  }
  return out;
}

bool verify_cover(F2Set const &a, Subspace const &v, std::vector<Element> const &translates)
{
  std::vector<Element> reps;
  reps.reserve(translates.size());
  for (Element t : translates)
  {
    reps.push_back(v.reduce(t));
  }
  std::sort(reps.begin(), reps.end());
  return std::all_of(a.begin(), a.end(), [&](Element x) {
    return std::binary_search(reps.begin(), reps.end(), v.reduce(x));
  });
}

SliceCover slice_to_cover(F2Set const &a, Subspace const &v)
{
  if (a.dim() != v.dim())
  {
    throw DimensionError("slice_to_cover on a set and subspace of different dimensions");
  }
  if (a.empty())
  {
    throw std::invalid_argument("slice_to_cover needs a nonempty set");
  }

  SliceCover out;
  out.slice = coset_intersection_max(a, v);
  std::vector<Element> slice_members;
  for (Element x : a)
  {
    if (v.reduce(x) == out.slice.translate)
    {
      slice_members.push_back(x);
    }
  }
  F2Set const b(a.dim(), std::move(slice_members));
  double const k = doubling_constant(a);
  out.r_factor   = static_cast<double>(std::max<std::uint64_t>(a.size(), v.size())) /
                 static_cast<double>(b.size());

  std::vector<Element> const packing = ruzsa_cover(a, b);
  out.packing                        = packing.size();

  ShrunkSubspace const shrunk = shrink_subspace(v, a.size());
  std::vector<Element> rest(v.basis().begin() + shrunk.vprime.rank(), v.basis().end());
  std::vector<Element> const offsets = Subspace::span(rest, v.dim()).elements();

  std::vector<Element> meets;
  meets.reserve(a.size());
  for (Element x : a)
  {
    meets.push_back(shrunk.vprime.reduce(x));
  }
  std::sort(meets.begin(), meets.end());

  std::vector<Element> translates;
  for (Element p : packing)
  {
    for (Element w : offsets)
    {
      Element const rep = shrunk.vprime.reduce(p ^ w);
      if (std::binary_search(meets.begin(), meets.end(), rep))
      {
        translates.push_back(rep);
      }
    }
  }
  std::sort(translates.begin(), translates.end());
  translates.erase(std::unique(translates.begin(), translates.end()), translates.end());

  Cover &c     = out.cover;
  c.vprime     = shrunk.vprime;
  c.translates = std::move(translates);
  c.k          = k;
  c.bound      = 2.0 * k * out.r_factor;
  c.covers_a   = verify_cover(a, c.vprime, c.translates);
  c.size_ok    = c.vprime.size() <= a.size();
  c.count_ok   = static_cast<double>(c.count()) <= c.bound * (1.0 + kBoundSlack);
  return out;
}

PfrCoverResult pfr_cover(F2Set const &a, DescentConfig const &config, KlInfOptions const &kl)
{
  config.validate();
  if (a.empty())
  {
    throw std::invalid_argument("pfr_cover needs a nonempty set");
  }

  PfrCoverResult out;
  out.k     = doubling_constant(a);
  out.log_k = std::log2(out.k);

  Dist const ua = Dist::uniform_on(a);
  out.d_aa      = ruzsa_distance(ua, ua);
  out.d_aa_ok   = out.d_aa <= out.log_k + kBoundSlack;

  TauFunctional const tau = make_covering_tau(a, kl);
  out.descent             = run_descent(ua, ua, tau, tau, config);
  if (out.descent.status != DescentStatus::kConverged || !out.descent.coset)
  {
    throw DescentFailed(out.descent.status, "descent did not converge to a coset (status " +
                                                std::string(status_name(out.descent.status)) +
                                                ")");
  }
  out.v = out.descent.coset->subspace;

  out.slice              = coset_intersection_max(a, out.v);
  double const log_a     = std::log2(static_cast<double>(a.size()));
  double const log_slice = std::log2(static_cast<double>(out.slice.size));
  double const tau_minus = log_a - log_slice;
  double const tau_plus  = static_cast<double>(out.v.rank()) - log_slice;
  out.r                  = tau_minus + tau_plus;
  out.r_bound            = out.log_k / config.eta + config.report_slack;
  out.r_ok               = out.r <= out.r_bound;

  double const big = static_cast<double>(std::max<std::uint64_t>(a.size(), out.v.size()));
  out.slice_ok     = static_cast<double>(out.slice.size) >= std::exp2(-out.r) * big * (1.0 - kBoundSlack);

  SliceCover sc = slice_to_cover(a, out.v);
  out.r_factor  = sc.r_factor;
  out.cover     = std::move(sc.cover);
  bool const within_slice_bound = out.cover.count_ok;
  out.cover.bound    = 2.0 * std::pow(out.k, 9.0);
  out.cover.count_ok = within_slice_bound &&
                       static_cast<double>(out.cover.count()) <= out.cover.bound * (1.0 + kBoundSlack);
  return out;
}

}  // namespace pfr
