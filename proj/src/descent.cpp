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

#include "pfr/descent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pfr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Largest d[U_{V+rep}; X] accepted after extraction.
constexpr double kExtractionTolerance = 0.01;

CondFamily refilter(CondFamily const &f, double p_min)
{
  std::vector<Condition> conds(f.begin(), f.end());
  return CondFamily(std::move(conds), p_min);
}

Candidate single_candidate(CandidateTag tag, Dist a, Dist b, TauFunctional const &tau_a,
                           TauFunctional const &tau_b, double eta)
{
  Candidate c;
  c.tag        = tag;
  c.shape      = CandidateShape::kSingle;
  c.evaluated  = true;
  c.d          = ruzsa_distance(a, b);
  c.tau_first  = {tau_a(a)};
  c.tau_second = {tau_b(b)};
  c.tau_sum    = c.tau_first[0] + c.tau_second[0];
  c.phi        = c.d + eta * c.tau_sum;
  c.cond_phi   = {c.phi};
  c.first      = CondFamily::single(std::move(a));
  c.second     = CondFamily::single(std::move(b));
  return c;
}

Candidate product_candidate(CandidateTag tag, CondFamily fx, CondFamily fy,
                            TauFunctional const &tau_a, TauFunctional const &tau_b, double eta)
{
  Candidate c;
  c.tag       = tag;
  c.shape     = CandidateShape::kProduct;
  c.evaluated = true;

  std::vector<double> hx;
  std::vector<double> hy;
  for (auto const &m : fx)
  {
    hx.push_back(entropy(m.dist));
    c.tau_first.push_back(tau_a(m.dist));
  }
  for (auto const &m : fy)
  {
    hy.push_back(entropy(m.dist));
    c.tau_second.push_back(tau_b(m.dist));
  }

  c.cond_phi.resize(fx.size() * fy.size());
  double d_avg   = 0.0;
  double tau_avg = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i)
  {
    tau_avg += fx[i].weight * c.tau_first[i];
    for (std::size_t j = 0; j < fy.size(); ++j)
    {
      double d = entropy(xor_convolve(fx[i].dist, fy[j].dist)) - 0.5 * (hx[i] + hy[j]);
      if (d < 0.0 && d > -kClampSlack)
      {
        d = 0.0;
      }
      d_avg += fx[i].weight * fy[j].weight * d;
      c.cond_phi[i * fy.size() + j] = d + eta * (c.tau_first[i] + c.tau_second[j]);
    }
  }
  for (std::size_t j = 0; j < fy.size(); ++j)
  {
    tau_avg += fy[j].weight * c.tau_second[j];
  }
  c.d       = d_avg;
  c.tau_sum = tau_avg;
  c.phi     = d_avg + eta * tau_avg;
  c.first   = std::move(fx);
  c.second  = std::move(fy);
  return c;
}

Candidate paired_candidate(CandidateTag tag, EndgamePair const &pair, TauFunctional const &tau_a,
                           TauFunctional const &tau_b, double eta)
{
  Candidate c;
  c.tag       = tag;
  c.shape     = CandidateShape::kPaired;
  c.evaluated = true;
  c.paired    = pair.family;
  double tau_avg = 0.0;
  for (std::size_t k = 0; k < pair.family.size(); ++k)
  {
    auto const &cond = pair.family[k];
    double const ta  = tau_a(cond.first);
    double const tb  = tau_b(cond.second);
    c.tau_first.push_back(ta);
    c.tau_second.push_back(tb);
    c.cond_phi.push_back(pair.distances[k] + eta * (ta + tb));
    tau_avg += cond.weight * (ta + tb);
  }
  c.d       = pair.average;
  c.tau_sum = tau_avg;
  c.phi     = c.d + eta * tau_avg;
  return c;
}

}  // namespace

void DescentConfig::validate() const
{
  if (!(eta > 0.0 && eta < 0.125))
  {
    throw std::invalid_argument("eta must lie strictly between 0 and 1/8");
  }
  if (!(d_stop > 0.0))
  {
    throw std::invalid_argument("d_stop must be positive");
  }
  if (max_iters < 0)
  {
    throw std::invalid_argument("max_iters must be non-negative");
  }
  if (!(theta > 0.0 && theta <= 1.0))
  {
    throw std::invalid_argument("theta must lie in (0, 1]");
  }
  if (!(p_min >= 0.0 && p_min < 1.0))
  {
    throw std::invalid_argument("p_min must lie in [0, 1)");
  }
  if (!(report_slack >= 0.0))
  {
    throw std::invalid_argument("report_slack must be non-negative");
  }
}

std::string_view tag_name(CandidateTag tag)
{
  switch (tag)
  {
  case CandidateTag::kSumT:
    return "sum-T";
  case CandidateTag::kSumW:
    return "sum-W";
  case CandidateTag::kFibreT:
    return "fibre-T";
  case CandidateTag::kFibreW:
    return "fibre-W";
  case CandidateTag::kEndgameTV:
    return "endgame-TV";
  case CandidateTag::kEndgameVW:
    return "endgame-VW";
  case CandidateTag::kEndgameWT:
    return "endgame-WT";
  }
  return "unknown";
}

std::string_view status_name(DescentStatus s)
{
  switch (s)
  {
  case DescentStatus::kConverged:
    return "converged";
  case DescentStatus::kMaxIterations:
    return "max-iters";
  case DescentStatus::kNoProgress:
    return "no-progress";
  case DescentStatus::kNotCosetUniform:
    return "not-coset-uniform";
  }
  return "unknown";
}

double phi(Dist const &x, Dist const &y, TauFunctional const &tau_a, TauFunctional const &tau_b,
           double eta)
{
  return ruzsa_distance(x, y) + eta * (tau_a(x) + tau_b(y));
}

DescentState make_state(Dist x, Dist y, TauFunctional const &tau_a, TauFunctional const &tau_b,
                        double eta, int iteration)
{
  DescentState s;
  s.d         = ruzsa_distance(x, y);
  s.tau_sum   = tau_a(x) + tau_b(y);
  s.phi       = s.d + eta * s.tau_sum;
  s.iteration = iteration;
  s.x         = std::move(x);
  s.y         = std::move(y);
  return s;
}

CandidateSet generate_candidates(DescentState const &state, TauFunctional const &tau_a,
                                 TauFunctional const &tau_b, double eta, double p_min,
                                 bool force_endgame)
{
  Dist const &x = state.x;
  Dist const &y = state.y;

  CandidateSet set;
  set.current_phi = state.phi;
  set.d           = state.d;
  set.tau0        = state.tau_sum;

  auto &sum_t   = set.candidates[static_cast<std::size_t>(CandidateTag::kSumT)];
  auto &sum_w   = set.candidates[static_cast<std::size_t>(CandidateTag::kSumW)];
  auto &fibre_t = set.candidates[static_cast<std::size_t>(CandidateTag::kFibreT)];
  auto &fibre_w = set.candidates[static_cast<std::size_t>(CandidateTag::kFibreW)];

  Dist const t = xor_convolve(x, y);
  sum_t = single_candidate(CandidateTag::kSumT, t, t, tau_a, tau_b, eta);
  sum_w = single_candidate(CandidateTag::kSumW, xor_convolve(x, x), xor_convolve(y, y), tau_a,
                           tau_b, eta);
  fibre_t = product_candidate(CandidateTag::kFibreT, refilter(fibre_given_sum(x, y), p_min),
                              refilter(fibre_given_sum(y, x), p_min), tau_a, tau_b, eta);
  fibre_w = product_candidate(CandidateTag::kFibreW, refilter(fibre_given_sum(x, x), p_min),
                              refilter(fibre_given_sum(y, y), p_min), tau_a, tau_b, eta);

  set.tau_t_plus  = sum_t.tau_sum;
  set.tau_w_plus  = sum_w.tau_sum;
  set.tau_t_minus = fibre_t.tau_sum;
  set.tau_w_minus = fibre_w.tau_sum;
  set.i1          = 2.0 * state.d - sum_t.d - fibre_t.d;
  set.i2          = 2.0 * state.d - sum_w.d - fibre_w.d;

  double best = std::min({sum_t.phi, sum_w.phi, fibre_t.phi, fibre_w.phi});
  if (!force_endgame && best < state.phi - kPhiTieTolerance)
  {
    return set;
  }

  set.endgame = true;
  TripleJoint const   joint(x, y);
  EndgameReport const eg = endgame_candidates(joint);

  auto &tv = set.candidates[static_cast<std::size_t>(CandidateTag::kEndgameTV)];
  auto &vw = set.candidates[static_cast<std::size_t>(CandidateTag::kEndgameVW)];
  auto &wt = set.candidates[static_cast<std::size_t>(CandidateTag::kEndgameWT)];
  tv = paired_candidate(CandidateTag::kEndgameTV, eg.tv_given_wbar_s, tau_a, tau_b, eta);
  vw = paired_candidate(CandidateTag::kEndgameVW, eg.vw_given_tbar_s, tau_a, tau_b, eta);
  wt = paired_candidate(CandidateTag::kEndgameWT, eg.wt_given_vbar_s, tau_a, tau_b, eta);

  auto &info              = set.endgame_info;
  info.i1_direct          = eg.i1;
  info.i2_direct          = eg.i2;
  info.lhs_sum            = eg.lhs_sum;
  info.rhs_bound          = eg.rhs_bound;
  info.shift_structure_ok = eg.shift_structure_ok;
  info.tau                = {tv.tau_sum, vw.tau_sum, wt.tau_sum};
  info.tau_bound_sum      = {set.tau_t_plus + sum_t.d + eg.i2, set.tau_w_plus + sum_w.d + eg.i2,
                             set.tau_t_plus + sum_t.d + eg.i1};
  info.tau_bound_fibre    = {set.tau_w_minus + fibre_w.d, set.tau_t_minus + fibre_t.d,
                             set.tau_t_minus + fibre_t.d};
  info.tau_eg             = tv.tau_sum + vw.tau_sum + wt.tau_sum;
  info.tau_eg_bound       = 3.0 * set.tau0 + 6.0 * state.d + (eg.i2 - eg.i1);
  info.phi_sum            = tv.phi + vw.phi + wt.phi;
  return set;
}

CandidateSet generate_candidates(DescentState const &state, TauFunctional const &tau_a,
                                 TauFunctional const &tau_b, double eta)
{
  return generate_candidates(state, tau_a, tau_b, eta, kMinConditionWeight);
}

std::optional<Selection> select_and_fix(CandidateSet const &set, double current_phi)
{
  Candidate const *best = nullptr;
  for (auto const &c : set.candidates)
  {
    if (c.evaluated && (best == nullptr || c.phi < best->phi - kPhiTieTolerance))
    {
      best = &c;
    }
  }
  if (best == nullptr || !(best->phi < current_phi - kPhiTieTolerance))
  {
    return std::nullopt;
  }

  std::size_t arg = 0;
  for (std::size_t k = 1; k < best->cond_phi.size(); ++k)
  {
    if (best->cond_phi[k] < best->cond_phi[arg] - kPhiTieTolerance)
    {
      arg = k;
    }
  }

  Selection s;
  s.tag        = best->tag;
  s.phi        = best->cond_phi[arg];
  s.family_phi = best->phi;
  switch (best->shape)
  {
  case CandidateShape::kSingle:
    s.x = best->first[0].dist;
    s.y = best->second[0].dist;
    break;
  case CandidateShape::kProduct:
  {
    std::size_t const i = arg / best->second.size();
    std::size_t const j = arg % best->second.size();
    s.x       = best->first[i].dist;
    s.y       = best->second[j].dist;
    s.label_x = best->first[i].label;
    s.label_y = best->second[j].label;
    break;
  }
  case CandidateShape::kPaired:
    s.x       = best->paired[arg].first;
    s.y       = best->paired[arg].second;
    s.label_x = best->paired[arg].label;
    s.label_y = best->paired[arg].label;
    break;
  }
  return s;
}

ExtractedCoset extract_subspace(Dist const &x, double theta)
{
  int const   n    = x.dim();
  double const cut = theta * x.max_prob();
  std::vector<Element> support;
  for (std::size_t e = 0; e < x.size(); ++e)
  {
    if (x[static_cast<Element>(e)] >= cut)
    {
      support.push_back(static_cast<Element>(e));
    }
  }
  Element const        rep = support.front();
  std::vector<Element> diffs;
  diffs.reserve(support.size());
  for (Element e : support)
  {
    diffs.push_back(e ^ rep);
  }
  ExtractedCoset out;
  out.subspace = Subspace::span(diffs, n);
  out.rep      = rep;
  out.distance = ruzsa_distance(Dist::uniform_on(out.subspace, rep), x);
  if (!(out.distance <= kExtractionTolerance))
  {
    throw NotCosetUniform("final law is not close to a coset-uniform law (d = " +
                          std::to_string(out.distance) + ")");
  }
  return out;
}

DescentResult run_descent(Dist x0, Dist y0, TauFunctional const &tau_a, TauFunctional const &tau_b,
                          DescentConfig const &config)
{
  config.validate();
  if (x0.dim() != y0.dim() || x0.dim() != tau_a.dim() || x0.dim() != tau_b.dim())
  {
    throw DimensionError("descent inputs have different dimensions");
  }

  DescentResult result;
  result.initial = make_state(std::move(x0), std::move(y0), tau_a, tau_b, config.eta);
  DescentState state = result.initial;

  std::optional<DescentStatus> stop;
  while (!stop)
  {
    if (state.d <= config.d_stop)
    {
      break;
    }
    if (state.iteration >= config.max_iters)
    {
      stop = DescentStatus::kMaxIterations;
      break;
    }

    CandidateSet const set = generate_candidates(state, tau_a, tau_b, config.eta, config.p_min);

    IterationRecord rec;
    rec.iteration   = state.iteration;
    rec.d           = state.d;
    rec.phi         = state.phi;
    rec.tau_sum     = state.tau_sum;
    rec.tau_t_plus  = set.tau_t_plus;
    rec.tau_t_minus = set.tau_t_minus;
    rec.tau_w_plus  = set.tau_w_plus;
    rec.tau_w_minus = set.tau_w_minus;
    rec.endgame     = set.endgame;
    rec.endgame_info = set.endgame_info;
    rec.i1          = set.endgame ? set.endgame_info.i1_direct : set.i1;
    rec.i2          = set.endgame ? set.endgame_info.i2_direct : set.i2;
    rec.bound_t     = set.tau0 + state.d;
    rec.bound_w     = set.tau0 + state.d + 0.5 * (rec.i2 - rec.i1);
    for (std::size_t k = 0; k < set.candidates.size(); ++k)
    {
      rec.candidate_phi[k] = set.candidates[k].evaluated ? set.candidates[k].phi : kNaN;
    }

    std::optional<Selection> sel = select_and_fix(set, state.phi);
    if (!sel)
    {
      rec.next_phi = state.phi;
      result.trace.push_back(std::move(rec));
      stop = DescentStatus::kNoProgress;
      break;
    }
    rec.chosen  = sel->tag;
    rec.label_x = sel->label_x;
    rec.label_y = sel->label_y;

    DescentState next =
        make_state(std::move(sel->x), std::move(sel->y), tau_a, tau_b, config.eta,
                   state.iteration + 1);
    rec.next_phi = next.phi;
    result.trace.push_back(std::move(rec));
    if (!(next.phi < state.phi))
    {
      stop = DescentStatus::kNoProgress;
      break;
    }
    state = std::move(next);
  }
  result.final_state = state;
  result.status      = stop.value_or(DescentStatus::kConverged);

  try
  {
    result.coset = extract_subspace(state.x, config.theta);
  }
  catch (NotCosetUniform const &)
  {
    if (result.status == DescentStatus::kConverged)
    {
      result.status = DescentStatus::kNotCosetUniform;
    }
  }

  if (result.coset)
  {
    Dist const u = Dist::uniform_on(result.coset->subspace, 0);
    result.certified_lhs = tau_a(u) + tau_b(u);
    result.certified_rhs = result.initial.tau_sum + result.initial.d / config.eta;
    result.certified     = result.certified_lhs <= result.certified_rhs + config.report_slack;
  }
  return result;
}

CheckReport audit_descent(DescentResult const &result, DescentConfig const &config,
                          double growth_tolerance)
{
  constexpr double kIdentity = 1e-9;
  double const     eta       = config.eta;
  CheckReport      r;
  r.check("phi strictly decreases", 0.0);
  r.check("fixed pair within family average", kIdentity);
  r.check("phi = d + eta tau", kIdentity);
  r.check("growth tau_T+", growth_tolerance);
  r.check("growth tau_T-", growth_tolerance);
  r.check("growth tau_W+", growth_tolerance);
  r.check("growth tau_W-", growth_tolerance);

  for (auto const &rec : result.trace)
  {
    r.record("phi = d + eta tau", kIdentity, std::abs(rec.phi - rec.d - eta * rec.tau_sum));
    if (rec.chosen)
    {
      double const step = rec.next_phi - rec.phi;
      r.record("phi strictly decreases", 0.0,
               step < 0.0 ? 0.0 : std::max(step, std::numeric_limits<double>::min()));
      double const family = rec.candidate_phi[static_cast<std::size_t>(*rec.chosen)];
      r.record("fixed pair within family average", kIdentity, rec.next_phi - family);
    }
    r.record("growth tau_T+", growth_tolerance, rec.tau_t_plus - rec.bound_t);
    r.record("growth tau_T-", growth_tolerance, rec.tau_t_minus - rec.bound_t);
    r.record("growth tau_W+", growth_tolerance, rec.tau_w_plus - rec.bound_w);
    r.record("growth tau_W-", growth_tolerance, rec.tau_w_minus - rec.bound_w);

    if (!rec.endgame)
    {
      continue;
    }
    auto const &e = rec.endgame_info;
    for (std::size_t k = 0; k < 3; ++k)
    {
      r.record("endgame tau (sum side)", growth_tolerance, e.tau[k] - e.tau_bound_sum[k]);
      r.record("endgame tau (fibre side)", growth_tolerance, e.tau[k] - e.tau_bound_fibre[k]);
    }
    r.record("endgame sum <= 3 I1 + 6 I2", kIdentity, e.lhs_sum - e.rhs_bound);
    r.record("endgame tau_eg bound", growth_tolerance, e.tau_eg - e.tau_eg_bound);
    r.record("endgame phi sum < 3 phi", growth_tolerance, e.phi_sum - 3.0 * rec.phi);
    r.record("endgame I1 <= 2 eta d", growth_tolerance, e.i1_direct - 2.0 * eta * rec.d);
    r.record("endgame I2 bound", growth_tolerance,
             (e.i2_direct - 2.0 * eta * rec.d) -
                 eta / (1.0 - eta) * (2.0 * eta * rec.d - e.i1_direct));
    r.record("endgame shift structure", 0.0,
             e.shift_structure_ok ? 0.0 : std::numeric_limits<double>::infinity());
  }

  r.record("descent converged", 0.0,
           result.status == DescentStatus::kConverged ? 0.0
                                                      : std::numeric_limits<double>::infinity());
  r.record("certified tau inequality", config.report_slack,
           result.coset ? result.certified_lhs - result.certified_rhs
                        : std::numeric_limits<double>::infinity());
  return r;
}

}  // namespace pfr
