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

#include <cmath>

#include "gtest/gtest.h"

#include "pfr/descent.hpp"
#include "pfr/random.hpp"
#include "pfr/ruzsa.hpp"

namespace pfr {
namespace {

constexpr double kEta = 0.124999;

F2Set a3()
{
  return F2Set(2, {0b00, 0b01, 0b10});
}

TEST(PhiTest, Examples)
{
  Dist const          ua = Dist::uniform_on(a3());
  TauFunctional const ta = make_entropic_tau(ua);
  TauFunctional const tb = make_entropic_tau(ua);
  double const        d  = 0.389975;
  EXPECT_NEAR(phi(ua, ua, ta, tb, kEta), d + kEta * 2.0 * d, 1e-6);

  Dist const   p  = Dist::point_mass(2, 3);
  DescentState st = make_state(p, p, ta, tb, kEta);
  EXPECT_NEAR(st.d, 0.0, 1e-12);
  EXPECT_NEAR(st.tau_sum, 2.0 * ruzsa_distance(ua, p), 1e-12);
  EXPECT_NEAR(st.phi, st.d + kEta * st.tau_sum, 1e-12);
}

TEST(PhiTest, CoveringTauVanishesOnUniformA)
{
  Dist const          ua  = Dist::uniform_on(a3());
  TauFunctional const tau = make_covering_tau(a3());
  EXPECT_NEAR(phi(ua, ua, tau, tau, kEta), ruzsa_distance(ua, ua), 1e-9);
}

TEST(ConfigTest, Validation)
{
  EXPECT_NO_THROW(DescentConfig{}.validate());
  DescentConfig c;
  c.eta = 0.125;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.eta = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c        = {};
  c.d_stop = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c           = {};
  c.max_iters = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c       = {};
  c.theta = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(TagTest, NamesAndOrder)
{
  EXPECT_EQ(tag_name(CandidateTag::kSumT), "sum-T");
  EXPECT_EQ(tag_name(CandidateTag::kFibreW), "fibre-W");
  EXPECT_EQ(tag_name(CandidateTag::kEndgameWT), "endgame-WT");
  EXPECT_EQ(status_name(DescentStatus::kConverged), "converged");
  EXPECT_EQ(status_name(DescentStatus::kNotCosetUniform), "not-coset-uniform");
}

TEST(CandidatesTest, SevenCandidatesAndLazyEndgame)
{
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial)
  {
    Dist const          x  = random_dist(rng, 3, 0.3);
    Dist const          y  = random_dist(rng, 3, 0.3);
    TauFunctional const ta = make_entropic_tau(y);
    TauFunctional const tb = make_entropic_tau(x);
    DescentState const  st = make_state(x, y, ta, tb, kEta);
    CandidateSet const  s  = generate_candidates(st, ta, tb, kEta);
    ASSERT_EQ(s.candidates.size(), 7u);
    double best_early = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
    {
      EXPECT_TRUE(s.candidates[i].evaluated);
      best_early = std::min(best_early, s.candidates[i].phi);
    }
    EXPECT_EQ(s.endgame, best_early >= st.phi - kPhiTieTolerance);
    for (int i = 4; i < 7; ++i)
    {
      EXPECT_EQ(s.candidates[i].evaluated, s.endgame);
    }
    EXPECT_NEAR(s[CandidateTag::kSumT].d, ruzsa_distance(xor_convolve(x, y), xor_convolve(x, y)),
                1e-12);
    EXPECT_NEAR(s[CandidateTag::kSumW].d, ruzsa_distance(xor_convolve(x, x), xor_convolve(y, y)),
                1e-12);
  }
}

TEST(SelectTest, NoneBelowCurrentAndTieBreaking)
{
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial)
  {
    // With X = Y the T and W candidates coincide, so the W ones can never win.
    Dist const          x  = random_dist(rng, 3, 0.3);
    TauFunctional const ta = make_entropic_tau(x);
    TauFunctional const tb = make_entropic_tau(x);
    DescentState const  st = make_state(x, x, ta, tb, kEta);
    CandidateSet const  s  = generate_candidates(st, ta, tb, kEta);
    EXPECT_NEAR(s[CandidateTag::kSumT].phi, s[CandidateTag::kSumW].phi, 1e-12);
    EXPECT_FALSE(select_and_fix(s, -1.0).has_value());
    auto const sel = select_and_fix(s, st.phi);
    if (sel)
    {
      EXPECT_NE(sel->tag, CandidateTag::kSumW);
      EXPECT_NE(sel->tag, CandidateTag::kFibreW);
      EXPECT_LE(sel->phi, sel->family_phi + 1e-12);
      EXPECT_LT(sel->phi, st.phi);
      EXPECT_NEAR(sel->phi, phi(sel->x, sel->y, ta, tb, kEta), 1e-12);
    }
  }
}

TEST(SelectTest, FixedPairNeverAboveFamilyAverage)
{
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial)
  {
    int const           n   = 2 + static_cast<int>(rng.below(2));
    Dist const          x   = random_dist(rng, n, 0.3);
    Dist const          y   = random_dist(rng, n, 0.3);
    TauFunctional const ta  = make_entropic_tau(y);
    TauFunctional const tb  = make_entropic_tau(x);
    DescentState const  st  = make_state(x, y, ta, tb, kEta);
    CandidateSet const  s   = generate_candidates(st, ta, tb, kEta);
    auto const          sel = select_and_fix(s, st.phi);
    ASSERT_TRUE(sel.has_value());
    double best = std::numeric_limits<double>::infinity();
    for (auto const &c : s.candidates)
    {
      best = std::min(best, c.phi);
    }
    EXPECT_NEAR(sel->family_phi, best, 1e-12);
    EXPECT_LE(sel->phi, sel->family_phi + 1e-12);
  }
}

TEST(ForcedEndgameTest, UnconditionalBoundsHold)
{
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial)
  {
    Dist const          x  = random_dist(rng, 3, 0.3);
    Dist const          y  = random_dist(rng, 3, 0.3);
    TauFunctional const ta = make_entropic_tau(y);
    TauFunctional const tb = make_entropic_tau(x);
    DescentState const  st = make_state(x, y, ta, tb, kEta);
    CandidateSet const  s  = generate_candidates(st, ta, tb, kEta, kMinConditionWeight, true);
    ASSERT_TRUE(s.endgame);
    auto const       &e = s.endgame_info;
    TripleJoint const tj(x, y);
    EXPECT_NEAR(e.i1_direct, tj.i1(), 1e-12);
    EXPECT_NEAR(e.i2_direct, tj.i2(), 1e-12);
    EXPECT_NEAR(e.i1_direct, s.i1, 1e-9);
    EXPECT_NEAR(e.i2_direct, s.i2, 1e-9);
    EXPECT_LE(e.lhs_sum, e.rhs_bound + 1e-9);
    EXPECT_LE(e.tau_eg, e.tau_eg_bound + 1e-9);
    for (int k = 0; k < 3; ++k)
    {
      EXPECT_LE(e.tau[k], e.tau_bound_sum[k] + 1e-9);
      EXPECT_LE(e.tau[k], e.tau_bound_fibre[k] + 1e-9);
      EXPECT_TRUE(s.candidates[4 + k].evaluated);
    }
    EXPECT_TRUE(e.shift_structure_ok);
  }
}

TEST(ExtractTest, ExactCoset)
{
  Rng                  rng(2);
  Subspace const       v = random_subspace(rng, 4, 2);
  Dist const           u = Dist::uniform_on(v).translated(0b1000);
  ExtractedCoset const c = extract_subspace(u, 1e-4);
  EXPECT_EQ(c.subspace, v);
  EXPECT_EQ(c.rep, v.reduce(0b1000));
  EXPECT_NEAR(c.distance, 0.0, 1e-12);
}

TEST(ExtractTest, PointMass)
{
  ExtractedCoset const c = extract_subspace(Dist::point_mass(3, 6), 1e-4);
  EXPECT_EQ(c.subspace.rank(), 0);
  EXPECT_EQ(c.rep, 6u);
}

TEST(ExtractTest, ToleratesSmallNoise)
{
  Rng                  rng(4);
  Subspace const       v     = random_subspace(rng, 4, 3);
  Dist const           noisy = mixture(Dist::uniform_on(v), Dist::uniform(4), 1.0 - 1e-6);
  ExtractedCoset const c     = extract_subspace(noisy, 1e-4);
  EXPECT_EQ(c.subspace, v);
  EXPECT_EQ(c.rep, 0u);
  EXPECT_LT(c.distance, 1e-4);
}

TEST(ExtractTest, RejectsNonUniform)
{
  EXPECT_THROW(extract_subspace(Dist(2, {0.5, 0.3, 0.2, 0.0}), 1e-4), NotCosetUniform);
}

TEST(RunDescentTest, StartsAtCoset)
{
  Rng                 rng(6);
  Dist const          uv = Dist::uniform_on(random_subspace(rng, 3, 2));
  TauFunctional const ta = make_entropic_tau(uv);
  TauFunctional const tb = make_entropic_tau(uv);
  DescentResult const r  = run_descent(uv, uv, ta, tb);
  EXPECT_EQ(r.status, DescentStatus::kConverged);
  EXPECT_TRUE(r.trace.empty());
  ASSERT_TRUE(r.coset.has_value());
  EXPECT_EQ(Dist::uniform_on(r.coset->subspace), uv);
  EXPECT_TRUE(r.ok());
}

TEST(RunDescentTest, ThreePointSet)
{
  Dist const          ua = Dist::uniform_on(a3());
  TauFunctional const ta = make_entropic_tau(ua);
  TauFunctional const tb = make_entropic_tau(ua);
  DescentConfig const cfg;
  DescentResult const r = run_descent(ua, ua, ta, tb, cfg);
  ASSERT_TRUE(r.ok()) << status_name(r.status);
  EXPECT_LE(r.final_state.d, cfg.d_stop);
  Dist const   uv = Dist::uniform_on(r.coset->subspace);
  double const d0 = ruzsa_distance(ua, ua);
  EXPECT_LE(ruzsa_distance(uv, ua), 5.0 * d0 + cfg.report_slack);
  EXPECT_TRUE(audit_descent(r, cfg, kEntropicGrowthTolerance).passed());
}

TEST(RunDescentTest, TraceIsTranslationInvariant)
{
  Dist const          ua = Dist::uniform_on(a3());
  Dist const          uc = ua.translated(0b11);
  TauFunctional const ta = make_entropic_tau(ua);
  TauFunctional const tc = make_entropic_tau(uc);
  DescentResult const r  = run_descent(ua, ua, ta, ta);
  DescentResult const s  = run_descent(uc, uc, tc, tc);
  ASSERT_EQ(r.trace.size(), s.trace.size());
  for (std::size_t i = 0; i < r.trace.size(); ++i)
  {
    EXPECT_NEAR(r.trace[i].phi, s.trace[i].phi, 1e-9);
    EXPECT_EQ(r.trace[i].chosen, s.trace[i].chosen);
  }
  EXPECT_EQ(r.status, s.status);
}

TEST(RunDescentTest, RandomSetsConvergeAndAudit)
{
  Rng rng(15);
  for (int trial = 0; trial < 8; ++trial)
  {
    int const           n  = 2 + static_cast<int>(rng.below(3));
    Dist const          x  = Dist::uniform_on(random_nonempty_set(rng, n));
    Dist const          y  = Dist::uniform_on(random_nonempty_set(rng, n));
    TauFunctional const ta = make_entropic_tau(y);
    TauFunctional const tb = make_entropic_tau(x);
    DescentConfig const cfg;
    DescentResult const r = run_descent(x, y, ta, tb, cfg);
    EXPECT_TRUE(r.ok()) << status_name(r.status);
    CheckReport const audit = audit_descent(r, cfg, kEntropicGrowthTolerance);
    for (auto const &c : audit.checks())
    {
      EXPECT_TRUE(c.passed()) << c.name << " " << c.max_violation;
    }
    for (std::size_t i = 1; i < r.trace.size(); ++i)
    {
      EXPECT_LT(r.trace[i].phi, r.trace[i - 1].phi);
    }
  }
}

TEST(RunDescentTest, MaxIterationsStatus)
{
  Dist const          ua = Dist::uniform_on(a3());
  TauFunctional const ta = make_entropic_tau(ua);
  DescentConfig       cfg;
  cfg.max_iters         = 1;
  cfg.d_stop            = 1e-12;
  DescentResult const r = run_descent(ua, ua, ta, ta, cfg);
  EXPECT_NE(r.status, DescentStatus::kConverged);
  EXPECT_FALSE(r.ok());
}

}  // namespace
}  // namespace pfr
