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

#include "pfr/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "pfr/f2n.hpp"
#include "pfr/info.hpp"
#include "pfr/random.hpp"
#include "pfr/ruzsa.hpp"
#include "pfr/tau.hpp"

namespace pfr {

namespace {

constexpr double kLambdas[] = {0.0, 0.25, 0.5, 1.0};

void measures_trial(CheckReport &r, Rng &rng, int n)
{
  int const    nz = std::min(n, 3);
  Joint2 const j  = random_joint(rng, n, nz, rng.coin(0.5) ? 0.3 : 0.0);
  double const hxz = entropy(j);
  double const hx  = entropy(j.marginal_x());
  double const hz  = entropy(j.marginal_z());
  CondFamily const fam = CondFamily::of_joint(j);

  r.record("subadditivity", kInequalityTolerance, hxz - hx - hz);
  r.record("mutual-information >= 0", kInequalityTolerance, -mutual_information(j));
  r.record("chain rule", kIdentityTolerance, std::abs(hxz - hz - entropy(fam)));
  r.record("chain rule (conditional_entropy)", kIdentityTolerance,
           std::abs(conditional_entropy(j) - (hxz - hz)));

  Dist const p = random_dist(rng, n, 0.3);
  Dist const q = random_dist(rng, n, 0.3);
  r.record("entropy >= 0", kInequalityTolerance, -entropy(p));
  r.record("entropy <= log |support|", kInequalityTolerance,
           entropy(p) - std::log2(static_cast<double>(p.support().size())));
  for (double lambda : kLambdas)
  {
    r.record("concavity of H", kInequalityTolerance,
             lambda * entropy(p) + (1.0 - lambda) * entropy(q) - entropy(mixture(p, q, lambda)));
  }

  Dist const q1 = random_dist(rng, n);
  Dist const q2 = random_dist(rng, n);
  r.record("KL >= 0", kInequalityTolerance, -kl_divergence(p, q1));
  r.record("KL(P,P) = 0", kIdentityTolerance, std::abs(kl_divergence(p, p)));
  for (double lambda : kLambdas)
  {
    double const lhs = kl_divergence(mixture(p, q, lambda), mixture(q1, q2, lambda));
    double const rhs = lambda * kl_divergence(p, q1) + (1.0 - lambda) * kl_divergence(q, q2);
    r.record("convexity of KL", kInequalityTolerance, lhs - rhs);
  }

  auto const   c   = static_cast<Element>(rng.below(space_size(n)));
  auto const   map = random_invertible_map(rng, n);
  r.record("entropy translation invariance", kIdentityTolerance,
           std::abs(entropy(p.translated(c)) - entropy(p)));
  r.record("entropy linear invariance", kIdentityTolerance,
           std::abs(entropy(p.mapped(map)) - entropy(p)));
  r.record("KL injection invariance", kIdentityTolerance,
           std::abs(kl_divergence(p.mapped(map).translated(c), q1.mapped(map).translated(c)) -
                    kl_divergence(p, q1)));

  r.record("KL conditioning identity", kIdentityTolerance,
           std::abs(kl_divergence(fam, q1) - kl_divergence(j.marginal_x(), q1) - hx + entropy(fam)));

  Dist const fast   = xor_convolve(p, q, ConvolutionMethod::kWalshHadamard);
  Dist const direct = xor_convolve(p, q, ConvolutionMethod::kDirect);
  double     gap    = 0.0;
  for (std::size_t e = 0; e < fast.size(); ++e)
  {
    gap = std::max(gap, std::abs(fast.probs()[e] - direct.probs()[e]));
  }
  r.record("convolution agreement", kConvolutionTolerance, gap);
}

void fibring_trial(CheckReport &r, Rng &rng, int n)
{
  double const zf = 0.3 * static_cast<double>(rng.below(3));
  Dist const   x  = random_dist(rng, n, zf);
  Dist const   y  = random_dist(rng, n, zf);
  FibringReport const f = fibring_report(x, y);

  r.record("fibring identity (T)", kIdentityTolerance, std::abs(f.residual_t()));
  r.record("fibring identity (W)", kIdentityTolerance, std::abs(f.residual_w()));
  r.record("self-distance identity", kIdentityTolerance, std::abs(f.residual_self()));
  r.record("I1 >= 0", kInequalityTolerance, -f.i1);
  r.record("I2 >= 0", kInequalityTolerance, -f.i2);
  r.record("d >= |H(X)-H(Y)|/2", kInequalityTolerance,
           0.5 * std::abs(entropy(x) - entropy(y)) - f.d_xy);
}

void bsg_trial(CheckReport &r, Rng &rng, int n)
{
  Joint2 const    j = random_joint(rng, n, n, rng.coin(0.5) ? 0.5 : 0.0);
  BsgResult const b = bsg_bound(j);
  r.record("BSG bound", kInequalityTolerance, b.lhs - b.rhs);

  double const zf = 0.3 * static_cast<double>(rng.below(3));
  Dist const   x  = random_dist(rng, n, zf);
  Dist const   y  = random_dist(rng, n, zf);
  EndgameReport const eg = endgame_candidates(x, y);
  r.record("endgame sum <= 3 I1 + 6 I2", kInequalityTolerance, eg.lhs_sum - eg.rhs_bound);
  r.record("best endgame pair <= I1 + 2 I2", kInequalityTolerance,
           eg.min_pair() - (eg.i1 + 2.0 * eg.i2));
  r.record("endgame shift structure", 0.0,
           eg.shift_structure_ok ? 0.0 : std::numeric_limits<double>::infinity());
}

void merge_prefixed(CheckReport &into, CheckReport const &from, std::string const &prefix)
{
  for (auto const &c : from.checks())
  {
    CheckStat &s = into.check(prefix + c.name, c.tolerance);
    s.count += c.count;
    s.failures += c.failures;
    s.max_violation = std::max(s.max_violation, c.max_violation);
  }
}

void tau_trial(CheckReport &r, Rng &rng, int n)
{
  Dist const ref = random_dist(rng, n, rng.coin(0.5) ? 0.4 : 0.0);
  merge_prefixed(r, verify_tau_conditions(make_entropic_tau(ref), 1, rng.next()), "entropic ");

  F2Set const a = random_nonempty_set(rng, n);
  TauFunctional const cov = make_covering_tau(a);
  merge_prefixed(r, verify_tau_conditions(cov, 1, rng.next()), "covering ");

  auto const     rank   = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
  Subspace const v      = random_subspace(rng, n, rank);
  Dist const     uv     = Dist::uniform_on(v);
  double const   oracle = tau_minus_subspace_oracle(a, v);
  double const   em     = kl_inf_conv(uv, a).value;
  r.record("tau- of U_V against closed form", kOracleTolerance, std::abs(em - oracle));
  r.record("tau- estimate is an upper bound", kInequalityTolerance, oracle - em);

  double const     rr   = cov.tau_minus(uv) + cov.tau_plus(uv);
  CosetSlice const best = coset_intersection_max(a, v);
  double const     big  = static_cast<double>(std::max<std::uint64_t>(a.size(), v.size()));
  r.record("coset slice from tau+ + tau-", 0.0,
           std::exp2(-rr) * big * (1.0 - kInequalityTolerance) - static_cast<double>(best.size));
}

void bridge_trial(CheckReport &r, Rng &rng, int n)
{
  F2Set const    a    = random_nonempty_set(rng, n);
  auto const     rank = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
  Subspace const v    = random_subspace(rng, n, rank);
  double const   d    = ruzsa_distance(Dist::uniform_on(a), Dist::uniform_on(v));
  CosetSlice const best = coset_intersection_max(a, v);
  double const     big  = static_cast<double>(std::max<std::uint64_t>(a.size(), v.size()));
  r.record("coset slice from d[U_A;U_V]", 0.0,
           big * std::exp2(-2.0 * d) * (1.0 - kInequalityTolerance) -
               static_cast<double>(best.size));
}

}  // namespace

std::string_view suite_name(Suite s)
{
  switch (s)
  {
  case Suite::kMeasures:
    return "measures";
  case Suite::kFibring:
    return "fibring";
  case Suite::kBsg:
    return "bsg";
  case Suite::kTau:
    return "tau";
  case Suite::kBridge:
    return "bridge";
  }
  return "unknown";
}

std::optional<Suite> parse_suite(std::string_view name)
{
  for (Suite s : {Suite::kMeasures, Suite::kFibring, Suite::kBsg, Suite::kTau, Suite::kBridge})
  {
    if (suite_name(s) == name)
    {
      return s;
    }
  }
  return std::nullopt;
}

CheckReport run_suite_trial(Suite suite, int n, std::uint64_t seed, int trial)
{
  Rng         rng(trial_seed(seed, static_cast<std::uint64_t>(trial)));
  CheckReport r;
  switch (suite)
  {
  case Suite::kMeasures:
    measures_trial(r, rng, n);
    break;
  case Suite::kFibring:
    fibring_trial(r, rng, n);
    break;
  case Suite::kBsg:
    bsg_trial(r, rng, n);
    break;
  case Suite::kTau:
    tau_trial(r, rng, n);
    break;
  case Suite::kBridge:
    bridge_trial(r, rng, n);
    break;
  }
  return r;
}

CheckReport run_suite(Suite suite, SuiteOptions const &options)
{
  if (options.n < 1 || options.n > kSuiteMaxDim)
  {
    throw std::invalid_argument("suite dimension must lie in [1, " + std::to_string(kSuiteMaxDim) +
                                "]");
  }
  if (options.trials < 1)
  {
    throw std::invalid_argument("suite needs at least one trial");
  }
  if (options.jobs < 1)
  {
    throw std::invalid_argument("jobs must be at least 1");
  }

  std::vector<CheckReport> per_trial(static_cast<std::size_t>(options.trials));
  std::atomic<int>         next{0};
  std::mutex               error_mutex;
  std::exception_ptr       error;
  auto                     worker = [&] {
    try
    {
      for (int i = next++; i < options.trials; i = next++)
      {
        per_trial[static_cast<std::size_t>(i)] = run_suite_trial(suite, options.n, options.seed, i);
      }
    }
    catch (...)
    {
      std::lock_guard lock(error_mutex);
      if (!error)
      {
        error = std::current_exception();
      }
      next = options.trials;
    }
  };

  int const                jobs = std::min(options.jobs, options.trials);
  std::vector<std::thread> pool;
  for (int k = 1; k < jobs; ++k)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (auto &t : pool)
  {
    t.join();
  }
  if (error)
  {
    std::rethrow_exception(error);
  }

  CheckReport out;
  for (auto const &r : per_trial)
  {
    out.merge(r);
  }
  return out;
}

}  // namespace pfr
