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

#include "pfr/tau.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <unordered_map>

#include "pfr/random.hpp"
#include "pfr/ruzsa.hpp"

namespace pfr {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// f ↦ U_A * f, directly over A for small sets and through the Walsh-Hadamard
// transform otherwise.
class UniformConvolver
{
public:
  explicit UniformConvolver(F2Set const &a)
    : members_(a.begin(), a.end())
    , n_(a.dim())
    , use_fwht_(a.size() > static_cast<std::size_t>(4 * a.dim()))
  {
    if (use_fwht_)
    {
      spectrum_.assign(space_size(n_), 0.0);
      for (Element x : members_)
      {
        spectrum_[x] = 1.0 / static_cast<double>(members_.size());
      }
      fwht(spectrum_);
    }
  }

  void apply(std::vector<double> const &f, std::vector<double> &out) const
  {
    std::size_t const nn = f.size();
    if (!use_fwht_)
    {
      double const w = 1.0 / static_cast<double>(members_.size());
      for (std::size_t x = 0; x < nn; ++x)
      {
        double acc = 0.0;
        for (Element a : members_)
        {
          acc += f[x ^ a];
        }
        out[x] = acc * w;
      }
      return;
    }
    out = f;
    fwht(out);
    for (std::size_t i = 0; i < nn; ++i)
    {
      out[i] *= spectrum_[i];
    }
    fwht(out);
    double const scale = 1.0 / static_cast<double>(nn);
    for (auto &v : out)
    {
      v = std::max(v * scale, 0.0);
    }
  }

private:
  std::vector<Element> members_;
  int                  n_;
  bool                 use_fwht_;
  std::vector<double>  spectrum_;
};

constexpr double kMaxOverRelaxation = 64.0;

double kl_bits(std::span<const double> p, std::vector<double> const &q)
{
  double nats = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x)
  {
    if (p[x] < kSupportCutoff)
    {
      continue;
    }
    if (!(q[x] > 0.0))
    {
      return std::numeric_limits<double>::infinity();
    }
    nats += p[x] * std::log(p[x] / q[x]);
  }
  return std::max(nats / kLn2, 0.0);
}

// One EM responsibility pass: g(t) = sum_x X(x) U_A(x+t) / Q(x).
void responsibilities(std::span<const double> px, std::vector<double> const &q,
                      UniformConvolver const &conv, std::vector<double> &ratio,
                      std::vector<double> &g)
{
  for (std::size_t x = 0; x < px.size(); ++x)
  {
    ratio[x] = (px[x] >= kSupportCutoff && q[x] > 0.0) ? px[x] / q[x] : 0.0;
  }
  conv.apply(ratio, g);
}

// Frank-Wolfe certificate: the objective exceeds its infimum by at most
// (max_t g(t) - 1) / ln 2 bits.
double gap_bits(std::vector<double> const &g)
{
  return std::max((*std::max_element(g.begin(), g.end()) - 1.0) / kLn2, 0.0);
}

}  // namespace

KlInfResult kl_inf_conv(Dist const &x, F2Set const &a, KlInfOptions const &options)
{
  if (a.empty())
  {
    throw std::invalid_argument("kl_inf_conv: empty reference set");
  }
  if (a.dim() != x.dim())
  {
    throw DimensionError("kl_inf_conv: set and distribution have different dimensions");
  }
  std::size_t const      nn = x.size();
  UniformConvolver const conv(a);
  auto const             px = x.probs();

  std::vector<double> t(nn, 1.0 / static_cast<double>(nn));
  std::vector<double> q(nn), ratio(nn), g(nn);
  std::vector<double> t_em(nn), q_em(nn), t_fast(nn), q_fast(nn);
  conv.apply(t, q);
  double f = kl_bits(px, q);

  // Each step compares the plain update T <- T g with the over-relaxed one
  // T <- T g^omega and keeps the better, so the objective never increases.
  double omega = 2.0;

  KlInfResult result;
  while (result.iterations < options.max_iterations)
  {
    responsibilities(px, q, conv, ratio, g);
    if (gap_bits(g) <= options.tolerance_bits)
    {
      result.converged = true;
      break;
    }
    double total_em   = 0.0;
    double total_fast = 0.0;
    for (std::size_t i = 0; i < nn; ++i)
    {
      t_em[i]   = t[i] * g[i];
      t_fast[i] = g[i] > 0.0 ? t[i] * std::pow(g[i], omega) : 0.0;
      total_em += t_em[i];
      total_fast += t_fast[i];
    }
    for (std::size_t i = 0; i < nn; ++i)
    {
      t_em[i] /= total_em;
      t_fast[i] /= total_fast;
    }
    conv.apply(t_em, q_em);
    double const f_em = kl_bits(px, q_em);
    conv.apply(t_fast, q_fast);
    double const f_fast = kl_bits(px, q_fast);

    double f_next = f_em;
    if (f_fast <= f_em && std::isfinite(total_fast) && total_fast > 0.0)
    {
      f_next = f_fast;
      t.swap(t_fast);
      q.swap(q_fast);
      omega = std::min(2.0 * omega, kMaxOverRelaxation);
    }
    else
    {
      t.swap(t_em);
      q.swap(q_em);
      omega = std::max(0.5 * omega, 2.0);
    }
    ++result.iterations;
    if (options.record_history)
    {
      result.history.push_back(f_next);
    }
    f = f_next;
  }

  responsibilities(px, q, conv, ratio, g);
  result.gap_bound   = gap_bits(g);
  result.value       = f;
  result.minimizer_t = Dist::normalized(x.dim(), std::move(t));
  return result;
}

double tau_minus_subspace_oracle(F2Set const &a, Subspace const &v)
{
  CosetSlice const slice = coset_intersection_max(a, v);
  return std::log2(static_cast<double>(a.size())) - std::log2(static_cast<double>(slice.size));
}

Element canonical_shift(Dist const &x)
{
  auto const        p  = x.probs();
  std::size_t const nn = p.size();
  double const      top = x.max_prob();

  // Translate s puts p[s] at index 0, so only argmax positions can win.
  auto greater = [&](std::size_t s1, std::size_t s2) {
    for (std::size_t i = 0; i < nn; ++i)
    {
      double const a = p[i ^ s1];
      double const b = p[i ^ s2];
      if (a != b)
      {
        return a > b;
      }
    }
    return false;
  };
  std::size_t best = nn;
  for (std::size_t s = 0; s < nn; ++s)
  {
    if (p[s] == top && (best == nn || greater(s, best)))
    {
      best = s;
    }
  }
  return static_cast<Element>(best);
}

// ---------------------------------------------------------------------------
// TauFunctional

namespace {

struct KeyHash
{
  std::size_t operator()(std::vector<std::int64_t> const &k) const
  {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::int64_t v : k)
    {
      h = (h ^ static_cast<std::uint64_t>(v)) * 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

std::vector<std::int64_t> fingerprint(Dist const &x)
{
  std::vector<std::int64_t> key(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    key[i] = std::llround(x.probs()[i] * 1e12);
  }
  return key;
}

}  // namespace

struct TauFunctional::State
{
  TauKind      kind = TauKind::kEntropic;
  int          dim  = 0;
  Dist         ref;
  F2Set        set;
  double       log_set = 0.0;
  KlInfOptions options;

  mutable std::mutex                                                       mu;
  mutable std::unordered_map<std::vector<std::int64_t>, double, KeyHash> cache;
  mutable std::atomic<bool>                                                memoize{true};
};

TauFunctional::TauFunctional(std::shared_ptr<State> state)
  : state_(std::move(state))
{}

TauFunctional make_entropic_tau(Dist ref)
{
  auto s  = std::make_shared<TauFunctional::State>();
  s->kind = TauKind::kEntropic;
  s->dim  = ref.dim();
  s->ref  = std::move(ref);
  return TauFunctional(std::move(s));
}

TauFunctional make_covering_tau(F2Set a, KlInfOptions options)
{
  if (a.empty())
  {
    throw std::invalid_argument("covering τ needs a non-empty set");
  }
  auto s     = std::make_shared<TauFunctional::State>();
  s->kind    = TauKind::kCovering;
  s->dim     = a.dim();
  s->log_set = std::log2(static_cast<double>(a.size()));
  s->set     = std::move(a);
  s->options = options;
  return TauFunctional(std::move(s));
}

TauKind TauFunctional::kind() const
{
  return state_->kind;
}

int TauFunctional::dim() const
{
  return state_->dim;
}

F2Set const &TauFunctional::covering_set() const
{
  if (state_->kind != TauKind::kCovering)
  {
    throw std::logic_error("covering_set() on an entropic τ");
  }
  return state_->set;
}

Dist const &TauFunctional::reference() const
{
  if (state_->kind != TauKind::kEntropic)
  {
    throw std::logic_error("reference() on a covering τ");
  }
  return state_->ref;
}

void TauFunctional::set_memoize(bool on) const
{
  state_->memoize = on;
}

std::size_t TauFunctional::cache_size() const
{
  std::lock_guard lock(state_->mu);
  return state_->cache.size();
}

// d[R; X] for the entropic kind, τ⁻(X) for the covering kind, evaluated on the
// canonical translate so that translation invariance holds bit-for-bit.
double TauFunctional::raw(Dist const &canon) const
{

  std::vector<std::int64_t> key;
  if (state_->memoize)
  {
    key = fingerprint(canon);
    std::lock_guard lock(state_->mu);
    if (auto it = state_->cache.find(key); it != state_->cache.end())
    {
      return it->second;
    }
  }

  double const value = state_->kind == TauKind::kEntropic
                         ? ruzsa_distance(state_->ref, canon)
                         : kl_inf_conv(canon, state_->set, state_->options).value;

  if (state_->memoize)
  {
    std::lock_guard lock(state_->mu);
    state_->cache.emplace(std::move(key), value);
  }
  return value;
}

Dist TauFunctional::canonical(Dist const &x) const
{
  if (x.dim() != state_->dim)
  {
    throw DimensionError("τ evaluated on a distribution of the wrong dimension");
  }
  return x.translated(canonical_shift(x));
}

double TauFunctional::eval(Dist const &x) const
{
  Dist const   canon = canonical(x);
  double const r     = raw(canon);
  if (state_->kind == TauKind::kEntropic)
  {
    return r;
  }
  return r + 0.5 * (entropy(canon) - state_->log_set);
}

double TauFunctional::eval_cond(CondFamily const &f) const
{
  double total = 0.0;
  for (auto const &c : f)
  {
    total += c.weight * eval(c.dist);
  }
  return total;
}

double TauFunctional::tau_minus(Dist const &x) const
{
  if (state_->kind != TauKind::kCovering)
  {
    throw std::logic_error("tau_minus() on an entropic τ");
  }
  return raw(canonical(x));
}

double TauFunctional::tau_plus(Dist const &x) const
{
  if (state_->kind != TauKind::kCovering)
  {
    throw std::logic_error("tau_plus() on an entropic τ");
  }
  Dist const canon = canonical(x);
  return raw(canon) + entropy(canon) - state_->log_set;
}

// ---------------------------------------------------------------------------
// Randomised verification

CheckReport verify_tau_conditions(TauFunctional const &tau, int trials, std::uint64_t seed,
                                  TauTolerances const &tol)
{
  if (trials < 1)
  {
    throw std::invalid_argument("verify_tau_conditions needs at least one trial");
  }
  int const    n        = tau.dim();
  int const    nz       = std::min(n, 3);
  bool const   covering = tau.kind() == TauKind::kCovering;
  double const main_tol = covering ? std::max(tol.main, tol.kl) : tol.main;

  CheckReport report;
  for (int i = 0; i < trials; ++i)
  {
    Rng          rng(trial_seed(seed, static_cast<std::uint64_t>(i)));
    Dist const   x     = random_dist(rng, n, 0.3);
    Dist const   y     = random_dist(rng, n, 0.3);
    Joint2 const joint = random_joint(rng, n, nz, 0.3);
    Element const shift = static_cast<Element>(rng.below(space_size(n)));

    Dist const       xy     = xor_convolve(x, y);
    Dist const       xz     = joint.marginal_x();
    CondFamily const fibres = CondFamily::of_joint(joint);
    double const     h_x    = entropy(x);
    double const     h_xy   = entropy(xy);
    double const     h_xz   = entropy(xz);
    double const     h_cond = conditional_entropy(joint);

    double const tau_x  = tau.eval(x);
    double const tau_xz = tau.eval(xz);
    report.record("sum", main_tol, tau.eval(xy) - tau_x - 0.5 * (h_xy - h_x));
    report.record("conditioning", main_tol, tau.eval_cond(fibres) - tau_xz - 0.5 * (h_xz - h_cond));
    report.record("translation", 0.0, std::abs(tau.eval(x.translated(shift)) - tau_x));
    report.record("continuity", tol.continuity, std::abs(tau.eval(mixture(x, y, 1.0 - 1e-7)) - tau_x));

    if (!covering)
    {
      continue;
    }

    double const tm_x  = tau.tau_minus(x);
    double const tm_xz = tau.tau_minus(xz);
    double tm_cond = 0.0;
    double tp_cond = 0.0;
    for (auto const &c : fibres)
    {
      tm_cond += c.weight * tau.tau_minus(c.dist);
      tp_cond += c.weight * tau.tau_plus(c.dist);
    }
    report.record("sum growth τ⁻", tol.kl, tau.tau_minus(xy) - tm_x);
    report.record("conditioning growth τ⁻", tol.kl, tm_cond - tm_xz - (h_xz - h_cond));
    report.record("sum growth τ⁺", tol.kl, tau.tau_plus(xy) - tau.tau_plus(x) - (h_xy - h_x));
    report.record("conditioning growth τ⁺", tol.kl, tp_cond - tau.tau_plus(xz));

    // KL under convolution and conditioning. Y gets full support so every divergence is finite.
    Dist const y_full = random_dist(rng, n, 0.0);
    Dist const z      = random_dist(rng, n, 0.3);
    double const d_xy = kl_divergence(x, y_full);
    report.record("KL under convolution", tol.kl_exact,
                  kl_divergence(xor_convolve(x, z), xor_convolve(y_full, z)) - d_xy);
    report.record("KL conditioning identity", tol.kl_exact,
                  std::abs(kl_divergence(fibres, y_full) - kl_divergence(xz, y_full) - h_xz + h_cond));
  }
  return report;
}

}  // namespace pfr
