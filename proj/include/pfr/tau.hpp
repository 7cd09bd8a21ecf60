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

// The τ functionals driven by the descent.
//
// Entropic:  τ(X) = d[R; X] for a reference law R.
// Covering:  τ⁻(X) = inf_T D_KL(X ‖ U_A + T),  τ⁺(X) = τ⁻(X) + H(X) - log|A|,
//            τ(X)  = (τ⁺(X) + τ⁻(X)) / 2.
//
// The infimum is approached by EM on the mixture weights T, so covering values
// are upper bounds on the exact functional.

#include <cstdint>
#include <memory>
#include <vector>

#include "pfr/checks.hpp"
#include "pfr/info.hpp"

namespace pfr {

struct KlInfOptions
{
  double tolerance_bits = 1e-10;  // stop once the duality gap certificate is below this
  int    max_iterations = 10000;
  bool   record_history = false;
};

struct KlInfResult
{
  double value = 0.0;  // D_KL(X ‖ U_A * minimizer_t), bits
  Dist   minimizer_t;
  int    iterations = 0;
  bool   converged  = false;
  /// Frank-Wolfe gap at the final iterate: value - inf <= gap_bound.
  double              gap_bound = 0.0;
  std::vector<double> history;  // objective after each step, if requested
};

/// Minimises T ↦ D_KL(X ‖ U_A * T) over the simplex by multiplicative EM updates
/// started from the uniform law. A step T ← T g^ω with ω > 1 replaces the plain
/// update whenever it does better, so the objective is non-increasing.
KlInfResult kl_inf_conv(Dist const &x, F2Set const &a, KlInfOptions const &options = {});

/// Closed form of τ⁻(U_V): log|A| - log max_t |A ∩ (V+t)|.
double tau_minus_subspace_oracle(F2Set const &a, Subspace const &v);

/// Shift s for which x.translated(s) is the canonical representative of the
/// translation class of x (the lexicographically largest translate).
Element canonical_shift(Dist const &x);

enum class TauKind
{
  kEntropic,
  kCovering,
};

class TauFunctional
{
public:
  TauKind kind() const;
  int     dim() const;

  double eval(Dist const &x) const;
  double operator()(Dist const &x) const { return eval(x); }
  /// E_z τ(X | Z = z).
  double eval_cond(CondFamily const &f) const;

  /// Covering kind only.
  double         tau_minus(Dist const &x) const;
  double         tau_plus(Dist const &x) const;
  F2Set const   &covering_set() const;
  /// Entropic kind only.
  Dist const &reference() const;

  /// Memoisation is keyed by the canonical translate quantised at 1e-12 and
  /// is safe under concurrent evaluation.
  void        set_memoize(bool on) const;
  std::size_t cache_size() const;

private:
  struct State;
  explicit TauFunctional(std::shared_ptr<State> state);

  Dist   canonical(Dist const &x) const;
  double raw(Dist const &canon) const;

  std::shared_ptr<State> state_;

  friend TauFunctional make_entropic_tau(Dist ref);
  friend TauFunctional make_covering_tau(F2Set a, KlInfOptions options);
};

TauFunctional make_entropic_tau(Dist ref);
TauFunctional make_covering_tau(F2Set a, KlInfOptions options = {});

struct TauTolerances
{
  double main    = 1e-9;  // the four descent conditions
  double kl      = 1e-6;  // τ± inequalities (covering only)
  double kl_exact = 1e-9; // the KL identities, which involve no infimum
  double continuity = 1e-4;
};

/// Randomised check of the descent conditions on `trials` seeded instances of
/// the functional's dimension. The covering kind also checks the τ± growth
/// bounds and the KL facts they rest on.
CheckReport verify_tau_conditions(TauFunctional const &tau, int trials, std::uint64_t seed,
                                  TauTolerances const &tol = {});

}  // namespace pfr
