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

// Potential descent on pairs of laws.
//
// φ[X;Y] = d[X;Y] + η (τ_A(X) + τ_B(Y)) with 0 < η < 1/8. Each step looks at
// seven replacements for (X, Y): the sums (T, T̄) and (W, W̄), the fibres
// (X1|T, Y2|T̄) and (X1|W, Y1|W̄), and, only when none of those lowers φ, the
// endgame pairs (T;V)|W̄,S, (V;W)|T̄,S and (W;T)|V̄,S. The candidate with the
// smallest average φ is taken and its conditioning is fixed to the value with
// the smallest φ, which is never above the average.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pfr/checks.hpp"
#include "pfr/ruzsa.hpp"
#include "pfr/tau.hpp"

namespace pfr {

struct DescentConfig
{
  double eta          = 0.124999;
  double d_stop       = 1e-6;
  int    max_iters    = 500;
  double theta        = 1e-4;  // support cutoff for subspace extraction
  double p_min        = kMinConditionWeight;
  double report_slack = 1e-3;  // allowed slack on the certified τ inequality

  /// Throws std::invalid_argument unless 0 < eta < 1/8, d_stop > 0 and the rest are sane.
  void validate() const;
};

/// φ improvements smaller than this are treated as ties.
inline constexpr double kPhiTieTolerance = 1e-12;

enum class CandidateTag : int
{
  kSumT = 0,
  kSumW,
  kFibreT,
  kFibreW,
  kEndgameTV,
  kEndgameVW,
  kEndgameWT,
};

inline constexpr int kCandidateCount = 7;

std::string_view tag_name(CandidateTag tag);

struct DescentState
{
  Dist   x;
  Dist   y;
  double phi      = 0.0;
  double d        = 0.0;
  double tau_sum  = 0.0;
  int    iteration = 0;
};

DescentState make_state(Dist x, Dist y, TauFunctional const &tau_a, TauFunctional const &tau_b,
                        double eta, int iteration = 0);

double phi(Dist const &x, Dist const &y, TauFunctional const &tau_a, TauFunctional const &tau_b,
           double eta);

enum class CandidateShape
{
  kSingle,   // one fixed pair
  kProduct,  // independent families {X|z} x {Y|w}
  kPaired,   // one family {(X, Y)|z}
};

struct Candidate
{
  CandidateTag   tag       = CandidateTag::kSumT;
  CandidateShape shape     = CandidateShape::kSingle;
  bool           evaluated = false;
  double         phi       = std::numeric_limits<double>::infinity();  // average over conditionings
  double         d         = 0.0;  // average Ruzsa distance
  double         tau_sum   = 0.0;  // average τ_A + τ_B

  CondFamily   first;   // kSingle, kProduct
  CondFamily   second;  // kSingle, kProduct
  PairedFamily paired;  // kPaired

  std::vector<double> tau_first;   // τ_A per member of `first` (or of paired firsts)
  std::vector<double> tau_second;  // τ_B per member of `second` (or of paired seconds)
  /// φ per conditioning: row-major (i, j) for kProduct, by index otherwise.
  std::vector<double> cond_phi;
};

struct EndgameDiagnostics
{
  double              i1_direct = 0.0;  // from the (T, V, S) law
  double              i2_direct = 0.0;
  double              lhs_sum   = 0.0;  // sum of the three paired distances
  double              rhs_bound = 0.0;  // 3 I1 + 6 I2
  std::array<double, 3> tau  = {};      // average τ_A + τ_B of TV, VW, WT
  /// Upper bounds on each entry of `tau`: from the sum side and the fibre side.
  std::array<double, 3> tau_bound_sum   = {};
  std::array<double, 3> tau_bound_fibre = {};
  double              tau_eg       = 0.0;
  double              tau_eg_bound = 0.0;  // 3 τ0 + 6 d + (I2 - I1)
  double              phi_sum      = 0.0;  // sum of the three average φ
  bool                shift_structure_ok = false;
};

struct CandidateSet
{
  std::array<Candidate, kCandidateCount> candidates;
  double current_phi = 0.0;
  double d           = 0.0;
  double tau0        = 0.0;
  // Fibring-side quantities, with I1 and I2 read off the fibring identities.
  double i1          = 0.0;
  double i2          = 0.0;
  double tau_t_plus  = 0.0;
  double tau_t_minus = 0.0;
  double tau_w_plus  = 0.0;
  double tau_w_minus = 0.0;
  bool   endgame     = false;
  EndgameDiagnostics endgame_info;

  Candidate const &operator[](CandidateTag t) const { return candidates[static_cast<std::size_t>(t)]; }
};

CandidateSet generate_candidates(DescentState const &state, TauFunctional const &tau_a,
                                 TauFunctional const &tau_b, double eta);
/// Same, dropping conditionings lighter than p_min. With force_endgame the endgame
/// families are evaluated even when a sum or fibre already improves φ.
CandidateSet generate_candidates(DescentState const &state, TauFunctional const &tau_a,
                                 TauFunctional const &tau_b, double eta, double p_min,
                                 bool force_endgame = false);

struct Selection
{
  Dist          x;
  Dist          y;
  CandidateTag  tag     = CandidateTag::kSumT;
  std::uint64_t label_x = 0;  // conditioning of the first component (or the shared one)
  std::uint64_t label_y = 0;
  double        phi     = 0.0;  // φ of the fixed pair
  double        family_phi = 0.0;
};

/// The improving replacement, or nullopt when no candidate beats current_phi.
std::optional<Selection> select_and_fix(CandidateSet const &set, double current_phi);

struct IterationRecord
{
  int    iteration = 0;
  double d         = 0.0;
  double phi       = 0.0;
  double tau_sum   = 0.0;
  std::array<double, kCandidateCount> candidate_phi{};  // NaN when not evaluated
  std::optional<CandidateTag> chosen;
  std::uint64_t label_x = 0;
  std::uint64_t label_y = 0;
  double        next_phi = 0.0;
  double i1 = 0.0;
  double i2 = 0.0;
  double tau_t_plus  = 0.0;
  double tau_t_minus = 0.0;
  double tau_w_plus  = 0.0;
  double tau_w_minus = 0.0;
  double bound_t = 0.0;  // τ0 + d
  double bound_w = 0.0;  // τ0 + d + (I2 - I1)/2
  bool   endgame = false;
  EndgameDiagnostics endgame_info;
};

using DescentTrace = std::vector<IterationRecord>;

enum class DescentStatus
{
  kConverged,       // d <= d_stop and a coset was extracted
  kMaxIterations,
  kNoProgress,      // no candidate lowers φ although d > d_stop
  kNotCosetUniform, // the final X is not close to a coset-uniform law
};

std::string_view status_name(DescentStatus s);

struct ExtractedCoset
{
  Subspace subspace;
  Element  rep = 0;
  double   distance = 0.0;  // d[U_{V+rep}; X]
};

class NotCosetUniform : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// S = {x : p(x) >= θ max p}, rep = min S, V = span{x + rep : x in S}. Throws
/// NotCosetUniform when d[U_{V+rep}; X] exceeds 0.01 bits.
ExtractedCoset extract_subspace(Dist const &x, double theta);

struct DescentResult
{
  DescentStatus           status = DescentStatus::kNoProgress;
  std::optional<ExtractedCoset> coset;
  DescentState            initial;
  DescentState            final_state;
  DescentTrace            trace;

  // τ_A(U_V) + τ_B(U_V) <= τ_A(X0) + τ_B(Y0) + d[X0;Y0]/η + slack
  double certified_lhs = 0.0;
  double certified_rhs = 0.0;
  bool   certified     = false;

  bool ok() const { return status == DescentStatus::kConverged && certified; }
};

/// Tolerances for the growth and endgame bounds in audit_descent. Covering τ
/// values come from an iterative minimisation and carry its slack.
inline constexpr double kEntropicGrowthTolerance = 1e-9;
inline constexpr double kCoveringGrowthTolerance = 1e-6;

/// Re-checks a finished run from its trace: strict φ decrease, the fixed pair
/// never above its family average, the growth bounds on τ_T± and τ_W±, every
/// endgame bound, the status and the certified inequality. Growth and endgame
/// bounds use growth_tolerance; pure identities use 1e-9.
CheckReport audit_descent(DescentResult const &result, DescentConfig const &config,
                          double growth_tolerance);

DescentResult run_descent(Dist x0, Dist y0, TauFunctional const &tau_a, TauFunctional const &tau_b,
                          DescentConfig const &config = {});

}  // namespace pfr
