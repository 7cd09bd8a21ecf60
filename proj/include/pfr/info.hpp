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

// Exact Shannon information measures over dense distributions on F_2^n.
// Everything is reported in bits; logarithms are natural internally.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pfr/f2n.hpp"

namespace pfr {

/// Entries below this are treated as exact zeros by support queries.
inline constexpr double kSupportCutoff = 1e-15;
/// Probability vectors must sum to one within this.
inline constexpr double kNormTolerance = 1e-12;
/// Conditioning events lighter than this are dropped from families.
inline constexpr double kMinConditionWeight = 1e-9;
/// Slack used to clamp quantities that are non-negative in exact arithmetic.
inline constexpr double kClampSlack = 1e-9;

/// A probability vector over all 2^n elements of F_2^n.
class Dist
{
public:
  Dist() = default;
  /// Validates non-negativity and unit mass (within kNormTolerance).
  Dist(int dim, std::vector<double> p);

  /// Rescales an arbitrary non-negative vector to unit mass.
  static Dist normalized(int dim, std::vector<double> weights);
  static Dist point_mass(int dim, Element x);
  static Dist uniform(int dim);
  static Dist uniform_on(F2Set const &a);
  static Dist uniform_on(Subspace const &v, Element shift = 0);

  int                     dim() const { return dim_; }
  std::size_t             size() const { return p_.size(); }
  double                  operator[](Element x) const { return p_[x]; }
  std::span<const double> probs() const { return p_; }

  /// Law of X + s.
  Dist translated(Element s) const;
  /// Law of L(X) for a linear bijection given by the images of the unit vectors.
  Dist mapped(std::span<const Element> images) const;

  std::vector<Element> support() const;
  double               max_prob() const;

  bool operator==(Dist const &) const = default;

private:
  int                 dim_ = 0;
  std::vector<double> p_;
};

/// lambda * p + (1 - lambda) * q.
Dist mixture(Dist const &p, Dist const &q, double lambda);

/// Joint law of (X, Z) with X on F_2^{n1} and Z on F_2^{n2}; row-major in X.
class Joint2
{
public:
  Joint2() = default;
  Joint2(int dim_x, int dim_z, std::vector<double> p);

  static Joint2 product(Dist const &x, Dist const &z);

  int                     dim_x() const { return dim_x_; }
  int                     dim_z() const { return dim_z_; }
  double                  at(Element x, Element z) const { return p_[(std::size_t{x} << dim_z_) | z]; }
  std::span<const double> probs() const { return p_; }

  Dist marginal_x() const;
  Dist marginal_z() const;

private:
  int                 dim_x_ = 0;
  int                 dim_z_ = 0;
  std::vector<double> p_;
};

struct Condition
{
  std::uint64_t label  = 0;
  double        weight = 0.0;
  Dist          dist;
};

/// A weighted family {X | Z = z}. Conditions lighter than the threshold are
/// dropped and the remaining weights renormalised.
class CondFamily
{
public:
  CondFamily() = default;
  explicit CondFamily(std::vector<Condition> conditions,
                      double                 min_weight = kMinConditionWeight);

  static CondFamily single(Dist d, std::uint64_t label = 0);
  /// The family {X | Z = z} of a joint law, labelled by z.
  static CondFamily of_joint(Joint2 const &j);

  int                          dim() const { return dim_; }
  std::size_t                  size() const { return conditions_.size(); }
  bool                         empty() const { return conditions_.empty(); }
  Condition const             &operator[](std::size_t i) const { return conditions_[i]; }
  std::span<const Condition>   conditions() const { return conditions_; }
  auto                         begin() const { return conditions_.begin(); }
  auto                         end() const { return conditions_.end(); }

  /// Mixture of the members, i.e. the unconditional law.
  Dist marginal() const;

private:
  int                    dim_ = 0;
  std::vector<Condition> conditions_;
};

double entropy(Dist const &x);
/// Entropy of an unnormalised-safe probability span, in bits.
double entropy_bits(std::span<const double> p);
/// Joint entropy H(X, Z).
double entropy(Joint2 const &j);
/// E_z H(X | Z = z).
double entropy(CondFamily const &f);

/// D_KL(P || Q) in bits; +infinity when Supp(P) is not inside Supp(Q).
double kl_divergence(Dist const &p, Dist const &q);
/// E_z D_KL(X|_{Z=z} || Q).
double kl_divergence(CondFamily const &f, Dist const &q);

double mutual_information(Joint2 const &j);
/// H(X | Z) for the joint (X, Z).
double conditional_entropy(Joint2 const &j);

enum class ConvolutionMethod
{
  kAuto,
  kWalshHadamard,
  kDirect,
};

/// Law of X' + Y' for independent copies.
Dist xor_convolve(Dist const &x, Dist const &y, ConvolutionMethod method = ConvolutionMethod::kAuto);

/// Unnormalised in-place Walsh-Hadamard transform; size must be a power of two.
void fwht(std::span<double> v);

// Dist file: "dim=<n>" then "<binary element> <probability>" lines.
Dist read_dist(std::istream &in);
Dist read_dist_file(std::string const &path);
void write_dist(std::ostream &out, Dist const &d);

}  // namespace pfr
