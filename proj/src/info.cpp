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

#include "pfr/info.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace pfr {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void check_probability_vector(std::span<const double> p, char const *what)
{
  double sum = 0.0;
  for (double v : p)
  {
    if (!std::isfinite(v) || v < -kSupportCutoff)
    {
      throw std::invalid_argument(std::string(what) + ": negative or non-finite probability");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormTolerance)
  {
    throw std::invalid_argument(std::string(what) + ": probabilities sum to " +
                                std::to_string(sum));
  }
}

void clear_numerical_zeros(std::vector<double> &p)
{
  for (auto &v : p)
  {
    if (v < kSupportCutoff)
    {
      v = 0.0;
    }
  }
}

void renormalize(std::vector<double> &p)
{
  double const sum = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(sum > 0.0))
  {
    throw std::invalid_argument("cannot normalise a zero vector");
  }
  for (auto &v : p)
  {
    v /= sum;
  }
}

double clamp_nonnegative(double v)
{
  return (v < 0.0 && v > -kClampSlack) ? 0.0 : v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dist

Dist::Dist(int dim, std::vector<double> p)
  : dim_(dim)
  , p_(std::move(p))
{
  check_dim(dim);
  if (p_.size() != space_size(dim))
  {
    throw DimensionError("distribution of dimension " + std::to_string(dim) + " needs " +
                         std::to_string(space_size(dim)) + " entries");
  }
  check_probability_vector(p_, "Dist");
  for (auto &v : p_)
  {
    v = std::max(v, 0.0);
  }
}

Dist Dist::normalized(int dim, std::vector<double> weights)
{
  check_dim(dim);
  for (double v : weights)
  {
    if (!std::isfinite(v) || v < 0.0)
    {
      throw std::invalid_argument("Dist::normalized: negative or non-finite weight");
    }
  }
  renormalize(weights);
  return Dist(dim, std::move(weights));
}

Dist Dist::point_mass(int dim, Element x)
{
  check_dim(dim);
  if (!fits(x, dim))
  {
    throw DimensionError("point mass outside the space");
  }
  std::vector<double> p(space_size(dim), 0.0);
  p[x] = 1.0;
  return Dist(dim, std::move(p));
}

Dist Dist::uniform(int dim)
{
  check_dim(dim);
  return Dist(dim, std::vector<double>(space_size(dim), 1.0 / static_cast<double>(space_size(dim))));
}

Dist Dist::uniform_on(F2Set const &a)
{
  if (a.empty())
  {
    throw std::invalid_argument("uniform distribution on an empty set");
  }
  std::vector<double> p(space_size(a.dim()), 0.0);
  double const        mass = 1.0 / static_cast<double>(a.size());
  for (Element x : a)
  {
    p[x] = mass;
  }
  return Dist(a.dim(), std::move(p));
}

Dist Dist::uniform_on(Subspace const &v, Element shift)
{
  return uniform_on(F2Set::of_subspace(v, shift));
}

Dist Dist::translated(Element s) const
{
  if (!fits(s, dim_))
  {
    throw DimensionError("translation outside the space");
  }
  Dist out;
  out.dim_ = dim_;
  out.p_.resize(p_.size());
  for (std::size_t x = 0; x < p_.size(); ++x)
  {
    out.p_[x ^ s] = p_[x];
  }
  return out;
}

Dist Dist::mapped(std::span<const Element> images) const
{
  if (static_cast<int>(images.size()) != dim_)
  {
    throw DimensionError("linear map needs one image per coordinate");
  }
  if (Subspace::span(images, dim_).rank() != dim_)
  {
    throw std::invalid_argument("linear map is not invertible");
  }
  Dist out;
  out.dim_ = dim_;
  out.p_.assign(p_.size(), 0.0);
  for (std::size_t x = 0; x < p_.size(); ++x)
  {
    Element y = 0;
    for (int i = 0; i < dim_; ++i)
    {
      if ((x >> i) & 1u)
      {
        y ^= images[static_cast<std::size_t>(i)];
      }
    }
    out.p_[y] = p_[x];
  }
  return out;
}

std::vector<Element> Dist::support() const
{
  std::vector<Element> s;
  for (std::size_t x = 0; x < p_.size(); ++x)
  {
    if (p_[x] >= kSupportCutoff)
    {
      s.push_back(static_cast<Element>(x));
    }
  }
  return s;
}

double Dist::max_prob() const
{
  return p_.empty() ? 0.0 : *std::max_element(p_.begin(), p_.end());
}

Dist mixture(Dist const &p, Dist const &q, double lambda)
{
  if (p.dim() != q.dim())
  {
    throw DimensionError("mixture of distributions with different dimensions");
  }
  std::vector<double> m(p.size());
  for (std::size_t x = 0; x < m.size(); ++x)
  {
    m[x] = lambda * p.probs()[x] + (1.0 - lambda) * q.probs()[x];
  }
  return Dist::normalized(p.dim(), std::move(m));
}

// ---------------------------------------------------------------------------
// Joint2 and CondFamily

Joint2::Joint2(int dim_x, int dim_z, std::vector<double> p)
  : dim_x_(dim_x)
  , dim_z_(dim_z)
  , p_(std::move(p))
{
  check_dim(dim_x);
  check_dim(dim_z);
  if (dim_x + dim_z > kMaxDim || p_.size() != space_size(dim_x + dim_z))
  {
    throw DimensionError("joint table has the wrong size");
  }
  check_probability_vector(p_, "Joint2");
  for (auto &v : p_)
  {
    v = std::max(v, 0.0);
  }
}

Joint2 Joint2::product(Dist const &x, Dist const &z)
{
  std::vector<double> p(x.size() * z.size());
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    for (std::size_t k = 0; k < z.size(); ++k)
    {
      p[(i << z.dim()) | k] = x.probs()[i] * z.probs()[k];
    }
  }
  renormalize(p);
  return Joint2(x.dim(), z.dim(), std::move(p));
}

Dist Joint2::marginal_x() const
{
  std::vector<double> m(space_size(dim_x_), 0.0);
  std::size_t const   nz = space_size(dim_z_);
  for (std::size_t i = 0; i < m.size(); ++i)
  {
    for (std::size_t k = 0; k < nz; ++k)
    {
      m[i] += p_[(i << dim_z_) | k];
    }
  }
  return Dist::normalized(dim_x_, std::move(m));
}

Dist Joint2::marginal_z() const
{
  std::vector<double> m(space_size(dim_z_), 0.0);
  std::size_t const   nx = space_size(dim_x_);
  for (std::size_t i = 0; i < nx; ++i)
  {
    for (std::size_t k = 0; k < m.size(); ++k)
    {
      m[k] += p_[(i << dim_z_) | k];
    }
  }
  return Dist::normalized(dim_z_, std::move(m));
}

CondFamily::CondFamily(std::vector<Condition> conditions, double min_weight)
{
  double total = 0.0;
  for (auto &c : conditions)
  {
    if (!std::isfinite(c.weight) || c.weight < 0.0)
    {
      throw std::invalid_argument("CondFamily: negative or non-finite weight");
    }
    if (dim_ == 0)
    {
      dim_ = c.dist.dim();
    }
    else if (c.dist.dim() != dim_)
    {
      throw DimensionError("CondFamily members have different dimensions");
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

CondFamily CondFamily::single(Dist d, std::uint64_t label)
{
  std::vector<Condition> c;
  c.push_back({label, 1.0, std::move(d)});
  return CondFamily(std::move(c));
}

CondFamily CondFamily::of_joint(Joint2 const &j)
{
  std::size_t const      nx = space_size(j.dim_x());
  std::size_t const      nz = space_size(j.dim_z());
  std::vector<Condition> conds;
  for (std::size_t k = 0; k < nz; ++k)
  {
    std::vector<double> col(nx);
    double              w = 0.0;
    for (std::size_t i = 0; i < nx; ++i)
    {
      col[i] = j.at(static_cast<Element>(i), static_cast<Element>(k));
      w += col[i];
    }
    if (w < kSupportCutoff)
    {
      continue;
    }
    conds.push_back({k, w, Dist::normalized(j.dim_x(), std::move(col))});
  }
  return CondFamily(std::move(conds));
}

Dist CondFamily::marginal() const
{
  std::vector<double> m(space_size(dim_), 0.0);
  for (auto const &c : conditions_)
  {
    for (std::size_t x = 0; x < m.size(); ++x)
    {
      m[x] += c.weight * c.dist.probs()[x];
    }
  }
  return Dist::normalized(dim_, std::move(m));
}

// ---------------------------------------------------------------------------
// Measures

double entropy_bits(std::span<const double> p)
{
  double nats = 0.0;
  for (double v : p)
  {
    if (v >= kSupportCutoff)
    {
      nats -= v * std::log(v);
    }
  }
  return std::max(nats / kLn2, 0.0);
}

double entropy(Dist const &x)
{
  return entropy_bits(x.probs());
}

double entropy(Joint2 const &j)
{
  return entropy_bits(j.probs());
}

double entropy(CondFamily const &f)
{
  double h = 0.0;
  for (auto const &c : f)
  {
    h += c.weight * entropy(c.dist);
  }
  return h;
}

double kl_divergence(Dist const &p, Dist const &q)
{
  if (p.dim() != q.dim())
  {
    throw DimensionError("KL divergence of distributions with different dimensions");
  }
  double nats = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x)
  {
    double const px = p.probs()[x];
    if (px < kSupportCutoff)
    {
      continue;
    }
    double const qx = q.probs()[x];
    if (qx < kSupportCutoff)
    {
      return std::numeric_limits<double>::infinity();
    }
    nats += px * std::log(px / qx);
  }
  return std::max(nats / kLn2, 0.0);
}

double kl_divergence(CondFamily const &f, Dist const &q)
{
  double d = 0.0;
  for (auto const &c : f)
  {
    d += c.weight * kl_divergence(c.dist, q);
  }
  return d;
}

double mutual_information(Joint2 const &j)
{
  double const i = entropy(j.marginal_x()) + entropy(j.marginal_z()) - entropy(j);
  return std::max(clamp_nonnegative(i), 0.0);
}

double conditional_entropy(Joint2 const &j)
{
  return std::max(clamp_nonnegative(entropy(j) - entropy(j.marginal_z())), 0.0);
}

// ---------------------------------------------------------------------------
// XOR convolution

void fwht(std::span<double> v)
{
  std::size_t const n = v.size();
  if (n == 0 || (n & (n - 1)) != 0)
  {
    throw std::invalid_argument("fwht: length must be a power of two");
  }
  for (std::size_t h = 1; h < n; h <<= 1)
  {
    for (std::size_t i = 0; i < n; i += h << 1)
    {
      for (std::size_t j = i; j < i + h; ++j)
      {
        double const a = v[j];
        double const b = v[j + h];
        v[j]           = a + b;
        v[j + h]       = a - b;
      }
    }
  }
}

namespace {

std::vector<double> convolve_direct(Dist const &x, Dist const &y)
{
  std::vector<double> out(x.size(), 0.0);
  auto const          sx = x.support();
  auto const          sy = y.support();
  for (Element a : sx)
  {
    double const pa = x[a];
    for (Element b : sy)
    {
      out[a ^ b] += pa * y[b];
    }
  }
  return out;
}

std::vector<double> convolve_fwht(Dist const &x, Dist const &y)
{
  std::vector<double> fx(x.probs().begin(), x.probs().end());
  std::vector<double> fy(y.probs().begin(), y.probs().end());
  fwht(fx);
  fwht(fy);
  for (std::size_t i = 0; i < fx.size(); ++i)
  {
    fx[i] *= fy[i];
  }
  fwht(fx);
  double const scale = 1.0 / static_cast<double>(fx.size());
  for (auto &v : fx)
  {
    v *= scale;
  }
  return fx;
}

std::size_t support_size(Dist const &d)
{
  return static_cast<std::size_t>(
    std::count_if(d.probs().begin(), d.probs().end(), [](double v) { return v >= kSupportCutoff; }));
}

}  // namespace

Dist xor_convolve(Dist const &x, Dist const &y, ConvolutionMethod method)
{
  if (x.dim() != y.dim())
  {
    throw DimensionError("convolution of distributions with different dimensions");
  }
  if (method == ConvolutionMethod::kAuto)
  {
    double const direct_cost = static_cast<double>(support_size(x)) * static_cast<double>(support_size(y));
    double const fwht_cost   = 3.0 * x.dim() * static_cast<double>(x.size());
    method = direct_cost <= fwht_cost ? ConvolutionMethod::kDirect : ConvolutionMethod::kWalshHadamard;
  }
  std::vector<double> out =
    method == ConvolutionMethod::kDirect ? convolve_direct(x, y) : convolve_fwht(x, y);
  clear_numerical_zeros(out);
  renormalize(out);
  return Dist(x.dim(), std::move(out));
}

// ---------------------------------------------------------------------------
// Dist files

Dist read_dist(std::istream &in)
{
  std::string line;
  if (!std::getline(in, line))
  {
    throw ParseError("empty distribution file");
  }
  int const           n = parse_dim_line(line);
  std::vector<double> p(space_size(n), 0.0);
  std::vector<bool>   seen(space_size(n), false);
  std::size_t         line_no = 1;
  while (std::getline(in, line))
  {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
    {
      line.pop_back();
    }
    std::string const where = "line " + std::to_string(line_no) + ": ";
    auto const        space = line.find(' ');
    if (space == std::string::npos)
    {
      throw ParseError(where + "expected '<element> <probability>'");
    }
    Element x = 0;
    try
    {
      x = parse_binary(std::string_view(line).substr(0, space), n);
    }
    catch (ParseError const &e)
    {
      throw ParseError(where + e.what());
    }
    std::string const num = line.substr(space + 1);
    double            v   = 0.0;
    auto [ptr, ec]        = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc{} || ptr != num.data() + num.size() || !std::isfinite(v) || v < 0.0)
    {
      throw ParseError(where + "malformed probability '" + num + "'");
    }
    if (seen[x])
    {
      throw ParseError(where + "duplicate element");
    }
    seen[x] = true;
    p[x]    = v;
  }
  double const sum = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9)
  {
    throw ParseError("probabilities sum to " + std::to_string(sum));
  }
  return Dist::normalized(n, std::move(p));
}

Dist read_dist_file(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open '" + path + "'");
  }
  return read_dist(in);
}

void write_dist(std::ostream &out, Dist const &d)
{
  out << "dim=" << d.dim() << '\n';
  char buf[32];
  for (std::size_t x = 0; x < d.size(); ++x)
  {
    if (d.probs()[x] > 0.0)
    {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d.probs()[x]);
      out << to_binary(static_cast<Element>(x), d.dim()) << ' ' << std::string_view(buf, ptr) << '\n';
    }
  }
}

}  // namespace pfr
