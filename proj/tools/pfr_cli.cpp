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

// Command-line front end: property suites, descent runs and covers.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "pfr/covering.hpp"
#include "pfr/descent.hpp"
#include "pfr/report.hpp"
#include "pfr/suites.hpp"

namespace {

using namespace pfr;

constexpr int kExitPass  = 0;
constexpr int kExitFail  = 1;
constexpr int kExitUsage = 2;

constexpr double kTheoremSlack = 1e-3;

struct OutputFlags
{
  std::string format = "text";
  bool        timing = false;
};

struct DescentFlags
{
  DescentConfig config;
  std::string   trace_out;
};

void add_output_flags(CLI::App *cmd, OutputFlags &out)
{
  cmd->add_option("--format", out.format, "Report format")
      ->check(CLI::IsMember({"text", "json-lines"}))
      ->capture_default_str();
  cmd->add_flag("--timing", out.timing, "Include wall-clock time in the report");
}

void add_descent_flags(CLI::App *cmd, DescentFlags &f)
{
  cmd->add_option("--eta", f.config.eta, "Potential weight, 0 < eta < 1/8")->capture_default_str();
  cmd->add_option("--d-stop", f.config.d_stop, "Stop once d[X;Y] is at most this")
      ->capture_default_str();
  cmd->add_option("--max-iters", f.config.max_iters, "Iteration cap")->capture_default_str();
  cmd->add_option("--theta", f.config.theta, "Relative support cutoff for subspace extraction")
      ->capture_default_str();
  cmd->add_option("--trace-out", f.trace_out, "Write the per-iteration trace here");
}

std::string read_bytes(std::string const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ParseError("cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> binary_list(std::span<const Element> xs, int n)
{
  std::vector<std::string> out;
  out.reserve(xs.size());
  for (Element x : xs)
  {
    out.push_back(to_binary(x, n));
  }
  return out;
}

void echo_descent_config(RunReport &r, DescentFlags const &f)
{
  r.add_config("eta", format_double(f.config.eta));
  r.add_config("d_stop", format_double(f.config.d_stop));
  r.add_config("max_iters", std::to_string(f.config.max_iters));
  r.add_config("theta", format_double(f.config.theta));
}

void append_checks(RunReport &r, CheckReport const &c)
{
  r.checks.insert(r.checks.end(), c.checks().begin(), c.checks().end());
}

void add_descent_metrics(RunReport &r, DescentResult const &res)
{
  r.add_metric("status", std::string(status_name(res.status)));
  r.add_metric("iterations", static_cast<std::int64_t>(res.trace.size()));
  r.add_metric("d_initial", res.initial.d);
  r.add_metric("tau_initial", res.initial.tau_sum);
  r.add_metric("d_final", res.final_state.d);
  r.add_metric("phi_final", res.final_state.phi);
  if (res.coset)
  {
    int const n = res.coset->subspace.dim();
    r.add_metric("v_rank", static_cast<std::int64_t>(res.coset->subspace.rank()));
    r.add_metric("v_basis", binary_list(res.coset->subspace.basis(), n));
    r.add_metric("v_rep", to_binary(res.coset->rep, n));
    r.add_metric("certified_lhs", res.certified_lhs);
    r.add_metric("certified_rhs", res.certified_rhs);
  }
}

void write_trace_file(DescentFlags const &f, DescentResult const &res, ReportFormat format,
                      RunReport &r)
{
  if (f.trace_out.empty())
  {
    return;
  }
  std::ofstream out(f.trace_out);
  if (!out)
  {
    throw std::runtime_error("cannot write trace to " + f.trace_out);
  }
  write_trace(out, res.trace, format);
  r.add_metric("trace_file", f.trace_out);
}

Outcome outcome_for(RunReport const &r, DescentStatus status)
{
  if (r.checks_passed())
  {
    return Outcome::kPass;
  }
  if (status == DescentStatus::kNoProgress || status == DescentStatus::kMaxIterations)
  {
    return Outcome::kStall;
  }
  return Outcome::kFail;
}

int finish(RunReport &r, OutputFlags const &out, std::chrono::steady_clock::time_point start)
{
  if (out.timing)
  {
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  write_report(std::cout, r, *parse_report_format(out.format));
  return r.outcome == Outcome::kPass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

struct VerifyArgs
{
  std::string   suite;
  SuiteOptions  options;
  OutputFlags   out;
};

int cmd_verify(VerifyArgs const &a)
{
  auto const start = std::chrono::steady_clock::now();
  auto const suite = parse_suite(a.suite);
  if (!suite)
  {
    throw CLI::ValidationError("suite", "unknown suite '" + a.suite + "'");
  }
  RunReport r;
  r.command = "verify";
  std::string const inputs = "suite=" + a.suite + ";n=" + std::to_string(a.options.n) +
                             ";trials=" + std::to_string(a.options.trials) +
                             ";seed=" + std::to_string(a.options.seed);
  r.inputs_digest = sha256_digest(inputs);
  r.add_config("suite", a.suite);
  r.add_config("n", std::to_string(a.options.n));
  r.add_config("trials", std::to_string(a.options.trials));
  r.add_config("seed", std::to_string(a.options.seed));

  append_checks(r, run_suite(*suite, a.options));
  r.add_metric("trials", static_cast<std::int64_t>(a.options.trials));
  r.outcome = r.checks_passed() ? Outcome::kPass : Outcome::kFail;
  return finish(r, a.out, start);
}

struct DescendArgs
{
  std::string  x_file;
  std::string  y_file;
  std::string  tau = "entropic";
  DescentFlags descent;
  OutputFlags  out;
};

int cmd_descend(DescendArgs const &a)
{
  auto const start = std::chrono::steady_clock::now();
  std::string const x_bytes = read_bytes(a.x_file);
  std::string const y_bytes = read_bytes(a.y_file);
  std::istringstream xs(x_bytes);
  std::istringstream ys(y_bytes);
  Dist const x = read_dist(xs);
  Dist const y = read_dist(ys);
  if (x.dim() != y.dim())
  {
    throw ParseError("input distributions have dimensions " + std::to_string(x.dim()) + " and " +
                     std::to_string(y.dim()));
  }
  a.descent.config.validate();

  bool const  entropic = a.tau == "entropic";
  std::string set_bytes;
  std::optional<TauFunctional> tau_a;
  std::optional<TauFunctional> tau_b;
  if (entropic)
  {
    tau_a = make_entropic_tau(y);
    tau_b = make_entropic_tau(x);
  }
  else if (a.tau.starts_with("covering:"))
  {
    set_bytes = read_bytes(a.tau.substr(9));
    std::istringstream ss(set_bytes);
    F2Set const        set = read_set(ss);
    if (set.dim() != x.dim())
    {
      throw ParseError("covering set has dimension " + std::to_string(set.dim()) +
                       ", distributions have " + std::to_string(x.dim()));
    }
    tau_a = make_covering_tau(set);
    tau_b = tau_a;
  }
  else
  {
    throw CLI::ValidationError("--tau", "expected 'entropic' or 'covering:<set file>'");
  }

  RunReport r;
  r.command       = "descend";
  r.inputs_digest = sha256_digest(x_bytes + '\0' + y_bytes + '\0' + set_bytes);
  r.add_config("tau", entropic ? "entropic" : "covering");
  echo_descent_config(r, a.descent);

  DescentResult const res = run_descent(x, y, *tau_a, *tau_b, a.descent.config);
  r.add_metric("n", static_cast<std::int64_t>(x.dim()));
  add_descent_metrics(r, res);
  append_checks(r, audit_descent(res, a.descent.config,
                                 entropic ? kEntropicGrowthTolerance : kCoveringGrowthTolerance));

  if (entropic)
  {
    CheckStat ten{"d[U_V;X0] + d[U_V;Y0] <= 10 d[X0;Y0]", kTheoremSlack};
    if (res.coset)
    {
      Dist const   uv  = Dist::uniform_on(res.coset->subspace);
      double const lhs = ruzsa_distance(uv, x) + ruzsa_distance(uv, y);
      double const rhs = 10.0 * res.initial.d;
      r.add_metric("distance_sum", lhs);
      r.add_metric("ten_d_bound", rhs);
      ten.record(lhs - rhs);
    }
    else
    {
      ten.record(std::numeric_limits<double>::infinity());
    }
    r.checks.push_back(ten);
  }

  write_trace_file(a.descent, res, *parse_report_format(a.out.format), r);
  r.outcome = outcome_for(r, res.status);
  return finish(r, a.out, start);
}

struct CoverArgs
{
  std::string  set_file;
  DescentFlags descent;
  OutputFlags  out;
};

int cmd_cover(CoverArgs const &a)
{
  auto const         start     = std::chrono::steady_clock::now();
  std::string const  set_bytes = read_bytes(a.set_file);
  std::istringstream ss(set_bytes);
  F2Set const        set = read_set(ss);
  int const          n   = set.dim();

  RunReport r;
  r.command       = "cover";
  r.inputs_digest = sha256_digest(set_bytes);
  echo_descent_config(r, a.descent);
  r.add_metric("n", static_cast<std::int64_t>(n));
  r.add_metric("set_size", static_cast<std::int64_t>(set.size()));

  PfrCoverResult res;
  try
  {
    res = pfr_cover(set, a.descent.config);
  }
  catch (DescentFailed const &e)
  {
    r.error   = e.what();
    r.outcome = Outcome::kStall;
    return finish(r, a.out, start);
  }

  r.add_metric("K", res.k);
  r.add_metric("log2_K", res.log_k);
  r.add_metric("d_UA_UA", res.d_aa);
  add_descent_metrics(r, res.descent);
  r.add_metric("r", res.r);
  r.add_metric("r_bound", res.r_bound);
  r.add_metric("slice_translate", to_binary(res.slice.translate, n));
  r.add_metric("slice_size", static_cast<std::int64_t>(res.slice.size));
  r.add_metric("R", res.r_factor);
  r.add_metric("vprime_rank", static_cast<std::int64_t>(res.cover.vprime.rank()));
  r.add_metric("vprime_basis", binary_list(res.cover.vprime.basis(), n));
  r.add_metric("translates", binary_list(res.cover.translates, n));
  r.add_metric("count", static_cast<std::int64_t>(res.cover.count()));
  r.add_metric("bound", res.cover.bound);

  append_checks(r, audit_descent(res.descent, a.descent.config, kCoveringGrowthTolerance));
  auto const flag = [&](std::string name, bool ok) {
    CheckStat c{std::move(name), 0.0};
    c.record(ok ? 0.0 : std::numeric_limits<double>::infinity());
    r.checks.push_back(c);
  };
  flag("d[U_A;U_A] <= log K", res.d_aa_ok);
  flag("tau-(U_V) + tau+(U_V) <= log K / eta", res.r_ok);
  flag("coset slice >= 2^-r max(|A|,|V|)", res.slice_ok);
  flag("cover contains A", res.cover.covers_a);
  flag("|V'| <= |A|", res.cover.size_ok);
  flag("count <= 2 K^9", res.cover.count_ok);

  write_trace_file(a.descent, res.descent, *parse_report_format(a.out.format), r);
  r.outcome = outcome_for(r, res.descent.status);
  return finish(r, a.out, start);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Freiman-Ruzsa machinery over F_2^n"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto      *v = app.add_subcommand("verify", "Run a seeded property suite");
  v->add_option("suite", verify.suite, "measures, fibring, bsg, tau or bridge")->required();
  v->add_option("--n", verify.options.n, "Dimension")
      ->check(CLI::Range(1, kSuiteMaxDim))
      ->capture_default_str();
  v->add_option("--trials", verify.options.trials, "Number of trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  v->add_option("--seed", verify.options.seed, "Seed")->capture_default_str();
  v->add_option("--jobs", verify.options.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_output_flags(v, verify.out);

  DescendArgs descend;
  auto       *d = app.add_subcommand("descend", "Run the potential descent from (X0, Y0)");
  d->add_option("x_file", descend.x_file, "Distribution file for X0")->required();
  d->add_option("y_file", descend.y_file, "Distribution file for Y0")->required();
  d->add_option("--tau", descend.tau, "entropic or covering:<set file>")->capture_default_str();
  add_descent_flags(d, descend.descent);
  add_output_flags(d, descend.out);

  CoverArgs cover;
  auto     *c = app.add_subcommand("cover", "Cover a set by translates of a subspace");
  c->add_option("set_file", cover.set_file, "Set file")->required();
  add_descent_flags(c, cover.descent);
  add_output_flags(c, cover.out);

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try
  {
    if (v->parsed())
    {
      return cmd_verify(verify);
    }
    if (d->parsed())
    {
      return cmd_descend(descend);
    }
    return cmd_cover(cover);
  }
  catch (CLI::Error const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (std::invalid_argument const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (std::runtime_error const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
