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

#include "pfr/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include <openssl/evp.h>

#include "json.hpp"

namespace pfr {

namespace {

using nlohmann::ordered_json;

ordered_json number(double v)
{
  if (std::isfinite(v))
  {
    return v;
  }
  return format_double(v);
}

ordered_json metric_json(Metric::Value const &v)
{
  return std::visit(
      [](auto const &x) -> ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>)
        {
          return number(x);
        }
        else
        {
          return x;
        }
      },
      v);
}

std::string metric_text(Metric::Value const &v)
{
  return std::visit(
      [](auto const &x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>)
        {
          return format_double(x);
        }
        else if constexpr (std::is_same_v<T, std::int64_t>)
        {
          return std::to_string(x);
        }
        else if constexpr (std::is_same_v<T, bool>)
        {
          return x ? "true" : "false";
        }
        else if constexpr (std::is_same_v<T, std::string>)
        {
          return x;
        }
        else
        {
          std::string s = "[";
          for (std::size_t i = 0; i < x.size(); ++i)
          {
            s += (i ? " " : "") + x[i];
          }
          return s + "]";
        }
      },
      v);
}

ordered_json trace_json(IterationRecord const &r)
{
  ordered_json j;
  j["iteration"] = r.iteration;
  j["d"]         = number(r.d);
  j["phi"]       = number(r.phi);
  j["tau_sum"]   = number(r.tau_sum);
  j["I1"]        = number(r.i1);
  j["I2"]        = number(r.i2);
  ordered_json cands = ordered_json::object();
  for (int k = 0; k < kCandidateCount; ++k)
  {
    double const v = r.candidate_phi[static_cast<std::size_t>(k)];
    cands[std::string(tag_name(static_cast<CandidateTag>(k)))] =
        std::isnan(v) ? ordered_json(nullptr) : number(v);
  }
  j["candidate_phi"] = cands;
  j["chosen"]  = r.chosen ? ordered_json(std::string(tag_name(*r.chosen))) : ordered_json(nullptr);
  j["label_x"] = r.label_x;
  j["label_y"] = r.label_y;
  j["next_phi"] = number(r.next_phi);
  j["tau_T_plus"]  = number(r.tau_t_plus);
  j["tau_T_minus"] = number(r.tau_t_minus);
  j["tau_W_plus"]  = number(r.tau_w_plus);
  j["tau_W_minus"] = number(r.tau_w_minus);
  j["bound_T"] = number(r.bound_t);
  j["bound_W"] = number(r.bound_w);
  j["endgame"] = r.endgame;
  if (r.endgame)
  {
    auto const  &e = r.endgame_info;
    ordered_json eg;
    eg["lhs_sum"]   = number(e.lhs_sum);
    eg["rhs_bound"] = number(e.rhs_bound);
    eg["tau"]       = {number(e.tau[0]), number(e.tau[1]), number(e.tau[2])};
    eg["tau_bound_sum"] = {number(e.tau_bound_sum[0]), number(e.tau_bound_sum[1]),
                           number(e.tau_bound_sum[2])};
    eg["tau_bound_fibre"] = {number(e.tau_bound_fibre[0]), number(e.tau_bound_fibre[1]),
                             number(e.tau_bound_fibre[2])};
    eg["tau_eg"]       = number(e.tau_eg);
    eg["tau_eg_bound"] = number(e.tau_eg_bound);
    eg["phi_sum"]      = number(e.phi_sum);
    eg["shift_structure_ok"] = e.shift_structure_ok;
    j["endgame_info"] = eg;
  }
  return j;
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name)
{
  if (name == "text")
  {
    return ReportFormat::kText;
  }
  if (name == "json-lines")
  {
    return ReportFormat::kJsonLines;
  }
  return std::nullopt;
}

std::string_view outcome_name(Outcome o)
{
  switch (o)
  {
  case Outcome::kPass:
    return "pass";
  case Outcome::kFail:
    return "fail";
  case Outcome::kStall:
    return "stall";
  }
  return "unknown";
}

bool RunReport::checks_passed() const
{
  for (auto const &c : checks)
  {
    if (!c.passed())
    {
      return false;
    }
  }
  return true;
}

std::string format_double(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  if (std::isinf(v))
  {
    return v > 0 ? "inf" : "-inf";
  }
  std::array<char, 32> buf{};
  auto const res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string sha256_digest(std::string_view bytes)
{
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int                               len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
  {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string           out   = "sha256:";
  for (unsigned int i = 0; i < len; ++i)
  {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

void write_report(std::ostream &out, RunReport const &report, ReportFormat format)
{
  if (format == ReportFormat::kText)
  {
    out << "pfr-report v" << kReportVersion << '\n';
    out << "command: " << report.command << '\n';
    out << "inputs: " << report.inputs_digest << '\n';
    for (auto const &[k, v] : report.config)
    {
      out << "config." << k << ": " << v << '\n';
    }
    out << "outcome: " << outcome_name(report.outcome) << '\n';
    if (report.error)
    {
      out << "error: " << *report.error << '\n';
    }
    for (auto const &m : report.metrics)
    {
      out << "metric." << m.name << ": " << metric_text(m.value) << '\n';
    }
    for (auto const &c : report.checks)
    {
      out << "check " << c.name << ": " << (c.passed() ? "pass" : "FAIL")
          << " max_violation=" << format_double(c.max_violation)
          << " tolerance=" << format_double(c.tolerance) << " count=" << c.count
          << " failures=" << c.failures << '\n';
    }
    if (report.wall_seconds)
    {
      out << "wall_seconds: " << format_double(*report.wall_seconds) << '\n';
    }
    return;
  }

  out << ordered_json{{"schema", "pfr-report"}, {"version", kReportVersion}}.dump() << '\n';
  ordered_json run;
  run["record"]  = "run";
  run["command"] = report.command;
  run["inputs"]  = report.inputs_digest;
  ordered_json cfg = ordered_json::object();
  for (auto const &[k, v] : report.config)
  {
    cfg[k] = v;
  }
  run["config"]  = cfg;
  run["outcome"] = std::string(outcome_name(report.outcome));
  if (report.error)
  {
    run["error"] = *report.error;
  }
  if (report.wall_seconds)
  {
    run["wall_seconds"] = *report.wall_seconds;
  }
  out << run.dump() << '\n';
  for (auto const &m : report.metrics)
  {
    out << ordered_json{{"record", "metric"}, {"name", m.name}, {"value", metric_json(m.value)}}.dump()
        << '\n';
  }
  for (auto const &c : report.checks)
  {
    ordered_json j;
    j["record"]        = "check";
    j["name"]          = c.name;
    j["passed"]        = c.passed();
    j["max_violation"] = number(c.max_violation);
    j["tolerance"]     = c.tolerance;
    j["count"]         = c.count;
    j["failures"]      = c.failures;
    out << j.dump() << '\n';
  }
}

void write_trace(std::ostream &out, DescentTrace const &trace, ReportFormat format)
{
  if (format == ReportFormat::kJsonLines)
  {
    out << ordered_json{{"schema", "pfr-trace"}, {"version", kTraceVersion}}.dump() << '\n';
    for (auto const &r : trace)
    {
      out << trace_json(r).dump() << '\n';
    }
    return;
  }
  out << "pfr-trace v" << kTraceVersion << '\n';
  out << "# iteration d phi I1 I2 chosen label_x label_y endgame\n";
  for (auto const &r : trace)
  {
    out << r.iteration << ' ' << format_double(r.d) << ' ' << format_double(r.phi) << ' '
        << format_double(r.i1) << ' ' << format_double(r.i2) << ' '
        << (r.chosen ? tag_name(*r.chosen) : std::string_view("none")) << ' ' << r.label_x << ' '
        << r.label_y << ' ' << (r.endgame ? 1 : 0) << '\n';
  }
}

}  // namespace pfr
