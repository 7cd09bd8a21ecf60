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

// Run reports and descent traces, as plain text or JSON lines. Every output
// opens with a schema line naming the format and its version.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pfr/checks.hpp"
#include "pfr/descent.hpp"

namespace pfr {

inline constexpr int kReportVersion = 1;
inline constexpr int kTraceVersion  = 1;

enum class ReportFormat
{
  kText,
  kJsonLines,
};

std::optional<ReportFormat> parse_report_format(std::string_view name);

enum class Outcome
{
  kPass,
  kFail,
  kStall,
};

std::string_view outcome_name(Outcome o);

struct Metric
{
  using Value = std::variant<double, std::int64_t, bool, std::string, std::vector<std::string>>;

  std::string name;
  Value       value;
};

struct RunReport
{
  std::string                                      command;
  std::string                                      inputs_digest;  // "sha256:<hex>"
  std::vector<std::pair<std::string, std::string>> config;
  Outcome                                          outcome = Outcome::kFail;
  std::vector<Metric>                              metrics;
  std::vector<CheckStat>                           checks;
  std::optional<double>                            wall_seconds;  // only when timing was asked for
  std::optional<std::string>                       error;

  void add_metric(std::string name, Metric::Value value) { metrics.push_back({std::move(name), std::move(value)}); }
  void add_config(std::string key, std::string value) { config.emplace_back(std::move(key), std::move(value)); }
  /// Outcome pass only if every recorded check passed.
  bool checks_passed() const;
};

void write_report(std::ostream &out, RunReport const &report, ReportFormat format);

/// Lowercase hex SHA-256 of the bytes, prefixed "sha256:".
std::string sha256_digest(std::string_view bytes);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

void write_trace(std::ostream &out, DescentTrace const &trace, ReportFormat format);

}  // namespace pfr
