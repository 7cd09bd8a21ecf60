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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace pfr {

/// Running maximum of a non-negative violation against a fixed tolerance.
struct CheckStat
{
  std::string name;
  double      tolerance     = 0.0;
  double      max_violation = 0.0;
  std::size_t count         = 0;
  std::size_t failures      = 0;

  /// `violation` is how far an inequality is broken; values <= 0 mean it held.
  void record(double violation)
  {
    if (std::isnan(violation))
    {
      violation = std::numeric_limits<double>::infinity();
    }
    violation = std::max(violation, 0.0);
    ++count;
    if (violation > tolerance)
    {
      ++failures;
    }
    max_violation = std::max(max_violation, violation);
  }

  bool passed() const { return failures == 0; }
};

class CheckReport
{
public:
  CheckStat &check(std::string const &name, double tolerance)
  {
    for (auto &c : checks_)
    {
      if (c.name == name)
      {
        return c;
      }
    }
    checks_.push_back({name, tolerance});
    return checks_.back();
  }

  void record(std::string const &name, double tolerance, double violation)
  {
    check(name, tolerance).record(violation);
  }

  /// Appends other's statistics; names already present are combined.
  void merge(CheckReport const &other)
  {
    for (auto const &c : other.checks_)
    {
      CheckStat &mine = check(c.name, c.tolerance);
      mine.count += c.count;
      mine.failures += c.failures;
      mine.max_violation = std::max(mine.max_violation, c.max_violation);
    }
  }

  bool passed() const
  {
    return std::all_of(checks_.begin(), checks_.end(), [](auto const &c) { return c.passed(); });
  }

  std::vector<CheckStat> const &checks() const { return checks_; }

private:
  std::vector<CheckStat> checks_;
};

}  // namespace pfr
