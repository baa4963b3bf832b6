// Copyright 2026 The mie authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mie {

// Proleptic-Gregorian calendar helpers, all UTC. Timestamps are Unix
// seconds. No locale, no system time zone database.

struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
};

/// Days since 1970-01-01 for a civil date (negative before the epoch).
std::int64_t days_from_civil(const CivilDate& date);

CivilDate civil_from_days(std::int64_t days);

/// Unix seconds for a civil date-time. Throws UnparsableTimestamp for
/// out-of-range fields.
std::int64_t epoch_from_civil(int year, int month, int day, int hour, int minute, int second);

struct IsoWeek {
  int year = 1970;
  int week = 1;  // 1..53
};

IsoWeek iso_week(std::int64_t timestamp);

/// Parses "YYYY-MM-DDTHH:MM:SS" with a 'Z' or '+hh:mm'/'-hh:mm' offset
/// ('T' may be a space; fractional seconds are truncated). Throws
/// UnparsableTimestamp.
std::int64_t parse_rfc3339(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(std::int64_t timestamp);

}  // namespace mie
