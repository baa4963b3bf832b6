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

#include "mie/civil_time.hpp"

#include <cstdio>

#include "mie/error.hpp"

namespace mie {

namespace {

bool is_leap(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap(year)) {
    return 29;
  }
  return kDays[month - 1];
}

// 0 = Monday .. 6 = Sunday.
int weekday_from_days(std::int64_t days) {
  // 1970-01-01 was a Thursday (index 3).
  return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

}  // namespace

std::int64_t days_from_civil(const CivilDate& date) {
  // Howard Hinnant's days-from-civil algorithm (shifted so the era starts
  // in March, which pushes leap days to the end of the year).
  std::int64_t y = date.year;
  const int m = date.month;
  const int d = date.day;
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t days) {
  const std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  CivilDate date;
  date.year = static_cast<int>(y + (m <= 2));
  date.month = static_cast<int>(m);
  date.day = static_cast<int>(d);
  return date;
}

std::int64_t epoch_from_civil(int year, int month, int day, int hour, int minute, int second) {
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) || hour < 0 ||
      hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 60) {
    throw UnparsableTimestamp("civil time field out of range");
  }
  if (second == 60) {
    second = 59;  // leap seconds collapse to the previous second
  }
  const std::int64_t days = days_from_civil({year, month, day});
  return days * 86400 + hour * 3600 + minute * 60 + second;
}

IsoWeek iso_week(std::int64_t timestamp) {
  std::int64_t days = timestamp / 86400;
  if (timestamp < 0 && timestamp % 86400 != 0) {
    --days;
  }
  // ISO 8601: the week containing a date's nearest Thursday determines
  // both the week number and the week-based year.
  const std::int64_t thursday = days - weekday_from_days(days) + 3;
  const CivilDate th = civil_from_days(thursday);
  const std::int64_t year_start = days_from_civil({th.year, 1, 1});
  IsoWeek week;
  week.year = th.year;
  week.week = static_cast<int>((thursday - year_start) / 7) + 1;
  return week;
}

std::int64_t parse_rfc3339(std::string_view text) {
  int year = 0;
  int month = 0;
  int day = 0;
  int hour = 0;
  int minute = 0;
  int second = 0;
  int consumed = 0;
  const std::string buffer(text);
  if (std::sscanf(buffer.c_str(), "%4d-%2d-%2d%*1[Tt ]%2d:%2d:%2d%n", &year, &month, &day, &hour,
                  &minute, &second, &consumed) != 6) {
    throw UnparsableTimestamp("not an RFC 3339 timestamp: \"" + buffer + "\"");
  }
  std::size_t pos = static_cast<std::size_t>(consumed);
  if (pos < buffer.size() && buffer[pos] == '.') {
    ++pos;
    while (pos < buffer.size() && buffer[pos] >= '0' && buffer[pos] <= '9') {
      ++pos;
    }
  }
  std::int64_t offset = 0;
  if (pos >= buffer.size()) {
    throw UnparsableTimestamp("missing UTC offset: \"" + buffer + "\"");
  }
  if (buffer[pos] == 'Z' || buffer[pos] == 'z') {
    ++pos;
  } else if (buffer[pos] == '+' || buffer[pos] == '-') {
    const int sign = buffer[pos] == '+' ? 1 : -1;
    int oh = 0;
    int om = 0;
    int n = 0;
    if (std::sscanf(buffer.c_str() + pos + 1, "%2d:%2d%n", &oh, &om, &n) != 2 || n != 5) {
      throw UnparsableTimestamp("malformed UTC offset: \"" + buffer + "\"");
    }
    offset = sign * (oh * 3600 + om * 60);
    pos += 6;
  } else {
    throw UnparsableTimestamp("missing UTC offset: \"" + buffer + "\"");
  }
  if (pos != buffer.size()) {
    throw UnparsableTimestamp("trailing characters: \"" + buffer + "\"");
  }
  return epoch_from_civil(year, month, day, hour, minute, second) - offset;
}

std::string format_rfc3339(std::int64_t timestamp) {
  std::int64_t days = timestamp / 86400;
  std::int64_t rem = timestamp % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const CivilDate date = civil_from_days(days);
  char out[32];
  std::snprintf(out, sizeof(out), "%04d-%02d-%02dT%02d:%02d:%02dZ", date.year, date.month,
                date.day, static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                static_cast<int>(rem % 60));
  return out;
}

}  // namespace mie
