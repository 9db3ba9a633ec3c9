#pragma once

#include <array>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "agsense/common/error.hpp"

namespace agsense::data {

// The eight in-home sensors; channel order is fixed and is the column
// order of every activity matrix.
enum class Sensor : int {
  kBathroom = 0,
  kHallway = 1,
  kBedroom = 2,
  kLounge = 3,
  kKitchen = 4,
  kFridgeDoor = 5,
  kKettle = 6,
  kMicrowave = 7,
};

inline constexpr int kSensorCount = 8;
inline constexpr int kHoursPerDay = 24;

inline constexpr std::array<std::string_view, kSensorCount> kSensorNames = {
    "bathroom", "hallway",     "bedroom", "lounge",
    "kitchen",  "fridge-door", "kettle",  "microwave"};

inline Sensor sensor_from_name(std::string_view name) {
  for (int i = 0; i < kSensorCount; ++i)
    if (kSensorNames[static_cast<std::size_t>(i)] == name)
      return static_cast<Sensor>(i);
  throw ValidationError("unknown sensor name '" + std::string(name) + "'");
}

inline std::string_view sensor_name(Sensor s) {
  return kSensorNames[static_cast<std::size_t>(static_cast<int>(s))];
}

struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  std::string to_string() const {
    char buf[11];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return std::string(buf, 10);
  }

  // days since 1970-01-01 (civil-to-days, proleptic Gregorian)
  long serial() const {
    int y = year - (month <= 2 ? 1 : 0);
    long era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy =
        (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(day) - 1u;
    unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
  }

  static Date from_serial(long z) {
    z += 719468;
    long era = (z >= 0 ? z : z - 146096) / 146097;
    unsigned doe = static_cast<unsigned>(z - era * 146097);
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    long y = static_cast<long>(yoe) + era * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    unsigned mp = (5 * doy + 2) / 153;
    unsigned d = doy - (153 * mp + 2) / 5 + 1;
    unsigned m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
    return Date{static_cast<int>(y + (m <= 2 ? 1 : 0)), static_cast<int>(m),
                static_cast<int>(d)};
  }

  Date plus_days(long n) const { return from_serial(serial() + n); }
};

// UTC wall-clock instant, second resolution.
struct Timestamp {
  Date date;
  int hour = 0;
  int minute = 0;
  int second = 0;

  auto operator<=>(const Timestamp&) const = default;

  std::string to_string() const {
    char buf[21];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  date.year, date.month, date.day, hour, minute, second);
    return std::string(buf, 20);
  }
};

namespace detail {

inline bool parse_fixed_int(std::string_view s, std::size_t pos,
                            std::size_t len, int& out) {
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (i >= s.size() || s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

inline bool try_parse_date(std::string_view s, Date& out) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  Date d;
  if (!detail::parse_fixed_int(s, 0, 4, d.year) ||
      !detail::parse_fixed_int(s, 5, 2, d.month) ||
      !detail::parse_fixed_int(s, 8, 2, d.day))
    return false;
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return false;
  out = d;
  return true;
}

inline Date parse_date(std::string_view s) {
  Date d;
  if (!try_parse_date(s, d))
    throw ValidationError("malformed date '" + std::string(s) +
                          "', expected YYYY-MM-DD");
  return d;
}

// Accepts the UTC profile `YYYY-MM-DDTHH:MM:SSZ`.
inline bool try_parse_timestamp(std::string_view s, Timestamp& out) {
  if (s.size() != 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':' ||
      s[19] != 'Z')
    return false;
  Timestamp t;
  if (!try_parse_date(s.substr(0, 10), t.date)) return false;
  if (!detail::parse_fixed_int(s, 11, 2, t.hour) ||
      !detail::parse_fixed_int(s, 14, 2, t.minute) ||
      !detail::parse_fixed_int(s, 17, 2, t.second))
    return false;
  if (t.hour > 23 || t.minute > 59 || t.second > 60) return false;
  out = t;
  return true;
}

struct SensorEvent {
  Timestamp time;
  std::string home_id;
  Sensor sensor;
};

// CSV lines `timestamp,home_id,sensor`. Input order is preserved; blank
// lines are skipped; a leading header line `timestamp,home_id,sensor` is
// tolerated.
inline std::vector<SensorEvent> parse_event_log(std::istream& in) {
  std::vector<SensorEvent> events;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "timestamp,home_id,sensor") continue;

    std::size_t c1 = line.find(',');
    std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                             : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw ValidationError("line " + std::to_string(line_no) +
                            ": expected `timestamp,home_id,sensor`");
    std::string_view ts(line.data(), c1);
    std::string home = line.substr(c1 + 1, c2 - c1 - 1);
    std::string_view sensor_token(line.data() + c2 + 1, line.size() - c2 - 1);

    SensorEvent ev;
    if (!try_parse_timestamp(ts, ev.time))
      throw ValidationError("line " + std::to_string(line_no) +
                            ": malformed timestamp '" + std::string(ts) + "'");
    if (home.empty())
      throw ValidationError("line " + std::to_string(line_no) +
                            ": empty home id");
    ev.home_id = std::move(home);
    try {
      ev.sensor = sensor_from_name(sensor_token);
    } catch (const ValidationError&) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": unknown sensor name '" +
                            std::string(sensor_token) + "'");
    }
    events.push_back(std::move(ev));
  }
  return events;
}

}  // namespace agsense::data
