#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agsense/data/events.hpp"
#include "agsense/nn/tensor.hpp"

namespace agsense::data {

enum class DayLabel : uint8_t {
  kNotAgitation = 0,
  kAgitation = 1,
  kUnlabelled = 255,
};

// One home-day: hourly event counts per sensor, 24 x 8, hour-major.
struct ActivityMatrix {
  std::string home_id;
  Date date;
  std::vector<int> counts =
      std::vector<int>(kHoursPerDay * kSensorCount, 0);  // [hour*8 + sensor]
  DayLabel label = DayLabel::kUnlabelled;

  int& at(int hour, int sensor) { return counts[hour * kSensorCount + sensor]; }
  int at(int hour, int sensor) const {
    return counts[hour * kSensorCount + sensor];
  }

  long total() const {
    long t = 0;
    for (int c : counts) t += c;
    return t;
  }
};

// counts[h][s] = number of events of sensor s in hour h of `date` for
// `home_id`. Events for other homes or days are ignored; hours with no
// events stay zero.
inline ActivityMatrix aggregate_hourly(const std::vector<SensorEvent>& events,
                                       const std::string& home_id,
                                       const Date& date) {
  ActivityMatrix m;
  m.home_id = home_id;
  m.date = date;
  for (const auto& ev : events) {
    if (ev.home_id != home_id || ev.time.date != date) continue;
    ++m.at(ev.time.hour, static_cast<int>(ev.sensor));
  }
  return m;
}

}  // namespace agsense::data
