#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "agsense/common/rng.hpp"
#include "agsense/data/activity_matrix.hpp"

namespace agsense::data {

// Synthetic cohort parameters. Stands in for the private clinical data:
// per-home Poisson activity with a diurnal shape, multi-occupancy
// background noise, and an agitation signature of elevated, over-dispersed
// night-time motion (bathroom / hallway / bedroom).
struct CohortSpec {
  int homes = 20;
  int days_per_home = 30;
  double labelled_fraction = 0.2;
  double positive_fraction = 0.3;  // among labelled days
  // fraction of unlabelled days that carry the agitation dynamics anyway
  double hidden_positive_fraction = 0.1;
  double home_scale_sd = 0.3;    // per-home log-normal activity spread
  double background_rate = 0.2;  // multi-occupancy noise, events/hour/sensor
  double night_multiplier = 3.0;
  double dispersion = 0.6;  // extra count variance on agitation days
  std::string home_prefix = "h";
  Date start_date{2024, 1, 1};
  uint64_t seed = 1;
};

struct Cohort {
  std::vector<ActivityMatrix> labelled;
  std::vector<ActivityMatrix> unlabelled;
};

namespace detail {

// baseline events/hour, [sensor][hour]
inline const double kDiurnal[kSensorCount][kHoursPerDay] = {
    // bathroom: morning and late-evening peaks, sparse overnight
    {0.3, 0.3, 0.3, 0.3, 0.3, 0.5, 1.2, 2.0, 2.0, 1.2, 0.8, 0.8,
     0.8, 0.8, 0.8, 0.8, 0.8, 1.0, 1.0, 1.0, 1.2, 1.5, 1.5, 0.6},
    // hallway: daytime traffic
    {0.2, 0.2, 0.2, 0.2, 0.2, 0.4, 1.0, 1.5, 1.5, 1.5, 1.5, 1.5,
     1.5, 1.5, 1.5, 1.5, 1.5, 1.5, 1.5, 1.2, 1.0, 0.8, 0.5, 0.3},
    // bedroom: presence at the edges of the day, some sleep movement
    {0.8, 0.8, 0.8, 0.8, 0.8, 1.0, 1.5, 1.2, 0.5, 0.3, 0.3, 0.3,
     0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.5, 0.8, 1.2, 1.5, 1.0},
    // lounge: afternoon and evening occupancy
    {0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.2, 0.5, 0.8, 1.0, 1.2, 1.5,
     1.5,  1.5,  1.5,  1.8,  2.0,  2.5,  3.0, 3.0, 2.5, 1.5, 0.8, 0.2},
    // kitchen: meal-time peaks
    {0.05, 0.05, 0.05, 0.05, 0.05, 0.1, 0.5, 2.0, 3.0, 1.0, 0.8, 1.5,
     3.0,  1.5,  0.8,  0.8,  1.0,  2.5, 3.0, 1.5, 0.8, 0.5, 0.3, 0.1},
    // fridge door
    {0.02, 0.02, 0.02, 0.02, 0.02, 0.05, 0.2, 0.8, 1.2, 0.5, 0.3, 0.8,
     1.2,  0.8,  0.3,  0.3,  0.5,  1.0,  1.2, 0.8, 0.3, 0.2, 0.1, 0.05},
    // kettle
    {0.01, 0.01, 0.01, 0.01, 0.01, 0.05, 0.3, 1.0, 1.2, 0.8, 0.6, 0.6,
     0.8,  0.6,  0.6,  0.8,  0.6,  0.5,  0.4, 0.4, 0.5, 0.4, 0.2, 0.05},
    // microwave
    {0.01, 0.01, 0.01, 0.01, 0.01, 0.02, 0.1, 0.5, 0.8, 0.3, 0.2, 0.5,
     0.8,  0.5,  0.2,  0.2,  0.3,  0.8,  0.8, 0.4, 0.2, 0.1, 0.05, 0.02},
};

inline bool night_hour(int hour) { return hour >= 22 || hour <= 5; }

inline bool motion_sensor(int sensor) {
  return sensor == static_cast<int>(Sensor::kBathroom) ||
         sensor == static_cast<int>(Sensor::kHallway) ||
         sensor == static_cast<int>(Sensor::kBedroom);
}

inline std::string home_id_for(const CohortSpec& spec, int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", index);
  return spec.home_prefix + buf;
}

}  // namespace detail

inline void validate(const CohortSpec& spec) {
  if (spec.homes < 0 || spec.days_per_home < 0)
    throw ValidationError("cohort: negative home or day count");
  for (double f : {spec.labelled_fraction, spec.positive_fraction,
                   spec.hidden_positive_fraction})
    if (f < 0.0 || f > 1.0)
      throw ValidationError("cohort: fractions must lie in [0,1]");
  long total = static_cast<long>(spec.homes) * spec.days_per_home;
  long n_lab = std::lround(spec.labelled_fraction * total);
  long n_pos = std::lround(spec.positive_fraction * n_lab);
  if (n_lab > 0 && n_pos < 1)
    throw ValidationError(
        "cohort: infeasible fractions, labelled days need at least one "
        "positive");
}

// Deterministic for a given spec: label allocation, per-home profiles and
// per-day draws all run on named substreams of spec.seed.
inline Cohort generate_cohort(const CohortSpec& spec) {
  validate(spec);
  Cohort cohort;
  long total = static_cast<long>(spec.homes) * spec.days_per_home;
  if (total == 0) return cohort;

  long n_lab = std::lround(spec.labelled_fraction * total);
  long n_pos = std::lround(spec.positive_fraction * n_lab);
  long n_hidden = std::lround(spec.hidden_positive_fraction * (total - n_lab));

  // slot -> (labelled?, agitated?)
  std::vector<long> slots(static_cast<std::size_t>(total));
  for (long i = 0; i < total; ++i) slots[static_cast<std::size_t>(i)] = i;
  Rng alloc(derive_seed(spec.seed, "cohort-allocation"));
  alloc.shuffle(slots);
  std::vector<DayLabel> label(static_cast<std::size_t>(total),
                              DayLabel::kUnlabelled);
  std::vector<char> agitated(static_cast<std::size_t>(total), 0);
  for (long i = 0; i < n_lab; ++i) {
    bool pos = i < n_pos;
    label[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)])] =
        pos ? DayLabel::kAgitation : DayLabel::kNotAgitation;
    agitated[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)])] =
        pos ? 1 : 0;
  }
  for (long i = n_lab; i < n_lab + n_hidden; ++i)
    agitated[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)])] = 1;

  for (int h = 0; h < spec.homes; ++h) {
    Rng home_rng(derive_seed(spec.seed, "cohort-home",
                             static_cast<uint64_t>(h)));
    double scale[kSensorCount];
    for (int s = 0; s < kSensorCount; ++s)
      scale[s] = std::exp(home_rng.normal() * spec.home_scale_sd);
    std::string home_id = detail::home_id_for(spec, h);

    for (int d = 0; d < spec.days_per_home; ++d) {
      long slot = static_cast<long>(h) * spec.days_per_home + d;
      bool agit = agitated[static_cast<std::size_t>(slot)] != 0;
      Rng day_rng(derive_seed(spec.seed, "cohort-day",
                              static_cast<uint64_t>(slot)));
      ActivityMatrix m;
      m.home_id = home_id;
      m.date = spec.start_date.plus_days(d);
      m.label = label[static_cast<std::size_t>(slot)];
      for (int hour = 0; hour < kHoursPerDay; ++hour) {
        for (int s = 0; s < kSensorCount; ++s) {
          double rate = detail::kDiurnal[s][hour] * scale[s] +
                        spec.background_rate;
          if (agit && detail::night_hour(hour) && detail::motion_sensor(s))
            rate *= spec.night_multiplier;
          if (agit && spec.dispersion > 0.0)
            rate = day_rng.gamma(1.0 / spec.dispersion,
                                 rate * spec.dispersion);
          m.at(hour, s) = day_rng.poisson(rate);
        }
      }
      if (m.label == DayLabel::kUnlabelled)
        cohort.unlabelled.push_back(std::move(m));
      else
        cohort.labelled.push_back(std::move(m));
    }
  }
  return cohort;
}

}  // namespace agsense::data
