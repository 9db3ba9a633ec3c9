#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "agsense/data/cohort.hpp"

using namespace agsense;
using namespace agsense::data;

TEST_CASE("zero homes give empty sets") {
  CohortSpec spec;
  spec.homes = 0;
  Cohort c = generate_cohort(spec);
  REQUIRE(c.labelled.empty());
  REQUIRE(c.unlabelled.empty());
}

TEST_CASE("the same seed reproduces the cohort exactly") {
  CohortSpec spec;
  spec.homes = 4;
  spec.days_per_home = 6;
  spec.seed = 99;
  Cohort a = generate_cohort(spec);
  Cohort b = generate_cohort(spec);
  REQUIRE(a.labelled.size() == b.labelled.size());
  REQUIRE(a.unlabelled.size() == b.unlabelled.size());
  for (std::size_t i = 0; i < a.labelled.size(); ++i) {
    REQUIRE(a.labelled[i].counts == b.labelled[i].counts);
    REQUIRE(a.labelled[i].label == b.labelled[i].label);
    REQUIRE(a.labelled[i].home_id == b.labelled[i].home_id);
  }
  for (std::size_t i = 0; i < a.unlabelled.size(); ++i)
    REQUIRE(a.unlabelled[i].counts == b.unlabelled[i].counts);
}

TEST_CASE("label allocation is exact") {
  CohortSpec spec;
  spec.homes = 10;
  spec.days_per_home = 50;  // 500 days
  spec.labelled_fraction = 0.2;  // 100 labelled
  spec.positive_fraction = 0.3;  // exactly 30 positives
  spec.seed = 7;
  Cohort c = generate_cohort(spec);
  REQUIRE(c.labelled.size() == 100);
  REQUIRE(c.unlabelled.size() == 400);
  int positives = 0;
  for (const auto& m : c.labelled)
    if (m.label == DayLabel::kAgitation) ++positives;
  REQUIRE(positives == 30);
  for (const auto& m : c.unlabelled)
    REQUIRE(m.label == DayLabel::kUnlabelled);
}

TEST_CASE("infeasible fractions are rejected") {
  CohortSpec spec;
  spec.homes = 10;
  spec.days_per_home = 10;
  spec.labelled_fraction = 0.5;
  spec.positive_fraction = 0.0;  // labelled but no positive possible
  REQUIRE_THROWS_AS(generate_cohort(spec), ValidationError);
}

TEST_CASE("agitation days show elevated night-time motion on average") {
  CohortSpec spec;
  spec.homes = 12;
  spec.days_per_home = 40;
  spec.labelled_fraction = 0.5;
  spec.positive_fraction = 0.4;
  spec.night_multiplier = 3.0;
  spec.seed = 31;
  Cohort c = generate_cohort(spec);
  double night_pos = 0.0, night_neg = 0.0;
  int n_pos = 0, n_neg = 0;
  for (const auto& m : c.labelled) {
    double night = 0.0;
    for (int hour : {22, 23, 0, 1, 2, 3, 4, 5})
      for (int s : {0, 1, 2}) night += m.at(hour, s);
    if (m.label == DayLabel::kAgitation) {
      night_pos += night;
      ++n_pos;
    } else {
      night_neg += night;
      ++n_neg;
    }
  }
  REQUIRE(n_pos > 0);
  REQUIRE(n_neg > 0);
  REQUIRE(night_pos / n_pos > 1.8 * (night_neg / n_neg));
}

TEST_CASE("home ids carry the prefix and are dense") {
  CohortSpec spec;
  spec.homes = 3;
  spec.days_per_home = 2;
  spec.labelled_fraction = 0.0;
  spec.home_prefix = "t";
  Cohort c = generate_cohort(spec);
  std::set<std::string> ids;
  for (const auto& m : c.unlabelled) ids.insert(m.home_id);
  REQUIRE(ids == std::set<std::string>{"t000", "t001", "t002"});
}
