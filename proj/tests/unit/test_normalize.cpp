#include <catch2/catch_amalgamated.hpp>

#include "agsense/data/normalize.hpp"

using namespace agsense;
using namespace agsense::data;

namespace {

ActivityMatrix constant_matrix(int value) {
  ActivityMatrix m;
  for (auto& c : m.counts) c = value;
  return m;
}

}  // namespace

TEST_CASE("all-zero training data falls back to divisor 1") {
  Normalizer n = Normalizer::fit({constant_matrix(0)});
  for (double d : n.divisors()) REQUIRE(d == 1.0);
  auto t = n.apply(constant_matrix(0));
  for (int i = 0; i < t.size(); ++i) REQUIRE(t[i] == 0.0);
}

TEST_CASE("a count equal to the divisor maps to exactly 1") {
  Normalizer n = Normalizer::fit({constant_matrix(4)});
  for (double d : n.divisors()) REQUIRE(d == 4.0);
  auto t = n.apply(constant_matrix(4));
  for (int i = 0; i < t.size(); ++i) REQUIRE(t[i] == 1.0);
}

TEST_CASE("counts above the divisor clip to 1") {
  Normalizer n = Normalizer::fit({constant_matrix(4)});
  auto t = n.apply(constant_matrix(9));
  for (int i = 0; i < t.size(); ++i) REQUIRE(t[i] == 1.0);
}

TEST_CASE("normalization is monotone per cell") {
  Normalizer n = Normalizer::fit({constant_matrix(10)});
  ActivityMatrix lo = constant_matrix(2), hi = constant_matrix(7);
  auto tlo = n.apply(lo), thi = n.apply(hi);
  for (int i = 0; i < tlo.size(); ++i) REQUIRE(tlo[i] < thi[i]);
}

TEST_CASE("99th percentile uses nearest rank") {
  // 100 values 1..100 -> rank ceil(0.99*100)=99 -> value 99
  std::vector<int> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  REQUIRE(Normalizer::nearest_rank_percentile(v, 0.99) == 99.0);
  // tiny sample: rank ceil(0.99*3)=3 -> the max
  REQUIRE(Normalizer::nearest_rank_percentile({5, 1, 3}, 0.99) == 5.0);
}
