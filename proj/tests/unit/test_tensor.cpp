#include <catch2/catch_amalgamated.hpp>

#include "agsense/nn/tensor.hpp"

using agsense::ValidationError;
using agsense::nn::Tensor;

TEST_CASE("tensor shape and storage agree") {
  Tensor t({2, 3, 4});
  REQUIRE(t.size() == 24);
  REQUIRE(t.rank() == 3);
  REQUIRE(t.dim(1) == 3);
  for (int i = 0; i < t.size(); ++i) REQUIRE(t[i] == 0.0);
}

TEST_CASE("tensor rejects inconsistent data") {
  REQUIRE_THROWS_AS(Tensor({2, 2}, {1.0, 2.0, 3.0}), ValidationError);
  REQUIRE_THROWS_AS(Tensor({0, 4}), ValidationError);
}

TEST_CASE("reshape preserves data and checks size") {
  Tensor t({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor r = t.reshaped({3, 2});
  REQUIRE(r.dim(0) == 3);
  REQUIRE(r[4] == 5.0);
  REQUIRE_THROWS_AS(t.reshaped({4, 2}), ValidationError);
}

TEST_CASE("all_finite flags bad values") {
  Tensor t({2}, {1.0, 2.0});
  REQUIRE(t.all_finite());
  t[1] = std::nan("");
  REQUIRE_FALSE(t.all_finite());
}
