#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "agsense/nn/loss.hpp"

using namespace agsense::nn;

TEST_CASE("mse of identical tensors is zero") {
  Tensor a({2}, {1.0, 2.0});
  REQUIRE(loss_mse(a, a).value == 0.0);
}

TEST_CASE("mse of [0,2] vs [1,0] is 2.5") {
  Tensor p({2}, {0.0, 2.0});
  Tensor t({2}, {1.0, 0.0});
  REQUIRE(loss_mse(p, t).value == Catch::Approx(2.5).margin(1e-15));
}

TEST_CASE("bce at 0.5 against a positive is ln 2") {
  Tensor p({1}, {0.5});
  Tensor t({1}, {1.0});
  REQUIRE(loss_bce(p, t).value == Catch::Approx(std::log(2.0)).margin(1e-12));
}

TEST_CASE("cce picks out the target log-probability") {
  Tensor p({3}, {0.2, 0.5, 0.3});
  Tensor t({3}, {0.0, 1.0, 0.0});
  REQUIRE(loss_cce(p, t).value ==
          Catch::Approx(-std::log(0.5)).margin(1e-12));
}

TEST_CASE("cross entropies clamp rather than blow up at zero") {
  Tensor p({2}, {0.0, 1.0});
  Tensor t({2}, {1.0, 0.0});
  REQUIRE(std::isfinite(loss_cce(p, t).value));
  REQUIRE(std::isfinite(loss_bce(p, t).value));
}

TEST_CASE("losses reject shape mismatches") {
  Tensor p({2});
  Tensor t({3});
  REQUIRE_THROWS_AS(loss_mse(p, t), agsense::ValidationError);
}
