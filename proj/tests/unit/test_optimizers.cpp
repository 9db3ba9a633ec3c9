#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "agsense/nn/optimizer.hpp"

using namespace agsense;
using namespace agsense::nn;

namespace {

struct Toy {
  Tensor w{std::vector<int>{1}};
  Tensor g{std::vector<int>{1}};
  std::vector<Param> params() { return {{"w", &w, &g}}; }
};

}  // namespace

TEST_CASE("adam first step: bias correction cancels to lr/(1+eps)") {
  Toy toy;
  toy.w[0] = 1.0;
  toy.g[0] = 1.0;
  Optimizer opt(OptimizerSpec::make(OptAlgo::kAdam, 0.001));
  auto params = toy.params();
  opt.step(params);
  double expected = 1.0 - 0.001 * 1.0 / (1.0 + 1e-8);
  REQUIRE(toy.w[0] == Catch::Approx(expected).margin(1e-15));
}

TEST_CASE("zero gradient leaves parameters unchanged for every algorithm") {
  for (OptAlgo algo : {OptAlgo::kAdam, OptAlgo::kRmsprop, OptAlgo::kAdadelta,
                       OptAlgo::kAdagrad, OptAlgo::kSgd}) {
    Toy toy;
    toy.w[0] = 3.25;
    toy.g[0] = 0.0;
    Optimizer opt(OptimizerSpec::make(algo, 0.05));
    auto params = toy.params();
    opt.step(params);
    REQUIRE(toy.w[0] == 3.25);
  }
}

TEST_CASE("adagrad accumulates: second unit-gradient step is smaller") {
  Toy toy;
  toy.w[0] = 0.0;
  Optimizer opt(OptimizerSpec::make(OptAlgo::kAdagrad, 0.1));
  auto params = toy.params();

  toy.g[0] = 1.0;
  opt.step(params);
  double first = -toy.w[0];  // lr / (sqrt(1) + eps)
  double w_after_first = toy.w[0];
  toy.g[0] = 1.0;
  opt.step(params);
  double second = w_after_first - toy.w[0];  // lr / (sqrt(2) + eps)

  // hand accumulator arithmetic
  REQUIRE(first == Catch::Approx(0.1 / (1.0 + 1e-8)).margin(1e-15));
  REQUIRE(second ==
          Catch::Approx(0.1 / (std::sqrt(2.0) + 1e-8)).margin(1e-15));
  REQUIRE(second < first);
}

TEST_CASE("rmsprop first step follows the leaky accumulator") {
  Toy toy;
  toy.g[0] = 2.0;
  Optimizer opt(OptimizerSpec::make(OptAlgo::kRmsprop, 0.01));
  auto params = toy.params();
  opt.step(params);
  double acc = 0.1 * 4.0;
  REQUIRE(toy.w[0] ==
          Catch::Approx(-0.01 * 2.0 / (std::sqrt(acc) + 1e-8)).margin(1e-15));
}

TEST_CASE("adadelta moves even from a cold start") {
  Toy toy;
  toy.g[0] = 1.0;
  Optimizer opt(OptimizerSpec::make(OptAlgo::kAdadelta, 1.0));
  auto params = toy.params();
  opt.step(params);
  double acc_g = 0.05;
  double expected = -std::sqrt(1e-6) / std::sqrt(acc_g + 1e-6);
  REQUIRE(toy.w[0] == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("non-finite gradients abort with a diagnostic") {
  Toy toy;
  toy.g[0] = std::nan("");
  Optimizer opt(OptimizerSpec::make(OptAlgo::kSgd, 0.1));
  auto params = toy.params();
  REQUIRE_THROWS_AS(opt.step(params), NumericalError);
}

TEST_CASE("learning rate must be positive") {
  REQUIRE_THROWS_AS(Optimizer(OptimizerSpec::make(OptAlgo::kSgd, 0.0)),
                    ValidationError);
}
