#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "agsense/nn/layer.hpp"

namespace agsense::nn {

enum class OptAlgo { kAdam, kRmsprop, kAdadelta, kAdagrad, kSgd };

inline OptAlgo opt_algo_from_name(const std::string& name) {
  if (name == "adam") return OptAlgo::kAdam;
  if (name == "rmsprop") return OptAlgo::kRmsprop;
  if (name == "adadelta") return OptAlgo::kAdadelta;
  if (name == "adagrad") return OptAlgo::kAdagrad;
  if (name == "sgd") return OptAlgo::kSgd;
  throw ValidationError("unknown optimizer '" + name + "'");
}

struct OptimizerSpec {
  OptAlgo algo = OptAlgo::kAdam;
  double learning_rate = 0.001;
  double beta1 = 0.9;    // adam
  double beta2 = 0.999;  // adam
  double rho = 0.9;      // rmsprop; adadelta uses 0.95 unless overridden
  double eps = 1e-8;

  static OptimizerSpec make(OptAlgo algo, double lr) {
    OptimizerSpec s;
    s.algo = algo;
    s.learning_rate = lr;
    if (algo == OptAlgo::kAdadelta) {
      s.rho = 0.95;
      s.eps = 1e-6;
    }
    return s;
  }
};

// Holds per-parameter accumulator state keyed by parameter order, which is
// stable for a fixed network.
class Optimizer {
 public:
  explicit Optimizer(OptimizerSpec spec) : spec_(spec) {
    if (spec.learning_rate <= 0.0)
      throw ValidationError("learning rate must be positive");
  }

  // grad_scale folds the 1/batch averaging into the update.
  void step(std::vector<Param>& params, double grad_scale = 1.0) {
    ensure_state(params);
    for (std::size_t k = 0; k < params.size(); ++k) {
      const Tensor& g = *params[k].grad;
      for (int i = 0; i < g.size(); ++i)
        if (!std::isfinite(g[i]))
          throw NumericalError("non-finite gradient in parameter '" +
                               params[k].name + "'");
    }
    ++t_;
    for (std::size_t k = 0; k < params.size(); ++k) {
      Tensor& w = *params[k].value;
      const Tensor& g = *params[k].grad;
      Tensor& a1 = acc1_[k];
      Tensor& a2 = acc2_[k];
      double lr = spec_.learning_rate;
      switch (spec_.algo) {
        case OptAlgo::kSgd:
          for (int i = 0; i < w.size(); ++i) w[i] -= lr * g[i] * grad_scale;
          break;
        case OptAlgo::kAdam: {
          double c1 = 1.0 - std::pow(spec_.beta1, t_);
          double c2 = 1.0 - std::pow(spec_.beta2, t_);
          for (int i = 0; i < w.size(); ++i) {
            double gi = g[i] * grad_scale;
            a1[i] = spec_.beta1 * a1[i] + (1.0 - spec_.beta1) * gi;
            a2[i] = spec_.beta2 * a2[i] + (1.0 - spec_.beta2) * gi * gi;
            double mhat = a1[i] / c1;
            double vhat = a2[i] / c2;
            w[i] -= lr * mhat / (std::sqrt(vhat) + spec_.eps);
          }
          break;
        }
        case OptAlgo::kRmsprop:
          for (int i = 0; i < w.size(); ++i) {
            double gi = g[i] * grad_scale;
            a1[i] = spec_.rho * a1[i] + (1.0 - spec_.rho) * gi * gi;
            w[i] -= lr * gi / (std::sqrt(a1[i]) + spec_.eps);
          }
          break;
        case OptAlgo::kAdagrad:
          for (int i = 0; i < w.size(); ++i) {
            double gi = g[i] * grad_scale;
            a1[i] += gi * gi;
            w[i] -= lr * gi / (std::sqrt(a1[i]) + spec_.eps);
          }
          break;
        case OptAlgo::kAdadelta:
          for (int i = 0; i < w.size(); ++i) {
            double gi = g[i] * grad_scale;
            a1[i] = spec_.rho * a1[i] + (1.0 - spec_.rho) * gi * gi;
            double dx = -std::sqrt(a2[i] + spec_.eps) /
                        std::sqrt(a1[i] + spec_.eps) * gi;
            a2[i] = spec_.rho * a2[i] + (1.0 - spec_.rho) * dx * dx;
            w[i] += lr * dx;
          }
          break;
      }
    }
  }

  const OptimizerSpec& spec() const { return spec_; }

 private:
  void ensure_state(const std::vector<Param>& params) {
    if (!acc1_.empty()) {
      if (acc1_.size() != params.size())
        throw ValidationError("optimizer: parameter set changed between steps");
      return;
    }
    for (const auto& p : params) {
      acc1_.emplace_back(p.value->shape());
      acc2_.emplace_back(p.value->shape());
    }
  }

  OptimizerSpec spec_;
  std::vector<Tensor> acc1_, acc2_;
  long t_ = 0;
};

}  // namespace agsense::nn
