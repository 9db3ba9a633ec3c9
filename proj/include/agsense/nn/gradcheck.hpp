#pragma once

#include <functional>
#include <string>
#include <vector>

#include "agsense/nn/loss.hpp"
#include "agsense/nn/network.hpp"

namespace agsense::nn {

// Central finite differences against the analytic backward pass, for every
// parameter and every input element. Gradients whose analytic and numeric
// magnitudes are both below `negligible` are accepted as zero.
struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst = "";
  bool pass = true;
};

using ScalarLoss = std::function<LossResult(const Tensor&)>;

inline GradCheckReport grad_check(Network& net, const Tensor& input,
                                  const ScalarLoss& loss_fn,
                                  double step = 1e-5, double tol = 1e-4,
                                  double negligible = 1e-7) {
  GradCheckReport report;
  auto eval = [&](const Tensor& x) {
    Tensor out = net.forward(x, Mode::kInfer);
    return loss_fn(out).value + net.l2_penalty();
  };

  net.zero_grads();
  Tensor out = net.forward(input, Mode::kInfer);
  LossResult lr = loss_fn(out);
  Tensor dinput = net.backward(lr.grad);

  auto check_one = [&](const std::string& where, double analytic,
                       double numeric) {
    double denom = std::max(std::abs(analytic), std::abs(numeric));
    if (denom < negligible) return;
    double rel = std::abs(analytic - numeric) / denom;
    if (rel > report.max_rel_err) {
      report.max_rel_err = rel;
      report.worst = where;
    }
    if (rel > tol) report.pass = false;
  };

  auto params = net.params();
  for (auto& p : params) {
    for (int i = 0; i < p.value->size(); ++i) {
      double saved = (*p.value)[i];
      (*p.value)[i] = saved + step;
      double up = eval(input);
      (*p.value)[i] = saved - step;
      double dn = eval(input);
      (*p.value)[i] = saved;
      check_one(p.name + "[" + std::to_string(i) + "]", (*p.grad)[i],
                (up - dn) / (2.0 * step));
    }
  }
  Tensor perturbed = input;
  for (int i = 0; i < input.size(); ++i) {
    double saved = perturbed[i];
    perturbed[i] = saved + step;
    double up = eval(perturbed);
    perturbed[i] = saved - step;
    double dn = eval(perturbed);
    perturbed[i] = saved;
    check_one("input[" + std::to_string(i) + "]", dinput[i],
              (up - dn) / (2.0 * step));
  }
  return report;
}

}  // namespace agsense::nn
