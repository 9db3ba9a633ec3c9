#pragma once

#include <algorithm>
#include <cmath>

#include "agsense/nn/tensor.hpp"

namespace agsense::nn {

enum class LossKind { kMse, kBinaryCrossEntropy, kCategoricalCrossEntropy };

struct LossResult {
  double value;
  Tensor grad;  // d value / d pred
};

// log-argument clamp for the cross entropies
inline constexpr double kProbClamp = 1e-12;

inline LossResult loss_mse(const Tensor& pred, const Tensor& target) {
  if (!pred.same_shape(target))
    throw ValidationError("mse: shape mismatch " + pred.shape_string() +
                          " vs " + target.shape_string());
  int n = pred.size();
  LossResult r{0.0, Tensor(pred.shape())};
  for (int i = 0; i < n; ++i) {
    double d = pred[i] - target[i];
    r.value += d * d;
    r.grad[i] = 2.0 * d / n;
  }
  r.value /= n;
  return r;
}

inline LossResult loss_bce(const Tensor& pred, const Tensor& target) {
  if (!pred.same_shape(target))
    throw ValidationError("bce: shape mismatch " + pred.shape_string() +
                          " vs " + target.shape_string());
  int n = pred.size();
  LossResult r{0.0, Tensor(pred.shape())};
  for (int i = 0; i < n; ++i) {
    double p = std::clamp(pred[i], kProbClamp, 1.0 - kProbClamp);
    double t = target[i];
    r.value += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
    r.grad[i] = (-t / p + (1.0 - t) / (1.0 - p)) / n;
  }
  r.value /= n;
  return r;
}

// -sum_j t_j log p_j; targets may be soft.
inline LossResult loss_cce(const Tensor& pred, const Tensor& target) {
  if (!pred.same_shape(target))
    throw ValidationError("cce: shape mismatch " + pred.shape_string() +
                          " vs " + target.shape_string());
  LossResult r{0.0, Tensor(pred.shape())};
  for (int i = 0; i < pred.size(); ++i) {
    double p = std::max(pred[i], kProbClamp);
    r.value += -target[i] * std::log(p);
    r.grad[i] = -target[i] / p;
  }
  return r;
}

inline LossResult loss(const Tensor& pred, const Tensor& target,
                       LossKind kind) {
  switch (kind) {
    case LossKind::kMse:
      return loss_mse(pred, target);
    case LossKind::kBinaryCrossEntropy:
      return loss_bce(pred, target);
    case LossKind::kCategoricalCrossEntropy:
      return loss_cce(pred, target);
  }
  throw ValidationError("unknown loss kind");
}

}  // namespace agsense::nn
