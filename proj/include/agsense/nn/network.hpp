#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "agsense/common/rng.hpp"
#include "agsense/nn/layer.hpp"

namespace agsense::nn {

// A straight stack of layers. Parameter names are "<index>.<kind>.<role>",
// stable across runs, which the weight container relies on.
class Network {
 public:
  Network() = default;
  Network(Network&&) = default;
  Network& operator=(Network&&) = default;

  template <typename L, typename... Args>
  L& add(Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L& ref = *layer;
    layers_.push_back(std::move(layer));
    return ref;
  }

  void append(std::unique_ptr<Layer> layer) {
    layers_.push_back(std::move(layer));
  }

  // Glorot-style init plus per-layer dropout streams, all derived from one
  // seed so two identically built networks initialise identically.
  void init(uint64_t seed) {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      Rng rng(derive_seed(seed, "layer-init", i));
      layers_[i]->init_params(rng);
      layers_[i]->seed_stream(derive_seed(seed, "layer-stream", i));
    }
  }

  Tensor forward(const Tensor& in, Mode mode) {
    Tensor x = in;
    for (auto& l : layers_) x = l->forward(x, mode);
    ran_forward_ = true;
    return x;
  }

  // grad_out: gradient of the loss w.r.t. the network output. Accumulates
  // parameter gradients and returns the gradient w.r.t. the input.
  Tensor backward(const Tensor& grad_out) {
    if (!ran_forward_)
      throw ValidationError("network: backward before forward");
    Tensor g = grad_out;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
      g = (*it)->backward(g);
    return g;
  }

  std::vector<Param> params() {
    std::vector<Param> out;
    for (std::size_t i = 0; i < layers_.size(); ++i)
      layers_[i]->collect_params(std::to_string(i) + "." + layers_[i]->kind(),
                                 out);
    return out;
  }

  void zero_grads() {
    for (auto& p : params())
      for (int i = 0; i < p.grad->size(); ++i) (*p.grad)[i] = 0.0;
  }

  double l2_penalty() const {
    double s = 0.0;
    for (const auto& l : layers_) s += l->l2_penalty();
    return s;
  }

  std::size_t layer_count() const { return layers_.size(); }
  Layer& layer(std::size_t i) { return *layers_[i]; }
  const Layer& layer(std::size_t i) const { return *layers_[i]; }

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
  bool ran_forward_ = false;
};

}  // namespace agsense::nn
