#pragma once

#include <memory>
#include <string>
#include <vector>

#include "agsense/common/error.hpp"
#include "agsense/common/rng.hpp"
#include "agsense/nn/tensor.hpp"

namespace agsense::nn {

enum class Mode { kTrain, kInfer };

struct Param {
  std::string name;
  Tensor* value;
  Tensor* grad;
};

// Layers cache whatever the backward pass needs during forward; backward
// accumulates parameter gradients (+=) and returns the gradient w.r.t. the
// layer input. A single layer instance is not safe for concurrent calls.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual Tensor forward(const Tensor& in, Mode mode) = 0;
  virtual Tensor backward(const Tensor& grad_out) = 0;
  virtual std::string kind() const = 0;

  virtual void collect_params(const std::string& /*prefix*/,
                              std::vector<Param>& /*out*/) {}
  virtual void init_params(Rng& /*rng*/) {}
  virtual double l2_penalty() const { return 0.0; }
  virtual void seed_stream(uint64_t /*seed*/) {}

 protected:
  void require_forward(const char* who) const {
    if (!ran_forward_)
      throw ValidationError(std::string(who) + ": backward before forward");
  }
  bool ran_forward_ = false;
};

inline void glorot_uniform(Tensor& w, int fan_in, int fan_out, Rng& rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-limit, limit);
}

class ReluLayer : public Layer {
 public:
  Tensor forward(const Tensor& in, Mode) override {
    input_ = in;
    ran_forward_ = true;
    Tensor out = in;
    for (int i = 0; i < out.size(); ++i)
      if (out[i] < 0.0) out[i] = 0.0;
    return out;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("relu");
    Tensor g = grad_out;
    // subgradient at 0 is 0
    for (int i = 0; i < g.size(); ++i)
      if (input_[i] <= 0.0) g[i] = 0.0;
    return g;
  }

  std::string kind() const override { return "relu"; }

 private:
  Tensor input_;
};

class SigmoidLayer : public Layer {
 public:
  Tensor forward(const Tensor& in, Mode) override {
    out_ = in;
    for (int i = 0; i < out_.size(); ++i)
      out_[i] = 1.0 / (1.0 + std::exp(-out_[i]));
    ran_forward_ = true;
    return out_;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("sigmoid");
    Tensor g = grad_out;
    for (int i = 0; i < g.size(); ++i) g[i] *= out_[i] * (1.0 - out_[i]);
    return g;
  }

  std::string kind() const override { return "sigmoid"; }

 private:
  Tensor out_;
};

// Softmax over the whole tensor (used on the final class-score vector).
class SoftmaxLayer : public Layer {
 public:
  Tensor forward(const Tensor& in, Mode) override {
    out_ = in;
    double mx = out_[0];
    for (int i = 1; i < out_.size(); ++i) mx = std::max(mx, out_[i]);
    double sum = 0.0;
    for (int i = 0; i < out_.size(); ++i) {
      out_[i] = std::exp(out_[i] - mx);
      sum += out_[i];
    }
    for (int i = 0; i < out_.size(); ++i) out_[i] /= sum;
    ran_forward_ = true;
    return out_;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("softmax");
    double dot = 0.0;
    for (int i = 0; i < out_.size(); ++i) dot += grad_out[i] * out_[i];
    Tensor g = grad_out;
    for (int i = 0; i < g.size(); ++i) g[i] = out_[i] * (grad_out[i] - dot);
    return g;
  }

  std::string kind() const override { return "softmax"; }

 private:
  Tensor out_;
};

// y_i = x_i / sum(x); inputs must be positive (sigmoid outputs are).
class RenormalizeLayer : public Layer {
 public:
  Tensor forward(const Tensor& in, Mode) override {
    sum_ = 0.0;
    for (int i = 0; i < in.size(); ++i) sum_ += in[i];
    if (sum_ <= 0.0)
      throw NumericalError("renormalize: non-positive mass " +
                           std::to_string(sum_));
    out_ = in;
    for (int i = 0; i < out_.size(); ++i) out_[i] /= sum_;
    ran_forward_ = true;
    return out_;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("renormalize");
    double dot = 0.0;
    for (int i = 0; i < out_.size(); ++i) dot += grad_out[i] * out_[i];
    Tensor g = grad_out;
    for (int i = 0; i < g.size(); ++i) g[i] = (grad_out[i] - dot) / sum_;
    return g;
  }

  std::string kind() const override { return "renormalize"; }

 private:
  Tensor out_;
  double sum_ = 0.0;
};

// Inverted dropout: zeroes each element with probability `rate` at train
// time and rescales survivors by 1/(1-rate); inference is the identity.
class DropoutLayer : public Layer {
 public:
  explicit DropoutLayer(double rate) : rate_(rate), rng_(0x5eedu) {
    if (rate < 0.0 || rate >= 1.0)
      throw ValidationError("dropout rate must be in [0,1)");
  }

  void seed_stream(uint64_t seed) override { rng_ = Rng(seed); }

  Tensor forward(const Tensor& in, Mode mode) override {
    ran_forward_ = true;
    if (mode == Mode::kInfer || rate_ == 0.0) {
      mask_ = Tensor::full(in.shape(), 1.0);
      return in;
    }
    mask_ = Tensor(in.shape());
    double keep_scale = 1.0 / (1.0 - rate_);
    Tensor out = in;
    for (int i = 0; i < out.size(); ++i) {
      double m = rng_.uniform() < rate_ ? 0.0 : keep_scale;
      mask_[i] = m;
      out[i] *= m;
    }
    return out;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("dropout");
    Tensor g = grad_out;
    for (int i = 0; i < g.size(); ++i) g[i] *= mask_[i];
    return g;
  }

  std::string kind() const override { return "dropout"; }
  double rate() const { return rate_; }

 private:
  double rate_;
  Rng rng_;
  Tensor mask_;
};

class FlattenLayer : public Layer {
 public:
  Tensor forward(const Tensor& in, Mode) override {
    in_shape_ = in.shape();
    ran_forward_ = true;
    return in.reshaped({in.size()});
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("flatten");
    return grad_out.reshaped(in_shape_);
  }

  std::string kind() const override { return "flatten"; }

 private:
  std::vector<int> in_shape_;
};

class ReshapeLayer : public Layer {
 public:
  explicit ReshapeLayer(std::vector<int> target) : target_(std::move(target)) {}

  Tensor forward(const Tensor& in, Mode) override {
    in_shape_ = in.shape();
    ran_forward_ = true;
    return in.reshaped(target_);
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("reshape");
    return grad_out.reshaped(in_shape_);
  }

  std::string kind() const override { return "reshape"; }

 private:
  std::vector<int> target_;
  std::vector<int> in_shape_;
};

// (T, F) -> (F): keeps the last time step.
class SelectLastRowLayer : public Layer {
 public:
  Tensor forward(const Tensor& in, Mode) override {
    if (in.rank() != 2) throw ValidationError("select-last expects rank 2");
    rows_ = in.dim(0);
    cols_ = in.dim(1);
    ran_forward_ = true;
    Tensor out({cols_});
    const double* src = in.data() + static_cast<std::size_t>(rows_ - 1) * cols_;
    for (int j = 0; j < cols_; ++j) out[j] = src[j];
    return out;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("select-last");
    Tensor g({rows_, cols_});
    double* dst = g.data() + static_cast<std::size_t>(rows_ - 1) * cols_;
    for (int j = 0; j < cols_; ++j) dst[j] = grad_out[j];
    return g;
  }

  std::string kind() const override { return "select-last"; }

 private:
  int rows_ = 0;
  int cols_ = 0;
};

}  // namespace agsense::nn
