#pragma once

#include <Eigen/Dense>

#include "agsense/nn/layer.hpp"

namespace agsense::nn {

using MatrixRM =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatrixRM>;
using ConstMapRM = Eigen::Map<const MatrixRM>;

// Affine map on the last axis: (..., in) -> (..., out). Rows are processed
// independently, so a (T, in) sequence maps to (T, out) step-wise.
// An optional L2 penalty l2*||W||^2 contributes 2*l2*W to the weight
// gradient during backward and is reported through l2_penalty().
class DenseLayer : public Layer {
 public:
  DenseLayer(int in, int out, double l2 = 0.0)
      : in_(in), out_(out), l2_(l2), w_({out, in}), b_({out}),
        gw_({out, in}), gb_({out}) {}

  void init_params(Rng& rng) override {
    glorot_uniform(w_, in_, out_, rng);
    for (int i = 0; i < b_.size(); ++i) b_[i] = 0.0;
  }

  Tensor forward(const Tensor& in, Mode) override {
    if (in.size() % in_ != 0 || in.dim(in.rank() - 1) != in_)
      throw ValidationError("dense: input last extent " +
                            std::to_string(in.dim(in.rank() - 1)) +
                            " does not match weight fan-in " +
                            std::to_string(in_));
    input_ = in;
    rows_ = in.size() / in_;
    ran_forward_ = true;

    std::vector<int> out_shape = in.shape();
    out_shape.back() = out_;
    Tensor out(out_shape);
    ConstMapRM x(in.data(), rows_, in_);
    ConstMapRM w(w_.data(), out_, in_);
    MapRM y(out.data(), rows_, out_);
    y.noalias() = x * w.transpose();
    for (int r = 0; r < rows_; ++r)
      for (int j = 0; j < out_; ++j) y(r, j) += b_[j];
    return out;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("dense");
    ConstMapRM dy(grad_out.data(), rows_, out_);
    ConstMapRM x(input_.data(), rows_, in_);
    ConstMapRM w(w_.data(), out_, in_);
    MapRM dw(gw_.data(), out_, in_);
    dw.noalias() += dy.transpose() * x;
    if (l2_ != 0.0) {
      ConstMapRM wv(w_.data(), out_, in_);
      dw.noalias() += 2.0 * l2_ * wv;
    }
    for (int r = 0; r < rows_; ++r)
      for (int j = 0; j < out_; ++j) gb_[j] += dy(r, j);

    Tensor dx(input_.shape());
    MapRM dxm(dx.data(), rows_, in_);
    dxm.noalias() = dy * w;
    return dx;
  }

  void collect_params(const std::string& prefix,
                      std::vector<Param>& out) override {
    out.push_back({prefix + ".w", &w_, &gw_});
    out.push_back({prefix + ".b", &b_, &gb_});
  }

  double l2_penalty() const override {
    if (l2_ == 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < w_.size(); ++i) s += w_[i] * w_[i];
    return l2_ * s;
  }

  std::string kind() const override { return "dense"; }

  Tensor& weights() { return w_; }
  Tensor& bias() { return b_; }

 private:
  int in_, out_;
  double l2_;
  Tensor w_, b_, gw_, gb_;
  Tensor input_;
  int rows_ = 0;
};

}  // namespace agsense::nn
