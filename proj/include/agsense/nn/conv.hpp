#pragma once

#include <Eigen/Dense>

#include "agsense/nn/dense.hpp"
#include "agsense/nn/layer.hpp"

namespace agsense::nn {

enum class Padding { kSame, kValid };

inline int conv_output_extent(int in, int kernel, int stride, Padding pad) {
  if (pad == Padding::kSame) return (in + stride - 1) / stride;
  if (kernel > in)
    throw ValidationError("valid padding: kernel " + std::to_string(kernel) +
                          " exceeds input extent " + std::to_string(in));
  return (in - kernel) / stride + 1;
}

// Left pad under same padding; the surplus column goes on the right.
inline int pad_before(int in, int out, int kernel, int stride, Padding pad) {
  if (pad == Padding::kValid) return 0;
  int total = std::max(0, (out - 1) * stride + kernel - in);
  return total / 2;
}

// 1-D convolution over (C_in, L) -> (C_out, L_out), im2col + GEMM.
// Weights (C_out, C_in, K) flatten to a (C_out, C_in*K) matrix whose columns
// match the im2col row layout.
class Conv1dLayer : public Layer {
 public:
  Conv1dLayer(int c_in, int c_out, int kernel, int stride, Padding pad)
      : c_in_(c_in), c_out_(c_out), k_(kernel), stride_(stride), pad_(pad),
        w_({c_out, c_in, kernel}), b_({c_out}),
        gw_({c_out, c_in, kernel}), gb_({c_out}) {
    if (stride < 1) throw ValidationError("conv stride must be >= 1");
  }

  void init_params(Rng& rng) override {
    glorot_uniform(w_, c_in_ * k_, c_out_ * k_, rng);
    for (int i = 0; i < b_.size(); ++i) b_[i] = 0.0;
  }

  Tensor forward(const Tensor& in, Mode) override {
    if (in.rank() != 2 || in.dim(0) != c_in_)
      throw ValidationError("conv1d: expected (" + std::to_string(c_in_) +
                            ", L) input, got " + in.shape_string());
    len_ = in.dim(1);
    out_len_ = conv_output_extent(len_, k_, stride_, pad_);
    pad_before_ = pad_before(len_, out_len_, k_, stride_, pad_);
    ran_forward_ = true;

    cols_ = MatrixRM(c_in_ * k_, out_len_);
    cols_.setZero();
    const double* x = in.data();
    for (int c = 0; c < c_in_; ++c) {
      const double* xc = x + static_cast<std::size_t>(c) * len_;
      for (int t = 0; t < k_; ++t) {
        double* row = cols_.data() +
                      static_cast<std::size_t>(c * k_ + t) * out_len_;
        for (int j = 0; j < out_len_; ++j) {
          int src = j * stride_ - pad_before_ + t;
          row[j] = (src >= 0 && src < len_) ? xc[src] : 0.0;
        }
      }
    }

    Tensor out({c_out_, out_len_});
    ConstMapRM w(w_.data(), c_out_, c_in_ * k_);
    MapRM y(out.data(), c_out_, out_len_);
    y.noalias() = w * cols_;
    for (int f = 0; f < c_out_; ++f)
      for (int j = 0; j < out_len_; ++j) y(f, j) += b_[f];
    return out;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("conv1d");
    ConstMapRM dy(grad_out.data(), c_out_, out_len_);
    MapRM dw(gw_.data(), c_out_, c_in_ * k_);
    dw.noalias() += dy * cols_.transpose();
    for (int f = 0; f < c_out_; ++f) gb_[f] += dy.row(f).sum();

    ConstMapRM w(w_.data(), c_out_, c_in_ * k_);
    MatrixRM dcols = w.transpose() * dy;  // (C_in*K, L_out)

    Tensor dx({c_in_, len_});
    double* dxp = dx.data();
    for (int c = 0; c < c_in_; ++c) {
      double* dxc = dxp + static_cast<std::size_t>(c) * len_;
      for (int t = 0; t < k_; ++t) {
        const double* row = dcols.data() +
                            static_cast<std::size_t>(c * k_ + t) * out_len_;
        for (int j = 0; j < out_len_; ++j) {
          int src = j * stride_ - pad_before_ + t;
          if (src >= 0 && src < len_) dxc[src] += row[j];
        }
      }
    }
    return dx;
  }

  void collect_params(const std::string& prefix,
                      std::vector<Param>& out) override {
    out.push_back({prefix + ".w", &w_, &gw_});
    out.push_back({prefix + ".b", &b_, &gb_});
  }

  std::string kind() const override { return "conv1d"; }

  Tensor& weights() { return w_; }
  Tensor& bias() { return b_; }

 private:
  int c_in_, c_out_, k_, stride_;
  Padding pad_;
  Tensor w_, b_, gw_, gb_;
  MatrixRM cols_;
  int len_ = 0, out_len_ = 0, pad_before_ = 0;
};

// 2-D convolution over (C_in, H, W) -> (C_out, H_out, W_out).
class Conv2dLayer : public Layer {
 public:
  Conv2dLayer(int c_in, int c_out, int kernel, int stride, Padding pad)
      : c_in_(c_in), c_out_(c_out), k_(kernel), stride_(stride), pad_(pad),
        w_({c_out, c_in, kernel, kernel}), b_({c_out}),
        gw_({c_out, c_in, kernel, kernel}), gb_({c_out}) {
    if (stride < 1) throw ValidationError("conv stride must be >= 1");
  }

  void init_params(Rng& rng) override {
    glorot_uniform(w_, c_in_ * k_ * k_, c_out_ * k_ * k_, rng);
    for (int i = 0; i < b_.size(); ++i) b_[i] = 0.0;
  }

  Tensor forward(const Tensor& in, Mode) override {
    if (in.rank() != 3 || in.dim(0) != c_in_)
      throw ValidationError("conv2d: expected (" + std::to_string(c_in_) +
                            ", H, W) input, got " + in.shape_string());
    h_ = in.dim(1);
    w_in_ = in.dim(2);
    out_h_ = conv_output_extent(h_, k_, stride_, pad_);
    out_w_ = conv_output_extent(w_in_, k_, stride_, pad_);
    pad_h_ = pad_before(h_, out_h_, k_, stride_, pad_);
    pad_w_ = pad_before(w_in_, out_w_, k_, stride_, pad_);
    ran_forward_ = true;

    int patch = c_in_ * k_ * k_;
    int out_hw = out_h_ * out_w_;
    cols_ = MatrixRM(patch, out_hw);
    cols_.setZero();
    const double* x = in.data();
    for (int c = 0; c < c_in_; ++c) {
      const double* xc = x + static_cast<std::size_t>(c) * h_ * w_in_;
      for (int u = 0; u < k_; ++u) {
        for (int v = 0; v < k_; ++v) {
          double* row = cols_.data() +
                        static_cast<std::size_t>((c * k_ + u) * k_ + v) *
                            out_hw;
          for (int i = 0; i < out_h_; ++i) {
            int si = i * stride_ - pad_h_ + u;
            for (int j = 0; j < out_w_; ++j) {
              int sj = j * stride_ - pad_w_ + v;
              row[i * out_w_ + j] =
                  (si >= 0 && si < h_ && sj >= 0 && sj < w_in_)
                      ? xc[si * w_in_ + sj]
                      : 0.0;
            }
          }
        }
      }
    }

    Tensor out({c_out_, out_h_, out_w_});
    ConstMapRM wm(w_.data(), c_out_, patch);
    MapRM y(out.data(), c_out_, out_hw);
    y.noalias() = wm * cols_;
    for (int f = 0; f < c_out_; ++f)
      for (int j = 0; j < out_hw; ++j) y(f, j) += b_[f];
    return out;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("conv2d");
    int patch = c_in_ * k_ * k_;
    int out_hw = out_h_ * out_w_;
    ConstMapRM dy(grad_out.data(), c_out_, out_hw);
    MapRM dw(gw_.data(), c_out_, patch);
    dw.noalias() += dy * cols_.transpose();
    for (int f = 0; f < c_out_; ++f) gb_[f] += dy.row(f).sum();

    ConstMapRM wm(w_.data(), c_out_, patch);
    MatrixRM dcols = wm.transpose() * dy;

    Tensor dx({c_in_, h_, w_in_});
    double* dxp = dx.data();
    for (int c = 0; c < c_in_; ++c) {
      double* dxc = dxp + static_cast<std::size_t>(c) * h_ * w_in_;
      for (int u = 0; u < k_; ++u) {
        for (int v = 0; v < k_; ++v) {
          const double* row = dcols.data() +
                              static_cast<std::size_t>((c * k_ + u) * k_ + v) *
                                  out_hw;
          for (int i = 0; i < out_h_; ++i) {
            int si = i * stride_ - pad_h_ + u;
            if (si < 0 || si >= h_) continue;
            for (int j = 0; j < out_w_; ++j) {
              int sj = j * stride_ - pad_w_ + v;
              if (sj >= 0 && sj < w_in_) dxc[si * w_in_ + sj] += row[i * out_w_ + j];
            }
          }
        }
      }
    }
    return dx;
  }

  void collect_params(const std::string& prefix,
                      std::vector<Param>& out) override {
    out.push_back({prefix + ".w", &w_, &gw_});
    out.push_back({prefix + ".b", &b_, &gb_});
  }

  std::string kind() const override { return "conv2d"; }

  Tensor& weights() { return w_; }
  Tensor& bias() { return b_; }

 private:
  int c_in_, c_out_, k_, stride_;
  Padding pad_;
  Tensor w_, b_, gw_, gb_;
  MatrixRM cols_;
  int h_ = 0, w_in_ = 0, out_h_ = 0, out_w_ = 0, pad_h_ = 0, pad_w_ = 0;
};

}  // namespace agsense::nn
