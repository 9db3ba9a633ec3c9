#pragma once

#include <limits>

#include "agsense/nn/conv.hpp"
#include "agsense/nn/layer.hpp"

namespace agsense::nn {

enum class PoolKind { kMax, kMean };

// 1-D pooling over (C, L). Max pooling records argmax positions for the
// backward pass; mean pooling averages the in-bounds window cells.
class Pool1dLayer : public Layer {
 public:
  Pool1dLayer(PoolKind kind, int size, int stride, Padding pad)
      : kind_(kind), size_(size), stride_(stride), pad_(pad) {
    if (size < 1 || stride < 1)
      throw ValidationError("pooling size and stride must be >= 1");
  }

  Tensor forward(const Tensor& in, Mode) override {
    if (in.rank() != 2) throw ValidationError("pool1d expects (C, L)");
    channels_ = in.dim(0);
    len_ = in.dim(1);
    out_len_ = conv_output_extent(len_, size_, stride_, pad_);
    int pb = pad_before(len_, out_len_, size_, stride_, pad_);
    ran_forward_ = true;

    Tensor out({channels_, out_len_});
    argmax_.assign(static_cast<std::size_t>(channels_) * out_len_, -1);
    counts_.assign(static_cast<std::size_t>(channels_) * out_len_, 0);
    for (int c = 0; c < channels_; ++c) {
      const double* xc = in.data() + static_cast<std::size_t>(c) * len_;
      for (int j = 0; j < out_len_; ++j) {
        int start = j * stride_ - pb;
        double best = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        int best_idx = -1, n = 0;
        for (int t = 0; t < size_; ++t) {
          int src = start + t;
          if (src < 0 || src >= len_) continue;
          ++n;
          sum += xc[src];
          if (xc[src] > best) {
            best = xc[src];
            best_idx = src;
          }
        }
        std::size_t o = static_cast<std::size_t>(c) * out_len_ + j;
        argmax_[o] = best_idx;
        counts_[o] = n;
        out[static_cast<int>(o)] = kind_ == PoolKind::kMax ? best : sum / n;
      }
    }
    return out;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("pool1d");
    Tensor dx({channels_, len_});
    for (int c = 0; c < channels_; ++c) {
      double* dxc = dx.data() + static_cast<std::size_t>(c) * len_;
      for (int j = 0; j < out_len_; ++j) {
        std::size_t o = static_cast<std::size_t>(c) * out_len_ + j;
        double g = grad_out[static_cast<int>(o)];
        if (kind_ == PoolKind::kMax) {
          dxc[argmax_[o]] += g;
        } else {
          int pb = pad_before(len_, out_len_, size_, stride_, pad_);
          int start = j * stride_ - pb;
          double share = g / counts_[o];
          for (int t = 0; t < size_; ++t) {
            int src = start + t;
            if (src >= 0 && src < len_) dxc[src] += share;
          }
        }
      }
    }
    return dx;
  }

  std::string kind() const override { return "pool1d"; }

 private:
  PoolKind kind_;
  int size_, stride_;
  Padding pad_;
  int channels_ = 0, len_ = 0, out_len_ = 0;
  std::vector<int> argmax_;
  std::vector<int> counts_;
};

// 2-D pooling over (C, H, W) with a square window.
class Pool2dLayer : public Layer {
 public:
  Pool2dLayer(PoolKind kind, int size, int stride, Padding pad)
      : kind_(kind), size_(size), stride_(stride), pad_(pad) {
    if (size < 1 || stride < 1)
      throw ValidationError("pooling size and stride must be >= 1");
  }

  Tensor forward(const Tensor& in, Mode) override {
    if (in.rank() != 3) throw ValidationError("pool2d expects (C, H, W)");
    channels_ = in.dim(0);
    h_ = in.dim(1);
    w_ = in.dim(2);
    out_h_ = conv_output_extent(h_, size_, stride_, pad_);
    out_w_ = conv_output_extent(w_, size_, stride_, pad_);
    pad_h_ = pad_before(h_, out_h_, size_, stride_, pad_);
    pad_w_ = pad_before(w_, out_w_, size_, stride_, pad_);
    ran_forward_ = true;

    Tensor out({channels_, out_h_, out_w_});
    std::size_t cells = static_cast<std::size_t>(channels_) * out_h_ * out_w_;
    argmax_.assign(cells, -1);
    counts_.assign(cells, 0);
    std::size_t o = 0;
    for (int c = 0; c < channels_; ++c) {
      const double* xc = in.data() + static_cast<std::size_t>(c) * h_ * w_;
      for (int i = 0; i < out_h_; ++i) {
        for (int j = 0; j < out_w_; ++j, ++o) {
          double best = -std::numeric_limits<double>::infinity();
          double sum = 0.0;
          int best_idx = -1, n = 0;
          for (int u = 0; u < size_; ++u) {
            int si = i * stride_ - pad_h_ + u;
            if (si < 0 || si >= h_) continue;
            for (int v = 0; v < size_; ++v) {
              int sj = j * stride_ - pad_w_ + v;
              if (sj < 0 || sj >= w_) continue;
              double val = xc[si * w_ + sj];
              ++n;
              sum += val;
              if (val > best) {
                best = val;
                best_idx = si * w_ + sj;
              }
            }
          }
          argmax_[o] = best_idx;
          counts_[o] = n;
          out[static_cast<int>(o)] = kind_ == PoolKind::kMax ? best : sum / n;
        }
      }
    }
    return out;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("pool2d");
    Tensor dx({channels_, h_, w_});
    std::size_t o = 0;
    for (int c = 0; c < channels_; ++c) {
      double* dxc = dx.data() + static_cast<std::size_t>(c) * h_ * w_;
      for (int i = 0; i < out_h_; ++i) {
        for (int j = 0; j < out_w_; ++j, ++o) {
          double g = grad_out[static_cast<int>(o)];
          if (kind_ == PoolKind::kMax) {
            dxc[argmax_[o]] += g;
          } else {
            double share = g / counts_[o];
            for (int u = 0; u < size_; ++u) {
              int si = i * stride_ - pad_h_ + u;
              if (si < 0 || si >= h_) continue;
              for (int v = 0; v < size_; ++v) {
                int sj = j * stride_ - pad_w_ + v;
                if (sj >= 0 && sj < w_) dxc[si * w_ + sj] += share;
              }
            }
          }
        }
      }
    }
    return dx;
  }

  std::string kind() const override { return "pool2d"; }

 private:
  PoolKind kind_;
  int size_, stride_;
  Padding pad_;
  int channels_ = 0, h_ = 0, w_ = 0, out_h_ = 0, out_w_ = 0;
  int pad_h_ = 0, pad_w_ = 0;
  std::vector<int> argmax_;
  std::vector<int> counts_;
};

// Nearest-neighbour upsampling (C, H, W) -> (C, f*H, f*W).
class Upsample2dLayer : public Layer {
 public:
  explicit Upsample2dLayer(int factor) : factor_(factor) {
    if (factor < 1) throw ValidationError("upsample factor must be >= 1");
  }

  Tensor forward(const Tensor& in, Mode) override {
    if (in.rank() != 3) throw ValidationError("upsample2d expects (C, H, W)");
    channels_ = in.dim(0);
    h_ = in.dim(1);
    w_ = in.dim(2);
    ran_forward_ = true;
    int oh = h_ * factor_, ow = w_ * factor_;
    Tensor out({channels_, oh, ow});
    for (int c = 0; c < channels_; ++c) {
      const double* xc = in.data() + static_cast<std::size_t>(c) * h_ * w_;
      double* yc = out.data() + static_cast<std::size_t>(c) * oh * ow;
      for (int i = 0; i < oh; ++i)
        for (int j = 0; j < ow; ++j)
          yc[i * ow + j] = xc[(i / factor_) * w_ + (j / factor_)];
    }
    return out;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("upsample2d");
    int oh = h_ * factor_, ow = w_ * factor_;
    Tensor dx({channels_, h_, w_});
    for (int c = 0; c < channels_; ++c) {
      const double* gc = grad_out.data() + static_cast<std::size_t>(c) * oh * ow;
      double* dxc = dx.data() + static_cast<std::size_t>(c) * h_ * w_;
      for (int i = 0; i < oh; ++i)
        for (int j = 0; j < ow; ++j)
          dxc[(i / factor_) * w_ + (j / factor_)] += gc[i * ow + j];
    }
    return dx;
  }

  std::string kind() const override { return "upsample2d"; }

 private:
  int factor_;
  int channels_ = 0, h_ = 0, w_ = 0;
};

}  // namespace agsense::nn
