#pragma once

#include <Eigen/Dense>

#include "agsense/nn/dense.hpp"
#include "agsense/nn/layer.hpp"

namespace agsense::nn {

// Standard LSTM over a (T, F) sequence. Gates use logistic squashing, the
// cell update and output use tanh; initial hidden/cell state is zero.
// Emits the per-step hidden states (T, H), or only the final step when
// return_sequences is false.
class LstmLayer : public Layer {
 public:
  LstmLayer(int in_features, int hidden, bool return_sequences = true)
      : f_(in_features), h_(hidden), return_sequences_(return_sequences),
        wx_({4 * hidden, in_features}), wh_({4 * hidden, hidden}),
        b_({4 * hidden}), gwx_({4 * hidden, in_features}),
        gwh_({4 * hidden, hidden}), gb_({4 * hidden}) {}

  void init_params(Rng& rng) override {
    glorot_uniform(wx_, f_, 4 * h_, rng);
    glorot_uniform(wh_, h_, 4 * h_, rng);
    for (int i = 0; i < b_.size(); ++i) b_[i] = 0.0;
  }

  Tensor forward(const Tensor& in, Mode) override {
    if (in.rank() != 2 || in.dim(1) != f_)
      throw ValidationError("lstm: expected (T, " + std::to_string(f_) +
                            ") input, got " + in.shape_string());
    steps_ = in.dim(0);
    input_ = in;
    ran_forward_ = true;

    using Vec = Eigen::VectorXd;
    ConstMapRM wx(wx_.data(), 4 * h_, f_);
    ConstMapRM wh(wh_.data(), 4 * h_, h_);

    gates_.assign(static_cast<std::size_t>(steps_), Vec(4 * h_));
    cells_.assign(static_cast<std::size_t>(steps_), Vec(h_));
    tanh_c_.assign(static_cast<std::size_t>(steps_), Vec(h_));
    hidden_.assign(static_cast<std::size_t>(steps_) + 1, Vec::Zero(h_));

    Vec c_prev = Vec::Zero(h_);
    Tensor seq({steps_, h_});
    for (int t = 0; t < steps_; ++t) {
      Eigen::Map<const Vec> xt(in.data() + static_cast<std::size_t>(t) * f_,
                               f_);
      Vec z = wx * xt + wh * hidden_[static_cast<std::size_t>(t)];
      for (int i = 0; i < 4 * h_; ++i) z[i] += b_[i];
      // gate order: input, forget, cell candidate, output
      for (int i = 0; i < h_; ++i) {
        z[i] = sigmoid(z[i]);
        z[h_ + i] = sigmoid(z[h_ + i]);
        z[2 * h_ + i] = std::tanh(z[2 * h_ + i]);
        z[3 * h_ + i] = sigmoid(z[3 * h_ + i]);
      }
      Vec c(h_), th(h_), hv(h_);
      for (int i = 0; i < h_; ++i) {
        c[i] = z[h_ + i] * c_prev[i] + z[i] * z[2 * h_ + i];
        th[i] = std::tanh(c[i]);
        hv[i] = z[3 * h_ + i] * th[i];
      }
      gates_[static_cast<std::size_t>(t)] = z;
      cells_[static_cast<std::size_t>(t)] = c;
      tanh_c_[static_cast<std::size_t>(t)] = th;
      hidden_[static_cast<std::size_t>(t) + 1] = hv;
      c_prev = c;
      for (int i = 0; i < h_; ++i) seq[t * h_ + i] = hv[i];
    }
    if (return_sequences_) return seq;
    Tensor last({h_});
    for (int i = 0; i < h_; ++i) last[i] = seq[(steps_ - 1) * h_ + i];
    return last;
  }

  Tensor backward(const Tensor& grad_out) override {
    require_forward("lstm");
    using Vec = Eigen::VectorXd;
    ConstMapRM wx(wx_.data(), 4 * h_, f_);
    ConstMapRM wh(wh_.data(), 4 * h_, h_);
    MapRM dwx(gwx_.data(), 4 * h_, f_);
    MapRM dwh(gwh_.data(), 4 * h_, h_);

    Tensor dx({steps_, f_});
    Vec dh_next = Vec::Zero(h_);
    Vec dc_next = Vec::Zero(h_);
    for (int t = steps_ - 1; t >= 0; --t) {
      const Vec& z = gates_[static_cast<std::size_t>(t)];
      const Vec& th = tanh_c_[static_cast<std::size_t>(t)];
      const Vec& c_prev = t > 0 ? cells_[static_cast<std::size_t>(t) - 1]
                                : zero_state();
      Vec dh = dh_next;
      if (return_sequences_) {
        for (int i = 0; i < h_; ++i) dh[i] += grad_out[t * h_ + i];
      } else if (t == steps_ - 1) {
        for (int i = 0; i < h_; ++i) dh[i] += grad_out[i];
      }
      Vec dz(4 * h_);
      Vec dc(h_);
      for (int i = 0; i < h_; ++i) {
        double o = z[3 * h_ + i];
        dc[i] = dh[i] * o * (1.0 - th[i] * th[i]) + dc_next[i];
        double gi = z[i], gf = z[h_ + i], gg = z[2 * h_ + i];
        dz[i] = dc[i] * gg * gi * (1.0 - gi);
        dz[h_ + i] = dc[i] * c_prev[i] * gf * (1.0 - gf);
        dz[2 * h_ + i] = dc[i] * gi * (1.0 - gg * gg);
        dz[3 * h_ + i] = dh[i] * th[i] * o * (1.0 - o);
        dc_next[i] = dc[i] * gf;
      }
      Eigen::Map<const Vec> xt(
          input_.data() + static_cast<std::size_t>(t) * f_, f_);
      dwx.noalias() += dz * xt.transpose();
      dwh.noalias() += dz * hidden_[static_cast<std::size_t>(t)].transpose();
      for (int i = 0; i < 4 * h_; ++i) gb_[i] += dz[i];
      Eigen::Map<Vec> dxt(dx.data() + static_cast<std::size_t>(t) * f_, f_);
      dxt.noalias() = wx.transpose() * dz;
      dh_next.noalias() = wh.transpose() * dz;
    }
    return dx;
  }

  void collect_params(const std::string& prefix,
                      std::vector<Param>& out) override {
    out.push_back({prefix + ".wx", &wx_, &gwx_});
    out.push_back({prefix + ".wh", &wh_, &gwh_});
    out.push_back({prefix + ".b", &b_, &gb_});
  }

  std::string kind() const override { return "lstm"; }

  Tensor& weights_input() { return wx_; }
  Tensor& weights_hidden() { return wh_; }
  Tensor& bias() { return b_; }

 private:
  static double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }
  const Eigen::VectorXd& zero_state() {
    if (zero_.size() != h_) zero_ = Eigen::VectorXd::Zero(h_);
    return zero_;
  }

  int f_, h_;
  bool return_sequences_;
  Tensor wx_, wh_, b_, gwx_, gwh_, gb_;
  Tensor input_;
  int steps_ = 0;
  std::vector<Eigen::VectorXd> gates_, cells_, tanh_c_, hidden_;
  Eigen::VectorXd zero_;
};

}  // namespace agsense::nn
