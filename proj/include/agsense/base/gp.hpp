#pragma once

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>

#include "agsense/base/classifier.hpp"
#include "agsense/io/container.hpp"

namespace agsense::base {

struct GpConfig {
  double sigma0_sq = 1.0;  // dot-product kernel offset
  double noise = 1e-6;     // diagonal jitter
  double grad_tol = 1e-6;
  int max_newton = 100;
  int max_n = 2000;  // dense solves only make sense at desk scale
};

// Binary GP classification with a dot-product kernel and logistic
// likelihood. The latent posterior mode comes from Newton iterations on the
// standard stabilised system (Cholesky of I + W^1/2 K W^1/2); predictions
// integrate the logistic over the latent Gaussian with the probit
// approximation.
class GpClassifier : public BaseClassifier {
 public:
  static GpClassifier fit(const Eigen::MatrixXd& x,
                          const std::vector<int>& y01,
                          const GpConfig& config = GpConfig{}) {
    require_both_classes(y01, "gp");
    if (x.rows() > config.max_n)
      throw ValidationError("gp: " + std::to_string(x.rows()) +
                            " samples exceed the dense-solve cap of " +
                            std::to_string(config.max_n));
    GpClassifier m;
    m.config_ = config;
    m.x_ = x;
    Eigen::Index n = x.rows();
    m.t_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
      m.t_[i] = y01[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0;

    Eigen::MatrixXd k = x * x.transpose();
    k.array() += config.sigma0_sq;
    k.diagonal().array() += config.noise;
    m.k_ = k;
    m.find_mode();
    return m;
  }

  std::string id() const override { return "gp"; }

  BaseClassifierOutput predict(const Eigen::VectorXd& q) const override {
    Eigen::Index n = x_.rows();
    Eigen::VectorXd k_star = x_ * q;
    k_star.array() += config_.sigma0_sq;
    double k_ss = q.dot(q) + config_.sigma0_sq + config_.noise;

    double mean = k_star.dot(grad_at_mode_);
    Eigen::VectorXd v =
        l_.triangularView<Eigen::Lower>().solve(sqrt_w_.asDiagonal() * k_star);
    double var = k_ss - v.squaredNorm();
    if (var < 0.0) var = 0.0;
    (void)n;
    double z = mean / std::sqrt(1.0 + M_PI * var / 8.0);
    double p1 = 1.0 / (1.0 + std::exp(-z));
    return make_output(id(), p1);
  }

  const Eigen::VectorXd& mode() const { return f_; }
  const Eigen::MatrixXd& kernel_matrix() const { return k_; }

  void store(io::Container& c, const std::string& prefix) const {
    nn::Tensor xt({static_cast<int>(x_.rows()), static_cast<int>(x_.cols())});
    for (Eigen::Index i = 0; i < x_.rows(); ++i)
      for (Eigen::Index j = 0; j < x_.cols(); ++j)
        xt[static_cast<int>(i * x_.cols() + j)] = x_(i, j);
    c.put(prefix + "train_x", xt);
    nn::Tensor tt({static_cast<int>(t_.size())});
    for (Eigen::Index i = 0; i < t_.size(); ++i)
      tt[static_cast<int>(i)] = t_[i];
    c.put(prefix + "targets", tt);
    c.put(prefix + "scalars",
          nn::Tensor({2}, {config_.sigma0_sq, config_.noise}));
  }

  static GpClassifier load(const io::Container& c, const std::string& prefix) {
    GpClassifier m;
    const nn::Tensor& xt = c.get(prefix + "train_x");
    m.x_.resize(xt.dim(0), xt.dim(1));
    for (int i = 0; i < xt.dim(0); ++i)
      for (int j = 0; j < xt.dim(1); ++j) m.x_(i, j) = xt[i * xt.dim(1) + j];
    const nn::Tensor& tt = c.get(prefix + "targets");
    m.t_.resize(tt.size());
    for (int i = 0; i < tt.size(); ++i) m.t_[i] = tt[i];
    const nn::Tensor& s = c.get(prefix + "scalars");
    m.config_.sigma0_sq = s[0];
    m.config_.noise = s[1];
    Eigen::MatrixXd k = m.x_ * m.x_.transpose();
    k.array() += m.config_.sigma0_sq;
    k.diagonal().array() += m.config_.noise;
    m.k_ = k;
    m.find_mode();  // deterministic reconstruction of the mode state
    return m;
  }

 private:
  void find_mode() {
    Eigen::Index n = x_.rows();
    f_ = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    std::vector<double> objective_trace;

    for (int iter = 0; iter < config_.max_newton; ++iter) {
      Eigen::VectorXd pi(n), grad(n), w(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        pi[i] = 1.0 / (1.0 + std::exp(-f_[i]));
        grad[i] = t_[i] - pi[i];
        w[i] = std::max(pi[i] * (1.0 - pi[i]), 1e-12);
      }
      double grad_norm = (grad - a).norm();
      objective_trace.push_back(objective(f_, a));
      if (grad_norm < config_.grad_tol) {
        grad_at_mode_ = grad;
        sqrt_w_ = w.cwiseSqrt();
        Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
        b += sqrt_w_.asDiagonal() * k_ * sqrt_w_.asDiagonal();
        l_ = b.llt().matrixL();
        return;
      }

      sqrt_w_ = w.cwiseSqrt();
      Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
      b += sqrt_w_.asDiagonal() * k_ * sqrt_w_.asDiagonal();
      Eigen::LLT<Eigen::MatrixXd> llt(b);
      if (llt.info() != Eigen::Success)
        throw NumericalError("gp: Cholesky failure during Newton");
      Eigen::VectorXd rhs = w.cwiseProduct(f_) + grad;
      Eigen::VectorXd inner = sqrt_w_.cwiseProduct(k_ * rhs);
      Eigen::VectorXd solved = llt.solve(inner);
      a = rhs - sqrt_w_.cwiseProduct(solved);
      f_ = k_ * a;
    }
    std::ostringstream trace;
    trace << "gp: Newton did not reach gradient tolerance "
          << config_.grad_tol << " in " << config_.max_newton
          << " iterations; objective trace:";
    for (double v : objective_trace) trace << ' ' << v;
    throw NumericalError(trace.str());
  }

  // log p(y|f) - 0.5 f' K^-1 f, using a = K^-1 f
  double objective(const Eigen::VectorXd& f, const Eigen::VectorXd& a) const {
    double loglik = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      double z = f[i];
      // log sigma(z) for t=1, log(1 - sigma(z)) for t=0, stable form
      double log_sig = z >= 0.0 ? -std::log1p(std::exp(-z))
                                : z - std::log1p(std::exp(z));
      double log_one_minus = log_sig - z;
      loglik += t_[i] * log_sig + (1.0 - t_[i]) * log_one_minus;
    }
    return loglik - 0.5 * f.dot(a);
  }

  Eigen::MatrixXd x_;
  Eigen::VectorXd t_;  // targets in {0,1}
  Eigen::MatrixXd k_;
  Eigen::VectorXd f_;
  Eigen::VectorXd grad_at_mode_;
  Eigen::VectorXd sqrt_w_;
  Eigen::MatrixXd l_;
  GpConfig config_;
};

}  // namespace agsense::base
