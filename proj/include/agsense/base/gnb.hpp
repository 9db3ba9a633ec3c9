#pragma once

#include <cmath>

#include "agsense/base/classifier.hpp"
#include "agsense/io/container.hpp"

namespace agsense::base {

// Gaussian naive Bayes: per-class feature means and variances (floored at
// 1e-9), posterior from the product of univariate likelihoods in log space.
class GaussianNb : public BaseClassifier {
 public:
  static constexpr double kVarianceFloor = 1e-9;

  static GaussianNb fit(const Eigen::MatrixXd& x, const std::vector<int>& y) {
    require_both_classes(y, "gnb");
    GaussianNb m;
    Eigen::Index d = x.cols();
    for (int c = 0; c < 2; ++c) {
      m.mean_[c] = Eigen::VectorXd::Zero(d);
      m.var_[c] = Eigen::VectorXd::Zero(d);
    }
    std::array<long, 2> counts{0, 0};
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      int c = y[static_cast<std::size_t>(i)];
      m.mean_[c] += x.row(i).transpose();
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < 2; ++c) m.mean_[c] /= static_cast<double>(counts[c]);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      int c = y[static_cast<std::size_t>(i)];
      Eigen::VectorXd diff = x.row(i).transpose() - m.mean_[c];
      m.var_[c] += diff.cwiseProduct(diff);
    }
    for (int c = 0; c < 2; ++c) {
      m.var_[c] /= static_cast<double>(counts[c]);
      m.var_[c] = m.var_[c].cwiseMax(kVarianceFloor);
      m.log_prior_[c] = std::log(static_cast<double>(counts[c]) /
                                 static_cast<double>(x.rows()));
    }
    return m;
  }

  std::string id() const override { return "nb"; }

  BaseClassifierOutput predict(const Eigen::VectorXd& x) const override {
    double log_post[2];
    for (int c = 0; c < 2; ++c) {
      double lp = log_prior_[c];
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        double v = var_[c][j];
        double diff = x[j] - mean_[c][j];
        lp += -0.5 * std::log(2.0 * M_PI * v) - diff * diff / (2.0 * v);
      }
      log_post[c] = lp;
    }
    double mx = std::max(log_post[0], log_post[1]);
    double e0 = std::exp(log_post[0] - mx), e1 = std::exp(log_post[1] - mx);
    return make_output(id(), e1 / (e0 + e1));
  }

  const Eigen::VectorXd& mean(int c) const { return mean_[c]; }
  const Eigen::VectorXd& variance(int c) const { return var_[c]; }

  void store(io::Container& c, const std::string& prefix) const {
    for (int cls = 0; cls < 2; ++cls) {
      c.put(prefix + "mean" + std::to_string(cls), to_tensor(mean_[cls]));
      c.put(prefix + "var" + std::to_string(cls), to_tensor(var_[cls]));
    }
    c.put(prefix + "log_prior",
          nn::Tensor({2}, {log_prior_[0], log_prior_[1]}));
  }

  static GaussianNb load(const io::Container& c, const std::string& prefix) {
    GaussianNb m;
    for (int cls = 0; cls < 2; ++cls) {
      m.mean_[cls] = from_tensor(c.get(prefix + "mean" + std::to_string(cls)));
      m.var_[cls] = from_tensor(c.get(prefix + "var" + std::to_string(cls)));
    }
    const nn::Tensor& lp = c.get(prefix + "log_prior");
    m.log_prior_[0] = lp[0];
    m.log_prior_[1] = lp[1];
    return m;
  }

  static nn::Tensor to_tensor(const Eigen::VectorXd& v) {
    nn::Tensor t({static_cast<int>(v.size())});
    for (Eigen::Index i = 0; i < v.size(); ++i) t[static_cast<int>(i)] = v[i];
    return t;
  }

  static Eigen::VectorXd from_tensor(const nn::Tensor& t) {
    Eigen::VectorXd v(t.size());
    for (int i = 0; i < t.size(); ++i) v[i] = t[i];
    return v;
  }

 private:
  std::array<Eigen::VectorXd, 2> mean_, var_;
  std::array<double, 2> log_prior_{0.0, 0.0};
};

}  // namespace agsense::base
