#pragma once

#include <cmath>

#include "agsense/base/classifier.hpp"
#include "agsense/io/container.hpp"

namespace agsense::base {

enum class SvmKernel { kRbf, kLinear };

struct SvmConfig {
  double c = 10.0;
  SvmKernel kernel = SvmKernel::kRbf;
  double gamma = 0.0;  // 0 = auto: 1 / (dims * mean feature variance)
  double tol = 1e-3;
  long max_passes = 20000;  // examine-all sweeps before giving up
};

// Soft-margin SVM trained by sequential minimal optimization on the dual;
// probabilities by logistic calibration of the decision values fitted on
// the training outputs. Deterministic: the first working-set index is
// scanned in order, the second maximizes |E1 - E2| with an index tie-break.
class Svm : public BaseClassifier {
 public:
  static Svm fit(const Eigen::MatrixXd& x, const std::vector<int>& y01,
                 const SvmConfig& config = SvmConfig{}) {
    require_both_classes(y01, "svm");
    Svm m;
    m.config_ = config;
    if (m.config_.gamma <= 0.0) {
      double var = 0.0;
      Eigen::VectorXd mean = x.colwise().mean();
      for (Eigen::Index i = 0; i < x.rows(); ++i)
        var += (x.row(i).transpose() - mean).squaredNorm();
      var /= static_cast<double>(x.rows()) * static_cast<double>(x.cols());
      m.config_.gamma = var > 0.0
                            ? 1.0 / (static_cast<double>(x.cols()) * var)
                            : 1.0;
    }
    m.x_ = x;
    m.y_.resize(static_cast<std::size_t>(x.rows()));
    for (std::size_t i = 0; i < m.y_.size(); ++i)
      m.y_[i] = y01[i] == 1 ? 1.0 : -1.0;
    m.solve_dual();
    m.fit_calibration();
    return m;
  }

  std::string id() const override { return "svm"; }

  double decision_value(const Eigen::VectorXd& q) const {
    double f = -b_;
    for (Eigen::Index i = 0; i < x_.rows(); ++i) {
      double a = alpha_[static_cast<std::size_t>(i)];
      if (a > 0.0)
        f += a * y_[static_cast<std::size_t>(i)] *
             kernel(x_.row(i).transpose(), q);
    }
    return f;
  }

  BaseClassifierOutput predict(const Eigen::VectorXd& q) const override {
    double f = decision_value(q);
    double p1 = 1.0 / (1.0 + std::exp(platt_a_ * f + platt_b_));
    return make_output(id(), p1);
  }

  // dual objective at the solution
  double dual_objective() const {
    double obj = 0.0;
    Eigen::Index n = x_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      double ai = alpha_[static_cast<std::size_t>(i)];
      if (ai == 0.0) continue;
      obj += ai;
      for (Eigen::Index j = 0; j < n; ++j) {
        double aj = alpha_[static_cast<std::size_t>(j)];
        if (aj == 0.0) continue;
        obj -= 0.5 * ai * aj * y_[static_cast<std::size_t>(i)] *
               y_[static_cast<std::size_t>(j)] * kernel_cache_(i, j);
      }
    }
    return obj;
  }

  const std::vector<double>& alphas() const { return alpha_; }
  double bias() const { return b_; }
  const SvmConfig& config() const { return config_; }
  double platt_a() const { return platt_a_; }
  double platt_b() const { return platt_b_; }
  // decision value for training row i, from the cached kernel
  double training_decision(Eigen::Index i) const { return f_cache_[i] - b_; }

  void store(io::Container& c, const std::string& prefix) const {
    nn::Tensor xt({static_cast<int>(x_.rows()), static_cast<int>(x_.cols())});
    for (Eigen::Index i = 0; i < x_.rows(); ++i)
      for (Eigen::Index j = 0; j < x_.cols(); ++j)
        xt[static_cast<int>(i * x_.cols() + j)] = x_(i, j);
    c.put(prefix + "train_x", xt);
    nn::Tensor yt({static_cast<int>(y_.size())});
    for (std::size_t i = 0; i < y_.size(); ++i)
      yt[static_cast<int>(i)] = y_[i];
    c.put(prefix + "train_y", yt);
    nn::Tensor at({static_cast<int>(alpha_.size())});
    for (std::size_t i = 0; i < alpha_.size(); ++i)
      at[static_cast<int>(i)] = alpha_[i];
    c.put(prefix + "alpha", at);
    c.put(prefix + "scalars",
          nn::Tensor({6}, {b_, platt_a_, platt_b_, config_.c, config_.gamma,
                           config_.kernel == SvmKernel::kRbf ? 0.0 : 1.0}));
  }

  static Svm load(const io::Container& c, const std::string& prefix) {
    Svm m;
    const nn::Tensor& xt = c.get(prefix + "train_x");
    m.x_.resize(xt.dim(0), xt.dim(1));
    for (int i = 0; i < xt.dim(0); ++i)
      for (int j = 0; j < xt.dim(1); ++j) m.x_(i, j) = xt[i * xt.dim(1) + j];
    const nn::Tensor& yt = c.get(prefix + "train_y");
    m.y_.assign(yt.data(), yt.data() + yt.size());
    const nn::Tensor& at = c.get(prefix + "alpha");
    m.alpha_.assign(at.data(), at.data() + at.size());
    const nn::Tensor& s = c.get(prefix + "scalars");
    m.b_ = s[0];
    m.platt_a_ = s[1];
    m.platt_b_ = s[2];
    m.config_.c = s[3];
    m.config_.gamma = s[4];
    m.config_.kernel = s[5] == 0.0 ? SvmKernel::kRbf : SvmKernel::kLinear;
    return m;
  }

 private:
  double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    if (config_.kernel == SvmKernel::kLinear) return a.dot(b);
    return std::exp(-config_.gamma * (a - b).squaredNorm());
  }

  // f_i = sum_j alpha_j y_j K(i, j), maintained incrementally; the decision
  // value is f_i - b.
  void solve_dual() {
    Eigen::Index n = x_.rows();
    kernel_cache_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) {
        double v = kernel(x_.row(i).transpose(), x_.row(j).transpose());
        kernel_cache_(i, j) = v;
        kernel_cache_(j, i) = v;
      }
    alpha_.assign(static_cast<std::size_t>(n), 0.0);
    f_cache_ = Eigen::VectorXd::Zero(n);
    b_ = 0.0;

    bool examine_all = true;
    long passes = 0;
    while (passes < config_.max_passes) {
      int changed = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!examine_all) {
          double a = alpha_[static_cast<std::size_t>(i)];
          if (a <= 0.0 || a >= config_.c) continue;
        }
        changed += examine(i);
      }
      ++passes;
      if (examine_all) {
        if (changed == 0) return;  // KKT satisfied everywhere within tol
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    throw NumericalError("svm: SMO did not converge within " +
                         std::to_string(config_.max_passes) +
                         " passes (tol " + std::to_string(config_.tol) + ")");
  }

  int examine(Eigen::Index i2) {
    Eigen::Index n = x_.rows();
    double y2 = y_[static_cast<std::size_t>(i2)];
    double a2 = alpha_[static_cast<std::size_t>(i2)];
    double e2 = f_cache_[i2] - b_ - y2;
    double r2 = e2 * y2;
    bool violates = (r2 < -config_.tol && a2 < config_.c) ||
                    (r2 > config_.tol && a2 > 0.0);
    if (!violates) return 0;

    // second choice: largest |e1 - e2| among non-bound, lowest index wins
    Eigen::Index best = -1;
    double best_gap = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double a = alpha_[static_cast<std::size_t>(i)];
      if (a <= 0.0 || a >= config_.c) continue;
      double gap = std::abs((f_cache_[i] - b_ - y_[static_cast<std::size_t>(i)]) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best >= 0 && best != i2 && take_step(best, i2)) return 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      double a = alpha_[static_cast<std::size_t>(i)];
      if (a <= 0.0 || a >= config_.c) continue;
      if (i != i2 && take_step(i, i2)) return 1;
    }
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != i2 && take_step(i, i2)) return 1;
    return 0;
  }

  bool take_step(Eigen::Index i1, Eigen::Index i2) {
    double a1 = alpha_[static_cast<std::size_t>(i1)];
    double a2 = alpha_[static_cast<std::size_t>(i2)];
    double y1 = y_[static_cast<std::size_t>(i1)];
    double y2 = y_[static_cast<std::size_t>(i2)];
    double e1 = f_cache_[i1] - b_ - y1;
    double e2 = f_cache_[i2] - b_ - y2;
    double s = y1 * y2;

    double lo, hi;
    if (s < 0.0) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(config_.c, config_.c + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - config_.c);
      hi = std::min(config_.c, a1 + a2);
    }
    if (lo >= hi) return false;

    double k11 = kernel_cache_(i1, i1);
    double k12 = kernel_cache_(i1, i2);
    double k22 = kernel_cache_(i2, i2);
    double eta = k11 + k22 - 2.0 * k12;

    double a2_new;
    if (eta > 0.0) {
      a2_new = a2 + y2 * (e1 - e2) / eta;
      a2_new = std::clamp(a2_new, lo, hi);
    } else {
      // flat direction: evaluate the objective at both clip ends
      double f1 = y1 * (e1 + b_) - a1 * k11 - s * a2 * k12;
      double f2 = y2 * (e2 + b_) - s * a1 * k12 - a2 * k22;
      double l1 = a1 + s * (a2 - lo);
      double h1 = a1 + s * (a2 - hi);
      double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                      0.5 * lo * lo * k22 + s * lo * l1 * k12;
      double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                      0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (obj_lo < obj_hi - 1e-12)
        a2_new = lo;
      else if (obj_lo > obj_hi + 1e-12)
        a2_new = hi;
      else
        return false;
    }
    if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;
    double a1_new = a1 + s * (a2 - a2_new);

    // keep numbers exactly on the box bounds
    if (a1_new < 1e-12) a1_new = 0.0;
    if (a1_new > config_.c - 1e-12) a1_new = config_.c;
    if (a2_new < 1e-12) a2_new = 0.0;
    if (a2_new > config_.c - 1e-12) a2_new = config_.c;

    double d1 = y1 * (a1_new - a1);
    double d2 = y2 * (a2_new - a2);
    double b1 = e1 + d1 * k11 + d2 * k12 + b_;
    double b2 = e2 + d1 * k12 + d2 * k22 + b_;
    double b_new;
    if (a1_new > 0.0 && a1_new < config_.c)
      b_new = b1;
    else if (a2_new > 0.0 && a2_new < config_.c)
      b_new = b2;
    else
      b_new = 0.5 * (b1 + b2);

    alpha_[static_cast<std::size_t>(i1)] = a1_new;
    alpha_[static_cast<std::size_t>(i2)] = a2_new;
    f_cache_ += d1 * kernel_cache_.col(i1) + d2 * kernel_cache_.col(i2);
    b_ = b_new;
    return true;
  }

  // logistic calibration of decision values on the training set, with the
  // usual smoothed targets; Newton with backtracking
  void fit_calibration() {
    Eigen::Index n = x_.rows();
    long n_pos = 0, n_neg = 0;
    for (double v : y_) (v > 0.0 ? n_pos : n_neg)++;
    double t_pos = (static_cast<double>(n_pos) + 1.0) /
                   (static_cast<double>(n_pos) + 2.0);
    double t_neg = 1.0 / (static_cast<double>(n_neg) + 2.0);

    std::vector<double> f(static_cast<std::size_t>(n)), t(f.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      f[static_cast<std::size_t>(i)] = f_cache_[i] - b_;
      t[static_cast<std::size_t>(i)] =
          y_[static_cast<std::size_t>(i)] > 0.0 ? t_pos : t_neg;
    }

    double a = 0.0;
    double b = std::log((static_cast<double>(n_neg) + 1.0) /
                        (static_cast<double>(n_pos) + 1.0));
    auto nll = [&](double aa, double bb) {
      double v = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        double z = aa * f[i] + bb;
        // stable log(1+exp(.)) split
        if (z >= 0.0)
          v += t[i] * z + std::log(1.0 + std::exp(-z));
        else
          v += (t[i] - 1.0) * z + std::log(1.0 + std::exp(z));
      }
      return v;
    };

    double cur = nll(a, b);
    for (int iter = 0; iter < 100; ++iter) {
      double g_a = 0.0, g_b = 0.0, h_aa = 1e-12, h_ab = 0.0, h_bb = 1e-12;
      for (std::size_t i = 0; i < f.size(); ++i) {
        double z = a * f[i] + b;
        double p = 1.0 / (1.0 + std::exp(z));  // P(y=1 | f)
        double d = t[i] - p;  // dNLL/dz
        g_a += d * f[i];
        g_b += d;
        double w = p * (1.0 - p);
        h_aa += w * f[i] * f[i];
        h_ab += w * f[i];
        h_bb += w;
      }
      if (std::abs(g_a) < 1e-10 && std::abs(g_b) < 1e-10) break;
      double det = h_aa * h_bb - h_ab * h_ab;
      double da = -(h_bb * g_a - h_ab * g_b) / det;
      double db = -(-h_ab * g_a + h_aa * g_b) / det;
      double step = 1.0;
      while (step > 1e-10) {
        double trial = nll(a + step * da, b + step * db);
        if (trial < cur + 1e-12) {
          a += step * da;
          b += step * db;
          cur = trial;
          break;
        }
        step *= 0.5;
      }
      if (step <= 1e-10) break;
    }
    platt_a_ = a;
    platt_b_ = b;
  }

  Eigen::MatrixXd x_;
  std::vector<double> y_;  // +-1
  std::vector<double> alpha_;
  Eigen::MatrixXd kernel_cache_;
  Eigen::VectorXd f_cache_;
  double b_ = 0.0;
  double platt_a_ = -1.0, platt_b_ = 0.0;
  SvmConfig config_;
};

}  // namespace agsense::base
