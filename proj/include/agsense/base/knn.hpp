#pragma once

#include <algorithm>

#include "agsense/base/classifier.hpp"
#include "agsense/io/container.hpp"

namespace agsense::base {

// Euclidean k-nearest vote. Distance ties break towards the lower sample
// index, vote ties towards class 0; probability is the vote fraction.
class Knn : public BaseClassifier {
 public:
  static Knn fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int k) {
    if (x.rows() == 0) throw ValidationError("knn: empty training set");
    if (k < 1 || k > x.rows())
      throw ValidationError("knn: k=" + std::to_string(k) +
                            " outside [1, " + std::to_string(x.rows()) + "]");
    require_both_classes(y, "knn");
    Knn m;
    m.x_ = x;
    m.y_ = y;
    m.k_ = k;
    return m;
  }

  std::string id() const override { return "knn"; }

  BaseClassifierOutput predict(const Eigen::VectorXd& q) const override {
    std::vector<std::pair<double, Eigen::Index>> dist(
        static_cast<std::size_t>(x_.rows()));
    for (Eigen::Index i = 0; i < x_.rows(); ++i)
      dist[static_cast<std::size_t>(i)] = {
          (x_.row(i).transpose() - q).squaredNorm(), i};
    std::partial_sort(dist.begin(), dist.begin() + k_, dist.end());
    int votes1 = 0;
    for (int i = 0; i < k_; ++i)
      votes1 += y_[static_cast<std::size_t>(dist[static_cast<std::size_t>(i)]
                                                .second)];
    double p1 = static_cast<double>(votes1) / static_cast<double>(k_);
    return make_output(id(), p1);
  }

  int k() const { return k_; }

  void store(io::Container& c, const std::string& prefix) const {
    nn::Tensor xt({static_cast<int>(x_.rows()), static_cast<int>(x_.cols())});
    for (Eigen::Index i = 0; i < x_.rows(); ++i)
      for (Eigen::Index j = 0; j < x_.cols(); ++j)
        xt[static_cast<int>(i * x_.cols() + j)] = x_(i, j);
    c.put(prefix + "train_x", xt);
    nn::Tensor yt({static_cast<int>(y_.size())});
    for (std::size_t i = 0; i < y_.size(); ++i)
      yt[static_cast<int>(i)] = static_cast<double>(y_[i]);
    c.put(prefix + "train_y", yt);
    c.put(prefix + "k", nn::Tensor({1}, {static_cast<double>(k_)}));
  }

  static Knn load(const io::Container& c, const std::string& prefix) {
    Knn m;
    const nn::Tensor& xt = c.get(prefix + "train_x");
    m.x_.resize(xt.dim(0), xt.dim(1));
    for (int i = 0; i < xt.dim(0); ++i)
      for (int j = 0; j < xt.dim(1); ++j) m.x_(i, j) = xt[i * xt.dim(1) + j];
    const nn::Tensor& yt = c.get(prefix + "train_y");
    m.y_.resize(static_cast<std::size_t>(yt.size()));
    for (int i = 0; i < yt.size(); ++i)
      m.y_[static_cast<std::size_t>(i)] = static_cast<int>(yt[i]);
    m.k_ = static_cast<int>(c.get(prefix + "k")[0]);
    return m;
  }

 private:
  Eigen::MatrixXd x_;
  std::vector<int> y_;
  int k_ = 1;
};

}  // namespace agsense::base
