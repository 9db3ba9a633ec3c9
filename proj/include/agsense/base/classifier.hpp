#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "agsense/common/error.hpp"

namespace agsense::base {

// Two-class decision with calibrated probabilities; the hard label always
// agrees with the probability argmax (ties resolve to class 0).
struct BaseClassifierOutput {
  std::string id;
  int label = 0;
  std::array<double, 2> prob{0.5, 0.5};
};

class BaseClassifier {
 public:
  virtual ~BaseClassifier() = default;
  virtual std::string id() const = 0;
  virtual BaseClassifierOutput predict(const Eigen::VectorXd& x) const = 0;
};

inline void require_both_classes(const std::vector<int>& y,
                                 const char* who) {
  bool has0 = false, has1 = false;
  for (int v : y) {
    if (v == 0) has0 = true;
    else if (v == 1) has1 = true;
    else throw ValidationError(std::string(who) + ": labels must be 0 or 1");
  }
  if (!has0 || !has1)
    throw ValidationError(std::string(who) +
                          ": training set must contain both classes");
}

inline BaseClassifierOutput make_output(const std::string& id, double p1) {
  BaseClassifierOutput out;
  out.id = id;
  out.prob = {1.0 - p1, p1};
  out.label = p1 > 0.5 ? 1 : 0;
  return out;
}

}  // namespace agsense::base
