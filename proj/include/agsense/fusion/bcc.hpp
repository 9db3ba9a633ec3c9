#pragma once

#include <Eigen/Dense>
#include <array>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <vector>

#include "agsense/common/error.hpp"

namespace agsense::fusion {

// Dirichlet posteriors over each base classifier's 2x2 confusion matrix;
// alpha[k](t, c) is the parameter for true class t, emitted class c.
using ConfusionPosterior = std::vector<Eigen::Matrix2d>;

// per-sample distribution over {not-agitation, agitation}
using LabelPosterior = std::vector<std::array<double, 2>>;

inline double digamma(double x) { return boost::math::digamma(x); }

inline Eigen::Matrix2d default_confusion_prior(double diag = 2.0,
                                               double off = 1.0) {
  Eigen::Matrix2d a;
  a << diag, off, off, diag;
  return a;
}

// Expected log confusion probabilities under the Dirichlet posterior:
// E[log pi^k(t, c)] = psi(alpha[t][c]) - psi(sum_c alpha[t][c]).
inline std::vector<Eigen::Matrix2d> expected_log_confusion(
    const ConfusionPosterior& alpha) {
  std::vector<Eigen::Matrix2d> elog(alpha.size());
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    for (int t = 0; t < 2; ++t) {
      double row_sum = alpha[k](t, 0) + alpha[k](t, 1);
      if (!(alpha[k](t, 0) > 0.0) || !(alpha[k](t, 1) > 0.0))
        throw ValidationError("confusion posterior needs positive parameters");
      double psi_sum = digamma(row_sum);
      elog[k](t, 0) = digamma(alpha[k](t, 0)) - psi_sum;
      elog[k](t, 1) = digamma(alpha[k](t, 1)) - psi_sum;
    }
  }
  return elog;
}

// q_i(t) proportional to exp(log_prior_i(t) + sum_k E[log pi^k(t, c_i^k)]).
// Invariant to adding a constant to all log scores of a sample.
inline LabelPosterior e_step(const LabelPosterior& log_priors,
                             const std::vector<std::vector<int>>& base_labels,
                             const ConfusionPosterior& alpha) {
  auto elog = expected_log_confusion(alpha);
  LabelPosterior q(log_priors.size());
  for (std::size_t i = 0; i < log_priors.size(); ++i) {
    double score[2];
    for (int t = 0; t < 2; ++t) {
      double s = log_priors[i][static_cast<std::size_t>(t)];
      for (std::size_t k = 0; k < alpha.size(); ++k) {
        int c = base_labels[i][k];
        if (c != 0 && c != 1)
          throw ValidationError("base labels must be 0 or 1");
        s += elog[k](t, c);
      }
      score[t] = s;
    }
    double mx = std::max(score[0], score[1]);
    double e0 = std::exp(score[0] - mx), e1 = std::exp(score[1] - mx);
    double mass = e0 + e1;
    if (!(mass > 0.0) || !std::isfinite(mass))
      throw NumericalError("e-step produced no posterior mass");
    q[i] = {e0 / mass, e1 / mass};
  }
  return q;
}

// alpha^k[t][c] = alpha0[t][c] + sum_i q_i(t) [c_i^k = c]
inline ConfusionPosterior m_step_confusion(
    const LabelPosterior& q, const std::vector<std::vector<int>>& base_labels,
    const Eigen::Matrix2d& alpha0, std::size_t classifier_count) {
  ConfusionPosterior alpha(classifier_count, alpha0);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t k = 0; k < classifier_count; ++k) {
      int c = base_labels[i][k];
      alpha[k](0, c) += q[i][0];
      alpha[k](1, c) += q[i][1];
    }
  return alpha;
}

inline double dirichlet_row_kl(double a0, double a1, double b0, double b1) {
  double sa = a0 + a1, sb = b0 + b1;
  double kl = std::lgamma(sa) - std::lgamma(a0) - std::lgamma(a1) -
              std::lgamma(sb) + std::lgamma(b0) + std::lgamma(b1);
  double psi_sa = digamma(sa);
  kl += (a0 - b0) * (digamma(a0) - psi_sa);
  kl += (a1 - b1) * (digamma(a1) - psi_sa);
  return kl;
}

// Variational free energy restricted to the confusion and label factors,
// with the per-sample priors held fixed:
//   sum_i sum_t q_i(t) [log p_i(t) + sum_k E log pi^k(t, c_i^k) - log q_i(t)]
//   - sum_k sum_t KL(Dir(alpha^k[t]) || Dir(alpha0[t]))
// Both the E-step and the confusion M-step are exact coordinate ascent on
// this objective, so it is non-decreasing across those substeps.
inline double surrogate_objective(
    const LabelPosterior& q, const std::vector<std::vector<int>>& base_labels,
    const ConfusionPosterior& alpha, const Eigen::Matrix2d& alpha0,
    const LabelPosterior& log_priors) {
  auto elog = expected_log_confusion(alpha);
  double value = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (int t = 0; t < 2; ++t) {
      double qt = q[i][static_cast<std::size_t>(t)];
      if (qt <= 0.0) continue;  // lim q->0 of q log q is 0
      double s = log_priors[i][static_cast<std::size_t>(t)];
      for (std::size_t k = 0; k < alpha.size(); ++k)
        s += elog[k](t, base_labels[i][k]);
      value += qt * (s - std::log(qt));
    }
  }
  for (std::size_t k = 0; k < alpha.size(); ++k)
    for (int t = 0; t < 2; ++t)
      value -= dirichlet_row_kl(alpha[k](t, 0), alpha[k](t, 1), alpha0(t, 0),
                                alpha0(t, 1));
  return value;
}

struct EmOptions {
  Eigen::Matrix2d alpha0 = default_confusion_prior();
  int max_iters = 50;
  double tv_tol = 1e-4;  // max per-sample total-variation change in q
};

struct EmResult {
  LabelPosterior q;
  ConfusionPosterior alpha;
  std::vector<double> objective_curve;  // after every M and E substep
  int iterations = 0;
  bool converged = false;
};

// Soft majority vote over the base labels, the usual EM starting point.
inline LabelPosterior majority_vote_init(
    const std::vector<std::vector<int>>& base_labels) {
  LabelPosterior q(base_labels.size());
  for (std::size_t i = 0; i < base_labels.size(); ++i) {
    double ones = 0.0;
    for (int c : base_labels[i]) ones += c;
    double p1 = ones / static_cast<double>(base_labels[i].size());
    q[i] = {1.0 - p1, p1};
  }
  return q;
}

// Alternates the confusion M-step with the E-step; samples with
// clamped[i] in {0, 1} keep a one-hot posterior on the observed label
// (supervised regime), -1 entries update freely.
inline EmResult run_em(const std::vector<std::vector<int>>& base_labels,
                       const LabelPosterior& log_priors,
                       const std::vector<int>& clamped,
                       const LabelPosterior& q_init, const EmOptions& options,
                       std::size_t classifier_count) {
  EmResult result;
  result.q = q_init;
  for (std::size_t i = 0; i < clamped.size(); ++i) {
    if (clamped[i] == 0) result.q[i] = {1.0, 0.0};
    if (clamped[i] == 1) result.q[i] = {0.0, 1.0};
  }

  for (int iter = 0; iter < options.max_iters; ++iter) {
    result.alpha = m_step_confusion(result.q, base_labels, options.alpha0,
                                    classifier_count);
    result.objective_curve.push_back(surrogate_objective(
        result.q, base_labels, result.alpha, options.alpha0, log_priors));

    LabelPosterior next = e_step(log_priors, base_labels, result.alpha);
    double change = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (clamped[i] == 0) next[i] = {1.0, 0.0};
      if (clamped[i] == 1) next[i] = {0.0, 1.0};
      change = std::max(change, std::abs(next[i][0] - result.q[i][0]));
    }
    result.q = next;
    result.objective_curve.push_back(surrogate_objective(
        result.q, base_labels, result.alpha, options.alpha0, log_priors));
    result.iterations = iter + 1;
    if (change < options.tv_tol) {
      result.converged = true;
      break;
    }
  }
  // final refresh so alpha matches the last q exactly
  result.alpha = m_step_confusion(result.q, base_labels, options.alpha0,
                                  classifier_count);
  return result;
}

}  // namespace agsense::fusion
