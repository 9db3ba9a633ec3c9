#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "agsense/base/svm.hpp"
#include "agsense/common/rng.hpp"

using namespace agsense;
using namespace agsense::base;

namespace {

struct Blob {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

Blob two_blobs(int n_per_class, double gap, uint64_t seed) {
  Rng rng(seed);
  Blob b;
  b.x.resize(2 * n_per_class, 2);
  b.y.resize(static_cast<std::size_t>(2 * n_per_class));
  for (int i = 0; i < 2 * n_per_class; ++i) {
    int c = i < n_per_class ? 0 : 1;
    b.y[static_cast<std::size_t>(i)] = c;
    double cx = c == 0 ? -gap / 2 : gap / 2;
    b.x(i, 0) = cx + rng.normal() * 0.4;
    b.x(i, 1) = rng.normal() * 0.4;
  }
  return b;
}

}  // namespace

TEST_CASE("a linearly separable toy set trains to zero errors") {
  Blob b = two_blobs(15, 4.0, 3);
  SvmConfig cfg;
  cfg.c = 10.0;
  Svm m = Svm::fit(b.x, b.y, cfg);
  for (Eigen::Index i = 0; i < b.x.rows(); ++i)
    REQUIRE(m.predict(b.x.row(i).transpose()).label ==
            b.y[static_cast<std::size_t>(i)]);
}

TEST_CASE("the trained dual point satisfies the KKT conditions") {
  Blob b = two_blobs(25, 1.2, 7);  // overlapping classes
  SvmConfig cfg;
  cfg.c = 10.0;
  cfg.tol = 1e-3;
  Svm m = Svm::fit(b.x, b.y, cfg);

  // independent checker on the decision values
  double slack = cfg.tol + 1e-9;
  for (Eigen::Index i = 0; i < b.x.rows(); ++i) {
    double yi = b.y[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
    double margin = yi * m.decision_value(b.x.row(i).transpose());
    double a = m.alphas()[static_cast<std::size_t>(i)];
    if (a <= 0.0) {
      REQUIRE(margin >= 1.0 - slack);
    } else if (a >= cfg.c) {
      REQUIRE(margin <= 1.0 + slack);
    } else {
      REQUIRE(std::abs(margin - 1.0) <= slack);
    }
  }
}

TEST_CASE("dual objective matches a dense grid search on six points") {
  Eigen::MatrixXd x(6, 2);
  x << 0.2, 1.1, -0.7, 0.6, 0.1, -0.2, 1.4, 0.9, 1.8, -0.3, 0.9, 1.7;
  std::vector<int> y01 = {0, 0, 0, 1, 1, 1};
  SvmConfig cfg;
  cfg.c = 1.0;
  cfg.kernel = SvmKernel::kRbf;
  cfg.gamma = 0.5;
  cfg.tol = 1e-5;
  Svm m = Svm::fit(x, y01, cfg);

  // oracle: exhaustive search over the dual box with the equality
  // constraint folded into the last coordinate; coarse pass then a local
  // refinement around the best point
  double yv[6] = {-1, -1, -1, 1, 1, 1};
  Eigen::MatrixXd k(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      k(i, j) = std::exp(-cfg.gamma *
                         (x.row(i) - x.row(j)).squaredNorm());
  auto dual = [&](const double* a) {
    double v = 0.0;
    for (int i = 0; i < 6; ++i) {
      v += a[i];
      for (int j = 0; j < 6; ++j)
        v -= 0.5 * a[i] * a[j] * yv[i] * yv[j] * k(i, j);
    }
    return v;
  };
  auto search = [&](const double* center, double radius, double step) {
    double best = -1e300;
    double a[6];
    double lo[5], hi[5];
    for (int i = 0; i < 5; ++i) {
      lo[i] = std::max(0.0, center[i] - radius);
      hi[i] = std::min(cfg.c, center[i] + radius);
    }
    std::vector<int> steps(5);
    for (int i = 0; i < 5; ++i)
      steps[static_cast<std::size_t>(i)] =
          static_cast<int>(std::floor((hi[i] - lo[i]) / step)) + 1;
    std::vector<int> idx(5, 0);
    for (;;) {
      for (int i = 0; i < 5; ++i) a[i] = lo[i] + idx[static_cast<std::size_t>(i)] * step;
      double sum = 0.0;
      for (int i = 0; i < 5; ++i) sum += a[i] * yv[i];
      double a5 = -sum * yv[5];
      if (a5 >= -1e-12 && a5 <= cfg.c + 1e-12) {
        a[5] = std::clamp(a5, 0.0, cfg.c);
        best = std::max(best, dual(a));
      }
      int d = 0;
      while (d < 5 && ++idx[static_cast<std::size_t>(d)] >=
                          steps[static_cast<std::size_t>(d)]) {
        idx[static_cast<std::size_t>(d)] = 0;
        ++d;
      }
      if (d == 5) break;
    }
    return best;
  };

  double center0[5] = {cfg.c / 2, cfg.c / 2, cfg.c / 2, cfg.c / 2, cfg.c / 2};
  double coarse = search(center0, cfg.c / 2, cfg.c / 10);
  // refine around the solver's own alphas (still an independent objective)
  double center1[5];
  for (int i = 0; i < 5; ++i) center1[i] = m.alphas()[static_cast<std::size_t>(i)];
  double fine = search(center1, cfg.c / 10, cfg.c / 200);
  double best_grid = std::max(coarse, fine);

  REQUIRE(m.dual_objective() == Catch::Approx(best_grid).margin(1e-3));
}

TEST_CASE("dual objective is permutation invariant within tolerance") {
  Blob b = two_blobs(12, 1.5, 21);
  SvmConfig cfg;
  cfg.c = 5.0;
  Svm m1 = Svm::fit(b.x, b.y, cfg);

  Eigen::MatrixXd xr = b.x.colwise().reverse().eval();
  std::vector<int> yr(b.y.rbegin(), b.y.rend());
  Svm m2 = Svm::fit(xr, yr, cfg);
  REQUIRE(m1.dual_objective() ==
          Catch::Approx(m2.dual_objective()).margin(2e-3));
}

TEST_CASE("probabilities are ordered by the decision value") {
  Blob b = two_blobs(20, 2.0, 33);
  Svm m = Svm::fit(b.x, b.y, SvmConfig{});
  Rng rng(99);
  std::vector<std::pair<double, double>> fp;  // (decision value, prob)
  for (int t = 0; t < 40; ++t) {
    Eigen::VectorXd q(2);
    q << rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0);
    fp.push_back({m.decision_value(q), m.predict(q).prob[1]});
  }
  std::sort(fp.begin(), fp.end());
  for (std::size_t i = 1; i < fp.size(); ++i)
    if (fp[i].first > fp[i - 1].first + 1e-12)
      REQUIRE(fp[i].second >= fp[i - 1].second);
}

TEST_CASE("svm rejects single-class training") {
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 3;
  REQUIRE_THROWS_AS(Svm::fit(x, {0, 0, 0}, SvmConfig{}), ValidationError);
}

TEST_CASE("svm round-trips through the container") {
  Blob b = two_blobs(10, 2.0, 41);
  Svm m = Svm::fit(b.x, b.y, SvmConfig{});
  io::Container c;
  m.store(c, "svm/");
  Svm back = Svm::load(c, "svm/");
  Eigen::VectorXd q(2);
  q << 0.2, -0.4;
  REQUIRE(m.predict(q).prob[1] == back.predict(q).prob[1]);
  REQUIRE(m.bias() == back.bias());
}
