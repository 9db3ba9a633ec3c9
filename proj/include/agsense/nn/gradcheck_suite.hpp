#pragma once

#include <utility>

#include "agsense/nn/conv.hpp"
#include "agsense/nn/dense.hpp"
#include "agsense/nn/gradcheck.hpp"
#include "agsense/nn/lstm.hpp"
#include "agsense/nn/loss.hpp"
#include "agsense/nn/network.hpp"
#include "agsense/nn/pool.hpp"

namespace agsense::nn {

struct GradCheckCase {
  std::string name;
  GradCheckReport report;
};

namespace detail {

inline Tensor random_tensor(std::vector<int> shape, Rng& rng, double lo = -1.0,
                            double hi = 1.0) {
  Tensor t(std::move(shape));
  for (int i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

inline ScalarLoss mse_against(Tensor target) {
  return [target = std::move(target)](const Tensor& out) {
    return loss_mse(out, target);
  };
}

inline ScalarLoss cce_against(Tensor target) {
  return [target = std::move(target)](const Tensor& out) {
    return loss_cce(out, target);
  };
}

inline ScalarLoss bce_against(Tensor target) {
  return [target = std::move(target)](const Tensor& out) {
    return loss_bce(out, target);
  };
}

inline Tensor soft_distribution(int n, Rng& rng) {
  Tensor t({n});
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    t[i] = rng.uniform(0.1, 1.0);
    sum += t[i];
  }
  for (int i = 0; i < n; ++i) t[i] /= sum;
  return t;
}

}  // namespace detail

// Small fixed instances of every layer and loss, checked against central
// finite differences. Seeds are frozen so the suite is reproducible; the
// random draws keep pre-activations away from the ReLU kink and max-pool
// ties at the 1e-5 probe scale.
inline std::vector<GradCheckCase> run_gradcheck_suite(double step = 1e-5,
                                                      double tol = 1e-4) {
  using detail::bce_against;
  using detail::cce_against;
  using detail::mse_against;
  using detail::random_tensor;
  using detail::soft_distribution;

  std::vector<GradCheckCase> cases;
  auto run = [&](const std::string& name, Network& net, const Tensor& input,
                 const ScalarLoss& loss_fn) {
    cases.push_back({name, grad_check(net, input, loss_fn, step, tol)});
  };

  {
    Rng rng(11);
    Network net;
    net.add<Conv1dLayer>(2, 3, 3, 1, Padding::kSame);
    net.init(101);
    Tensor in = random_tensor({2, 9}, rng);
    run("conv1d same s1", net, in, mse_against(random_tensor({3, 9}, rng)));
  }
  {
    Rng rng(12);
    Network net;
    net.add<Conv1dLayer>(2, 2, 4, 2, Padding::kValid);
    net.init(102);
    Tensor in = random_tensor({2, 10}, rng);
    run("conv1d valid s2", net, in, mse_against(random_tensor({2, 4}, rng)));
  }
  {
    Rng rng(13);
    Network net;
    net.add<Conv2dLayer>(2, 3, 3, 1, Padding::kSame);
    net.init(103);
    Tensor in = random_tensor({2, 5, 4}, rng);
    run("conv2d same s1", net, in, mse_against(random_tensor({3, 5, 4}, rng)));
  }
  {
    Rng rng(14);
    Network net;
    net.add<Conv2dLayer>(1, 2, 2, 2, Padding::kValid);
    net.init(104);
    Tensor in = random_tensor({1, 6, 4}, rng);
    run("conv2d valid s2", net, in, mse_against(random_tensor({2, 3, 2}, rng)));
  }
  {
    Rng rng(15);
    Network net;
    net.add<DenseLayer>(4, 3);
    net.init(105);
    Tensor in = random_tensor({4}, rng);
    run("dense", net, in, mse_against(random_tensor({3}, rng)));
  }
  {
    Rng rng(16);
    Network net;
    net.add<DenseLayer>(4, 3, 0.01);
    net.init(106);
    Tensor in = random_tensor({5, 4}, rng);
    run("dense rowwise + l2", net, in,
        mse_against(random_tensor({5, 3}, rng)));
  }
  {
    Rng rng(17);
    Network net;
    net.add<Pool1dLayer>(PoolKind::kMax, 2, 2, Padding::kValid);
    Tensor in = random_tensor({2, 8}, rng);
    run("maxpool1d", net, in, mse_against(random_tensor({2, 4}, rng)));
  }
  {
    Rng rng(18);
    Network net;
    net.add<Pool1dLayer>(PoolKind::kMean, 3, 1, Padding::kValid);
    Tensor in = random_tensor({2, 7}, rng);
    run("meanpool1d s1", net, in, mse_against(random_tensor({2, 5}, rng)));
  }
  {
    Rng rng(19);
    Network net;
    net.add<Pool2dLayer>(PoolKind::kMax, 2, 2, Padding::kValid);
    Tensor in = random_tensor({2, 4, 4}, rng);
    run("maxpool2d", net, in, mse_against(random_tensor({2, 2, 2}, rng)));
  }
  {
    Rng rng(20);
    Network net;
    net.add<Pool2dLayer>(PoolKind::kMean, 2, 2, Padding::kValid);
    Tensor in = random_tensor({2, 4, 4}, rng);
    run("meanpool2d", net, in, mse_against(random_tensor({2, 2, 2}, rng)));
  }
  {
    Rng rng(21);
    Network net;
    net.add<DenseLayer>(4, 4);
    net.add<ReluLayer>();
    net.init(107);
    Tensor in = random_tensor({4}, rng);
    run("relu", net, in, mse_against(random_tensor({4}, rng)));
  }
  {
    Rng rng(22);
    Network net;
    net.add<DenseLayer>(4, 3);
    net.add<SigmoidLayer>();
    net.init(108);
    Tensor in = random_tensor({4}, rng);
    run("sigmoid + bce", net, in,
        bce_against(soft_distribution(3, rng)));
  }
  {
    Rng rng(23);
    Network net;
    net.add<DenseLayer>(4, 5);
    net.add<SoftmaxLayer>();
    net.init(109);
    Tensor in = random_tensor({4}, rng);
    run("softmax + cce", net, in, cce_against(soft_distribution(5, rng)));
  }
  {
    Rng rng(24);
    Network net;
    net.add<LstmLayer>(3, 4, true);
    net.init(110);
    Tensor in = random_tensor({5, 3}, rng);
    run("lstm sequences", net, in, mse_against(random_tensor({5, 4}, rng)));
  }
  {
    Rng rng(25);
    Network net;
    net.add<LstmLayer>(3, 4, false);
    net.add<DenseLayer>(4, 2);
    net.add<SigmoidLayer>();
    net.init(111);
    Tensor in = random_tensor({5, 3}, rng);
    run("lstm last + dense + bce", net, in,
        bce_against(soft_distribution(2, rng)));
  }
  {
    Rng rng(26);
    Network net;
    net.add<Upsample2dLayer>(2);
    Tensor in = random_tensor({2, 3, 2}, rng);
    run("upsample2d", net, in, mse_against(random_tensor({2, 6, 4}, rng)));
  }
  {
    Rng rng(27);
    Network net;
    net.add<DenseLayer>(3, 2);
    net.add<SigmoidLayer>();
    net.add<RenormalizeLayer>();
    net.init(112);
    Tensor in = random_tensor({3}, rng);
    run("sigmoid pair renormalized + cce", net, in,
        cce_against(soft_distribution(2, rng)));
  }
  {
    // combiner-shaped stack in miniature
    Rng rng(28);
    Network net;
    net.add<LstmLayer>(3, 4, true);
    net.add<DenseLayer>(4, 4, 0.01);
    net.add<ReluLayer>();
    net.add<FlattenLayer>();
    net.add<DenseLayer>(6 * 4, 2);
    net.add<SigmoidLayer>();
    net.add<RenormalizeLayer>();
    net.init(113);
    Tensor in = random_tensor({6, 3}, rng);
    run("combiner stack", net, in, cce_against(soft_distribution(2, rng)));
  }
  {
    // autoencoder-shaped stack in miniature
    Rng rng(29);
    Network net;
    net.add<Conv2dLayer>(1, 2, 3, 1, Padding::kSame);
    net.add<ReluLayer>();
    net.add<Pool2dLayer>(PoolKind::kMax, 2, 2, Padding::kValid);
    net.add<FlattenLayer>();
    net.add<DenseLayer>(2 * 3 * 2, 5);
    net.add<ReluLayer>();
    net.add<DenseLayer>(5, 2 * 3 * 2);
    net.add<ReshapeLayer>(std::vector<int>{2, 3, 2});
    net.add<Upsample2dLayer>(2);
    net.add<Conv2dLayer>(2, 1, 3, 1, Padding::kSame);
    net.add<ReluLayer>();
    net.init(114);
    Tensor in = random_tensor({1, 6, 4}, rng, 0.05, 1.0);
    run("autoencoder stack", net, in,
        mse_against(random_tensor({1, 6, 4}, rng, 0.0, 1.0)));
  }
  {
    Rng rng(30);
    Network net;
    net.add<DenseLayer>(3, 3);
    net.init(115);
    Tensor in = random_tensor({3}, rng);
    run("mse loss", net, in, mse_against(random_tensor({3}, rng)));
  }
  return cases;
}

inline bool gradcheck_suite_passes(const std::vector<GradCheckCase>& cases) {
  for (const auto& c : cases)
    if (!c.report.pass) return false;
  return true;
}

}  // namespace agsense::nn
