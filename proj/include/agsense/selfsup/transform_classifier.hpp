#pragma once

#include <vector>

#include "agsense/nn/conv.hpp"
#include "agsense/nn/dense.hpp"
#include "agsense/nn/loss.hpp"
#include "agsense/nn/network.hpp"
#include "agsense/nn/optimizer.hpp"
#include "agsense/nn/pool.hpp"
#include "agsense/selfsup/transform_dataset.hpp"

namespace agsense::selfsup {

// Layers 0..20 form the CNN block that is frozen and reused downstream.
inline constexpr std::size_t kCnnBlockLayerCount = 21;
inline constexpr int kCnnFeatureChannels = 128;
inline constexpr int kCnnSequenceLength = 171;  // 192 -> 185 -> 178 -> 171

// Six conv blocks (conv + ReLU + dropout 0.1) with a max pool (8, stride 1,
// valid) after every two; filter/kernel ladder 32/32 -> 64/16 -> 128/8,
// stride 1, same padding.
inline void append_cnn_block(nn::Network& net, double dropout_rate = 0.1) {
  struct Stage {
    int c_in, c_out, kernel;
  };
  const Stage stages[3] = {{1, 32, 32}, {32, 64, 16}, {64, 128, 8}};
  for (const auto& st : stages) {
    net.add<nn::Conv1dLayer>(st.c_in, st.c_out, st.kernel, 1,
                             nn::Padding::kSame);
    net.add<nn::ReluLayer>();
    net.add<nn::DropoutLayer>(dropout_rate);
    net.add<nn::Conv1dLayer>(st.c_out, st.c_out, st.kernel, 1,
                             nn::Padding::kSame);
    net.add<nn::ReluLayer>();
    net.add<nn::DropoutLayer>(dropout_rate);
    net.add<nn::Pool1dLayer>(nn::PoolKind::kMax, 8, 1, nn::Padding::kValid);
  }
}

// CNN block + dense head: flatten, dense 128 + ReLU, dense 11 + softmax.
inline nn::Network build_transformation_classifier(uint64_t seed,
                                                   double dropout_rate = 0.1) {
  nn::Network net;
  append_cnn_block(net, dropout_rate);
  net.add<nn::FlattenLayer>();
  net.add<nn::DenseLayer>(kCnnFeatureChannels * kCnnSequenceLength, 128);
  net.add<nn::ReluLayer>();
  net.add<nn::DenseLayer>(128, kTransformClassCount);
  net.add<nn::SoftmaxLayer>();
  net.init(seed);
  return net;
}

struct ClassifierTrainReport {
  std::vector<double> loss_curve;          // mean train CCE per epoch
  std::vector<double> val_accuracy_curve;  // held-out accuracy per epoch
  double final_val_accuracy = 0.0;
  std::size_t train_samples = 0;
  std::size_t val_samples = 0;
};

inline int classify_transformation(nn::Network& net, const nn::Tensor& input) {
  nn::Tensor out =
      net.forward(input.reshaped({1, kTransformInputLength}), nn::Mode::kInfer);
  int best = 0;
  for (int j = 1; j < out.size(); ++j)
    if (out[j] > out[best]) best = j;
  return best;
}

// Trains with categorical cross entropy. The held-out split is taken by
// SOURCE input, not by sample, so all 11 views of a day stay on one side.
inline ClassifierTrainReport train_transformation_classifier(
    nn::Network& net, const TransformationDataset& ds, int epochs, double lr,
    int batch_size, uint64_t seed, double val_fraction = 0.2) {
  if (ds.samples.empty())
    throw ValidationError("transformation dataset is empty");

  std::vector<std::size_t> sources(ds.source_count);
  for (std::size_t i = 0; i < sources.size(); ++i) sources[i] = i;
  Rng split_rng(derive_seed(seed, "transform-val-split"));
  split_rng.shuffle(sources);
  std::size_t val_sources = static_cast<std::size_t>(
      val_fraction * static_cast<double>(ds.source_count));
  std::vector<char> is_val(ds.source_count, 0);
  for (std::size_t i = 0; i < val_sources; ++i) is_val[sources[i]] = 1;

  std::vector<std::size_t> train_idx, val_idx;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (is_val[i / kTransformClassCount])
      val_idx.push_back(i);
    else
      train_idx.push_back(i);
  }

  ClassifierTrainReport report;
  report.train_samples = train_idx.size();
  report.val_samples = val_idx.size();

  nn::Optimizer optimizer(nn::OptimizerSpec::make(nn::OptAlgo::kAdam, lr));
  auto params = net.params();
  Rng shuffle_rng(derive_seed(seed, "transform-shuffle"));

  auto one_hot = [](int label) {
    nn::Tensor t({kTransformClassCount});
    t[label] = 1.0;
    return t;
  };

  for (int epoch = 0; epoch < epochs; ++epoch) {
    shuffle_rng.shuffle(train_idx);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < train_idx.size();
         start += static_cast<std::size_t>(batch_size)) {
      std::size_t end = std::min(train_idx.size(),
                                 start + static_cast<std::size_t>(batch_size));
      net.zero_grads();
      for (std::size_t i = start; i < end; ++i) {
        const auto& sample = ds.samples[train_idx[i]];
        nn::Tensor out = net.forward(
            sample.input.reshaped({1, kTransformInputLength}),
            nn::Mode::kTrain);
        auto l = nn::loss_cce(out, one_hot(sample.pseudo_label));
        if (!std::isfinite(l.value))
          throw NumericalError(
              "transformation classifier: non-finite loss at epoch " +
              std::to_string(epoch));
        epoch_loss += l.value;
        net.backward(l.grad);
      }
      optimizer.step(params, 1.0 / static_cast<double>(end - start));
    }
    report.loss_curve.push_back(
        train_idx.empty() ? 0.0
                          : epoch_loss / static_cast<double>(train_idx.size()));

    int correct = 0;
    for (std::size_t i : val_idx) {
      const auto& sample = ds.samples[i];
      if (classify_transformation(net, sample.input) == sample.pseudo_label)
        ++correct;
    }
    double acc = val_idx.empty()
                     ? 0.0
                     : static_cast<double>(correct) /
                           static_cast<double>(val_idx.size());
    report.val_accuracy_curve.push_back(acc);
    report.final_val_accuracy = acc;
  }
  return report;
}

}  // namespace agsense::selfsup
