#pragma once

#include <vector>

#include "agsense/data/activity_matrix.hpp"
#include "agsense/nn/conv.hpp"
#include "agsense/nn/dense.hpp"
#include "agsense/nn/loss.hpp"
#include "agsense/nn/network.hpp"
#include "agsense/nn/pool.hpp"
#include "agsense/selfsup/encoder_spec.hpp"

namespace agsense::selfsup {

inline constexpr int kConvFilters = 16;  // per autoencoder conv block

// Grid extents after each 2x2 pooling stage, starting from 24x8.
inline std::pair<int, int> pooled_grid(int blocks) {
  int h = data::kHoursPerDay, w = data::kSensorCount;
  for (int i = 0; i < blocks; ++i) {
    h /= 2;
    w /= 2;
  }
  return {h, w};
}

// Undercomplete convolutional autoencoder on (1, 24, 8) inputs. The encoder
// stacks conv(k3, s1, same) + ReLU + dropout + pool(2/2) blocks, then
// flattens into a dense latent; the decoder mirrors it with
// upsample-then-conv blocks and a final 1-channel conv. ReLU throughout.
struct Autoencoder {
  EncoderSpec spec;
  nn::Network encoder;
  nn::Network decoder;
  std::vector<double> loss_curve;

  nn::Tensor reconstruct(const nn::Tensor& input, nn::Mode mode) {
    return decoder.forward(encoder.forward(input, mode), mode);
  }
};

inline Autoencoder build_autoencoder(const EncoderSpec& spec, uint64_t seed) {
  Autoencoder model;
  model.spec = spec;
  auto [h, w] = pooled_grid(spec.conv_blocks);
  int flat = kConvFilters * h * w;

  for (int b = 0; b < spec.conv_blocks; ++b) {
    int c_in = b == 0 ? 1 : kConvFilters;
    model.encoder.add<nn::Conv2dLayer>(c_in, kConvFilters, 3, 1,
                                       nn::Padding::kSame);
    model.encoder.add<nn::ReluLayer>();
    model.encoder.add<nn::DropoutLayer>(spec.dropout_rate);
    model.encoder.add<nn::Pool2dLayer>(spec.pooling, 2, 2,
                                       nn::Padding::kValid);
  }
  model.encoder.add<nn::FlattenLayer>();
  model.encoder.add<nn::DenseLayer>(flat, spec.latent_size);
  model.encoder.add<nn::ReluLayer>();

  model.decoder.add<nn::DenseLayer>(spec.latent_size, flat);
  model.decoder.add<nn::ReluLayer>();
  model.decoder.add<nn::ReshapeLayer>(std::vector<int>{kConvFilters, h, w});
  for (int b = 0; b < spec.conv_blocks; ++b) {
    model.decoder.add<nn::Upsample2dLayer>(2);
    model.decoder.add<nn::Conv2dLayer>(kConvFilters, kConvFilters, 3, 1,
                                       nn::Padding::kSame);
    model.decoder.add<nn::ReluLayer>();
    model.decoder.add<nn::DropoutLayer>(spec.dropout_rate);
  }
  model.decoder.add<nn::Conv2dLayer>(kConvFilters, 1, 3, 1,
                                     nn::Padding::kSame);
  model.decoder.add<nn::ReluLayer>();

  model.encoder.init(derive_seed(seed, "autoencoder-encoder",
                                 static_cast<uint64_t>(spec.index)));
  model.decoder.init(derive_seed(seed, "autoencoder-decoder",
                                 static_cast<uint64_t>(spec.index)));
  return model;
}

// Reconstruction training with the spec's optimizer, learning rate and
// batch size; records the mean MSE per epoch.
inline void train_autoencoder(Autoencoder& model,
                              const std::vector<nn::Tensor>& inputs,
                              int epochs, uint64_t seed) {
  if (epochs > 0 && inputs.empty())
    throw ValidationError("autoencoder training needs at least one sample");

  nn::Optimizer optimizer(
      nn::OptimizerSpec::make(model.spec.optimizer, model.spec.learning_rate));
  auto enc_params = model.encoder.params();
  auto dec_params = model.decoder.params();
  std::vector<nn::Param> params = enc_params;
  params.insert(params.end(), dec_params.begin(), dec_params.end());

  std::vector<std::size_t> order(inputs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng shuffle_rng(derive_seed(seed, "autoencoder-shuffle",
                              static_cast<uint64_t>(model.spec.index)));

  for (int epoch = 0; epoch < epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batch = static_cast<std::size_t>(model.spec.batch_size);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      std::size_t end = std::min(order.size(), start + batch);
      model.encoder.zero_grads();
      model.decoder.zero_grads();
      for (std::size_t i = start; i < end; ++i) {
        const nn::Tensor& x = inputs[order[i]];
        nn::Tensor shaped = x.reshaped(
            {1, data::kHoursPerDay, data::kSensorCount});
        nn::Tensor out = model.reconstruct(shaped, nn::Mode::kTrain);
        auto l = nn::loss_mse(out, shaped);
        if (!std::isfinite(l.value))
          throw NumericalError("autoencoder " +
                               std::to_string(model.spec.index) +
                               ": non-finite loss at epoch " +
                               std::to_string(epoch));
        epoch_loss += l.value;
        model.encoder.backward(model.decoder.backward(l.grad));
      }
      optimizer.step(params, 1.0 / static_cast<double>(end - start));
    }
    model.loss_curve.push_back(epoch_loss /
                               static_cast<double>(inputs.size()));
  }
}

// Latent representation; dropout runs in inference mode, so this is pure.
inline nn::Tensor encode(Autoencoder& model, const nn::Tensor& input) {
  nn::Tensor shaped =
      input.reshaped({1, data::kHoursPerDay, data::kSensorCount});
  return model.encoder.forward(shaped, nn::Mode::kInfer);
}

}  // namespace agsense::selfsup
