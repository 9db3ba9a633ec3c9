#pragma once

#include <array>
#include <vector>

#include "agsense/selfsup/autoencoder.hpp"

namespace agsense::selfsup {

inline constexpr int kTransformInputLength =
    data::kHoursPerDay * data::kSensorCount;  // 192
inline constexpr int kTransformClassCount = 11;

// A fixed-length one-channel input with its pseudo-label: 0 for a flattened
// original matrix, 1..10 for the zero-padded latent of that encoder.
struct TransformationSample {
  nn::Tensor input;  // length 192
  int pseudo_label;
};

struct TransformationDataset {
  std::vector<TransformationSample> samples;  // 11 per source input
  std::size_t source_count = 0;
  // per-encoder latent scaling applied before padding (99th percentile)
  std::array<double, 10> latent_scales{};
};

// Emits 11 samples per input: the original (label 0) and each encoder's
// latent (labels 1..10), zero-padded to length 192. Latents are scaled by
// their encoder's 99th-percentile activation and clipped to [0, 1] so all
// classes live in the same range as the normalized originals.
inline TransformationDataset build_transformation_dataset(
    const std::vector<nn::Tensor>& inputs,
    std::vector<Autoencoder>& encoders) {
  if (encoders.size() != 10)
    throw ValidationError("transformation dataset needs all 10 encoders");
  TransformationDataset ds;
  ds.source_count = inputs.size();

  std::vector<std::vector<nn::Tensor>> latents(10);
  for (std::size_t e = 0; e < 10; ++e) {
    latents[e].reserve(inputs.size());
    for (const auto& x : inputs) latents[e].push_back(encode(encoders[e], x));
    std::vector<double> values;
    for (const auto& l : latents[e])
      for (int i = 0; i < l.size(); ++i) values.push_back(l[i]);
    double scale = 1.0;
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      std::size_t rank = static_cast<std::size_t>(
          std::ceil(0.99 * static_cast<double>(values.size())));
      if (rank == 0) rank = 1;
      scale = values[rank - 1];
    }
    ds.latent_scales[e] = scale > 0.0 ? scale : 1.0;
  }

  ds.samples.reserve(inputs.size() * kTransformClassCount);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    TransformationSample original;
    original.input = inputs[i].reshaped({kTransformInputLength});
    original.pseudo_label = 0;
    ds.samples.push_back(std::move(original));
    for (std::size_t e = 0; e < 10; ++e) {
      TransformationSample s;
      s.input = nn::Tensor({kTransformInputLength});
      const nn::Tensor& l = latents[e][i];
      for (int j = 0; j < l.size(); ++j)
        s.input[j] = std::min(l[j] / ds.latent_scales[e], 1.0);
      s.pseudo_label = static_cast<int>(e) + 1;
      ds.samples.push_back(std::move(s));
    }
  }
  return ds;
}

}  // namespace agsense::selfsup
