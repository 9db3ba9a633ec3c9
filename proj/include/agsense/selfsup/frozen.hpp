#pragma once

#include <utility>

#include "agsense/io/container.hpp"
#include "agsense/selfsup/transform_classifier.hpp"

namespace agsense::selfsup {

struct FeaturePair {
  nn::Tensor sequence;  // (171, 128), time-major
  nn::Tensor pooled;    // (128), mean over the 171 positions
};

// The trained CNN block with its dense head discarded. Weights are copied
// at construction and no mutating access is exposed, so downstream training
// cannot touch them; feature extraction always runs in inference mode.
class FrozenFeatureExtractor {
 public:
  static FrozenFeatureExtractor from_classifier(nn::Network& classifier) {
    FrozenFeatureExtractor fx;
    if (classifier.layer_count() < kCnnBlockLayerCount)
      throw ValidationError("classifier is missing its CNN block");
    auto src = collect_block_params(classifier);
    auto dst = fx.net_.params();
    if (src.size() != dst.size())
      throw ValidationError("CNN block parameter mismatch");
    for (std::size_t i = 0; i < src.size(); ++i)
      *dst[i].value = *src[i].value;
    return fx;
  }

  FeaturePair features(const nn::Tensor& input192) {
    nn::Tensor out = net_.forward(
        input192.reshaped({1, kTransformInputLength}), nn::Mode::kInfer);
    // (128, 171) channel-major -> (171, 128) time-major
    FeaturePair fp;
    fp.sequence = nn::Tensor({kCnnSequenceLength, kCnnFeatureChannels});
    fp.pooled = nn::Tensor({kCnnFeatureChannels});
    for (int c = 0; c < kCnnFeatureChannels; ++c) {
      double sum = 0.0;
      for (int t = 0; t < kCnnSequenceLength; ++t) {
        double v = out[c * kCnnSequenceLength + t];
        fp.sequence[t * kCnnFeatureChannels + c] = v;
        sum += v;
      }
      fp.pooled[c] = sum / kCnnSequenceLength;
    }
    return fp;
  }

  // read-only view of the frozen weights, for persistence and audits
  std::vector<std::pair<std::string, nn::Tensor>> weights() {
    std::vector<std::pair<std::string, nn::Tensor>> out;
    for (auto& p : net_.params()) out.emplace_back(p.name, *p.value);
    return out;
  }

  void store(io::Container& c, const std::string& prefix = "cnn/") {
    io::store_network(c, prefix, net_);
  }

  static FrozenFeatureExtractor load(const io::Container& c,
                                     const std::string& prefix = "cnn/") {
    FrozenFeatureExtractor fx;
    io::load_network(c, prefix, fx.net_);
    return fx;
  }

 private:
  FrozenFeatureExtractor() { append_cnn_block(net_); }

  static std::vector<nn::Param> collect_block_params(nn::Network& classifier) {
    std::vector<nn::Param> out;
    for (std::size_t i = 0; i < kCnnBlockLayerCount; ++i)
      classifier.layer(i).collect_params(
          std::to_string(i) + "." + classifier.layer(i).kind(), out);
    return out;
  }

  nn::Network net_;
};

inline FrozenFeatureExtractor extract_frozen(nn::Network& classifier) {
  return FrozenFeatureExtractor::from_classifier(classifier);
}

}  // namespace agsense::selfsup
