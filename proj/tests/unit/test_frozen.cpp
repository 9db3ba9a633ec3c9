#include <catch2/catch_amalgamated.hpp>
#include <cstdio>

#include "agsense/common/rng.hpp"
#include "agsense/selfsup/frozen.hpp"

using namespace agsense;
using namespace agsense::selfsup;
using agsense::nn::Tensor;

namespace {

Tensor random_input(uint64_t seed) {
  Rng rng(seed);
  Tensor t({192});
  for (int i = 0; i < t.size(); ++i) t[i] = rng.uniform();
  return t;
}

}  // namespace

TEST_CASE("frozen features equal the classifier CNN block at freeze time") {
  nn::Network clf = build_transformation_classifier(3);
  auto fx = extract_frozen(clf);
  Tensor in = random_input(7);

  Tensor x = in.reshaped({1, 192});
  for (std::size_t i = 0; i < kCnnBlockLayerCount; ++i)
    x = clf.layer(i).forward(x, nn::Mode::kInfer);

  auto fp = fx.features(in);
  REQUIRE(fp.sequence.shape() == std::vector<int>{171, 128});
  REQUIRE(fp.pooled.shape() == std::vector<int>{128});
  for (int t = 0; t < 171; ++t)
    for (int c = 0; c < 128; ++c)
      REQUIRE(fp.sequence[t * 128 + c] == x[c * 171 + t]);
}

TEST_CASE("pooled vector is the arithmetic mean of sequence rows") {
  nn::Network clf = build_transformation_classifier(11);
  auto fx = extract_frozen(clf);
  auto fp = fx.features(random_input(13));
  for (int c = 0; c < 128; ++c) {
    double mean = 0.0;
    for (int t = 0; t < 171; ++t) mean += fp.sequence[t * 128 + c];
    mean /= 171.0;
    REQUIRE(std::abs(fp.pooled[c] - mean) < 1e-12);
  }
}

TEST_CASE("mutating the classifier afterwards does not move the extractor") {
  nn::Network clf = build_transformation_classifier(17);
  auto fx = extract_frozen(clf);
  Tensor in = random_input(19);
  auto before = fx.features(in);

  // simulates downstream training touching the source network
  for (auto& p : clf.params())
    for (int i = 0; i < p.value->size(); ++i) (*p.value)[i] += 0.25;

  auto after = fx.features(in);
  for (int i = 0; i < before.sequence.size(); ++i)
    REQUIRE(before.sequence[i] == after.sequence[i]);
  for (int i = 0; i < before.pooled.size(); ++i)
    REQUIRE(before.pooled[i] == after.pooled[i]);
}

TEST_CASE("extractor persists and reloads bit-identically") {
  nn::Network clf = build_transformation_classifier(23);
  auto fx = extract_frozen(clf);
  io::Container c;
  fx.store(c);
  std::string path = "frozen_test.agc";
  c.save(path);
  auto fx2 = FrozenFeatureExtractor::load(io::Container::load(path));
  std::remove(path.c_str());

  Tensor in = random_input(29);
  auto a = fx.features(in);
  auto b = fx2.features(in);
  for (int i = 0; i < a.sequence.size(); ++i)
    REQUIRE(a.sequence[i] == b.sequence[i]);
}
