#include <catch2/catch_amalgamated.hpp>

#include "agsense/common/rng.hpp"
#include "agsense/selfsup/transform_classifier.hpp"

using namespace agsense;
using namespace agsense::selfsup;
using agsense::nn::Tensor;

namespace {

Tensor random_unit_matrix(uint64_t seed) {
  Rng rng(seed);
  Tensor t({24, 8});
  for (int i = 0; i < t.size(); ++i) t[i] = rng.uniform();
  return t;
}

std::vector<Autoencoder> tiny_zoo(uint64_t seed) {
  std::vector<Autoencoder> zoo;
  for (const auto& spec : encoder_zoo())
    zoo.push_back(build_autoencoder(spec, seed));
  return zoo;
}

}  // namespace

TEST_CASE("five inputs give 55 samples, five per class") {
  std::vector<Tensor> inputs;
  for (uint64_t i = 0; i < 5; ++i) inputs.push_back(random_unit_matrix(i));
  auto zoo = tiny_zoo(3);
  auto ds = build_transformation_dataset(inputs, zoo);
  REQUIRE(ds.samples.size() == 55);
  std::array<int, kTransformClassCount> histogram{};
  for (const auto& s : ds.samples)
    ++histogram[static_cast<std::size_t>(s.pseudo_label)];
  for (int h : histogram) REQUIRE(h == 5);
}

TEST_CASE("label-0 samples are the flattened originals") {
  std::vector<Tensor> inputs = {random_unit_matrix(17)};
  auto zoo = tiny_zoo(5);
  auto ds = build_transformation_dataset(inputs, zoo);
  const auto& s0 = ds.samples[0];
  REQUIRE(s0.pseudo_label == 0);
  for (int i = 0; i < 192; ++i) REQUIRE(s0.input[i] == inputs[0][i]);
}

TEST_CASE("label-1 samples carry the scaled encoder-1 latent, zero padded") {
  std::vector<Tensor> inputs = {random_unit_matrix(23)};
  auto zoo = tiny_zoo(7);
  auto ds = build_transformation_dataset(inputs, zoo);
  const auto& s1 = ds.samples[1];
  REQUIRE(s1.pseudo_label == 1);
  Tensor latent = encode(zoo[0], inputs[0]);
  REQUIRE(latent.size() == 43);
  for (int i = 0; i < 43; ++i) {
    double expect = std::min(latent[i] / ds.latent_scales[0], 1.0);
    REQUIRE(s1.input[i] == Catch::Approx(expect).margin(1e-15));
  }
  for (int i = 43; i < 192; ++i) REQUIRE(s1.input[i] == 0.0);
}

TEST_CASE("classifier shape trace: 192 -> 185 -> 178 -> 171, then 11-way") {
  nn::Network cnn;
  append_cnn_block(cnn);
  Tensor x = random_unit_matrix(31).reshaped({1, 192});
  std::vector<std::vector<int>> pool_shapes;
  for (std::size_t i = 0; i < cnn.layer_count(); ++i) {
    x = cnn.layer(i).forward(x, nn::Mode::kInfer);
    if (cnn.layer(i).kind() == "pool1d") pool_shapes.push_back(x.shape());
  }
  REQUIRE(pool_shapes.size() == 3);
  REQUIRE(pool_shapes[0] == std::vector<int>{32, 185});
  REQUIRE(pool_shapes[1] == std::vector<int>{64, 178});
  REQUIRE(pool_shapes[2] == std::vector<int>{128, 171});

  nn::Network clf = build_transformation_classifier(11);
  Tensor out = clf.forward(random_unit_matrix(37).reshaped({1, 192}),
                           nn::Mode::kInfer);
  REQUIRE(out.shape() == std::vector<int>{11});
  double sum = 0.0;
  for (int i = 0; i < out.size(); ++i) {
    sum += out[i];
    REQUIRE(out[i] >= 0.0);
  }
  REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("an untrained classifier sits at chance on balanced data") {
  // A single random init can collapse onto few classes, so chance level
  // holds in expectation over inits; average a few frozen seeds.
  std::vector<Tensor> inputs;
  for (uint64_t i = 0; i < 91; ++i) inputs.push_back(random_unit_matrix(i));
  auto zoo = tiny_zoo(13);
  auto ds = build_transformation_dataset(inputs, zoo);
  REQUIRE(ds.samples.size() == 1001);
  double mean_acc = 0.0;
  const uint64_t seeds[] = {101, 102, 103};
  for (uint64_t seed : seeds) {
    nn::Network clf = build_transformation_classifier(seed);
    int correct = 0;
    for (const auto& s : ds.samples)
      if (classify_transformation(clf, s.input) == s.pseudo_label) ++correct;
    mean_acc += static_cast<double>(correct) /
                static_cast<double>(ds.samples.size());
  }
  mean_acc /= 3.0;
  REQUIRE(mean_acc == Catch::Approx(1.0 / 11.0).margin(0.05));
}

TEST_CASE("classifier training is deterministic for a fixed seed") {
  std::vector<Tensor> inputs;
  for (uint64_t i = 0; i < 6; ++i) inputs.push_back(random_unit_matrix(i));
  auto zoo = tiny_zoo(19);
  auto ds = build_transformation_dataset(inputs, zoo);
  nn::Network a = build_transformation_classifier(23);
  nn::Network b = build_transformation_classifier(23);
  auto ra = train_transformation_classifier(a, ds, 1, 0.001, 16, 29, 0.25);
  auto rb = train_transformation_classifier(b, ds, 1, 0.001, 16, 29, 0.25);
  REQUIRE(ra.loss_curve == rb.loss_curve);
  REQUIRE(ra.val_accuracy_curve == rb.val_accuracy_curve);
  REQUIRE(ra.train_samples + ra.val_samples == ds.samples.size());
  // the held-out split is by source day: multiples of 11 on both sides
  REQUIRE(ra.val_samples % kTransformClassCount == 0);
}
