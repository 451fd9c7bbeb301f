/* Copyright 2026 The oaaconv Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oaaconv/trainer.hpp"

namespace oaaconv {
namespace {

TrainConfig small_config(ConvBackend backend) {
  TrainConfig c;
  c.backend = backend;
  c.seed = 11;
  c.epochs = 2;
  c.batch_size = 8;
  c.learning_rate = 0.1;
  c.classes = 3;
  c.per_class = 12;
  c.image_size = 12;
  return c;
}

double max_weight_diff(const MiniNet& a, const MiniNet& b) {
  double d = max_abs_diff(a.dense_weights(), b.dense_weights());
  for (std::size_t k = 0; k < a.conv().num_kernels(); ++k) {
    d = std::max(d, max_abs_diff(a.conv().kernels()[k][0], b.conv().kernels()[k][0]));
    d = std::max(d, std::abs(a.conv().bias()[k] - b.conv().bias()[k]));
  }
  for (std::size_t c = 0; c < a.classes(); ++c)
    d = std::max(d, std::abs(a.dense_bias()[c] - b.dense_bias()[c]));
  return d;
}

TEST(MiniNet, ClassifierInputSize) {
  const MiniNet net = MiniNet::initialize(16, 4, 5, 3, 1, {});
  EXPECT_EQ(net.dense_weights().cols(), 4u * 12 * 12);
  EXPECT_EQ(net.dense_weights().rows(), 3u);
  EXPECT_EQ(net.conv().channels(), 1u);
}

TEST(MiniNet, InitializationIsBoundedAndBackendIndependent) {
  const MiniNet a = MiniNet::initialize(10, 3, 3, 2, 5, {.backend = ConvBackend::Space});
  const MiniNet b = MiniNet::initialize(10, 3, 3, 2, 5, {.backend = ConvBackend::Oaa});
  EXPECT_EQ(max_weight_diff(a, b), 0.0);
  for (std::size_t k = 0; k < 3; ++k)
    for (double w : a.conv().kernels()[k][0].values()) EXPECT_LE(std::abs(w), 1.0 / 3.0);
  const double r = 1.0 / std::sqrt(3.0 * 8 * 8);
  for (double w : a.dense_weights().values()) EXPECT_LE(std::abs(w), r);
  for (double v : a.conv().bias()) EXPECT_EQ(v, 0.0);
}

TEST(MiniNet, RejectsMismatchedImage) {
  const MiniNet net = MiniNet::initialize(10, 2, 3, 2, 1, {});
  EXPECT_THROW(net.forward(Real2D(9, 9)), std::invalid_argument);
}

TEST(MiniNet, TiesGoToLowestClass) {
  MiniNet net = MiniNet::initialize(6, 1, 3, 3, 1, {});
  net.set_dense(Real2D(3, 16), {0.0, 0.0, 0.0});
  EXPECT_EQ(net.predict(Real2D(6, 6)), 0u);
  net.set_dense(Real2D(3, 16), {0.0, 1.0, 1.0});
  EXPECT_EQ(net.predict(Real2D(6, 6)), 1u);
}

TEST(Evaluate, UniformScoresGiveClassZeroFrequency) {
  MiniNet net = MiniNet::initialize(8, 2, 3, 4, 1, {});
  net.set_dense(Real2D(4, net.dense_weights().cols()), std::vector<double>(4, 0.25));
  Dataset d = synthesize_dataset(2, 4, 5, 8);
  EXPECT_DOUBLE_EQ(evaluate(net, d), 5.0 / 20.0);
  d.labels = {0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(evaluate(net, d), 3.0 / 20.0);
}

TEST(Evaluate, EmptyDatasetThrows) {
  const MiniNet net = MiniNet::initialize(8, 2, 3, 2, 1, {});
  Dataset empty;
  empty.classes = 2;
  EXPECT_THROW(evaluate(net, empty), std::invalid_argument);
  EXPECT_THROW(mean_loss(net, empty), std::invalid_argument);
}

TEST(Evaluate, LabelBeyondClassesThrows) {
  const MiniNet net = MiniNet::initialize(8, 2, 3, 2, 1, {});
  Dataset d = synthesize_dataset(1, 3, 1, 8);
  EXPECT_THROW(evaluate(net, d), std::invalid_argument);
}

TEST(TrainStep, ZeroLearningRateLeavesWeights) {
  MiniNet net = MiniNet::initialize(10, 2, 3, 2, 4, {});
  const MiniNet before = net;
  const Dataset d = synthesize_dataset(4, 2, 3, 10);
  std::vector<std::size_t> batch(d.size());
  std::iota(batch.begin(), batch.end(), 0);
  train_step(net, d, batch, 0.0);
  EXPECT_EQ(max_weight_diff(net, before), 0.0);
}

// Directional derivative of the batch loss against central differences.
TEST(TrainStep, UpdateFollowsNumericalGradient) {
  const Dataset d = synthesize_dataset(6, 2, 2, 8, 0.3);
  std::vector<std::size_t> batch{0, 1, 2, 3};
  const MiniNet base = MiniNet::initialize(8, 2, 3, 2, 6, {});
  auto batch_loss = [&](const MiniNet& n) {
    double s = 0.0;
    for (std::size_t i : batch) s += sample_loss(n, d.images[i], d.labels[i]);
    return s / static_cast<double>(batch.size());
  };
  const double lr = 1e-6;
  MiniNet stepped = base;
  train_step(stepped, d, batch, lr);

  // ||g||^2 from the parameter change, checked against (L(w) - L(w - lr g)).
  double g2 = 0.0;
  for (std::size_t i = 0; i < base.dense_weights().size(); ++i) {
    const double g = (base.dense_weights().data()[i] - stepped.dense_weights().data()[i]) / lr;
    g2 += g * g;
  }
  for (std::size_t c = 0; c < base.classes(); ++c) {
    const double g = (base.dense_bias()[c] - stepped.dense_bias()[c]) / lr;
    g2 += g * g;
  }
  for (std::size_t k = 0; k < base.conv().num_kernels(); ++k) {
    const auto a = base.conv().kernels()[k][0].values();
    const auto b = stepped.conv().kernels()[k][0].values();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double g = (a[i] - b[i]) / lr;
      g2 += g * g;
    }
    const double gb = (base.conv().bias()[k] - stepped.conv().bias()[k]) / lr;
    g2 += gb * gb;
  }
  const double decrease = batch_loss(base) - batch_loss(stepped);
  EXPECT_GT(g2, 0.0);
  EXPECT_NEAR(decrease / (lr * g2), 1.0, 1e-3);
}

TEST(Train, ValidatesConfig) {
  TrainConfig c = small_config(ConvBackend::Space);
  c.epochs = 0;
  EXPECT_THROW(train(c), std::invalid_argument);
  c = small_config(ConvBackend::Space);
  c.batch_size = 0;
  EXPECT_THROW(train(c), std::invalid_argument);
  c = small_config(ConvBackend::Space);
  c.learning_rate = 0.0;
  EXPECT_THROW(train(c), std::invalid_argument);
}

TEST(Train, RejectsMixedShapes) {
  Dataset d = synthesize_dataset(1, 2, 2, 10);
  d.images[1] = Real2D(9, 9);
  EXPECT_THROW(train(small_config(ConvBackend::Space), d), std::invalid_argument);
  d = synthesize_dataset(1, 2, 2, 4);
  TrainConfig c = small_config(ConvBackend::Space);
  c.kernel_size = 5;
  EXPECT_THROW(train(c, d), std::invalid_argument);
}

TEST(Train, TraceHasInitialAndEveryEpoch) {
  const TrainResult r = train(small_config(ConvBackend::Space));
  ASSERT_EQ(r.trace.size(), 3u);
  for (std::size_t e = 0; e < r.trace.size(); ++e) {
    EXPECT_EQ(r.trace[e].epoch, e);
    EXPECT_GE(r.trace[e].accuracy, 0.0);
    EXPECT_LE(r.trace[e].accuracy, 1.0);
  }
}

TEST(Train, FirstEpochLowersLoss) {
  const TrainResult r = train(small_config(ConvBackend::Space));
  EXPECT_LT(r.trace[1].mean_loss, r.trace[0].mean_loss);
}

TEST(Train, IsDeterministic) {
  const TrainResult a = train(small_config(ConvBackend::Oaa));
  const TrainResult b = train(small_config(ConvBackend::Oaa));
  EXPECT_EQ(max_weight_diff(a.net, b.net), 0.0);
  for (std::size_t e = 0; e < a.trace.size(); ++e)
    EXPECT_EQ(a.trace[e].mean_loss, b.trace[e].mean_loss);
}

TEST(Train, BackendsAgree) {
  const TrainResult space = train(small_config(ConvBackend::Space));
  const Dataset d = load_dataset(small_config(ConvBackend::Space));
  for (ConvBackend b : {ConvBackend::Fft, ConvBackend::Oaa}) {
    const TrainResult other = train(small_config(b));
    EXPECT_LE(max_weight_diff(space.net, other.net), 1e-6) << to_string(b);
    for (std::size_t e = 0; e < space.trace.size(); ++e) {
      EXPECT_LE(std::abs(space.trace[e].mean_loss - other.trace[e].mean_loss),
                1e-6 * std::abs(space.trace[e].mean_loss));
    }
    EXPECT_EQ(predict_all(space.net, d), predict_all(other.net, d));
  }
}

TEST(Train, NoiseFreeTemplatesAreLearned) {
  TrainConfig c = small_config(ConvBackend::Space);
  c.noise = 0.0;
  c.classes = 4;
  c.per_class = 4;
  c.image_size = 16;
  c.epochs = 30;
  c.batch_size = 4;
  const TrainResult r = train(c);
  EXPECT_EQ(evaluate(r.net, load_dataset(c)), 1.0);
}

TEST(Train, WritesTraceCsv) {
  const auto path = std::filesystem::temp_directory_path() / "oaaconv_trace_test.csv";
  write_trace_csv({{0, 1.5, 0.25}, {1, 0.75, 0.5}}, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "epoch,mean_loss,accuracy\n0,1.5,0.25\n1,0.75,0.5\n");
  std::filesystem::remove(path);
}

TEST(Train, MissingMnistDirectoryFails) {
  TrainConfig c = small_config(ConvBackend::Space);
  c.dataset = "/nonexistent/mnist";
  EXPECT_THROW(train(c), IdxError);
}

}  // namespace
}  // namespace oaaconv
