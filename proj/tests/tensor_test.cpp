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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oaaconv/tensor.hpp"
#include "test_util.hpp"

namespace oaaconv {
namespace {

TEST(Real2DTest, RejectsZeroDimensions) {
  EXPECT_THROW(Real2D(0, 3), std::invalid_argument);
  EXPECT_THROW(Real2D(3, 0), std::invalid_argument);
  EXPECT_THROW(Real2D(2, 2, std::vector<double>(3)), std::invalid_argument);
}

TEST(Real2DTest, FromRowsIsRowMajor) {
  const Real2D a = Real2D::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(a.rows(), 2u);
  EXPECT_EQ(a.cols(), 3u);
  EXPECT_EQ(a(1, 0), 4.0);
  EXPECT_EQ(a.data()[2], 3.0);
  EXPECT_THROW(Real2D::from_rows({{1, 2}, {3}}), std::invalid_argument);
}

TEST(Tensor3DTest, ChannelsMustShareShape) {
  EXPECT_THROW(Tensor3D({Real2D(2, 2), Real2D(2, 3)}), std::invalid_argument);
  const Tensor3D t(3, {4, 5});
  EXPECT_EQ(t.channels(), 3u);
  EXPECT_EQ(t.shape(), (Shape{4, 5}));
}

TEST(KernelSetTest, KernelsMustShareChannelsAndShape) {
  EXPECT_THROW(KernelSet({Tensor3D(1, {3, 3}), Tensor3D(2, {3, 3})}),
               std::invalid_argument);
  EXPECT_THROW(KernelSet({Tensor3D(1, {3, 3}), Tensor3D(1, {2, 2})}),
               std::invalid_argument);
  const KernelSet ks(4, 2, {5, 5});
  EXPECT_EQ(ks.kernels(), 4u);
  EXPECT_EQ(ks.channels(), 2u);
}

TEST(ZeroPadTest, Examples) {
  EXPECT_EQ(zero_pad(Real2D::from_rows({{5}}), 2, 2),
            Real2D::from_rows({{5, 0}, {0, 0}}));
  const Real2D eye = Real2D::from_rows({{1, 0}, {0, 1}});
  EXPECT_EQ(zero_pad(eye, 2, 2), eye);
  EXPECT_EQ(zero_pad(Real2D::from_rows({{1}, {2}}), 3, 3),
            Real2D::from_rows({{1, 0, 0}, {2, 0, 0}, {0, 0, 0}}));
}

TEST(ZeroPadTest, RejectsShrinking) {
  EXPECT_THROW(zero_pad(Real2D(3, 3), 2, 3), std::invalid_argument);
  EXPECT_THROW(zero_pad(Real2D(3, 3), 3, 2), std::invalid_argument);
}

TEST(CropTest, Examples) {
  Real2D ones(3, 3);
  ones.fill(1.0);
  EXPECT_EQ(crop(ones, 0, 0, 3, 3), ones);
  const Real2D a = Real2D::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(crop(a, 1, 1, 1, 1), Real2D::from_rows({{4}}));
  EXPECT_EQ(crop(a, 0, 1, 2, 1), Real2D::from_rows({{2}, {4}}));
}

TEST(CropTest, RejectsOutOfBounds) {
  const Real2D a(2, 2);
  EXPECT_THROW(crop(a, 1, 0, 2, 1), std::out_of_range);
  EXPECT_THROW(crop(a, 0, 2, 1, 1), std::out_of_range);
}

TEST(Flip180Test, Examples) {
  EXPECT_EQ(flip180(Real2D::from_rows({{1, 2}, {3, 4}})),
            Real2D::from_rows({{4, 3}, {2, 1}}));
  const Real2D one = Real2D::from_rows({{7}});
  EXPECT_EQ(flip180(one), one);
  const Real2D rect = Real2D::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(flip180(rect), Real2D::from_rows({{6, 5, 4}, {3, 2, 1}}));
}

TEST(AccumulateAtTest, Examples) {
  Real2D dst(2, 2);
  accumulate_at(dst, Real2D::from_rows({{1}}), 1, 1);
  EXPECT_EQ(dst, Real2D::from_rows({{0, 0}, {0, 1}}));

  Real2D line(1, 3);
  accumulate_at(line, Real2D::from_rows({{1, 1}}), 0, 0);
  accumulate_at(line, Real2D::from_rows({{1, 1}}), 0, 1);
  EXPECT_EQ(line, Real2D::from_rows({{1, 2, 1}}));

  Real2D before = Real2D::from_rows({{1, 2}, {3, 4}});
  Real2D after = before;
  accumulate_at(after, Real2D(2, 2), 0, 0);
  EXPECT_EQ(after, before);
}

TEST(AccumulateAtTest, RejectsOutOfBounds) {
  Real2D dst(2, 2);
  EXPECT_THROW(accumulate_at(dst, Real2D(1, 1), 2, 0), std::out_of_range);
  EXPECT_THROW(accumulate_at(dst, Real2D(2, 2), 0, 1), std::out_of_range);
}

TEST(TensorPropertyTest, PadThenCropIsIdentity) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const Real2D a = testing::random_array(rng, dim(rng), dim(rng));
    const Real2D padded = zero_pad(a, a.rows() + dim(rng) - 1, a.cols() + dim(rng) - 1);
    EXPECT_EQ(crop(padded, 0, 0, a.rows(), a.cols()), a);
  }
}

TEST(TensorPropertyTest, FlipIsInvolutionAndPreservesValues) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const Real2D a = testing::random_array(rng, dim(rng), dim(rng));
    const Real2D f = flip180(a);
    EXPECT_EQ(flip180(f), a);
    std::vector<double> x(a.values().begin(), a.values().end());
    std::vector<double> y(f.values().begin(), f.values().end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    EXPECT_EQ(x, y);
  }
}

TEST(TensorPropertyTest, AccumulationOrderDoesNotMatter) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const Shape dst_shape{10, 10};
    struct Placement {
      Real2D src;
      std::size_t r, c;
    };
    std::vector<Placement> placements;
    for (int i = 0; i < 8; ++i) {
      Real2D src = testing::random_array(rng, dim(rng), dim(rng));
      std::uniform_int_distribution<std::size_t> rr(0, dst_shape.rows - src.rows());
      std::uniform_int_distribution<std::size_t> cc(0, dst_shape.cols - src.cols());
      const std::size_t r = rr(rng);
      const std::size_t c = cc(rng);
      placements.push_back({std::move(src), r, c});
    }
    Real2D forward(dst_shape);
    for (const auto& p : placements) accumulate_at(forward, p.src, p.r, p.c);
    std::shuffle(placements.begin(), placements.end(), rng);
    Real2D shuffled(dst_shape);
    for (const auto& p : placements) accumulate_at(shuffled, p.src, p.r, p.c);
    EXPECT_LE(max_abs_diff(forward, shuffled), 1e-12 * std::max(1.0, max_abs(forward)));
  }
}

}  // namespace
}  // namespace oaaconv
