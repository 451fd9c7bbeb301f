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
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>

#include "oaaconv/dataset.hpp"

namespace oaaconv {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IdxError(IdxError::Kind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_++];
    return v;
  }

  const std::uint8_t* take(std::size_t n) {
    need(n);
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw IdxError(IdxError::Kind::Truncated,
                     path_.string() + ": truncated at byte " + std::to_string(pos_));
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::filesystem::path path_;
  std::size_t pos_ = 0;
};

void expect_magic(std::uint32_t got, std::uint32_t want,
                  const std::filesystem::path& path) {
  if (got != want) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "bad magic 0x%08x (expected 0x%08x)", got, want);
    throw IdxError(IdxError::Kind::BadMagic, path.string() + ": " + buf);
  }
}

}  // namespace

std::vector<Real2D> load_idx_images(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  Reader r(bytes, path);
  expect_magic(r.u32(), kImageMagic, path);
  const std::size_t count = r.u32();
  const std::size_t rows = r.u32();
  const std::size_t cols = r.u32();
  if (rows == 0 || cols == 0) {
    throw IdxError(IdxError::Kind::Truncated, path.string() + ": zero image dimension");
  }
  std::vector<Real2D> images;
  images.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t* p = r.take(rows * cols);
    Real2D img(rows, cols);
    for (std::size_t j = 0; j < rows * cols; ++j) img.data()[j] = p[j] / 255.0;
    images.push_back(std::move(img));
  }
  return images;
}

std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  Reader r(bytes, path);
  expect_magic(r.u32(), kLabelMagic, path);
  const std::size_t count = r.u32();
  const std::uint8_t* p = r.take(count);
  return {p, p + count};
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  Dataset ds;
  ds.images = load_idx_images(images);
  const auto raw = load_idx_labels(labels);
  if (raw.size() != ds.images.size()) {
    throw IdxError(IdxError::Kind::CountMismatch,
                   std::to_string(ds.images.size()) + " images but " +
                       std::to_string(raw.size()) + " labels");
  }
  ds.labels.assign(raw.begin(), raw.end());
  ds.classes = raw.empty() ? 0 : *std::max_element(raw.begin(), raw.end()) + 1u;
  return ds;
}

Dataset load_mnist(const std::filesystem::path& dir) {
  return load_idx(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte");
}

Dataset synthesize_dataset(std::uint64_t seed, std::size_t classes,
                           std::size_t per_class, std::size_t size, double noise) {
  if (classes == 0 || per_class == 0 || size == 0) {
    throw std::invalid_argument("synthesize_dataset: counts must be >= 1");
  }
  // Bar through the centre at angle pi*c/classes, roughly 1.5 px wide.
  std::vector<Real2D> templates;
  const double centre = (static_cast<double>(size) - 1.0) / 2.0;
  for (std::size_t c = 0; c < classes; ++c) {
    const double angle = std::numbers::pi * static_cast<double>(c) / static_cast<double>(classes);
    const double nx = -std::sin(angle);
    const double ny = std::cos(angle);
    Real2D t(size, size);
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        const double dist = std::abs((static_cast<double>(j) - centre) * nx +
                                     (static_cast<double>(i) - centre) * ny);
        t(i, j) = dist <= 0.75 ? 1.0 : 0.0;
      }
    }
    templates.push_back(std::move(t));
  }

  Dataset ds;
  ds.classes = classes;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t s = 0; s < per_class; ++s) {
      Real2D img = templates[c];
      if (noise != 0.0) {
        for (double& v : img.values()) v += noise * jitter(rng);
      }
      ds.images.push_back(std::move(img));
      ds.labels.push_back(c);
    }
  }
  return ds;
}

}  // namespace oaaconv
