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

#ifndef OAACONV_DATASET_HPP_
#define OAACONV_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "oaaconv/tensor.hpp"

namespace oaaconv {

struct Dataset {
  std::vector<Real2D> images;
  std::vector<std::size_t> labels;
  std::size_t classes = 0;

  std::size_t size() const { return images.size(); }
};

class IdxError : public std::runtime_error {
 public:
  enum class Kind { Io, BadMagic, Truncated, CountMismatch };

  IdxError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// IDX containers: big-endian magic (0x00000803 images, 0x00000801 labels),
// big-endian 32-bit dimension sizes, unsigned-byte payload. Pixels are scaled
// to [0, 1].
std::vector<Real2D> load_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path);

// Pairs an image file with a label file; class count is max label + 1.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

// MNIST training split from a directory holding train-images-idx3-ubyte and
// train-labels-idx1-ubyte.
Dataset load_mnist(const std::filesystem::path& dir);

// Deterministic oriented-bar templates, one orientation per class, plus
// uniform noise in [-noise, noise]. Samples are ordered class by class.
Dataset synthesize_dataset(std::uint64_t seed, std::size_t classes,
                           std::size_t per_class, std::size_t size,
                           double noise = 0.1);

}  // namespace oaaconv

#endif  // OAACONV_DATASET_HPP_
