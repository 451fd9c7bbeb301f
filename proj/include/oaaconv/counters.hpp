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

#ifndef OAACONV_COUNTERS_HPP_
#define OAACONV_COUNTERS_HPP_

#include <cstdint>

#include "oaaconv/tensor.hpp"

namespace oaaconv::counters {

// Hardware-independent operation counts. Complex multiplies are split into
// FFT butterflies and frequency-domain (Hadamard) products.
struct OpCounts {
  std::uint64_t butterfly_multiplies = 0;
  std::uint64_t hadamard_multiplies = 0;
  std::uint64_t real_multiplies = 0;
  std::uint64_t transforms_2d = 0;
  std::uint64_t backend_convolutions = 0;
  // Largest 2-D transform dispatched since the last reset.
  Shape largest_transform{0, 0};

  std::uint64_t complex_multiplies() const {
    return butterfly_multiplies + hadamard_multiplies;
  }

  OpCounts& operator+=(const OpCounts& o);
  friend OpCounts operator-(OpCounts a, const OpCounts& b);
  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

// Counting is off until enabled. Counts live per thread; parallel backends
// fold their workers' counts into the calling thread with merge().
void set_enabled(bool on);
bool enabled();

void reset();
OpCounts snapshot();
void merge(const OpCounts& delta);

void add_butterflies(std::uint64_t n);
void add_hadamard(std::uint64_t n);
void add_real(std::uint64_t n);
void add_transform(Shape s);
void add_backend_convolution();

// Enables counting and resets for the lifetime of the guard; restores the
// previous enabled flag afterwards.
class ScopedCounting {
 public:
  ScopedCounting();
  ~ScopedCounting();
  ScopedCounting(const ScopedCounting&) = delete;
  ScopedCounting& operator=(const ScopedCounting&) = delete;

  OpCounts counts() const { return snapshot(); }

 private:
  bool was_enabled_;
};

}  // namespace oaaconv::counters

#endif  // OAACONV_COUNTERS_HPP_
