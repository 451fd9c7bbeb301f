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

#include "oaaconv/counters.hpp"

#include <algorithm>
#include <atomic>

namespace oaaconv::counters {
namespace {

std::atomic<bool> g_enabled{false};
thread_local OpCounts t_counts;

}  // namespace

OpCounts& OpCounts::operator+=(const OpCounts& o) {
  butterfly_multiplies += o.butterfly_multiplies;
  hadamard_multiplies += o.hadamard_multiplies;
  real_multiplies += o.real_multiplies;
  transforms_2d += o.transforms_2d;
  backend_convolutions += o.backend_convolutions;
  if (o.largest_transform.size() > largest_transform.size()) {
    largest_transform = o.largest_transform;
  }
  return *this;
}

OpCounts operator-(OpCounts a, const OpCounts& b) {
  a.butterfly_multiplies -= b.butterfly_multiplies;
  a.hadamard_multiplies -= b.hadamard_multiplies;
  a.real_multiplies -= b.real_multiplies;
  a.transforms_2d -= b.transforms_2d;
  a.backend_convolutions -= b.backend_convolutions;
  return a;
}

void set_enabled(bool on) { g_enabled.store(on, std::memory_order_relaxed); }
bool enabled() { return g_enabled.load(std::memory_order_relaxed); }

void reset() { t_counts = OpCounts{}; }
OpCounts snapshot() { return t_counts; }
void merge(const OpCounts& delta) { t_counts += delta; }

void add_butterflies(std::uint64_t n) {
  if (enabled()) t_counts.butterfly_multiplies += n;
}
void add_hadamard(std::uint64_t n) {
  if (enabled()) t_counts.hadamard_multiplies += n;
}
void add_real(std::uint64_t n) {
  if (enabled()) t_counts.real_multiplies += n;
}
void add_transform(Shape s) {
  if (!enabled()) return;
  ++t_counts.transforms_2d;
  if (s.size() > t_counts.largest_transform.size()) t_counts.largest_transform = s;
}
void add_backend_convolution() {
  if (enabled()) ++t_counts.backend_convolutions;
}

ScopedCounting::ScopedCounting() : was_enabled_(enabled()) {
  set_enabled(true);
  reset();
}

ScopedCounting::~ScopedCounting() { set_enabled(was_enabled_); }

}  // namespace oaaconv::counters
