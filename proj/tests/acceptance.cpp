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

// Acceptance suite. Prints one PASS/FAIL line per criterion; with no
// arguments runs them all, otherwise only the listed criterion numbers.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oaaconv/bench.hpp"
#include "oaaconv/conv.hpp"
#include "oaaconv/counters.hpp"
#include "oaaconv/fft.hpp"
#include "oaaconv/layer.hpp"
#include "oaaconv/trainer.hpp"
#include "test_util.hpp"

namespace oaaconv {
namespace {

using testing::random_array;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Collects failures; the first few go into the detail text.
struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures == 0) return {true, summary};
    return {false, fmt("%zu/%zu checks failed: %s", failures, checks, first.c_str())};
  }
};

constexpr ConvBackend kFreq[] = {ConvBackend::Fft, ConvBackend::Oaa};
constexpr ConvBackend kAll[] = {ConvBackend::Space, ConvBackend::Fft, ConvBackend::Oaa};
constexpr ConvMode kModes[] = {ConvMode::Full, ConvMode::Valid, ConvMode::Same};

// 1. Frequency-domain backends reproduce the direct backend.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(101);
  Tally t;
  double worst = 0.0;
  auto check_point = [&](std::size_t N, std::size_t n) {
    const Real2D x = random_array(rng, N, N);
    const Real2D k = random_array(rng, n, n);
    const double tol = 1e-9 * static_cast<double>(n * n) * max_abs(x) * max_abs(k);
    // The direct backend itself against the definition.
    if (N <= 16) {
      const double d = max_abs_diff(space_conv(x, k, ConvMode::Full),
                                    testing::full_conv_oracle(x, k));
      t.expect(d <= tol, fmt("space vs definition N=%zu n=%zu: %.3g", N, n, d));
    }
    for (ConvMode mode : kModes) {
      const Real2D ref = space_conv(x, k, mode);
      for (ConvBackend b : kFreq) {
        const double d = max_abs_diff(conv(x, k, mode, b), ref);
        worst = std::max(worst, tol > 0 ? d / tol : 0.0);
        t.expect(d <= tol, fmt("%s %s N=%zu n=%zu: %.3g > %.3g",
                               std::string(to_string(b)).c_str(),
                               std::string(to_string(mode)).c_str(), N, n, d, tol));
      }
    }
  };
  for (std::size_t N = 1; N <= 32; ++N)
    for (std::size_t n = 1; n <= std::min<std::size_t>(N, 8); ++n) check_point(N, n);
  check_point(64, 5);
  check_point(224, 8);
  return t.outcome(fmt("%zu comparisons, worst error %.2g of tolerance", t.checks, worst));
}

// 2. Block count equals the product of ceilings.
Outcome block_count_law() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<std::size_t> big(1, 160);
  std::uniform_int_distribution<std::size_t> small(1, 24);
  Tally t;
  for (int i = 0; i < 500; ++i) {
    const std::size_t Nr = big(rng), Nc = big(rng), nr = small(rng), nc = small(rng);
    const BlockPartition p = partition_blocks(Real2D(Nr, Nc), nr, nc);
    const std::size_t expected = ((Nr + nr - 1) / nr) * ((Nc + nc - 1) / nc);
    t.expect(p.blocks.size() == expected,
             fmt("%zux%zu by %zux%zu: %zu blocks, expected %zu", Nr, Nc, nr, nc,
                 p.blocks.size(), expected));
  }
  return t.outcome("500 random partitions");
}

// 3. Layer gradients against central differences of L = <delta, forward(x)>.
double rel_err(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-3});
}

Outcome gradient_correctness() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<std::size_t> kc(1, 3);
  std::uniform_int_distribution<std::size_t> side(3, 8);
  Tally t;
  double worst = 0.0;
  const double h = 1e-5;
  for (int layer_id = 0; layer_id < 20; ++layer_id) {
    const std::size_t K = kc(rng), C = kc(rng), N = side(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, N)(rng);
    std::vector<Tensor3D> ks;
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<Real2D> ch;
      for (std::size_t c = 0; c < C; ++c) ch.push_back(random_array(rng, n, n));
      ks.emplace_back(std::move(ch));
    }
    std::vector<double> bias(K);
    for (double& b : bias) b = std::uniform_real_distribution<double>(-1, 1)(rng);
    std::vector<Real2D> xch;
    for (std::size_t c = 0; c < C; ++c) xch.push_back(random_array(rng, N, N));
    const Tensor3D x(std::move(xch));
    std::vector<Real2D> dch;
    for (std::size_t k = 0; k < K; ++k) dch.push_back(random_array(rng, N - n + 1, N - n + 1));
    const Tensor3D delta(std::move(dch));

    for (ConvBackend backend : kAll) {
      const LayerConfig cfg{.backend = backend, .cache_spectra = false};
      auto loss = [&](const KernelSet& w, const std::vector<double>& b, const Tensor3D& in) {
        const Tensor3D y = ConvLayer(w, b, cfg).forward(in);
        double s = 0.0;
        for (std::size_t k = 0; k < K; ++k)
          for (std::size_t i = 0; i < y[k].size(); ++i) s += y[k].data()[i] * delta[k].data()[i];
        return s;
      };
      const KernelSet w0(ks);
      const LayerGradients g = ConvLayer(w0, bias, cfg).backward(x, delta);
      auto note = [&](double a, double num, const char* what) {
        const double e = rel_err(a, num);
        worst = std::max(worst, e);
        t.expect(e <= 1e-5, fmt("layer %d %s %s: rel err %.3g", layer_id,
                                std::string(to_string(backend)).c_str(), what, e));
      };
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t i = 0; i < N * N; ++i) {
          Tensor3D xp = x, xm = x;
          xp[c].data()[i] += h;
          xm[c].data()[i] -= h;
          note(g.grad_input[c].data()[i], (loss(w0, bias, xp) - loss(w0, bias, xm)) / (2 * h),
               "grad_input");
        }
      }
      for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t c = 0; c < C; ++c) {
          for (std::size_t i = 0; i < n * n; ++i) {
            KernelSet wp = w0, wm = w0;
            wp[k][c].data()[i] += h;
            wm[k][c].data()[i] -= h;
            note(g.grad_kernels[k][c].data()[i],
                 (loss(wp, bias, x) - loss(wm, bias, x)) / (2 * h), "grad_kernels");
          }
        }
        std::vector<double> bp = bias, bm = bias;
        bp[k] += h;
        bm[k] -= h;
        note(g.grad_bias[k], (loss(w0, bp, x) - loss(w0, bm, x)) / (2 * h), "grad_bias");
      }
    }
  }
  return t.outcome(fmt("20 layers x 3 backends, %zu entries, worst rel err %.2g", t.checks, worst));
}

// 4. Operation-count laws.
counters::OpCounts count_conv(const Real2D& x, const Real2D& k, ConvMode mode, ConvBackend b) {
  counters::ScopedCounting scope;
  (void)conv(x, k, mode, b);
  return scope.counts();
}

Outcome complexity_laws() {
  std::mt19937_64 rng(404);
  Tally t;
  std::ostringstream detail;

  // (a) direct multiplies, Full mode
  std::uniform_int_distribution<std::size_t> side(1, 40);
  for (int i = 0; i < 50; ++i) {
    const std::size_t Nr = side(rng), Nc = side(rng);
    const std::size_t nr = std::uniform_int_distribution<std::size_t>(1, 9)(rng);
    const std::size_t nc = std::uniform_int_distribution<std::size_t>(1, 9)(rng);
    const auto c = count_conv(Real2D(Nr, Nc), Real2D(nr, nc), ConvMode::Full, ConvBackend::Space);
    const std::uint64_t expected = (Nr + nr - 1) * (Nc + nc - 1) * nr * nc;
    t.expect(c.real_multiplies == expected,
             fmt("(a) %zux%zu*%zux%zu: %llu != %llu", Nr, Nc, nr, nc,
                 static_cast<unsigned long long>(c.real_multiplies),
                 static_cast<unsigned long long>(expected)));
  }
  detail << "(a) 50 exact; (b) ratios";

  // (b) n = 5, doubling N
  const Real2D k5 = random_array(rng, 5, 5);
  std::uint64_t prev = 0;
  for (std::size_t N : {32u, 64u, 128u, 256u}) {
    const auto c = count_conv(random_array(rng, N, N), k5, ConvMode::Full, ConvBackend::Oaa);
    if (prev) {
      const double ratio = static_cast<double>(c.complex_multiplies()) / static_cast<double>(prev);
      detail << fmt(" %zu:%.3f", N, ratio);
      t.expect(ratio >= 3.5 && ratio <= 4.5,
               fmt("(b) OaA count ratio %zu->%zu is %.3f, outside [3.5, 4.5]", N / 2, N, ratio));
    }
    prev = c.complex_multiplies();
  }

  // (c) N = 256: FFT/OaA work ratio shrinks as n grows
  const Real2D x = random_array(rng, 256, 256);
  double last_ratio = 1e300;
  detail << "; (c) fft/oaa";
  for (std::size_t n : {4u, 8u, 16u}) {
    const Real2D k = random_array(rng, n, n);
    const double fft_c = static_cast<double>(count_conv(x, k, ConvMode::Full, ConvBackend::Fft).complex_multiplies());
    const double oaa_c = static_cast<double>(count_conv(x, k, ConvMode::Full, ConvBackend::Oaa).complex_multiplies());
    const double ratio = fft_c / oaa_c;
    detail << fmt(" n=%zu:%.2f(log ratio %.2f)", n, ratio, 8.0 / std::log2(static_cast<double>(n)));
    t.expect(ratio < last_ratio, fmt("(c) ratio did not decrease at n=%zu (%.3f)", n, ratio));
    last_ratio = ratio;
  }
  Outcome o = t.outcome(detail.str());
  if (!o.pass) o.detail += " | " + detail.str();
  return o;
}

// Mean of `repeats` timed calls after one warm-up.
double mean_time(std::size_t repeats, const std::function<void()>& f) {
  f();
  double total = 0.0;
  for (std::size_t r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    f();
    total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return total / static_cast<double>(repeats);
}

// 5. Wall-time ordering on 224x224 with an 8x8 kernel.
Outcome wall_time_ordering() {
  std::mt19937_64 rng(505);
  const Real2D x = random_array(rng, 224, 224);
  const Real2D k = random_array(rng, 8, 8);
  double mean[3];
  for (int i = 0; i < 3; ++i) {
    mean[i] = mean_time(10, [&] { (void)conv(x, k, ConvMode::Full, kAll[i]); });
  }
  const double speedup = mean[0] / mean[2];
  const bool ok = mean[2] < mean[1] && mean[1] < mean[0] && speedup >= 4.0;
  return {ok, fmt("space %.3f ms, fft %.3f ms, oaa %.3f ms; oaa speedup over space %.2fx "
                  "(required >= 4x, reference 16.3x)",
                  mean[0] * 1e3, mean[1] * 1e3, mean[2] * 1e3, speedup)};
}

// 6. Setup overhead of the two frequency-domain backends.
Outcome overhead_fractions() {
  const auto recs = bench::run_overhead(bench::default_spec(bench::Experiment::Overhead));
  double fft = 0.0, oaa = 0.0;
  for (const auto& r : recs) (r.backend == ConvBackend::Fft ? fft : oaa) = *r.setup_fraction;
  const bool ok = oaa < fft && oaa < 0.10;
  return {ok, fmt("setup fraction oaa %.2f%% (reference 1.6%%), fft %.2f%% (reference 8.2%%)",
                  oaa * 100, fft * 100)};
}

// 7. Identical work when the kernel is as large as the input.
Outcome convergence_at_full_kernel() {
  std::mt19937_64 rng(707);
  const Real2D x = random_array(rng, 64, 64);
  const Real2D k = random_array(rng, 64, 64);
  const auto f = count_conv(x, k, ConvMode::Full, ConvBackend::Fft);
  const auto o = count_conv(x, k, ConvMode::Full, ConvBackend::Oaa);
  const bool ok = f.largest_transform == o.largest_transform &&
                  f.complex_multiplies() == o.complex_multiplies() &&
                  fft_padded_shape(x.shape(), k.shape()) == oaa_padded_shape(k.shape());
  return {ok, fmt("transforms fft %s / oaa %s, complex multiplies %llu / %llu",
                  to_string(f.largest_transform).c_str(), to_string(o.largest_transform).c_str(),
                  static_cast<unsigned long long>(f.complex_multiplies()),
                  static_cast<unsigned long long>(o.complex_multiplies()))};
}

// 8. Training traces and predictions agree across backends.
Outcome training_consistency() {
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.seed = 2024;
  const Dataset data = load_dataset(cfg);
  std::vector<TrainResult> runs;
  for (ConvBackend b : kAll) {
    cfg.backend = b;
    runs.push_back(train(cfg, data));
  }
  Tally t;
  double worst = 0.0;
  const auto ref_pred = predict_all(runs[0].net, data);
  for (std::size_t i = 1; i < runs.size(); ++i) {
    for (std::size_t e = 0; e < runs[0].trace.size(); ++e) {
      const double a = runs[0].trace[e].mean_loss;
      const double d = std::abs(runs[i].trace[e].mean_loss - a) / std::abs(a);
      worst = std::max(worst, d);
      t.expect(d <= 1e-6, fmt("%s epoch %zu loss rel diff %.3g",
                              std::string(to_string(kAll[i])).c_str(), e, d));
    }
    t.expect(predict_all(runs[i].net, data) == ref_pred,
             fmt("%s predictions differ", std::string(to_string(kAll[i])).c_str()));
  }
  return t.outcome(fmt("%zu epochs, final loss %.4f, accuracy %.3f, worst loss rel diff %.2g",
                       cfg.epochs, runs[0].trace.back().mean_loss, runs[0].trace.back().accuracy,
                       worst));
}

// 9. FFT properties against the direct DFT.
double max_abs_vec(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const Complex& z : v) m = std::max(m, std::abs(z));
  return m;
}

Outcome fft_properties() {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(-1, 1);
  Tally t;
  auto random_vec = [&](std::size_t L) {
    std::vector<Complex> v(L);
    for (Complex& z : v) z = {u(rng), u(rng)};
    return v;
  };
  // Round trip, 2-D up to 256x256.
  for (std::size_t r = 1; r <= 256; r *= 2) {
    for (std::size_t c : {std::size_t{1}, r, std::size_t{256} / r}) {
      const Complex2D x = testing::random_complex(rng, r, c);
      const Complex2D back = fft::fft2d(fft::fft2d(x, fft::Direction::Forward), fft::Direction::Inverse);
      double mx = 0.0;
      for (const Complex& z : x.values()) mx = std::max(mx, std::abs(z));
      t.expect(testing::max_abs_complex_diff(back, x) <= 1e-10 * mx,
               fmt("round trip %zux%zu", r, c));
    }
  }
  // Linearity and Parseval, 1-D and 2-D.
  for (std::size_t L = 1; L <= 1024; L *= 2) {
    const auto x = random_vec(L), y = random_vec(L);
    const Complex a{0.7, -1.3}, b{-2.1, 0.4};
    std::vector<Complex> mix(L);
    for (std::size_t i = 0; i < L; ++i) mix[i] = a * x[i] + b * y[i];
    const auto X = fft::fft1d(x, fft::Direction::Forward);
    const auto Y = fft::fft1d(y, fft::Direction::Forward);
    const auto M = fft::fft1d(mix, fft::Direction::Forward);
    std::vector<Complex> combo(L);
    double diff = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      combo[i] = a * X[i] + b * Y[i];
      diff = std::max(diff, std::abs(M[i] - combo[i]));
    }
    t.expect(diff <= 1e-10 * max_abs_vec(combo), fmt("linearity L=%zu", L));
    double ex = 0.0, eX = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      ex += std::norm(x[i]);
      eX += std::norm(X[i]);
    }
    eX /= static_cast<double>(L);
    t.expect(std::abs(ex - eX) <= 1e-10 * ex, fmt("Parseval L=%zu", L));
  }
  for (std::size_t P : {2u, 8u, 32u, 128u}) {
    const Complex2D x = testing::random_complex(rng, P, P);
    const Complex2D X = fft::fft2d(x, fft::Direction::Forward);
    double ex = 0.0, eX = 0.0;
    for (const Complex& z : x.values()) ex += std::norm(z);
    for (const Complex& z : X.values()) eX += std::norm(z);
    eX /= static_cast<double>(P * P);
    t.expect(std::abs(ex - eX) <= 1e-10 * ex, fmt("2-D Parseval %zu", P));
  }
  // Oracle equivalence.
  for (std::size_t L : {1u, 2u, 4u, 8u, 16u}) {
    const auto x = random_vec(L);
    for (int sign : {-1, 1}) {
      const auto got = fft::fft1d(x, sign < 0 ? fft::Direction::Forward : fft::Direction::Inverse);
      const auto want = testing::dft_oracle(x, sign);
      double d = 0.0;
      for (std::size_t i = 0; i < L; ++i) d = std::max(d, std::abs(got[i] - want[i]));
      t.expect(d <= 1e-10, fmt("1-D oracle L=%zu sign %d: %.3g", L, sign, d));
    }
  }
  for (std::size_t r : {1u, 2u, 4u, 8u, 16u}) {
    for (std::size_t c : {1u, 4u, 16u}) {
      const Complex2D x = testing::random_complex(rng, r, c);
      const double d = testing::max_abs_complex_diff(fft::fft2d(x, fft::Direction::Forward),
                                                     testing::dft2d_oracle(x));
      t.expect(d <= 1e-10, fmt("2-D oracle %zux%zu: %.3g", r, c, d));
    }
  }
  // Butterfly counts.
  for (std::size_t L = 1; L <= 1024; L *= 2) {
    counters::ScopedCounting scope;
    (void)fft::fft1d(random_vec(L), fft::Direction::Forward);
    const std::uint64_t want = (L / 2) * static_cast<std::uint64_t>(std::countr_zero(L));
    t.expect(scope.counts().butterfly_multiplies == want, fmt("1-D count L=%zu", L));
  }
  for (std::size_t P = 1; P <= 256; P *= 2) {
    const Complex2D x(P, P);
    counters::ScopedCounting scope;
    (void)fft::fft2d(x, fft::Direction::Inverse);
    const std::uint64_t want = 2 * P * (P / 2) * static_cast<std::uint64_t>(std::countr_zero(P));
    t.expect(scope.counts().butterfly_multiplies == want, fmt("2-D count P=%zu", P));
  }
  {
    counters::ScopedCounting scope;
    (void)fft::fft1d(random_vec(8), fft::Direction::Forward);
    t.expect(scope.counts().butterfly_multiplies == 12, "length-8 count is 12");
  }
  return t.outcome(fmt("%zu property checks", t.checks));
}

// 10. CSV output is reproducible apart from timing columns.
std::vector<std::string> non_timing_rows(const std::vector<bench::TimingRecord>& recs) {
  std::ostringstream os;
  bench::write_csv(recs, os);
  std::istringstream in(os.str());
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.push_back("");
    std::string keep;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string& name = bench::kCsvColumns[i];
      const bool timing = name == "mean_seconds" || name == "repeat_seconds" ||
                          name == "setup_fraction" || name == "speedup_vs_space";
      keep += (i ? "," : "") + (timing && rows.size() > 0 ? std::string("*") : f[i]);
    }
    rows.push_back(keep);
  }
  return rows;
}

Outcome csv_contract() {
  bench::ExperimentSpec spec = bench::default_spec(bench::Experiment::KernelCount);
  spec.repeats = 1;
  spec.sweep = {25, 100, 25};
  const auto a = non_timing_rows(bench::run(spec));
  const auto b = non_timing_rows(bench::run(spec));
  Tally t;
  t.expect(a == b, "non-timing columns differ between runs");
  t.expect(a.front() ==
               "experiment,phase,backend,input_rows,input_cols,kernel_rows,kernel_cols,"
               "num_kernels,channels,repeats,seed,threads,mean_seconds,repeat_seconds,"
               "complex_multiplies,real_multiplies,setup_fraction,speedup_vs_space",
           "header mismatch");
  t.expect(a.size() == 1 + 4 * 3, fmt("expected 13 lines, got %zu", a.size()));
  // Golden rows for the direct backend: K * 28^2 outputs * 25 multiplies each.
  for (std::size_t i = 0; i < 4 && 1 + 3 * i < a.size(); ++i) {
    const std::size_t K = 25 * (i + 1);
    const std::string want = fmt("kernel-count,forward,space,32,32,5,5,%zu,1,1,1,1,*,*,0,%zu,*,*",
                                 K, K * 784 * 25);
    t.expect(a[1 + 3 * i] == want, "golden row mismatch: " + a[1 + 3 * i]);
  }
  return t.outcome(fmt("%zu rows identical across runs", a.size()));
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
  double budget_seconds;
};

const Criterion kCriteria[] = {
    {1, "oracle equivalence", oracle_equivalence, 120},
    {2, "block-count law", block_count_law, 60},
    {3, "gradient correctness", gradient_correctness, 60},
    {4, "complexity laws via op counters", complexity_laws, 60},
    {5, "wall-time ordering at 224x224 / 8x8", wall_time_ordering, 120},
    {6, "overhead fractions", overhead_fractions, 120},
    {7, "convergence at n = N = 64", convergence_at_full_kernel, 60},
    {8, "training consistency across backends", training_consistency, 120},
    {9, "FFT property suite", fft_properties, 30},
    {10, "CSV contract", csv_contract, 120},
};

}  // namespace
}  // namespace oaaconv

int main(int argc, char** argv) {
  using namespace oaaconv;
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const Criterion& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      o.pass = false;
      o.detail += fmt(" | over time budget of %.0f s", c.budget_seconds);
    }
    std::printf("criterion %2d %s: %s | %s | %.2f s\n", c.id, o.pass ? "PASS" : "FAIL", c.title,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
