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
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "oaaconv/bench.hpp"

namespace oaaconv::bench {

const std::vector<std::string> kCsvColumns{
    "experiment",         "phase",          "backend",         "input_rows",
    "input_cols",         "kernel_rows",    "kernel_cols",     "num_kernels",
    "channels",           "repeats",        "seed",            "threads",
    "mean_seconds",       "repeat_seconds", "complex_multiplies",
    "real_multiplies",    "setup_fraction", "speedup_vs_space"};

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> fields_of(const TimingRecord& r) {
  std::string repeats;
  for (std::size_t i = 0; i < r.repeat_seconds.size(); ++i) {
    if (i > 0) repeats += ';';
    repeats += format_double(r.repeat_seconds[i]);
  }
  return {std::string(to_string(r.experiment)),
          std::string(to_string(r.phase)),
          std::string(to_string(r.backend)),
          std::to_string(r.input.rows),
          std::to_string(r.input.cols),
          std::to_string(r.kernel.rows),
          std::to_string(r.kernel.cols),
          std::to_string(r.num_kernels),
          std::to_string(r.channels),
          std::to_string(r.repeats),
          std::to_string(r.seed),
          std::to_string(r.threads),
          format_double(r.mean_seconds),
          repeats,
          std::to_string(r.complex_multiplies),
          std::to_string(r.real_multiplies),
          r.setup_fraction ? format_double(*r.setup_fraction) : std::string(),
          format_double(r.speedup_vs_space)};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_integer(const std::string& s, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void write_csv(const std::vector<TimingRecord>& records, std::ostream& out) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    out << (i ? "," : "") << kCsvColumns[i];
  }
  out << '\n';
  for (const TimingRecord& r : records) {
    const auto f = fields_of(r);
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
    out << '\n';
  }
}

void write_csv(const std::vector<TimingRecord>& records,
               const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(records, out);
  out.flush();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::vector<TimingRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  if (split(line, ',') != kCsvColumns) throw std::runtime_error("csv: unexpected header");
  std::vector<TimingRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != kCsvColumns.size()) {
      throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(kCsvColumns.size()) + " fields");
    }
    TimingRecord r;
    const auto e = parse_experiment(f[0]);
    const auto b = parse_backend(f[2]);
    if (!e || !b || (f[1] != "forward" && f[1] != "backward")) {
      throw std::runtime_error("csv line " + std::to_string(lineno) + ": bad label");
    }
    r.experiment = *e;
    r.phase = f[1] == "forward" ? Phase::Forward : Phase::Backward;
    r.backend = *b;
    r.input = {parse_integer<std::size_t>(f[3], lineno), parse_integer<std::size_t>(f[4], lineno)};
    r.kernel = {parse_integer<std::size_t>(f[5], lineno), parse_integer<std::size_t>(f[6], lineno)};
    r.num_kernels = parse_integer<std::size_t>(f[7], lineno);
    r.channels = parse_integer<std::size_t>(f[8], lineno);
    r.repeats = parse_integer<std::size_t>(f[9], lineno);
    r.seed = parse_integer<std::uint64_t>(f[10], lineno);
    r.threads = parse_integer<unsigned>(f[11], lineno);
    r.mean_seconds = parse_double(f[12], lineno);
    if (!f[13].empty()) {
      for (const auto& t : split(f[13], ';')) r.repeat_seconds.push_back(parse_double(t, lineno));
    }
    r.complex_multiplies = parse_integer<std::uint64_t>(f[14], lineno);
    r.real_multiplies = parse_integer<std::uint64_t>(f[15], lineno);
    if (!f[16].empty()) r.setup_fraction = parse_double(f[16], lineno);
    r.speedup_vs_space = parse_double(f[17], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TimingRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_csv(in);
}

void write_table(const std::vector<TimingRecord>& records, std::ostream& out) {
  const std::vector<std::string> header{"experiment", "phase",   "backend", "input",
                                        "kernel",     "K",       "C",       "repeats",
                                        "seed",       "threads", "mean_ms", "complex_mul",
                                        "real_mul",   "setup",   "speedup"};
  std::vector<std::vector<std::string>> rows;
  rows.push_back(header);
  char buf[64];
  for (const TimingRecord& r : records) {
    std::vector<std::string> row{std::string(to_string(r.experiment)),
                                 std::string(to_string(r.phase)),
                                 std::string(to_string(r.backend)),
                                 to_string(r.input),
                                 to_string(r.kernel),
                                 std::to_string(r.num_kernels),
                                 std::to_string(r.channels),
                                 std::to_string(r.repeats),
                                 std::to_string(r.seed),
                                 std::to_string(r.threads)};
    std::snprintf(buf, sizeof buf, "%.4f", r.mean_seconds * 1e3);
    row.emplace_back(buf);
    row.push_back(std::to_string(r.complex_multiplies));
    row.push_back(std::to_string(r.real_multiplies));
    if (r.setup_fraction) {
      std::snprintf(buf, sizeof buf, "%.2f%%", *r.setup_fraction * 100.0);
      row.emplace_back(buf);
    } else {
      row.emplace_back("-");
    }
    std::snprintf(buf, sizeof buf, "%.2fx", r.speedup_vs_space);
    row.emplace_back(buf);
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << "  ";
      // Text columns left-aligned, numbers right-aligned.
      if (i < 3) {
        out << std::left << std::setw(static_cast<int>(width[i])) << row[i];
      } else {
        out << std::right << std::setw(static_cast<int>(width[i])) << row[i];
      }
    }
    out << std::left << '\n';
  }
}

}  // namespace oaaconv::bench
