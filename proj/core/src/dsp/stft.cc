// Copyright 2026 The Flowvoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowvoc/dsp/stft.h"

#include <cmath>
#include <numbers>
#include <string>

#include "flowvoc/error.h"

namespace flowvoc::dsp {

std::string_view WindowName(WindowType window) {
  switch (window) {
    case WindowType::kHann: return "hann";
  }
  return "unknown";
}

WindowType ParseWindow(std::string_view name) {
  if (name == "hann") return WindowType::kHann;
  throw Error(ErrorCode::kConfigInvalid,
              "unknown window '" + std::string(name) + "'");
}

void StftConfig::Validate() const {
  if (filter_length <= 0 || hop_length <= 0 || win_length <= 0) {
    throw Error(ErrorCode::kConfigInvalid, "STFT lengths must be positive");
  }
  if (win_length > filter_length) {
    throw Error(ErrorCode::kConfigInvalid, "win_length exceeds filter_length");
  }
  if (hop_length > win_length) {
    throw Error(ErrorCode::kConfigInvalid, "hop_length exceeds win_length");
  }
  if (filter_length % 2 != 0) {
    throw Error(ErrorCode::kConfigInvalid, "filter_length must be even");
  }
}

std::vector<double> AnalysisWindow(const StftConfig& cfg) {
  std::vector<double> window(cfg.filter_length, 0.0);
  const int offset = (cfg.filter_length - cfg.win_length) / 2;
  for (int n = 0; n < cfg.win_length; ++n) {
    window[offset + n] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / cfg.win_length);
  }
  return window;
}

namespace {

bool IsPowerOfTwo(size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void Radix2(std::span<std::complex<double>> a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<std::complex<double>> twiddle(n / 2);
  for (size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len / 2;
    const size_t stride = n / len;
    for (size_t start = 0; start < n; start += len) {
      for (size_t k = 0; k < half; ++k) {
        const std::complex<double> u = a[start + k];
        const std::complex<double> v = a[start + k + half] * twiddle[k * stride];
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

void DirectDft(std::span<std::complex<double>> a) {
  const size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * std::numbers::pi *
                           static_cast<double>((k * t) % n) /
                           static_cast<double>(n);
      acc += a[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  std::copy(out.begin(), out.end(), a.begin());
}

}  // namespace

void ForwardDft(std::span<std::complex<double>> values) {
  if (IsPowerOfTwo(values.size())) {
    Radix2(values);
  } else {
    DirectDft(values);
  }
}

size_t ReflectIndex(long long index, size_t n) {
  if (n == 1) return 0;
  const long long period = 2 * static_cast<long long>(n - 1);
  long long m = index % period;
  if (m < 0) m += period;
  return static_cast<size_t>(m < static_cast<long long>(n) ? m : period - m);
}

ComplexMatrix Stft(std::span<const float> samples, const StftConfig& cfg) {
  cfg.Validate();
  if (samples.empty()) {
    throw Error(ErrorCode::kEmptyAudio, "STFT of an empty signal");
  }
  const std::vector<double> window = AnalysisWindow(cfg);
  const int n_fft = cfg.filter_length;
  const long long pad = n_fft / 2;
  ComplexMatrix out;
  out.rows = cfg.num_bins();
  out.cols = cfg.NumFrames(samples.size());
  out.data.assign(static_cast<size_t>(out.rows) * out.cols, 0.0);

  std::vector<std::complex<double>> frame(n_fft);
  for (int t = 0; t < out.cols; ++t) {
    const long long start = static_cast<long long>(t) * cfg.hop_length - pad;
    for (int i = 0; i < n_fft; ++i) {
      const size_t src = ReflectIndex(start + i, samples.size());
      frame[i] = window[i] * static_cast<double>(samples[src]);
    }
    ForwardDft(frame);
    for (int k = 0; k < out.rows; ++k) out.at(k, t) = frame[k];
  }
  return out;
}

}  // namespace flowvoc::dsp
