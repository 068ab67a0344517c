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

// Independent reference implementations used only by tests. Nothing here
// calls into the library's DSP or linear-algebra code.

#ifndef FLOWVOC_TESTS_SUPPORT_ORACLES_H_
#define FLOWVOC_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace flowvoc::testing {

// X[k] = sum_n x[n] exp(-2 pi i k n / N), evaluated term by term.
inline std::vector<std::complex<double>> NaiveDft(
    const std::vector<double>& x) {
  const size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (size_t t = 0; t < n; ++t) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / n;
      acc += x[t] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  return out;
}

// Centered short-time spectrum: mirror-pad by filter/2 without repeating the
// edge, frame t starts at t * hop, periodic Hann of win_length centered in a
// filter_length frame. Returns frames[t][k] for k <= filter/2.
inline std::vector<std::vector<std::complex<double>>> NaiveStft(
    const std::vector<float>& x, int filter, int hop, int win) {
  const int pad = filter / 2;
  const int n = static_cast<int>(x.size());
  std::vector<double> padded;
  for (int i = -pad; i < n + pad; ++i) {
    int j = i;
    // Reflect repeatedly until in range; a length-1 signal maps to itself.
    while (n > 1 && (j < 0 || j >= n)) {
      if (j < 0) j = -j;
      if (j >= n) j = 2 * (n - 1) - j;
    }
    padded.push_back(n == 1 ? x[0] : x[j]);
  }
  std::vector<double> window(filter, 0.0);
  const int offset = (filter - win) / 2;
  for (int i = 0; i < win; ++i) {
    window[offset + i] =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / win));
  }
  const int frames = n / hop + 1;
  std::vector<std::vector<std::complex<double>>> out;
  for (int t = 0; t < frames; ++t) {
    std::vector<double> frame(filter);
    for (int i = 0; i < filter; ++i) frame[i] = padded[t * hop + i] * window[i];
    auto spec = NaiveDft(frame);
    spec.resize(filter / 2 + 1);
    out.push_back(std::move(spec));
  }
  return out;
}

// Unit-peak triangles with edges equally spaced on 2595 log10(1 + f/700).
inline std::vector<std::vector<double>> DirectMelFilterbank(
    int n_mels, int filter, int sample_rate, double fmin, double fmax) {
  const auto to_mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  const auto to_hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  const double lo = to_mel(fmin), hi = to_mel(fmax);
  std::vector<std::vector<double>> fb(n_mels,
                                      std::vector<double>(filter / 2 + 1));
  for (int m = 0; m < n_mels; ++m) {
    const double a = to_hz(lo + (hi - lo) * m / (n_mels + 1));
    const double b = to_hz(lo + (hi - lo) * (m + 1) / (n_mels + 1));
    const double c = to_hz(lo + (hi - lo) * (m + 2) / (n_mels + 1));
    for (int k = 0; k <= filter / 2; ++k) {
      const double f = static_cast<double>(k) * sample_rate / filter;
      double w = 0.0;
      if (f > a && f <= b) w = (f - a) / (b - a);
      else if (f > b && f < c) w = (c - f) / (c - b);
      fb[m][k] = w;
    }
  }
  return fb;
}

// y[o][t] = sum_{i,j} w[o][i][j] x[i][t + (j - (K-1)/2) d], zero outside.
inline std::vector<std::vector<double>> NaiveDilatedConv(
    const std::vector<std::vector<double>>& x,
    const std::vector<std::vector<std::vector<double>>>& w, int dilation) {
  const int out_ch = static_cast<int>(w.size());
  const int in_ch = static_cast<int>(x.size());
  const int len = static_cast<int>(x[0].size());
  const int k = static_cast<int>(w[0][0].size());
  std::vector<std::vector<double>> y(out_ch, std::vector<double>(len, 0.0));
  for (int o = 0; o < out_ch; ++o) {
    for (int t = 0; t < len; ++t) {
      double acc = 0.0;
      for (int i = 0; i < in_ch; ++i) {
        for (int j = 0; j < k; ++j) {
          const int src = t + (j - (k - 1) / 2) * dilation;
          if (src >= 0 && src < len) acc += w[o][i][j] * x[i][src];
        }
      }
      y[o][t] = acc;
    }
  }
  return y;
}

// ln |det A| by Gaussian elimination with partial pivoting. A is row-major
// n x n; returns -inf for a singular matrix.
inline double LuLogAbsDet(std::vector<double> a, size_t n) {
  double log_det = 0.0;
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (a[pivot * n + col] == 0.0) return -INFINITY;
    if (pivot != col) {
      for (size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
    }
    const double p = a[col * n + col];
    log_det += std::log(std::abs(p));
    for (size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / p;
      for (size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
    }
  }
  return log_det;
}

// ln |det J| of f at x with J from central differences of step eps.
inline double NumericalLogAbsDetJacobian(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    std::vector<double> x, double eps) {
  const size_t n = x.size();
  std::vector<double> jac(n * n);
  for (size_t i = 0; i < n; ++i) {
    const double saved = x[i];
    x[i] = saved + eps;
    const auto plus = f(x);
    x[i] = saved - eps;
    const auto minus = f(x);
    x[i] = saved;
    for (size_t j = 0; j < n; ++j) {
      jac[j * n + i] = (plus[j] - minus[j]) / (2.0 * eps);
    }
  }
  return LuLogAbsDet(std::move(jac), n);
}

// Central difference of a scalar function of one coordinate.
inline double CentralDifference(const std::function<double(double)>& f,
                                double x, double eps) {
  return (f(x + eps) - f(x - eps)) / (2.0 * eps);
}

}  // namespace flowvoc::testing

#endif  // FLOWVOC_TESTS_SUPPORT_ORACLES_H_
