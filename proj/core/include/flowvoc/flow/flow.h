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

#ifndef FLOWVOC_FLOW_FLOW_H_
#define FLOWVOC_FLOW_FLOW_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "flowvoc/dsp/audio.h"
#include "flowvoc/dsp/mel.h"
#include "flowvoc/flow/model.h"
#include "flowvoc/random.h"

namespace flowvoc::flow {

// Terms of the negative log-likelihood. The three components are raw sums
// over the whole latent; `total` is their combination divided by the number
// of latent entries n:
//   total = (z_term - log_s_term - log_det_w_term) / n
// with z_term = sum z^2 / (2 sigma^2). The Gaussian normalizer
// (n / 2) ln(2 pi sigma^2) is excluded, so
//   ln p(x | mel) = -(total * n) - (n / 2) ln(2 pi sigma^2).
struct LossBreakdown {
  double z_term = 0.0;
  double log_s_term = 0.0;
  double log_det_w_term = 0.0;
  double total = 0.0;
};

template <typename T>
struct ForwardResult {
  Tensor<T> z;  // [group_size x frames], rows in emission order
  double sum_log_s = 0.0;
  double sum_log_det_w = 0.0;
};

// channel c, frame t <- samples[t * group_size + c]. kNotDivisible unless
// the length is a positive multiple of group_size.
template <typename T>
Tensor<T> Squeeze(std::span<const T> samples, int group_size);

template <typename T>
std::vector<T> Unsqueeze(const Tensor<T>& grouped);

// Repeats each mel frame hop_length / group_size times and keeps exactly
// `frames` columns. kConfigInvalid if group_size does not divide hop_length,
// kMelTooShort if the mel has fewer than ceil(frames / repeat) frames.
template <typename T>
Tensor<T> UpsampleCondition(const dsp::MelSpectrogram& mel, int frames,
                            int group_size);

// ln |det W| in double precision; kSingularW when |det W| < 1e-12.
template <typename T>
double LogAbsDet(const Tensor<T>& w);

template <typename T>
struct InvConvResult {
  Tensor<T> y;
  double log_det_term = 0.0;  // frames * ln |det W|
};

template <typename T>
InvConvResult<T> InvConvForward(const Tensor<T>& x, const Tensor<T>& w);

template <typename T>
Tensor<T> InvConvInverse(const Tensor<T>& y, const Tensor<T>& w);

template <typename T>
struct CouplingResult {
  Tensor<T> y;
  double sum_log_s = 0.0;
};

// The first ceil(C/2) channels pass through and condition the network; the
// rest become x_b * exp(log_s) + shift.
template <typename T>
CouplingResult<T> CouplingForward(const Tensor<T>& x, const Tensor<T>& cond,
                                  const WaveNetParams<T>& params);

// kNonFiniteScale if the network emits a non-finite log-scale.
template <typename T>
Tensor<T> CouplingInverse(const Tensor<T>& y, const Tensor<T>& cond,
                          const WaveNetParams<T>& params);

// cond is the upsampled conditioning [n_mel x frames].
template <typename T>
ForwardResult<T> FlowForward(std::span<const T> segment, const Tensor<T>& cond,
                             const FlowModel<T>& model);

template <typename T>
ForwardResult<T> FlowForward(std::span<const T> segment,
                             const dsp::MelSpectrogram& mel,
                             const FlowModel<T>& model);

// kConfigInvalid for sigma <= 0, kNonFinite if any term is not finite.
template <typename T>
LossBreakdown NegativeLogLikelihood(const ForwardResult<T>& result,
                                    double sigma);

template <typename T>
std::vector<T> FlowInverse(const Tensor<T>& z, const Tensor<T>& cond,
                           const FlowModel<T>& model);

template <typename T>
std::vector<T> FlowInverse(const Tensor<T>& z, const dsp::MelSpectrogram& mel,
                           const FlowModel<T>& model);

// i.i.d. N(0, sigma^2), shape [n_entries].
template <typename T>
Tensor<T> SampleLatent(size_t n_entries, double sigma, Rng& rng);

// Samples a latent and inverts the flow. The output has
// group_size * frames samples, where frames = num_samples / group_size when
// a target length is given and n_frames * hop / group_size otherwise.
template <typename T>
dsp::AudioClip Infer(const dsp::MelSpectrogram& mel, const FlowModel<T>& model,
                     double sigma, Rng& rng,
                     std::optional<size_t> num_samples = std::nullopt);

}  // namespace flowvoc::flow

#endif  // FLOWVOC_FLOW_FLOW_H_
