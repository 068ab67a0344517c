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

#include "flowvoc/flow/flow.h"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "flowvoc/flow/wavenet.h"

namespace flowvoc::flow {

using numerics::ConcatRows;
using numerics::ShapeString;
using numerics::SliceRows;

namespace {

constexpr double kMinAbsDet = 1e-12;

template <typename T>
Eigen::MatrixXd ToEigen(const Tensor<T>& w) {
  numerics::RequireRank(w, 2, "W");
  if (w.dim(0) != w.dim(1)) {
    throw Error(ErrorCode::kShapeMismatch,
                "W must be square, got " + ShapeString(w.shape()));
  }
  const auto n = static_cast<Eigen::Index>(w.dim(0));
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = w.at(r, c);
  }
  return m;
}

// y[:, t] = m * x[:, t].
template <typename T>
Tensor<T> ApplyPerFrame(const Eigen::MatrixXd& m, const Tensor<T>& x) {
  const size_t c = x.dim(0);
  const size_t len = x.dim(1);
  Tensor<T> y({c, len});
  for (size_t r = 0; r < c; ++r) {
    T* dst = y.row(r);
    for (size_t k = 0; k < c; ++k) {
      const T w = static_cast<T>(m(static_cast<Eigen::Index>(r),
                                   static_cast<Eigen::Index>(k)));
      const T* src = x.row(k);
      for (size_t t = 0; t < len; ++t) dst[t] += w * src[t];
    }
  }
  return y;
}

template <typename T>
void CheckFrames(const Tensor<T>& x, const Tensor<T>& w, const char* op) {
  numerics::RequireRank(x, 2, op);
  if (w.rank() != 2 || w.dim(0) != x.dim(0) || w.dim(1) != x.dim(0)) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(op) + ": W " + ShapeString(w.shape()) +
                    " vs input " + ShapeString(x.shape()));
  }
}

template <typename T>
void CheckCondition(const Tensor<T>& cond, const FlowConfig& cfg,
                    size_t frames) {
  if (cond.rank() != 2 ||
      cond.dim(0) != static_cast<size_t>(cfg.n_mel_channels) ||
      cond.dim(1) != frames) {
    throw Error(ErrorCode::kShapeMismatch,
                "conditioning " + ShapeString(cond.shape()) + " expected [" +
                    std::to_string(cfg.n_mel_channels) + "x" +
                    std::to_string(frames) + "]");
  }
}

}  // namespace

template <typename T>
Tensor<T> Squeeze(std::span<const T> samples, int group_size) {
  if (group_size < 1 || samples.empty() ||
      samples.size() % static_cast<size_t>(group_size) != 0) {
    throw Error(ErrorCode::kNotDivisible,
                std::to_string(samples.size()) +
                    " samples cannot be split into groups of " +
                    std::to_string(group_size));
  }
  const auto g = static_cast<size_t>(group_size);
  const size_t frames = samples.size() / g;
  Tensor<T> out({g, frames});
  for (size_t t = 0; t < frames; ++t) {
    for (size_t c = 0; c < g; ++c) out.at(c, t) = samples[t * g + c];
  }
  return out;
}

template <typename T>
std::vector<T> Unsqueeze(const Tensor<T>& grouped) {
  numerics::RequireRank(grouped, 2, "Unsqueeze");
  const size_t g = grouped.dim(0);
  const size_t frames = grouped.dim(1);
  std::vector<T> out(g * frames);
  for (size_t t = 0; t < frames; ++t) {
    for (size_t c = 0; c < g; ++c) out[t * g + c] = grouped.at(c, t);
  }
  return out;
}

template <typename T>
Tensor<T> UpsampleCondition(const dsp::MelSpectrogram& mel, int frames,
                            int group_size) {
  if (group_size < 1 || mel.hop_length < group_size ||
      mel.hop_length % group_size != 0) {
    throw Error(ErrorCode::kConfigInvalid,
                "hop length " + std::to_string(mel.hop_length) +
                    " is not a multiple of group size " +
                    std::to_string(group_size));
  }
  if (frames < 1) {
    throw Error(ErrorCode::kShapeMismatch, "need at least one audio frame");
  }
  const int repeat = mel.hop_length / group_size;
  const int needed = (frames + repeat - 1) / repeat;
  if (mel.n_frames < needed) {
    throw Error(ErrorCode::kMelTooShort,
                "mel has " + std::to_string(mel.n_frames) + " frames, " +
                    std::to_string(needed) + " needed for " +
                    std::to_string(frames) + " audio frames");
  }
  const auto m = static_cast<size_t>(mel.n_mels);
  const auto len = static_cast<size_t>(frames);
  Tensor<T> out({m, len});
  for (size_t c = 0; c < m; ++c) {
    T* dst = out.row(c);
    for (size_t t = 0; t < len; ++t) {
      dst[t] = static_cast<T>(mel.at(static_cast<int>(c),
                                     static_cast<int>(t) / repeat));
    }
  }
  return out;
}

template <typename T>
double LogAbsDet(const Tensor<T>& w) {
  const Eigen::MatrixXd m = ToEigen(w);
  const double det = Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
  if (!(std::abs(det) >= kMinAbsDet)) {
    throw Error(ErrorCode::kSingularW,
                "|det W| = " + std::to_string(std::abs(det)));
  }
  return std::log(std::abs(det));
}

template <typename T>
InvConvResult<T> InvConvForward(const Tensor<T>& x, const Tensor<T>& w) {
  CheckFrames(x, w, "InvConvForward");
  const double log_det = LogAbsDet(w);
  return {ApplyPerFrame(ToEigen(w), x),
          static_cast<double>(x.dim(1)) * log_det};
}

template <typename T>
Tensor<T> InvConvInverse(const Tensor<T>& y, const Tensor<T>& w) {
  CheckFrames(y, w, "InvConvInverse");
  LogAbsDet(w);
  const Eigen::MatrixXd inv =
      Eigen::PartialPivLU<Eigen::MatrixXd>(ToEigen(w)).inverse();
  return ApplyPerFrame(inv, y);
}

template <typename T>
CouplingResult<T> CouplingForward(const Tensor<T>& x, const Tensor<T>& cond,
                                  const WaveNetParams<T>& params) {
  numerics::RequireRank(x, 2, "CouplingForward");
  const size_t ca = static_cast<size_t>(params.in_channels);
  const size_t cb = static_cast<size_t>(params.out_channels);
  if (x.dim(0) != ca + cb) {
    throw Error(ErrorCode::kShapeMismatch,
                "coupling expects " + std::to_string(ca + cb) +
                    " channels, got " + std::to_string(x.dim(0)));
  }
  if (cb == 0) return {x, 0.0};
  const Tensor<T> x_a = SliceRows(x, 0, ca);
  Tensor<T> x_b = SliceRows(x, ca, ca + cb);
  const WaveNetOutput<T> out = WaveNetForward<T>(params, x_a, cond, nullptr);
  double sum_log_s = 0.0;
  for (size_t i = 0; i < x_b.size(); ++i) {
    x_b[i] = x_b[i] * std::exp(out.log_s[i]) + out.shift[i];
    sum_log_s += static_cast<double>(out.log_s[i]);
  }
  return {ConcatRows(x_a, x_b), sum_log_s};
}

template <typename T>
Tensor<T> CouplingInverse(const Tensor<T>& y, const Tensor<T>& cond,
                          const WaveNetParams<T>& params) {
  numerics::RequireRank(y, 2, "CouplingInverse");
  const size_t ca = static_cast<size_t>(params.in_channels);
  const size_t cb = static_cast<size_t>(params.out_channels);
  if (y.dim(0) != ca + cb) {
    throw Error(ErrorCode::kShapeMismatch,
                "coupling expects " + std::to_string(ca + cb) +
                    " channels, got " + std::to_string(y.dim(0)));
  }
  if (cb == 0) return y;
  const Tensor<T> y_a = SliceRows(y, 0, ca);
  Tensor<T> y_b = SliceRows(y, ca, ca + cb);
  const WaveNetOutput<T> out = WaveNetForward<T>(params, y_a, cond, nullptr);
  for (size_t i = 0; i < y_b.size(); ++i) {
    if (!std::isfinite(out.log_s[i])) {
      throw Error(ErrorCode::kNonFiniteScale,
                  "coupling network produced a non-finite log-scale");
    }
    y_b[i] = (y_b[i] - out.shift[i]) * std::exp(-out.log_s[i]);
  }
  return ConcatRows(y_a, y_b);
}

template <typename T>
ForwardResult<T> FlowForward(std::span<const T> segment, const Tensor<T>& cond,
                             const FlowModel<T>& model) {
  const FlowConfig& cfg = model.config;
  Tensor<T> live = Squeeze(segment, cfg.group_size);
  CheckCondition(cond, cfg, live.dim(1));
  ForwardResult<T> result;
  std::vector<Tensor<T>> emitted;
  for (int k = 0; k < cfg.n_flows; ++k) {
    InvConvResult<T> conv = InvConvForward(live, model.inv_convs[k].value);
    result.sum_log_det_w += conv.log_det_term;
    CouplingResult<T> coupled =
        CouplingForward(conv.y, cond, model.couplings[k]);
    result.sum_log_s += coupled.sum_log_s;
    live = std::move(coupled.y);
    if (cfg.EmitsAfter(k)) {
      const auto e = static_cast<size_t>(cfg.early_size);
      emitted.push_back(SliceRows(live, 0, e));
      live = SliceRows(live, e, live.dim(0));
    }
  }
  Tensor<T> z = emitted.empty() ? live : emitted.front();
  for (size_t i = 1; i < emitted.size(); ++i) z = ConcatRows(z, emitted[i]);
  if (!emitted.empty()) z = ConcatRows(z, live);
  result.z = std::move(z);
  return result;
}

template <typename T>
ForwardResult<T> FlowForward(std::span<const T> segment,
                             const dsp::MelSpectrogram& mel,
                             const FlowModel<T>& model) {
  const int g = model.config.group_size;
  if (segment.size() % static_cast<size_t>(g) != 0 || segment.empty()) {
    throw Error(ErrorCode::kNotDivisible,
                std::to_string(segment.size()) +
                    " samples cannot be split into groups of " +
                    std::to_string(g));
  }
  const Tensor<T> cond = UpsampleCondition<T>(
      mel, static_cast<int>(segment.size() / static_cast<size_t>(g)), g);
  return FlowForward(segment, cond, model);
}

template <typename T>
LossBreakdown NegativeLogLikelihood(const ForwardResult<T>& result,
                                    double sigma) {
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::kConfigInvalid, "sigma must be positive");
  }
  if (result.z.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "empty latent");
  }
  double sum_sq = 0.0;
  for (const T v : result.z.values()) {
    sum_sq += static_cast<double>(v) * static_cast<double>(v);
  }
  LossBreakdown loss;
  loss.z_term = sum_sq / (2.0 * sigma * sigma);
  loss.log_s_term = result.sum_log_s;
  loss.log_det_w_term = result.sum_log_det_w;
  loss.total = (loss.z_term - loss.log_s_term - loss.log_det_w_term) /
               static_cast<double>(result.z.size());
  if (!std::isfinite(loss.z_term) || !std::isfinite(loss.log_s_term) ||
      !std::isfinite(loss.log_det_w_term) || !std::isfinite(loss.total)) {
    throw Error(ErrorCode::kNonFinite, "non-finite likelihood term");
  }
  return loss;
}

template <typename T>
std::vector<T> FlowInverse(const Tensor<T>& z, const Tensor<T>& cond,
                           const FlowModel<T>& model) {
  const FlowConfig& cfg = model.config;
  numerics::RequireRank(z, 2, "FlowInverse");
  if (z.dim(0) != static_cast<size_t>(cfg.group_size) || z.dim(1) == 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "latent " + ShapeString(z.shape()) + " does not have " +
                    std::to_string(cfg.group_size) + " rows");
  }
  CheckCondition(cond, cfg, z.dim(1));
  // Emission order: early blocks first (in flow order), final channels last.
  size_t cursor = z.dim(0) - static_cast<size_t>(cfg.FinalChannels());
  Tensor<T> live = SliceRows(z, cursor, z.dim(0));
  for (int k = cfg.n_flows - 1; k >= 0; --k) {
    if (cfg.EmitsAfter(k)) {
      const auto e = static_cast<size_t>(cfg.early_size);
      cursor -= e;
      live = ConcatRows(SliceRows(z, cursor, cursor + e), live);
    }
    live = CouplingInverse(live, cond, model.couplings[k]);
    live = InvConvInverse(live, model.inv_convs[k].value);
  }
  return Unsqueeze(live);
}

template <typename T>
std::vector<T> FlowInverse(const Tensor<T>& z, const dsp::MelSpectrogram& mel,
                           const FlowModel<T>& model) {
  numerics::RequireRank(z, 2, "FlowInverse");
  const Tensor<T> cond = UpsampleCondition<T>(
      mel, static_cast<int>(z.dim(1)), model.config.group_size);
  return FlowInverse(z, cond, model);
}

template <typename T>
Tensor<T> SampleLatent(size_t n_entries, double sigma, Rng& rng) {
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::kConfigInvalid, "sigma must be positive");
  }
  Tensor<T> out({n_entries});
  for (size_t i = 0; i < n_entries; ++i) {
    out[i] = static_cast<T>(sigma * StandardNormal(rng));
  }
  return out;
}

template <typename T>
dsp::AudioClip Infer(const dsp::MelSpectrogram& mel, const FlowModel<T>& model,
                     double sigma, Rng& rng, std::optional<size_t> num_samples) {
  if (mel.n_frames < 1 || mel.n_mels < 1) {
    throw Error(ErrorCode::kShapeMismatch, "empty mel spectrogram");
  }
  if (mel.n_mels != model.config.n_mel_channels) {
    throw Error(ErrorCode::kShapeMismatch,
                "mel has " + std::to_string(mel.n_mels) +
                    " bands, model expects " +
                    std::to_string(model.config.n_mel_channels));
  }
  const auto g = static_cast<size_t>(model.config.group_size);
  const size_t frames =
      num_samples ? *num_samples / g
                  : static_cast<size_t>(mel.n_frames) * mel.hop_length / g;
  if (frames == 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "requested length is shorter than one group");
  }
  Tensor<T> flat = SampleLatent<T>(g * frames, sigma, rng);
  Tensor<T> z({g, frames}, std::vector<T>(flat.values().begin(),
                                          flat.values().end()));
  const std::vector<T> samples = FlowInverse(z, mel, model);
  dsp::AudioClip clip;
  clip.sample_rate = mel.sample_rate;
  clip.samples.assign(samples.begin(), samples.end());
  return clip;
}

#define FLOWVOC_INSTANTIATE_FLOW(T)                                           \
  template Tensor<T> Squeeze(std::span<const T>, int);                        \
  template std::vector<T> Unsqueeze(const Tensor<T>&);                        \
  template Tensor<T> UpsampleCondition<T>(const dsp::MelSpectrogram&, int,    \
                                          int);                               \
  template double LogAbsDet(const Tensor<T>&);                                \
  template InvConvResult<T> InvConvForward(const Tensor<T>&,                  \
                                           const Tensor<T>&);                 \
  template Tensor<T> InvConvInverse(const Tensor<T>&, const Tensor<T>&);      \
  template CouplingResult<T> CouplingForward(                                 \
      const Tensor<T>&, const Tensor<T>&, const WaveNetParams<T>&);           \
  template Tensor<T> CouplingInverse(const Tensor<T>&, const Tensor<T>&,      \
                                     const WaveNetParams<T>&);                \
  template ForwardResult<T> FlowForward(std::span<const T>, const Tensor<T>&, \
                                        const FlowModel<T>&);                 \
  template ForwardResult<T> FlowForward(                                      \
      std::span<const T>, const dsp::MelSpectrogram&, const FlowModel<T>&);   \
  template LossBreakdown NegativeLogLikelihood(const ForwardResult<T>&,       \
                                               double);                       \
  template std::vector<T> FlowInverse(const Tensor<T>&, const Tensor<T>&,     \
                                      const FlowModel<T>&);                   \
  template std::vector<T> FlowInverse(                                        \
      const Tensor<T>&, const dsp::MelSpectrogram&, const FlowModel<T>&);     \
  template Tensor<T> SampleLatent<T>(size_t, double, Rng&);                   \
  template dsp::AudioClip Infer(const dsp::MelSpectrogram&,                   \
                                const FlowModel<T>&, double, Rng&,            \
                                std::optional<size_t>);

FLOWVOC_INSTANTIATE_FLOW(float)
FLOWVOC_INSTANTIATE_FLOW(double)

#undef FLOWVOC_INSTANTIATE_FLOW

}  // namespace flowvoc::flow
