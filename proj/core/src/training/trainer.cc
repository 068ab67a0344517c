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

#include "flowvoc/training/trainer.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "flowvoc/error.h"
#include "flowvoc/flow/gradient.h"
#include "flowvoc/random.h"
#include "flowvoc/text_map.h"

namespace flowvoc::training {

namespace {

bool Finite(const flow::LossBreakdown& l) {
  return std::isfinite(l.z_term) && std::isfinite(l.log_s_term) &&
         std::isfinite(l.log_det_w_term) && std::isfinite(l.total);
}

bool GradientsFinite(const flow::FlowModel<float>& model) {
  bool ok = true;
  model.ForEachParameter([&](const numerics::Parameter<float>& p) {
    for (float g : p.grad.values()) ok = ok && std::isfinite(g);
  });
  return ok;
}

bool IsNumericFailure(ErrorCode code) {
  return code == ErrorCode::kNonFinite || code == ErrorCode::kNonFiniteScale ||
         code == ErrorCode::kNonFiniteLoss || code == ErrorCode::kSingularW;
}

void RequireSameFrontEnd(const RunConfig& have, const RunConfig& want) {
  TextMap a, b;
  WriteFeatureConfig(have.stft, have.mel, a);
  WriteFeatureConfig(want.stft, want.mel, b);
  if (a.Serialize() != b.Serialize()) {
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint feature settings differ from configuration");
  }
  if (have.train.Hash() != want.train.Hash()) {
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint train settings differ from configuration");
  }
}

std::vector<uint32_t> ShuffledOrder(size_t n, Rng& rng) {
  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Shuffle<uint32_t>(order, rng);
  return order;
}

// Keeps metrics lines whose iteration is <= `keep_through`.
void TruncateMetrics(const std::filesystem::path& path, int64_t keep_through) {
  std::ifstream in(path);
  if (!in) return;
  std::string kept, line;
  while (std::getline(in, line)) {
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) continue;
    if (ParseInt(line.substr(0, tab)) <= keep_through) kept += line + "\n";
  }
  in.close();
  WriteFileAtomically(path, std::vector<uint8_t>(kept.begin(), kept.end()));
}

}  // namespace

double LrAt(int64_t iteration, const TrainConfig& cfg) {
  if (iteration < 0) {
    throw Error(ErrorCode::kConfigInvalid, "iteration must be >= 0");
  }
  const int64_t decays = iteration / cfg.lr_decay_interval;
  return cfg.learning_rate *
         std::pow(cfg.lr_decay_gamma, static_cast<double>(decays));
}

flow::LossBreakdown TrainingStep(flow::FlowModel<float>& model,
                                 std::span<const TrainingExample> batch,
                                 AdamState& adam, const TrainConfig& cfg,
                                 double lr) {
  if (batch.empty() || static_cast<int>(batch.size()) > cfg.batch_size) {
    throw Error(ErrorCode::kConfigInvalid,
                "batch of " + std::to_string(batch.size()) +
                    " examples, allowed 1.." + std::to_string(cfg.batch_size));
  }
  const int group = model.config.group_size;
  const double scale = 1.0 / static_cast<double>(batch.size());
  model.ZeroGrad();
  flow::LossBreakdown mean;
  try {
    for (const auto& ex : batch) {
      const int frames = static_cast<int>(ex.segment.size()) / group;
      const auto cond = flow::UpsampleCondition<float>(ex.mel, frames, group);
      const flow::LossBreakdown l = flow::AccumulateLossGradient<float>(
          model, ex.segment, cond, cfg.sigma, scale);
      mean.z_term += l.z_term * scale;
      mean.log_s_term += l.log_s_term * scale;
      mean.log_det_w_term += l.log_det_w_term * scale;
      mean.total += l.total * scale;
    }
  } catch (const Error& e) {
    if (!IsNumericFailure(e.code())) throw;
    model.ZeroGrad();
    throw Error(ErrorCode::kNonFiniteLoss, e.what());
  }
  if (!Finite(mean) || !GradientsFinite(model)) {
    model.ZeroGrad();
    throw Error(ErrorCode::kNonFiniteLoss, "loss or gradient is not finite");
  }
  AdamUpdate(model, adam, lr, cfg);
  return mean;
}

std::string FormatMetricsLine(const IterationMetrics& m) {
  const auto num = [&](double v) {
    return m.accepted ? FormatDouble(v) : std::string("nan");
  };
  return std::to_string(m.iteration) + "\t" + FormatDouble(m.lr) + "\t" +
         num(m.loss.z_term) + "\t" + num(m.loss.log_s_term) + "\t" +
         num(m.loss.log_det_w_term) + "\t" + num(m.loss.total);
}

Checkpoint InitialCheckpoint(const RunConfig& config, size_t num_clips) {
  config.Validate();
  Rng rng(config.train.seed);
  Checkpoint ck;
  ck.config = config;
  ck.model = flow::InitFlowModel<float>(config.flow, rng);
  ck.adam = InitAdam(ck.model);
  ck.state.order = ShuffledOrder(num_clips, rng);
  ck.state.rng = SerializeRng(rng);
  return ck;
}

Checkpoint Train(std::span<const dsp::AudioClip> clips, const RunConfig& config,
                 const TrainOptions& options) {
  config.Validate();
  if (clips.empty()) {
    throw Error(ErrorCode::kCorpusEmpty, "no training clips");
  }
  Checkpoint ck;
  if (options.resume) {
    ck = *options.resume;
    RequireCompatible(ck, config.flow);
    RequireSameFrontEnd(ck.config, config);
    if (ck.state.order.size() != clips.size()) {
      throw Error(ErrorCode::kVersionMismatch,
                  "checkpoint was trained on " +
                      std::to_string(ck.state.order.size()) +
                      " clips, corpus has " + std::to_string(clips.size()));
    }
    ck.config.train.max_iterations = config.train.max_iterations;
  } else {
    ck = InitialCheckpoint(config, clips.size());
  }
  const TrainConfig& tc = ck.config.train;

  std::error_code ec;
  std::filesystem::create_directories(options.checkpoint_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoFailure, "cannot create " +
                                           options.checkpoint_dir.string() +
                                           ": " + ec.message());
  }
  const auto metrics_path = options.checkpoint_dir / kMetricsFileName;
  if (options.resume) {
    TruncateMetrics(metrics_path, ck.state.iteration);
  } else {
    std::ofstream(metrics_path, std::ios::trunc);
  }
  std::ofstream metrics(metrics_path, std::ios::app);
  if (!metrics) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + metrics_path.string());
  }

  Rng rng = DeserializeRng(ck.state.rng);
  const dsp::MelExtractor extractor(ck.config.stft, ck.config.mel,
                                    dsp::kCorpusSampleRate);
  const size_t n = clips.size();
  const auto save = [&] {
    ck.state.rng = SerializeRng(rng);
    SaveCheckpoint(ck, options.checkpoint_dir /
                           CheckpointFileName(ck.state.iteration));
  };

  int64_t last_saved = options.resume ? ck.state.iteration : -1;
  while (ck.state.epoch < tc.epochs &&
         (tc.max_iterations == 0 || ck.state.iteration < tc.max_iterations)) {
    const size_t begin = static_cast<size_t>(ck.state.cursor);
    const size_t end = std::min(n, begin + static_cast<size_t>(tc.batch_size));
    std::vector<TrainingExample> batch;
    batch.reserve(end - begin);
    for (size_t i = begin; i < end; ++i) {
      const dsp::AudioClip segment = dsp::SampleSegment(
          clips[ck.state.order[i]], static_cast<size_t>(tc.segment_length),
          rng);
      TrainingExample ex;
      ex.mel = extractor.Compute(segment.samples);
      ex.segment = segment.samples;
      batch.push_back(std::move(ex));
    }

    IterationMetrics m;
    m.iteration = ck.state.iteration + 1;
    m.lr = LrAt(ck.state.iteration, tc);
    try {
      m.loss = TrainingStep(ck.model, batch, ck.adam, tc, m.lr);
      ck.state.consecutive_failures = 0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNonFiniteLoss) throw;
      m.accepted = false;
      ++ck.state.consecutive_failures;
    }

    ck.state.iteration = m.iteration;
    ck.state.cursor = static_cast<int64_t>(end);
    if (end == n) {
      ++ck.state.epoch;
      ck.state.cursor = 0;
      ck.state.order = ShuffledOrder(n, rng);
    }
    metrics << FormatMetricsLine(m) << '\n' << std::flush;
    if (!metrics) {
      throw Error(ErrorCode::kIoFailure, "cannot append to metrics log");
    }
    if (options.on_iteration) options.on_iteration(m);

    if (ck.state.consecutive_failures >= kMaxConsecutiveFailures) {
      save();
      throw Error(ErrorCode::kNonFiniteLoss,
                  std::to_string(kMaxConsecutiveFailures) +
                      " consecutive non-finite steps at iteration " +
                      std::to_string(ck.state.iteration));
    }
    if (ck.state.iteration % tc.iters_per_checkpoint == 0) {
      save();
      last_saved = ck.state.iteration;
    }
  }
  if (last_saved != ck.state.iteration) save();
  ck.state.rng = SerializeRng(rng);
  return ck;
}

std::vector<dsp::AudioClip> LoadTrainingClips(
    const corpus::Manifest& manifest) {
  std::vector<dsp::AudioClip> clips;
  for (const auto* r : manifest.Select(corpus::Split::kTrain)) {
    dsp::AudioClip clip = dsp::LoadWav(manifest.ResolveAudio(*r));
    dsp::RequireCorpusRate(clip);
    clips.push_back(std::move(clip));
  }
  if (clips.empty()) {
    throw Error(ErrorCode::kCorpusEmpty, "manifest has no train records");
  }
  return clips;
}

}  // namespace flowvoc::training
