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

#include "commands.h"

#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "flowvoc/corpus/audit.h"
#include "flowvoc/corpus/manifest.h"
#include "flowvoc/dsp/audio.h"
#include "flowvoc/dsp/mel.h"
#include "flowvoc/dsp/mel_io.h"
#include "flowvoc/error.h"
#include "flowvoc/evaluation/mos.h"
#include "flowvoc/evaluation/ratings.h"
#include "flowvoc/evaluation/service.h"
#include "flowvoc/flow/flow.h"
#include "flowvoc/flow/selfcheck.h"
#include "flowvoc/random.h"
#include "flowvoc/training/checkpoint.h"
#include "flowvoc/training/config.h"
#include "flowvoc/training/trainer.h"

namespace flowvoc::cli {

namespace fs = std::filesystem;

namespace {

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  }
}

training::RunConfig LoadRunConfig(const std::string& path) {
  training::RunConfig cfg;
  if (!path.empty()) cfg = training::RunConfig::FromFile(path);
  cfg.Validate();
  return cfg;
}

}  // namespace

int RunPreprocess(const PreprocessArgs& args) {
  const training::RunConfig cfg = LoadRunConfig(args.config);
  const corpus::Manifest manifest =
      corpus::LoadManifest(args.manifest, args.normalizer);
  const corpus::AuditReport report = corpus::AuditAudio(manifest);

  fs::create_directories(args.out_dir);
  const std::string text = corpus::FormatAuditText(report);
  WriteText(fs::path(args.out_dir) / "audit.txt", text);
  WriteText(fs::path(args.out_dir) / "audit.json",
            corpus::FormatAuditJson(report));
  if (!args.json.empty()) WriteText(args.json, corpus::FormatAuditJson(report));
  std::cout << text;
  if (!report.missing.empty() || !report.wrong_format.empty()) {
    std::cerr << "error: audit found " << report.missing.size()
              << " missing and " << report.wrong_format.size()
              << " unreadable file(s)\n";
    return kExitDataError;
  }

  const dsp::MelExtractor extractor(cfg.stft, cfg.mel, dsp::kCorpusSampleRate);
  size_t written = 0;
  for (const auto* r : manifest.Select(corpus::Split::kTrain)) {
    const dsp::AudioClip clip = dsp::LoadWav(manifest.ResolveAudio(*r));
    dsp::RequireCorpusRate(clip);
    const dsp::MelSpectrogram mel = extractor.Compute(clip.samples);
    dsp::WriteMelFile(mel, fs::path(args.out_dir) / (r->id + ".kmel"));
    ++written;
  }
  std::cout << "features\t" << written << "\n";
  return kExitOk;
}

int RunTrain(const TrainArgs& args) {
  training::RunConfig cfg = LoadRunConfig(args.config);
  if (args.seed) cfg.train.seed = *args.seed;
  if (args.iterations) {
    if (*args.iterations < 1) throw UsageError{"--iterations must be >= 1"};
    cfg.train.max_iterations = *args.iterations;
  }
  cfg.Validate();
  if (args.dry_run) {
    std::cout << cfg.ToTextMap().Serialize();
    return kExitOk;
  }
  if (args.manifest.empty() || args.out_dir.empty()) {
    throw UsageError{"train needs --manifest and --out-dir (or --dry-run)"};
  }

  const corpus::Manifest manifest = corpus::LoadManifest(args.manifest);
  const std::vector<dsp::AudioClip> clips =
      training::LoadTrainingClips(manifest);
  training::TrainOptions options;
  options.checkpoint_dir = args.out_dir;
  if (!args.resume.empty()) {
    options.resume = training::LoadCheckpoint(args.resume);
  }
  const int64_t log_every = args.log_every;
  options.on_iteration = [&](const training::IterationMetrics& m) {
    if (m.iteration == 1 || m.iteration % log_every == 0 || !m.accepted) {
      std::cout << training::FormatMetricsLine(m) << "\n" << std::flush;
    }
  };
  const training::Checkpoint ck = training::Train(clips, cfg, options);
  std::cout << "finished at iteration " << ck.state.iteration << ", epoch "
            << ck.state.epoch << "\n";
  return kExitOk;
}

int RunSynthesize(const SynthesizeArgs& args) {
  if (!(args.sigma > 0.0)) throw UsageError{"--sigma must be positive"};
  if (args.mel.empty() == args.wav.empty()) {
    throw UsageError{"give exactly one of --mel or --wav"};
  }
  const training::Checkpoint ck = training::LoadCheckpoint(args.checkpoint);
  dsp::MelSpectrogram mel;
  std::optional<size_t> length;
  if (!args.mel.empty()) {
    mel = dsp::ReadMelFile(args.mel);
  } else {
    const dsp::AudioClip clip = dsp::LoadWav(args.wav);
    dsp::RequireCorpusRate(clip);
    mel = dsp::ComputeMelSpectrogram(clip, ck.config.stft, ck.config.mel);
    const size_t group = static_cast<size_t>(ck.config.flow.group_size);
    length = clip.samples.size() / group * group;
    if (*length == 0) {
      throw Error(ErrorCode::kNotDivisible,
                  "input shorter than one group of samples");
    }
  }
  if (mel.n_mels != ck.config.flow.n_mel_channels) {
    throw Error(ErrorCode::kShapeMismatch,
                "mel has " + std::to_string(mel.n_mels) +
                    " channels, model expects " +
                    std::to_string(ck.config.flow.n_mel_channels));
  }
  if (mel.hop_length != ck.config.stft.hop_length) {
    throw Error(ErrorCode::kShapeMismatch,
                "mel hop " + std::to_string(mel.hop_length) +
                    " differs from model hop " +
                    std::to_string(ck.config.stft.hop_length));
  }
  Rng rng(args.seed);
  const dsp::AudioClip out =
      flow::Infer(mel, ck.model, args.sigma, rng, length);
  dsp::SaveWav(out, args.out);
  std::cout << "wrote " << out.samples.size() << " samples to " << args.out
            << "\n";
  return kExitOk;
}

int RunCheck(const CheckArgs& args) {
  flow::FlowModel<float> model;
  if (!args.checkpoint.empty()) {
    model = training::LoadCheckpoint(args.checkpoint).model;
  } else {
    const training::RunConfig cfg = LoadRunConfig(args.config);
    Rng init(args.seed);
    model = flow::InitFlowModel<float>(cfg.flow, init);
  }
  Rng rng(args.seed);
  std::vector<flow::CheckResult> results;
  const bool all = args.mode == "all";
  if (all || args.mode == "roundtrip") {
    results.push_back(flow::CheckRoundTrip(model, rng));
  }
  if (all || args.mode == "jacobian" || args.mode == "grad") {
    const auto wide = flow::CastModel<double>(model);
    if (all || args.mode == "jacobian") {
      results.push_back(flow::CheckJacobian(wide, rng));
    }
    if (all || args.mode == "grad") {
      for (auto& r : flow::CheckGradients(wide, rng)) results.push_back(r);
    }
  }

  bool ok = true;
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results) {
    ok = ok && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << "\t" << r.name << "\t"
              << r.value << "\t<= " << r.tolerance << "\t" << r.detail << "\n";
    j.push_back({{"name", r.name},
                 {"value", r.value},
                 {"tolerance", r.tolerance},
                 {"pass", r.pass},
                 {"detail", r.detail}});
  }
  if (!args.json.empty()) WriteText(args.json, j.dump(2) + "\n");
  return ok ? kExitOk : kExitRuntimeError;
}

int RunMos(const MosArgs& args) {
  const auto ratings = evaluation::IngestRatings(args.ratings);
  if (ratings.empty()) {
    throw Error(ErrorCode::kEmptyScores, args.ratings + " holds no ratings");
  }
  std::vector<evaluation::MosReport> reports;
  if (!args.model.empty()) {
    reports.push_back(evaluation::CategoryReport(ratings, args.model));
    if (!reports.back().overall_mean_of_ratings) {
      throw Error(ErrorCode::kEmptyScores,
                  "no ratings for model '" + args.model + "'");
    }
  } else {
    reports = evaluation::ReportsByModel(ratings);
  }

  if (args.compare.empty()) {
    nlohmann::json j = nlohmann::json::array();
    for (size_t i = 0; i < reports.size(); ++i) {
      if (i) std::cout << "\n";
      std::cout << evaluation::FormatReportText(reports[i]);
      j.push_back(nlohmann::json::parse(evaluation::FormatReportJson(reports[i])));
    }
    if (!args.json.empty()) {
      WriteText(args.json, (reports.size() == 1 ? j[0] : j).dump(2) + "\n");
    }
    return kExitOk;
  }

  for (const auto& path : args.compare) {
    const auto more = evaluation::IngestRatings(path);
    if (more.empty()) {
      throw Error(ErrorCode::kEmptyScores, path + " holds no ratings");
    }
    for (auto& r : evaluation::ReportsByModel(more)) reports.push_back(r);
  }
  const evaluation::ComparisonTable table = evaluation::CompareModels(reports);
  std::cout << evaluation::FormatComparisonText(table);
  if (!args.json.empty()) {
    WriteText(args.json, evaluation::FormatComparisonJson(table));
  }
  return kExitOk;
}

int RunServe(const ServeArgs& args) {
  evaluation::ServiceConfig config;
  config.samples = evaluation::LoadSampleStore(args.samples);
  config.ratings_path = args.out;
  config.seed = args.seed;
  if (!args.static_dir.empty()) config.static_dir = args.static_dir;

  // Route SIGINT/SIGTERM to a watcher thread so shutdown runs outside a
  // signal handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  evaluation::ListeningTestService service(std::move(config));
  const int port = service.Bind(args.host, args.port);
  std::cout << "listening on http://" << args.host << ":" << port << "\n"
            << std::flush;
  std::atomic<bool> signalled{false};
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    signalled = true;
    service.Stop();
  });
  service.Listen();
  if (!signalled) pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  std::cout << "stopped; " << service.Ratings().size() << " rating(s) stored\n";
  return kExitOk;
}

}  // namespace flowvoc::cli
