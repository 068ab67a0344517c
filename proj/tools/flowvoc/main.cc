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

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.h"
#include "flowvoc/error.h"

namespace {

using namespace flowvoc::cli;

void AddPreprocess(CLI::App& app, PreprocessArgs& a, int& code) {
  auto* cmd = app.add_subcommand("preprocess",
                                 "Audit a manifest and write KMEL1 features");
  cmd->add_option("--manifest", a.manifest, "Manifest TSV")->required();
  cmd->add_option("--out-dir", a.out_dir, "Output directory")->required();
  cmd->add_option("--normalizer", a.normalizer, "Text normalizer")
      ->check(CLI::IsMember({"identity", "nfc-trim"}));
  cmd->add_option("--config", a.config, "Config file (stft./mel. keys)");
  cmd->add_option("--json", a.json, "Also write the audit report as JSON");
  cmd->callback([&] { code = RunPreprocess(a); });
}

void AddTrain(CLI::App& app, TrainArgs& a, int& code) {
  auto* cmd = app.add_subcommand("train", "Train a flow vocoder");
  cmd->add_option("--manifest", a.manifest, "Manifest TSV");
  cmd->add_option("--out-dir", a.out_dir, "Checkpoint and metrics directory");
  cmd->add_option("--config", a.config, "Config file (key=value)");
  cmd->add_option("--resume", a.resume, "Checkpoint to continue from");
  cmd->add_option("--iterations", a.iterations,
                  "Stop once this many iterations are complete");
  cmd->add_option("--seed", a.seed, "Override train.seed");
  cmd->add_option("--log-every", a.log_every,
                  "Print a metrics line every N iterations")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--dry-run", a.dry_run,
                "Print the effective configuration and exit");
  cmd->callback([&] { code = RunTrain(a); });
}

void AddSynthesize(CLI::App& app, SynthesizeArgs& a, int& code) {
  auto* cmd = app.add_subcommand("synthesize", "Vocode a mel spectrogram");
  cmd->add_option("--checkpoint", a.checkpoint, "Checkpoint file")->required();
  auto* mel = cmd->add_option("--mel", a.mel, "KMEL1 feature file");
  auto* wav = cmd->add_option("--wav", a.wav, "WAV to analyse and resynthesize");
  mel->excludes(wav);
  cmd->add_option("--out", a.out, "Output WAV")->required();
  cmd->add_option("--sigma", a.sigma, "Latent standard deviation (> 0)");
  cmd->add_option("--seed", a.seed, "Latent sampling seed");
  cmd->callback([&] { code = RunSynthesize(a); });
}

void AddCheck(CLI::App& app, CheckArgs& a, int& code) {
  auto* cmd = app.add_subcommand("check", "Verify flow invariants");
  auto* ck = cmd->add_option("--checkpoint", a.checkpoint, "Checkpoint file");
  auto* cfg = cmd->add_option("--config", a.config,
                              "Config file; checks a freshly initialized model");
  ck->excludes(cfg);
  cmd->add_option("--mode", a.mode, "roundtrip, jacobian, grad or all")
      ->check(CLI::IsMember({"roundtrip", "jacobian", "grad", "all"}));
  cmd->add_option("--seed", a.seed, "Seed for probes and initialization");
  cmd->add_option("--json", a.json, "Also write results as JSON");
  cmd->callback([&] { code = RunCheck(a); });
}

void AddMos(CLI::App& app, MosArgs& a, int& code) {
  auto* cmd = app.add_subcommand("mos", "Mean opinion score reports");
  cmd->add_option("--ratings", a.ratings, "Ratings CSV")->required();
  cmd->add_option("--compare", a.compare, "Further ratings CSVs to tabulate");
  cmd->add_option("--model", a.model, "Report only this model_id");
  cmd->add_option("--json", a.json, "Also write the report as JSON");
  cmd->callback([&] { code = RunMos(a); });
}

void AddServe(CLI::App& app, ServeArgs& a, int& code) {
  auto* cmd = app.add_subcommand("serve", "Run the listening-test service");
  cmd->add_option("--samples", a.samples, "Directory holding samples.tsv")
      ->required();
  cmd->add_option("--out", a.out, "Ratings CSV (appended)")->required();
  cmd->add_option("--port", a.port, "TCP port, 0 for any free port")
      ->check(CLI::Range(0, 65535));
  cmd->add_option("--host", a.host, "Bind address");
  cmd->add_option("--seed", a.seed, "Session shuffle seed");
  cmd->add_option("--static", a.static_dir, "Static files served at /");
  cmd->callback([&] { code = RunServe(a); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowvoc: flow-based neural vocoder toolkit"};
  app.require_subcommand(1);
  int code = kExitOk;
  PreprocessArgs preprocess;
  TrainArgs train;
  SynthesizeArgs synthesize;
  CheckArgs check;
  MosArgs mos;
  ServeArgs serve;
  AddPreprocess(app, preprocess, code);
  AddTrain(app, train, code);
  AddSynthesize(app, synthesize, code);
  AddCheck(app, check, code);
  AddMos(app, mos, code);
  AddServe(app, serve, code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.message << "\n";
    return kExitUsage;
  } catch (const flowvoc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return flowvoc::IsDataError(e.code()) ? kExitDataError : kExitRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return code;
}
