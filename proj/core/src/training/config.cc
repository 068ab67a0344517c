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

#include "flowvoc/training/config.h"

#include <fstream>
#include <iterator>
#include <set>

#include "flowvoc/error.h"

namespace flowvoc::training {

namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kConfigInvalid, what);
}

void RejectUnknown(const TextMap& map, const std::string& prefix,
                   const std::set<std::string>& known) {
  for (const auto& [key, value] : map.entries()) {
    if (key.rfind(prefix, 0) == 0 && !known.count(key.substr(prefix.size()))) {
      Invalid("unknown config key '" + key + "'");
    }
  }
}

}  // namespace

void TrainConfig::Validate() const {
  if (batch_size < 1) Invalid("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) Invalid("learning_rate must be positive");
  if (!(lr_decay_gamma > 0.0)) Invalid("lr_decay_gamma must be positive");
  if (lr_decay_interval < 1) Invalid("lr_decay_interval must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) Invalid("beta1 must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) Invalid("beta2 must be in [0, 1)");
  if (!(adam_epsilon > 0.0)) Invalid("adam_epsilon must be positive");
  if (epochs < 1) Invalid("epochs must be >= 1");
  if (!(sigma > 0.0)) Invalid("sigma must be positive");
  if (iters_per_checkpoint < 1) Invalid("iters_per_checkpoint must be >= 1");
  if (segment_length < 1) Invalid("segment_length must be >= 1");
  if (max_iterations < 0) Invalid("max_iterations must be >= 0");
}

void TrainConfig::WriteTo(TextMap& map, std::string_view prefix) const {
  const std::string p(prefix);
  map.SetInt(p + "batch_size", batch_size);
  map.SetDouble(p + "learning_rate", learning_rate);
  map.SetDouble(p + "lr_decay_gamma", lr_decay_gamma);
  map.SetInt(p + "lr_decay_interval", lr_decay_interval);
  map.SetDouble(p + "beta1", beta1);
  map.SetDouble(p + "beta2", beta2);
  map.SetDouble(p + "adam_epsilon", adam_epsilon);
  map.SetInt(p + "epochs", epochs);
  map.SetDouble(p + "sigma", sigma);
  map.SetInt(p + "iters_per_checkpoint", iters_per_checkpoint);
  map.SetUint(p + "seed", seed);
  map.SetInt(p + "segment_length", segment_length);
  map.SetInt(p + "max_iterations", max_iterations);
}

void TrainConfig::ApplyOverrides(const TextMap& map, std::string_view prefix) {
  const std::string p(prefix);
  const auto get_int = [&](const char* name, auto& field) {
    if (map.Contains(p + name)) {
      field = static_cast<std::remove_reference_t<decltype(field)>>(
          map.GetInt(p + name));
    }
  };
  const auto get_double = [&](const char* name, double& field) {
    if (map.Contains(p + name)) field = map.GetDouble(p + name);
  };
  get_int("batch_size", batch_size);
  get_double("learning_rate", learning_rate);
  get_double("lr_decay_gamma", lr_decay_gamma);
  get_int("lr_decay_interval", lr_decay_interval);
  get_double("beta1", beta1);
  get_double("beta2", beta2);
  get_double("adam_epsilon", adam_epsilon);
  get_int("epochs", epochs);
  get_double("sigma", sigma);
  get_int("iters_per_checkpoint", iters_per_checkpoint);
  if (map.Contains(p + "seed")) seed = map.GetUint(p + "seed");
  get_int("segment_length", segment_length);
  get_int("max_iterations", max_iterations);
  RejectUnknown(map, p,
                {"batch_size", "learning_rate", "lr_decay_gamma",
                 "lr_decay_interval", "beta1", "beta2", "adam_epsilon",
                 "epochs", "sigma", "iters_per_checkpoint", "seed",
                 "segment_length", "max_iterations"});
}

uint64_t TrainConfig::Hash() const {
  TrainConfig copy = *this;
  copy.max_iterations = 0;
  TextMap map;
  copy.WriteTo(map);
  return Fnv1a64(map.Serialize());
}

void WriteFeatureConfig(const dsp::StftConfig& stft, const dsp::MelConfig& mel,
                        TextMap& map) {
  map.SetInt("stft.filter_length", stft.filter_length);
  map.SetInt("stft.hop_length", stft.hop_length);
  map.SetInt("stft.win_length", stft.win_length);
  map.Set("stft.window", std::string(dsp::WindowName(stft.window)));
  map.SetInt("mel.n_mels", mel.n_mels);
  map.SetDouble("mel.fmin", mel.fmin);
  map.SetDouble("mel.fmax", mel.fmax);
  map.SetDouble("mel.compression_floor", mel.compression_floor);
  // Fixed conventions, recorded so features and models never get mixed.
  map.Set("mel.log", "natural");
  map.Set("mel.spectrum", "magnitude");
  map.Set("mel.scale", "2595*log10(1+f/700)");
}

void ApplyFeatureOverrides(const TextMap& map, dsp::StftConfig& stft,
                           dsp::MelConfig& mel) {
  const auto get_int = [&](const std::string& key, int& field) {
    if (map.Contains(key)) field = static_cast<int>(map.GetInt(key));
  };
  const auto get_double = [&](const std::string& key, double& field) {
    if (map.Contains(key)) field = map.GetDouble(key);
  };
  get_int("stft.filter_length", stft.filter_length);
  get_int("stft.hop_length", stft.hop_length);
  get_int("stft.win_length", stft.win_length);
  if (auto w = map.Find("stft.window")) stft.window = dsp::ParseWindow(*w);
  get_int("mel.n_mels", mel.n_mels);
  get_double("mel.fmin", mel.fmin);
  get_double("mel.fmax", mel.fmax);
  get_double("mel.compression_floor", mel.compression_floor);
  if (auto v = map.Find("mel.log"); v && *v != "natural") {
    Invalid("unsupported mel.log '" + *v + "'");
  }
  if (auto v = map.Find("mel.spectrum"); v && *v != "magnitude") {
    Invalid("unsupported mel.spectrum '" + *v + "'");
  }
  if (auto v = map.Find("mel.scale"); v && *v != "2595*log10(1+f/700)") {
    Invalid("unsupported mel.scale '" + *v + "'");
  }
  RejectUnknown(map, "stft.",
                {"filter_length", "hop_length", "win_length", "window"});
  RejectUnknown(map, "mel.",
                {"n_mels", "fmin", "fmax", "compression_floor", "log",
                 "spectrum", "scale"});
}

void RunConfig::Validate() const {
  flow.Validate();
  stft.Validate();
  mel.Validate(dsp::kCorpusSampleRate);
  train.Validate();
  if (mel.n_mels != flow.n_mel_channels) {
    Invalid("mel.n_mels must equal flow.n_mel_channels");
  }
  if (stft.hop_length % flow.group_size != 0) {
    Invalid("stft.hop_length must be a multiple of flow.group_size");
  }
  if (train.segment_length % flow.group_size != 0) {
    Invalid("train.segment_length must be a multiple of flow.group_size");
  }
}

TextMap RunConfig::ToTextMap() const {
  TextMap map;
  flow.WriteTo(map);
  WriteFeatureConfig(stft, mel, map);
  train.WriteTo(map);
  return map;
}

RunConfig RunConfig::FromTextMap(const TextMap& map) {
  RunConfig cfg;
  cfg.flow.ApplyOverrides(map);
  ApplyFeatureOverrides(map, cfg.stft, cfg.mel);
  cfg.train.ApplyOverrides(map);
  for (const auto& [key, value] : map.entries()) {
    if (key.rfind("flow.", 0) != 0 && key.rfind("stft.", 0) != 0 &&
        key.rfind("mel.", 0) != 0 && key.rfind("train.", 0) != 0) {
      Invalid("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig RunConfig::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return FromTextMap(TextMap::Parse(text));
}

}  // namespace flowvoc::training
