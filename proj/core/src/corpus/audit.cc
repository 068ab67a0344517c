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

#include "flowvoc/corpus/audit.h"

#include <filesystem>

#include <nlohmann/json.hpp>

#include "flowvoc/dsp/audio.h"
#include "flowvoc/error.h"
#include "flowvoc/text_map.h"

namespace flowvoc::corpus {

namespace {

std::string FormatProblem(const dsp::WavInfo& info) {
  if (info.format_tag != 1 || info.bits_per_sample != 16 ||
      info.channels != 1) {
    return "expected 16-bit PCM mono, got format " +
           std::to_string(info.format_tag) + ", " +
           std::to_string(info.bits_per_sample) + " bits, " +
           std::to_string(info.channels) + " channel(s)";
  }
  if (info.sample_rate != dsp::kCorpusSampleRate) {
    return "sample rate " + std::to_string(info.sample_rate) + " Hz, expected " +
           std::to_string(dsp::kCorpusSampleRate);
  }
  if (info.num_frames == 0) return "no samples";
  return {};
}

nlohmann::json IssuesJson(const std::vector<AuditIssue>& issues) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& i : issues) {
    out.push_back({{"id", i.id}, {"path", i.path}, {"reason", i.reason}});
  }
  return out;
}

}  // namespace

AuditReport AuditAudio(const Manifest& manifest, AuditMode mode) {
  AuditReport report;
  for (const auto& r : manifest.records) {
    if (r.audio_path.empty()) {
      ++report.skipped;
      continue;
    }
    const std::filesystem::path path = manifest.ResolveAudio(r);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      report.missing.push_back({r.id, path.string(), "file not found"});
      continue;
    }
    try {
      double seconds = 0.0;
      if (mode == AuditMode::kMetadata) {
        const dsp::WavInfo info = dsp::ProbeWav(path);
        if (std::string problem = FormatProblem(info); !problem.empty()) {
          report.wrong_format.push_back({r.id, path.string(), problem});
          continue;
        }
        seconds = info.DurationSeconds();
      } else {
        const dsp::AudioClip clip = dsp::LoadWav(path);
        dsp::RequireCorpusRate(clip);
        seconds = clip.DurationSeconds();
      }
      report.total_seconds += seconds;
      ++report.checked;
    } catch (const Error& e) {
      report.wrong_format.push_back({r.id, path.string(), e.what()});
    }
  }
  return report;
}

std::string FormatAuditText(const AuditReport& report) {
  std::string out;
  out += "checked\t" + std::to_string(report.checked) + "\n";
  out += "skipped\t" + std::to_string(report.skipped) + "\n";
  out += "missing\t" + std::to_string(report.missing.size()) + "\n";
  out += "wrong_format\t" + std::to_string(report.wrong_format.size()) + "\n";
  out += "total_seconds\t" + FormatDouble(report.total_seconds) + "\n";
  for (const auto& i : report.missing) {
    out += "missing\t" + i.id + "\t" + i.path + "\t" + i.reason + "\n";
  }
  for (const auto& i : report.wrong_format) {
    out += "wrong_format\t" + i.id + "\t" + i.path + "\t" + i.reason + "\n";
  }
  return out;
}

std::string FormatAuditJson(const AuditReport& report) {
  const nlohmann::json j = {
      {"checked", report.checked},
      {"skipped", report.skipped},
      {"total_seconds", report.total_seconds},
      {"missing", IssuesJson(report.missing)},
      {"wrong_format", IssuesJson(report.wrong_format)},
  };
  return j.dump(2) + "\n";
}

}  // namespace flowvoc::corpus
