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

#include "flowvoc/training/checkpoint.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "flowvoc/error.h"
#include "flowvoc/flow/flow.h"
#include "flowvoc/text_map.h"

namespace flowvoc::training {

namespace {

constexpr char kMagic[] = "KWGLOW1";
constexpr size_t kMagicSize = sizeof(kMagic) - 1;

[[noreturn]] void Corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptFile, what);
}

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint32_t GetU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

void PutFloats(std::vector<uint8_t>& out, const Tensor<float>& t) {
  for (float f : t.values()) PutU32(out, std::bit_cast<uint32_t>(f));
}

std::string ShapeText(const std::vector<size_t>& shape) {
  std::string s;
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s;
}

std::string OrderText(const std::vector<uint32_t>& order) {
  std::string s;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(order[i]);
  }
  return s;
}

std::vector<uint32_t> ParseOrder(const std::string& text) {
  std::vector<uint32_t> order;
  if (text.empty()) return order;
  size_t start = 0;
  while (true) {
    const size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma - start);
    const int64_t v = ParseInt(item);
    if (v < 0 || v > UINT32_MAX) Corrupt("bad order entry '" + item + "'");
    order.push_back(static_cast<uint32_t>(v));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return order;
}

uint64_t PayloadHash(const uint8_t* data, size_t size) {
  return Fnv1a64(std::string_view(reinterpret_cast<const char*>(data), size));
}

}  // namespace

std::string CheckpointFileName(int64_t iteration) {
  return "checkpoint_" + std::to_string(iteration) + ".kwg";
}

std::vector<uint8_t> EncodeCheckpoint(const Checkpoint& ck) {
  TextMap header;
  header.SetInt("format_version", kCheckpointFormatVersion);
  const TextMap config_map = ck.config.ToTextMap();
  for (const auto& [key, value] : config_map.entries()) {
    header.Set(key, value);
  }
  header.SetUint("train.hash", ck.config.train.Hash());
  header.SetInt("state.iteration", ck.state.iteration);
  header.SetInt("state.epoch", ck.state.epoch);
  header.SetInt("state.cursor", ck.state.cursor);
  header.SetInt("state.consecutive_failures", ck.state.consecutive_failures);
  header.Set("state.order", OrderText(ck.state.order));
  header.Set("state.rng", ck.state.rng);
  header.SetInt("adam.step", ck.adam.step);

  std::vector<const numerics::Parameter<float>*> params;
  ck.model.ForEachParameter(
      [&](const numerics::Parameter<float>& p) { params.push_back(&p); });
  if (ck.adam.m.size() != params.size() || ck.adam.v.size() != params.size()) {
    throw Error(ErrorCode::kShapeMismatch, "Adam state does not match model");
  }
  header.SetInt("param.count", static_cast<int64_t>(params.size()));
  for (size_t i = 0; i < params.size(); ++i) {
    const std::string p = "param." + std::to_string(i);
    header.Set(p + ".name", params[i]->name);
    header.Set(p + ".shape", ShapeText(params[i]->value.shape()));
  }

  std::vector<uint8_t> payload;
  for (const auto* p : params) PutFloats(payload, p->value);
  for (const auto& m : ck.adam.m) PutFloats(payload, m);
  for (const auto& v : ck.adam.v) PutFloats(payload, v);
  header.SetUint("payload.fnv1a64", PayloadHash(payload.data(), payload.size()));

  const std::string text = header.Serialize();
  std::vector<uint8_t> out(kMagic, kMagic + kMagicSize);
  PutU32(out, static_cast<uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Checkpoint DecodeCheckpoint(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < kMagicSize + 4 ||
      std::memcmp(bytes.data(), kMagic, kMagicSize) != 0) {
    Corrupt("missing KWGLOW1 magic");
  }
  const uint32_t header_len = GetU32(bytes.data() + kMagicSize);
  const size_t body = kMagicSize + 4 + static_cast<size_t>(header_len);
  if (body > bytes.size()) Corrupt("header truncated");

  TextMap header;
  try {
    header = TextMap::Parse(std::string_view(
        reinterpret_cast<const char*>(bytes.data()) + kMagicSize + 4,
        header_len));
  } catch (const Error& e) {
    Corrupt(std::string("unreadable header: ") + e.what());
  }

  Checkpoint ck;
  try {
    const int64_t version = header.GetInt("format_version");
    if (version != kCheckpointFormatVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "unsupported checkpoint format_version " +
                      std::to_string(version));
    }
    TextMap config_map;
    for (const auto& [key, value] : header.entries()) {
      if (key.rfind("flow.", 0) == 0 || key.rfind("stft.", 0) == 0 ||
          key.rfind("mel.", 0) == 0 ||
          (key.rfind("train.", 0) == 0 && key != "train.hash")) {
        config_map.Set(key, value);
      }
    }
    try {
      ck.config = RunConfig::FromTextMap(config_map);
      ck.config.Validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::kVersionMismatch,
                  std::string("stored configuration rejected: ") + e.what());
    }
    if (header.GetUint("train.hash") != ck.config.train.Hash()) {
      Corrupt("train.hash does not match the stored train config");
    }
    ck.state.iteration = header.GetInt("state.iteration");
    ck.state.epoch = header.GetInt("state.epoch");
    ck.state.cursor = header.GetInt("state.cursor");
    ck.state.consecutive_failures =
        static_cast<int>(header.GetInt("state.consecutive_failures"));
    ck.state.order = ParseOrder(header.Get("state.order"));
    ck.state.rng = header.Get("state.rng");
    DeserializeRng(ck.state.rng);
    ck.adam.step = header.GetInt("adam.step");
    if (ck.state.iteration < 0 || ck.adam.step < 0 || ck.state.cursor < 0) {
      Corrupt("negative counter");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) Corrupt(e.what());
    throw;
  }

  uint64_t stored_hash = 0;
  try {
    stored_hash = header.GetUint("payload.fnv1a64");
  } catch (const Error& e) {
    Corrupt(e.what());
  }
  if (stored_hash != PayloadHash(bytes.data() + body, bytes.size() - body)) {
    Corrupt("payload checksum mismatch");
  }

  ck.model = flow::BuildFlowModel<float>(ck.config.flow);
  std::vector<numerics::Parameter<float>*> params;
  ck.model.ForEachParameter(
      [&](numerics::Parameter<float>& p) { params.push_back(&p); });
  int64_t count = 0;
  try {
    count = header.GetInt("param.count");
  } catch (const Error& e) {
    Corrupt(e.what());
  }
  if (count != static_cast<int64_t>(params.size())) {
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint holds " + std::to_string(count) +
                    " parameters, configuration implies " +
                    std::to_string(params.size()));
  }
  size_t total = 0;
  for (size_t i = 0; i < params.size(); ++i) {
    const std::string p = "param." + std::to_string(i);
    const auto name = header.Find(p + ".name");
    const auto shape = header.Find(p + ".shape");
    if (!name || !shape) Corrupt("missing entry for " + p);
    if (*name != params[i]->name ||
        *shape != ShapeText(params[i]->value.shape())) {
      throw Error(ErrorCode::kVersionMismatch,
                  p + " is " + *name + " [" + *shape + "], expected " +
                      params[i]->name + " [" +
                      ShapeText(params[i]->value.shape()) + "]");
    }
    total += params[i]->value.size();
  }
  if (bytes.size() != body + 3 * total * 4) {
    Corrupt("payload is " + std::to_string(bytes.size() - body) +
            " bytes, expected " + std::to_string(3 * total * 4));
  }

  const uint8_t* cursor = bytes.data() + body;
  const auto read_into = [&](Tensor<float>& t) {
    for (size_t j = 0; j < t.size(); ++j) {
      t[j] = std::bit_cast<float>(GetU32(cursor));
      cursor += 4;
    }
  };
  for (auto* p : params) read_into(p->value);
  ck.adam.m.reserve(params.size());
  ck.adam.v.reserve(params.size());
  for (auto* p : params) {
    ck.adam.m.emplace_back(p->value.shape());
    read_into(ck.adam.m.back());
  }
  for (auto* p : params) {
    ck.adam.v.emplace_back(p->value.shape());
    read_into(ck.adam.v.back());
  }
  for (const auto& w : ck.model.inv_convs) flow::LogAbsDet(w.value);
  return ck;
}

void WriteFileAtomically(const std::filesystem::path& path,
                         const std::vector<uint8_t>& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoFailure,
                "cannot rename " + tmp.string() + ": " + ec.message());
  }
}

void SaveCheckpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  WriteFileAtomically(path, EncodeCheckpoint(ck));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return DecodeCheckpoint(bytes);
}

void RequireCompatible(const Checkpoint& ck, const flow::FlowConfig& expected) {
  if (!(ck.config.flow == expected)) {
    TextMap have, want;
    ck.config.flow.WriteTo(have);
    expected.WriteTo(want);
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint topology differs from configuration:\n" +
                    have.Serialize() + "vs\n" + want.Serialize());
  }
}

}  // namespace flowvoc::training
