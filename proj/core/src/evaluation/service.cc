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

#include "flowvoc/evaluation/service.h"

#include <fcntl.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iterator>
#include <mutex>
#include <set>
#include <unordered_map>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "flowvoc/error.h"
#include "flowvoc/evaluation/mos.h"
#include "flowvoc/random.h"
#include "flowvoc/text_map.h"

namespace flowvoc::evaluation {

namespace {

using nlohmann::json;

bool ValidSessionId(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, int status, const std::string& msg) {
  Reply(res, status, json{{"error", msg}});
}

int64_t SystemSeconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// Appends one line and fsyncs before returning.
void AppendDurably(const std::filesystem::path& path, const std::string& line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::string data;
  if (::lseek(fd, 0, SEEK_END) == 0) data = std::string(kRatingsHeader) + "\n";
  data += line + "\n";
  const char* p = data.data();
  size_t left = data.size();
  while (left > 0) {
    const ssize_t n = ::write(fd, p, left);
    if (n <= 0) {
      ::close(fd);
      throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
    }
    p += n;
    left -= static_cast<size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) throw Error(ErrorCode::kIoFailure, "fsync failed");
}

}  // namespace

std::vector<SampleEntry> LoadSampleStore(const std::filesystem::path& dir) {
  const auto index = dir / kSampleIndexName;
  std::ifstream in(index);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + index.string());
  std::vector<SampleEntry> out;
  std::set<std::string> ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      f.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    const std::string where = index.string() + ":" + std::to_string(line_no);
    if (f.size() != 4 || f[0].empty() || f[1].empty() || f[2].empty() ||
        f[3].empty()) {
      throw Error(ErrorCode::kParseError,
                  where + ": expected sample_id, category, model_id, wav_file");
    }
    if (!ids.insert(f[0]).second) {
      throw Error(ErrorCode::kDuplicateId, where + ": duplicate sample " + f[0]);
    }
    SampleEntry e{f[0], f[1], f[2], dir / f[3]};
    if (!std::filesystem::is_regular_file(e.wav_path)) {
      throw Error(ErrorCode::kIoFailure,
                  where + ": missing audio " + e.wav_path.string());
    }
    out.push_back(std::move(e));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kCorpusEmpty, index.string() + " lists no samples");
  }
  return out;
}

struct ListeningTestService::Impl {
  struct Session {
    std::vector<size_t> order;  // indices into samples
    size_t cursor = 0;          // number of ratings submitted
  };

  ServiceConfig config;
  std::unordered_map<std::string, size_t> index;
  std::vector<size_t> base_order;  // samples sorted by id
  std::map<std::string, Session> sessions;
  std::vector<RatingRecord> ratings;
  mutable std::mutex mu;
  httplib::Server server;

  Session& OpenSession(const std::string& id) {
    auto it = sessions.find(id);
    if (it != sessions.end()) return it->second;
    Session s;
    s.order = base_order;
    Rng rng(config.seed ^ Fnv1a64(id));
    Shuffle<size_t>(s.order, rng);
    return sessions.emplace(id, std::move(s)).first->second;
  }

  void Replay() {
    std::error_code ec;
    if (!std::filesystem::exists(config.ratings_path, ec)) return;
    for (auto& r : IngestRatings(config.ratings_path)) {
      const auto it = index.find(r.sample_id);
      if (it == index.end()) {
        throw Error(ErrorCode::kParseError,
                    "ratings file references unknown sample " + r.sample_id);
      }
      Session& s = OpenSession(r.rater_id);
      if (s.cursor >= s.order.size() || s.order[s.cursor] != it->second) {
        throw Error(ErrorCode::kParseError,
                    "ratings of rater " + r.rater_id +
                        " do not follow the session order");
      }
      ++s.cursor;
      ratings.push_back(std::move(r));
    }
  }

  void HandleNext(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    if (!ValidSessionId(id)) return ReplyError(res, 400, "bad session id");
    std::lock_guard lock(mu);
    Session& s = OpenSession(id);
    const size_t total = s.order.size();
    if (s.cursor >= total) {
      std::vector<int> scores;
      for (const auto& r : ratings) {
        if (r.rater_id == id) scores.push_back(r.score);
      }
      return Reply(res, 200,
                   json{{"done", true},
                        {"total", total},
                        {"mean", scores.empty() ? json(nullptr)
                                                : json(Mos(scores))}});
    }
    const SampleEntry& e = config.samples[s.order[s.cursor]];
    Reply(res, 200,
          json{{"sample_id", e.sample_id},
               {"category", e.category},
               {"audio_url", "/api/audio/" + e.sample_id},
               {"position", s.cursor + 1},
               {"total", total}});
  }

  void HandleAudio(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto it = index.find(id);
    if (it == index.end()) return ReplyError(res, 404, "unknown sample");
    std::ifstream in(config.samples[it->second].wav_path, std::ios::binary);
    if (!in) return ReplyError(res, 500, "audio unavailable");
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    res.status = 200;
    res.set_content(std::move(bytes), "audio/wav");
  }

  void HandleRating(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    if (!ValidSessionId(id)) return ReplyError(res, 400, "bad session id");
    const json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() ||
        !body.contains("sample_id") || !body["sample_id"].is_string() ||
        !body.contains("score") || !body["score"].is_number_integer()) {
      return ReplyError(res, 400, "expected {sample_id: string, score: int}");
    }
    const std::string sample_id = body["sample_id"];
    const int64_t score = body["score"];
    if (score < kMinScore || score > kMaxScore) {
      return ReplyError(res, 400, "score must be in 1..5");
    }
    std::lock_guard lock(mu);
    const auto session = sessions.find(id);
    if (session == sessions.end()) return ReplyError(res, 404, "unknown session");
    const auto sample = index.find(sample_id);
    if (sample == index.end()) return ReplyError(res, 404, "unknown sample");
    Session& s = session->second;
    if (s.cursor >= s.order.size()) {
      return ReplyError(res, 409, "session already complete");
    }
    if (s.order[s.cursor] != sample->second) {
      return ReplyError(res, 409, "sample is not the current one");
    }
    const SampleEntry& e = config.samples[sample->second];
    RatingRecord r{id, e.sample_id, e.category, e.model_id,
                   static_cast<int>(score), config.clock()};
    try {
      AppendDurably(config.ratings_path, FormatRatingRow(r));
    } catch (const Error& err) {
      return ReplyError(res, 500, err.what());
    }
    ratings.push_back(std::move(r));
    ++s.cursor;
    Reply(res, 200, json{{"accepted", true},
                         {"position", s.cursor},
                         {"total", s.order.size()}});
  }

  void HandleReport(const httplib::Request& req, httplib::Response& res) {
    const std::string model =
        req.has_param("model") ? req.get_param_value("model") : "";
    std::lock_guard lock(mu);
    const MosReport report = CategoryReport(ratings, model);
    res.status = 200;
    res.set_content(FormatReportJson(report), "application/json");
  }
};

ListeningTestService::ListeningTestService(ServiceConfig config)
    : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  s.config = std::move(config);
  if (!s.config.clock) s.config.clock = SystemSeconds;
  for (size_t i = 0; i < s.config.samples.size(); ++i) {
    if (!s.index.emplace(s.config.samples[i].sample_id, i).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate sample " + s.config.samples[i].sample_id);
    }
    s.base_order.push_back(i);
  }
  std::sort(s.base_order.begin(), s.base_order.end(), [&](size_t a, size_t b) {
    return s.config.samples[a].sample_id < s.config.samples[b].sample_id;
  });
  s.Replay();

  // SO_REUSEADDR only, so an occupied port fails to bind.
  s.server.set_socket_options([](int sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  s.server.Get(R"(/api/session/([^/]+)/next)",
               [&s](const httplib::Request& req, httplib::Response& res) {
                 s.HandleNext(req, res);
               });
  s.server.Get(R"(/api/audio/([^/]+))",
               [&s](const httplib::Request& req, httplib::Response& res) {
                 s.HandleAudio(req, res);
               });
  s.server.Post(R"(/api/session/([^/]+)/rating)",
                [&s](const httplib::Request& req, httplib::Response& res) {
                  s.HandleRating(req, res);
                });
  s.server.Get("/api/report",
               [&s](const httplib::Request& req, httplib::Response& res) {
                 s.HandleReport(req, res);
               });
  if (s.config.static_dir) {
    if (!s.server.set_mount_point("/", s.config.static_dir->string())) {
      throw Error(ErrorCode::kIoFailure,
                  "cannot serve " + s.config.static_dir->string());
    }
  }
}

ListeningTestService::~ListeningTestService() { Stop(); }

int ListeningTestService::Bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) {
      throw Error(ErrorCode::kIoFailure, "cannot bind " + host + ":0");
    }
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIoFailure,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ListeningTestService::Listen() { impl_->server.listen_after_bind(); }

void ListeningTestService::Stop() {
  if (impl_) impl_->server.stop();
}

void ListeningTestService::WaitUntilReady() { impl_->server.wait_until_ready(); }

std::vector<std::string> ListeningTestService::SessionOrder(
    const std::string& session_id) const {
  std::lock_guard lock(impl_->mu);
  std::vector<size_t> order = impl_->base_order;
  Rng rng(impl_->config.seed ^ Fnv1a64(session_id));
  Shuffle<size_t>(order, rng);
  std::vector<std::string> out;
  for (size_t i : order) out.push_back(impl_->config.samples[i].sample_id);
  return out;
}

std::vector<RatingRecord> ListeningTestService::Ratings() const {
  std::lock_guard lock(impl_->mu);
  return impl_->ratings;
}

}  // namespace flowvoc::evaluation
