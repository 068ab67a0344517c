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

#include "flowvoc/evaluation/mos.h"

#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "flowvoc/error.h"

namespace flowvoc::evaluation {

namespace {

nlohmann::json Optional(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string Fixed2(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v);
  return buf;
}

std::string PadRight(const std::string& s, size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

double Mos(std::span<const int> scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyScores, "no scores");
  int64_t sum = 0;
  for (int s : scores) {
    if (s < kMinScore || s > kMaxScore) {
      throw Error(ErrorCode::kScoreOutOfRange,
                  "score " + std::to_string(s) + " outside 1..5");
    }
    sum += s;
  }
  return static_cast<double>(sum) / static_cast<double>(scores.size());
}

MosReport CategoryReport(std::span<const RatingRecord> ratings,
                         const std::string& model_id) {
  MosReport report;
  report.model_id = model_id;
  std::map<std::string, std::vector<int>> by_category;
  std::vector<int> all;
  for (const auto& r : ratings) {
    if (!model_id.empty() && r.model_id != model_id) continue;
    by_category[r.category].push_back(r.score);
    all.push_back(r.score);
  }
  if (all.empty()) return report;
  double sum_of_means = 0.0;
  for (const auto& [category, scores] : by_category) {
    const double mean = Mos(scores);
    report.per_category[category] = {mean, scores.size()};
    sum_of_means += mean;
  }
  report.overall_mean_of_categories =
      sum_of_means / static_cast<double>(by_category.size());
  report.overall_mean_of_ratings = Mos(all);
  return report;
}

std::vector<MosReport> ReportsByModel(std::span<const RatingRecord> ratings) {
  std::vector<std::string> models;
  std::set<std::string> seen;
  for (const auto& r : ratings) {
    if (seen.insert(r.model_id).second) models.push_back(r.model_id);
  }
  std::vector<MosReport> out;
  for (const auto& m : models) out.push_back(CategoryReport(ratings, m));
  return out;
}

ComparisonTable CompareModels(std::span<const MosReport> reports) {
  ComparisonTable table;
  std::set<std::string> categories;
  for (const auto& r : reports) {
    table.models.push_back(r.model_id);
    table.overall_mean_of_categories.push_back(r.overall_mean_of_categories);
    table.overall_mean_of_ratings.push_back(r.overall_mean_of_ratings);
    for (const auto& [c, stat] : r.per_category) categories.insert(c);
  }
  table.categories.assign(categories.begin(), categories.end());
  for (const auto& c : table.categories) {
    std::vector<std::optional<double>> row;
    for (const auto& r : reports) {
      const auto it = r.per_category.find(c);
      row.push_back(it == r.per_category.end()
                        ? std::nullopt
                        : std::optional<double>(it->second.mean));
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

std::string FormatReportText(const MosReport& report) {
  std::string out = "model\t" +
                    (report.model_id.empty() ? "*" : report.model_id) + "\n";
  for (const auto& [c, stat] : report.per_category) {
    out += c + "\t" + Fixed2(stat.mean) + "\t" + std::to_string(stat.n) + "\n";
  }
  out += "overall_mean_of_categories\t" +
         Fixed2(report.overall_mean_of_categories) + "\n";
  out += "overall_mean_of_ratings\t" + Fixed2(report.overall_mean_of_ratings) +
         "\n";
  return out;
}

std::string FormatReportJson(const MosReport& report) {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [c, stat] : report.per_category) {
    per[c] = {{"mean", stat.mean}, {"n", stat.n}};
  }
  const nlohmann::json j = {
      {"model_id", report.model_id},
      {"per_category", per},
      {"overall_mean_of_categories", Optional(report.overall_mean_of_categories)},
      {"overall_mean_of_ratings", Optional(report.overall_mean_of_ratings)},
  };
  return j.dump(2) + "\n";
}

std::string FormatComparisonText(const ComparisonTable& table) {
  size_t width = 8;
  for (const auto& c : table.categories) width = std::max(width, c.size() + 2);
  width = std::max(width, std::string("overall (ratings)").size() + 2);
  std::string out = PadRight("category", width);
  for (const auto& m : table.models) out += "\t" + m;
  out += "\n";
  for (size_t i = 0; i < table.categories.size(); ++i) {
    out += PadRight(table.categories[i], width);
    for (const auto& cell : table.cells[i]) out += "\t" + Fixed2(cell);
    out += "\n";
  }
  out += PadRight("overall", width);
  for (const auto& v : table.overall_mean_of_categories) out += "\t" + Fixed2(v);
  out += "\n" + PadRight("overall (ratings)", width);
  for (const auto& v : table.overall_mean_of_ratings) out += "\t" + Fixed2(v);
  return out + "\n";
}

std::string FormatComparisonJson(const ComparisonTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < table.categories.size(); ++i) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : table.cells[i]) cells.push_back(Optional(cell));
    rows.push_back({{"category", table.categories[i]}, {"means", cells}});
  }
  nlohmann::json overall = nlohmann::json::array();
  nlohmann::json overall_ratings = nlohmann::json::array();
  for (const auto& v : table.overall_mean_of_categories) {
    overall.push_back(Optional(v));
  }
  for (const auto& v : table.overall_mean_of_ratings) {
    overall_ratings.push_back(Optional(v));
  }
  const nlohmann::json j = {{"models", table.models},
                            {"rows", rows},
                            {"overall_mean_of_categories", overall},
                            {"overall_mean_of_ratings", overall_ratings}};
  return j.dump(2) + "\n";
}

}  // namespace flowvoc::evaluation
