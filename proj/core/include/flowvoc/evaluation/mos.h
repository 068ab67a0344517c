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

#ifndef FLOWVOC_EVALUATION_MOS_H_
#define FLOWVOC_EVALUATION_MOS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowvoc/evaluation/ratings.h"

namespace flowvoc::evaluation {

// Arithmetic mean of 1..5 scores. kEmptyScores, kScoreOutOfRange.
double Mos(std::span<const int> scores);

struct CategoryStat {
  double mean = 0.0;
  size_t n = 0;

  friend bool operator==(const CategoryStat&, const CategoryStat&) = default;
};

struct MosReport {
  std::string model_id;  // empty: all models pooled
  std::map<std::string, CategoryStat> per_category;
  // Unweighted mean of the per-category means.
  std::optional<double> overall_mean_of_categories;
  // Mean over every individual rating.
  std::optional<double> overall_mean_of_ratings;

  friend bool operator==(const MosReport&, const MosReport&) = default;
};

// Uses the ratings whose model_id matches, or all of them when model_id is
// empty. With no matching ratings the report is empty and both overall
// statistics are absent.
MosReport CategoryReport(std::span<const RatingRecord> ratings,
                         const std::string& model_id);

// One report per distinct model_id, in order of first appearance.
std::vector<MosReport> ReportsByModel(std::span<const RatingRecord> ratings);

struct ComparisonTable {
  std::vector<std::string> models;      // column order = input order
  std::vector<std::string> categories;  // sorted union
  // cells[category][model]; absent when the model has no such category.
  std::vector<std::vector<std::optional<double>>> cells;
  std::vector<std::optional<double>> overall_mean_of_categories;
  std::vector<std::optional<double>> overall_mean_of_ratings;
};

ComparisonTable CompareModels(std::span<const MosReport> reports);

std::string FormatReportText(const MosReport& report);
std::string FormatReportJson(const MosReport& report);
// Means to two decimals, "-" for missing cells.
std::string FormatComparisonText(const ComparisonTable& table);
std::string FormatComparisonJson(const ComparisonTable& table);

}  // namespace flowvoc::evaluation

#endif  // FLOWVOC_EVALUATION_MOS_H_
