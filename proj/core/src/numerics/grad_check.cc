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

#include "flowvoc/numerics/grad_check.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flowvoc/error.h"

namespace flowvoc::numerics {

double RelativeError(double analytic, double numeric, double floor) {
  const double diff = std::abs(analytic - numeric);
  if (!std::isfinite(diff)) return std::numeric_limits<double>::infinity();
  return diff / std::max({std::abs(analytic), std::abs(numeric), floor});
}

namespace {

void CheckEpsilon(double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw Error(ErrorCode::kConfigInvalid,
                "finite-difference epsilon must lie in [1e-7, 1e-3]");
  }
}

void Record(GradCheckReport& report, size_t index, double analytic,
            double numeric, double floor) {
  const double err = RelativeError(analytic, numeric, floor);
  if (report.checked == 0 || err > report.max_rel_error) {
    report.max_rel_error = err;
    report.worst_index = index;
    report.worst_analytic = analytic;
    report.worst_numeric = numeric;
  }
  ++report.checked;
}

}  // namespace

GradCheckReport GradCheckDetailed(const ScalarFn& f, const GradientFn& grad,
                                  std::span<const double> x, double epsilon,
                                  double floor) {
  CheckEpsilon(epsilon);
  const std::vector<double> analytic = grad(x);
  if (analytic.size() != x.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "gradient length differs from input length");
  }
  std::vector<double> point(x.begin(), x.end());
  std::vector<size_t> indices(x.size());
  std::iota(indices.begin(), indices.end(), size_t{0});
  return CheckCoordinates(point, indices, analytic,
                          [&] { return f(point); }, epsilon, floor);
}

GradCheckReport CheckCoordinates(std::span<double> values,
                                 std::span<const size_t> indices,
                                 std::span<const double> analytic,
                                 const std::function<double()>& loss,
                                 double epsilon, double floor) {
  CheckEpsilon(epsilon);
  if (indices.size() != analytic.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "one analytic gradient per probed index is required");
  }
  GradCheckReport report;
  for (size_t j = 0; j < indices.size(); ++j) {
    double& v = values[indices[j]];
    const double saved = v;
    v = saved + epsilon;
    const double up = loss();
    v = saved - epsilon;
    const double down = loss();
    v = saved;
    Record(report, indices[j], analytic[j], (up - down) / (2.0 * epsilon),
           floor);
  }
  return report;
}

}  // namespace flowvoc::numerics
