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

#ifndef FLOWVOC_NUMERICS_GRAD_CHECK_H_
#define FLOWVOC_NUMERICS_GRAD_CHECK_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace flowvoc::numerics {

// Gradients smaller than this are compared in absolute rather than relative
// terms; central differences cannot resolve values below it in 64-bit.
inline constexpr double kDefaultGradFloor = 1e-6;

// |analytic - numeric| / max(|analytic|, |numeric|, floor).
double RelativeError(double analytic, double numeric,
                     double floor = kDefaultGradFloor);

struct GradCheckReport {
  double max_rel_error = 0.0;
  size_t worst_index = 0;
  size_t checked = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

using ScalarFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<std::vector<double>(std::span<const double>)>;

// Central-difference check of `grad` against `f` at every coordinate of x.
// epsilon must lie in [1e-7, 1e-3] (kConfigInvalid otherwise).
GradCheckReport GradCheckDetailed(const ScalarFn& f, const GradientFn& grad,
                                  std::span<const double> x, double epsilon,
                                  double floor = kDefaultGradFloor);

inline double GradCheck(const ScalarFn& f, const GradientFn& grad,
                        std::span<const double> x, double epsilon,
                        double floor = kDefaultGradFloor) {
  return GradCheckDetailed(f, grad, x, epsilon, floor).max_rel_error;
}

// Perturbs values[i] in place for each probed index, evaluates `loss`, and
// restores it. `analytic[j]` is the gradient for indices[j].
GradCheckReport CheckCoordinates(std::span<double> values,
                                 std::span<const size_t> indices,
                                 std::span<const double> analytic,
                                 const std::function<double()>& loss,
                                 double epsilon,
                                 double floor = kDefaultGradFloor);

}  // namespace flowvoc::numerics

#endif  // FLOWVOC_NUMERICS_GRAD_CHECK_H_
