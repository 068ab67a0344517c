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

#ifndef FLOWVOC_FLOW_SELFCHECK_H_
#define FLOWVOC_FLOW_SELFCHECK_H_

#include <string>
#include <vector>

#include "flowvoc/flow/model.h"
#include "flowvoc/random.h"

namespace flowvoc::flow {

struct CheckResult {
  std::string name;
  double value = 0.0;      // measured error
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

inline constexpr double kRoundTripTolerance = 1e-4;
inline constexpr double kJacobianTolerance = 1e-3;
inline constexpr double kGradientTolerance = 1e-3;

// Random segment of `num_samples` samples and random conditioning pushed
// through the forward and inverse flow in 32-bit; reports max |x' - x|.
CheckResult CheckRoundTrip(const FlowModel<float>& model, Rng& rng,
                           int num_samples = 4096);

// Compares sum_log_s + sum_log_det_w with ln |det J| of a central-difference
// Jacobian of the forward map on a `dim`-sample input (64-bit). The error is
// |analytic - numeric| / max(|numeric|, 1).
CheckResult CheckJacobian(const FlowModel<double>& model, Rng& rng,
                          int dim = 64);

// Central-difference check of the loss gradient at `coords_per_class`
// random coordinates drawn across all tensors of each parameter class
// (64-bit). One result per class (e.g. "invconv.weight", "wn.cond.bias").
std::vector<CheckResult> CheckGradients(const FlowModel<double>& model,
                                        Rng& rng, int dim = 64,
                                        int coords_per_class = 6);

// "flow.3.wn.cond.1.weight" -> "wn.cond.weight".
std::string ParameterClass(const std::string& name);

}  // namespace flowvoc::flow

#endif  // FLOWVOC_FLOW_SELFCHECK_H_
