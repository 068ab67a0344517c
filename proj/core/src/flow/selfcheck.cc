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

#include "flowvoc/flow/selfcheck.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <Eigen/Dense>

#include "flowvoc/flow/flow.h"
#include "flowvoc/flow/gradient.h"
#include "flowvoc/numerics/grad_check.h"
#include "flowvoc/text_map.h"

namespace flowvoc::flow {

namespace {

// Smallest multiple of the group size that is >= requested.
int RoundToGroup(int requested, int group) {
  return std::max(group, (requested + group - 1) / group * group);
}

template <typename T>
std::vector<T> RandomVector(size_t n, double scale, Rng& rng) {
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(scale * StandardNormal(rng));
  return v;
}

template <typename T>
Tensor<T> RandomCondition(const FlowConfig& cfg, int frames, Rng& rng) {
  return Tensor<T>({static_cast<size_t>(cfg.n_mel_channels),
                    static_cast<size_t>(frames)},
                   RandomVector<T>(static_cast<size_t>(cfg.n_mel_channels) *
                                       static_cast<size_t>(frames),
                                   1.0, rng));
}

std::string Sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace

std::string ParameterClass(const std::string& name) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t dot = name.find('.', start);
    parts.push_back(name.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i < 2 && parts[0] == "flow") continue;
    if (!parts[i].empty() &&
        std::all_of(parts[i].begin(), parts[i].end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    if (!out.empty()) out += ".";
    out += parts[i];
  }
  return out;
}

CheckResult CheckRoundTrip(const FlowModel<float>& model, Rng& rng,
                           int num_samples) {
  const FlowConfig& cfg = model.config;
  const int n = RoundToGroup(num_samples, cfg.group_size);
  const int frames = n / cfg.group_size;
  const std::vector<float> x = RandomVector<float>(n, 0.5, rng);
  const Tensor<float> cond = RandomCondition<float>(cfg, frames, rng);
  const ForwardResult<float> fwd = FlowForward<float>(x, cond, model);
  const std::vector<float> back = FlowInverse(fwd.z, cond, model);
  double err = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    err = std::max(err, std::abs(static_cast<double>(back[i]) - x[i]));
  }
  CheckResult r{"roundtrip", err, kRoundTripTolerance, err <= kRoundTripTolerance,
                "max |inverse(forward(x)) - x| over " + std::to_string(n) +
                    " samples"};
  return r;
}

CheckResult CheckJacobian(const FlowModel<double>& model, Rng& rng, int dim) {
  const FlowConfig& cfg = model.config;
  const int n = RoundToGroup(dim, cfg.group_size);
  const int frames = n / cfg.group_size;
  std::vector<double> x = RandomVector<double>(n, 0.5, rng);
  const Tensor<double> cond = RandomCondition<double>(cfg, frames, rng);
  const ForwardResult<double> fwd = FlowForward<double>(x, cond, model);
  const double analytic = fwd.sum_log_s + fwd.sum_log_det_w;

  const double eps = 1e-5;
  Eigen::MatrixXd jac(n, n);
  for (int i = 0; i < n; ++i) {
    const double saved = x[i];
    x[i] = saved + eps;
    const Tensor<double> zp = FlowForward<double>(x, cond, model).z;
    x[i] = saved - eps;
    const Tensor<double> zm = FlowForward<double>(x, cond, model).z;
    x[i] = saved;
    for (int j = 0; j < n; ++j) jac(j, i) = (zp[j] - zm[j]) / (2 * eps);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
  const Eigen::MatrixXd u = lu.matrixLU().triangularView<Eigen::Upper>();
  double numeric = 0.0;
  for (int i = 0; i < n; ++i) numeric += std::log(std::abs(u(i, i)));
  const double err = std::abs(analytic - numeric) / std::max(std::abs(numeric), 1.0);
  return {"jacobian", err, kJacobianTolerance, err <= kJacobianTolerance,
          "analytic " + FormatDouble(analytic) + " vs numeric " +
              FormatDouble(numeric) + " (dim " + std::to_string(n) + ")"};
}

std::vector<CheckResult> CheckGradients(const FlowModel<double>& model,
                                        Rng& rng, int dim,
                                        int coords_per_class) {
  FlowModel<double> m = model;
  const FlowConfig& cfg = m.config;
  const int n = RoundToGroup(dim, cfg.group_size);
  const int frames = n / cfg.group_size;
  const std::vector<double> x = RandomVector<double>(n, 0.5, rng);
  const Tensor<double> cond = RandomCondition<double>(cfg, frames, rng);
  const double sigma = cfg.sigma_train;

  m.ZeroGrad();
  AccumulateLossGradient<double>(m, x, cond, sigma);
  const auto loss = [&] {
    return NegativeLogLikelihood(FlowForward<double>(x, cond, m), sigma).total;
  };

  std::vector<std::string> order;
  std::map<std::string, std::vector<numerics::Parameter<double>*>> classes;
  m.ForEachParameter([&](numerics::Parameter<double>& p) {
    auto& members = classes[ParameterClass(p.name)];
    if (members.empty()) order.push_back(ParameterClass(p.name));
    members.push_back(&p);
  });

  std::vector<CheckResult> out;
  for (const auto& cls : order) {
    const auto& members = classes.at(cls);
    size_t total = 0;
    for (const auto* p : members) total += p->value.size();
    const size_t count =
        std::min(total, static_cast<size_t>(coords_per_class));
    // Distinct (tensor, index) pairs drawn uniformly over the class.
    std::map<size_t, std::vector<size_t>> picks;
    size_t picked = 0;
    while (picked < count) {
      size_t flat = UniformIndex(rng, total);
      size_t t = 0;
      while (flat >= members[t]->value.size()) flat -= members[t++]->value.size();
      auto& idx = picks[t];
      if (std::find(idx.begin(), idx.end(), flat) != idx.end()) continue;
      idx.push_back(flat);
      ++picked;
    }
    numerics::GradCheckReport worst;
    for (const auto& [t, idx] : picks) {
      numerics::Parameter<double>* p = members[t];
      std::vector<double> analytic;
      for (size_t i : idx) analytic.push_back(p->grad[i]);
      const numerics::GradCheckReport rep = numerics::CheckCoordinates(
          p->value.values(), idx, analytic, loss, 1e-5);
      if (worst.checked == 0 || rep.max_rel_error > worst.max_rel_error) {
        const size_t checked = worst.checked;
        worst = rep;
        worst.checked = checked;
      }
      worst.checked += rep.checked;
    }
    out.push_back({"grad " + cls, worst.max_rel_error, kGradientTolerance,
                   worst.max_rel_error <= kGradientTolerance,
                   std::to_string(worst.checked) + " coords, worst analytic " +
                       Sci(worst.worst_analytic) + " numeric " +
                       Sci(worst.worst_numeric)});
  }
  return out;
}

}  // namespace flowvoc::flow
