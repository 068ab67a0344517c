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

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "flowvoc/flow/flow.h"
#include "flowvoc/flow/gradient.h"
#include "flowvoc/flow/model.h"
#include "flowvoc/flow/selfcheck.h"
#include "flowvoc/random.h"
#include "gtest/gtest.h"

namespace flowvoc::flow {
namespace {

struct Fixture {
  FlowModel<double> model;
  std::vector<double> segment;
  Tensor<double> cond;
};

Fixture MakeFixture(int group, int flows, uint64_t seed) {
  FlowConfig cfg;
  cfg.n_mel_channels = 3;
  cfg.n_flows = flows;
  cfg.group_size = group;
  cfg.early_every = 2;
  cfg.early_size = 1;
  cfg.wn_layers = 3;
  cfg.wn_channels = 6;
  Rng rng(seed);
  Fixture f{InitFlowModel<double>(cfg, rng), {}, {}};
  RandomizeCouplings(f.model, rng, 0.3);
  for (auto& w : f.model.inv_convs) {
    for (size_t i = 0; i < w.value.size(); ++i) {
      w.value[i] += 0.2 * StandardNormal(rng);
    }
  }
  const size_t frames = 12;
  f.segment.resize(frames * group);
  for (auto& v : f.segment) v = 0.5 * StandardNormal(rng);
  f.cond = Tensor<double>({3, frames});
  for (auto& v : f.cond.values()) v = StandardNormal(rng);
  return f;
}

double Loss(const Fixture& f, double sigma) {
  return NegativeLogLikelihood(FlowForward<double>(f.segment, f.cond, f.model),
                               sigma)
      .total;
}

// Worst relative error per parameter class over every coordinate of every
// tensor, analytic gradient against central differences of the loss.
std::map<std::string, double> ClassErrors(Fixture& f, double sigma) {
  f.model.ZeroGrad();
  AccumulateLossGradient<double>(f.model, f.segment, f.cond, sigma);
  std::map<std::string, double> worst;
  const double eps = 1e-6;
  f.model.ForEachParameter([&](Parameter<double>& p) {
    double& w = worst[ParameterClass(p.name)];
    for (size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + eps;
      const double up = Loss(f, sigma);
      p.value[i] = saved - eps;
      const double down = Loss(f, sigma);
      p.value[i] = saved;
      const double numeric = (up - down) / (2 * eps);
      const double analytic = p.grad[i];
      const double err = std::abs(analytic - numeric) /
                         std::max({std::abs(analytic), std::abs(numeric), 1e-6});
      w = std::max(w, err);
    }
  });
  return worst;
}

TEST(GradientTest, EveryParameterClassMatchesFiniteDifferences) {
  for (uint64_t seed : {1, 2}) {
    Fixture f = MakeFixture(4, 4, seed);
    const auto errors = ClassErrors(f, 1.0);
    EXPECT_TRUE(errors.contains("invconv.weight"));
    EXPECT_TRUE(errors.contains("wn.end.weight"));
    EXPECT_TRUE(errors.contains("wn.cond.weight"));
    for (const auto& [name, err] : errors) {
      EXPECT_LE(err, 1e-3) << name << " seed " << seed;
    }
  }
}

TEST(GradientTest, NonUnitSigmaAndOddChannels) {
  Fixture f = MakeFixture(5, 3, 3);
  for (const auto& [name, err] : ClassErrors(f, 0.6)) {
    EXPECT_LE(err, 1e-3) << name;
  }
}

TEST(GradientTest, ReturnsSameLossAsForward) {
  Fixture f = MakeFixture(4, 4, 4);
  const auto direct =
      NegativeLogLikelihood(FlowForward<double>(f.segment, f.cond, f.model), 1.0);
  f.model.ZeroGrad();
  const auto via_grad =
      AccumulateLossGradient<double>(f.model, f.segment, f.cond, 1.0);
  EXPECT_DOUBLE_EQ(via_grad.total, direct.total);
  EXPECT_DOUBLE_EQ(via_grad.z_term, direct.z_term);
  EXPECT_DOUBLE_EQ(via_grad.log_s_term, direct.log_s_term);
  EXPECT_DOUBLE_EQ(via_grad.log_det_w_term, direct.log_det_w_term);
}

TEST(GradientTest, ScaleMultipliesAndAccumulates) {
  Fixture f = MakeFixture(4, 2, 5);
  f.model.ZeroGrad();
  AccumulateLossGradient<double>(f.model, f.segment, f.cond, 1.0, 1.0);
  std::vector<double> once;
  f.model.ForEachParameter([&](const Parameter<double>& p) {
    once.insert(once.end(), p.grad.values().begin(), p.grad.values().end());
  });
  f.model.ZeroGrad();
  AccumulateLossGradient<double>(f.model, f.segment, f.cond, 1.0, 0.25);
  AccumulateLossGradient<double>(f.model, f.segment, f.cond, 1.0, 0.75);
  size_t i = 0;
  f.model.ForEachParameter([&](const Parameter<double>& p) {
    for (double g : p.grad.values()) {
      ASSERT_NEAR(g, once[i], 1e-12 * std::max(1.0, std::abs(once[i])));
      ++i;
    }
  });
}

// With zero couplings the only parameter-dependent Jacobian term is
// T * ln|det W|, so dL/dW has the closed form (z x^T - T W^-T) / n for a
// single flow.
TEST(GradientTest, LogDetContributionInClosedForm) {
  FlowConfig cfg;
  cfg.n_mel_channels = 2;
  cfg.n_flows = 1;
  cfg.group_size = 2;
  cfg.wn_layers = 1;
  cfg.wn_channels = 2;
  FlowModel<double> model = BuildFlowModel<double>(cfg);
  auto& w = model.inv_convs[0].value;
  w = Tensor<double>({2, 2}, std::vector<double>{2.0, 1.0, 0.5, 3.0});
  const std::vector<double> x{0.3, -0.1, 0.7, 0.2, -0.4, 0.5};
  const Tensor<double> cond({2, 3});
  model.ZeroGrad();
  AccumulateLossGradient<double>(model, x, cond, 1.0);
  const double det = 2.0 * 3.0 - 1.0 * 0.5;
  const double inv_t[2][2] = {{3.0 / det, -0.5 / det}, {-1.0 / det, 2.0 / det}};
  const double n = 6.0, frames = 3.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      double zx = 0.0;
      for (int t = 0; t < 3; ++t) {
        const double z = w.at(r, 0) * x[2 * t] + w.at(r, 1) * x[2 * t + 1];
        zx += z * x[2 * t + c];
      }
      const double expected = (zx - frames * inv_t[r][c]) / n;
      EXPECT_NEAR(model.inv_convs[0].grad.at(r, c), expected, 1e-12);
    }
  }
}

TEST(ParameterClassTest, StripsIndices) {
  EXPECT_EQ(ParameterClass("flow.3.wn.cond.1.weight"), "wn.cond.weight");
  EXPECT_EQ(ParameterClass("flow.0.invconv.weight"), "invconv.weight");
  EXPECT_EQ(ParameterClass("flow.11.wn.end.bias"), "wn.end.bias");
}

TEST(SelfCheckTest, AllChecksPassOnRandomModel) {
  FlowConfig cfg;
  cfg.n_mel_channels = 4;
  cfg.n_flows = 4;
  cfg.group_size = 8;
  cfg.early_every = 2;
  cfg.early_size = 2;
  cfg.wn_layers = 2;
  cfg.wn_channels = 8;
  Rng rng(6);
  auto model = InitFlowModel<float>(cfg, rng);
  RandomizeCouplings(model, rng, 0.1);
  EXPECT_TRUE(CheckRoundTrip(model, rng).pass);
  const auto dmodel = CastModel<double>(model);
  const auto jac = CheckJacobian(dmodel, rng);
  EXPECT_TRUE(jac.pass) << jac.value;
  for (const auto& r : CheckGradients(dmodel, rng)) {
    EXPECT_TRUE(r.pass) << r.name << " " << r.value;
  }
}

}  // namespace
}  // namespace flowvoc::flow
