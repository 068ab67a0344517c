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

#include "flowvoc/flow/model.h"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace flowvoc::flow {

namespace {

std::string Name(int flow, const std::string& rest) {
  return "flow." + std::to_string(flow) + "." + rest;
}

template <typename T>
Parameter<T> Make(std::string name, std::vector<size_t> shape) {
  return Parameter<T>(std::move(name), Tensor<T>(std::move(shape)));
}

template <typename T>
WaveNetParams<T> BuildWaveNet(const FlowConfig& cfg, int flow, int channels) {
  WaveNetParams<T> wn;
  wn.in_channels = (channels + 1) / 2;
  wn.out_channels = channels / 2;
  wn.hidden = cfg.wn_channels;
  wn.layers = cfg.wn_layers;
  wn.kernel = cfg.wn_kernel;
  const auto h = static_cast<size_t>(wn.hidden);
  const auto m = static_cast<size_t>(cfg.n_mel_channels);
  wn.start_w = Make<T>(Name(flow, "wn.start.weight"),
                       {h, static_cast<size_t>(wn.in_channels)});
  wn.start_b = Make<T>(Name(flow, "wn.start.bias"), {h});
  for (int i = 0; i < wn.layers; ++i) {
    const std::string li = std::to_string(i);
    wn.cond_w.push_back(Make<T>(Name(flow, "wn.cond." + li + ".weight"),
                                {2 * h, m}));
    wn.cond_b.push_back(Make<T>(Name(flow, "wn.cond." + li + ".bias"), {2 * h}));
    wn.in_w.push_back(Make<T>(Name(flow, "wn.in." + li + ".weight"),
                              {2 * h, h, static_cast<size_t>(wn.kernel)}));
    wn.in_b.push_back(Make<T>(Name(flow, "wn.in." + li + ".bias"), {2 * h}));
    const size_t rs_out = i + 1 < wn.layers ? 2 * h : h;
    wn.res_skip_w.push_back(
        Make<T>(Name(flow, "wn.res_skip." + li + ".weight"), {rs_out, h}));
    wn.res_skip_b.push_back(
        Make<T>(Name(flow, "wn.res_skip." + li + ".bias"), {rs_out}));
  }
  const auto out2 = static_cast<size_t>(2 * wn.out_channels);
  wn.end_w = Make<T>(Name(flow, "wn.end.weight"), {out2, h});
  wn.end_b = Make<T>(Name(flow, "wn.end.bias"), {out2});
  return wn;
}

template <typename T>
void FillUniform(Tensor<T>& t, Rng& rng, double bound) {
  for (size_t i = 0; i < t.size(); ++i) {
    t[i] = static_cast<T>((2.0 * UniformUnit(rng) - 1.0) * bound);
  }
}

}  // namespace

std::vector<double> RandomOrthogonal(int n, Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) g(r, c) = StandardNormal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  std::vector<double> out(static_cast<size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) out[static_cast<size_t>(r) * n + c] = q(r, c);
  }
  return out;
}

template <typename T>
FlowModel<T> BuildFlowModel(const FlowConfig& config) {
  config.Validate();
  FlowModel<T> model;
  model.config = config;
  const std::vector<int> live = config.LiveChannels();
  for (int k = 0; k < config.n_flows; ++k) {
    const auto c = static_cast<size_t>(live[k]);
    Parameter<T> w = Make<T>(Name(k, "invconv.weight"), {c, c});
    for (size_t i = 0; i < c; ++i) w.value.at(i, i) = T{1};
    model.inv_convs.push_back(std::move(w));
    model.couplings.push_back(BuildWaveNet<T>(config, k, live[k]));
  }
  return model;
}

template <typename T>
void RandomizeCouplings(FlowModel<T>& model, Rng& rng, double scale) {
  for (auto& wn : model.couplings) {
    wn.ForEach([&](Parameter<T>& p) { FillUniform(p.value, rng, scale); });
  }
}

template <typename T>
FlowModel<T> InitFlowModel(const FlowConfig& config, Rng& rng) {
  FlowModel<T> model = BuildFlowModel<T>(config);
  for (auto& w : model.inv_convs) {
    const int c = static_cast<int>(w.value.dim(0));
    const std::vector<double> q = RandomOrthogonal(c, rng);
    for (size_t i = 0; i < q.size(); ++i) w.value[i] = static_cast<T>(q[i]);
  }
  for (auto& wn : model.couplings) {
    const double bound_start = 1.0 / std::sqrt(std::max(1, wn.in_channels));
    FillUniform(wn.start_w.value, rng, bound_start);
    FillUniform(wn.start_b.value, rng, bound_start);
    const double bound_cond = 1.0 / std::sqrt(model.config.n_mel_channels);
    const double bound_in = 1.0 / std::sqrt(wn.hidden * wn.kernel);
    const double bound_rs = 1.0 / std::sqrt(wn.hidden);
    for (int i = 0; i < wn.layers; ++i) {
      FillUniform(wn.cond_w[i].value, rng, bound_cond);
      FillUniform(wn.cond_b[i].value, rng, bound_cond);
      FillUniform(wn.in_w[i].value, rng, bound_in);
      FillUniform(wn.in_b[i].value, rng, bound_in);
      FillUniform(wn.res_skip_w[i].value, rng, bound_rs);
      FillUniform(wn.res_skip_b[i].value, rng, bound_rs);
    }
  }
  return model;
}

template FlowModel<float> BuildFlowModel<float>(const FlowConfig&);
template FlowModel<double> BuildFlowModel<double>(const FlowConfig&);
template FlowModel<float> InitFlowModel<float>(const FlowConfig&, Rng&);
template FlowModel<double> InitFlowModel<double>(const FlowConfig&, Rng&);
template void RandomizeCouplings<float>(FlowModel<float>&, Rng&, double);
template void RandomizeCouplings<double>(FlowModel<double>&, Rng&, double);

}  // namespace flowvoc::flow
