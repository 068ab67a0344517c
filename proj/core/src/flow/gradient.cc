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

#include "flowvoc/flow/gradient.h"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "flowvoc/flow/wavenet.h"

namespace flowvoc::flow {

using numerics::ConcatRows;
using numerics::SliceRows;

template <typename T>
LossBreakdown AccumulateLossGradient(FlowModel<T>& model,
                                     std::span<const T> segment,
                                     const Tensor<T>& cond, double sigma,
                                     double scale) {
  const FlowConfig& cfg = model.config;

  // Forward, keeping each flow's input (before the 1x1 convolution).
  std::vector<Tensor<T>> flow_inputs;
  flow_inputs.reserve(cfg.n_flows);
  ForwardResult<T> fwd;
  {
    Tensor<T> live = Squeeze(segment, cfg.group_size);
    std::vector<Tensor<T>> emitted;
    for (int k = 0; k < cfg.n_flows; ++k) {
      flow_inputs.push_back(live);
      InvConvResult<T> conv = InvConvForward(live, model.inv_convs[k].value);
      fwd.sum_log_det_w += conv.log_det_term;
      CouplingResult<T> coupled =
          CouplingForward(conv.y, cond, model.couplings[k]);
      fwd.sum_log_s += coupled.sum_log_s;
      live = std::move(coupled.y);
      if (cfg.EmitsAfter(k)) {
        const auto e = static_cast<size_t>(cfg.early_size);
        emitted.push_back(SliceRows(live, 0, e));
        live = SliceRows(live, e, live.dim(0));
      }
    }
    Tensor<T> z = emitted.empty() ? live : emitted.front();
    for (size_t i = 1; i < emitted.size(); ++i) z = ConcatRows(z, emitted[i]);
    if (!emitted.empty()) z = ConcatRows(z, live);
    fwd.z = std::move(z);
  }
  const LossBreakdown loss = NegativeLogLikelihood(fwd, sigma);

  const double n = static_cast<double>(fwd.z.size());
  const size_t frames = fwd.z.dim(1);
  Tensor<T> grad_z(fwd.z.shape());
  const double z_coef = scale / (sigma * sigma * n);
  for (size_t i = 0; i < grad_z.size(); ++i) {
    grad_z[i] = static_cast<T>(z_coef * static_cast<double>(fwd.z[i]));
  }
  const T log_s_coef = static_cast<T>(scale / n);
  const double log_det_coef = scale * static_cast<double>(frames) / n;

  size_t cursor = grad_z.dim(0) - static_cast<size_t>(cfg.FinalChannels());
  Tensor<T> grad_live = SliceRows(grad_z, cursor, grad_z.dim(0));
  for (int k = cfg.n_flows - 1; k >= 0; --k) {
    if (cfg.EmitsAfter(k)) {
      const auto e = static_cast<size_t>(cfg.early_size);
      cursor -= e;
      grad_live = ConcatRows(SliceRows(grad_z, cursor, cursor + e), grad_live);
    }
    const Tensor<T>& x = flow_inputs[k];
    Parameter<T>& w = model.inv_convs[k];
    WaveNetParams<T>& wn = model.couplings[k];
    const Tensor<T> h = InvConvForward(x, w.value).y;

    // Coupling backward. grad_live is dL/dy for y = [h_a, h_b * e^s + b].
    const size_t ca = static_cast<size_t>(wn.in_channels);
    const size_t cb = static_cast<size_t>(wn.out_channels);
    Tensor<T> grad_h;
    if (cb == 0) {
      grad_h = grad_live;
    } else {
      const Tensor<T> h_a = SliceRows(h, 0, ca);
      const Tensor<T> h_b = SliceRows(h, ca, ca + cb);
      WaveNetCache<T> cache;
      const WaveNetOutput<T> out = WaveNetForward(wn, h_a, cond, &cache);
      const Tensor<T> g_a = SliceRows(grad_live, 0, ca);
      const Tensor<T> g_b = SliceRows(grad_live, ca, ca + cb);
      Tensor<T> grad_h_b(h_b.shape());
      Tensor<T> grad_log_s(h_b.shape());
      for (size_t i = 0; i < h_b.size(); ++i) {
        const T scale_i = std::exp(out.log_s[i]);
        grad_h_b[i] = g_b[i] * scale_i;
        grad_log_s[i] = g_b[i] * h_b[i] * scale_i - log_s_coef;
      }
      Tensor<T> grad_h_a = WaveNetBackward(wn, cache, grad_log_s, g_b);
      numerics::AddInPlace(grad_h_a, g_a);
      grad_h = ConcatRows(grad_h_a, grad_h_b);
    }

    // 1x1 convolution backward: h = W x per frame.
    const size_t c = x.dim(0);
    const Eigen::Index ci = static_cast<Eigen::Index>(c);
    Eigen::MatrixXd wm(ci, ci);
    for (size_t r = 0; r < c; ++r) {
      for (size_t q = 0; q < c; ++q) {
        wm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(q)) =
            w.value.at(r, q);
      }
    }
    const Eigen::MatrixXd w_inv_t =
        Eigen::PartialPivLU<Eigen::MatrixXd>(wm).inverse().transpose();
    Tensor<T> grad_x({c, frames});
    for (size_t r = 0; r < c; ++r) {
      const T* gr = grad_h.row(r);
      for (size_t q = 0; q < c; ++q) {
        const T* xq = x.row(q);
        double acc = 0.0;
        for (size_t t = 0; t < frames; ++t) {
          acc += static_cast<double>(gr[t]) * static_cast<double>(xq[t]);
        }
        acc -= log_det_coef * w_inv_t(static_cast<Eigen::Index>(r),
                                      static_cast<Eigen::Index>(q));
        w.grad.at(r, q) += static_cast<T>(acc);
        // dL/dx[q] = sum_r W[r, q] dL/dh[r]
        const T wrq = w.value.at(r, q);
        T* gx = grad_x.row(q);
        for (size_t t = 0; t < frames; ++t) gx[t] += wrq * gr[t];
      }
    }
    grad_live = std::move(grad_x);
  }
  return loss;
}

template LossBreakdown AccumulateLossGradient(FlowModel<float>&,
                                              std::span<const float>,
                                              const Tensor<float>&, double,
                                              double);
template LossBreakdown AccumulateLossGradient(FlowModel<double>&,
                                              std::span<const double>,
                                              const Tensor<double>&, double,
                                              double);

}  // namespace flowvoc::flow
