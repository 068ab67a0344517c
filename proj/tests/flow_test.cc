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

#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>
#include <functional>
#include <vector>

#include "Eigen/Dense"
#include "flowvoc/dsp/mel.h"
#include "flowvoc/error.h"
#include "flowvoc/flow/config.h"
#include "flowvoc/flow/flow.h"
#include "flowvoc/flow/model.h"
#include "flowvoc/flow/wavenet.h"
#include "flowvoc/random.h"
#include "gtest/gtest.h"
#include "support/oracles.h"
#include "support/test_util.h"

namespace flowvoc::flow {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoFailure;
}

template <typename T>
std::vector<T> RandomSamples(size_t n, Rng& rng, double scale = 0.5) {
  std::vector<T> out(n);
  for (auto& v : out) v = static_cast<T>(scale * StandardNormal(rng));
  return out;
}

template <typename T>
Tensor<T> RandomMatrix(size_t rows, size_t cols, Rng& rng, double scale = 1.0) {
  Tensor<T> t({rows, cols});
  for (auto& v : t.values()) v = static_cast<T>(scale * StandardNormal(rng));
  return t;
}

// Identity plus small Gaussian noise: well conditioned, non-orthogonal.
template <typename T>
Tensor<T> NearIdentity(size_t n, Rng& rng, double noise = 0.3) {
  Tensor<T> w = RandomMatrix<T>(n, n, rng, noise);
  for (size_t i = 0; i < n; ++i) w.at(i, i) += T{1};
  return w;
}

dsp::MelSpectrogram ConstantMel(int n_mels, int n_frames, float value,
                                int hop = 256) {
  dsp::MelSpectrogram mel;
  mel.n_mels = n_mels;
  mel.n_frames = n_frames;
  mel.hop_length = hop;
  mel.sample_rate = 22050;
  mel.values.assign(static_cast<size_t>(n_mels) * n_frames, value);
  return mel;
}

dsp::MelSpectrogram RandomMel(int n_mels, int n_frames, Rng& rng, int hop = 256) {
  dsp::MelSpectrogram mel = ConstantMel(n_mels, n_frames, 0.0f, hop);
  for (auto& v : mel.values) v = static_cast<float>(StandardNormal(rng));
  return mel;
}

FlowConfig SmallConfig(int group, int flows) {
  FlowConfig cfg;
  cfg.n_mel_channels = 4;
  cfg.n_flows = flows;
  cfg.group_size = group;
  cfg.early_every = 4;
  cfg.early_size = group == 8 ? 2 : 1;
  cfg.wn_layers = 2;
  cfg.wn_channels = 8;
  return cfg;
}

// Random W's and couplings: nothing in the model is an identity.
template <typename T>
FlowModel<T> RandomModel(const FlowConfig& cfg, Rng& rng, double scale = 0.1) {
  FlowModel<T> model = InitFlowModel<T>(cfg, rng);
  RandomizeCouplings(model, rng, scale);
  for (auto& w : model.inv_convs) {
    w.value = NearIdentity<T>(w.value.dim(0), rng, 0.2);
  }
  return model;
}

TEST(SqueezeTest, LayoutAndShape) {
  std::vector<float> x(16);
  std::iota(x.begin(), x.end(), 1.0f);
  const auto t = Squeeze<float>(x, 8);
  ASSERT_EQ(t.shape(), (std::vector<size_t>{8, 2}));
  for (size_t c = 0; c < 8; ++c) {
    EXPECT_EQ(t.at(c, 0), static_cast<float>(c + 1));
    EXPECT_EQ(t.at(c, 1), static_cast<float>(c + 9));
  }
  const std::vector<float> seg(16000, 0.0f);
  EXPECT_EQ(Squeeze<float>(seg, 8).shape(), (std::vector<size_t>{8, 2000}));
  EXPECT_EQ(Unsqueeze(Squeeze<float>(seg, 8)).size(), 16000u);
}

TEST(SqueezeTest, InversePair) {
  Rng rng(1);
  const auto x = RandomSamples<float>(800, rng);
  EXPECT_EQ(Unsqueeze(Squeeze<float>(x, 8)), x);
  const auto t = RandomMatrix<float>(4, 33, rng);
  EXPECT_EQ(Squeeze<float>(Unsqueeze(t), 4), t);
  const Tensor<float> single({2, 1}, std::vector<float>{3.0f, 7.0f});
  EXPECT_EQ(Unsqueeze(single), (std::vector<float>{3.0f, 7.0f}));
}

TEST(SqueezeTest, RejectsIndivisibleLength) {
  const std::vector<float> x(15, 0.0f);
  EXPECT_EQ(CodeOf([&] { Squeeze<float>(x, 8); }), ErrorCode::kNotDivisible);
  EXPECT_EQ(CodeOf([&] { Squeeze<float>(std::span<const float>(), 8); }),
            ErrorCode::kNotDivisible);
}

TEST(UpsampleTest, RepeatsEachFrame32Times) {
  Rng rng(2);
  const auto mel = RandomMel(3, 10, rng);
  const auto cond = UpsampleCondition<float>(mel, 300, 8);
  ASSERT_EQ(cond.shape(), (std::vector<size_t>{3, 300}));
  for (size_t c = 0; c < 3; ++c) {
    for (size_t t = 0; t < 300; ++t) {
      ASSERT_EQ(cond.at(c, t), mel.at(static_cast<int>(c), static_cast<int>(t / 32)));
    }
  }
  const auto flat = UpsampleCondition<float>(ConstantMel(80, 63, -2.5f), 2000, 8);
  for (float v : flat.values()) ASSERT_EQ(v, -2.5f);
}

TEST(UpsampleTest, WidthExactForAllSegmentLengths) {
  const dsp::StftConfig stft;
  for (int n = 8; n <= 16000; n += 8) {
    const auto mel = ConstantMel(2, stft.NumFrames(static_cast<size_t>(n)), 1.0f);
    ASSERT_EQ(UpsampleCondition<float>(mel, n / 8, 8).dim(1),
              static_cast<size_t>(n / 8))
        << n;
  }
}

TEST(UpsampleTest, Errors) {
  EXPECT_EQ(CodeOf([] { UpsampleCondition<float>(ConstantMel(2, 2, 0.0f), 65, 8); }),
            ErrorCode::kMelTooShort);
  EXPECT_EQ(CodeOf([] { UpsampleCondition<float>(ConstantMel(2, 9, 0.0f), 10, 3); }),
            ErrorCode::kConfigInvalid);
}

TEST(InvConvTest, IdentityAndDiagonal) {
  Rng rng(3);
  const auto x = RandomMatrix<float>(8, 10, rng);
  Tensor<float> eye({8, 8});
  for (size_t i = 0; i < 8; ++i) eye.at(i, i) = 1.0f;
  const auto id = InvConvForward(x, eye);
  EXPECT_EQ(id.y, x);
  EXPECT_EQ(id.log_det_term, 0.0);
  EXPECT_EQ(InvConvInverse(x, eye), x);

  Tensor<float> two({8, 8});
  for (size_t i = 0; i < 8; ++i) two.at(i, i) = 2.0f;
  const auto d = InvConvForward(x, two);
  EXPECT_NEAR(d.log_det_term, 80.0 * std::numbers::ln2, 1e-9);
  EXPECT_NEAR(d.log_det_term, 55.452, 5e-4);
  EXPECT_EQ(InvConvInverse(d.y, two), x);
}

TEST(InvConvTest, LogDetMatchesLuOracle) {
  Rng rng(4);
  for (int n : {2, 3, 6, 8}) {
    const auto q = RandomOrthogonal(n, rng);
    const Tensor<double> orth({size_t(n), size_t(n)}, q);
    EXPECT_NEAR(LogAbsDet(orth), 0.0, 1e-9);
    const auto w = RandomMatrix<double>(n, n, rng);
    const double expected = testing::LuLogAbsDet(
        std::vector<double>(w.values().begin(), w.values().end()), n);
    const auto r = InvConvForward(RandomMatrix<double>(n, 7, rng), w);
    EXPECT_NEAR(r.log_det_term, 7.0 * expected, 1e-6 * std::abs(7.0 * expected));
  }
}

TEST(InvConvTest, OrthogonalInitHasUnitDeterminant) {
  Rng rng(5);
  for (int n : {1, 2, 4, 8}) {
    const auto q = RandomOrthogonal(n, rng);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = q[i * n + j];
    }
    EXPECT_NEAR(m.determinant(), 1.0, 1e-9);
    EXPECT_LT((m * m.transpose() - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-9);
  }
}

TEST(InvConvTest, RoundTripAndSingular) {
  Rng rng(6);
  const auto w = NearIdentity<float>(8, rng);
  const auto x = RandomMatrix<float>(8, 500, rng);
  const auto back = InvConvInverse(InvConvForward(x, w).y, w);
  for (size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(back[i], x[i], 1e-5);
  Tensor<float> singular({2, 2}, std::vector<float>{1, 2, 2, 4});
  EXPECT_EQ(CodeOf([&] { InvConvForward(RandomMatrix<float>(2, 3, rng), singular); }),
            ErrorCode::kSingularW);
  EXPECT_EQ(CodeOf([&] { InvConvInverse(RandomMatrix<float>(2, 3, rng), singular); }),
            ErrorCode::kSingularW);
}

WaveNetParams<double> CouplingParams(int channels, int n_mel, Rng& rng,
                                     double scale) {
  FlowConfig cfg = SmallConfig(channels, 1);
  cfg.n_mel_channels = n_mel;
  FlowModel<double> model = InitFlowModel<double>(cfg, rng);
  if (scale > 0) RandomizeCouplings(model, rng, scale);
  return model.couplings[0];
}

TEST(CouplingTest, ZeroEndLayerIsIdentity) {
  Rng rng(7);
  const auto params = CouplingParams(8, 4, rng, 0.0);
  const auto x = RandomMatrix<double>(8, 20, rng);
  const auto cond = RandomMatrix<double>(4, 20, rng);
  const auto r = CouplingForward(x, cond, params);
  EXPECT_EQ(r.y, x);
  EXPECT_EQ(r.sum_log_s, 0.0);
  EXPECT_EQ(CouplingInverse(x, cond, params), x);
}

TEST(CouplingTest, ConstantLogScaleCountsEntries) {
  Rng rng(8);
  auto params = CouplingParams(4, 4, rng, 0.0);
  const double c = 0.37;
  for (size_t i = 0; i < 2; ++i) params.end_b.value[i] = c;
  const auto x = RandomMatrix<double>(4, 10, rng);
  const auto r = CouplingForward(x, RandomMatrix<double>(4, 10, rng), params);
  EXPECT_NEAR(r.sum_log_s, 20.0 * c, 1e-12);
  for (size_t t = 0; t < 10; ++t) {
    EXPECT_EQ(r.y.at(0, t), x.at(0, t));
    EXPECT_NEAR(r.y.at(3, t), x.at(3, t) * std::exp(c), 1e-12);
  }
}

TEST(CouplingTest, OddChannelCountPassesCeilHalf) {
  Rng rng(9);
  const auto params = CouplingParams(5, 4, rng, 0.2);
  EXPECT_EQ(params.in_channels, 3);
  EXPECT_EQ(params.out_channels, 2);
  const auto x = RandomMatrix<double>(5, 6, rng);
  const auto r = CouplingForward(x, RandomMatrix<double>(4, 6, rng), params);
  for (size_t c = 0; c < 3; ++c) {
    for (size_t t = 0; t < 6; ++t) EXPECT_EQ(r.y.at(c, t), x.at(c, t));
  }
}

TEST(CouplingTest, RoundTripRandomParams) {
  Rng rng(10);
  FlowModel<float> model = InitFlowModel<float>(SmallConfig(8, 1), rng);
  RandomizeCouplings(model, rng, 0.2);
  const auto x = RandomMatrix<float>(8, 200, rng);
  const auto cond = RandomMatrix<float>(4, 200, rng);
  const auto fwd = CouplingForward(x, cond, model.couplings[0]);
  EXPECT_NE(fwd.sum_log_s, 0.0);
  const auto back = CouplingInverse(fwd.y, cond, model.couplings[0]);
  for (size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(back[i], x[i], 1e-5);
}

TEST(CouplingTest, NanLogScaleRejected) {
  Rng rng(11);
  auto params = CouplingParams(4, 4, rng, 0.0);
  params.end_b.value[0] = std::nan("");
  EXPECT_EQ(CodeOf([&] {
              CouplingInverse(RandomMatrix<double>(4, 3, rng),
                              RandomMatrix<double>(4, 3, rng), params);
            }),
            ErrorCode::kNonFiniteScale);
}

// d/dtheta [sum(y) + sum_log_s] through the network's explicit backward.
TEST(CouplingTest, GradientMatchesFiniteDifferences) {
  Rng rng(12);
  auto params = CouplingParams(4, 3, rng, 0.3);
  const auto x = RandomMatrix<double>(4, 9, rng);
  const auto cond = RandomMatrix<double>(3, 9, rng);
  const auto objective = [&] {
    const auto r = CouplingForward(x, cond, params);
    double s = r.sum_log_s;
    for (double v : r.y.values()) s += v;
    return s;
  };
  WaveNetCache<double> cache;
  const auto x_a = numerics::SliceRows(x, 0, 2);
  const auto x_b = numerics::SliceRows(x, 2, 4);
  const auto out = WaveNetForward(params, x_a, cond, &cache);
  Tensor<double> g_log_s(out.log_s.shape());
  for (size_t i = 0; i < g_log_s.size(); ++i) {
    g_log_s[i] = x_b[i] * std::exp(out.log_s[i]) + 1.0;
  }
  params.ForEach([](Parameter<double>& p) { p.ZeroGrad(); });
  WaveNetBackward(params, cache, g_log_s, Tensor<double>(out.shift.shape(), 1.0));

  double worst = 0.0;
  params.ForEach([&](Parameter<double>& p) {
    for (size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      const double eps = 1e-6;
      p.value[i] = saved + eps;
      const double up = objective();
      p.value[i] = saved - eps;
      const double down = objective();
      p.value[i] = saved;
      const double numeric = (up - down) / (2 * eps);
      const double err = std::abs(numeric - p.grad[i]) /
                         std::max({std::abs(numeric), std::abs(p.grad[i]), 1e-6});
      worst = std::max(worst, err);
    }
  });
  EXPECT_LE(worst, 1e-4);
}

TEST(FlowTest, DefaultChannelSchedule) {
  const FlowConfig cfg;
  EXPECT_EQ(cfg.LiveChannels(),
            (std::vector<int>{8, 8, 8, 8, 6, 6, 6, 6, 4, 4, 4, 4}));
  EXPECT_EQ(cfg.FinalChannels(), 4);
  int emitted = 0;
  for (int k = 0; k < cfg.n_flows; ++k) emitted += cfg.EmitsAfter(k) ? 2 : 0;
  EXPECT_EQ(emitted + cfg.FinalChannels(), 8);
  EXPECT_FALSE(cfg.EmitsAfter(11));
  EXPECT_TRUE(cfg.EmitsAfter(3));
  EXPECT_TRUE(cfg.EmitsAfter(7));
}

TEST(FlowTest, ConfigValidation) {
  FlowConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.early_size = 4;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = FlowConfig{};
  cfg.wn_kernel = 2;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = FlowConfig{};
  cfg.upsampler = "transposed";
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(FlowTest, IdentityModelEmitsSqueezedInput) {
  const FlowConfig cfg = SmallConfig(8, 12);
  const FlowModel<float> model = BuildFlowModel<float>(cfg);
  Rng rng(13);
  const auto x = RandomSamples<float>(800, rng);
  const auto r = FlowForward<float>(x, RandomMatrix<float>(4, 100, rng), model);
  EXPECT_EQ(r.z, Squeeze<float>(x, 8));
  EXPECT_EQ(r.sum_log_s, 0.0);
  EXPECT_EQ(r.sum_log_det_w, 0.0);
  EXPECT_EQ(FlowInverse(r.z, RandomMatrix<float>(4, 100, rng), model), x);
  const Tensor<float> zero({8, 100});
  for (float v : FlowInverse(zero, RandomMatrix<float>(4, 100, rng), model)) {
    ASSERT_EQ(v, 0.0f);
  }
}

TEST(FlowTest, LatentSizeEqualsInputSize) {
  Rng rng(14);
  for (int group : {4, 8}) {
    for (int flows : {1, 2, 4, 5, 12}) {
      const FlowConfig cfg = SmallConfig(group, flows);
      const auto model = RandomModel<float>(cfg, rng);
      const auto x = RandomSamples<float>(group * 16, rng);
      const auto r = FlowForward<float>(x, RandomMatrix<float>(4, 16, rng), model);
      EXPECT_EQ(r.z.size(), x.size()) << group << "/" << flows;
    }
  }
}

TEST(FlowTest, InverseUndoesForward) {
  Rng rng(15);
  for (int group : {4, 8}) {
    for (int flows : {2, 4, 12}) {
      const FlowConfig cfg = SmallConfig(group, flows);
      const auto model = RandomModel<float>(cfg, rng);
      const auto mel = RandomMel(4, 9, rng);
      const auto x = RandomSamples<float>(2048, rng);
      const auto r = FlowForward<float>(x, mel, model);
      const auto back = FlowInverse(r.z, mel, model);
      double err = 0.0;
      for (size_t i = 0; i < x.size(); ++i) {
        err = std::max(err, double{std::abs(back[i] - x[i])});
      }
      EXPECT_LE(err, 1e-4) << group << "/" << flows;
    }
  }
}

struct TinyJacobianCase {
  FlowModel<double> model;
  Tensor<double> cond;
  std::vector<double> x;
};

// Group 4, 2 flows, 4 frames: a 16-dimensional bijection.
TinyJacobianCase MakeTinyJacobianCase(uint64_t seed) {
  Rng rng(seed);
  FlowConfig cfg = SmallConfig(4, 2);
  TinyJacobianCase c{RandomModel<double>(cfg, rng, 0.3),
                     RandomMatrix<double>(4, 4, rng),
                     RandomSamples<double>(16, rng)};
  return c;
}

double NumericLogDet(const TinyJacobianCase& c) {
  return testing::NumericalLogAbsDetJacobian(
      [&](const std::vector<double>& v) {
        const auto z = FlowForward<double>(v, c.cond, c.model).z;
        return std::vector<double>(z.values().begin(), z.values().end());
      },
      c.x, 1e-5);
}

TEST(FlowTest, LogDetTermsMatchNumericalJacobian) {
  for (uint64_t seed : {1, 2, 3, 4}) {
    const auto c = MakeTinyJacobianCase(seed);
    const auto r = FlowForward<double>(c.x, c.cond, c.model);
    const double analytic = r.sum_log_s + r.sum_log_det_w;
    const double numeric = NumericLogDet(c);
    ASSERT_GT(std::abs(numeric), 0.1);
    EXPECT_LE(std::abs(analytic - numeric) / std::abs(numeric), 1e-3)
        << analytic << " vs " << numeric;
  }
}

TEST(NllTest, SimpleValues) {
  ForwardResult<double> zero{Tensor<double>({8, 1}), 0.0, 0.0};
  EXPECT_EQ(NegativeLogLikelihood(zero, 1.0).total, 0.0);
  ForwardResult<double> ones{Tensor<double>({8, 1}, 1.0), 0.0, 0.0};
  const auto l = NegativeLogLikelihood(ones, 1.0);
  EXPECT_EQ(l.z_term, 4.0);
  EXPECT_EQ(l.total, 0.5);
  ForwardResult<double> terms{Tensor<double>({2, 1}, 2.0), 1.5, 0.5};
  const auto t = NegativeLogLikelihood(terms, 2.0);
  EXPECT_DOUBLE_EQ(t.z_term, 1.0);
  EXPECT_DOUBLE_EQ(t.total, (1.0 - 1.5 - 0.5) / 2.0);
}

TEST(NllTest, Errors) {
  ForwardResult<double> fr{Tensor<double>({2, 1}, 1.0), 0.0, 0.0};
  EXPECT_EQ(CodeOf([&] { NegativeLogLikelihood(fr, 0.0); }),
            ErrorCode::kConfigInvalid);
  fr.sum_log_s = INFINITY;
  EXPECT_EQ(CodeOf([&] { NegativeLogLikelihood(fr, 1.0); }), ErrorCode::kNonFinite);
}

TEST(NllTest, SigmaMonotone) {
  Rng rng(16);
  ForwardResult<double> fr{RandomMatrix<double>(8, 10, rng), 0.3, -0.2};
  double prev = INFINITY;
  for (double sigma = 0.1; sigma < 5.0; sigma *= 1.3) {
    const double z = NegativeLogLikelihood(fr, sigma).z_term;
    EXPECT_LT(z, prev);
    prev = z;
  }
}

TEST(NllTest, LogLikelihoodMatchesDirectEvaluation) {
  const auto c = MakeTinyJacobianCase(7);
  const double sigma = 0.8;
  const auto r = FlowForward<double>(c.x, c.cond, c.model);
  const double n = static_cast<double>(r.z.size());
  const double total = NegativeLogLikelihood(r, sigma).total;
  const double reconstructed =
      -(total * n) - 0.5 * n * std::log(2 * std::numbers::pi * sigma * sigma);
  double log_pz = 0.0;
  for (double v : r.z.values()) {
    log_pz += -0.5 * v * v / (sigma * sigma) -
              0.5 * std::log(2 * std::numbers::pi * sigma * sigma);
  }
  const double direct = log_pz + NumericLogDet(c);
  EXPECT_NEAR(reconstructed, direct, 1e-3 * std::max(1.0, std::abs(direct)));
}

TEST(NllTest, OrthogonalInitGivesPureGaussianTerm) {
  Rng rng(17);
  const FlowConfig cfg = SmallConfig(8, 4);
  const auto model = InitFlowModel<double>(cfg, rng);
  const auto x = RandomSamples<double>(640, rng);
  const auto r = FlowForward<double>(x, RandomMatrix<double>(4, 80, rng), model);
  EXPECT_EQ(r.sum_log_s, 0.0);
  EXPECT_NEAR(r.sum_log_det_w, 0.0, 1e-9);
  double sq = 0.0;
  for (double v : x) sq += v * v;
  EXPECT_NEAR(NegativeLogLikelihood(r, 1.0).total, sq / 2.0 / 640.0, 1e-9);
}

TEST(LatentTest, MomentsAndReproducibility) {
  Rng rng(18);
  const double sigma = 0.7;
  const auto z = SampleLatent<double>(1000000, sigma, rng);
  double mean = 0.0, sq = 0.0;
  for (double v : z.values()) mean += v;
  mean /= z.size();
  for (double v : z.values()) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / z.size());
  EXPECT_LT(std::abs(mean), 4 * sigma / 1000);
  EXPECT_LT(std::abs(sd - sigma), 0.01 * sigma);

  Rng a(5), b(5);
  EXPECT_EQ(SampleLatent<float>(100, 1.0, a), SampleLatent<float>(100, 1.0, b));
  EXPECT_EQ(CodeOf([&] { SampleLatent<float>(4, 0.0, a); }),
            ErrorCode::kConfigInvalid);
}

FlowConfig NarrowDefaultConfig() {
  FlowConfig cfg;
  cfg.wn_channels = 16;
  cfg.wn_layers = 2;
  return cfg;
}

TEST(InferTest, ShapeFromMelAndTargetLength) {
  Rng rng(19);
  const auto model = InitFlowModel<float>(NarrowDefaultConfig(), rng);
  const auto mel = ComputeMelSpectrogram(testing::Noise(16000, 0.5, 3),
                                         dsp::StftConfig{}, dsp::MelConfig{});
  ASSERT_EQ(mel.n_mels, 80);
  ASSERT_EQ(mel.n_frames, 63);
  EXPECT_EQ(Infer(mel, model, 1.0, rng, 16000).samples.size(), 16000u);
  EXPECT_EQ(Infer(mel, model, 1.0, rng).samples.size(), 63u * 256u);
  EXPECT_EQ(CodeOf([&] { Infer(ConstantMel(40, 63, 0.0f), model, 1.0, rng); }),
            ErrorCode::kShapeMismatch);
}

TEST(InferTest, SameSeedIsBitIdentical) {
  Rng init(20);
  auto model = InitFlowModel<float>(SmallConfig(8, 4), init);
  RandomizeCouplings(model, init, 0.1);
  const auto mel = RandomMel(4, 20, init);
  Rng a(99), b(99), c(100);
  const auto first = Infer(mel, model, 0.9, a);
  EXPECT_EQ(first.samples, Infer(mel, model, 0.9, b).samples);
  EXPECT_NE(first.samples, Infer(mel, model, 0.9, c).samples);
}

TEST(InferTest, ConcurrentCallsShareOneModel) {
  Rng init(21);
  auto model = InitFlowModel<float>(SmallConfig(8, 4), init);
  RandomizeCouplings(model, init, 0.1);
  const auto mel = RandomMel(4, 20, init);
  Rng ref_rng(7);
  const auto expected = Infer(mel, model, 1.0, ref_rng).samples;
  std::vector<std::vector<float>> outputs(4);
  std::vector<std::thread> threads;
  for (auto& out : outputs) {
    threads.emplace_back([&] {
      Rng rng(7);
      out = Infer(mel, model, 1.0, rng).samples;
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& out : outputs) EXPECT_EQ(out, expected);
}

}  // namespace
}  // namespace flowvoc::flow
