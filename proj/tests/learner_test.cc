// Copyright 2026 The tiltrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <type_traits>
#include <vector>

#include <gtest/gtest.h>

#include "tiltrl/actor_critic.h"
#include "tiltrl/checkpoint.h"
#include "tiltrl/environment.h"
#include "tiltrl/error.h"
#include "tiltrl/gae.h"
#include "tiltrl/gaussian.h"
#include "tiltrl/mlp.h"
#include "tiltrl/normalizer.h"
#include "tiltrl/ppo.h"
#include "tiltrl/random.h"
#include "tiltrl/trainer.h"

namespace tiltrl {
namespace {

constexpr double kLog2Pi = 1.8378770664093453;

// The actor cannot be handed privileged state.
static_assert(std::is_invocable_v<decltype(&ActorCritic::Policy),
                                  const ActorCritic&, ObservationBatch>);
static_assert(!std::is_invocable_v<decltype(&ActorCritic::Policy),
                                   const ActorCritic&, CriticBatch>);
static_assert(!std::is_invocable_v<decltype(&ActorCritic::Value),
                                   const ActorCritic&, ObservationBatch>);

Eigen::MatrixXd RandomMatrix(std::mt19937_64& rng, int rows, int cols,
                             double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = scale * StandardNormal(rng);
  }
  return m;
}

NetworkConfig TinyNetwork() {
  NetworkConfig c;
  c.actor_hidden = {8, 8};
  c.critic_hidden = {8, 8};
  return c;
}

// Brute-force double-sum definition of GAE.
std::vector<double> OracleGae(const std::vector<double>& r,
                              const std::vector<double>& v,
                              const std::vector<uint8_t>& done,
                              double bootstrap, double gamma, double lambda) {
  const int n = static_cast<int>(r.size());
  std::vector<double> delta(n);
  for (int t = 0; t < n; ++t) {
    const double next = t + 1 < n ? v[t + 1] : bootstrap;
    delta[t] = r[t] + gamma * next * (done[t] ? 0.0 : 1.0) - v[t];
  }
  std::vector<double> a(n, 0.0);
  for (int t = 0; t < n; ++t) {
    double weight = 1.0;
    for (int k = t; k < n; ++k) {
      a[t] += weight * delta[k];
      if (done[k]) break;
      weight *= gamma * lambda;
    }
  }
  return a;
}

TEST(MlpTest, ShapesAndParameterCount) {
  const Mlp m(33, {512, 256, 128}, 8);
  EXPECT_EQ(m.num_params(),
            33 * 512 + 512 + 512 * 256 + 256 + 256 * 128 + 128 + 128 * 8 + 8);
  EXPECT_EQ(m.sizes(), (std::vector<int>{33, 512, 256, 128, 8}));
}

TEST(MlpTest, OrthogonalInitialization) {
  const Mlp m(6, {16}, 3);
  std::vector<double> p(m.num_params());
  std::mt19937_64 rng(1);
  m.Initialize(rng, 2.0, 0.5, p.data());
  const Eigen::Map<const Eigen::MatrixXd> w0(p.data(), 16, 6);
  EXPECT_LT((w0.transpose() * w0 - 4.0 * Eigen::MatrixXd::Identity(6, 6)).norm(),
            1e-12);
  const Eigen::Map<const Eigen::MatrixXd> w1(p.data() + 16 * 6 + 16, 3, 16);
  EXPECT_LT((w1 * w1.transpose() - 0.25 * Eigen::MatrixXd::Identity(3, 3)).norm(),
            1e-12);
}

TEST(PolicyTest, ZeroFinalLayerGivesZeroMeans) {
  NetworkConfig c;
  c.actor_output_gain = 0.0;
  const ActorCritic net(c, 3);
  std::mt19937_64 rng(2);
  const PolicyOutput out = net.Policy({RandomMatrix(rng, 33, 10, 3.0)});
  EXPECT_EQ(out.means.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(out.log_std, Eigen::VectorXd::Zero(8));
}

TEST(PolicyTest, IdenticalRowsOut) {
  const ActorCritic net(NetworkConfig(), 3);
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd one = RandomMatrix(rng, 33, 1);
  const PolicyOutput out = net.Policy({one.replicate(1, 5)});
  // Columns may go through different GEMM kernel paths, so allow rounding.
  for (int j = 1; j < 5; ++j) {
    EXPECT_LT((out.means.col(j) - out.means.col(0)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PolicyTest, ActorIgnoresPrivilegedFields) {
  EnvConfig config;
  TiltEnv env(config, 0, 4);
  const ActorCritic net(TinyNetwork(), 5);
  env.Step(Action{0.2, 0, 0, 0, 1, -1, 0, 0});
  const Observation o = env.observation();
  CriticState c = env.BuildCriticState();
  const Eigen::Map<const Eigen::VectorXd> obs(o.values.data(), 33);
  const Eigen::MatrixXd before = net.Policy({obs}).means;
  const double value_before = net.Value({Eigen::Map<Eigen::VectorXd>(c.values.data(), 41)})[0];
  for (int k = CriticState::kRotorTorques; k < CriticState::kPreviousAction; ++k) {
    c.values[k] += 5.0;
  }
  EXPECT_EQ(net.Policy({obs}).means, before);
  EXPECT_NE(net.Value({Eigen::Map<Eigen::VectorXd>(c.values.data(), 41)})[0],
            value_before);
}

TEST(GaussianTest, LogProbOfMean) {
  Eigen::VectorXd log_std(8);
  log_std << 0.1, -0.2, 0.3, 0.0, -1.0, 0.5, 0.2, -0.3;
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd means = RandomMatrix(rng, 8, 4);
  const Eigen::VectorXd lp = GaussianLogProb(means, log_std, means);
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(lp[j], -log_std.sum() - 4.0 * kLog2Pi, 1e-12);
  }
}

TEST(GaussianTest, LogProbMatchesDensity) {
  Eigen::VectorXd log_std = Eigen::VectorXd::Constant(8, std::log(0.7));
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(8, 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(8, 1, 0.3);
  double want = 0.0;
  for (int i = 0; i < 8; ++i) {
    want += std::log(std::exp(-0.5 * 0.09 / 0.49) / (0.7 * std::sqrt(2 * kPi)));
  }
  EXPECT_NEAR(GaussianLogProb(mean, log_std, a)[0], want, 1e-12);
}

TEST(GaussianTest, EntropyClosedForm) {
  std::mt19937_64 rng(4);
  for (int n = 0; n < 100; ++n) {
    const Eigen::VectorXd log_std = RandomMatrix(rng, 8, 1);
    double want = 0.0;
    for (int i = 0; i < 8; ++i) {
      want += log_std[i] + 0.5 * std::log(2 * kPi * std::exp(1.0));
    }
    EXPECT_NEAR(GaussianEntropy(log_std), want, 1e-9);
  }
}

TEST(GaussianTest, KlZeroForEqualAndPositive) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd m = RandomMatrix(rng, 8, 6);
  const Eigen::VectorXd s = RandomMatrix(rng, 8, 1, 0.3);
  EXPECT_LT(GaussianKl(m, s, m, s).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::VectorXd kl =
      GaussianKl(m, s, m + RandomMatrix(rng, 8, 6, 0.1), s.array() + 0.05);
  EXPECT_GT(kl.minCoeff(), 0.0);
}

TEST(GaussianTest, SampleMoments) {
  std::mt19937_64 rng(6);
  Eigen::VectorXd log_std = Eigen::VectorXd::Constant(8, std::log(0.5));
  const Eigen::MatrixXd means = Eigen::MatrixXd::Constant(8, 200000, 1.0);
  const Eigen::MatrixXd x = GaussianSample(means, log_std, rng);
  const Eigen::VectorXd mean = x.rowwise().mean();
  const Eigen::VectorXd var =
      (x.colwise() - mean).array().square().rowwise().mean();
  for (int i = 0; i < 8; ++i) {
    EXPECT_NEAR(mean[i], 1.0, 0.005);
    EXPECT_NEAR(var[i], 0.25, 0.005);
  }
}

TEST(GaeTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 1000; ++n) {
    const int len = 1 + static_cast<int>(UniformIndex(rng, 8));
    std::vector<double> r(len), v(len);
    std::vector<uint8_t> done(len);
    for (int t = 0; t < len; ++t) {
      r[t] = StandardNormal(rng);
      v[t] = StandardNormal(rng);
      done[t] = Uniform01(rng) < 0.25;
    }
    const double bootstrap = StandardNormal(rng);
    const double gamma = UniformRange(rng, 0.5, 1.0);
    const double lambda = UniformRange(rng, 0.0, 1.0);
    std::vector<double> adv, ret;
    ComputeGae(r, v, done, bootstrap, gamma, lambda, &adv, &ret);
    const std::vector<double> want = OracleGae(r, v, done, bootstrap, gamma, lambda);
    for (int t = 0; t < len; ++t) {
      ASSERT_NEAR(adv[t], want[t], 1e-10);
      ASSERT_NEAR(ret[t], want[t] + v[t], 1e-10);
    }
  }
}

TEST(GaeTest, LambdaZeroIsTdError) {
  const std::vector<double> r{1, 2, 3};
  const std::vector<double> v{0.5, -0.5, 0.25};
  std::vector<double> adv, ret;
  ComputeGae(r, v, {0, 0, 0}, 2.0, 0.9, 0.0, &adv, &ret);
  EXPECT_DOUBLE_EQ(adv[0], 1 + 0.9 * -0.5 - 0.5);
  EXPECT_DOUBLE_EQ(adv[1], 2 + 0.9 * 0.25 + 0.5);
  EXPECT_DOUBLE_EQ(adv[2], 3 + 0.9 * 2.0 - 0.25);
}

TEST(GaeTest, LambdaOneIsDiscountedReturn) {
  std::mt19937_64 rng(8);
  std::vector<double> r(8), v(8);
  for (int t = 0; t < 8; ++t) {
    r[t] = StandardNormal(rng);
    v[t] = StandardNormal(rng);
  }
  const double gamma = 0.97;
  const double bootstrap = 1.3;
  std::vector<double> adv, ret;
  ComputeGae(r, v, std::vector<uint8_t>(8, 0), bootstrap, gamma, 1.0, &adv, &ret);
  for (int t = 0; t < 8; ++t) {
    double want = -v[t];
    for (int k = t; k < 8; ++k) want += std::pow(gamma, k - t) * r[k];
    want += std::pow(gamma, 8 - t) * bootstrap;
    EXPECT_NEAR(adv[t], want, 1e-12);
  }
}

TEST(GaeTest, TerminationMasksFuture) {
  std::vector<double> r{1, 2, 3, 4};
  std::vector<double> v{0.1, 0.2, 0.3, 0.4};
  const std::vector<uint8_t> done{0, 1, 0, 0};
  std::vector<double> a1, a2, ret;
  ComputeGae(r, v, done, 5.0, 0.99, 0.95, &a1, &ret);
  r[2] = -100;
  r[3] = 50;
  v[2] = 7;
  ComputeGae(r, v, done, -3.0, 0.99, 0.95, &a2, &ret);
  EXPECT_EQ(a1[1], a2[1]);
  EXPECT_EQ(a1[1], 2 - 0.2);
}

TEST(GaeTest, BatchedMatchesSequences) {
  std::mt19937_64 rng(9);
  const int steps = 6;
  const int envs = 5;
  const Eigen::MatrixXd r = RandomMatrix(rng, steps, envs);
  const Eigen::MatrixXd v = RandomMatrix(rng, steps, envs);
  Eigen::MatrixXd d(steps, envs);
  for (int i = 0; i < steps * envs; ++i) d.data()[i] = Uniform01(rng) < 0.2;
  const Eigen::VectorXd boot = RandomMatrix(rng, envs, 1);
  Eigen::MatrixXd adv, ret;
  ComputeGae(r, v, d, boot, 0.99, 0.95, &adv, &ret);
  for (int i = 0; i < envs; ++i) {
    std::vector<double> rs(steps), vs(steps), a, rt;
    std::vector<uint8_t> ds(steps);
    for (int t = 0; t < steps; ++t) {
      rs[t] = r(t, i);
      vs[t] = v(t, i);
      ds[t] = d(t, i) != 0.0;
    }
    ComputeGae(rs, vs, ds, boot[i], 0.99, 0.95, &a, &rt);
    for (int t = 0; t < steps; ++t) {
      EXPECT_NEAR(adv(t, i), a[t], 1e-12);
      EXPECT_NEAR(ret(t, i), rt[t], 1e-12);
    }
  }
}

TEST(GaeTest, AdvantageNormalization) {
  std::mt19937_64 rng(10);
  for (int n = 0; n < 100; ++n) {
    Eigen::VectorXd a = RandomMatrix(rng, 3072, 1, UniformRange(rng, 0.1, 100));
    a.array() += UniformRange(rng, -50, 50);
    NormalizeAdvantages(a);
    EXPECT_LT(std::abs(a.mean()), 1e-7);
    EXPECT_NEAR(a.squaredNorm() / a.size(), 1.0, 1e-6);
  }
}

TEST(NormalizerTest, MatchesBatchStatistics) {
  std::mt19937_64 rng(11);
  RunningNormalizer norm(3);
  Eigen::MatrixXd all(3, 0);
  for (int k = 0; k < 5; ++k) {
    Eigen::MatrixXd b = RandomMatrix(rng, 3, 10 + k, 2.0);
    b.array() += 1.5;
    norm.Update(b);
    Eigen::MatrixXd joined(3, all.cols() + b.cols());
    joined << all, b;
    all = joined;
  }
  const Eigen::VectorXd mean = all.rowwise().mean();
  const Eigen::VectorXd var =
      (all.colwise() - mean).array().square().rowwise().mean();
  EXPECT_LT((norm.mean() - mean).norm(), 1e-12);
  EXPECT_LT((norm.variance() - var).norm(), 1e-12);
  EXPECT_EQ(norm.count(), all.cols());
}

TEST(GradClipTest, PostClipNormBounded) {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 1000; ++n) {
    Eigen::VectorXd g = RandomMatrix(rng, 50, 1, std::exp(UniformRange(rng, -5, 5)));
    const Eigen::VectorXd before = g;
    ClipGradNorm(&g, 1.0);
    EXPECT_LE(g.norm(), 1.0 + 1e-9);
    if (before.norm() <= 1.0) {
      EXPECT_EQ(g, before);
    }
  }
}

TEST(ClippedSurrogateTest, BranchSelection) {
  // (rho, A) -> expected contribution.
  struct Case {
    double rho, a, want;
  };
  const Case cases[] = {
      {1.5, 2.0, 1.2 * 2.0},   // A > 0, above band: clipped
      {0.5, 2.0, 0.5 * 2.0},   // A > 0, below band: unclipped is smaller
      {1.1, 2.0, 1.1 * 2.0},   // inside band
      {1.5, -2.0, 1.5 * -2.0},  // A < 0, above band: unclipped is smaller
      {0.5, -2.0, 0.8 * -2.0},  // A < 0, below band: clipped
      {1.0, 0.0, 0.0},
  };
  for (const Case& c : cases) {
    EXPECT_DOUBLE_EQ(ClippedSurrogate(c.rho, c.a, 0.2), c.want)
        << c.rho << " " << c.a;
  }
}

RolloutBatch RandomBatch(const ActorCritic& net, int n, std::mt19937_64& rng,
                         double mean_shift) {
  RolloutBatch b;
  b.observations.values = RandomMatrix(rng, 33, n);
  b.critic.values = RandomMatrix(rng, 41, n);
  const PolicyOutput p = net.Policy(b.observations);
  b.old_means = p.means + RandomMatrix(rng, 8, n, mean_shift);
  b.old_log_std = p.log_std.array() + 0.1;
  b.actions = GaussianSample(b.old_means, b.old_log_std, rng);
  b.old_log_probs = GaussianLogProb(b.old_means, b.old_log_std, b.actions);
  b.advantages = RandomMatrix(rng, n, 1);
  b.returns = RandomMatrix(rng, n, 1);
  return b;
}

TEST(PpoLossTest, UnchangedPolicy) {
  const ActorCritic net(TinyNetwork(), 13);
  std::mt19937_64 rng(14);
  RolloutBatch b = RandomBatch(net, 32, rng, 0.0);
  b.old_means = net.Policy(b.observations).means;
  b.old_log_std = net.log_std();
  b.old_log_probs = GaussianLogProb(b.old_means, b.old_log_std, b.actions);
  std::vector<int> idx(32);
  for (int i = 0; i < 32; ++i) idx[i] = i;
  const PpoConfig config;
  const PpoLoss loss = EvaluatePpoLoss(net, net.parameters(), b, idx, config, nullptr);
  EXPECT_EQ(loss.clip_fraction, 0.0);
  EXPECT_NEAR(loss.surrogate, -b.advantages.mean(), 1e-12);
  EXPECT_NEAR(loss.total - config.value_coef * loss.value,
              -b.advantages.mean() - config.entropy_coef * GaussianEntropy(net.log_std()),
              1e-12);
  EXPECT_NEAR(loss.kl, 0.0, 1e-15);
}

TEST(PpoLossTest, GradientMatchesFiniteDifferences) {
  NetworkConfig nc = TinyNetwork();
  nc.actor_output_gain = 1.0;
  ActorCritic net(nc, 15);
  std::mt19937_64 rng(16);
  // Give the normalizers non-trivial statistics.
  net.observation_normalizer().Update(RandomMatrix(rng, 33, 64, 2.0));
  net.critic_normalizer().Update(RandomMatrix(rng, 41, 64, 2.0));
  const RolloutBatch b = RandomBatch(net, 16, rng, 0.3);
  std::vector<int> idx(16);
  for (int i = 0; i < 16; ++i) idx[i] = i;
  PpoConfig config;
  config.entropy_coef = 0.01;

  Eigen::VectorXd grad;
  const Eigen::VectorXd params = net.parameters();
  const PpoLoss loss = EvaluatePpoLoss(net, params, b, idx, config, &grad);
  EXPECT_GT(loss.clip_fraction, 0.0);  // both branches exercised
  EXPECT_LT(loss.clip_fraction, 1.0);
  double worst = 0.0;
  const double h = 1e-6;
  for (int k = 0; k < params.size(); ++k) {
    Eigen::VectorXd plus = params;
    Eigen::VectorXd minus = params;
    plus[k] += h;
    minus[k] -= h;
    const double fd =
        (EvaluatePpoLoss(net, plus, b, idx, config, nullptr).total -
         EvaluatePpoLoss(net, minus, b, idx, config, nullptr).total) /
        (2 * h);
    const double scale = std::max(std::abs(fd), std::abs(grad[k]));
    if (scale < 1e-6) {
      EXPECT_LT(std::abs(fd - grad[k]), 1e-9);
      continue;
    }
    worst = std::max(worst, std::abs(fd - grad[k]) / scale);
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(AdamTest, FirstStepMatchesHandComputation) {
  Adam adam(2, 0.9, 0.999, 1e-8);
  Eigen::VectorXd p(2);
  p << 1.0, -2.0;
  Eigen::VectorXd g(2);
  g << 0.5, -4.0;
  adam.Step(&p, g, 0.1);
  // Bias-corrected first step moves each coordinate by lr * sign(g).
  EXPECT_NEAR(p[0], 1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-12);
  EXPECT_NEAR(p[1], -2.0 + 0.1 * 4.0 / (4.0 + 1e-8), 1e-12);
}

TEST(PpoUpdateTest, NonFiniteLossRestoresParameters) {
  ActorCritic net(TinyNetwork(), 17);
  std::mt19937_64 rng(18);
  RolloutBatch b = RandomBatch(net, 64, rng, 0.1);
  b.returns[40] = std::nan("");
  Adam adam(net.num_params(), 0.9, 0.999, 1e-8);
  const Eigen::VectorXd before = net.parameters();
  double lr = 1e-3;
  try {
    PpoUpdate(&net, &adam, b, PpoConfig(), &lr, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteLoss);
    EXPECT_NE(std::string(e.what()).find("minibatch"), std::string::npos);
  }
  EXPECT_EQ(net.parameters(), before);
  EXPECT_EQ(adam.steps(), 0);
  EXPECT_EQ(lr, 1e-3);
}

TEST(PpoUpdateTest, AdaptiveLearningRateBounds) {
  ActorCritic net(TinyNetwork(), 19);
  std::mt19937_64 rng(20);
  // Old policy far from the current one: KL stays large, lr shrinks.
  RolloutBatch far = RandomBatch(net, 64, rng, 3.0);
  Adam adam(net.num_params(), 0.9, 0.999, 1e-8);
  double lr = 1e-3;
  PpoUpdate(&net, &adam, far, PpoConfig(), &lr, rng);
  EXPECT_NEAR(lr, 1e-3 / std::pow(1.5, 20), 1e-15 + 1e-6);
  EXPECT_GE(lr, 1e-6);
}

TEST(PpoUpdateTest, ImprovesSurrogate) {
  ActorCritic net(TinyNetwork(), 21);
  std::mt19937_64 rng(22);
  RolloutBatch b = RandomBatch(net, 256, rng, 0.0);
  b.old_means = net.Policy(b.observations).means;
  b.old_log_std = net.log_std();
  b.old_log_probs = GaussianLogProb(b.old_means, b.old_log_std, b.actions);
  std::vector<int> idx(256);
  for (int i = 0; i < 256; ++i) idx[i] = i;
  PpoConfig config;
  const double before =
      EvaluatePpoLoss(net, net.parameters(), b, idx, config, nullptr).total;
  Adam adam(net.num_params(), 0.9, 0.999, 1e-8);
  double lr = 1e-3;
  const UpdateStats stats = PpoUpdate(&net, &adam, b, config, &lr, rng);
  const double after =
      EvaluatePpoLoss(net, net.parameters(), b, idx, config, nullptr).total;
  EXPECT_LT(after, before);
  EXPECT_GT(stats.kl, 0.0);
}

TrainConfig TinyTraining() {
  TrainConfig c;
  c.network = TinyNetwork();
  c.env.task = TaskMode::kHover;
  c.env.spawn_position = Vec3(0, 0, 1.5);
  c.num_envs = 8;
  c.steps_per_iteration = 16;
  c.iterations = 3;
  c.seed = 23;
  return c;
}

TEST(TrainTest, ZeroIterationsKeepsInitialization) {
  TrainConfig c = TinyTraining();
  c.iterations = 0;
  const TrainResult r = Train(c);
  const ActorCritic init(c.network, c.seed);
  EXPECT_EQ(r.checkpoint.net.parameters(), init.parameters());
  EXPECT_TRUE(r.curve.empty());
}

TEST(TrainTest, DeterministicAcrossRunsAndThreads) {
  TrainConfig c = TinyTraining();
  const TrainResult a = Train(c);
  const TrainResult b = Train(c);
  c.num_threads = 3;
  const TrainResult threaded = Train(c);
  ASSERT_EQ(a.curve.size(), 3u);
  for (size_t k = 0; k < a.curve.size(); ++k) {
    EXPECT_EQ(FormatLearningCurveRow(a.curve[k]), FormatLearningCurveRow(b.curve[k]));
    EXPECT_EQ(FormatLearningCurveRow(a.curve[k]),
              FormatLearningCurveRow(threaded.curve[k]));
  }
  EXPECT_EQ(a.checkpoint.net.parameters(), b.checkpoint.net.parameters());
  EXPECT_EQ(a.checkpoint.net.parameters(), threaded.checkpoint.net.parameters());
}

TEST(TrainTest, WritesCurveAndCheckpoint) {
  TrainConfig c = TinyTraining();
  c.checkpoint_interval = 2;
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / "tiltrl_train_test";
  std::filesystem::remove_all(dir);
  TrainOutputs out;
  out.out_dir = dir;
  const TrainResult r = Train(c, out);
  const std::string curve = ReadFile(dir / "learning_curve.csv");
  EXPECT_EQ(curve.substr(0, curve.find('\n')), LearningCurveHeader());
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 4);
  EXPECT_TRUE(std::filesystem::exists(dir / "checkpoint_2.json"));
  EXPECT_FALSE(std::filesystem::exists(dir / "checkpoint.json.tmp"));
  const Checkpoint loaded = LoadCheckpoint(dir / "checkpoint.json");
  EXPECT_EQ(loaded.net.parameters(), r.checkpoint.net.parameters());
  EXPECT_EQ(loaded.iteration, 3);
  EXPECT_EQ(loaded.seed, 23u);
  const TrainConfig back =
      TrainConfig::FromConfig(KeyValueConfig::Parse(loaded.config_text));
  EXPECT_EQ(back.num_envs, 8);
  EXPECT_EQ(back.network.actor_hidden, (std::vector<int>{8, 8}));
}

TEST(CheckpointTest, RoundTripIsExact) {
  Checkpoint c;
  c.net = ActorCritic(TinyNetwork(), 24);
  std::mt19937_64 rng(25);
  c.net.parameters() += RandomMatrix(rng, c.net.num_params(), 1, 1e-3);
  c.net.observation_normalizer().Update(RandomMatrix(rng, 33, 7));
  c.optimizer = Adam(c.net.num_params(), 0.9, 0.999, 1e-8);
  c.optimizer.Step(&c.net.parameters(), RandomMatrix(rng, c.net.num_params(), 1), 1e-3);
  c.learning_rate = 0.000123;
  c.iteration = 7;
  c.seed = 99;
  c.config_text = "a = 1\n";
  const std::string text = SerializeCheckpoint(c);
  const Checkpoint back = ParseCheckpoint(text);
  EXPECT_EQ(back.net.parameters(), c.net.parameters());
  EXPECT_EQ(back.net.observation_normalizer().mean(),
            c.net.observation_normalizer().mean());
  EXPECT_EQ(back.optimizer.second_moment(), c.optimizer.second_moment());
  EXPECT_EQ(SerializeCheckpoint(back), text);
}

TEST(CheckpointTest, Mismatches) {
  Checkpoint c;
  c.net = ActorCritic(TinyNetwork(), 26);
  c.optimizer = Adam(c.net.num_params(), 0.9, 0.999, 1e-8);
  std::string text = SerializeCheckpoint(c);
  const std::string bumped = std::string(text).replace(
      text.find("\"version\": 1"), 12, "\"version\": 9");
  try {
    ParseCheckpoint(bumped);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCheckpointMismatch);
  }
  EXPECT_THROW(ParseCheckpoint("{not json"), Error);
  EXPECT_THROW(LoadCheckpoint("/nonexistent/checkpoint.json"), Error);
}

}  // namespace
}  // namespace tiltrl
