#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "common/rng.hpp"
#include "learn/a2c.hpp"
#include "learn/adam.hpp"
#include "learn/checkpoint.hpp"
#include "learn/gaussian.hpp"
#include "learn/mlp.hpp"

using namespace decopt;
using namespace decopt::learn;

namespace {

// Straight-line matrix-arithmetic recomputation of a 2x32 tanh net,
// independent of Mlp's internal layout helpers.
std::vector<double> reference_forward(const Mlp& net, const std::vector<double>& x) {
  const auto& w = net.widths();
  const auto& p = net.params();
  std::vector<double> cur = x;
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < w.size(); ++l) {
    const int in = w[l], out = w[l + 1];
    std::vector<double> next(out, 0.0);
    for (int i = 0; i < out; ++i)
      for (int j = 0; j < in; ++j) next[i] += p[off + static_cast<std::size_t>(i) * in + j] * cur[j];
    off += static_cast<std::size_t>(out) * in;
    for (int i = 0; i < out; ++i) next[i] += p[off + i];
    off += out;
    if (l + 2 < w.size())
      for (int i = 0; i < out; ++i) next[i] = std::tanh(next[i]);
    cur = std::move(next);
  }
  return cur;
}

double scalar_loss(const Mlp& net, const std::vector<double>& x) {
  // sum of squares of outputs: a smooth scalar with nontrivial gradients
  const auto out = net.forward(x);
  double loss = 0.0;
  for (double v : out) loss += v * v;
  return loss;
}

}  // namespace

TEST_CASE("forward: zero parameters give zero output") {
  Mlp net({3, 32, 32, 2});
  const auto out = net.forward(std::vector<double>{0.3, -0.7, 1.0});
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
}

TEST_CASE("forward: single linear layer is w*x") {
  Mlp net({1, 1});
  net.params() = {2.5, 0.0};  // weight, bias
  CHECK(net.forward(std::vector<double>{3.0})[0] == doctest::Approx(7.5));
}

TEST_CASE("forward matches an independent recomputation") {
  Rng rng(404);
  for (int t = 0; t < 5; ++t) {
    Mlp net = Mlp::standard(4, 3, rng);
    std::vector<double> x(4);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    const auto a = net.forward(x);
    const auto b = reference_forward(net, x);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
  }
}

TEST_CASE("forward rejects dimension mismatches") {
  Mlp net({3, 2});
  CHECK_THROWS(net.forward(std::vector<double>{1.0, 2.0}));
}

TEST_CASE("backprop matches central finite differences") {
  Rng rng(2025);
  for (int t = 0; t < 20; ++t) {
    const int in = 1 + static_cast<int>(rng.uniform_int(0, 3));
    const int out = 1 + static_cast<int>(rng.uniform_int(0, 2));
    Mlp net({in, 8, 8, out});
    net.init(rng);
    std::vector<double> x(in);
    for (auto& v : x) v = rng.uniform(-1.5, 1.5);

    Mlp::Tape tape;
    const auto y = net.forward(x, tape);
    std::vector<double> dout(out);
    for (int i = 0; i < out; ++i) dout[i] = 2.0 * y[i];
    std::vector<double> grad(net.param_count(), 0.0);
    net.backward(tape, dout, grad);

    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t p = 0; p < net.param_count(); p += 7) {  // sampled coordinates
      const double saved = net.params()[p];
      net.params()[p] = saved + h;
      const double up = scalar_loss(net, x);
      net.params()[p] = saved - h;
      const double dn = scalar_loss(net, x);
      net.params()[p] = saved;
      const double fd = (up - dn) / (2.0 * h);
      const double rel = std::abs(grad[p] - fd) / (1e-6 + std::abs(fd));
      worst = std::max(worst, rel);
    }
    CHECK_MESSAGE(worst <= 1e-4, "net ", t, " worst rel err ", worst);
  }
}

TEST_CASE("gaussian: density at the mode of a standard normal") {
  Mlp net({2, 3});  // zero params: mean 0
  GaussianPolicy pol(std::move(net));
  const std::vector<double> obs = {0.0, 0.0};
  const std::vector<double> action = {0.0, 0.0, 0.0};
  const double lp = pol.log_prob(obs, action);
  CHECK(lp == doctest::Approx(-0.5 * 3 * std::log(2 * M_PI)).epsilon(1e-12));
}

TEST_CASE("gaussian: tiny std collapses the sample onto the mean") {
  Rng rng(1);
  Mlp net({1, 1});
  net.params() = {0.0, 1.25};  // constant mean 1.25
  GaussianPolicy pol(std::move(net));
  pol.log_std = {std::log(1e-9)};
  const auto a = pol.sample(std::vector<double>{0.3}, rng);
  CHECK(a[0] == doctest::Approx(1.25).epsilon(1e-6));
}

TEST_CASE("gaussian: sample mean approaches the network mean") {
  Rng rng(7);
  Mlp net({1, 1});
  net.params() = {0.0, 0.8};
  GaussianPolicy pol(std::move(net));
  const std::vector<double> obs = {0.4};
  const int n = 100000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += pol.sample(obs, rng)[0];
  acc /= n;
  CHECK(std::abs(acc - 0.8) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("gaussian: density integrates to one (1-D Monte Carlo)") {
  // Importance-free check: integrate exp(logp) over a wide grid.
  Mlp net({1, 1});
  net.params() = {0.0, 0.3};
  GaussianPolicy pol(std::move(net));
  pol.log_std = {std::log(0.7)};
  const std::vector<double> obs = {0.0};
  double integral = 0.0;
  const double lo = -6.0, hi = 6.0;
  const int steps = 4000;
  const double dx = (hi - lo) / steps;
  for (int i = 0; i < steps; ++i) {
    const double a = lo + (i + 0.5) * dx;
    integral += std::exp(pol.log_prob(obs, std::vector<double>{a})) * dx;
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  std::vector<double> p = {1.0, -2.0};
  std::vector<double> g = {0.0, 0.0};
  AdamState st;
  adam_step(p, g, st, 0.05);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -2.0);
}

TEST_CASE("adam: first step has magnitude about lr") {
  std::vector<double> p = {0.0};
  std::vector<double> g = {3.7};
  AdamState st;
  adam_step(p, g, st, 0.01);
  CHECK(p[0] == doctest::Approx(-0.01).epsilon(1e-6));
}

TEST_CASE("adam: descends w^2 from w=1") {
  std::vector<double> w = {1.0};
  AdamState st;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> g = {2.0 * w[0]};
    adam_step(w, g, st, 0.01);
  }
  CHECK(std::abs(w[0]) < 1.0);
}

TEST_CASE("a2c: zero advantages leave the policy unchanged") {
  Rng rng(12);
  GaussianPolicy pol(Mlp::standard(2, 1, rng));
  Mlp critic({2, 1});  // zero critic
  const auto params_before = pol.mean_net.params();

  // Two episodes, same constant reward; critic 0 means advantages equal
  // returns, which normalization centers to exactly zero.
  std::vector<EpisodeSample> batch(2);
  for (auto& ep : batch) {
    StepSample s;
    s.obs = {0.1, 0.2};
    s.action = {0.5};
    s.reward = 3.0;
    ep.steps.push_back(s);
  }
  A2cConfig cfg;
  AdamState a, b, c;
  a2c_update(pol, critic, batch, cfg, a, b, c);
  for (std::size_t i = 0; i < params_before.size(); ++i)
    CHECK(pol.mean_net.params()[i] == doctest::Approx(params_before[i]).epsilon(1e-12));
}

TEST_CASE("a2c: one-step episode with zero critic has advantage = reward") {
  Rng rng(13);
  GaussianPolicy pol(Mlp::standard(1, 1, rng));
  Mlp critic({1, 1});
  std::vector<EpisodeSample> batch(1);
  StepSample s;
  s.obs = {0.5};
  s.action = {0.1};
  s.reward = -2.0;
  batch[0].steps.push_back(s);
  A2cConfig cfg;
  cfg.normalize_advantages = false;
  AdamState a, b, c;
  const auto diag = a2c_update(pol, critic, batch, cfg, a, b, c);
  CHECK(diag.mean_return == doctest::Approx(-2.0));
}

TEST_CASE("policy gradient matches finite differences of expected reward") {
  // Two-parameter policy (constant mean + log_std) on a smooth bounded
  // bandit reward. Both sides use the same stratified standard-normal
  // draw set, so the comparison is quadrature against quadrature.
  const int n = 100000;
  std::vector<double> eps(n);
  {
    // Inverse-CDF midpoint stratification (Acklam's rational approximation
    // is overkill here; Beasley-Springer-Moro style via erf inverse through
    // Newton on the complementary error function is unnecessary as well --
    // a bisection on erf is exact enough and has no tunables).
    for (int i = 0; i < n; ++i) {
      const double u = (i + 0.5) / n;
      double lo = -8.0, hi = 8.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
        (cdf < u ? lo : hi) = mid;
      }
      eps[i] = 0.5 * (lo + hi);
    }
    // Moment-match the second moment exactly.
    double m2 = 0.0;
    for (double e : eps) m2 += e * e;
    m2 /= n;
    const double fix = 1.0 / std::sqrt(m2);
    for (double& e : eps) e *= fix;
  }

  Mlp net({1, 1});
  net.params() = {0.0, 1.0};  // constant mean = 1.0 (weight on obs 0)
  GaussianPolicy pol(std::move(net));
  pol.log_std = {std::log(0.8)};
  const std::vector<double> obs = {0.0};

  auto reward = [](double y) { return std::cos(y); };
  const double sigma = std::exp(pol.log_std[0]);
  const double mean = pol.mean_action(obs)[0];

  // Score-function estimate using the production gradient code.
  std::vector<double> mean_grad(pol.mean_net.param_count(), 0.0);
  std::vector<double> std_grad(1, 0.0);
  for (int i = 0; i < n; ++i) {
    const double y = mean + sigma * eps[i];
    pol.accumulate_log_prob_grad(obs, std::vector<double>{y}, reward(y) / n, mean_grad, std_grad);
  }
  const double pg_mean = mean_grad[1];  // bias of the single output unit
  const double pg_logstd = std_grad[0];

  // Finite differences of the empirical expected reward (same draws).
  auto expected_reward = [&](double m, double ls) {
    const double sd = std::exp(ls);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += reward(m + sd * eps[i]);
    return acc / n;
  };
  const double h = 1e-4;
  const double fd_mean =
      (expected_reward(mean + h, pol.log_std[0]) - expected_reward(mean - h, pol.log_std[0])) /
      (2 * h);
  const double fd_logstd =
      (expected_reward(mean, pol.log_std[0] + h) - expected_reward(mean, pol.log_std[0] - h)) /
      (2 * h);

  const double num = std::hypot(pg_mean - fd_mean, pg_logstd - fd_logstd);
  const double den = std::hypot(fd_mean, fd_logstd);
  CHECK_MESSAGE(num <= 1e-3 * den, "pg (", pg_mean, ",", pg_logstd, ") fd (", fd_mean, ",",
                fd_logstd, ")");
}

TEST_CASE("checkpoint round trip is exact") {
  Rng rng(55);
  Checkpoint ck;
  ck.policy = GaussianPolicy(Mlp::standard(3, 2, rng));
  ck.policy.log_std = {0.3, -0.2};
  ck.critic = Mlp::standard(3, 1, rng);
  ck.config.learning_rate = 0.01;
  ck.config.seed = 0xdeadbeefcafef00dull;
  ck.rng_state = rng.state();
  ck.epochs_done = 17;
  const std::string path = "/tmp/decopt_ck_test.txt";
  save_checkpoint(ck, path);
  const Checkpoint back = load_checkpoint(path);
  REQUIRE(back.policy.mean_net.params().size() == ck.policy.mean_net.params().size());
  for (std::size_t i = 0; i < ck.policy.mean_net.params().size(); ++i)
    CHECK(back.policy.mean_net.params()[i] == ck.policy.mean_net.params()[i]);
  CHECK(back.policy.log_std[1] == -0.2);
  CHECK(back.config.seed == ck.config.seed);
  CHECK(back.rng_state == ck.rng_state);
  CHECK(back.epochs_done == 17);
  std::remove(path.c_str());
}
