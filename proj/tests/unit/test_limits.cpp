#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bandit_clt/appendix.hpp"
#include "bandit_clt/coupling.hpp"
#include "bandit_clt/limits.hpp"
#include "bandit_clt/normal.hpp"
#include "bandit_clt/quadrature.hpp"
#include "bandit_clt/trajectory.hpp"
#include "bandit_clt/ucb_recursion.hpp"

using namespace bandit_clt;

namespace {

template <class F>
ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::Io;
}

// E_Z[1 - Phi(a + b Z)] = 1 - Phi(a / sqrt(1 + b^2)).
double play_prob_closed_form(double mu_k, std::uint64_t n_k, double mu_s, std::uint64_t n_s, double sigma) {
  const double a = std::sqrt(1.0 + n_k) * (mu_s - mu_k) / sigma;
  const double b = std::sqrt((1.0 + n_k) / (1.0 + n_s));
  return normal_sf(a / std::sqrt(1.0 + b * b));
}

}  // namespace

// --- predictions -----------------------------------------------------------------

TEST(SllnLimit, Slopes) {
  const auto env = gaussian_env({0.3});
  EXPECT_NEAR(slln_limit(env, 1.0).per_arm_slln_slope[1], 22.2222222222222222, 1e-12);
  EXPECT_DOUBLE_EQ(slln_limit(env, 1.0).per_arm_slln_slope[0], 0.0);
  const auto env3 = gaussian_env({0.3, 0.6});
  const auto p = slln_limit(env3, 1.0);
  EXPECT_NEAR(p.per_arm_slln_slope[1], 22.2222222222222222, 1e-12);
  EXPECT_NEAR(p.per_arm_slln_slope[2], 5.5555555555555556, 1e-12);
  EXPECT_NEAR(p.regret_slln_slope, 2.0 / 0.3 + 2.0 / 0.6, 1e-12);
  EXPECT_NEAR(slln_limit(gaussian_env({0.3}), std::sqrt(0.3)).per_arm_slln_slope[1], 6.6666666666666667, 1e-12);
  EXPECT_DOUBLE_EQ(p.tail_exponent, -1.0);
}

TEST(SllnLimit, ZeroGapIsRejected) {
  // A second arm tied with the optimum cannot come out of env_new, so build it by hand.
  BanditEnv env = gaussian_env({0.3});
  env.gaps[1] = 0.0;
  EXPECT_EQ(error_kind_of([&] { slln_limit(env, 1.0); }), ErrorKind::ZeroGap);
}

TEST(CltParams, FrozenValues) {
  const auto a = clt_params(gaussian_env({0.3}), 1.0, 2000);
  EXPECT_NEAR(a.per_arm_clt_mean[1], 168.908943545379608, 1e-9);
  EXPECT_NEAR(a.per_arm_clt_std[1], 86.6433157120180104, 1e-9);
  const auto b = clt_params(gaussian_env({0.7}), 1.0, 50000);
  EXPECT_NEAR(b.per_arm_clt_mean[1], 44.1623603445317678, 1e-10);
  EXPECT_NEAR(b.per_arm_clt_std[1], 18.9870762371933932, 1e-10);
  EXPECT_NEAR(b.regret_clt_mean, 0.7 * 44.1623603445317678, 1e-10);
  EXPECT_NEAR(b.regret_clt_std, 0.7 * 18.9870762371933932, 1e-10);
}

TEST(CltParams, RegretVarianceAddsOverArms) {
  const auto env = env_new({ArmSpec::gaussian(1.0, 1.0), ArmSpec::gaussian(0.6, 2.0), ArmSpec::gaussian(0.3, 0.5)});
  const auto p = clt_params(env, 1.5, 10000);
  double var = 0.0;
  for (std::size_t k : {1u, 2u}) var += env.gaps[k] * env.gaps[k] * p.per_arm_clt_std[k] * p.per_arm_clt_std[k];
  EXPECT_NEAR(p.regret_clt_std, std::sqrt(var), 1e-12);
  EXPECT_TRUE(std::isnan(p.tail_exponent));
  EXPECT_NEAR(p.per_arm_clt_std[1], 2 * 1.5 * 2.0 / 0.16 * std::sqrt(2 * std::log(10000.0)), 1e-9);
}

TEST(CltParams, Degenerate) {
  EXPECT_TRUE(clt_params(gaussian_env({0.3}), 1.0, 1).degenerate);
  EXPECT_DOUBLE_EQ(clt_params(gaussian_env({0.3}), 1.0, 1).per_arm_clt_mean[1], 0.0);
  EXPECT_EQ(error_kind_of([] { clt_params(gaussian_env({0.3}), 1.0, 0); }), ErrorKind::InvalidConfig);
}

TEST(TailExponent, Values) {
  EXPECT_DOUBLE_EQ(tail_exponent(1.0, 1.0), -1.0);
  EXPECT_DOUBLE_EQ(tail_exponent(std::sqrt(2.0), 1.0), -2.0000000000000004);
  EXPECT_DOUBLE_EQ(tail_exponent(3.0, 1.5), -4.0);
}

// --- quadrature and exact play probabilities ---------------------------------------

TEST(GaussHermite, IntegratesPolynomialMoments) {
  const auto& gh = gauss_hermite_64();
  EXPECT_NEAR(gh.expect_standard_normal([](double) { return 1.0; }), 1.0, 1e-14);
  EXPECT_NEAR(gh.expect_standard_normal([](double z) { return z * z; }), 1.0, 1e-13);
  EXPECT_NEAR(gh.expect_standard_normal([](double z) { return z * z * z * z; }), 3.0, 1e-12);
  EXPECT_NEAR(gh.expect_standard_normal([](double z) { return std::pow(z, 10); }), 945.0, 1e-8);
  EXPECT_NEAR(gh.expect_standard_normal([](double z) { return std::cos(z); }), std::exp(-0.5), 1e-14);
}

TEST(PlayProbExact, FrozenValues) {
  EXPECT_NEAR(play_prob_exact(0.0, 3, 1.0, 1'000'000, 1.0), 0.0227503479120452584, 1e-10);
  EXPECT_NEAR(play_prob_exact(0.0, 3, 1.0, 1'000'000, 1.0), 0.0227501319481792072, 1e-6);
  EXPECT_NEAR(play_prob_exact(0.2, 5, 0.6, 40, 1.3), 0.240735261811000544, 1e-10);
  EXPECT_NEAR(play_prob_exact(0.5, 0, 0.5, 0, 1.0), 0.5, 1e-14);
  EXPECT_LT(play_prob_exact(0.0, 100, 10.0, 1'000'000, 1.0), 1e-12);
}

TEST(PlayProbExact, MatchesClosedFormOverAGrid) {
  for (double mk : {-1.0, 0.0, 0.3, 0.9}) {
    for (std::uint64_t nk : {0u, 1u, 4u, 50u, 2000u}) {
      for (double ms : {0.0, 0.5, 1.0}) {
        for (std::uint64_t ns : {0u, 3u, 100u, 100000u}) {
          for (double sigma : {0.5, 1.0, 2.0}) {
            EXPECT_NEAR(play_prob_exact(mk, nk, ms, ns, sigma), play_prob_closed_form(mk, nk, ms, ns, sigma),
                        kPlayProbTolerance)
                << mk << ' ' << nk << ' ' << ms << ' ' << ns << ' ' << sigma;
          }
        }
      }
    }
  }
}

TEST(PlayProbExact, MonotoneDecreasingInCountWhenBehind) {
  double prev = 1.0;
  for (std::uint64_t n = 0; n <= 200; ++n) {
    const double p = play_prob_exact(0.2, n, 0.7, 500, 1.0);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(PlayProbExact, AgreesWithMonteCarlo) {
  CounterStream s(123, 0, 0, StreamPurpose::Auxiliary);
  const int n = 200'000;
  const double mk = 0.1, ms = 0.45, sigma = 1.1;
  const std::uint64_t nk = 7, ns = 12;
  double acc = 0, acc2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    const double f = normal_sf(std::sqrt(1.0 + nk) * (ms - mk + sigma * z / std::sqrt(1.0 + ns)) / sigma);
    acc += f;
    acc2 += f * f;
  }
  const double mean = acc / n;
  const double se = std::sqrt((acc2 / n - mean * mean) / n);
  EXPECT_NEAR(play_prob_exact(mk, nk, ms, ns, sigma), mean, 4 * se);
}

// --- approximations --------------------------------------------------------------

TEST(Approximations, FrozenValues) {
  EXPECT_DOUBLE_EQ(p_tilde(0, 0.7), 1.0);
  EXPECT_NEAR(p_tilde(1, 2.0), 0.135335283236612692, 1e-15);
  EXPECT_NEAR(p_tilde_plus(10, 1.0, 0.1), 0.00247875217666635842, 1e-17);
  EXPECT_NEAR(p_tilde(10, 1.0), 0.00673794699908546710, 1e-17);
  EXPECT_NEAR(p_tilde_minus(10, 1.0, 0.1), 0.0366312777774683606, 1e-16);
  EXPECT_DOUBLE_EQ(p_tilde_minus(0, 1.0, 0.25), 1.0);
  EXPECT_NEAR(p_hat(4, 1.0, 0.0), 0.0381773785442910786, 1e-15);
  EXPECT_NEAR(p_hat_plus(4, 1.0, 0.0), 0.0381773785442910786 / 5, 1e-15);
  EXPECT_DOUBLE_EQ(p_hat(1, 1.0, 0.99), 1.0);
  EXPECT_EQ(error_kind_of([] { p_tilde_plus(4, 1.0, 0.5); }), ErrorKind::EpsOutOfRange);
  EXPECT_EQ(error_kind_of([] { p_tilde_minus(4, 1.0, 0.0); }), ErrorKind::EpsOutOfRange);
  EXPECT_EQ(error_kind_of([] { p_hat(0, 1.0, 0.0); }), ErrorKind::DegenerateGap);
  EXPECT_EQ(error_kind_of([] { p_hat(3, 1.0, 1.0); }), ErrorKind::DegenerateGap);
}

TEST(Approximations, OrderingOverAGrid) {
  for (double delta : {0.1, 0.5, 1.0, 2.0}) {
    for (double frac : {0.01, 0.3, 0.99}) {
      const double eps = frac * delta * delta / 2;
      for (std::uint64_t j = 0; j <= 300; j += 7) {
        const double lo = p_tilde_plus(j, delta, eps);
        const double mid = p_tilde(j, delta);
        const double hi = p_tilde_minus(j, delta, eps);
        EXPECT_LE(lo, mid);
        EXPECT_LE(mid, hi);
        EXPECT_GE(lo, 0.0);
        EXPECT_LE(hi, 1.0);
        if (j > 0) {
          const double ph = p_hat(j, 1.0, 1.0 - delta);
          EXPECT_LT(p_hat_plus(j, 1.0, 1.0 - delta), ph);
        }
      }
    }
  }
}

// --- first passage -------------------------------------------------------------------

TEST(TauFirstPassage, FixedStreams) {
  const std::vector<double> u{0.9, 0.6, 0.3, 0.05};
  EXPECT_EQ(tau_first_passage(0.5, u), 3u);
  EXPECT_EQ(tau_first_passage(0.95, u), 1u);
  EXPECT_EQ(tau_first_passage(0.1, u), 4u);
  EXPECT_EQ(tau_first_passage(1.0, u), 1u);
  EXPECT_EQ(error_kind_of([&] { tau_first_passage(0.0, u); }), ErrorKind::ZeroProbability);
  EXPECT_EQ(error_kind_of([&] { tau_first_passage(1.5, u); }), ErrorKind::InvalidConfig);
}

TEST(TauFirstPassage, MonotoneCoupling) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::vector<double> u;
    CounterStream s(seed, 0, 0, StreamPurpose::Auxiliary);
    for (int i = 0; i < 5000; ++i) u.push_back(s.uniform());
    std::uint64_t prev = 1;
    for (double p : {0.9, 0.5, 0.2, 0.05, 0.01}) {
      const auto tau = tau_first_passage(p, u);
      EXPECT_GE(tau, prev);
      prev = tau;
    }
  }
}

TEST(TauFirstPassage, GeometricMean) {
  CounterStream s(77, 0, 0, StreamPurpose::Auxiliary);
  const int n = 1'000'000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(tau_first_passage(0.01, [&] { return s.uniform(); }));
  // sd of Geom(0.01) is sqrt(1-p)/p = 99.5; 4 standard errors.
  EXPECT_NEAR(sum / n, 100.0, 4 * 99.5 / std::sqrt(static_cast<double>(n)));
}

// --- sandwich diagnostics -------------------------------------------------------------

TEST(SandwichCheck, ReplaysTheTrajectory) {
  const auto env = gaussian_env({0.5});
  const auto rec = run_trajectory(env, PolicyConfig::ts(), 2000, {4, 0}, {true, true, {}});
  const auto rep = sandwich_check(rec, env, 1.0, 0.06, {true, 20});
  ASSERT_EQ(rep.rows.size(), 2000u);
  EXPECT_EQ(rep.rows.front().n_sub + rep.rows.front().n_opt, 0u);
  EXPECT_NEAR(rep.rows.front().p_exact, 0.5, 1e-12);
  for (const auto& r : rep.rows) EXPECT_EQ(r.n_sub + r.n_opt, r.t);
  EXPECT_EQ(rep.rows.back().n_sub + (rec.play_times[1].back() == 2000 ? 1u : 0u), rec.final_counts[1]);
  EXPECT_EQ(rep.early.epochs + rep.late.epochs, 2000u);
  EXPECT_EQ(rep.late.epochs, 1001u);
  std::uint64_t total = 0;
  for (const auto& b : rep.bins) total += b.epochs;
  EXPECT_EQ(total, 2000u);
  EXPECT_EQ(rep.after(0).epochs, 2000u);
  EXPECT_EQ(rep.after(1000).epochs, 1000u);
}

TEST(SandwichCheck, Preconditions) {
  const auto env3 = gaussian_env({0.3, 0.5});
  const auto rec3 = run_trajectory(env3, PolicyConfig::ts(), 50, {1, 0}, {true, true, {}});
  EXPECT_EQ(error_kind_of([&] { sandwich_check(rec3, env3, 1.0, 0.01); }), ErrorKind::NotTwoArmed);
  const auto env = gaussian_env({0.5});
  const auto bare = run_trajectory(env, PolicyConfig::ts(), 50, {1, 0});
  EXPECT_EQ(error_kind_of([&] { sandwich_check(bare, env, 1.0, 0.01); }), ErrorKind::MissingHistory);
  const auto full = run_trajectory(env, PolicyConfig::ts(), 50, {1, 0}, {true, true, {}});
  EXPECT_EQ(error_kind_of([&] { sandwich_check(full, env, 1.0, 0.2); }), ErrorKind::EpsOutOfRange);
}

// --- UCB recursion ----------------------------------------------------------------------

TEST(UcbRecursion, FirstPassageFormIsExact) {
  const auto env = gaussian_env({0.5});
  for (std::uint64_t r = 0; r < 10; ++r) {
    for (double sigma : {1.0, 2.0}) {
      const auto rec = run_trajectory(env, PolicyConfig::ucb(sigma), 3000, {9, r}, {true, true, {}});
      const auto chk = verify_ucb_recursion(rec, env, sigma);
      EXPECT_EQ(chk.rows.size(), rec.final_counts[1] - 1);
      EXPECT_TRUE(chk.all_first_passage()) << "replication " << r;
    }
  }
}

TEST(UcbRecursion, ClosedFormHelper) {
  // 1 + floor(e^S) with S = ln 10.5 gives 11.
  EXPECT_TRUE(detail::closed_form_holds(3, 11, std::log(10.5)));
  EXPECT_FALSE(detail::closed_form_holds(3, 12, std::log(10.5)));
  // S below ln T_j: the next play comes immediately.
  EXPECT_TRUE(detail::closed_form_holds(20, 21, std::log(5.0)));
  EXPECT_FALSE(detail::closed_form_holds(20, 25, std::log(5.0)));
  EXPECT_DOUBLE_EQ(detail::reconstruct(3, std::log(10.5)), 11.0);
  EXPECT_TRUE(std::isinf(detail::reconstruct(3, 1000.0)));
}

TEST(UcbRecursion, DetectsAlteredPlayTimes) {
  const auto env = gaussian_env({0.5});
  auto rec = run_trajectory(env, PolicyConfig::ucb(), 3000, {9, 1}, {true, true, {}});
  ASSERT_GE(rec.play_times[1].size(), 6u);
  ASSERT_TRUE(verify_ucb_recursion(rec, env, 1.0).all_first_passage());
  auto& pt = rec.play_times[1];
  // Delay the fifth play by one step where that keeps the sequence increasing.
  std::size_t idx = 4;
  while (idx + 1 < pt.size() && pt[idx] + 1 == pt[idx + 1]) ++idx;
  ASSERT_LT(idx + 1, pt.size());
  ++pt[idx];
  const auto chk = verify_ucb_recursion(rec, env, 1.0);
  EXPECT_FALSE(chk.all_first_passage());
}

TEST(UcbRecursion, InitializationOnlyIsVacuous) {
  const auto env = gaussian_env({0.5});
  const auto rec = run_trajectory(env, PolicyConfig::ucb(), 2, {1, 0}, {true, true, {}});
  const auto chk = verify_ucb_recursion(rec, env, 1.0);
  EXPECT_TRUE(chk.rows.empty());
  EXPECT_TRUE(chk.all_closed_form());
  EXPECT_TRUE(chk.all_first_passage());
}

TEST(UcbRecursion, Preconditions) {
  const auto env = gaussian_env({0.5});
  const auto ts = run_trajectory(env, PolicyConfig::ts(), 100, {1, 0}, {true, true, {}});
  EXPECT_EQ(error_kind_of([&] { verify_ucb_recursion(ts, env, 1.0); }), ErrorKind::NotUCB);
  const auto bare = run_trajectory(env, PolicyConfig::ucb(), 100, {1, 0});
  EXPECT_EQ(error_kind_of([&] { verify_ucb_recursion(bare, env, 1.0); }), ErrorKind::MissingHistory);
  const auto env3 = gaussian_env({0.3, 0.5});
  const auto rec3 = run_trajectory(env3, PolicyConfig::ucb(), 100, {1, 0}, {true, true, {}});
  EXPECT_EQ(error_kind_of([&] { verify_ucb_recursion(rec3, env3, 1.0); }), ErrorKind::NotTwoArmed);
}

// --- appendix inequalities ----------------------------------------------------------------

TEST(Appendix, MillsRatioHoldsOnTheGrid) {
  for (int i = 1; i <= 10000; ++i) {
    const double z = 0.01 + (10.0 - 0.01) * i / 10000.0;
    const auto b = mills_ratio_bounds(z);
    EXPECT_TRUE(b.lower_holds() && b.upper_holds()) << z;
  }
}

TEST(Appendix, StatedTailConstantsHoldOnlyOnAWindow) {
  // The 1/4 and 1/2 constants bracket the tail on a middle window only.
  EXPECT_TRUE(gaussian_tail_bounds(0.5).lower_holds());
  EXPECT_TRUE(gaussian_tail_bounds(1.0).upper_holds());
  EXPECT_FALSE(gaussian_tail_bounds(0.2).lower_holds());
  EXPECT_FALSE(gaussian_tail_bounds(3.0).upper_holds());
  EXPECT_EQ(error_kind_of([] { gaussian_tail_bounds(0.0); }), ErrorKind::InvalidConfig);
}

TEST(Appendix, LogSumExp) {
  const std::vector<double> a{1000.0, 1000.0};
  EXPECT_NEAR(log_sum_exp(a), 1000.0 + std::numbers::ln2, 1e-12);
  const std::vector<double> b{-1.0, 0.0, 2.5};
  EXPECT_NEAR(log_sum_exp(b), std::log(std::exp(-1.0) + 1.0 + std::exp(2.5)), 1e-14);
  EXPECT_EQ(error_kind_of([] { log_sum_exp({}); }), ErrorKind::InvalidConfig);
}

TEST(Appendix, GeometricSampler) {
  CounterStream s(31, 0, 0, StreamPurpose::Auxiliary);
  const int n = 400'000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const double g = sample_geometric(0.2, s);
    ASSERT_GE(g, 1.0);
    sum += g;
  }
  EXPECT_NEAR(sum / n, 5.0, 4 * std::sqrt(0.8) / 0.2 / std::sqrt(static_cast<double>(n)));
  EXPECT_DOUBLE_EQ(sample_geometric(1.0, s), 1.0);
  EXPECT_EQ(error_kind_of([&] { sample_geometric(0.0, s); }), ErrorKind::ZeroProbability);
}

TEST(Appendix, GeometricMaxSharesPrefixes) {
  auto log_p = [](std::uint64_t j) { return -static_cast<double>(j) / 10.0; };
  const CounterStream s(5, 0, 0, StreamPurpose::Auxiliary);
  const double a = geometric_max_statistic(100, log_p, 0.0, s);
  const double b = geometric_max_statistic(100, log_p, 0.0, s);
  EXPECT_EQ(a, b);
  EXPECT_GE(geometric_max_statistic(200, log_p, 0.0, s), a);
}
