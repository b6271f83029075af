#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "semiflow/errors.hpp"
#include "semiflow/families.hpp"

using namespace semiflow;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST(SqrtOde, ValueAtTwo) {
  const SqrtOdeFamily fam;
  EXPECT_EQ(sqrt_ode_exact(fam, 0.0, 2.0), 1.0);
  EXPECT_EQ(sqrt_ode_solution(fam, 0.0).eval(2.0, 0), 1.0);
  // Started off the zero branch, where explicit integration is unambiguous.
  const double rk = oracle::integrate_power_ode(0.5, 1.0, 0.5, sqrt_ode_exact(fam, 0.0, 0.5), 2.0, 20000);
  EXPECT_NEAR(rk, 1.0, 1e-12);
}

TEST(SqrtOde, InfiniteWaitIsZero) {
  EXPECT_EQ(sqrt_ode_solution(SqrtOdeFamily{}, kInf), Trajectory::constant({0.0}));
}

TEST(SqrtOde, ExactAgreesWithIntegration) {
  for (double alpha : {0.25, 0.5, 0.75}) {
    for (double c : {0.5, 2.0}) {
      SqrtOdeFamily fam;
      fam.alpha = alpha;
      fam.c = c;
      const double x1 = sqrt_ode_exact(fam, 0.0, 1.0);
      for (double t : {1.5, 3.0, 6.0}) {
        const double rk = oracle::integrate_power_ode(alpha, c, 1.0, x1, t, 40000);
        EXPECT_NEAR(sqrt_ode_exact(fam, 0.0, t), rk, 1e-9 * std::max(1.0, rk));
      }
    }
  }
}

TEST(SqrtOde, TranslationStructure) {
  const SqrtOdeFamily fam;
  const auto x0 = sqrt_ode_solution(fam, 0.0);
  for (double s : {1.0, 2.0, 0.5}) {
    const auto xs = sqrt_ode_solution(fam, s);
    for (int i = 0; i <= 64 * 8; ++i) {
      const double t = i / 64.0;
      if (t < s) {
        EXPECT_EQ(xs.eval(t, 0), 0.0);
      } else {
        EXPECT_EQ(xs.eval(t, 0), x0.eval(t - s, 0)) << "s=" << s << " t=" << t;
      }
    }
  }
}

TEST(SqrtOde, NonNegativeNonDecreasing) {
  const SqrtOdeFamily fam;
  for (double s : fam.waiting_times) {
    const auto xs = sqrt_ode_solution(fam, s);
    EXPECT_TRUE(is_nondecreasing(xs, 20.0));
    EXPECT_GE(xs.initial_value()[0], 0.0);
  }
}

TEST(SqrtOde, ResidualIsFirstOrder) {
  for (double alpha : {0.25, 0.5, 0.75}) {
    for (double c : {1.0, 2.0}) {
      for (std::size_t per_unit : {8u, 16u, 64u}) {
        SqrtOdeFamily fam;
        fam.alpha = alpha;
        fam.c = c;
        fam.samples_per_unit = per_unit;
        const double h = 1.0 / static_cast<double>(per_unit);
        // |x''| / 2 bounds the slope error of each chord; x'' = alpha c^2 x^(2 alpha - 1).
        double curvature = 0.0;
        for (double t : {1.0, fam.horizon}) {
          const double x = sqrt_ode_exact(fam, 0.0, t);
          curvature = std::max(curvature, alpha * c * c * std::pow(x, 2 * alpha - 1));
        }
        const auto xs = sqrt_ode_solution(fam, 0.0);
        const auto& bp = xs.breakpoints();
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
          if (bp[i] < 1.0) continue;
          const double slope = (xs.eval(bp[i + 1], 0) - xs.eval(bp[i], 0)) / (bp[i + 1] - bp[i]);
          const double residual = std::abs(slope - c * std::pow(xs.eval(bp[i], 0), alpha));
          EXPECT_LE(residual, 0.5 * curvature * h * (1 + 1e-9)) << alpha << " " << c << " " << bp[i];
        }
      }
    }
  }
}

TEST(SqrtOde, OrderedByWaitingTime) {
  const SqrtOdeFamily fam;
  const std::vector<double> waits{0.0, 0.5, 1.0, 2.0, 3.5, kInf};
  for (std::size_t a = 0; a + 1 < waits.size(); ++a) {
    const auto early = sqrt_ode_solution(fam, waits[a]);
    const auto late = sqrt_ode_solution(fam, waits[a + 1]);
    for (int i = 0; i <= 16 * 8; ++i) EXPECT_GE(early.eval(i / 16.0, 0), late.eval(i / 16.0, 0));
  }
}

TEST(SqrtOde, RejectsBadFamily) {
  SqrtOdeFamily fam;
  fam.alpha = 1.0;
  EXPECT_THROW(gen_sqrt_ode_bundle(fam), DomainError);
  fam = {};
  fam.waiting_times.clear();
  EXPECT_THROW(gen_sqrt_ode_bundle(fam), DomainError);
  fam = {};
  fam.c = -1.0;
  EXPECT_THROW(sqrt_ode_solution(fam, 0.0), DomainError);
}

TEST(SqrtOdeBundle, ClosedAndVerified) {
  const Bundle b = gen_sqrt_ode_bundle(SqrtOdeFamily{});
  EXPECT_EQ(b.dim(), 1u);
  EXPECT_EQ(b.horizon(), 8.0);
  EXPECT_TRUE(verify_P4(b).empty());
  EXPECT_TRUE(verify_P5(b).empty());
  for (double s : {0.0, 1.0, 2.0, kInf}) {
    const auto& zero_key = b.at({0.0});
    EXPECT_NE(std::find(zero_key.begin(), zero_key.end(), sqrt_ode_solution(SqrtOdeFamily{}, s)), zero_key.end()) << s;
  }
}

TEST(SqrtOdeBundle, ClosureOnIntegerGridMatchesShiftedFamily) {
  SqrtOdeFamily fam;
  fam.time_grid = {1.0, 2.0};
  const Bundle b = gen_sqrt_ode_bundle(fam);
  // Waiting times close under +1 until the start passes the horizon.
  std::vector<Trajectory> expected_zero;
  for (int s = 0; s < 8; ++s) expected_zero.push_back(normalized(sqrt_ode_solution(fam, s)));
  expected_zero.push_back(Trajectory::constant({0.0}));
  auto zero_key = b.at({0.0});
  ASSERT_EQ(zero_key.size(), expected_zero.size());
  for (const auto& phi : expected_zero) EXPECT_NE(std::find(zero_key.begin(), zero_key.end(), phi), zero_key.end());

  EXPECT_EQ(b.key_count(), 9u);
  const auto x0 = sqrt_ode_solution(fam, 0.0);
  for (int n = 1; n <= 8; ++n) {
    const double key = n * n / 4.0;
    const auto& at = b.at({key});
    ASSERT_EQ(at.size(), 1u) << key;
    EXPECT_EQ(at[0], normalized(shift(x0, n)));
  }
}

TEST(StepFamily, Examples) {
  const auto single = gen_step_family({1.0, 0.0}, {1.0}, 4.0);
  ASSERT_EQ(single.size(), 2u);
  EXPECT_EQ(single[0], Trajectory::constant({1.0}));
  EXPECT_EQ(disc_set(single[1], 4.0), std::vector<double>{1.0});

  const auto two = gen_step_family({3.0, 2.0, 1.0}, {1.0, 2.0}, 4.0);
  ASSERT_EQ(two.size(), 3u);
  EXPECT_TRUE(is_nonincreasing(two[2], 4.0));
  EXPECT_EQ(disc_set(two[2], 4.0), (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(two[2].eval(1.0, 0), 3.0);
  EXPECT_EQ(two[2].right_limit(1.0, 0), 2.0);

  const auto flat = gen_step_family({2.0}, {}, 4.0);
  ASSERT_EQ(flat.size(), 1u);
  EXPECT_EQ(flat[0], Trajectory::constant({2.0}));
}

TEST(StepFamily, RejectsBadProfiles) {
  EXPECT_THROW(step_function({1.0, 2.0}, {1.0}, 4.0), DomainError);
  EXPECT_THROW(step_function({1.0, 0.0}, {5.0}, 4.0), DomainError);
  EXPECT_THROW(step_function({1.0, 0.0}, {0.0}, 4.0), DomainError);
  EXPECT_THROW(step_function({2.0, 1.0, 0.0}, {2.0, 1.0}, 4.0), DomainError);
  EXPECT_THROW(step_function({1.0}, {1.0}, 4.0), DomainError);
}

TEST(StepFamily, ClosedBundlePasses) {
  const Bundle b = gen_step_bundle({3.0, 2.0, 1.0}, {1.0, 2.0}, 4.0, {0.5, 1.0});
  EXPECT_EQ(b.trajectory_count(), 91u);
  EXPECT_TRUE(verify_P4(b).empty());
  EXPECT_TRUE(verify_P5(b).empty());
}

TEST(RandomTrajectory, DeterministicAndOnGrid) {
  std::mt19937_64 a(99);
  std::mt19937_64 b(99);
  RandomTrajectoryOptions opts;
  opts.dim = 3;
  for (int i = 0; i < 50; ++i) {
    const auto phi = random_trajectory(a, opts);
    EXPECT_EQ(phi, random_trajectory(b, opts));
    EXPECT_LE(phi.breakpoints().size(), opts.max_breakpoints + 1);
    for (double t : phi.breakpoints()) {
      EXPECT_EQ(t * 16.0, std::floor(t * 16.0));
      EXPECT_LE(t, opts.max_time);
    }
    for (double v : phi.tail()) {
      EXPECT_EQ(v * 64.0, std::floor(v * 64.0));
      EXPECT_LE(std::abs(v), opts.value_range);
    }
  }
}
