#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "semiflow/errors.hpp"
#include "semiflow/families.hpp"
#include "semiflow/io.hpp"

using namespace semiflow;

namespace {

Trajectory ramp_to_one() { return TrajectoryBuilder({0.0}).linear_until(1.0, {0.0}, {1.0}).finish({1.0}); }

}  // namespace

TEST(BundleStore, InsertFindErase) {
  Bundle b(1, 0.25);
  EXPECT_TRUE(b.insert(Trajectory::constant({0.5})));
  EXPECT_FALSE(b.insert(Trajectory::constant({0.5})));
  EXPECT_TRUE(b.insert(ramp_to_one()));
  ASSERT_NE(b.find({0.55}), nullptr);
  EXPECT_EQ(b.find({0.55})->size(), 1u);
  EXPECT_EQ(b.find({0.8}), nullptr);
  EXPECT_EQ(b.key_count(), 2u);
  EXPECT_EQ(b.trajectory_count(), 2u);
  EXPECT_TRUE(b.erase(Trajectory::constant({0.5})));
  EXPECT_FALSE(b.erase(Trajectory::constant({0.5})));
  EXPECT_EQ(b.key_count(), 1u);
  EXPECT_THROW(b.at({0.5}), UnknownInitialPoint);
  EXPECT_THROW(b.insert(Trajectory::constant({0.0, 0.0})), DomainError);
}

TEST(BundleStore, RejectsBadHeader) {
  EXPECT_THROW(Bundle(0), DomainError);
  EXPECT_THROW(Bundle(1, 0.0), DomainError);
  EXPECT_THROW(Bundle(1, kDefaultQuantum, {1.0, 0.5}), DomainError);
  EXPECT_THROW(Bundle(1, kDefaultQuantum, {}, 2), DomainError);
  EXPECT_THROW(Bundle(1, kDefaultQuantum, {}, std::nullopt, -1.0), DomainError);
}

TEST(BundleStore, KeysRoundTrip) {
  std::mt19937_64 rng(3);
  Bundle b(3, 1.0 / 1024.0);
  for (int i = 0; i < 200; ++i) {
    Bundle::LatticeKey key(3);
    for (auto& k : key) k = static_cast<std::int64_t>(rng() % 200001) - 100000;
    EXPECT_EQ(b.quantize(b.key_point(key)), key);
  }
  const Bundle sq = gen_sqrt_ode_bundle(SqrtOdeFamily{});
  const Bundle back = io::bundle_from_json(io::parse(io::dump(io::to_json(sq))));
  EXPECT_EQ(back, sq);
  for (const auto& e : sq.entries()) EXPECT_EQ(back.quantize(e.key), sq.quantize(e.key));
}

TEST(VerifyP4, ConstantsHaveNoViolations) {
  Bundle b(2, kDefaultQuantum, {0.5, 1.0, 3.0});
  for (double v : {-1.0, 0.0, 0.5, 2.0}) b.insert(Trajectory::constant({v, -v}));
  EXPECT_TRUE(verify_P4(b).empty());
  EXPECT_TRUE(verify_P5(b).empty());
}

TEST(VerifyP4, ClosedSqrtBundle) {
  const Bundle b = gen_sqrt_ode_bundle(SqrtOdeFamily{});
  EXPECT_TRUE(verify_P4(b).empty());
  EXPECT_TRUE(verify_P5(b).empty());
}

TEST(VerifyP4, MissingShiftImageIsReported) {
  Bundle b(1, kDefaultQuantum, {1.0});
  b.insert(ramp_to_one());
  const auto v = verify_P4(b);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].property, "P4");
  EXPECT_EQ(v[0].key, Point{0.0});
  EXPECT_EQ(v[0].T, 1.0);
  EXPECT_FALSE(v[0].distance.has_value());
}

TEST(VerifyP4, DeletedShiftFromSqrtBundle) {
  Bundle b = gen_sqrt_ode_bundle(SqrtOdeFamily{});
  SqrtOdeFamily fam;
  ASSERT_TRUE(b.erase(sqrt_ode_solution(fam, 7.0)));
  const auto v = verify_P4(b);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].key, Point{0.0});
  EXPECT_EQ(v[0].T, 0.5);
  ASSERT_TRUE(v[0].distance.has_value());
  EXPECT_GT(*v[0].distance, 0.0);
}

TEST(VerifyP5, SingletonPerKeyClosed) {
  Bundle b(1, kDefaultQuantum, {1.0});
  b.insert(ramp_to_one());
  b.insert(Trajectory::constant({1.0}));
  EXPECT_TRUE(verify_P4(b).empty());
  EXPECT_TRUE(verify_P5(b).empty());
}

TEST(VerifyP5, ExactlyTheMissingContinuation) {
  Bundle b(1, kDefaultQuantum, {1.0});
  b.insert(ramp_to_one());
  b.insert(Trajectory::constant({0.0}));
  b.insert(Trajectory::constant({1.0}));
  EXPECT_TRUE(verify_P4(b).empty());
  const auto v = verify_P5(b);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].property, "P5");
  EXPECT_EQ(v[0].key, Point{0.0});
  EXPECT_EQ(v[0].T, 1.0);
  ASSERT_TRUE(v[0].distance.has_value());
  EXPECT_GT(*v[0].distance, 0.0);
}

TEST(Closure, SingleTrajectoryOneShiftTime) {
  Bundle b(1, kDefaultQuantum, {1.0});
  b.insert(ramp_to_one());
  const auto r = generate_closure(b);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.bundle.key_count(), 2u);
  EXPECT_EQ(r.bundle.at({1.0}), std::vector<Trajectory>{Trajectory::constant({1.0})});
}

TEST(Closure, AlreadyClosedIsUnchanged) {
  const Bundle b = gen_sqrt_ode_bundle(SqrtOdeFamily{});
  const auto again = generate_closure(b);
  EXPECT_TRUE(again.complete);
  EXPECT_EQ(again.bundle, b);
  const Bundle steps = gen_step_bundle({3.0, 2.0, 1.0}, {1.0, 2.0}, 4.0, {0.5, 1.0});
  EXPECT_EQ(generate_closure(steps).bundle, steps);
}

TEST(Closure, BudgetStopsEarly) {
  Bundle b(1, kDefaultQuantum, {0.5, 1.0, 1.5, 2.0}, std::nullopt, 8.0);
  b.insert(sqrt_ode_solution(SqrtOdeFamily{}, 0.0));
  b.insert(Trajectory::constant({0.0}));
  ClosureOptions opts;
  opts.max_trajectories = 5;
  EXPECT_FALSE(generate_closure(b, opts).complete);
}

TEST(Closure, HorizonIdentifiesLateStarters) {
  Bundle b(1, kDefaultQuantum, {}, std::nullopt, 2.0);
  const auto late = TrajectoryBuilder({0.0}).constant_until(3.0, {0.0}).finish({1.0});
  EXPECT_EQ(b.canonical(late), Trajectory::constant({0.0}));
  EXPECT_EQ(b.canonical(ramp_to_one()), normalized(ramp_to_one()));
}

class ClosureProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ClosureProperties, ClosedAndIdempotent) {
  std::mt19937_64 rng(GetParam());
  RandomTrajectoryOptions opts;
  opts.max_breakpoints = 2;
  opts.max_time = 2.0;
  opts.value_range = 1.0;
  Bundle seeds(1, kDefaultQuantum, {0.5, 1.0}, std::nullopt, 3.0);
  for (int i = 0; i < 3; ++i) seeds.insert(random_trajectory(rng, opts));
  ClosureOptions budget;
  budget.max_trajectories = 4000;
  const auto closed = generate_closure(seeds, budget);
  if (!closed.complete) GTEST_SKIP() << "closure budget reached";
  EXPECT_TRUE(verify_P4(closed.bundle).empty());
  EXPECT_TRUE(verify_P5(closed.bundle).empty());
  EXPECT_EQ(generate_closure(closed.bundle, budget).bundle, closed.bundle);
}

INSTANTIATE_TEST_SUITE_P(Seeds, ClosureProperties, ::testing::Range<std::uint64_t>(0, 40));
