#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace bilocal;
using namespace bilocal::testing;

// Randomized invariants; every loop is seeded so failures replay.

namespace {

CorrelationTensor rotated(const CorrelationTensor& t, const Mat3& o, const Mat3& o2) {
  return CorrelationTensor(o * t.entries() * o2);
}

}  // namespace

TEST(Properties, HorodeckiMInRange) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const double m = horodecki_m(correlation_tensor(random_density(2, 1 + static_cast<int>(s % 4), s)));
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 2.0 + 1e-9);
  }
}

TEST(Properties, BmaxCauchySchwarzAndCap) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const CorrelationTensor l = correlation_tensor(random_density(2, 1 + static_cast<int>(s % 4), derive_seed(s, 0)));
    const CorrelationTensor r = correlation_tensor(random_density(2, 1 + static_cast<int>(s % 3), derive_seed(s, 1)));
    const double b = bmax(l, r);
    EXPECT_LE(b * b, std::sqrt(horodecki_m(l) * horodecki_m(r)) + 1e-9);
    EXPECT_LE(b, std::sqrt(2.0) + 1e-9);
  }
}

TEST(Properties, BmaxSymmetricAndRotationInvariant) {
  Rng rng(99);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const CorrelationTensor l = correlation_tensor(random_density(2, 2, derive_seed(s, 0)));
    const CorrelationTensor r = correlation_tensor(random_density(2, 4, derive_seed(s, 1)));
    const double b = bmax(l, r);
    EXPECT_NEAR(bmax(r, l), b, 1e-9);
    const CorrelationTensor lr = rotated(l, random_rotation(rng), random_rotation(rng));
    const CorrelationTensor rr = rotated(r, random_rotation(rng), random_rotation(rng));
    EXPECT_NEAR(bmax(lr, rr), b, 1e-9);
  }
}

TEST(Properties, RandomSettingsStayBelowEigenvalueBound) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const BilocalScenario sc = verify::equivalence_instance(derive_seed(4242, s));
    const CorrelationTensor l = correlation_tensor(sc.rho_left), r = correlation_tensor(sc.rho_right);
    EXPECT_LE(b_closed_form(l, r, sc.settings), bmax(l, r) + 1e-9) << "seed index " << s;
  }
}

TEST(Properties, OutcomeRelabelingKeepsB) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    BilocalScenario sc = verify::equivalence_instance(derive_seed(7, s));
    const BilocalReport base = bilocal_report(behavior(sc));
    // flip all of Alice's outcomes: I -> -I, J -> -J
    for (auto& d : sc.settings.left_extreme.directions) d = -d;
    const BilocalReport flipped = bilocal_report(behavior(sc));
    EXPECT_NEAR(flipped.i, -base.i, 1e-12);
    EXPECT_NEAR(flipped.j, -base.j, 1e-12);
    EXPECT_NEAR(flipped.b, base.b, 1e-10);
  }
}

TEST(Properties, LeftRightExchange) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const BilocalScenario sc = verify::equivalence_instance(derive_seed(8, s));
    const CorrelationTensor l = correlation_tensor(sc.rho_left), r = correlation_tensor(sc.rho_right);
    BilocalSettings swapped;
    swapped.left_extreme = sc.settings.right_extreme;
    swapped.right_extreme = sc.settings.left_extreme;
    for (int y = 0; y < 2; ++y)
      swapped.middle.pairs[y] = SeparablePair{sc.settings.middle[y].right, sc.settings.middle[y].left};
    EXPECT_NEAR(b_closed_form(r.transposed(), l.transposed(), swapped), b_closed_form(l, r, sc.settings), 1e-12);
  }
}

TEST(Properties, DensityFromKetAlwaysPhysical) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const DensityMatrix rho = density_from_ket(random_pure_state(1 + static_cast<int>(s % 4), s));
    EXPECT_NO_THROW(DensityMatrix::from_matrix(rho.matrix()));
  }
}

TEST(Properties, MarginalTradeoffBounded) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const DensityMatrix rho = random_density(3, 1 << (s % 4), s);
    for (int p = 0; p < 3; ++p) EXPECT_LE(marginal_tradeoff_sum(rho, p), 2.0 + 1e-9);
  }
}

TEST(Properties, SuitesPassAtSmallCounts) {
  for (auto name : verify::kSuiteNames) {
    verify::SuiteOptions opt;
    opt.count = 20;
    opt.seed = 12;
    const verify::SuiteReport rep = verify::run_suite(std::string(name), opt);
    EXPECT_TRUE(rep.passed()) << name;
    for (const auto& c : rep.checks) EXPECT_EQ(c.evaluated > 0, true) << name << " " << c.name;
  }
}

TEST(Properties, SuiteFlagsFailingSeed) {
  verify::SuiteOptions opt;
  opt.count = 10;
  opt.tolerance = -1.0;  // impossible to meet
  const verify::SuiteReport rep = verify::run_suite("lemma", opt);
  EXPECT_FALSE(rep.passed());
  ASSERT_TRUE(rep.failing_seed().has_value());
}
