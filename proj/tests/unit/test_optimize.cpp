#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace bilocal;
using namespace bilocal::testing;

namespace {

OptimizerConfig config(std::uint64_t seed = 1, int restarts = 16) {
  OptimizerConfig cfg;
  cfg.seed = seed;
  cfg.restarts = restarts;
  return cfg;
}

}  // namespace

TEST(NelderMead, FindsQuadraticMaximum) {
  auto f = [](const std::vector<double>& x) { return -(x[0] - 1) * (x[0] - 1) - 2 * (x[1] + 0.5) * (x[1] + 0.5); };
  const NelderMeadResult r = nelder_mead_maximize(f, std::vector<double>{0, 0}, NelderMeadOptions{});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], -0.5, 1e-6);
}

TEST(MaximizeB, BellSourcesReachSqrtTwo) {
  const OptimizationResult r = maximize_b(bell(), bell(), config());
  EXPECT_NEAR(r.value, std::sqrt(2.0), 1e-4);
  const BilocalReport rep = bilocal_report(behavior({bell(), bell(), decode_bilocal(r.settings)}));
  EXPECT_NEAR(rep.b, r.value, 1e-10);
}

TEST(MaximizeB, ProductSourcesReachOne) {
  EXPECT_NEAR(maximize_b(product00(), product00(), config()).value, 1.0, 1e-4);
}

TEST(MaximizeB, MaximallyMixedSourceGivesZero) {
  EXPECT_NEAR(maximize_b(bell(), DensityMatrix::maximally_mixed(2), config()).value, 0.0, 1e-6);
}

TEST(MaximizeB, Deterministic) {
  const DensityMatrix l = random_density(2, 3, 5), r = random_density(2, 2, 6);
  OptimizerConfig a = config(9), b = config(9);
  b.parallel = false;
  const OptimizationResult x = maximize_b(l, r, a), y = maximize_b(l, r, b), z = maximize_b(l, r, a);
  EXPECT_EQ(x.value, y.value);
  EXPECT_EQ(x.value, z.value);
  EXPECT_EQ(x.settings.angles, y.settings.angles);
  EXPECT_EQ(x.best_restart, y.best_restart);
}

TEST(MaximizeB, NegatingADirectionLeavesOptimumUnchanged) {
  const CorrelationTensor tl = correlation_tensor(random_density(2, 2, 31));
  const CorrelationTensor tr = correlation_tensor(random_density(2, 1, 32));
  const double base = maximize_b(tl, tr, config(3, 32)).value;
  for (std::size_t k : {std::size_t{0}, std::size_t{3}, std::size_t{7}}) {
    auto flip = [k](SettingsVector s) {
      s.set_direction(k, -s.direction(k).components());
      return s;
    };
    auto objective = [&](const SettingsVector& s) { return b_closed_form(tl, tr, decode_bilocal(flip(s))); };
    auto respond = [&](SettingsVector s) {
      s = flip(s);
      detail::best_middle(s, 0, 2, 6, tl, tr);
      return flip(s);
    };
    const double flipped = detail::multistart(config(4, 32), 8, objective, respond).value;
    EXPECT_NEAR(flipped, base, 1e-6) << "direction " << k;
  }
}

TEST(MaximizeChsh, Examples) {
  EXPECT_NEAR(maximize_chsh(bell(), config()).value, 2.0 * std::sqrt(2.0), 1e-3);
  EXPECT_NEAR(maximize_chsh(product00(), config()).value, 2.0, 1e-3);
  EXPECT_NEAR(maximize_chsh(DensityMatrix::maximally_mixed(2), config()).value, 0.0, 1e-6);
}

TEST(MaximizeChsh, AgreesWithHorodecki) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix rho = random_density(2, 1 + static_cast<int>(s % 4), derive_seed(123, s));
    const double want = max_chsh_value(correlation_tensor(rho));
    EXPECT_NEAR(maximize_chsh(rho, config(s)).value, want, 1e-3);
  }
}

TEST(MaximizeShared, Examples) {
  EXPECT_NEAR(maximize_shared(tightness_network(kPi / 4), config()).value, 2.0, 1e-3);
  const DensityMatrix mm = DensityMatrix::maximally_mixed(3);
  EXPECT_NEAR(maximize_shared(FourPartyNetwork(mm, mm), config()).value, 0.0, 1e-9);
  EXPECT_NEAR(maximize_shared(FourPartyNetwork(ghz3(), ghz3()), config()).value, 2.0, 1e-3);
}

TEST(MaximizeFree, Examples) {
  const FreeResult w = maximize_free(tightness_network(kPi / 4), config());
  EXPECT_NEAR(w.lhs, 2.0, 1e-3);
  EXPECT_NEAR(w.lhs, maximize_shared(tightness_network(kPi / 4), config()).value, 1e-3);
  const FreeResult g = maximize_free(FourPartyNetwork(ghz3(), ghz3()), config());
  EXPECT_NEAR(g.lhs, 2.0, 1e-3);
  EXPECT_NEAR(g.per_network[0], 1.0, 1e-3);
}

TEST(MaximizeFree, RandomPairStaysBelowTwo) {
  const FreeResult r = maximize_free(verify::monogamy_instance(17), config());
  EXPECT_LE(r.lhs, 2.0 + 1e-6);
}

TEST(MaximizeFree, BoundedByCauchySchwarzAndShared) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const FourPartyNetwork net = verify::monogamy_instance(derive_seed(55, s));
    const MonogamyReport rep = monogamy_report(net);
    const FreeResult f = maximize_free(net, config(s));
    const double shared = maximize_shared(net, config(s)).value;
    EXPECT_LE(shared, f.lhs + 1e-6);
    EXPECT_LE(f.lhs, rep.cauchy_schwarz_bound + 1e-6);
  }
}

TEST(MaximizeB, ExceedsEigenvalueBoundForMisalignedSpectra) {
  // Bell source against a classically correlated one: the eigenvalue bound is
  // 1, but settings exist with B = 2^(1/4)
  const std::vector<double> d{0.5, 0, 0, 0.5};
  const DensityMatrix classical = DensityMatrix::from_matrix(ComplexMatrix::diagonal(d));
  const CorrelationTensor tl = correlation_tensor(bell()), tr = correlation_tensor(classical);
  EXPECT_NEAR(bmax(tl, tr), 1.0, 1e-14);
  const double h = 1.0 / std::sqrt(2.0);
  const BilocalSettings s{ProjectiveSetting{{BlochVector::x(), BlochVector::z()}},
                          SeparableSetting{{SeparablePair{BlochVector(Vec3{h, 0, h}), BlochVector::z()},
                                            SeparablePair{BlochVector(Vec3{h, 0, -h}), BlochVector::z()}}},
                          ProjectiveSetting{{BlochVector::z(), BlochVector::x()}}};
  const double want = std::pow(2.0, 0.25);
  EXPECT_NEAR(b_closed_form(tl, tr, s), want, 1e-14);
  EXPECT_NEAR(bilocal_report(behavior({bell(), classical, s})).b, want, 1e-12);
  EXPECT_NEAR(maximize_b(tl, tr, config()).value, want, 1e-4);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(maximize_b(bell(), bell(), cfg), Error);
}
