#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bilocal/correlations.hpp"
#include "bilocal/monogamy.hpp"
#include "bilocal/network.hpp"
#include "bilocal/optimize.hpp"
#include "bilocal/rng.hpp"
#include "bilocal/state.hpp"

namespace bilocal::verify {

// Randomized property suites. Instance i of a run with seed S draws all of its
// randomness from derive_seed(S, i); that instance seed is what gets reported,
// so one failure can be replayed in isolation.

/// Worst-case tracking for one property. Residuals are signed so that a value
/// above `tolerance` is a violation.
struct Check {
  std::string name;
  double tolerance = 0.0;
  double worst_residual = -INFINITY;
  std::uint64_t worst_seed = 0;
  int evaluated = 0;
  int failures = 0;
  std::optional<std::uint64_t> first_failing_seed;

  void record(double residual, std::uint64_t instance_seed) {
    ++evaluated;
    if (residual > worst_residual || evaluated == 1) {
      worst_residual = residual;
      worst_seed = instance_seed;
    }
    if (!(residual <= tolerance)) {
      ++failures;
      if (!first_failing_seed) first_failing_seed = instance_seed;
    }
  }

  bool passed() const { return failures == 0; }
};

struct SuiteReport {
  std::string suite;
  int count = 0;
  std::uint64_t seed = 0;
  std::deque<Check> checks;  // deque: add() keeps earlier references valid

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
  }

  /// First failing instance seed over all checks, in check order.
  std::optional<std::uint64_t> failing_seed() const {
    for (const Check& c : checks)
      if (c.first_failing_seed) return c.first_failing_seed;
    return std::nullopt;
  }

  const Check& check(std::string_view name) const {
    for (const Check& c : checks)
      if (c.name == name) return c;
    throw Error(ErrorCode::InvalidArgument, "no check named " + std::string(name));
  }

  Check& add(std::string name, double tolerance) {
    Check& c = checks.emplace_back();
    c.name = std::move(name);
    c.tolerance = tolerance;
    return c;
  }
};

struct SuiteOptions {
  int count = 100;
  std::uint64_t seed = 0;
  /// Overrides the suite's primary tolerance when set.
  std::optional<double> tolerance;
  /// monogamy suite: run the optimizers on the first N instances.
  int optimize_count = 0;
  OptimizerConfig optimizer{};
};

inline constexpr std::array<std::string_view, 5> kSuiteNames{"lemma", "marginal", "monogamy", "equivalence",
                                                            "horodecki"};

inline bool is_suite(std::string_view name) {
  return std::find(kSuiteNames.begin(), kSuiteNames.end(), name) != kSuiteNames.end();
}

/// Mixed three-qubit source pair used by the monogamy suite.
inline FourPartyNetwork monogamy_instance(std::uint64_t instance_seed) {
  return FourPartyNetwork(random_density(3, 4, derive_seed(instance_seed, 0)),
                          random_density(3, 4, derive_seed(instance_seed, 1)));
}

/// Random two-qubit sources and settings used by the equivalence suite.
inline BilocalScenario equivalence_instance(std::uint64_t instance_seed) {
  Rng rng(derive_seed(instance_seed, 2));
  const int rank_left = 1 + static_cast<int>(rng.next_u64() % 4);
  const int rank_right = 1 + static_cast<int>(rng.next_u64() % 4);
  const SettingsVector s = SettingsVector::random(8, rng);
  return BilocalScenario{random_density(2, rank_left, derive_seed(instance_seed, 0)),
                         random_density(2, rank_right, derive_seed(instance_seed, 1)), decode_bilocal(s)};
}

inline SuiteReport lemma_suite(const SuiteOptions& opt) {
  SuiteReport rep{"lemma", opt.count, opt.seed, {}};
  Check& cap = rep.add("bmax <= sqrt(2)", opt.tolerance.value_or(1e-9));
  Check& cs = rep.add("bmax^2 <= sqrt(M_left M_right)", 1e-9);
  for (int i = 0; i < opt.count; ++i) {
    const std::uint64_t s = derive_seed(opt.seed, static_cast<std::uint64_t>(i));
    const GramEigs left = gram_eigs(correlation_tensor(random_density(2, 4, derive_seed(s, 0))));
    const GramEigs right = gram_eigs(correlation_tensor(random_density(2, 4, derive_seed(s, 1))));
    cap.record(bmax(left, right) - std::numbers::sqrt2, s);
    cs.record(bmax_squared(left, right) - std::sqrt(horodecki_m(left) * horodecki_m(right)), s);
  }
  return rep;
}

inline SuiteReport marginal_suite(const SuiteOptions& opt) {
  SuiteReport rep{"marginal", opt.count, opt.seed, {}};
  Check& bound = rep.add("marginal trade-off sum <= 2", opt.tolerance.value_or(1e-9));
  constexpr std::array<int, 4> kRanks{1, 2, 4, 8};
  for (int i = 0; i < opt.count; ++i) {
    const std::uint64_t s = derive_seed(opt.seed, static_cast<std::uint64_t>(i));
    const DensityMatrix rho = random_density(3, kRanks[static_cast<std::size_t>(i) % kRanks.size()], s);
    double worst = -INFINITY;
    for (int pivot = 0; pivot < 3; ++pivot) worst = std::max(worst, marginal_tradeoff_sum(rho, pivot) - 2.0);
    bound.record(worst, s);
  }
  return rep;
}

inline SuiteReport monogamy_suite(const SuiteOptions& opt) {
  SuiteReport rep{"monogamy", opt.count, opt.seed, {}};
  const double tol = opt.tolerance.value_or(1e-9);
  Check& bound = rep.add("tradeoff_lhs <= 2", tol);
  Check& amgm = rep.add("tradeoff_lhs <= amgm_bound", tol);
  Check& amgm_cap = rep.add("amgm_bound <= 2", tol);
  Check& exclusion = rep.add("exclusion: one network nonbilocal => other <= 1", tol);
  const bool optimize = opt.optimize_count > 0;
  Check* shared_free = optimize ? &rep.add("maximize_shared <= maximize_free", 1e-6) : nullptr;
  Check* free_eq8 = optimize ? &rep.add("maximize_free <= tradeoff_lhs", 1e-6) : nullptr;
  Check* free_cs = optimize ? &rep.add("maximize_free <= cauchy_schwarz_bound", 1e-6) : nullptr;
  Check* cs_amgm = optimize ? &rep.add("cauchy_schwarz_bound <= amgm_bound", 1e-9) : nullptr;
  Check* sanity = optimize ? &rep.add("optimal behaviors normalized and non-signaling", 1e-10) : nullptr;
  Check* replay = optimize ? &rep.add("optimal behaviors reproduce closed-form B", 1e-10) : nullptr;

  for (int i = 0; i < opt.count; ++i) {
    const std::uint64_t s = derive_seed(opt.seed, static_cast<std::uint64_t>(i));
    const FourPartyNetwork net = monogamy_instance(s);
    const MonogamyReport r = monogamy_report(net, tol);
    bound.record(r.tradeoff_lhs - 2.0, s);
    amgm.record(r.tradeoff_lhs - r.amgm_bound, s);
    amgm_cap.record(r.amgm_bound - 2.0, s);
    double excl = -INFINITY;
    if (r.bmaxsq_b > 1.0) excl = std::max(excl, r.bmaxsq_c - 1.0);
    if (r.bmaxsq_c > 1.0) excl = std::max(excl, r.bmaxsq_b - 1.0);
    exclusion.record(std::isfinite(excl) ? excl : -1.0, s);

    if (i >= opt.optimize_count) continue;
    OptimizerConfig cfg = opt.optimizer;
    cfg.seed = derive_seed(s, 3);
    const OptimizationResult shared = maximize_shared(net, cfg);
    const FreeResult free = maximize_free(net, cfg);
    shared_free->record(shared.value - free.lhs, s);
    free_eq8->record(free.lhs - r.tradeoff_lhs, s);
    free_cs->record(free.lhs - r.cauchy_schwarz_bound, s);
    cs_amgm->record(r.cauchy_schwarz_bound - r.amgm_bound, s);

    // rebuild the optimal behaviors from the reduced states
    double worst_sanity = 0.0;
    double worst_replay = 0.0;
    const std::array<ReducedNetwork, 2> which{ReducedNetwork::NB, ReducedNetwork::NC};
    const auto shared_settings = decode_shared(shared.settings);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto states = reduced_states(net, which[k]);
      const CorrelationTensor tl = correlation_tensor(states[0]);
      const CorrelationTensor tr = correlation_tensor(states[1]);
      for (const BilocalSettings& st : {shared_settings[k], decode_bilocal(free.runs[k].settings)}) {
        const Behavior beh = behavior(BilocalScenario{states[0], states[1], st});
        worst_sanity = std::max({worst_sanity, beh.normalization_residual(), beh.no_signaling_residual(),
                                 beh.range_residual()});
        worst_replay = std::max(worst_replay, std::abs(bilocal_report(beh).b - b_closed_form(tl, tr, st)));
      }
    }
    sanity->record(worst_sanity, s);
    replay->record(worst_replay, s);
  }
  return rep;
}

inline SuiteReport equivalence_suite(const SuiteOptions& opt) {
  SuiteReport rep{"equivalence", opt.count, opt.seed, {}};
  Check& eq = rep.add("|b_closed_form - behavior B|", opt.tolerance.value_or(1e-10));
  Check& sanity = rep.add("behavior normalized and non-signaling", 1e-10);
  Check& bound = rep.add("B <= bmax", 1e-9);
  for (int i = 0; i < opt.count; ++i) {
    const std::uint64_t s = derive_seed(opt.seed, static_cast<std::uint64_t>(i));
    const BilocalScenario sc = equivalence_instance(s);
    const CorrelationTensor tl = correlation_tensor(sc.rho_left);
    const CorrelationTensor tr = correlation_tensor(sc.rho_right);
    const Behavior beh = behavior(sc);
    const double closed = b_closed_form(tl, tr, sc.settings);
    eq.record(std::abs(closed - bilocal_report(beh).b), s);
    sanity.record(std::max({beh.normalization_residual(), beh.no_signaling_residual(), beh.range_residual()}), s);
    bound.record(closed - bmax(tl, tr), s);
  }
  return rep;
}

inline SuiteReport horodecki_suite(const SuiteOptions& opt) {
  SuiteReport rep{"horodecki", opt.count, opt.seed, {}};
  Check& agree = rep.add("|maximize_chsh - 2 sqrt(M)|", opt.tolerance.value_or(1e-3));
  for (int i = 0; i < opt.count; ++i) {
    const std::uint64_t s = derive_seed(opt.seed, static_cast<std::uint64_t>(i));
    const CorrelationTensor t = correlation_tensor(random_density(2, 1 + i % 4, s));
    OptimizerConfig cfg = opt.optimizer;
    cfg.seed = derive_seed(s, 3);
    agree.record(std::abs(maximize_chsh(t, cfg).value - max_chsh_value(t)), s);
  }
  return rep;
}

inline SuiteReport run_suite(std::string_view name, const SuiteOptions& opt) {
  if (opt.count < 1) throw Error(ErrorCode::InvalidArgument, "suite count must be positive");
  if (name == "lemma") return lemma_suite(opt);
  if (name == "marginal") return marginal_suite(opt);
  if (name == "monogamy") return monogamy_suite(opt);
  if (name == "equivalence") return equivalence_suite(opt);
  if (name == "horodecki") return horodecki_suite(opt);
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + std::string(name) + "'");
}

}  // namespace bilocal::verify
