#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

#include "bilocal/correlations.hpp"
#include "bilocal/monogamy.hpp"
#include "bilocal/nelder_mead.hpp"
#include "bilocal/network.hpp"
#include "bilocal/rng.hpp"
#include "bilocal/vec3.hpp"

namespace bilocal {

struct OptimizerConfig {
  int restarts = 32;
  std::uint64_t seed = 0;
  int max_iterations = 2000;  // Nelder-Mead iterations per restart
  double convergence_tol = 1e-9;
  double initial_step = 0.5;
  bool parallel = true;
  bool verbose = false;  // keep per-restart traces

  void validate() const {
    if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "optimizer needs at least one restart");
    if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "optimizer needs a positive iteration budget");
    if (!(convergence_tol > 0.0) || !(initial_step > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "optimizer tolerances must be positive");
    }
  }
};

/// Flat list of (theta, phi) pairs, one per Bloch vector.
///
/// Layouts:
///   bilocal (8 vectors):  a0 a1 | m0.left m0.right m1.left m1.right | c0 c1
///   chsh (4 vectors):     a0 a1 | b0 b1
///   shared (12 vectors):  alpha0 alpha1 | beta0^A beta0^D beta1^A beta1^D |
///                         gamma0^A gamma0^D gamma1^A gamma1^D | delta0 delta1
struct SettingsVector {
  std::vector<double> angles;

  std::size_t size() const noexcept { return angles.size() / 2; }

  BlochVector direction(std::size_t k) const { return BlochVector::from_angles(angles[2 * k], angles[2 * k + 1]); }

  void set_direction(std::size_t k, const Vec3& v) {
    const Vec3 u = (1.0 / norm(v)) * v;
    angles[2 * k] = std::acos(std::clamp(u[2], -1.0, 1.0));
    double phi = std::atan2(u[1], u[0]);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    angles[2 * k + 1] = phi;
  }

  /// Same directions with theta in [0, pi] and phi in [0, 2 pi).
  SettingsVector canonical() const {
    SettingsVector out = *this;
    for (std::size_t k = 0; k < size(); ++k) out.set_direction(k, direction(k).components());
    return out;
  }

  static SettingsVector random(std::size_t vectors, Rng& rng) {
    SettingsVector s{std::vector<double>(2 * vectors)};
    for (std::size_t k = 0; k < vectors; ++k) {
      Vec3 g{};
      do {
        g = {rng.normal(), rng.normal(), rng.normal()};
      } while (norm(g) < 1e-8);
      s.set_direction(k, g);
    }
    return s;
  }
};

inline BilocalSettings decode_bilocal(const SettingsVector& s, std::size_t offset = 0) {
  auto d = [&](std::size_t k) { return s.direction(offset + k); };
  return BilocalSettings{ProjectiveSetting{{d(0), d(1)}},
                         SeparableSetting{{SeparablePair{d(2), d(3)}, SeparablePair{d(4), d(5)}}},
                         ProjectiveSetting{{d(6), d(7)}}};
}

/// The two reduced-network settings carried by a shared layout.
inline std::array<BilocalSettings, 2> decode_shared(const SettingsVector& s) {
  auto d = [&](std::size_t k) { return s.direction(k); };
  const ProjectiveSetting alice{{d(0), d(1)}};
  const ProjectiveSetting dick{{d(10), d(11)}};
  return {BilocalSettings{alice, SeparableSetting{{SeparablePair{d(2), d(3)}, SeparablePair{d(4), d(5)}}}, dick},
          BilocalSettings{alice, SeparableSetting{{SeparablePair{d(6), d(7)}, SeparablePair{d(8), d(9)}}}, dick}};
}

struct RestartTrace {
  int restart = 0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct OptimizationResult {
  double value = 0.0;
  SettingsVector settings;
  int best_restart = 0;
  /// Some restart stopped on the iteration budget rather than the simplex tolerance.
  bool iterations_exhausted = false;
  std::vector<RestartTrace> traces;  // filled only when cfg.verbose
};

namespace detail {

struct RestartOutcome {
  double value = -INFINITY;
  SettingsVector settings;
  int iterations = 0;
  bool converged = false;
};

// Multi-start driver. Each restart draws its start from its own stream
// derive_seed(cfg.seed, restart); the winner is the largest value, ties going
// to the lowest restart index, so the result does not depend on scheduling.
template <class Objective, class BestResponse>
OptimizationResult multistart(const OptimizerConfig& cfg, std::size_t vectors, Objective&& objective,
                              BestResponse&& best_response) {
  cfg.validate();
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));

  auto run_one = [&](int restart) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(restart));
    SettingsVector x = SettingsVector::random(vectors, rng);
    auto f = [&](const std::vector<double>& angles) { return objective(SettingsVector{angles}); };

    RestartOutcome out;
    int budget = cfg.max_iterations;
    // alternate simplex search with the closed-form best response of the
    // middle parties until neither improves the value
    for (int round = 0; round < 8 && budget > 0; ++round) {
      NelderMeadOptions nm{cfg.initial_step, budget, cfg.convergence_tol};
      const NelderMeadResult r = nelder_mead_maximize(f, x.angles, nm);
      budget -= r.iterations;
      out.iterations += r.iterations;
      out.converged = r.converged;
      const bool improved = r.value > out.value + cfg.convergence_tol;
      if (r.value > out.value) {
        out.value = r.value;
        out.settings = SettingsVector{r.x};
      }
      SettingsVector polished = best_response(out.settings);
      const double pv = objective(polished);
      if (pv > out.value) {
        out.value = pv;
        out.settings = polished;
      } else if (!improved && round > 0) {
        break;
      }
      x = out.settings;
    }
    outcomes[static_cast<std::size_t>(restart)] = std::move(out);
  };

  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const unsigned workers = cfg.parallel ? std::min<unsigned>(hw, static_cast<unsigned>(cfg.restarts)) : 1U;
  if (workers <= 1) {
    for (int r = 0; r < cfg.restarts; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next++; r < cfg.restarts; r = next++) run_one(r);
      });
    }
  }

  OptimizationResult result;
  result.value = -INFINITY;
  for (int r = 0; r < cfg.restarts; ++r) {
    const RestartOutcome& o = outcomes[static_cast<std::size_t>(r)];
    if (o.value > result.value) {
      result.value = o.value;
      result.settings = o.settings.canonical();
      result.best_restart = r;
    }
    if (!o.converged) result.iterations_exhausted = true;
    if (cfg.verbose) result.traces.push_back({r, o.value, o.iterations, o.converged});
  }
  return result;
}

// Unit vector along t, or `fallback` when t vanishes.
inline Vec3 direction_or(const Vec3& t, const Vec3& fallback) {
  const double n = norm(t);
  return n > 1e-300 ? (1.0 / n) * t : fallback;
}

// Optimal middle-party pairs for fixed extreme settings: for each input i the
// left vector aligns with T_L^T (a0 +- a1) and the right one with T_R (c0 +- c1).
inline void best_middle(SettingsVector& s, std::size_t alice, std::size_t middle, std::size_t dick,
                        const CorrelationTensor& t_left, const CorrelationTensor& t_right) {
  const Vec3 a0 = s.direction(alice).components();
  const Vec3 a1 = s.direction(alice + 1).components();
  const Vec3 c0 = s.direction(dick).components();
  const Vec3 c1 = s.direction(dick + 1).components();
  for (int i = 0; i < 2; ++i) {
    const double sign = i == 0 ? 1.0 : -1.0;
    const std::size_t left = middle + 2 * static_cast<std::size_t>(i);
    const Vec3 u = mat_tvec(t_left.entries(), a0 + sign * a1);
    const Vec3 w = mat_vec(t_right.entries(), c0 + sign * c1);
    s.set_direction(left, direction_or(u, s.direction(left).components()));
    s.set_direction(left + 1, direction_or(w, s.direction(left + 1).components()));
  }
}

}  // namespace detail

/// Maximizes the closed-form bilocality parameter over all 16 angles of the
/// three parties' settings.
inline OptimizationResult maximize_b(const CorrelationTensor& t_left, const CorrelationTensor& t_right,
                                     const OptimizerConfig& cfg = {}) {
  auto objective = [&](const SettingsVector& s) { return b_closed_form(t_left, t_right, decode_bilocal(s)); };
  auto respond = [&](SettingsVector s) {
    detail::best_middle(s, 0, 2, 6, t_left, t_right);
    return s;
  };
  return detail::multistart(cfg, 8, objective, respond);
}

inline OptimizationResult maximize_b(const DensityMatrix& rho_left, const DensityMatrix& rho_right,
                                     const OptimizerConfig& cfg = {}) {
  return maximize_b(correlation_tensor(rho_left), correlation_tensor(rho_right), cfg);
}

/// <CHSH> = a0.T(b0 + b1) + a1.T(b0 - b1) for directions laid out as a0 a1 b0 b1.
inline double chsh_value(const CorrelationTensor& t, const SettingsVector& s) {
  const Vec3 a0 = s.direction(0).components();
  const Vec3 a1 = s.direction(1).components();
  const Vec3 b0 = s.direction(2).components();
  const Vec3 b1 = s.direction(3).components();
  return bilinear(a0, t.entries(), b0 + b1) + bilinear(a1, t.entries(), b0 - b1);
}

/// Largest CHSH expectation over the four measurement directions.
inline OptimizationResult maximize_chsh(const CorrelationTensor& t, const OptimizerConfig& cfg = {}) {
  auto objective = [&](const SettingsVector& s) { return chsh_value(t, s); };
  auto respond = [&](SettingsVector s) {
    const Vec3 a0 = s.direction(0).components();
    const Vec3 a1 = s.direction(1).components();
    s.set_direction(2, detail::direction_or(mat_tvec(t.entries(), a0 + a1), s.direction(2).components()));
    s.set_direction(3, detail::direction_or(mat_tvec(t.entries(), a0 - a1), s.direction(3).components()));
    return s;
  };
  OptimizationResult r = detail::multistart(cfg, 4, objective, respond);
  r.value = std::max(r.value, 0.0);
  return r;
}

inline OptimizationResult maximize_chsh(const DensityMatrix& rho, const OptimizerConfig& cfg = {}) {
  return maximize_chsh(correlation_tensor(rho), cfg);
}

/// Per-network bilocality parameters for a shared settings vector.
inline std::array<double, 2> shared_parameters(const ReducedTensors& nb, const ReducedTensors& nc,
                                               const SettingsVector& s) {
  const auto settings = decode_shared(s);
  return {b_closed_form(nb.near, nb.far, settings[0]), b_closed_form(nc.near, nc.far, settings[1])};
}

/// max (B^B)^2 + (B^C)^2 with Alice's and Dick's settings common to both
/// reduced networks and independent middle parties.
inline OptimizationResult maximize_shared(const FourPartyNetwork& net, const OptimizerConfig& cfg = {}) {
  const ReducedTensors nb = reduced_tensors(net, ReducedNetwork::NB);
  const ReducedTensors nc = reduced_tensors(net, ReducedNetwork::NC);
  auto objective = [&](const SettingsVector& s) {
    const auto b = shared_parameters(nb, nc, s);
    return b[0] * b[0] + b[1] * b[1];
  };
  auto respond = [&](SettingsVector s) {
    detail::best_middle(s, 0, 2, 10, nb.near, nb.far);
    detail::best_middle(s, 0, 6, 10, nc.near, nc.far);
    return s;
  };
  return detail::multistart(cfg, 12, objective, respond);
}

struct FreeResult {
  double lhs = 0.0;
  std::array<double, 2> per_network{};  // optimal B for N_B and N_C
  std::array<OptimizationResult, 2> runs;
};

/// Nodal settings optimized separately in each reduced network.
inline FreeResult maximize_free(const FourPartyNetwork& net, const OptimizerConfig& cfg = {}) {
  FreeResult out;
  const std::array<ReducedNetwork, 2> which{ReducedNetwork::NB, ReducedNetwork::NC};
  for (std::size_t k = 0; k < 2; ++k) {
    const ReducedTensors rt = reduced_tensors(net, which[k]);
    OptimizerConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, 0xf4ee + k);
    out.runs[k] = maximize_b(rt.near, rt.far, sub);
    out.per_network[k] = out.runs[k].value;
  }
  out.lhs = out.per_network[0] * out.per_network[0] + out.per_network[1] * out.per_network[1];
  return out;
}

}  // namespace bilocal
