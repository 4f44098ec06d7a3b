#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "bilocal/correlations.hpp"
#include "bilocal/error.hpp"
#include "bilocal/state.hpp"

namespace bilocal {

// Four-party network: S1 emits rho_ABC, S2 emits rho_BCD. Alice and Dick are
// the nodal parties; the reduced networks are N_B = (A, B, D) and N_C = (A, C, D).

enum class Party { A, B, C, D };

inline char party_letter(Party p) { return static_cast<char>('A' + static_cast<int>(p)); }

/// Party receiving each qubit position of a three-qubit source.
using Assignment = std::array<Party, 3>;

inline constexpr Assignment kAssignmentABC{Party::A, Party::B, Party::C};
inline constexpr Assignment kAssignmentBCD{Party::B, Party::C, Party::D};
/// Second-source assignment reproducing the W-state tightness example:
/// position 1 -> B, position 2 -> D, position 3 -> C.
inline constexpr Assignment kAssignmentBDC{Party::B, Party::D, Party::C};

/// Parses a permutation string such as "bdc" (case-insensitive).
inline Assignment parse_assignment(std::string_view text) {
  if (text.size() != 3) throw Error(ErrorCode::InvalidArgument, "assignment must name three parties");
  Assignment out{};
  for (std::size_t i = 0; i < 3; ++i) {
    const char ch = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
    if (ch < 'A' || ch > 'D') {
      throw Error(ErrorCode::InvalidArgument, "unknown party '" + std::string(1, text[i]) + "'");
    }
    out[i] = static_cast<Party>(ch - 'A');
  }
  return out;
}

inline std::string to_string(const Assignment& a) {
  std::string s;
  for (Party p : a) s += static_cast<char>(std::tolower(party_letter(p)));
  return s;
}

enum class ReducedNetwork { NB, NC };

inline const char* to_string(ReducedNetwork which) { return which == ReducedNetwork::NB ? "N_B" : "N_C"; }

class FourPartyNetwork {
 public:
  FourPartyNetwork(DensityMatrix rho_abc, DensityMatrix rho_bcd, Assignment assignment_1 = kAssignmentABC,
                   Assignment assignment_2 = kAssignmentBCD)
      : rho_abc_(std::move(rho_abc)),
        rho_bcd_(std::move(rho_bcd)),
        assignment_1_(assignment_1),
        assignment_2_(assignment_2) {
    if (rho_abc_.num_qubits() != 3 || rho_bcd_.num_qubits() != 3) {
      throw Error(ErrorCode::WrongDimension, "four-party network sources must be three-qubit states");
    }
    require_bijection(assignment_1_, {Party::A, Party::B, Party::C}, "first");
    require_bijection(assignment_2_, {Party::B, Party::C, Party::D}, "second");
  }

  const DensityMatrix& rho_abc() const noexcept { return rho_abc_; }
  const DensityMatrix& rho_bcd() const noexcept { return rho_bcd_; }
  const Assignment& assignment_1() const noexcept { return assignment_1_; }
  const Assignment& assignment_2() const noexcept { return assignment_2_; }

  /// Qubit position of `party` within the first (source = 0) or second source.
  int position(int source, Party party) const {
    const Assignment& a = source == 0 ? assignment_1_ : assignment_2_;
    const auto it = std::find(a.begin(), a.end(), party);
    if (it == a.end()) throw Error(ErrorCode::BadIndex, "party not held by this source");
    return static_cast<int>(it - a.begin());
  }

 private:
  static void require_bijection(const Assignment& a, std::array<Party, 3> expected, const char* which) {
    Assignment sorted = a;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != expected) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(which) + " source assignment '" + to_string(a) + "' is not a bijection onto its parties");
    }
  }

  DensityMatrix rho_abc_;
  DensityMatrix rho_bcd_;
  Assignment assignment_1_;
  Assignment assignment_2_;
};

/// Source tensors of one reduced network: near = T_AB or T_AC (Alice first),
/// far = T_BD or T_CD (Dick second).
struct ReducedTensors {
  ReducedNetwork which;
  CorrelationTensor near;
  CorrelationTensor far;
};

/// Two-qubit sources of a reduced network: (rho_AB, rho_BD) for N_B and
/// (rho_AC, rho_CD) for N_C, qubits ordered along the line A - middle - D.
inline std::array<DensityMatrix, 2> reduced_states(const FourPartyNetwork& net, ReducedNetwork which) {
  const Party middle = which == ReducedNetwork::NB ? Party::B : Party::C;
  const std::array<int, 2> near_keep{net.position(0, Party::A), net.position(0, middle)};
  const std::array<int, 2> far_keep{net.position(1, middle), net.position(1, Party::D)};
  return {partial_trace(net.rho_abc(), near_keep), partial_trace(net.rho_bcd(), far_keep)};
}

inline ReducedTensors reduced_tensors(const FourPartyNetwork& net, ReducedNetwork which) {
  const auto states = reduced_states(net, which);
  return ReducedTensors{which, correlation_tensor(states[0]), correlation_tensor(states[1])};
}

struct MonogamyReport {
  std::array<double, 2> lambda_b{};  // two largest Gram eigenvalues of T_AB
  std::array<double, 2> lambda_c{};  // of T_AC
  std::array<double, 2> iota_b{};    // of T_BD
  std::array<double, 2> iota_c{};    // of T_CD
  double bmaxsq_b = 0.0;
  double bmaxsq_c = 0.0;
  double tradeoff_lhs = 0.0;
  /// Arithmetic-mean bound (sum of all eight eigenvalues) / 2.
  double amgm_bound = 0.0;
  /// sqrt(M_AB M_BD) + sqrt(M_AC M_CD): Cauchy-Schwarz bound on the squared
  /// parameters actually reachable, sitting between the optimizers and amgm_bound.
  double cauchy_schwarz_bound = 0.0;
  bool satisfied = false;

  bool nonbilocal_b() const { return bmaxsq_b > 1.0; }
  bool nonbilocal_c() const { return bmaxsq_c > 1.0; }
};

inline MonogamyReport monogamy_report(const FourPartyNetwork& net, double tolerance = 1e-9) {
  const ReducedTensors nb = reduced_tensors(net, ReducedNetwork::NB);
  const ReducedTensors nc = reduced_tensors(net, ReducedNetwork::NC);
  const GramEigs lb = gram_eigs(nb.near);
  const GramEigs ib = gram_eigs(nb.far);
  const GramEigs lc = gram_eigs(nc.near);
  const GramEigs ic = gram_eigs(nc.far);

  MonogamyReport r;
  r.lambda_b = {lb[0], lb[1]};
  r.lambda_c = {lc[0], lc[1]};
  r.iota_b = {ib[0], ib[1]};
  r.iota_c = {ic[0], ic[1]};
  r.bmaxsq_b = bmax_squared(lb, ib);
  r.bmaxsq_c = bmax_squared(lc, ic);
  r.tradeoff_lhs = r.bmaxsq_b + r.bmaxsq_c;
  r.amgm_bound = (ib[0] + ib[1] + lb[0] + lb[1] + ic[0] + ic[1] + lc[0] + lc[1]) / 2.0;
  r.cauchy_schwarz_bound = std::sqrt(horodecki_m(lb) * horodecki_m(ib)) + std::sqrt(horodecki_m(lc) * horodecki_m(ic));
  r.satisfied = r.tradeoff_lhs <= 2.0 + tolerance;
  return r;
}

/// Sum of the two largest Gram eigenvalues of the (pivot, other) tensors for
/// both other qubits of a three-qubit state.
inline double marginal_tradeoff_sum(const DensityMatrix& rho, int pivot) {
  if (rho.num_qubits() != 3) {
    throw Error(ErrorCode::WrongDimension, "marginal trade-off sum needs a three-qubit state");
  }
  if (pivot < 0 || pivot > 2) throw Error(ErrorCode::BadIndex, "pivot qubit out of range");
  double total = 0.0;
  for (int other = 0; other < 3; ++other) {
    if (other == pivot) continue;
    const std::array<int, 2> keep{pivot, other};
    total += horodecki_m(correlation_tensor(partial_trace(rho, keep)));
  }
  return total;
}

struct WStateParams {
  double mu0 = std::numbers::pi / 2;
  double mu1 = std::numbers::pi / 4;
};

/// cos mu0 |001> + sin mu1 sin mu0 |010> + sin mu0 cos mu1 |100>
inline Ket w_state(const WStateParams& p) {
  constexpr double kSlack = 1e-12;
  for (double mu : {p.mu0, p.mu1}) {
    if (!(mu >= -kSlack && mu <= std::numbers::pi / 2 + kSlack)) {
      throw Error(ErrorCode::InvalidArgument, "W-state angles must lie in [0, pi/2]");
    }
  }
  std::vector<Complex> amps(8);
  amps[0b001] = std::cos(p.mu0);
  amps[0b010] = std::sin(p.mu1) * std::sin(p.mu0);
  amps[0b100] = std::sin(p.mu0) * std::cos(p.mu1);
  return Ket(std::move(amps));
}

/// Two identical copies of w_state(pi/2, mu1) wired with the tightness assignment.
inline FourPartyNetwork tightness_network(double mu1, Assignment assignment_2 = kAssignmentBDC) {
  const DensityMatrix rho = density_from_ket(w_state({std::numbers::pi / 2, mu1}));
  return FourPartyNetwork(rho, rho, kAssignmentABC, assignment_2);
}

inline MonogamyReport tightness_demo(double mu1) { return monogamy_report(tightness_network(mu1)); }

}  // namespace bilocal
