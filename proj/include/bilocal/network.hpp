#pragma once

#include <array>
#include <cmath>
#include <string>

#include "bilocal/correlations.hpp"
#include "bilocal/error.hpp"
#include "bilocal/matrix.hpp"
#include "bilocal/state.hpp"
#include "bilocal/vec3.hpp"

namespace bilocal {

// Three-party line A - B - C fed by two independent two-qubit sources. The
// middle party holds (left-source qubit, right-source qubit) in that order.
// Outcome bit b stands for the eigenvalue (-1)^b.

/// Unit vector selecting the observable v . sigma.
class BlochVector {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  BlochVector() : v_{0.0, 0.0, 1.0} {}

  explicit BlochVector(const Vec3& v) : v_(v) {
    if (std::abs(norm(v_) - 1.0) > kUnitTolerance) {
      throw Error(ErrorCode::InvalidArgument, "Bloch vector is not a unit vector");
    }
  }

  static BlochVector normalized(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero vector");
    return BlochVector((1.0 / n) * v);
  }

  /// Polar angle theta from +z, azimuth phi from +x.
  static BlochVector from_angles(double theta, double phi) {
    const double st = std::sin(theta);
    return BlochVector(Vec3{st * std::cos(phi), st * std::sin(phi), std::cos(theta)});
  }

  static BlochVector x() { return BlochVector(Vec3{1.0, 0.0, 0.0}); }
  static BlochVector y() { return BlochVector(Vec3{0.0, 1.0, 0.0}); }
  static BlochVector z() { return BlochVector(Vec3{0.0, 0.0, 1.0}); }

  const Vec3& components() const noexcept { return v_; }
  double operator[](int i) const { return v_[i]; }
  operator const Vec3&() const noexcept { return v_; }

  BlochVector operator-() const { return BlochVector(-v_); }

  /// v . sigma
  ComplexMatrix observable() const {
    return v_[0] * pauli(1) + v_[1] * pauli(2) + v_[2] * pauli(3);
  }

 private:
  Vec3 v_;
};

/// One dichotomic measurement direction per input bit.
struct ProjectiveSetting {
  std::array<BlochVector, 2> directions;

  const BlochVector& operator[](int input) const { return directions[input]; }
};

/// Product observable (left . sigma) (x) (right . sigma).
struct SeparablePair {
  BlochVector left;
  BlochVector right;
};

struct SeparableSetting {
  std::array<SeparablePair, 2> pairs;

  const SeparablePair& operator[](int input) const { return pairs[input]; }
};

struct BilocalSettings {
  ProjectiveSetting left_extreme;
  SeparableSetting middle;
  ProjectiveSetting right_extreme;
};

struct BilocalScenario {
  DensityMatrix rho_left;
  DensityMatrix rho_right;
  BilocalSettings settings;
};

/// P(a, b, c | x, y, z) for all 64 bit combinations.
class Behavior {
 public:
  static constexpr int index(int a, int b, int c, int x, int y, int z) {
    return (((((a * 2 + b) * 2 + c) * 2 + x) * 2 + y) * 2) + z;
  }

  double operator()(int a, int b, int c, int x, int y, int z) const { return p_[index(a, b, c, x, y, z)]; }
  double& at(int a, int b, int c, int x, int y, int z) { return p_[index(a, b, c, x, y, z)]; }

  static Behavior uniform() {
    Behavior beh;
    beh.p_.fill(1.0 / 8.0);
    return beh;
  }

  /// max over (x, y, z) of |sum_{a,b,c} P - 1|
  double normalization_residual() const {
    double worst = 0.0;
    for_inputs([&](int x, int y, int z) {
      double s = 0.0;
      for_outputs([&](int a, int b, int c) { s += (*this)(a, b, c, x, y, z); });
      worst = std::max(worst, std::abs(s - 1.0));
    });
    return worst;
  }

  /// Largest spread of any single-party marginal P(o | own input) across the
  /// inputs of the other two parties.
  double no_signaling_residual() const {
    double worst = 0.0;
    for (int party = 0; party < 3; ++party)
      for (int own = 0; own < 2; ++own)
        for (int outcome = 0; outcome < 2; ++outcome) {
          double lo = INFINITY;
          double hi = -INFINITY;
          for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v) {
              std::array<int, 3> in{};
              in[party] = own;
              in[(party + 1) % 3] = u;
              in[(party + 2) % 3] = v;
              double m = 0.0;
              for_outputs([&](int a, int b, int c) {
                const std::array<int, 3> out{a, b, c};
                if (out[party] == outcome) m += (*this)(a, b, c, in[0], in[1], in[2]);
              });
              lo = std::min(lo, m);
              hi = std::max(hi, m);
            }
          worst = std::max(worst, hi - lo);
        }
    return worst;
  }

  /// Distance of the most out-of-range entry from [0, 1].
  double range_residual() const {
    double worst = 0.0;
    for (double v : p_) worst = std::max({worst, -v, v - 1.0});
    return worst;
  }

  template <class F>
  static void for_inputs(F&& f) {
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z) f(x, y, z);
  }

  template <class F>
  static void for_outputs(F&& f) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) f(a, b, c);
  }

 private:
  std::array<double, 64> p_{};
};

struct BilocalReport {
  double i = 0.0;
  double j = 0.0;
  double b = 0.0;
  bool nonbilocal = false;
};

/// (sigma_0 + (-1)^outcome v . sigma) / 2
inline ComplexMatrix projector(const BlochVector& v, int outcome) {
  const double sign = outcome == 0 ? 1.0 : -1.0;
  return 0.5 * (pauli(0) + sign * v.observable());
}

/// Two-qubit effect for product-parity outcome `outcome`: the sum of
/// projector(left, b1) (x) projector(right, b2) over b1 xor b2 = outcome.
inline ComplexMatrix separable_effect(const SeparablePair& pair, int outcome) {
  ComplexMatrix effect(4, 4);
  for (int b1 = 0; b1 < 2; ++b1) {
    const int b2 = b1 ^ outcome;
    effect += tensor_product(projector(pair.left, b1), projector(pair.right, b2));
  }
  return effect;
}

/// Exact quantum behavior of the scenario: P = Tr[(rho_L (x) rho_R)(A (x) M (x) C)].
inline Behavior behavior(const BilocalScenario& s) {
  if (s.rho_left.num_qubits() != 2 || s.rho_right.num_qubits() != 2) {
    throw Error(ErrorCode::WrongDimension, "bilocal sources must be two-qubit states");
  }
  const DensityMatrix joint = tensor_product(s.rho_left, s.rho_right);

  std::array<std::array<ComplexMatrix, 2>, 2> alice{};
  std::array<std::array<ComplexMatrix, 2>, 2> bob{};
  std::array<std::array<ComplexMatrix, 2>, 2> charlie{};
  for (int in = 0; in < 2; ++in)
    for (int out = 0; out < 2; ++out) {
      alice[in][out] = projector(s.settings.left_extreme[in], out);
      bob[in][out] = separable_effect(s.settings.middle[in], out);
      charlie[in][out] = projector(s.settings.right_extreme[in], out);
    }

  Behavior beh;
  Behavior::for_inputs([&](int x, int y, int z) {
    Behavior::for_outputs([&](int a, int b, int c) {
      const ComplexMatrix op = tensor_product(tensor_product(alice[x][a], bob[y][b]), charlie[z][c]);
      beh.at(a, b, c, x, y, z) = joint.expectation(op).real();
    });
  });
  return beh;
}

/// <A_x B_y C_z> = sum (-1)^(a+b+c) P(a, b, c | x, y, z)
inline double correlator(const Behavior& beh, int x, int y, int z) {
  double s = 0.0;
  Behavior::for_outputs([&](int a, int b, int c) {
    const double sign = ((a + b + c) % 2 == 0) ? 1.0 : -1.0;
    s += sign * beh(a, b, c, x, y, z);
  });
  return s;
}

inline BilocalReport bilocal_report(const Behavior& beh) {
  BilocalReport r;
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z) {
      r.i += 0.25 * correlator(beh, x, 0, z);
      r.j += 0.25 * (((x + z) % 2 == 0) ? 1.0 : -1.0) * correlator(beh, x, 1, z);
    }
  r.b = std::sqrt(std::abs(r.i)) + std::sqrt(std::abs(r.j));
  r.nonbilocal = r.b > 1.0;
  return r;
}

/// Bilocality parameter from the two source tensors under separable middle
/// measurements:
///   B = 1/2 sum_i sqrt(|(a_0 + (-1)^i a_1) . T_L b_i^L| |b_i^R . T_R (c_0 + (-1)^i c_1)|)
inline double b_closed_form(const CorrelationTensor& t_left, const CorrelationTensor& t_right,
                            const BilocalSettings& s) {
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double sign = i == 0 ? 1.0 : -1.0;
    const Vec3 a = s.left_extreme[0].components() + sign * s.left_extreme[1].components();
    const Vec3 c = s.right_extreme[0].components() + sign * s.right_extreme[1].components();
    const double left = bilinear(a, t_left.entries(), s.middle[i].left);
    const double right = bilinear(s.middle[i].right, t_right.entries(), c);
    total += std::sqrt(std::abs(left) * std::abs(right));
  }
  return 0.5 * total;
}

}  // namespace bilocal
