#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "bilocal/eigen.hpp"
#include "bilocal/error.hpp"
#include "bilocal/matrix.hpp"
#include "bilocal/state.hpp"
#include "bilocal/vec3.hpp"

namespace bilocal {

/// T_ij = Tr[rho sigma_i (x) sigma_j] for i, j in {x, y, z}. Row index is the
/// first qubit, column index the second.
class CorrelationTensor {
 public:
  static constexpr double kEntrySlack = 1e-10;
  static constexpr double kFrobeniusSlack = 1e-9;

  CorrelationTensor() = default;

  explicit CorrelationTensor(const Mat3& entries) : t_(entries) {
    double frob2 = 0.0;
    for (const auto& row : t_)
      for (double v : row) {
        if (!std::isfinite(v) || std::abs(v) > 1.0 + kEntrySlack) {
          throw Error(ErrorCode::InvalidArgument, "correlation tensor entry outside [-1, 1]");
        }
        frob2 += v * v;
      }
    if (frob2 > 3.0 + kFrobeniusSlack) {
      throw Error(ErrorCode::InvalidArgument, "correlation tensor Frobenius norm^2 exceeds 3");
    }
  }

  static CorrelationTensor diagonal(double x, double y, double z) {
    return CorrelationTensor(Mat3{Vec3{x, 0, 0}, Vec3{0, y, 0}, Vec3{0, 0, z}});
  }

  double operator()(int i, int j) const { return t_[i][j]; }
  const Mat3& entries() const noexcept { return t_; }

  CorrelationTensor transposed() const { return CorrelationTensor(transpose(t_)); }

  /// T^T T
  Mat3 gram() const { return transpose(t_) * t_; }

 private:
  Mat3 t_{};
};

/// Eigenvalues of T^T T, descending, clipped at zero from below.
struct GramEigs {
  std::array<double, 3> values{};

  double operator[](int i) const { return values[i]; }
};

inline CorrelationTensor correlation_tensor(const DensityMatrix& rho) {
  if (rho.num_qubits() != 2) {
    throw Error(ErrorCode::WrongDimension,
                "correlation tensor needs a two-qubit state, got " + std::to_string(rho.num_qubits()) + " qubits");
  }
  Mat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = rho.expectation(tensor_product(pauli(i + 1), pauli(j + 1))).real();
  // rounding can push a pure-state entry a hair past 1
  for (auto& row : t)
    for (double& v : row) v = std::clamp(v, -1.0, 1.0);
  return CorrelationTensor(t);
}

inline GramEigs gram_eigs(const CorrelationTensor& t) {
  const Mat3 g = t.gram();
  ComplexMatrix m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = g[i][j];
  const auto eigs = hermitian_eigs(m);
  GramEigs out;
  for (int i = 0; i < 3; ++i) out.values[i] = std::max(0.0, eigs[i]);
  return out;
}

/// M(rho) = omega_1 + omega_2; the maximal CHSH value of the state is 2 sqrt(M).
inline double horodecki_m(const GramEigs& w) { return w[0] + w[1]; }
inline double horodecki_m(const CorrelationTensor& t) { return horodecki_m(gram_eigs(t)); }

inline double max_chsh_value(const CorrelationTensor& t) { return 2.0 * std::sqrt(horodecki_m(t)); }

/// Squared bilocal violation bound: sqrt(w1^L w1^R) + sqrt(w2^L w2^R), with
/// both spectra paired in descending order.
inline double bmax_squared(const GramEigs& left, const GramEigs& right) {
  return std::sqrt(left[0] * right[0]) + std::sqrt(left[1] * right[1]);
}

inline double bmax(const GramEigs& left, const GramEigs& right) { return std::sqrt(bmax_squared(left, right)); }

/// Largest bilocality parameter reachable with separable middle-party
/// measurements, from the Gram spectra of the two source tensors.
inline double bmax(const CorrelationTensor& left, const CorrelationTensor& right) {
  return bmax(gram_eigs(left), gram_eigs(right));
}

}  // namespace bilocal
