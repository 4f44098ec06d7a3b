#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bilocal/eigen.hpp"
#include "bilocal/error.hpp"
#include "bilocal/matrix.hpp"
#include "bilocal/rng.hpp"

namespace bilocal {

// Basis convention used everywhere: for n qubits, basis index
// b = sum_k bit_k * 2^(n-1-k), so qubit 0 is the leftmost, most significant bit.

inline constexpr int kMaxQubits = 4;

namespace tol {
inline constexpr double kAlgebraic = 1e-12;
inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kKetNormalization = 1e-9;
}  // namespace tol

inline void require_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw Error(ErrorCode::WrongDimension, "qubit count must be in [1, 4], got " + std::to_string(n));
  }
}

/// Qubit count for a 2^n dimension, or -1 when dim is not a supported power of two.
inline int qubits_for_dimension(std::size_t dim) {
  for (int n = 1; n <= kMaxQubits; ++n)
    if (dim == (std::size_t{1} << n)) return n;
  return -1;
}

class Ket {
 public:
  /// Amplitudes in basis order. Normalization is not enforced here; see
  /// density_from_ket.
  explicit Ket(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    num_qubits_ = qubits_for_dimension(amplitudes_.size());
    if (num_qubits_ < 0) {
      throw Error(ErrorCode::WrongDimension,
                  "ket needs 2^n amplitudes with 1 <= n <= 4, got " + std::to_string(amplitudes_.size()));
    }
    for (const Complex& z : amplitudes_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::InvalidArgument, "ket has non-finite amplitudes");
      }
    }
  }

  /// Computational basis state |index> on n qubits.
  static Ket basis(int n, std::size_t index) {
    require_qubit_count(n);
    std::vector<Complex> amps(std::size_t{1} << n);
    if (index >= amps.size()) throw Error(ErrorCode::BadIndex, "basis index out of range");
    amps[index] = 1.0;
    return Ket(std::move(amps));
  }

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm_squared() const {
    double s = 0.0;
    for (const Complex& z : amplitudes_) s += std::norm(z);
    return s;
  }

 private:
  std::vector<Complex> amplitudes_;
  int num_qubits_ = 0;
};

/// Mixed state on 1..4 qubits: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  /// Validates every invariant; throws InvalidState naming the one violated.
  static DensityMatrix from_matrix(ComplexMatrix m) {
    if (!m.is_square()) throw Error(ErrorCode::WrongDimension, "density matrix must be square");
    const int n = qubits_for_dimension(m.rows());
    if (n < 0) {
      throw Error(ErrorCode::WrongDimension,
                  "density matrix dimension must be 2^n with 1 <= n <= 4, got " + std::to_string(m.rows()));
    }
    if (m.hermiticity_defect() > tol::kAlgebraic) {
      throw Error(ErrorCode::InvalidState, "state not Hermitian");
    }
    const Complex tr = m.trace();
    if (std::abs(tr - 1.0) > tol::kAlgebraic) {
      throw Error(ErrorCode::InvalidState, "state trace not 1 (trace " + std::to_string(tr.real()) + ")");
    }
    const auto eigs = hermitian_eigs(m);
    if (eigs.back() < -tol::kPsdSlack) {
      throw Error(ErrorCode::InvalidState,
                  "state not positive semidefinite (eigenvalue " + std::to_string(eigs.back()) + ")");
    }
    return DensityMatrix(n, std::move(m));
  }

  static DensityMatrix maximally_mixed(int n) {
    require_qubit_count(n);
    ComplexMatrix m = ComplexMatrix::identity(std::size_t{1} << n);
    m *= 1.0 / static_cast<double>(m.rows());
    return DensityMatrix(n, std::move(m));
  }

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

  /// Tr[rho * op].
  Complex expectation(const ComplexMatrix& op) const { return trace_of_product(matrix_, op); }

 private:
  DensityMatrix(int n, ComplexMatrix m) : num_qubits_(n), matrix_(std::move(m)) {}

  friend DensityMatrix density_from_ket(const Ket&);
  friend DensityMatrix partial_trace(const DensityMatrix&, std::span<const int>);
  friend DensityMatrix tensor_product(const DensityMatrix&, const DensityMatrix&);
  friend DensityMatrix random_density(int, int, std::uint64_t);

  int num_qubits_;
  ComplexMatrix matrix_;
};

/// |psi><psi|. Throws NotNormalized when sum |amp|^2 is off by more than 1e-9.
inline DensityMatrix density_from_ket(const Ket& psi) {
  const double norm2 = psi.norm_squared();
  if (std::abs(norm2 - 1.0) > tol::kKetNormalization) {
    throw Error(ErrorCode::NotNormalized, "state not normalized (norm^2 = " + std::to_string(norm2) + ")");
  }
  const std::size_t d = psi.dimension();
  ComplexMatrix m(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = psi[r] * std::conj(psi[c]);
  return DensityMatrix(psi.num_qubits(), std::move(m));
}

/// Joint state of independent systems; `a` takes the more significant qubits.
inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  const int n = a.num_qubits() + b.num_qubits();
  require_qubit_count(n);
  return DensityMatrix(n, tensor_product(a.matrix(), b.matrix()));
}

/// Reduced state on the qubits in `keep`, in the listed order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  if (keep.empty()) throw Error(ErrorCode::BadIndex, "partial trace must keep at least one qubit");
  std::vector<bool> kept(n, false);
  for (int q : keep) {
    if (q < 0 || q >= n) {
      throw Error(ErrorCode::BadIndex, "qubit index " + std::to_string(q) + " out of range for " +
                                           std::to_string(n) + "-qubit state");
    }
    if (kept[q]) throw Error(ErrorCode::BadIndex, "duplicate qubit index " + std::to_string(q));
    kept[q] = true;
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!kept[q]) traced.push_back(q);

  const int k = static_cast<int>(keep.size());
  const std::size_t out_dim = std::size_t{1} << k;
  const std::size_t env_dim = std::size_t{1} << traced.size();

  // full-register index from (kept bits, traced bits); position 0 is most significant
  auto compose = [&](std::size_t kept_bits, std::size_t env_bits) {
    std::size_t full = 0;
    for (int m = 0; m < k; ++m) {
      const std::size_t bit = (kept_bits >> (k - 1 - m)) & 1U;
      full |= bit << (n - 1 - keep[m]);
    }
    const int t = static_cast<int>(traced.size());
    for (int m = 0; m < t; ++m) {
      const std::size_t bit = (env_bits >> (t - 1 - m)) & 1U;
      full |= bit << (n - 1 - traced[m]);
    }
    return full;
  };

  ComplexMatrix out(out_dim, out_dim);
  for (std::size_t r = 0; r < out_dim; ++r)
    for (std::size_t c = 0; c < out_dim; ++c) {
      Complex s = 0.0;
      for (std::size_t e = 0; e < env_dim; ++e) s += rho(compose(r, e), compose(c, e));
      out(r, c) = s;
    }
  return DensityMatrix(k, std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

namespace detail {

// 2^n x rank complex Gaussian matrix drawn in row-major order. For rank 1 the
// draws coincide with the amplitudes of random_pure_state.
inline ComplexMatrix ginibre(int n, int rank, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g(std::size_t{1} << n, static_cast<std::size_t>(rank));
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) = rng.complex_normal();
  return g;
}

}  // namespace detail

/// Haar-random pure state: normalized vector of complex standard normals.
inline Ket random_pure_state(int n, std::uint64_t seed) {
  require_qubit_count(n);
  const ComplexMatrix g = detail::ginibre(n, 1, seed);
  const double norm = g.frobenius_norm();
  std::vector<Complex> amps(g.rows());
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = g(i, 0) / norm;
  return Ket(std::move(amps));
}

/// Ginibre-induced mixed state G G^dagger / Tr(G G^dagger), G of size 2^n x rank.
inline DensityMatrix random_density(int n, int rank, std::uint64_t seed) {
  require_qubit_count(n);
  if (rank < 1 || rank > (1 << n)) {
    throw Error(ErrorCode::InvalidArgument, "rank must be in [1, 2^n], got " + std::to_string(rank));
  }
  const ComplexMatrix g = detail::ginibre(n, rank, seed);
  ComplexMatrix m = g * g.adjoint();
  m *= 1.0 / m.trace().real();
  return DensityMatrix(n, std::move(m));
}

}  // namespace bilocal
