#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "bilocal/error.hpp"
#include "bilocal/matrix.hpp"

namespace bilocal {

struct JacobiOptions {
  double hermitian_tol = 1e-10;
  /// Stop when the off-diagonal Frobenius norm drops below
  /// tolerance * max(1, ||m||_F).
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// Annihilates a(p, q) with the unitary J = [[c, s e], [-s conj(e), c]] acting
// on the (p, q) plane, where e is the phase of a(p, q): a <- J^dagger a J.
inline void jacobi_rotate(ComplexMatrix& a, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const Complex e = apq / g;
  const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const std::size_t n = a.rows();

  // columns: a <- a J
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - s * std::conj(e) * akq;
    a(k, q) = s * e * akp + c * akq;
  }
  // rows: a <- J^dagger a
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - s * e * aqk;
    a(q, k) = s * std::conj(e) * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace detail

/// Eigenvalues of a Hermitian matrix, sorted descending, by cyclic complex
/// Jacobi rotations.
///
/// Throws NotHermitian when max |m - m^dagger| exceeds options.hermitian_tol
/// and NoConvergenceError (carrying the residual off-diagonal norm) when the
/// sweep limit is reached.
inline std::vector<double> hermitian_eigs(const ComplexMatrix& m, const JacobiOptions& options = {}) {
  if (!m.is_square()) {
    throw Error(ErrorCode::WrongDimension, "eigenvalues need a square matrix");
  }
  const double defect = m.hermiticity_defect();
  if (!(defect <= options.hermitian_tol)) {
    throw Error(ErrorCode::NotHermitian, "matrix not Hermitian (defect " + std::to_string(defect) + ")");
  }

  // symmetrize so rounding in the input cannot leak into the spectrum
  ComplexMatrix a = m;
  const std::size_t n = a.rows();
  for (std::size_t r = 0; r < n; ++r) {
    a(r, r) = a(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const Complex avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = avg;
      a(c, r) = std::conj(avg);
    }
  }

  const double threshold = options.tolerance * std::max(1.0, a.frobenius_norm());
  double off = detail::off_diagonal_norm(a);
  int sweeps = 0;
  while (off >= threshold) {
    if (sweeps == options.max_sweeps) throw NoConvergenceError(off, sweeps);
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, p, q);
    ++sweeps;
    off = detail::off_diagonal_norm(a);
  }

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

}  // namespace bilocal
