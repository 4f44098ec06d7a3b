#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bilocal/bilocal.hpp"

namespace bilocal::testing {

inline const double kPi = std::numbers::pi;

inline Ket ket(std::vector<Complex> amps) { return Ket(std::move(amps)); }

inline DensityMatrix bell() {
  const double h = 1.0 / std::sqrt(2.0);
  return density_from_ket(ket({h, 0, 0, h}));
}

inline DensityMatrix product00() { return density_from_ket(Ket::basis(2, 0)); }

inline DensityMatrix ghz3() {
  const double h = 1.0 / std::sqrt(2.0);
  return density_from_ket(ket({h, 0, 0, 0, 0, 0, 0, h}));
}

inline bool near_matrix(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return max_abs_diff(a, b) <= tol;
}

inline void expect_tensor(const CorrelationTensor& t, const Mat3& want, double tol) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(t(i, j), want[i][j], tol) << "entry " << i << "," << j;
}

// rotation by `angle` about a unit axis
inline Mat3 rotation(Vec3 axis, double angle) {
  axis = (1.0 / norm(axis)) * axis;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  const double x = axis[0], y = axis[1], z = axis[2];
  return Mat3{{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
               {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
               {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
}

inline Mat3 random_rotation(Rng& rng) {
  const Vec3 axis{rng.normal(), rng.normal(), rng.normal()};
  return rotation(axis, rng.uniform(0.0, 2.0 * kPi));
}

inline BilocalSettings random_settings(Rng& rng) { return decode_bilocal(SettingsVector::random(8, rng)); }

}  // namespace bilocal::testing
