#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace bilocal;
using namespace bilocal::testing;

TEST(TensorProduct, IdentityTimesIdentity) {
  EXPECT_EQ(tensor_product(pauli(0), pauli(0)), ComplexMatrix::identity(4));
}

TEST(TensorProduct, ZZIsDiagonalParity) {
  const std::vector<double> d{1, -1, -1, 1};
  EXPECT_EQ(tensor_product(pauli(3), pauli(3)), ComplexMatrix::diagonal(d));
}

TEST(TensorProduct, BasisProjectorsFollowLeftMostSignificant) {
  const ComplexMatrix p0{{1, 0}, {0, 0}};
  const ComplexMatrix p1{{0, 0}, {0, 1}};
  const ComplexMatrix out = tensor_product(p0, p1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(out(i, j), Complex(i == 1 && j == 1 ? 1.0 : 0.0));
}

TEST(TensorProduct, Associative) {
  // small Gaussian integers keep every product exact
  Rng rng(7);
  auto rnd = [&](std::size_t r, std::size_t c) {
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        m(i, j) = Complex(std::floor(rng.uniform(-4, 4)), std::floor(rng.uniform(-4, 4)));
    return m;
  };
  const ComplexMatrix a = rnd(2, 2), b = rnd(2, 3), c = rnd(3, 2);
  EXPECT_EQ(tensor_product(tensor_product(a, b), c), tensor_product(a, tensor_product(b, c)));
}

TEST(Pauli, AlgebraAndRange) {
  const Complex i(0, 1);
  EXPECT_TRUE(near_matrix(pauli(1) * pauli(2), i * pauli(3), 0.0));
  EXPECT_TRUE(near_matrix(pauli(2) * pauli(2), pauli(0), 0.0));
  EXPECT_THROW(pauli(4), Error);
}

TEST(ComplexMatrix, RejectsNonFiniteAndBadShape) {
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<Complex>(3)), Error);
  EXPECT_THROW(ComplexMatrix(1, 1, std::vector<Complex>{Complex(NAN, 0)}), Error);
  EXPECT_THROW(pauli(1) * ComplexMatrix(3, 3), Error);
}

TEST(ComplexMatrix, AdjointAndTrace) {
  const ComplexMatrix m{{1, Complex(2, 1)}, {Complex(0, 3), 4}};
  const ComplexMatrix a = m.adjoint();
  EXPECT_EQ(a(0, 1), Complex(0, -3));
  EXPECT_EQ(a(1, 0), Complex(2, -1));
  EXPECT_EQ(m.trace(), Complex(5, 0));
  EXPECT_GT(m.hermiticity_defect(), 0.0);
  EXPECT_EQ(pauli(2).hermiticity_defect(), 0.0);
}
