#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "mkp/linalg.hpp"

namespace mkp {

// A known strategy that beats the conventional (2 sqrt(d)+d-1)/(sqrt(d)(d+1))
// ceiling: input state, control basis, the success probability it should
// evaluate to, and the (j, mu) pairs where the input is orthogonal to a
// MUB vector (1-based j, 0-based mu).
struct CounterexampleFixture {
  int d = 0;
  Ket phi;
  Basis chi;
  double expected_probability = 0.0;
  double expected_tolerance = 0.0;
  std::vector<std::pair<int, int>> expected_zero_pairs;
};

// d=3 against the Gauss-sum family. The reference value 0.8212 is the
// published 4-decimal figure; the evaluation lands on
// (21 + 2 sqrt(2) + sqrt(6))/32 = 0.82118490211...
inline CounterexampleFixture counterexample_d3() {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  const Complex i(0.0, 1.0);

  Vector phi(3);
  phi << 0.0, i / s2, Complex(3.0, s3) / (2.0 * s6);

  // exp(3 i pi/4) = (-1+i)/sqrt(2), exp(i pi/4) = (1+i)/sqrt(2),
  // exp(-i pi/4) = (1-i)/sqrt(2)
  const Complex e3q = Complex(-1.0, 1.0) / s2;
  const Complex e1q = Complex(1.0, 1.0) / s2;
  const Complex emq = Complex(1.0, -1.0) / s2;

  Matrix chi(3, 3);
  chi.col(0) << 1.0 / s2, s3 * i / (2.0 * s2), -e3q / (2.0 * s2);
  chi.col(1) << i / s2, s3 / (2.0 * s2), -e1q / (2.0 * s2);
  chi.col(2) << 0.0, emq / 2.0, s3 / 2.0;

  CounterexampleFixture f{3, Ket(std::move(phi)), Basis(std::move(chi)),
                          0.8212, 5e-5,
                          {{1, 0}, {2, 1}, {2, 2}, {2, 3}}};
  return f;
}

// d=4 against the tabulated family; fully pinned down by the printed
// vectors, no basis-convention freedom. Expected value
// (6493 + 1065 sqrt(3))/10240.
inline CounterexampleFixture counterexample_d4() {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  const Complex i(0.0, 1.0);

  Vector phi(4);
  phi << 1.0 / s2, 0.0, -1.0 / s2, 0.0;

  Matrix chi(4, 4);
  chi.col(0) << s3 * i / 2.0, Complex(9.0, 3.0 * s3) / 32.0,
      Complex(-s3, 1.0) / 32.0, Complex(3.0, -3.0 * s3) / 16.0;
  chi.col(1) << Complex(s3, 1.0) / 4.0, Complex(-9.0 * s3, 9.0) / 32.0,
      -s3 * i / 16.0, Complex(3.0 * s3, 9.0) / 16.0;
  chi.col(2) << 0.0, Complex(5.0, -5.0 * s3) / 16.0,
      Complex(-3.0 * s3, -9.0) / 16.0, Complex(3.0, s3) / 8.0;
  chi.col(3) << 0.0, Complex(-3.0, s3) / 8.0, -3.0 * i / 4.0,
      Complex(-1.0, -s3) / 4.0;

  CounterexampleFixture f{4, Ket(std::move(phi)), Basis(std::move(chi)),
                          (6493.0 + 1065.0 * s3) / 10240.0, 1e-9,
                          {{2, 0}, {4, 0}, {1, 1}, {2, 1}, {2, 4}, {3, 4}}};
  return f;
}

inline CounterexampleFixture counterexample(int d) {
  if (d == 3) return counterexample_d3();
  if (d == 4) return counterexample_d4();
  throw std::invalid_argument("counterexample: only d=3 and d=4 are tabulated");
}

}  // namespace mkp
