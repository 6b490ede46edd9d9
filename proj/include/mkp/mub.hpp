#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mkp/linalg.hpp"

namespace mkp {

// d+1 bases, labels mu = 0..d; basis 0 is the standard basis for every
// built-in construction. Mutual unbiasedness is certified by verify_mub,
// not gated at construction, so defective families can be inspected.
struct MubFamily {
  int d;
  std::vector<Basis> bases;

  const Basis& basis(int mu) const {
    if (mu < 0 || mu >= static_cast<int>(bases.size()))
      throw std::out_of_range("MubFamily::basis: mu out of range");
    return bases[static_cast<std::size_t>(mu)];
  }
  Vector vector(int mu, int j) const { return basis(mu).column(j); }
};

struct MubCertification {
  bool pass = false;
  double max_deviation = 0.0;
  // basis/vector indices of the worst overlap (mu,i) x (nu,j); -1 when the
  // family is structurally malformed
  int mu = -1, i = -1, nu = -1, j = -1;
  std::string message;
};

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

namespace detail {

// Standard basis + d bases with components <k|Psi^mu_j> = w^(mu k^2 + j k)/sqrt(d),
// w = exp(2 pi i/d). For odd prime d this is the classic quadratic
// Gauss-sum family; the exponent is reduced mod d before evaluating the
// root of unity so the entries repeat exactly across calls.
inline std::vector<Basis> gauss_sum_bases(int d) {
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  const double two_pi = 6.283185307179586476925286766559;
  std::vector<Complex> roots(static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r)
    roots[static_cast<std::size_t>(r)] =
        Complex(std::cos(two_pi * r / d), std::sin(two_pi * r / d));

  std::vector<Basis> bases;
  bases.reserve(static_cast<std::size_t>(d) + 1);
  bases.emplace_back(Matrix::Identity(d, d), 0);
  for (int mu = 1; mu <= d; ++mu) {
    Matrix b(d, d);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        b(k, j) = norm * roots[static_cast<std::size_t>((mu * k * k + j * k) % d)];
    bases.emplace_back(std::move(b), mu);
  }
  return bases;
}

inline std::vector<Basis> pauli_bases() {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Matrix z = Matrix::Identity(2, 2);
  Matrix x(2, 2), y(2, 2);
  x << s, s, s, -s;
  y << s, s, i * s, -i * s;
  std::vector<Basis> bases;
  bases.emplace_back(std::move(z), 0);
  bases.emplace_back(std::move(x), 1);
  bases.emplace_back(std::move(y), 2);
  return bases;
}

}  // namespace detail

// The tabulated d=4 family: standard basis plus four bases whose vectors
// have entries in {1, -1, i, -i} scaled by 1/2. All entries are exact
// doubles.
inline MubFamily d4_table() {
  const Complex o(1.0, 0.0), m(-1.0, 0.0), i(0.0, 1.0), n(0.0, -1.0);
  using Row = std::array<Complex, 4>;
  const std::array<std::array<Row, 4>, 4> table = {{
      {{{o, o, o, o}, {o, m, o, m}, {o, o, m, m}, {o, m, m, o}}},
      {{{o, i, i, m}, {o, n, i, o}, {o, i, n, o}, {o, n, n, m}}},
      {{{o, m, i, i}, {o, o, n, i}, {o, o, i, n}, {o, m, n, n}}},
      {{{o, i, m, i}, {o, n, o, i}, {o, i, o, n}, {o, n, m, n}}},
  }};

  MubFamily fam;
  fam.d = 4;
  fam.bases.emplace_back(Matrix::Identity(4, 4), 0);
  for (int mu = 1; mu <= 4; ++mu) {
    Matrix b(4, 4);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        b(k, j) = 0.5 * table[static_cast<std::size_t>(mu - 1)]
                             [static_cast<std::size_t>(j)]
                             [static_cast<std::size_t>(k)];
    fam.bases.emplace_back(std::move(b), mu);
  }
  return fam;
}

// Maximal family of d+1 mutually unbiased bases. Supported dimensions:
// any prime (Pauli eigenbases for d=2, Gauss-sum construction for odd
// primes) and d=4 via the tabulated family.
inline MubFamily mub_family(int d) {
  if (d == 4) return d4_table();
  if (d == 2) return MubFamily{2, detail::pauli_bases()};
  if (is_prime(d)) return MubFamily{d, detail::gauss_sum_bases(d)};
  std::ostringstream os;
  os << "mub_family: unsupported dimension " << d
     << " (supported: primes and 4)";
  throw std::invalid_argument(os.str());
}

// Checks |<Psi^mu_i|Psi^nu_j>|^2 = delta_mn delta_ij + (1-delta_mn)/d for
// every vector pair. Malformed families fail the report instead of
// throwing.
inline MubCertification verify_mub(const MubFamily& family, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("verify_mub: tol must be > 0");
  MubCertification cert;

  const int d = family.d;
  if (d < 2 || static_cast<int>(family.bases.size()) != d + 1) {
    cert.message = "malformed family: expected d+1 bases of dimension d";
    return cert;
  }
  for (const Basis& b : family.bases)
    if (b.dim() != d) {
      cert.message = "malformed family: basis dimension mismatch";
      return cert;
    }

  const double cross = 1.0 / static_cast<double>(d);
  for (int mu = 0; mu <= d; ++mu) {
    for (int nu = mu; nu <= d; ++nu) {
      Matrix overlap =
          family.bases[static_cast<std::size_t>(mu)].matrix().adjoint() *
          family.bases[static_cast<std::size_t>(nu)].matrix();
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double expected = (mu == nu) ? (i == j ? 1.0 : 0.0) : cross;
          double dev = std::abs(std::norm(overlap(i, j)) - expected);
          if (dev > cert.max_deviation) {
            cert.max_deviation = dev;
            cert.mu = mu;
            cert.i = i;
            cert.nu = nu;
            cert.j = j;
          }
        }
    }
  }
  cert.pass = cert.max_deviation <= tol;
  if (!cert.pass && cert.message.empty()) {
    std::ostringstream os;
    os << "overlap (mu=" << cert.mu << ",i=" << cert.i + 1 << ") x (nu="
       << cert.nu << ",j=" << cert.j + 1 << ") deviates by "
       << cert.max_deviation;
    cert.message = os.str();
  }
  return cert;
}

}  // namespace mkp
