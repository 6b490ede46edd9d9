#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mkp/rng.hpp"

namespace mkp {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kUnitNormTol = 1e-10;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kOrthonormalTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr int kDefaultEigenIterationCap = 10000;

// Thrown when an iterative solve exhausts its iteration cap or a required
// convergence check misses its tolerance. Carries the residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + format(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  static std::string format(double r) {
    std::ostringstream os;
    os << r;
    return os.str();
  }
  double residual_;
};

// A unit-norm state vector. The norm is checked at construction; use
// Ket::normalized to build one from an unnormalized amplitude vector.
class Ket {
 public:
  explicit Ket(Vector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() == 0)
      throw std::invalid_argument("Ket: amplitude vector is empty");
    double n = amp_.norm();
    if (std::abs(n - 1.0) > kUnitNormTol) {
      std::ostringstream os;
      os << "Ket: norm deviates from 1 by " << std::abs(n - 1.0);
      throw std::invalid_argument(os.str());
    }
  }

  static Ket normalized(Vector v) {
    double n = v.norm();
    if (n == 0.0) throw std::invalid_argument("Ket: cannot normalize 0");
    return Ket(Vector(v / n));
  }

  static Ket basis_state(int dim, int index) {
    if (dim < 1 || index < 0 || index >= dim)
      throw std::invalid_argument("Ket::basis_state: index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return Ket(std::move(v));
  }

  int dim() const { return static_cast<int>(amp_.size()); }
  const Vector& vec() const { return amp_; }
  Complex operator[](int i) const { return amp_(i); }

 private:
  Vector amp_;
};

// <a|b>, conjugate-linear in the first argument.
inline Complex inner_product(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("inner_product: dimension mismatch");
  return a.vec().dot(b.vec());
}

// |k><k|
inline Matrix projector(const Ket& k) {
  return k.vec() * k.vec().adjoint();
}

inline double hermiticity_deviation(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  return m.rows() == m.cols() && hermiticity_deviation(m) <= tol;
}

// All eigenvalues of a Hermitian matrix by cyclic Jacobi rotations,
// ascending. Each rotation zeroes one off-diagonal pair; sweeps repeat
// until the off-diagonal Frobenius mass falls below rel_tol * ||A||_F,
// which pins every eigenvalue to the same relative accuracy. Intended for
// the small dense matrices this library works with (d <= 16 or so).
inline std::vector<double> hermitian_eigenvalues(
    Matrix a, int iteration_cap = kDefaultEigenIterationCap,
    double rel_tol = 1e-14) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("hermitian_eigenvalues: matrix not square");
  if (!is_hermitian(a))
    throw std::invalid_argument(
        "hermitian_eigenvalues: matrix is not Hermitian within 1e-12");
  const int n = static_cast<int>(a.rows());
  a = ((a + a.adjoint()) / 2.0).eval();  // kill rounding-level asymmetry

  const double frob = a.norm();
  std::vector<double> evs(n);
  if (frob == 0.0 || n == 1) {
    for (int i = 0; i < n; ++i) evs[i] = a(i, i).real();
    std::sort(evs.begin(), evs.end());
    return evs;
  }

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * std::norm(a(p, q));
    return std::sqrt(s);
  };

  int rotations = 0;
  double off = off_norm();
  while (off > rel_tol * frob) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double h = std::abs(a(p, q));
        if (h == 0.0) continue;
        if (++rotations > iteration_cap)
          throw ConvergenceError(
              "hermitian_eigenvalues: Jacobi sweep cap exceeded", off);

        // Phase out a(p,q), then a real 2x2 rotation annihilates it.
        const Complex phase = a(p, q) / h;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * h);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // V = diag(1, conj(phase)) * [[c, s], [-s, c]] embedded at (p,q)
        const Complex vpp = c, vpq = s;
        const Complex vqp = -s * std::conj(phase), vqq = c * std::conj(phase);

        for (int i = 0; i < n; ++i) {  // A <- A V on columns p,q
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * vpp + aiq * vqp;
          a(i, q) = aip * vpq + aiq * vqq;
        }
        for (int i = 0; i < n; ++i) {  // A <- V^dagger A on rows p,q
          const Complex api = a(p, i), aqi = a(q, i);
          a(p, i) = std::conj(vpp) * api + std::conj(vqp) * aqi;
          a(q, i) = std::conj(vpq) * api + std::conj(vqq) * aqi;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
    off = off_norm();
  }

  for (int i = 0; i < n; ++i) evs[i] = a(i, i).real();
  std::sort(evs.begin(), evs.end());
  return evs;
}

// Largest eigenvalue of a Hermitian PSD operator; for such operators this
// is the operator norm sup_psi <psi|L|psi>.
inline double operator_norm(const Matrix& l,
                            int iteration_cap = kDefaultEigenIterationCap) {
  std::vector<double> evs = hermitian_eigenvalues(l, iteration_cap);
  if (evs.front() < -kPsdTol) {
    std::ostringstream os;
    os << "operator_norm: matrix is not positive-semidefinite "
          "(min eigenvalue "
       << evs.front() << ")";
    throw std::invalid_argument(os.str());
  }
  return std::max(evs.back(), 0.0);
}

// An ordered orthonormal set of dim kets, stored column-wise. Construction
// does not gate on orthonormality — verification routines need to inspect
// defective bases — so consumers check at their boundary via
// require_orthonormal().
class Basis {
 public:
  explicit Basis(Matrix vectors, int label = 0)
      : m_(std::move(vectors)), label_(label) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
      throw std::invalid_argument("Basis: expected a nonempty square matrix");
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  int label() const { return label_; }
  const Matrix& matrix() const { return m_; }
  Vector column(int j) const {
    if (j < 0 || j >= dim())
      throw std::out_of_range("Basis::column: index out of range");
    return m_.col(j);
  }
  Ket ket(int j) const { return Ket(column(j)); }

  // max entrywise deviation of B^dagger B from the identity
  double orthonormality_deviation() const {
    Matrix g = m_.adjoint() * m_;
    return (g - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  }

 private:
  Matrix m_;
  int label_;
};

inline void require_orthonormal(const Basis& b, double tol,
                                const char* what) {
  double dev = b.orthonormality_deviation();
  if (dev > tol) {
    std::ostringstream os;
    os << what << ": basis is not orthonormal (Gram deviation " << dev << ")";
    throw std::invalid_argument(os.str());
  }
}

// Haar-random orthonormal basis: complex Ginibre matrix, QR, then the Q
// columns are rephased so the R diagonal is positive — without that fix the
// QR convention biases the distribution.
inline Basis haar_random_basis(int d, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("haar_random_basis: need d >= 2");
  SplitMix64 rng(seed);
  Matrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      auto [x, y] = gaussian_pair(rng);
      g(k, j) = Complex(x, y);
    }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  for (int j = 0; j < d; ++j) {
    Complex r = qr.matrixQR()(j, j);
    double m = std::abs(r);
    q.col(j) *= (m > 0.0) ? r / m : Complex(1.0);
  }
  return Basis(std::move(q));
}

}  // namespace mkp
