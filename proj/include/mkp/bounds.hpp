#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mkp/game.hpp"
#include "mkp/linalg.hpp"
#include "mkp/mub.hpp"

namespace mkp {

// m unit kets of common dimension; the building blocks of L = sum |phi_i><phi_i|.
class VectorSet {
 public:
  explicit VectorSet(std::vector<Ket> kets) : kets_(std::move(kets)) {
    if (kets_.empty()) throw std::invalid_argument("VectorSet: need m >= 1 kets");
    for (const Ket& k : kets_)
      if (k.dim() != kets_.front().dim())
        throw std::invalid_argument("VectorSet: kets have mixed dimensions");
  }

  int size() const { return static_cast<int>(kets_.size()); }
  int dim() const { return kets_.front().dim(); }
  const Ket& ket(int i) const { return kets_[static_cast<std::size_t>(i)]; }
  const std::vector<Ket>& kets() const { return kets_; }

  // L = sum_i |phi_i><phi_i|
  Matrix projector_sum() const {
    Matrix l = Matrix::Zero(dim(), dim());
    for (const Ket& k : kets_) l += projector(k);
    return l;
  }

 private:
  std::vector<Ket> kets_;
};

// A_ij = |<phi_i|phi_j>|: symmetric, unit diagonal, entries in [0,1].
inline RealMatrix abs_gram(const VectorSet& vs) {
  const int m = vs.size();
  RealMatrix a(m, m);
  for (int i = 0; i < m; ++i) {
    a(i, i) = 1.0;
    for (int j = i + 1; j < m; ++j) {
      double v = std::abs(inner_product(vs.ket(i), vs.ket(j)));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

struct GelfandResult {
  // values[i] = b_{i+2} = (1^T A^{i+1} 1)^{1/(i+2)}, i.e. b_2 .. b_n_max
  std::vector<double> values;
  // ratio estimator S_n/S_{n-1} at n = n_max; converges to the Perron root
  // geometrically while the raw b_n close only like O(log/n)
  double tail_estimate = 0.0;
};

// Root-of-sums sequence b_n = (sum over index tuples of overlap products)^{1/n}
// = (1^T A^{n-1} 1)^{1/n}. Powers of A are renormalized each step and the
// scale tracked in logs, so entries never overflow no matter how large n
// or m get.
inline GelfandResult gelfand_sequence(const VectorSet& vs, int n_max) {
  if (n_max < 2) throw std::invalid_argument("gelfand_sequence: need n_max >= 2");
  const RealMatrix a = abs_gram(vs);
  const int m = vs.size();
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(m);

  GelfandResult res;
  res.values.reserve(static_cast<std::size_t>(n_max) - 1);

  Eigen::VectorXd v = one;  // v = A^{n-1} 1 up to the tracked scale
  double log_scale = 0.0;
  double prev_log_s = std::log(static_cast<double>(m));  // S_1 = 1^T 1
  for (int n = 2; n <= n_max; ++n) {
    v = (a * v).eval();
    double mx = v.maxCoeff();
    if (mx > 0.0) {
      v /= mx;
      log_scale += std::log(mx);
    }
    double s = one.dot(v);
    double log_s = log_scale + std::log(s);  // log(1^T A^{n-1} 1)
    res.values.push_back(std::exp(log_s / n));
    if (n == n_max) res.tail_estimate = std::exp(log_s - prev_log_s);
    prev_log_s = log_s;
  }
  return res;
}

inline constexpr int kGelfandCheckTerms = 64;
inline constexpr double kGelfandCheckTol = 1e-6;

// Upper bound on ||sum_i |phi_i><phi_i||| : the Perron root of the
// absolute Gram matrix. The root-of-sums limit is not directly computable,
// so the identification is cross-checked against the sequence's tail
// estimate at n = 64 and a miss is reported as a convergence failure.
inline double lemma_bound(const VectorSet& vs) {
  const RealMatrix a = abs_gram(vs);
  std::vector<double> evs = hermitian_eigenvalues(a.cast<Complex>());
  double perron = evs.back();

  double residual =
      std::abs(gelfand_sequence(vs, kGelfandCheckTerms).tail_estimate - perron);
  if (residual > kGelfandCheckTol)
    throw ConvergenceError(
        "lemma_bound: root-of-sums tail disagrees with the Perron root",
        residual);
  return perron;
}

// (2 sqrt(d) + d - 1) / (sqrt(d)(d+1)); the ceiling on the success
// probability when the input state is itself a MUB basis vector.
inline double theorem_bound(int d) {
  if (d < 2) throw std::invalid_argument("theorem_bound: need d >= 2");
  const double s = std::sqrt(static_cast<double>(d));
  return (2.0 * s + d - 1.0) / (s * (d + 1));
}

// One vector per non-standard basis: choice maps mu in 1..d to the picked
// j (0-based). Feeding the result to lemma_bound gives the
// (sqrt(d)+d-1)/sqrt(d) closed form for any certified family.
inline VectorSet mub_selection(const MubFamily& mubs,
                               const std::map<int, int>& choice) {
  std::vector<Ket> kets;
  kets.reserve(static_cast<std::size_t>(mubs.d));
  for (int mu = 1; mu <= mubs.d; ++mu) {
    auto it = choice.find(mu);
    if (it == choice.end())
      throw std::invalid_argument("mub_selection: missing choice for a basis");
    kets.push_back(mubs.basis(mu).ket(it->second));
  }
  return VectorSet(std::move(kets));
}

struct TheoremCertificate {
  int d = 0;
  double p_value = 0.0;       // P(|Psi^0_1><Psi^0_1|, chi, s_max)
  double intermediate = 0.0;  // (1/(d+1)) [1 + (1/d) sum_k ||L_k||]
  double bound = 0.0;         // theorem_bound(d)
  std::vector<double> per_k_norms;
  double slack_intermediate = 0.0;  // intermediate - p_value
  double slack_bound = 0.0;         // bound - intermediate
};

// Certifies the restricted-input bound chain for rho = |Psi^0_1><Psi^0_1|
// (any MUB-vector input reduces to this case by relabeling):
//   P <= (1/(d+1)) [1 + (1/d) sum_k ||L_k||] <= theorem_bound(d),
// with L_k = sum_{mu=1..d} |Psi^mu_smax(k,mu)><Psi^mu_smax(k,mu)|. Both
// slacks should come out nonnegative for every chi.
inline TheoremCertificate certify_theorem(const MubFamily& mubs,
                                          const Basis& chi) {
  const int d = mubs.d;
  DensityOperator rho = DensityOperator::pure(mubs.basis(0).ket(0));
  DecisionTable smax = optimal_decision(rho, chi, mubs);
  GameReport rep = success_probability(rho, chi, smax, mubs);

  TheoremCertificate cert;
  cert.d = d;
  cert.p_value = rep.total;
  cert.bound = theorem_bound(d);
  cert.per_k_norms.reserve(static_cast<std::size_t>(d));

  double norm_sum = 0.0;
  for (int k = 0; k < d; ++k) {
    Matrix lk = Matrix::Zero(d, d);
    for (int mu = 1; mu <= d; ++mu) {
      Vector psi = mubs.vector(mu, smax(k, mu));
      lk += psi * psi.adjoint();
    }
    double nk = operator_norm(lk);
    cert.per_k_norms.push_back(nk);
    norm_sum += nk;
  }
  cert.intermediate = (1.0 + norm_sum / d) / (d + 1);
  cert.slack_intermediate = cert.intermediate - cert.p_value;
  cert.slack_bound = cert.bound - cert.intermediate;
  return cert;
}

}  // namespace mkp
