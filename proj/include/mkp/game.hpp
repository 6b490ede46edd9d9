#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mkp/linalg.hpp"
#include "mkp/mub.hpp"

namespace mkp {

// Input state rho: Hermitian, PSD, trace 1. Pure states keep their witness
// ket but are evaluated through the general matrix path, so linearity in
// rho holds by construction.
class DensityOperator {
 public:
  explicit DensityOperator(Matrix m, std::optional<Ket> witness = std::nullopt)
      : m_(std::move(m)), witness_(std::move(witness)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
      throw std::invalid_argument("DensityOperator: matrix must be square");
    double herm = hermiticity_deviation(m_);
    if (herm > kHermitianTol) {
      std::ostringstream os;
      os << "DensityOperator: not Hermitian (deviation " << herm << ")";
      throw std::invalid_argument(os.str());
    }
    double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > 1e-10) {
      std::ostringstream os;
      os << "DensityOperator: trace deviates from 1 by " << std::abs(tr - 1.0);
      throw std::invalid_argument(os.str());
    }
    std::vector<double> evs = hermitian_eigenvalues(m_);
    if (evs.front() < -kPsdTol) {
      std::ostringstream os;
      os << "DensityOperator: negative eigenvalue " << evs.front();
      throw std::invalid_argument(os.str());
    }
  }

  static DensityOperator pure(const Ket& k) {
    return DensityOperator(projector(k), k);
  }

  static DensityOperator maximally_mixed(int d) {
    if (d < 1) throw std::invalid_argument("maximally_mixed: d must be >= 1");
    return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  const std::optional<Ket>& witness() const { return witness_; }

  // <psi|rho|psi>
  double expectation(const Vector& psi) const {
    return (psi.adjoint() * m_ * psi)(0, 0).real();
  }

 private:
  Matrix m_;
  std::optional<Ket> witness_;
};

// Guess table s: (k, mu) -> j. Stored 0-based as guess[mu][k]; the
// serialized form uses 1-based j and k with 0-based mu.
struct DecisionTable {
  int d = 0;
  std::vector<std::vector<int>> guess;  // guess[mu][k], mu = 0..d, k,j = 0..d-1

  int operator()(int k, int mu) const {
    return guess[static_cast<std::size_t>(mu)][static_cast<std::size_t>(k)];
  }

  void validate() const {
    if (d < 1 || static_cast<int>(guess.size()) != d + 1)
      throw std::invalid_argument("DecisionTable: expected d+1 columns");
    for (const auto& col : guess) {
      if (static_cast<int>(col.size()) != d)
        throw std::invalid_argument("DecisionTable: expected d entries per mu");
      for (int j : col)
        if (j < 0 || j >= d)
          throw std::invalid_argument("DecisionTable: guess out of range 1..d");
    }
  }
};

struct GameReport {
  double total = 0.0;            // mean of per_mu (uniform prior 1/(d+1))
  std::vector<double> per_mu;    // conditional success given the king's mu
  DecisionTable decision;
};

namespace detail {

// weights[mu][j] = <Psi^mu_j|rho|Psi^mu_j>, overlaps[mu](j,k) = |<Psi^mu_j|chi_k>|^2
struct GameTables {
  int d;
  std::vector<std::vector<double>> weights;
  std::vector<RealMatrix> overlaps;
};

inline GameTables game_tables(const DensityOperator& rho, const Basis& chi,
                              const MubFamily& mubs) {
  const int d = mubs.d;
  if (rho.dim() != d || chi.dim() != d)
    throw std::invalid_argument("game: dimension mismatch between rho, chi, and MUB family");
  require_orthonormal(chi, kOrthonormalTol, "game");

  GameTables t;
  t.d = d;
  t.weights.resize(static_cast<std::size_t>(d) + 1);
  t.overlaps.resize(static_cast<std::size_t>(d) + 1);
  for (int mu = 0; mu <= d; ++mu) {
    const Matrix& b = mubs.basis(mu).matrix();
    auto& w = t.weights[static_cast<std::size_t>(mu)];
    w.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) w[static_cast<std::size_t>(j)] = rho.expectation(b.col(j));
    t.overlaps[static_cast<std::size_t>(mu)] =
        (b.adjoint() * chi.matrix()).cwiseAbs2();  // (j,k)
  }
  return t;
}

inline GameReport evaluate(const GameTables& t, DecisionTable s) {
  const int d = t.d;
  GameReport rep;
  rep.per_mu.resize(static_cast<std::size_t>(d) + 1);
  double acc = 0.0;
  for (int mu = 0; mu <= d; ++mu) {
    double cond = 0.0;
    for (int k = 0; k < d; ++k) {
      int j = s(k, mu);
      cond += t.weights[static_cast<std::size_t>(mu)][static_cast<std::size_t>(j)] *
              t.overlaps[static_cast<std::size_t>(mu)](j, k);
    }
    rep.per_mu[static_cast<std::size_t>(mu)] = cond;
    acc += cond;
  }
  rep.total = acc / static_cast<double>(d + 1);
  rep.decision = std::move(s);
  return rep;
}

}  // namespace detail

// P(k|mu,j,chi) = |<Psi^mu_j|chi_k>|^2
inline double outcome_probability(const MubFamily& mubs, int mu, int j,
                                  const Basis& chi, int k) {
  const int d = mubs.d;
  if (mu < 0 || mu > d || j < 0 || j >= d || k < 0 || k >= d)
    throw std::out_of_range("outcome_probability: index out of range");
  if (chi.dim() != d)
    throw std::invalid_argument("outcome_probability: dimension mismatch");
  Complex ov = mubs.vector(mu, j).dot(chi.column(k));
  return std::norm(ov);
}

// Success probability of the strategy (rho, chi, s) against a king who
// draws uniformly among the d+1 bases:
//   P = 1/(d+1) sum_mu sum_k <Psi^mu_s(k,mu)|rho|Psi^mu_s(k,mu)> |<Psi^mu_s(k,mu)|chi_k>|^2
inline GameReport success_probability(const DensityOperator& rho,
                                      const Basis& chi,
                                      const DecisionTable& s,
                                      const MubFamily& mubs) {
  if (s.d != mubs.d)
    throw std::invalid_argument("success_probability: decision table dimension mismatch");
  s.validate();
  return detail::evaluate(detail::game_tables(rho, chi, mubs), s);
}

// Pointwise-argmax decision rule: s(k,mu) maximizes
// <Psi^mu_j|rho|Psi^mu_j>|<Psi^mu_j|chi_k>|^2 over j, ties to the smallest j.
inline DecisionTable optimal_decision(const DensityOperator& rho,
                                      const Basis& chi,
                                      const MubFamily& mubs) {
  detail::GameTables t = detail::game_tables(rho, chi, mubs);
  const int d = t.d;
  DecisionTable s;
  s.d = d;
  s.guess.assign(static_cast<std::size_t>(d) + 1,
                 std::vector<int>(static_cast<std::size_t>(d), 0));
  for (int mu = 0; mu <= d; ++mu)
    for (int k = 0; k < d; ++k) {
      int best = 0;
      double best_score = -1.0;
      for (int j = 0; j < d; ++j) {
        double score =
            t.weights[static_cast<std::size_t>(mu)][static_cast<std::size_t>(j)] *
            t.overlaps[static_cast<std::size_t>(mu)](j, k);
        if (score > best_score) {
          best_score = score;
          best = j;
        }
      }
      s.guess[static_cast<std::size_t>(mu)][static_cast<std::size_t>(k)] = best;
    }
  return s;
}

struct BruteForceResult {
  DecisionTable table;  // lexicographically smallest maximizer
  double value = 0.0;
  std::uint64_t candidates_visited = 0;
};

// Exhaustive maximization over all d^(d(d+1)) decision tables. Cells are
// flattened in (mu, k) order and enumerated as an odometer with the last
// cell spinning fastest; each candidate's value is a fresh sum over its
// cells, so no rounding drift accumulates across the enumeration, and only
// a strict improvement replaces the incumbent — the first maximizer in
// enumeration order, i.e. the lexicographically smallest, wins.
inline BruteForceResult brute_force_decision(const DensityOperator& rho,
                                             const Basis& chi,
                                             const MubFamily& mubs) {
  const int d = mubs.d;
  if (d > 3)
    throw std::invalid_argument(
        "brute_force_decision: search space d^(d(d+1)) is only enumerable for d <= 3");
  detail::GameTables t = detail::game_tables(rho, chi, mubs);

  const int cells = d * (d + 1);
  std::vector<double> cell_weight(static_cast<std::size_t>(cells * d));
  auto w = [&](int cell, int j) {
    return cell_weight[static_cast<std::size_t>(cell * d + j)];
  };
  for (int mu = 0; mu <= d; ++mu)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        cell_weight[static_cast<std::size_t>((mu * d + k) * d + j)] =
            t.weights[static_cast<std::size_t>(mu)][static_cast<std::size_t>(j)] *
            t.overlaps[static_cast<std::size_t>(mu)](j, k);

  std::vector<int> digits(static_cast<std::size_t>(cells), 0);
  auto table_value = [&]() {
    double v = 0.0;
    for (int c = 0; c < cells; ++c) v += w(c, digits[static_cast<std::size_t>(c)]);
    return v;
  };

  std::vector<int> best = digits;
  double best_value = table_value();
  std::uint64_t visited = 1;

  while (true) {
    int c = cells - 1;
    while (c >= 0 && ++digits[static_cast<std::size_t>(c)] == d) {
      digits[static_cast<std::size_t>(c)] = 0;
      --c;
    }
    if (c < 0) break;
    ++visited;
    double value = table_value();
    if (value > best_value) {
      best_value = value;
      best = digits;
    }
  }

  BruteForceResult res;
  res.table.d = d;
  res.table.guess.assign(static_cast<std::size_t>(d) + 1,
                         std::vector<int>(static_cast<std::size_t>(d), 0));
  for (int mu = 0; mu <= d; ++mu)
    for (int k = 0; k < d; ++k)
      res.table.guess[static_cast<std::size_t>(mu)][static_cast<std::size_t>(k)] =
          best[static_cast<std::size_t>(mu * d + k)];
  res.value = best_value / static_cast<double>(d + 1);
  res.candidates_visited = visited;
  return res;
}

struct BijectiveDecisionResult {
  bool ok = false;
  DecisionTable table;          // valid only when ok
  std::vector<int> failing_mu;  // bases where f_mu is not a bijection
};

// The inverse-argmax rule s(k,mu) = f_mu^{-1}(k) with
// f_mu(j) = argmax_k |<Psi^mu_j|chi_k>|^2 (ties to the smallest k). The
// state weight multiplies every k equally, so it cannot move the argmax
// and is omitted; this also keeps rows with zero weight meaningful. Fails
// whenever some f_mu is not a bijection.
inline BijectiveDecisionResult bijective_decision(const DensityOperator& rho,
                                                  const Basis& chi,
                                                  const MubFamily& mubs) {
  detail::GameTables t = detail::game_tables(rho, chi, mubs);
  const int d = t.d;

  BijectiveDecisionResult res;
  res.table.d = d;
  res.table.guess.assign(static_cast<std::size_t>(d) + 1,
                         std::vector<int>(static_cast<std::size_t>(d), 0));
  for (int mu = 0; mu <= d; ++mu) {
    std::vector<int> f(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      int best = 0;
      double best_score = -1.0;
      for (int k = 0; k < d; ++k) {
        double score = t.overlaps[static_cast<std::size_t>(mu)](j, k);
        if (score > best_score) {
          best_score = score;
          best = k;
        }
      }
      f[static_cast<std::size_t>(j)] = best;
    }
    std::vector<int> inverse(static_cast<std::size_t>(d), -1);
    bool bijective = true;
    for (int j = 0; j < d; ++j) {
      int k = f[static_cast<std::size_t>(j)];
      if (inverse[static_cast<std::size_t>(k)] != -1) bijective = false;
      inverse[static_cast<std::size_t>(k)] = j;
    }
    if (!bijective) {
      res.failing_mu.push_back(mu);
      continue;
    }
    for (int k = 0; k < d; ++k)
      res.table.guess[static_cast<std::size_t>(mu)][static_cast<std::size_t>(k)] =
          inverse[static_cast<std::size_t>(k)];
  }
  res.ok = res.failing_mu.empty();
  return res;
}

// (2 sqrt(d) + d - 1) / (sqrt(d) (d + 1))
inline double aravind_bound(int d) {
  if (d < 2) throw std::invalid_argument("aravind_bound: need d >= 2");
  const double s = std::sqrt(static_cast<double>(d));
  return (2.0 * s + d - 1.0) / (s * (d + 1));
}

// All (j, mu) with |<Psi^mu_j|phi>|^2 < tol, sorted by (mu, j); j is
// 1-based and mu 0-based, matching the serialized convention.
inline std::vector<std::pair<int, int>> zero_overlap_pairs(
    const Ket& phi, const MubFamily& mubs, double tol = 1e-12) {
  if (tol <= 0.0)
    throw std::invalid_argument("zero_overlap_pairs: tol must be > 0");
  if (phi.dim() != mubs.d)
    throw std::invalid_argument("zero_overlap_pairs: dimension mismatch");
  std::vector<std::pair<int, int>> pairs;
  for (int mu = 0; mu <= mubs.d; ++mu)
    for (int j = 0; j < mubs.d; ++j)
      if (std::norm(mubs.vector(mu, j).dot(phi.vec())) < tol)
        pairs.emplace_back(j + 1, mu);
  return pairs;
}

}  // namespace mkp
