#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "mkp/bounds.hpp"
#include "mkp/game.hpp"
#include "mkp/linalg.hpp"
#include "mkp/mub.hpp"
#include "mkp/rng.hpp"

namespace mkp {

struct ScanConfig {
  int d = 0;
  int trials = 1000;
  std::uint64_t master_seed = 0;
  int threads = 1;
};

struct ScanRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  double probability = 0.0;
  bool exceeds = false;  // strict P > aravind_bound(d)
};

struct ScanSummary {
  int d = 0;
  int trials = 0;
  std::uint64_t master_seed = 0;
  double bound = 0.0;
  double max_probability = 0.0;
  double mean_probability = 0.0;
  int exceed_count = 0;
  // present when rho is (numerically) a MUB basis vector; true iff every
  // trial respected the restricted-input ceiling
  std::optional<bool> theorem_check;
};

struct ScanResult {
  std::vector<ScanRecord> records;
  ScanSummary summary;
};

// Evaluates P(rho, chi_t, s_max) for `trials` independent Haar bases,
// chi_t = haar_random_basis(d, derive_seed(master, t)). Each record is a
// pure function of (master_seed, t), so chunking the trial range across
// threads changes nothing in the output.
inline ScanResult scan(const ScanConfig& cfg, const DensityOperator& rho,
                       const MubFamily& mubs) {
  if (cfg.trials < 1) throw std::invalid_argument("scan: need trials >= 1");
  if (cfg.d != mubs.d || rho.dim() != cfg.d)
    throw std::invalid_argument("scan: dimension mismatch");

  const int d = cfg.d;
  const double bound = aravind_bound(d);

  // Is rho itself one of the MUB vectors? If so every trial must also sit
  // under the restricted-input ceiling.
  bool rho_is_mub_vector = false;
  for (int mu = 0; mu <= d && !rho_is_mub_vector; ++mu)
    for (int j = 0; j < d; ++j)
      if (rho.expectation(mubs.vector(mu, j)) >= 1.0 - 1e-12) {
        rho_is_mub_vector = true;
        break;
      }

  ScanResult res;
  res.records.resize(static_cast<std::size_t>(cfg.trials));

  auto run_range = [&](int begin, int end) {
    for (int t = begin; t < end; ++t) {
      std::uint64_t seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(t));
      Basis chi = haar_random_basis(d, seed);
      DecisionTable smax = optimal_decision(rho, chi, mubs);
      double p = success_probability(rho, chi, smax, mubs).total;
      res.records[static_cast<std::size_t>(t)] = {t, seed, p, p > bound};
    }
  };

  int threads = std::max(1, cfg.threads);
  if (threads == 1 || cfg.trials < 2 * threads) {
    run_range(0, cfg.trials);
  } else {
    std::vector<std::thread> pool;
    int chunk = (cfg.trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      int begin = w * chunk;
      int end = std::min(cfg.trials, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }

  ScanSummary& s = res.summary;
  s.d = d;
  s.trials = cfg.trials;
  s.master_seed = cfg.master_seed;
  s.bound = bound;
  double acc = 0.0;
  bool all_under_theorem = true;
  const double theorem_ceiling = theorem_bound(d);
  for (const ScanRecord& r : res.records) {
    acc += r.probability;
    s.max_probability = std::max(s.max_probability, r.probability);
    if (r.exceeds) ++s.exceed_count;
    if (r.probability > theorem_ceiling + 1e-9) all_under_theorem = false;
  }
  s.mean_probability = acc / cfg.trials;
  if (rho_is_mub_vector) s.theorem_check = all_under_theorem;
  return res;
}

struct HillClimbConfig {
  int max_iterations = 2000;
  double initial_angle = 0.5;  // radians
  double decay = 0.999;        // per-iteration shrink of the proposal angle
  int stall_limit = 500;       // consecutive rejections before giving up
  std::uint64_t seed = 0;

  void validate() const {
    if (max_iterations < 1 || initial_angle <= 0.0 || decay <= 0.0 ||
        stall_limit < 1)
      throw std::invalid_argument("HillClimbConfig: all fields must be positive");
  }
};

struct HillClimbResult {
  Basis basis;
  double probability = 0.0;
  std::vector<double> accepted_values;  // nondecreasing by construction
  int iterations = 0;
};

// Stochastic ascent over the basis manifold: random two-level rotations
// mixing a pair of basis vectors through an angle drawn from a shrinking
// window, keeping only strict improvements of P(rho, chi, s_max).
inline HillClimbResult hill_climb(const DensityOperator& rho, const Basis& chi0,
                                  const MubFamily& mubs,
                                  const HillClimbConfig& cfg) {
  cfg.validate();
  const int d = mubs.d;
  if (rho.dim() != d || chi0.dim() != d)
    throw std::invalid_argument("hill_climb: dimension mismatch");
  require_orthonormal(chi0, kOrthonormalTol, "hill_climb");

  auto evaluate = [&](const Basis& b) {
    return success_probability(rho, b, optimal_decision(rho, b, mubs), mubs)
        .total;
  };

  SplitMix64 rng(cfg.seed);
  Matrix current = chi0.matrix();
  double best = evaluate(chi0);

  HillClimbResult res{Basis(current), best, {best}, 0};
  double angle = cfg.initial_angle;
  int stall = 0;

  const double two_pi = 6.283185307179586476925286766559;
  for (int it = 0; it < cfg.max_iterations; ++it, angle *= cfg.decay) {
    res.iterations = it + 1;
    int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(d - 1)));
    if (q >= p) ++q;
    double theta = (2.0 * rng.uniform01() - 1.0) * angle;
    double phase = two_pi * rng.uniform01();

    // rotate within span(chi_p, chi_q); unitary, so orthonormality is kept
    Complex c(std::cos(theta), 0.0);
    Complex s = std::sin(theta) * Complex(std::cos(phase), std::sin(phase));
    Matrix candidate = current;
    candidate.col(p) = c * current.col(p) + s * current.col(q);
    candidate.col(q) = -std::conj(s) * current.col(p) + c * current.col(q);

    double value = evaluate(Basis(candidate));
    if (value > best) {
      best = value;
      current = std::move(candidate);
      res.accepted_values.push_back(best);
      stall = 0;
    } else if (++stall >= cfg.stall_limit) {
      break;
    }
  }

  res.basis = Basis(std::move(current));
  res.probability = best;
  return res;
}

}  // namespace mkp
