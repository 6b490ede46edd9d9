#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "mkp/bounds.hpp"
#include "mkp/mub.hpp"
#include "test_util.hpp"

using namespace mkp;

namespace {

// Direct evaluation of the root-of-sums terms: S_n as a literal sum over
// all m^n index tuples of the overlap-modulus products. Exponential, only
// usable for tiny m and n — which is exactly why it makes an independent
// oracle for the matrix-power route.
double nested_sum(const RealMatrix& a, int n) {
  const int m = static_cast<int>(a.rows());
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double total = 0.0;
  while (true) {
    double prod = 1.0;
    for (int k = 0; k + 1 < n; ++k)
      prod *= a(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(k + 1)]);
    total += prod;
    int c = n - 1;
    while (c >= 0 && ++idx[static_cast<std::size_t>(c)] == m) {
      idx[static_cast<std::size_t>(c)] = 0;
      --c;
    }
    if (c < 0) break;
  }
  return total;
}

VectorSet one_per_basis(const MubFamily& fam, int j = 0) {
  std::map<int, int> choice;
  for (int mu = 1; mu <= fam.d; ++mu) choice[mu] = j;
  return mub_selection(fam, choice);
}

}  // namespace

TEST_CASE("abs_gram stock cases") {
  VectorSet ortho({Ket::basis_state(3, 0), Ket::basis_state(3, 1), Ket::basis_state(3, 2)});
  CHECK(abs_gram(ortho) == RealMatrix::Identity(3, 3));

  Ket k = Ket::basis_state(2, 0);
  VectorSet repeated({k, k});
  CHECK(abs_gram(repeated) == RealMatrix::Ones(2, 2));

  RealMatrix g = abs_gram(one_per_basis(mub_family(4)));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double expected = (i == j) ? 1.0 : 0.5;  // 1/sqrt(d)
      CHECK(std::abs(g(i, j) - expected) < 1e-12);
    }
}

TEST_CASE("gelfand_sequence of a single vector is identically one") {
  VectorSet single({Ket::basis_state(5, 2)});
  GelfandResult res = gelfand_sequence(single, 16);
  CHECK(res.values.size() == 15);
  for (double b : res.values) CHECK(std::abs(b - 1.0) < 1e-14);
  CHECK(std::abs(res.tail_estimate - 1.0) < 1e-14);
  CHECK_THROWS_AS(gelfand_sequence(single, 1), std::invalid_argument);
}

TEST_CASE("matrix-power evaluation equals the literal nested sum") {
  SplitMix64 rng(83);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 2 + static_cast<int>(rng.below(3));  // up to 4
    int d = 2 + static_cast<int>(rng.below(4));
    VectorSet vs = test_util::random_vector_set(m, d, rng);
    RealMatrix a = abs_gram(vs);
    GelfandResult res = gelfand_sequence(vs, 6);
    for (int n = 2; n <= 6; ++n) {
      double direct = std::pow(nested_sum(a, n), 1.0 / n);
      CHECK(std::abs(res.values[static_cast<std::size_t>(n - 2)] - direct) < 1e-12);
    }
  }
}

TEST_CASE("uniform-overlap set: the sequence follows its closed form") {
  // One vector per non-standard basis gives A = I + (J-I)/sqrt(d) whose
  // Perron vector is the all-ones vector, so b_n = rho (d/rho)^(1/n)
  // exactly, with rho = (sqrt(d)+d-1)/sqrt(d).
  MubFamily fam = mub_family(4);
  VectorSet vs = one_per_basis(fam);
  const double rho = 2.5;
  GelfandResult res = gelfand_sequence(vs, 64);
  for (int n = 2; n <= 64; ++n) {
    double expected = rho * std::pow(4.0 / rho, 1.0 / n);
    CHECK(std::abs(res.values[static_cast<std::size_t>(n - 2)] - expected) < 1e-12);
  }
  CHECK(std::abs(res.tail_estimate - rho) < 1e-12);
  // the raw terms decrease toward the limit but are still visibly above
  // it at n=64; the ratio estimator is what has converged
  CHECK(res.values.back() > rho + 1e-2);
}

TEST_CASE("lemma_bound closed form on MUB selections, any selection") {
  SplitMix64 rng(89);
  for (int d : {3, 4, 5}) {
    MubFamily fam = mub_family(d);
    const double expected = (std::sqrt(static_cast<double>(d)) + d - 1) /
                            std::sqrt(static_cast<double>(d));
    for (int trial = 0; trial < 5; ++trial) {
      std::map<int, int> choice;
      for (int mu = 1; mu <= d; ++mu)
        choice[mu] = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
      CHECK(std::abs(lemma_bound(mub_selection(fam, choice)) - expected) < 1e-10);
    }
  }
}

TEST_CASE("lemma_bound bounds the projector-sum norm") {
  VectorSet ortho({Ket::basis_state(4, 0), Ket::basis_state(4, 1)});
  CHECK(std::abs(lemma_bound(ortho) - 1.0) < 1e-12);
  CHECK(std::abs(operator_norm(ortho.projector_sum()) - 1.0) < 1e-12);

  SplitMix64 rng(97);
  for (int trial = 0; trial < 60; ++trial) {
    int m = 1 + static_cast<int>(rng.below(8));
    int d = 2 + static_cast<int>(rng.below(5));
    VectorSet vs = test_util::random_vector_set(m, d, rng);
    double bound = lemma_bound(vs);
    double norm = operator_norm(vs.projector_sum());
    REQUIRE(norm <= bound + 1e-9);
  }
}

TEST_CASE("lemma_bound reports a convergence miss on a near-degenerate gram") {
  // Three nearly orthogonal kets: the absolute Gram is I plus ~1e-4
  // couplings, the spectral gap collapses, and the ratio tail cannot reach
  // 1e-6 by n=64.
  Vector v1(3), v2(3), v3(3);
  v1 << 1.0, 0.0, 0.0;
  v2 << 1e-4, 1.0, 0.0;
  v3 << 2e-4, 3e-4, 1.0;
  VectorSet vs({Ket::normalized(v1), Ket::normalized(v2), Ket::normalized(v3)});
  try {
    lemma_bound(vs);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 1e-6);
  }
}

TEST_CASE("theorem_bound equals aravind_bound and the published values") {
  CHECK(std::abs(theorem_bound(4) - 0.7) < 1e-15);
  CHECK(std::abs(theorem_bound(3) - 0.7887) < 5e-5);
  for (int d = 2; d <= 16; ++d) CHECK(theorem_bound(d) == aravind_bound(d));
  CHECK_THROWS_AS(theorem_bound(1), std::invalid_argument);
}

TEST_CASE("mub_selection validates its choice map") {
  MubFamily fam = mub_family(3);
  std::map<int, int> partial{{1, 0}, {2, 0}};
  CHECK_THROWS_AS(mub_selection(fam, partial), std::invalid_argument);
}

TEST_CASE("certify_theorem: every chain link has nonnegative slack") {
  SplitMix64 rng(101);
  for (int d : {3, 4}) {
    MubFamily fam = mub_family(d);
    const int trials = (d == 3) ? 200 : 50;
    for (int trial = 0; trial < trials; ++trial) {
      TheoremCertificate cert = certify_theorem(fam, haar_random_basis(d, rng.next()));
      CHECK(cert.slack_intermediate >= -1e-9);
      CHECK(cert.slack_bound >= -1e-9);
      CHECK(cert.p_value <= cert.bound + 1e-9);
      for (double nk : cert.per_k_norms)
        CHECK(nk <= (std::sqrt(static_cast<double>(d)) + d - 1) /
                            std::sqrt(static_cast<double>(d)) + 1e-9);
    }
  }
}

TEST_CASE("certify_theorem analytic corner: chi aligned with basis 0") {
  for (int d : {3, 4}) {
    MubFamily fam = mub_family(d);
    TheoremCertificate cert = certify_theorem(fam, Basis(fam.basis(0).matrix()));
    CHECK(std::abs(cert.p_value - 2.0 / (d + 1)) < 1e-12);
    CHECK(cert.p_value < cert.bound);
  }
}

TEST_CASE("VectorSet validates member kets") {
  CHECK_THROWS_AS(VectorSet({}), std::invalid_argument);
  CHECK_THROWS_AS(VectorSet({Ket::basis_state(2, 0), Ket::basis_state(3, 0)}),
                  std::invalid_argument);
}
