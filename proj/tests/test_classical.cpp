#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "urec/classical.hpp"

using namespace urec;

namespace {

MarkovChain symmetric_line_walk(std::size_t n_max) {
  const std::size_t w = n_max + 2;
  const Eigen::Index d = 2 * Eigen::Index(w) + 1;
  Eigen::SparseMatrix<double> p(d, d);
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (i > 0) trip.emplace_back(i, i - 1, 0.5);
    if (i < d - 1) trip.emplace_back(i, i + 1, 0.5);
  }
  p.setFromTriplets(trip.begin(), trip.end());
  return MarkovChain::validated(std::move(p), int(w), true);
}

double binom(int n, int k) {
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc = acc * double(n - k + i) / double(i);
  return acc;
}

std::vector<double> quarter_turn_p(std::size_t n_max) {
  // p_n = cos^2(n pi/4) from the exact 8-periodic table
  const double table[8] = {1.0, 0.5, 0.0, 0.5, 1.0, 0.5, 0.0, 0.5};
  std::vector<double> p(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) p[n] = table[n % 8];
  return p;
}

}  // namespace

TEST_CASE("chain validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.6, 0.5, 0.5;
  CHECK_THROWS_AS(MarkovChain::validated(bad), ValidationError);
  bad << -0.1, 1.1, 0.5, 0.5;
  CHECK_THROWS_AS(MarkovChain::validated(bad), ValidationError);
  Eigen::MatrixXd leaky(2, 2);
  leaky << 0.5, 0.3, 0.0, 0.9;  // rows below 1 are fine only for truncations
  CHECK_THROWS_AS(MarkovChain::validated(leaky), ValidationError);
  CHECK_NOTHROW(MarkovChain::validated(leaky, 0, /*boundary_truncated=*/true));
}

TEST_CASE("return sequences of simple chains") {
  const auto ident = MarkovChain::validated(Eigen::MatrixXd::Identity(3, 3));
  const auto rid = return_sequence(ident, 12);
  for (const double v : rid.p) CHECK(v == doctest::Approx(1.0));

  Eigen::MatrixXd flip(2, 2);
  flip << 0.0, 1.0, 1.0, 0.0;
  const auto rf = return_sequence(MarkovChain::validated(flip), 9);
  for (std::size_t n = 0; n <= 9; ++n) CHECK(rf.p[n] == doctest::Approx(n % 2 == 0 ? 1.0 : 0.0));

  const auto rw = return_sequence(symmetric_line_walk(40), 40);
  for (int n = 1; n <= 20; ++n) {
    CHECK(std::abs(rw.p[2 * n] - binom(2 * n, n) * std::pow(4.0, -n)) < 1e-12);
    CHECK(rw.p[2 * n - 1] == doctest::Approx(0.0));
  }
}

TEST_CASE("renewal inversion") {
  // constant return: first return is certain at step one
  std::vector<double> ones(10, 1.0);
  const auto q1 = first_return_from_return(ones);
  CHECK(q1[1] == doctest::Approx(1.0));
  for (std::size_t n = 2; n < q1.size(); ++n) CHECK(q1[n] == doctest::Approx(0.0));

  // symmetric line walk: q_{2n} = binom(2n,n)/((2n-1) 4^n)
  const auto rw = return_sequence(symmetric_line_walk(40), 40);
  const auto qw = first_return_from_return(rw.p);
  for (int n = 1; n <= 20; ++n)
    CHECK(std::abs(qw[2 * n] - binom(2 * n, n) / ((2.0 * n - 1.0) * std::pow(4.0, n))) < 1e-12);

  // quantum quarter-turn pseudo-probabilities go negative
  const auto qq = first_return_from_return(quarter_turn_p(16));
  CHECK(qq[2] == -0.25);  // exact in floating point
}

TEST_CASE("negative mass of the quarter-turn pseudo-probabilities") {
  const auto q = first_return_from_return(quarter_turn_p(10000));
  double neg = 0.0;
  for (const double v : q)
    if (v < 0.0) neg += v;
  CHECK(neg > -0.80);
  CHECK(neg < -0.74);
}

TEST_CASE("renewal round trip is exact") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p{1.0};
  for (int n = 0; n < 40; ++n) p.push_back(u(rng));
  const auto q = first_return_from_return(p);
  const auto back = return_from_first_return(q);
  for (std::size_t n = 0; n < p.size(); ++n) CHECK(std::abs(back[n] - p[n]) < 1e-12);
}

TEST_CASE("polya classification") {
  std::vector<double> ones(512, 1.0);
  CHECK(polya_classify(ones).verdict == PolyaClass::recurrent);

  const auto rw = return_sequence(symmetric_line_walk(2000), 2000);
  CHECK(polya_classify(rw.p).verdict == PolyaClass::recurrent);

  std::vector<double> geo(801, 0.0);
  geo[0] = 1.0;
  for (int n = 1; n <= 400; ++n) geo[2 * n] = std::pow(4.0, -n);
  const auto rep = polya_classify(geo);
  CHECK(rep.verdict == PolyaClass::transient);
  CHECK(*rep.r_classical == doctest::Approx(0.25).epsilon(1e-12));

  // slowly divergent sums must stay inconclusive, not become transient
  std::vector<double> slow{1.0};
  for (int n = 1; n <= 4000; ++n) slow.push_back(0.1 / double(n));
  CHECK(polya_classify(slow).verdict == PolyaClass::inconclusive);
}

TEST_CASE("reversible spectral measure and classical return time") {
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  Eigen::VectorXd pi(2);
  pi << 0.5, 0.5;
  const auto sp = reversible_spectral(MarkovChain::validated(p), pi);
  CHECK(sp.mass_at_one == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(*sp.tau_classical == doctest::Approx(2.0).epsilon(1e-12));

  p << 0.7, 0.3, 0.1, 0.9;
  pi << 0.1, 0.3;  // detailed-balance vector (unnormalized)
  const auto sp2 = reversible_spectral(MarkovChain::validated(p), pi);
  CHECK(sp2.mass_at_one == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(*sp2.tau_classical == doctest::Approx(4.0).epsilon(1e-9));

  const auto spi = reversible_spectral(MarkovChain::validated(Eigen::MatrixXd::Identity(2, 2)),
                                       (Eigen::VectorXd(2) << 1.0, 1.0).finished());
  CHECK(spi.mass_at_one == doctest::Approx(1.0));
  CHECK(*spi.tau_classical == doctest::Approx(1.0));

  // detailed-balance violation names the offending pair
  p << 0.5, 0.5, 0.2, 0.8;
  pi << 0.5, 0.5;
  CHECK_THROWS_WITH_AS(reversible_spectral(MarkovChain::validated(p), pi),
                       doctest::Contains("detailed balance fails at pair (0,1)"),
                       ValidationError);
}

TEST_CASE("tau from spectral mass equals the renewal sum on random reversible chains") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int rep = 0; rep < 8; ++rep) {
    const int d = 2 + rep % 5;
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) a(i, j) = a(j, i) = u(rng);
    Eigen::VectorXd pi = a.rowwise().sum();
    Eigen::MatrixXd p = pi.cwiseInverse().asDiagonal() * a;
    const auto chain = MarkovChain::validated(p);
    const auto sp = reversible_spectral(chain, pi);
    const auto rs = return_sequence(chain, 6000);
    const auto q = first_return_from_return(rs.p);
    double tau_q = 0.0;
    for (std::size_t n = 0; n < q.size(); ++n) tau_q += double(n) * q[n];
    CHECK(std::abs(*sp.tau_classical - tau_q) < 1e-8);
  }
}

TEST_CASE("sjk quantities") {
  // quarter turn: tau^SJK = 1 + sum_n prod_{k<=n} sin^2(k pi/4) = 9/4
  const auto p = quarter_turn_p(64);
  const std::vector<double> pn(p.begin() + 1, p.end());
  std::vector<double> w{0.5, 0.5};
  const auto s = sjk_quantities(pn, w);
  CHECK(s.tau_sjk == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(*s.tau_tilde == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s.r_sjk == doctest::Approx(1.0).epsilon(1e-14));

  // termwise agreement of the product formula with the survival recursion
  double survival = 1.0;
  for (std::size_t n = 0; n < 32; ++n) {
    CHECK(std::abs(s.q_sjk[n + 1] - pn[n] * survival) < 1e-12);
    survival *= 1.0 - pn[n];
  }

  // point mass: p_n = 1 for all n
  std::vector<double> punit(16, 1.0);
  const auto su = sjk_quantities(punit);
  CHECK(su.r_sjk == doctest::Approx(1.0));
  CHECK(su.tau_sjk == doctest::Approx(1.0));

  std::vector<double> out_of_range{1.2};
  CHECK_THROWS_AS(sjk_quantities(out_of_range), ValidationError);
}

TEST_CASE("a single atom forces finite tau^SJK") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    // moments of atoms (one of weight >= 0.05) plus uniform a.c. background
    const int n_atoms = 1 + rep % 3;
    std::vector<double> wts(n_atoms), ang(n_atoms);
    double tot = 0.0;
    for (int i = 0; i < n_atoms; ++i) {
      wts[i] = 0.05 + 0.3 * u(rng);
      ang[i] = kTwoPi * u(rng);
      tot += wts[i];
    }
    std::vector<double> pn;
    double wiener_sum = 0.0;
    const std::size_t n_max = 10000;
    for (std::size_t n = 1; n <= n_max; ++n) {
      Complex mu{0.0};
      for (int i = 0; i < n_atoms; ++i) mu += wts[i] * unit(double(n) * ang[i]);
      pn.push_back(std::norm(mu));
      wiener_sum += std::norm(mu);
    }
    const auto s = sjk_quantities(pn);
    CHECK_FALSE(s.tau_lower_bound_only);  // the survival product hit the floor
    CHECK(s.r_sjk_tail < 1e-8);
    // Wiener diagnostic: (1/n) sum |mu_k|^2 stabilizes near sum m_i^2
    double m2 = 0.0;
    for (const double wv : wts) m2 += wv * wv;
    CHECK(std::abs(wiener_sum / double(n_max) - m2) < 0.05);
  }
}

TEST_CASE("generating function accessors") {
  RenewalSequences rs;
  rs.p = {1.0, 0.5, 0.25};
  rs.q = {0.0, 0.5, 0.25};
  CHECK(rs.p_hat(0.5) == doctest::Approx(1.0 + 0.25 + 0.0625));
  CHECK(rs.q_hat(1.0) == doctest::Approx(0.75));
}
