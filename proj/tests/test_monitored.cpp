#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "urec/monitored.hpp"

using namespace urec;
using urec::testing::random_atom_measure;
using urec::testing::random_state;
using urec::testing::random_unitary;

namespace {
UnitarySystem rotation_system(double theta = kPi / 4) {
  Eigen::MatrixXcd u(2, 2);
  u << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Eigen::VectorXcd phi(2);
  phi << 1.0, 0.0;
  return make_system(u, phi);
}
}  // namespace

TEST_CASE("eigenvector of a phase returns at the first step") {
  Eigen::MatrixXcd u(2, 2);
  const Complex ph = unit(0.7);
  u << ph, 0.0, 0.0, unit(2.1);
  Eigen::VectorXcd phi(2);
  phi << 1.0, 0.0;
  const auto rec = monitored_run(make_system(u, phi), 16);
  CHECK(std::abs(rec.a[1] - ph) < 1e-14);
  for (std::size_t n = 2; n <= 16; ++n) CHECK(std::abs(rec.a[n]) < 1e-14);
  CHECK(return_probability(rec).lower == doctest::Approx(1.0));
  const auto tau = expected_return_time(rec);
  CHECK(tau.status == ReturnTimeResult::Status::ok);
  CHECK(tau.tau == doctest::Approx(1.0));
  CHECK(return_time_variance(rec).variance == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("rotation benchmark against the geometric series oracle") {
  const double c = std::cos(kPi / 4);
  const auto rec = monitored_run(rotation_system(), 100);
  CHECK(std::abs(rec.a[1] - c) < 1e-15);
  CHECK(std::abs(rec.a[2] - (c * c - 1.0)) < 1e-15);
  CHECK(std::abs(rec.a[3] - c * (c * c - 1.0)) < 1e-15);
  // oracle: Taylor expansion of z conj-f, f = (c-z)/(1-cz)
  for (std::size_t n = 2; n <= 100; ++n)
    CHECK(std::abs(rec.a[n] - std::pow(c, double(n - 2)) * (c * c - 1.0)) < 1e-13);
  CHECK(rec.r_partial >= 1.0 - 1e-8);
  CHECK(std::abs(expected_return_time(rec).tau - 2.0) < 1e-6);
  CHECK(std::abs(return_time_variance(rec).variance - 2.0) < 1e-6);
}

TEST_CASE("clock systems return in exactly n steps") {
  for (std::size_t n : {2u, 3u, 6u}) {
    std::vector<MeasureAtom> atoms;
    for (std::size_t k = 0; k < n; ++k) atoms.push_back({kTwoPi * double(k) / double(n), 1.0 / n});
    const auto rec = monitored_run(system_from_atoms(UnitCircleMeasure::from_atoms(atoms)), 64);
    for (std::size_t k = 1; k <= 64; ++k) {
      if (k == n)
        CHECK(std::abs(std::abs(rec.a[k]) - 1.0) < 1e-12);
      else
        CHECK(std::abs(rec.a[k]) < 1e-12);
    }
    CHECK(std::abs(expected_return_time(rec).tau - double(n)) < 1e-10);
    CHECK(std::abs(return_time_variance(rec).variance) < 1e-9);
  }
}

TEST_CASE("fixed point plus shift: survival probabilities") {
  const double is2 = 1.0 / std::sqrt(2.0);
  const auto sys = fixed_point_shift_system({is2, 0.0}, {is2, 0.0}, 120);
  const auto rec = monitored_run(sys, 100);
  CHECK(rec.s[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(rec.s.back() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(rec.r_partial == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // survival closed form with the exponent read as (|beta|^2)^{2n}
  for (std::size_t n : {1u, 2u, 5u, 10u}) {
    const double b2 = 0.5, a2 = 0.5;
    const double want = 2.0 * b2 / (1.0 + b2) + a2 * std::pow(b2, 2.0 * double(n)) / (1.0 + b2);
    CHECK(rec.s[n] == doctest::Approx(want).epsilon(1e-12));
  }
  const auto tau = expected_return_time(rec);
  CHECK(tau.status == ReturnTimeResult::Status::transient);
}

TEST_CASE("non-unitary operators are rejected") {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(3, 3);
  u(0, 0) = 1.1;
  Eigen::VectorXcd phi(3);
  phi << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(make_system(u, phi), ValidationError);
  Eigen::VectorXcd bad(3);
  bad << 1.0, 0.5, 0.0;
  CHECK_THROWS_AS(make_system(Eigen::MatrixXcd::Identity(3, 3), bad), ValidationError);
}

TEST_CASE("conservation check trips when the light cone hits the window") {
  // a one-sided shift window that is too small for the run length
  const double is2 = 1.0 / std::sqrt(2.0);
  const auto sys = fixed_point_shift_system({is2, 0.0}, {is2, 0.0}, 12);
  CHECK_THROWS_AS(monitored_run(sys, 100), ValidationError);
}

TEST_CASE("amplitudes are invariant under unitary conjugation") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    const int d = 4 + rep;
    const Eigen::MatrixXcd u = random_unitary(rng, d);
    const Eigen::VectorXcd phi = random_state(rng, d);
    const Eigen::MatrixXcd v = random_unitary(rng, d);
    const auto rec1 = monitored_run({std::make_shared<DenseUnitary>(u), phi}, 48);
    const auto rec2 = monitored_run(
        {std::make_shared<DenseUnitary>((v * u * v.adjoint()).eval()), (v * phi).eval()}, 48);
    for (std::size_t n = 1; n <= 48; ++n) CHECK(std::abs(rec1.a[n] - rec2.a[n]) < 1e-10);
  }
}

TEST_CASE("finite recurrent systems have integer expected return time") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t n = 2 + rep;
    const auto m = random_atom_measure(rng, n);
    std::size_t steps = 512;
    double tau = 0.0;
    for (; steps <= (1u << 15); steps *= 2) {
      const auto rec = monitored_run(system_from_atoms(m), steps);
      if (rec.s.back() < 1e-10) {
        tau = expected_return_time(rec).tau;
        break;
      }
    }
    CHECK(std::abs(tau - double(n)) < 1e-6);
  }
}

TEST_CASE("recurrence is inherited inside the cyclic subspace") {
  std::mt19937_64 rng(34);
  const auto m = random_atom_measure(rng, 5);
  const auto base = system_from_atoms(m);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::VectorXcd phi = random_state(rng, 5);
    const auto rec = monitored_run({base.op, phi}, 8192);
    const auto r = return_probability(rec);
    CHECK(r.upper >= 1.0 - 1e-10);   // bracket contains 1
    CHECK(rec.s.back() < 1e-4);      // and the survival tail is vanishing
  }
}

TEST_CASE("generating identity: amplitudes are conjugated Schur coefficients") {
  // closed form vs simulation for the rotation
  const auto m = UnitCircleMeasure::from_atoms({{kPi / 4, 0.5}, {-kPi / 4, 0.5}});
  CHECK(generating_identity_check(rotation_system(), m, 64) < 1e-12);

  // random unitaries with the measure from the eigendecomposition
  std::mt19937_64 rng(55);
  int done = 0;
  while (done < 5) {
    const int d = 4 + done;
    const Eigen::MatrixXcd u = random_unitary(rng, d);
    const Eigen::VectorXcd phi = random_state(rng, d);
    UnitCircleMeasure mu = spectral_measure_of(u, phi);
    CHECK(generating_identity_check({std::make_shared<DenseUnitary>(u), phi}, mu, 64) < 1e-10);
    ++done;
  }

  // a mismatched measure reports a large deviation instead of masking it
  const auto wrong = UnitCircleMeasure::from_atoms({{0.3, 0.5}, {2.8, 0.5}});
  CHECK(generating_identity_check(rotation_system(), wrong, 32) > 1e-2);
}

TEST_CASE("point mass: amplitude equals the conjugated constant Schur value") {
  const double ang = 1.3;
  const auto m = UnitCircleMeasure::point_mass(ang);
  const auto rec = monitored_run(system_from_atoms(m), 8);
  CHECK(std::abs(rec.a[1] - unit(ang)) < 1e-14);
  CHECK(std::abs(schur_from_measure(m, Complex{0.0}) - std::conj(unit(ang))) < 1e-14);
}

TEST_CASE("tau radial estimates") {
  RadialSchedule sched;
  const auto radii = sched.radii();

  const RationalSchur rot{{Complex{std::cos(kPi / 4)}, Complex{-1.0}},
                          {Complex{1.0}, Complex{-std::cos(kPi / 4)}}};
  const auto vals = tau_radial_estimate(SchurRepresentation{rot}, radii);
  for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] >= vals[i - 1] - 1e-8);
  CHECK(std::abs(vals.back() - 2.0) < 1e-3);

  // the zero function is rejected as not inner
  CHECK_THROWS_AS(tau_radial_estimate(SchurRepresentation{TaylorSchur{{Complex{0.0}}}}, radii),
                  ValidationError);

  // three Blaschke zeros: bounds rise to 4 (winding-number oracle)
  const BlaschkeSchur b{{Complex{0.3, 0.0}, Complex{0.0, -0.5}, 0.7 * unit(2.0)}, Complex{1.0}};
  CHECK(winding_number(SchurRepresentation{b}) == 4);
  const auto vb = tau_radial_estimate(SchurRepresentation{b}, radii);
  for (std::size_t i = 1; i < vb.size(); ++i) CHECK(vb[i] >= vb[i - 1] - 1e-8);
  CHECK(std::abs(vb.back() - 4.0) < 1e-3);
}

TEST_CASE("spectral measure of a dense pair reproduces the moments") {
  std::mt19937_64 rng(77);
  const Eigen::MatrixXcd u = random_unitary(rng, 6);
  const Eigen::VectorXcd phi = random_state(rng, 6);
  const auto m = spectral_measure_of(u, phi);
  const auto mom = moments(m, 12);
  Eigen::VectorXcd v = phi;
  for (std::size_t n = 1; n <= 12; ++n) {
    v = (u * v).eval();
    CHECK(std::abs(mom.mu[n] - Complex(phi.dot(v))) < 1e-10);
  }
}
