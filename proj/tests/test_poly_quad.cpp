#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "urec/poly.hpp"
#include "urec/quadrature.hpp"

using namespace urec;
using poly::CVec;

TEST_CASE("companion roots recover construction") {
  const std::vector<Complex> want = {{0.4, 0.3}, {-0.7, 0.1}, {0.05, -0.8}};
  CVec p{Complex{1.0}};
  for (const auto& r : want) p = poly::multiply(p, CVec{-r, Complex{1.0}});
  auto got = poly::roots(p);
  REQUIRE(got.size() == 3);
  for (const auto& r : want) {
    double best = 1e9;
    for (const auto& g : got) best = std::min(best, std::abs(g - r));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("series inverse of 1-z is geometric") {
  const auto inv = poly::series_inverse(CVec{Complex{1.0}, Complex{-1.0}}, 8);
  for (const auto& c : inv) CHECK(std::abs(c - 1.0) < 1e-14);
}

TEST_CASE("series multiply then divide round-trips") {
  CVec a{Complex{1.0}, Complex{0.3, 0.2}, Complex{-0.4}, Complex{0.1, -0.1}};
  CVec b{Complex{2.0}, Complex{-0.5}, Complex{0.25, 0.7}};
  const auto prod = poly::series_multiply(a, b, 6);
  const auto back = poly::series_divide(prod, b, 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(back[k] - a[k]) < 1e-13);
}

TEST_CASE("normalized resultant flags a shared root") {
  CVec p = poly::multiply(CVec{Complex{-0.5}, Complex{1.0}}, CVec{Complex{0.3}, Complex{1.0}});
  CVec q = poly::multiply(CVec{Complex{-0.5}, Complex{1.0}}, CVec{Complex{-0.9}, Complex{1.0}});
  CHECK(std::abs(poly::resultant_normalized(p, q)) < 1e-14);
  CVec q2 = poly::multiply(CVec{Complex{0.51}, Complex{1.0}}, CVec{Complex{-0.9}, Complex{1.0}});
  CHECK(std::abs(poly::resultant_normalized(p, q2)) > 1e-4);
}

TEST_CASE("periodic trapezoid mean is spectrally accurate") {
  // mean of exp(cos t) over a period equals I_0(1)
  const double i0 = 1.2660658777520084;
  CHECK(quad::periodic_mean([](double t) { return std::exp(std::cos(t)); }) ==
        doctest::Approx(i0).epsilon(1e-13));
}

TEST_CASE("tanh-sinh handles square-root band edges") {
  CHECK(quad::tanh_sinh([](double x) { return std::sqrt(1.0 - x * x); }, -1.0, 1.0) ==
        doctest::Approx(0.5 * kPi).epsilon(1e-11));
  CHECK(quad::tanh_sinh([](double x) { return std::sqrt(x); }, 0.0, 1.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("cauchy taylor extraction") {
  const auto c = quad::cauchy_taylor([](Complex z) { return 1.0 / (2.0 + z); }, 6);
  for (std::size_t n = 0; n < 6; ++n)
    CHECK(std::abs(c[n] - std::pow(-0.5, double(n)) * 0.5) < 1e-13);
}
