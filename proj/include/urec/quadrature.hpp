#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "urec/types.hpp"

namespace urec::quad {

struct Options {
  std::size_t initial_points = 64;
  std::size_t max_points = std::size_t{1} << 22;
  double tol = 1e-11;
};

// Mean of a 2π-periodic function over one period, by the equispaced
// trapezoidal rule with dyadic refinement (samples are reused on doubling).
// Spectrally accurate for analytic integrands. Throws ConvergenceError if the
// dyadic sequence has not settled below opt.tol at opt.max_points.
double periodic_mean(const std::function<double(double)>& f, const Options& opt = {});
Complex periodic_mean_complex(const std::function<Complex(double)>& f, const Options& opt = {});

// Tanh-sinh (double-exponential) quadrature on [a, b]: spectrally accurate
// for analytic integrands and robust against endpoint singularities such as
// square-root band edges. Throws ConvergenceError if the level sequence has
// not settled below tol.
double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                 int max_level = 12);

// Taylor coefficients c_0..c_{n-1} of an analytic f via the Cauchy integral
// on |z| = radius (equispaced grid; spectrally accurate).
std::vector<Complex> cauchy_taylor(const std::function<Complex(Complex)>& f, std::size_t n_coeffs,
                                   double radius = 0.5, std::size_t grid = 2048);

}  // namespace urec::quad
