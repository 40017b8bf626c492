#include "urec/quadrature.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace urec::quad {

namespace {

template <typename T>
T periodic_mean_impl(const std::function<T(double)>& f, const Options& opt) {
  std::size_t m = opt.initial_points;
  T sum{};
  for (std::size_t j = 0; j < m; ++j) sum += f(kTwoPi * double(j) / double(m));
  T mean = sum / double(m);
  while (m < opt.max_points) {
    // add the midpoints of the current grid
    T odd{};
    for (std::size_t j = 0; j < m; ++j) odd += f(kTwoPi * (double(j) + 0.5) / double(m));
    const T refined = (mean + odd / double(m)) / 2.0;
    const double change = std::abs(refined - mean);
    mean = refined;
    m *= 2;
    if (change < opt.tol) return mean;
  }
  throw ConvergenceError("periodic_mean: grid refinement did not settle below tol=" +
                         std::to_string(opt.tol) + " at " + std::to_string(opt.max_points) +
                         " points");
}

}  // namespace

double periodic_mean(const std::function<double(double)>& f, const Options& opt) {
  return periodic_mean_impl<double>(f, opt);
}

Complex periodic_mean_complex(const std::function<Complex(double)>& f, const Options& opt) {
  return periodic_mean_impl<Complex>(f, opt);
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_level) {
  if (a == b) return 0.0;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  // x(u) = tanh((π/2) sinh u), w(u) = (π/2) cosh u / cosh²((π/2) sinh u)
  const auto node = [&](double u, double& x, double& w) {
    const double s = 0.5 * kPi * std::sinh(u);
    x = std::tanh(s);
    const double c = std::cosh(s);
    w = 0.5 * kPi * std::cosh(u) / (c * c);
  };
  const double u_max = 3.8;  // tanh((π/2) sinh 3.8) is 1 to beyond double precision
  double h = 1.0;
  double x, w;
  node(0.0, x, w);
  double sum = f(mid) * w;  // u = 0 node
  for (double u = h; u <= u_max; u += h) {
    node(u, x, w);
    if (w < 1e-300 || 1.0 - std::abs(x) <= 0.0) break;
    sum += w * (f(mid + half * x) + f(mid - half * x));
  }
  double prev = sum * h * half;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double u = h; u <= u_max; u += 2.0 * h) {  // new midpoints only
      node(u, x, w);
      if (w < 1e-300 || 1.0 - std::abs(x) <= 0.0) continue;
      add += w * (f(mid + half * x) + f(mid - half * x));
    }
    sum += add;
    const double cur = sum * h * half;
    if (std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur)) && level >= 3) return cur;
    prev = cur;
  }
  throw ConvergenceError("tanh_sinh: level sequence did not settle below tol=" +
                         std::to_string(tol) + " on [" + std::to_string(a) + "," +
                         std::to_string(b) + "]");
}

std::vector<Complex> cauchy_taylor(const std::function<Complex(Complex)>& f, std::size_t n_coeffs,
                                   double radius, std::size_t grid) {
  std::vector<Complex> samples(grid);
  for (std::size_t j = 0; j < grid; ++j)
    samples[j] = f(radius * unit(kTwoPi * double(j) / double(grid)));
  std::vector<Complex> c(n_coeffs, Complex{0.0});
  for (std::size_t n = 0; n < n_coeffs; ++n) {
    Complex acc{0.0};
    for (std::size_t j = 0; j < grid; ++j)
      acc += samples[j] * unit(-kTwoPi * double(n) * double(j) / double(grid));
    c[n] = acc / (double(grid) * std::pow(radius, double(n)));
  }
  return c;
}

}  // namespace urec::quad
