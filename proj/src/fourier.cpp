#include "urec/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "urec/poly.hpp"
#include "urec/schur.hpp"

namespace urec {

namespace {

void require_interior_capped(Complex z) {
  if (std::abs(z) >= 1.0 - 1e-6)
    throw ValidationError("fourier: |z| capped at 1 - 1e-6 (boundary quantities go through "
                          "radial sequences); got |z| = " +
                          std::to_string(std::abs(z)));
}

// walks an s-dimensional equispaced tensor grid, calling fn(p) at each node
template <typename Fn>
void for_each_node(int s, std::size_t m, const Fn& fn) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(s), 0);
  Eigen::VectorXd p(s);
  while (true) {
    for (int d = 0; d < s; ++d)
      p(d) = -kPi + kTwoPi * double(idx[static_cast<std::size_t>(d)]) / double(m);
    fn(p);
    int d = 0;
    for (; d < s; ++d) {
      if (++idx[static_cast<std::size_t>(d)] < m) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
    if (d == s) return;
  }
}

}  // namespace

void MomentumSymbol::validate_unitary(const Tolerances& tol, std::size_t samples) const {
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(fiber_dim, fiber_dim);
  for (std::size_t j = 0; j < samples; ++j) {
    Eigen::VectorXd p(lattice_dim);
    for (int d = 0; d < lattice_dim; ++d)
      p(d) = -kPi + kTwoPi * double(j * 7919 % (samples * 13) + static_cast<std::size_t>(d)) /
                        double(samples * 13);
    const Eigen::MatrixXcd u = at(p);
    const double dev = (u.adjoint() * u - eye).norm();
    if (dev > tol.algebraic)
      throw ValidationError("symbol: U(p) deviates from unitarity by " + std::to_string(dev) +
                            " at a sample point");
  }
}

MomentumSymbol coin_symbol(Complex gamma) {
  if (std::abs(gamma) >= 1.0) throw ValidationError("coin_symbol: |gamma| must be < 1");
  const double rho = std::sqrt(1.0 - std::norm(gamma));
  MomentumSymbol sym;
  sym.lattice_dim = 1;
  sym.fiber_dim = 2;
  sym.finite_propagation = true;
  sym.bandwidth = 1;
  sym.at = [gamma, rho](const Eigen::VectorXd& p) {
    Eigen::MatrixXcd u(2, 2);
    const Complex e = unit(p(0));
    u << e * rho, -e * gamma, std::conj(e) * std::conj(gamma), std::conj(e) * rho;
    return u;
  };
  return sym;
}

Eigen::MatrixXcd stieltjes_operator(const MomentumSymbol& sym, Complex z,
                                    const SymbolQuadOptions& opt) {
  require_interior_capped(z);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(sym.fiber_dim, sym.fiber_dim);
  Eigen::MatrixXcd prev;
  std::size_t m = opt.initial_points;
  while (m <= opt.max_points) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(sym.fiber_dim, sym.fiber_dim);
    std::size_t count = 0;
    for_each_node(sym.lattice_dim, m, [&](const Eigen::VectorXd& p) {
      acc += (eye - z * sym.at(p)).partialPivLu().solve(eye);
      ++count;
    });
    acc /= double(count);
    if (prev.size() > 0) {
      const double change = (acc - prev).cwiseAbs().maxCoeff();
      if (change < opt.tol) return acc;
    }
    prev = acc;
    m *= 2;
  }
  throw ConvergenceError("stieltjes_operator: refinement did not settle below tol=" +
                         std::to_string(opt.tol) + " at " + std::to_string(opt.max_points) +
                         " points per dimension (|z| = " + std::to_string(std::abs(z)) + ")");
}

Eigen::MatrixXcd stieltjes_closed_form_coin(Complex gamma, Complex z) {
  if (std::abs(gamma) >= 1.0 || gamma == Complex{0.0})
    throw ValidationError("stieltjes_closed_form_coin: need 0 < |gamma| < 1");
  const double rho = std::sqrt(1.0 - std::norm(gamma));
  const Complex g = period_disc_sqrt(z * z, std::abs(gamma));
  const Complex z2 = z * z;
  Eigen::MatrixXcd m(2, 2);
  m(0, 0) = (1.0 - z2 + g);
  m(1, 1) = (1.0 - z2 + g);
  m(0, 1) = -(gamma / rho) * (1.0 + z2 - g);
  m(1, 0) = (std::conj(gamma) / rho) * (1.0 + z2 - g);
  return m / (2.0 * g);
}

namespace {

Complex schur_transform_from_muhat(const std::function<Complex(Complex)>& muhat, Complex z) {
  // f(z) = (1/z)(conj μ̂(conj z) - 1)/conj μ̂(conj z); at z = 0 the removable
  // singularity is evaluated as conj(mu_1) by a small forward difference on
  // the caller's side (interior callers never pass exactly 0 here).
  const Complex mh = std::conj(muhat(std::conj(z)));
  return (mh - 1.0) / (z * mh);
}

}  // namespace

Complex schur_from_state(const MomentumSymbol& sym, const Eigen::VectorXcd& phi, Complex z,
                         const SymbolQuadOptions& opt) {
  if (phi.size() != sym.fiber_dim)
    throw ValidationError("schur_from_state: phi dimension mismatch");
  if (std::abs(phi.norm() - 1.0) > 1e-12)
    throw ValidationError("schur_from_state: ||phi|| must be 1");
  if (std::abs(z) < 1e-12) {
    const auto mu = symbol_moments(sym, phi, 1, opt);
    return std::conj(mu[1]);
  }
  return schur_transform_from_muhat(
      [&](Complex w) { return Complex(phi.dot(stieltjes_operator(sym, w, opt) * phi)); }, z);
}

std::vector<Complex> symbol_moments(const MomentumSymbol& sym, const Eigen::VectorXcd& phi,
                                    std::size_t n_max, const SymbolQuadOptions& opt) {
  const auto run = [&](std::size_t m) {
    std::vector<Complex> mu(n_max + 1, Complex{0.0});
    std::size_t count = 0;
    for_each_node(sym.lattice_dim, m, [&](const Eigen::VectorXd& p) {
      const Eigen::MatrixXcd u = sym.at(p);
      Eigen::VectorXcd v = phi;
      for (std::size_t n = 1; n <= n_max; ++n) {
        v = (u * v).eval();
        mu[n] += phi.dot(v);
      }
      ++count;
    });
    for (auto& c : mu) c /= double(count);
    mu[0] = 1.0;
    return mu;
  };
  if (sym.finite_propagation) {
    // the integrand of mu_n has bandwidth <= n * bandwidth: one exact grid
    const std::size_t m = 2 * static_cast<std::size_t>(sym.bandwidth) * n_max + 2;
    return run(m);
  }
  std::size_t m = opt.initial_points;
  std::vector<Complex> prev;
  while (m <= opt.max_points) {
    auto mu = run(m);
    if (!prev.empty()) {
      double change = 0.0;
      for (std::size_t n = 0; n <= n_max; ++n) change = std::max(change, std::abs(mu[n] - prev[n]));
      if (change < opt.tol) return mu;
    }
    prev = std::move(mu);
    m *= 2;
  }
  throw ConvergenceError("symbol_moments: grid refinement did not converge");
}

ReturnEstimate return_from_state(const MomentumSymbol& sym, const Eigen::VectorXcd& phi,
                                 std::size_t n_max, const SymbolQuadOptions& opt) {
  const auto mu = symbol_moments(sym, phi, n_max, opt);
  const auto a = arrival_series_from_moments(mu, n_max);
  ReturnEstimate out{0.0, 0.0, n_max};
  double c3 = 0.0;  // envelope constant of the n^{-3} decay class
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double p = std::norm(a[n]);
    out.r += p;
    if (n * 10 >= n_max * 9) c3 = std::max(c3, p * double(n) * double(n) * double(n));
  }
  out.tail_bound = c3 / (2.0 * double(n_max) * double(n_max));
  return out;
}

std::vector<PhaseScanPoint> phase_scan(const MomentumSymbol& sym, std::size_t grid,
                                       std::size_t n_max, const SymbolQuadOptions& opt) {
  if (sym.fiber_dim != 2)
    throw ValidationError("phase_scan: defined for fiber dimension 2 symbols");
  if (!sym.finite_propagation)
    throw ValidationError("phase_scan: symbol must declare finite propagation");
  (void)opt;
  // matrix moments M_n = ∫ U(p)^n dp once; each theta is then a bilinear form
  std::vector<Eigen::MatrixXcd> mn(n_max + 1, Eigen::MatrixXcd::Zero(2, 2));
  const std::size_t m = 2 * static_cast<std::size_t>(sym.bandwidth) * n_max + 2;
  std::size_t count = 0;
  for_each_node(sym.lattice_dim, m, [&](const Eigen::VectorXd& p) {
    const Eigen::MatrixXcd u = sym.at(p);
    Eigen::MatrixXcd pow = Eigen::MatrixXcd::Identity(2, 2);
    for (std::size_t n = 1; n <= n_max; ++n) {
      pow = (u * pow).eval();
      mn[n] += pow;
    }
    ++count;
  });
  for (auto& x : mn) x /= double(count);
  std::vector<PhaseScanPoint> out;
  out.reserve(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    const double theta = kTwoPi * double(j) / double(grid);
    Eigen::VectorXcd phi(2);
    phi << Complex{1.0 / std::sqrt(2.0)}, unit(theta) / std::sqrt(2.0);
    std::vector<Complex> mu(n_max + 1);
    mu[0] = 1.0;
    for (std::size_t n = 1; n <= n_max; ++n) mu[n] = phi.dot(mn[n] * phi);
    const auto a = arrival_series_from_moments(mu, n_max);
    double r = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) r += std::norm(a[n]);
    out.push_back({theta, r});
  }
  return out;
}

}  // namespace urec
