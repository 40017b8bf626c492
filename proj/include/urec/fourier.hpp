#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <vector>

#include "urec/types.hpp"

namespace urec {

// Translation-invariant walk in momentum space: p -> U(p), a fiber_dim x
// fiber_dim unitary for p in [-pi, pi]^lattice_dim. When finite propagation
// is declared, matrix elements are trigonometric polynomials of the given
// bandwidth and equispaced grids integrate moments exactly.
struct MomentumSymbol {
  int lattice_dim = 1;
  int fiber_dim = 2;
  std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)> at;
  bool finite_propagation = false;
  int bandwidth = 0;

  void validate_unitary(const Tolerances& tol = default_tol(), std::size_t samples = 16) const;
};

// Coined walk symbol U(p) = diag(e^{ip}, e^{-ip}) · [[rho, -gamma],[conj(gamma), rho]].
MomentumSymbol coin_symbol(Complex gamma);

struct SymbolQuadOptions {
  std::size_t initial_points = 64;
  std::size_t max_points = std::size_t{1} << 20;
  double tol = 1e-10;
};

// M(z) = ∫ dp (1 - z U(p))^{-1} over the torus (normalized measure), by the
// tensor trapezoid rule with dyadic refinement until entrywise change < tol.
Eigen::MatrixXcd stieltjes_operator(const MomentumSymbol& sym, Complex z,
                                    const SymbolQuadOptions& opt = {});

// Closed form of M(z) for the coin symbol, sharing the square-root branch of
// the constant-coin Schur function: g(z) = sqrt((1-z²)² + 4|γ|²z²), g(0)=1.
Eigen::MatrixXcd stieltjes_closed_form_coin(Complex gamma, Complex z);

// Schur function of the state localized at the origin with internal vector
// phi: f(z) = (1/z)(conj μ̂ - 1)/conj μ̂ with μ̂(z) = <phi|M(z)phi>.
Complex schur_from_state(const MomentumSymbol& sym, const Eigen::VectorXcd& phi, Complex z,
                         const SymbolQuadOptions& opt = {});

// Moments mu_n = ∫ dp <phi|U(p)^n phi>, n = 0..n_max (exact grids for finite
// propagation, dyadic refinement otherwise).
std::vector<Complex> symbol_moments(const MomentumSymbol& sym, const Eigen::VectorXcd& phi,
                                    std::size_t n_max, const SymbolQuadOptions& opt = {});

struct ReturnEstimate {
  double r;           // sum |a_n|^2, n <= n_terms
  double tail_bound;  //  crude O(1/N²) slack from the n^{-3} decay class
  std::size_t n_terms;
};

// Return probability via the moment route: renewal inversion â = 1 - 1/μ̂.
ReturnEstimate return_from_state(const MomentumSymbol& sym, const Eigen::VectorXcd& phi,
                                 std::size_t n_max, const SymbolQuadOptions& opt = {});

struct PhaseScanPoint {
  double theta;
  double r;
};

// R(θ) for the state family (1, e^{iθ})/√2 over an equispaced θ grid.
std::vector<PhaseScanPoint> phase_scan(const MomentumSymbol& sym, std::size_t grid,
                                       std::size_t n_max, const SymbolQuadOptions& opt = {});

}  // namespace urec
