#pragma once

#include <Eigen/SparseCore>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "urec/monitored.hpp"
#include "urec/schur.hpp"
#include "urec/types.hpp"

namespace urec {

// Window truncation of the canonical five-diagonal unitary built from
// Verblunsky coefficients; unitary except in the trailing boundary rows.
struct CMVMatrix {
  Eigen::SparseMatrix<Complex> C;
  std::vector<Complex> gamma;  // the coefficients the window was built from
  std::size_t dim = 0;
};

CMVMatrix cmv_from_verblunsky(std::span<const Complex> gamma, std::size_t dim);

// Coined walk with coins C_x = [[rho, -gamma],[conj(gamma), rho]] indexed by
// site; entries beyond the explicit list use the constant tail when present.
struct CoinedWalkSpec {
  enum class Domain { half_line, line };
  Domain domain = Domain::half_line;
  std::vector<Complex> coin_gamma;      // gamma_{2x} per site x
  std::optional<Complex> tail_gamma;    // constant continuation

  Complex gamma_at_site(std::size_t x) const;
  // CMV parameter sequence of the walk: coins at even indices, zeros at odd.
  Complex verblunsky_at(std::size_t k) const;
  void validate() const;
};

// CMV form of a half-line walk under the relabeling e_{2x} = |x,up>,
// e_{2x+1} = |x,down>. Line walks are served by closed forms only.
CMVMatrix walk_to_cmv(const CoinedWalkSpec& walk, std::size_t dim);

// Direct shift-then-coin unitary on a window of `sites` sites: the oracle the
// CMV construction is checked against. The half-line shift reflects at 0; the
// window is closed into a permutation cycle so the matrix stays exactly
// unitary (the closure edge lies outside any light cone shorter than the
// window). The line variant is centered at 0 with cyclic closure.
Eigen::SparseMatrix<Complex> coined_walk_unitary(const CoinedWalkSpec& walk, std::size_t sites);
Eigen::SparseMatrix<Complex> coined_walk_unitary_line(Complex gamma, std::size_t half_width);

// Moments <e_k| C^n e_k> of the window pair.
std::vector<Complex> cmv_moments(const CMVMatrix& cmv, std::size_t k, std::size_t n_max);

// Monitored system for the walk started at basis state e_k, window sized
// 2(n_steps+2) so no amplitude reaches the boundary within n_steps.
UnitarySystem walk_monitored_system(const CoinedWalkSpec& walk, std::size_t n_steps,
                                    std::size_t k = 0);

// Schur function of the constant-coin half-line walk (parameters γ,0,γ,0,…):
// f(z) = 2γ / (1 - z² + sqrt((z²-1)² + 4|γ|²z²)), branch +1 at z = 0.
// Valid on the closed disk.
Complex constant_coin_schur(Complex gamma, Complex z);

// Verblunsky representation of the Schur iterate f_k of a half-line walk
// (f_0 is the walk's own Schur function).
VerblunskySchur walk_schur_iterate(const CoinedWalkSpec& walk, std::size_t k);

// (1/2π) ∫ |f(e^{it})|^power dt with integration split at the given angular
// breakpoints (band edges where the integrand loses smoothness).
double circle_mean_abs_power(const std::function<Complex(Complex)>& f, int power,
                             std::span<const double> breakpoints, double tol = 1e-11);

// Band-edge angles of the constant-coin boundary values: {η, π-η, π+η, 2π-η}.
std::vector<double> constant_coin_breakpoints(Complex gamma);

// Closed-form return probabilities; each equals the quadrature of ||f||² resp.
// ||f²||² (checked in the tests).
double constant_coin_return(Complex gamma, CoinedWalkSpec::Domain domain);

// First-arrival amplitudes a_1..a_n of the constant-coin half-line walk:
// a_1 = conj(γ), even entries vanish, odd entries from Legendre polynomials.
std::vector<Complex> constant_coin_amplitudes(Complex gamma, std::size_t n_max);

// Return probability from basis state e_k: ||f_k||² with f_k the k-th Schur
// iterate (the Blaschke factor of the Khrushchev decomposition has unit
// boundary modulus and drops out of the norm).
double khrushchev_return(const CoinedWalkSpec& walk, std::size_t k, double tol = 1e-11);

}  // namespace urec
