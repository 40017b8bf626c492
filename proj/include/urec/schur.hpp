#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "urec/measure.hpp"
#include "urec/poly.hpp"
#include "urec/types.hpp"

namespace urec {

// f = num/den on the closed disk; contract: inner (|f| = 1 on the circle).
struct RationalSchur {
  poly::CVec num;
  poly::CVec den;
};

// f = beta * prod (alpha_k - z)/(1 - conj(alpha_k) z), |alpha_k| < 1, |beta| = 1.
struct BlaschkeSchur {
  std::vector<Complex> zeros;
  Complex beta{1.0};
};

// Truncated Taylor data of a Schur-class function.
struct TaylorSchur {
  poly::CVec coeffs;
};

// Verblunsky (Schur) parameters. Entries beyond the explicit list continue
// with the trailing block of length `period` repeated forever (no period:
// zero continuation). Closed-form tails: (γ), (γ,0), (0,γ).
struct VerblunskySchur {
  std::vector<Complex> gamma;
  std::optional<std::size_t> period;
};

using SchurRepresentation = std::variant<RationalSchur, BlaschkeSchur, TaylorSchur, VerblunskySchur>;

struct VerblunskySequence {
  std::vector<Complex> gamma;
  // set when the Schur algorithm terminated with |gamma_k| = 1: the input is
  // a finite Blaschke product of this degree
  std::optional<std::size_t> finite_blaschke_degree;
  std::vector<double> rho() const;
};

// √((w-1)² + 4 g² w), branch fixed to +1 at w = 0, analytic on the open unit
// disk and continuous up to the boundary except at the branch points
// e^{±2i arcsin g}. The period-2 walk discriminant is this with w = z².
Complex period_disc_sqrt(Complex w, double gamma_abs);

// Fixed point of one Schur-algorithm step: the function with constant
// parameter sequence γ, γ, γ, ... evaluated on the closed disk.
Complex constant_verblunsky_schur(Complex gamma, Complex z);

// Evaluation of any representation; rational/Blaschke/Verblunsky variants are
// valid on the closed disk, Taylor data is evaluated as a polynomial.
Complex schur_eval(const SchurRepresentation& f, Complex z);

// max over an equispaced circle grid of ||f(e^{it})| - 1|.
double inner_deviation(const SchurRepresentation& f, std::size_t grid = 4096);

RationalSchur rational_from_blaschke(const BlaschkeSchur& b);

// Schur function of a finite-atom measure as an inner rational R/P.
RationalSchur rational_schur_from_measure(const UnitCircleMeasure& m);

BlaschkeSchur blaschke_from_rational(const RationalSchur& f, const Tolerances& tol = default_tol());

struct SchurStep {
  Complex gamma0;
  std::optional<SchurRepresentation> next;  // empty when terminated
  bool terminated = false;                  // |gamma0| = 1: finite Blaschke end
};

// One step of the Schur algorithm: γ0 = f(0), f1 = (1/z)(f-γ0)/(1-conj(γ0)f).
SchurStep schur_step(const SchurRepresentation& f, const Tolerances& tol = default_tol());

VerblunskySequence verblunsky_from_taylor(std::span<const Complex> c, std::size_t k_max,
                                          const Tolerances& tol = default_tol());

// Taylor coefficients c_0..c_{n-1} of the function with the given parameter
// list (zero continuation beyond it).
poly::CVec taylor_from_verblunsky(std::span<const Complex> gamma, std::size_t n_coeffs);

// Zeros of an inner rational f = R/P (companion-matrix roots of R, one
// Newton polish). Rejects inputs whose normalized resultant indicates a near
// common factor.
std::vector<Complex> blaschke_zeros(const RationalSchur& f, const Tolerances& tol = default_tol());

// Winding number of g(t) = e^{it} conj(f(e^{-it})) around the origin,
// computed by adaptive phase unwrapping; equals the expected return time of
// the recurrent system with Schur function f.
int winding_number(const SchurRepresentation& f, std::size_t initial_grid = 256,
                   const Tolerances& tol = default_tol());

// Var(τ) = Σ_{j,l} 2 z_l conj(z_j) / (1 - z_l conj(z_j)) for rational inner f
// with the given zeros.
double variance_from_zeros(std::span<const Complex> zeros);

struct ElectrostaticReport {
  double gradient_norm;  // |Σ_i m_i / (u_i - z)|; zero exactly at Schur zeros
  bool inside_hull;      // convex hull of the atom positions
};

ElectrostaticReport electrostatic_stationarity(const UnitCircleMeasure& m, Complex z,
                                               const Tolerances& tol = default_tol());

struct ToeplitzFeasibility {
  bool feasible;
  int first_failing_order;            // -1 when feasible
  std::vector<double> min_eigenvalue; // per order 1..k_max
};

// Reconstructs mu_1..mu_k from first-arrival amplitudes via the renewal
// identity μ̂ = 1/(1-â) and tests every leading Toeplitz minor.
ToeplitzFeasibility toeplitz_feasibility(std::span<const Complex> a, std::size_t k_max,
                                         const Tolerances& tol = default_tol());

}  // namespace urec
