#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "urec/types.hpp"

// Polynomial and truncated-power-series helpers on coefficient vectors in
// ascending order: p[k] is the coefficient of z^k.
namespace urec::poly {

using CVec = std::vector<Complex>;

Complex eval(std::span<const Complex> p, Complex z);  // Horner

CVec multiply(std::span<const Complex> a, std::span<const Complex> b);
CVec derivative(std::span<const Complex> p);

// \overline{g}(z) = conj(g(conj z)): conjugate every coefficient.
CVec conjugate_coeffs(std::span<const Complex> p);

// Drops trailing coefficients below tol_rel * max|coeff|.
void trim(CVec& p, double tol_rel = 1e-12);
int degree(std::span<const Complex> p, double tol_rel = 1e-12);

// Truncated power-series arithmetic; results have exactly n coefficients.
CVec series_multiply(std::span<const Complex> a, std::span<const Complex> b, std::size_t n);
CVec series_inverse(std::span<const Complex> a, std::size_t n);  // requires a[0] != 0
CVec series_divide(std::span<const Complex> num, std::span<const Complex> den, std::size_t n);

// Roots via the companion matrix of the monic normalization, each polished
// with one Newton step. Throws ValidationError on the zero polynomial.
std::vector<Complex> roots(std::span<const Complex> p, double tol_rel = 1e-12);

// Sylvester resultant, normalized by the coefficient scale of both inputs so
// the magnitude is comparable against a relative threshold.
Complex resultant_normalized(std::span<const Complex> a, std::span<const Complex> b);

// Relative smallest singular value of the Sylvester matrix: a scale-free
// coprimality measure (0 iff the polynomials share a root) that does not
// collapse with the degree the way the raw resultant does.
double sylvester_coprimality(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace urec::poly
