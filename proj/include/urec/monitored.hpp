#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstddef>
#include <memory>
#include <vector>

#include "urec/measure.hpp"
#include "urec/quadrature.hpp"
#include "urec/schur.hpp"
#include "urec/types.hpp"

namespace urec {

// Minimal operator interface for the step unitary; dense matrices and banded
// window truncations (CMV, shifts) both implement it.
class UnitaryOperator {
 public:
  virtual ~UnitaryOperator() = default;
  virtual Eigen::Index dim() const = 0;
  virtual void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const = 0;
};

class DenseUnitary final : public UnitaryOperator {
 public:
  DenseUnitary(Eigen::MatrixXcd u, const Tolerances& tol = default_tol());
  Eigen::Index dim() const override { return u_.rows(); }
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const override { out = u_ * in; }
  const Eigen::MatrixXcd& matrix() const { return u_; }

 private:
  Eigen::MatrixXcd u_;
};

// Sparse window truncation of an infinite unitary. Unitarity may fail in the
// trailing boundary rows; runs must stay inside the light cone, which the
// per-step conservation check enforces loudly.
class SparseUnitary final : public UnitaryOperator {
 public:
  explicit SparseUnitary(Eigen::SparseMatrix<Complex> u) : u_(std::move(u)) {}
  Eigen::Index dim() const override { return u_.rows(); }
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const override { out = u_ * in; }
  const Eigen::SparseMatrix<Complex>& matrix() const { return u_; }

 private:
  Eigen::SparseMatrix<Complex> u_;
};

struct UnitarySystem {
  std::shared_ptr<const UnitaryOperator> op;
  Eigen::VectorXcd phi;
};

UnitarySystem make_system(Eigen::MatrixXcd u, Eigen::VectorXcd phi,
                          const Tolerances& tol = default_tol());
UnitarySystem make_system(Eigen::SparseMatrix<Complex> u, Eigen::VectorXcd phi,
                          const Tolerances& tol = default_tol());

// Canonical realization of a finite-atom measure: U = diag(u_i), phi_i = sqrt(m_i).
UnitarySystem system_from_atoms(const UnitCircleMeasure& m);

// Fixed basis state |*> plus a one-sided shift truncated to `window` states;
// initial state alpha|*> + beta|0>. Exact for runs shorter than the window,
// loud (conservation violation) beyond it.
UnitarySystem fixed_point_shift_system(Complex alpha, Complex beta, std::size_t window);

// Spectral measure of a dense pair (U, phi) by eigendecomposition; atoms with
// weight below weight_floor are dropped and the rest renormalized.
UnitCircleMeasure spectral_measure_of(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& phi,
                                      double weight_floor = 1e-13,
                                      const Tolerances& tol = default_tol());

struct ArrivalRecord {
  std::vector<Complex> a;  // a[n], n = 1..N; a[0] = 0 placeholder
  std::vector<double> s;   // s[n], n = 0..N; s[0] = 1
  std::size_t truncation;  // N
  double r_partial;        // sum of |a_n|^2, n <= N

  Complex a_at(std::size_t n) const { return a[n]; }
  double s_at(std::size_t n) const { return s[n]; }
};

// Iterates psi <- U psi, records a_n = <phi|psi>, projects psi <- psi - phi a_n,
// records s_n = |psi|^2; enforces sum |a_k|^2 + s_n = 1 at every step.
ArrivalRecord monitored_run(const UnitarySystem& sys, std::size_t n_max,
                            const Tolerances& tol = default_tol());

struct ReturnProbability {
  double lower;  // partial sum
  double upper;  // partial sum + s_N  (R = 1 - lim s_n)
};

ReturnProbability return_probability(const ArrivalRecord& rec);

struct ReturnTimeResult {
  enum class Status { ok, lower_bound, transient } status;
  double tau;   // truncated sum (monotone lower bound in the recurrent case)
  double tail;  // surviving mass s_N
};

struct TailPolicy {
  double converged_tail = 1e-8;   // s_N below this: sum treated as converged
  double plateau_tol = 1e-9;      // |s_N - s_{N/2}| below this: plateau
  double transient_floor = 1e-6;  // plateau above this: declared transient
};

ReturnTimeResult expected_return_time(const ArrivalRecord& rec, const TailPolicy& pol = {});

struct VarianceResult {
  ReturnTimeResult::Status status;
  double variance;
  double tail;
};

VarianceResult return_time_variance(const ArrivalRecord& rec, const TailPolicy& pol = {});

// max over n <= n_max of |a_n - conj(c_{n-1})| where c are the Taylor
// coefficients of the Schur function of `measure`: the generating identity
// â(z) = z conj-coefficients-f(z).
double generating_identity_check(const UnitarySystem& sys, const UnitCircleMeasure& measure,
                                 std::size_t n_max, const Tolerances& tol = default_tol());

// Lower bounds (1/2π)∫ (1 - r²|f(re^{it})|²)/(1-r²) dt for each r of the
// schedule; nondecreasing in r up to quadrature error, with limit τ for inner
// f. Rejects representations that are not inner on the circle.
std::vector<double> tau_radial_estimate(const SchurRepresentation& f,
                                        const std::vector<double>& r_schedule,
                                        const quad::Options& qopt = {},
                                        const Tolerances& tol = default_tol());

}  // namespace urec
