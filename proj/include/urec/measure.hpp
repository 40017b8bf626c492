#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "urec/types.hpp"

namespace urec {

struct MeasureAtom {
  double angle;   // position e^{i angle}
  double weight;  // strictly positive
};

// Absolutely continuous component, stored as the finite table of its Fourier
// coefficients c_n = ∫ u^n dμ_ac for n = 0..N; negative indices are implied
// by c_{-n} = conj(c_n). c_0 is the total a.c. mass. The density relative to
// the normalized Lebesgue measure dt/2π is ρ(t) = Σ_n c_n e^{-int}.
struct AbsContDensity {
  std::vector<Complex> fourier;  // c_0..c_N, c_0 real

  double mass() const { return fourier.empty() ? 0.0 : fourier[0].real(); }
  Complex coeff(std::size_t n) const {
    return n < fourier.size() ? fourier[n] : Complex{0.0};
  }

  // Fourier table of a sampled density (values of ρ at an equispaced angular
  // grid are obtained from the callable; the periodic trapezoid rule is exact
  // once grid_points resolves the bandwidth).
  static AbsContDensity from_density(const std::function<double(double)>& rho,
                                     std::size_t n_coeffs, std::size_t grid_points = 4096);
};

// Probability measure on the unit circle: finite atoms plus an optional
// absolutely continuous part. Construction validates the invariants:
// distinct atom positions, positive weights, total mass one.
class UnitCircleMeasure {
 public:
  UnitCircleMeasure(std::vector<MeasureAtom> atoms, std::optional<AbsContDensity> ac,
                    const Tolerances& tol = default_tol());

  static UnitCircleMeasure point_mass(double angle);
  static UnitCircleMeasure uniform();
  static UnitCircleMeasure from_atoms(std::vector<MeasureAtom> atoms,
                                      const Tolerances& tol = default_tol());

  const std::vector<MeasureAtom>& atoms() const { return atoms_; }
  const std::optional<AbsContDensity>& ac_part() const { return ac_; }
  double ac_mass() const { return ac_ ? ac_->mass() : 0.0; }
  double atom_mass() const;
  bool pure_point() const { return !ac_ || ac_->mass() == 0.0; }
  Complex atom_position(std::size_t i) const { return unit(atoms_[i].angle); }

 private:
  std::vector<MeasureAtom> atoms_;
  std::optional<AbsContDensity> ac_;
};

struct MomentSequence {
  std::vector<Complex> mu;  // mu[n], n = 0..N; mu[0] = 1 for a probability measure
  std::size_t truncation() const { return mu.empty() ? 0 : mu.size() - 1; }
};

// mu_n = Σ_i m_i u_i^n + a.c. Fourier part, n = 0..n_max.
MomentSequence moments(const UnitCircleMeasure& m, std::size_t n_max);

// The three analytic transforms on |z| < 1. All throw ValidationError for
// |z| >= 1.
Complex stieltjes(const UnitCircleMeasure& m, Complex z);
Complex caratheodory(const UnitCircleMeasure& m, Complex z);
Complex schur_from_measure(const UnitCircleMeasure& m, Complex z,
                           const Tolerances& tol = default_tol());

// Geometric radial schedule r_k = 1 - 2^{-k}, k = k_min..k_max, used by the
// boundary-limit operations together with Richardson extrapolation.
struct RadialSchedule {
  int k_min = 4;
  int k_max = 20;
  std::vector<double> radii() const;
};

struct DensityValue {
  enum class Status { ok, singular_point };
  Status status = Status::ok;
  double value = 0.0;  // density w.r.t. dt/2π at points of continuity
};

// Radial limit of Re F(r e^{it}); reports a singular point instead of a
// value when the radial values blow past the divergence cap.
DensityValue ac_density_at(const UnitCircleMeasure& m, double t,
                           const RadialSchedule& sched = {},
                           const Tolerances& tol = default_tol());

// lim_{r->1} (1-r)/2 F(r z0): the mass of the point z0. The overload taking a
// Caratheodory evaluator serves operators whose F is only known numerically.
double atom_mass_at(const UnitCircleMeasure& m, Complex z0, const RadialSchedule& sched = {},
                    const Tolerances& tol = default_tol());
double atom_mass_at(const std::function<Complex(Complex)>& caratheodory_eval, Complex z0,
                    const RadialSchedule& sched = {}, const Tolerances& tol = default_tol());

struct RecurrenceClass {
  bool recurrent;
  double ac_mass;
};

// Recurrent iff the representation carries no absolutely continuous mass.
RecurrenceClass classify_recurrence(const UnitCircleMeasure& m,
                                    const Tolerances& tol = default_tol());

enum class SjkClass { recurrent, transient, inconclusive };

struct SjkOptions {
  double convergence_tol = 1e-10;  // tail of Σ|mu_n|^2 below this => convergent
  double wiener_floor = 1e-6;      // stabilized (1/n)Σ|mu_k|^2 above this => atoms
};

struct SjkReport {
  SjkClass verdict;
  double partial_sum;     // Σ_{n<=N} |mu_n|^2
  double tail_increment;  // partial sum over the second half window
  double wiener;          // (1/N) Σ_{n<=N} |mu_n|^2
};

SjkReport sjk_classify(const MomentSequence& mu, const SjkOptions& opt = {});

// Arrival-amplitude series from the moment series via the renewal identity
// â = 1 - 1/μ̂; returns a[0..n_max] with a[0] = 0.
std::vector<Complex> arrival_series_from_moments(std::span<const Complex> mu, std::size_t n_max);

// Taylor coefficients c_0..c_{n-1} of the Schur function (a_n = conj(c_{n-1})).
std::vector<Complex> schur_taylor_from_measure(const UnitCircleMeasure& m, std::size_t n_coeffs);

// Minimum eigenvalue among the leading Toeplitz minors of order <= n of the
// kernel k_{j,k} = mu_{j-k}; nonnegative (within tolerance) for valid moments.
double toeplitz_min_eigenvalue(std::span<const Complex> mu, std::size_t n);

}  // namespace urec
