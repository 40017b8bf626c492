#include "urec/measure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "urec/poly.hpp"

namespace urec {

namespace {

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

void require_interior(Complex z, const char* op) {
  if (std::abs(z) >= 1.0)
    throw ValidationError(std::string(op) + ": evaluation point must satisfy |z| < 1, got |z|=" +
                          std::to_string(std::abs(z)));
}

// Richardson extrapolation for values v_k carrying errors C1*h_k + C2*h_k^2 +
// ... with h_k = 2^{-k}. Returns the last settled diagonal entry.
struct RichardsonResult {
  Complex value;
  double last_change;
};

RichardsonResult richardson_geometric(const std::vector<Complex>& v) {
  std::vector<Complex> row = v;
  Complex best = v.back();
  double change = std::numeric_limits<double>::infinity();
  for (std::size_t level = 1; level < v.size(); ++level) {
    const double w = std::pow(2.0, double(level));
    for (std::size_t i = 0; i + level < v.size(); ++i)
      row[i] = (w * row[i + 1] - row[i]) / (w - 1.0);
    row.resize(v.size() - level);
    change = std::abs(row.back() - best);
    best = row.back();
  }
  return {best, change};
}

}  // namespace

AbsContDensity AbsContDensity::from_density(const std::function<double(double)>& rho,
                                            std::size_t n_coeffs, std::size_t grid_points) {
  AbsContDensity d;
  d.fourier.assign(n_coeffs + 1, Complex{0.0});
  for (std::size_t j = 0; j < grid_points; ++j) {
    const double t = kTwoPi * double(j) / double(grid_points);
    const double v = rho(t);
    for (std::size_t n = 0; n <= n_coeffs; ++n) d.fourier[n] += v * unit(double(n) * t);
  }
  for (auto& c : d.fourier) c /= double(grid_points);
  d.fourier[0] = Complex{d.fourier[0].real(), 0.0};
  return d;
}

UnitCircleMeasure::UnitCircleMeasure(std::vector<MeasureAtom> atoms,
                                     std::optional<AbsContDensity> ac, const Tolerances& tol)
    : atoms_(std::move(atoms)), ac_(std::move(ac)) {
  double total = 0.0;
  for (auto& a : atoms_) {
    if (!(a.weight > 0.0))
      throw ValidationError("measure: atom weights must be strictly positive");
    a.angle = wrap_angle(a.angle);
    total += a.weight;
  }
  // Atoms closer than the gap tolerance are rejected, not merged.
  std::vector<double> angles;
  angles.reserve(atoms_.size());
  for (const auto& a : atoms_) angles.push_back(a.angle);
  std::sort(angles.begin(), angles.end());
  for (std::size_t i = 1; i < angles.size(); ++i) {
    if (angles[i] - angles[i - 1] < tol.atom_gap)
      throw ValidationError("measure: atom positions separated by less than atom_gap=" +
                            std::to_string(tol.atom_gap));
  }
  if (angles.size() >= 2 && (angles.front() + kTwoPi - angles.back()) < tol.atom_gap)
    throw ValidationError("measure: atom positions separated by less than atom_gap=" +
                          std::to_string(tol.atom_gap));

  if (ac_) {
    if (ac_->fourier.empty()) {
      ac_.reset();
    } else {
      if (std::abs(ac_->fourier[0].imag()) > tol.algebraic)
        throw ValidationError("measure: a.c. mass (Fourier coefficient 0) must be real");
      const double mass = ac_->fourier[0].real();
      if (mass < -tol.algebraic)
        throw ValidationError("measure: a.c. mass must be nonnegative");
      // necessary positivity screen: |c_n| <= c_0
      for (std::size_t n = 1; n < ac_->fourier.size(); ++n)
        if (std::abs(ac_->fourier[n]) > mass + 1e-9)
          throw ValidationError("measure: a.c. Fourier coefficient " + std::to_string(n) +
                                " exceeds the a.c. mass; density cannot be nonnegative");
      total += mass;
    }
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw ValidationError("measure: atom weights plus a.c. mass must equal 1 within 1e-10, got " +
                          std::to_string(total));
}

UnitCircleMeasure UnitCircleMeasure::point_mass(double angle) {
  return UnitCircleMeasure({{angle, 1.0}}, std::nullopt);
}

UnitCircleMeasure UnitCircleMeasure::uniform() {
  AbsContDensity d;
  d.fourier = {Complex{1.0}};
  return UnitCircleMeasure({}, d);
}

UnitCircleMeasure UnitCircleMeasure::from_atoms(std::vector<MeasureAtom> atoms,
                                                const Tolerances& tol) {
  return UnitCircleMeasure(std::move(atoms), std::nullopt, tol);
}

double UnitCircleMeasure::atom_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

MomentSequence moments(const UnitCircleMeasure& m, std::size_t n_max) {
  MomentSequence out;
  out.mu.assign(n_max + 1, Complex{0.0});
  for (const auto& a : m.atoms()) {
    const Complex u = unit(a.angle);
    Complex p = 1.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
      out.mu[n] += a.weight * p;
      p *= u;
    }
  }
  if (m.ac_part())
    for (std::size_t n = 0; n <= n_max; ++n) out.mu[n] += m.ac_part()->coeff(n);
  return out;
}

Complex stieltjes(const UnitCircleMeasure& m, Complex z) {
  require_interior(z, "stieltjes");
  Complex acc = 0.0;
  for (const auto& a : m.atoms()) acc += a.weight / (1.0 - unit(a.angle) * z);
  if (m.ac_part()) {
    // ∫ μ_ac(du)/(1-uz) = Σ_{n>=0} c_n z^n, exact for the finite table.
    const auto& c = m.ac_part()->fourier;
    Complex p = 1.0;
    for (const auto& cn : c) {
      acc += cn * p;
      p *= z;
    }
  }
  return acc;
}

namespace {

// (F(z) - 1)/z, computed without cancellation near z = 0:
// F - 1 = Σ_i m_i 2z/(u_i - z) + 2 Σ_{n>=1} conj(c_n) z^n.
Complex caratheodory_m1_over_z(const UnitCircleMeasure& m, Complex z) {
  Complex acc = 0.0;
  for (const auto& a : m.atoms()) acc += a.weight * 2.0 / (unit(a.angle) - z);
  if (m.ac_part()) {
    const auto& c = m.ac_part()->fourier;
    Complex p = 1.0;  // z^{n-1}
    for (std::size_t n = 1; n < c.size(); ++n) {
      acc += 2.0 * std::conj(c[n]) * p;
      p *= z;
    }
  }
  return acc;
}

}  // namespace

Complex caratheodory(const UnitCircleMeasure& m, Complex z) {
  require_interior(z, "caratheodory");
  return 1.0 + z * caratheodory_m1_over_z(m, z);
}

Complex schur_from_measure(const UnitCircleMeasure& m, Complex z, const Tolerances& tol) {
  require_interior(z, "schur_from_measure");
  // f = (1/z)(F-1)/(F+1); the removable singularity at 0 is handled by the
  // cancellation-free form of (F-1)/z, which at z=0 equals 2 conj(mu_1).
  const Complex num = caratheodory_m1_over_z(m, z);
  const Complex f = num / (caratheodory(m, z) + 1.0);
  if (std::abs(f) >= 1.0 + tol.algebraic)
    throw ValidationError("schur_from_measure: |f| >= 1 in the interior (" +
                          std::to_string(std::abs(f)) + "); measure is not a probability measure");
  return f;
}

std::vector<double> RadialSchedule::radii() const {
  std::vector<double> r;
  for (int k = k_min; k <= k_max; ++k) r.push_back(1.0 - std::pow(2.0, -double(k)));
  return r;
}

DensityValue ac_density_at(const UnitCircleMeasure& m, double t, const RadialSchedule& sched,
                           const Tolerances& tol) {
  const Complex dir = unit(t);
  std::vector<Complex> vals;
  constexpr double kDivergenceCap = 1e12;
  for (double r : sched.radii()) {
    const Complex F = caratheodory(m, r * dir);
    if (F.real() > kDivergenceCap) return {DensityValue::Status::singular_point, 0.0};
    vals.push_back(Complex{F.real(), 0.0});
  }
  // a singular point makes Re F grow like 1/(1-r): geometric growth along the
  // schedule instead of convergence
  const std::size_t n = vals.size();
  if (n >= 3) {
    const double v2 = vals[n - 1].real(), v1 = vals[n - 2].real(), v0 = vals[n - 3].real();
    if (v2 > 50.0 && v2 > 1.5 * v1 && v1 > 1.5 * v0)
      return {DensityValue::Status::singular_point, v2};
  }
  const auto res = richardson_geometric(vals);
  if (!(std::abs(res.value) < kDivergenceCap))
    return {DensityValue::Status::singular_point, 0.0};
  (void)tol;
  return {DensityValue::Status::ok, res.value.real()};
}

namespace {

double atom_mass_from_F(const std::function<Complex(Complex)>& F, Complex z0,
                        const RadialSchedule& sched, const Tolerances& tol) {
  std::vector<Complex> vals;
  std::ostringstream diag;
  for (double r : sched.radii()) {
    const Complex v = 0.5 * (1.0 - r) * F(r * z0);
    vals.push_back(v);
    diag << v << " ";
  }
  const auto res = richardson_geometric(vals);
  if (!(res.last_change < 1e-3) || !std::isfinite(res.value.real()))
    throw ConvergenceError(
        "atom_mass_at: radial sequence (1-r)/2 F(r z0) did not converge; last extrapolation "
        "change " +
        std::to_string(res.last_change) + "; raw values: " + diag.str());
  (void)tol;
  return res.value.real();
}

}  // namespace

double atom_mass_at(const UnitCircleMeasure& m, Complex z0, const RadialSchedule& sched,
                    const Tolerances& tol) {
  return atom_mass_from_F([&m](Complex z) { return caratheodory(m, z); }, z0, sched, tol);
}

double atom_mass_at(const std::function<Complex(Complex)>& caratheodory_eval, Complex z0,
                    const RadialSchedule& sched, const Tolerances& tol) {
  return atom_mass_from_F(caratheodory_eval, z0, sched, tol);
}

RecurrenceClass classify_recurrence(const UnitCircleMeasure& m, const Tolerances& tol) {
  const double ac = m.ac_mass();
  return {ac <= tol.algebraic, ac};
}

SjkReport sjk_classify(const MomentSequence& mu, const SjkOptions& opt) {
  if (mu.mu.size() < 8)
    throw ValidationError("sjk_classify: need a moment truncation of at least 8");
  const std::size_t n = mu.mu.size() - 1;
  const std::size_t half = n / 2;
  double sum = 0.0, sum_half = 0.0, sum_half_count = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    sum += std::norm(mu.mu[k]);
    if (k == half) sum_half = sum;
  }
  sum_half_count = sum_half / double(half);
  const double wiener = sum / double(n);
  const double tail = sum - sum_half;
  SjkReport rep{SjkClass::inconclusive, sum, tail, wiener};
  const double ratio = sum_half_count > 0.0 ? wiener / sum_half_count : 0.0;
  if (tail < opt.convergence_tol) {
    rep.verdict = SjkClass::transient;
  } else if (wiener > opt.wiener_floor && ratio > 0.75 && ratio < 4.0 / 3.0) {
    // the Cesàro mean of |mu_n|^2 has stabilized at a positive level: point
    // masses present (Wiener), so Σ|mu_n|^2 diverges. A mean still decaying
    // between the two windows stays inconclusive.
    rep.verdict = SjkClass::recurrent;
  }
  return rep;
}

std::vector<Complex> arrival_series_from_moments(std::span<const Complex> mu, std::size_t n_max) {
  if (mu.empty() || std::abs(mu[0] - 1.0) > 1e-8)
    throw ValidationError("arrival_series_from_moments: moment sequence must start at mu_0 = 1");
  const auto inv = poly::series_inverse(mu, n_max + 1);
  std::vector<Complex> a(n_max + 1, Complex{0.0});
  for (std::size_t k = 1; k <= n_max; ++k) a[k] = -inv[k];
  return a;
}

std::vector<Complex> schur_taylor_from_measure(const UnitCircleMeasure& m, std::size_t n_coeffs) {
  const auto mom = moments(m, n_coeffs + 1);
  const auto a = arrival_series_from_moments(mom.mu, n_coeffs + 1);
  std::vector<Complex> c(n_coeffs, Complex{0.0});
  for (std::size_t k = 0; k < n_coeffs; ++k) c[k] = std::conj(a[k + 1]);
  return c;
}

double toeplitz_min_eigenvalue(std::span<const Complex> mu, std::size_t n) {
  const std::size_t dim = std::min(n + 1, mu.size());
  Eigen::MatrixXcd t(dim, dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = 0; k < dim; ++k)
      t(j, k) = (j >= k) ? mu[j - k] : std::conj(mu[k - j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace urec
