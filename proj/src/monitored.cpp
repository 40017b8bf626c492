#include "urec/monitored.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

namespace urec {

DenseUnitary::DenseUnitary(Eigen::MatrixXcd u, const Tolerances& tol) : u_(std::move(u)) {
  if (u_.rows() != u_.cols()) throw ValidationError("unitary: matrix must be square");
  const double dev =
      (u_.adjoint() * u_ - Eigen::MatrixXcd::Identity(u_.rows(), u_.cols())).norm();
  if (dev > tol.algebraic)
    throw ValidationError("unitary: ||U^*U - 1|| = " + std::to_string(dev) + " exceeds " +
                          std::to_string(tol.algebraic));
}

namespace {

void check_state(const Eigen::VectorXcd& phi, Eigen::Index dim) {
  if (phi.size() != dim) throw ValidationError("system: state dimension mismatch");
  if (std::abs(phi.norm() - 1.0) > 1e-12)
    throw ValidationError("system: ||phi|| must be 1 within 1e-12, got " +
                          std::to_string(phi.norm()));
}

}  // namespace

UnitarySystem make_system(Eigen::MatrixXcd u, Eigen::VectorXcd phi, const Tolerances& tol) {
  auto op = std::make_shared<DenseUnitary>(std::move(u), tol);
  check_state(phi, op->dim());
  return {op, std::move(phi)};
}

UnitarySystem make_system(Eigen::SparseMatrix<Complex> u, Eigen::VectorXcd phi,
                          const Tolerances&) {
  auto op = std::make_shared<SparseUnitary>(std::move(u));
  check_state(phi, op->dim());
  return {op, std::move(phi)};
}

UnitarySystem system_from_atoms(const UnitCircleMeasure& m) {
  if (!m.pure_point() || m.atoms().empty())
    throw ValidationError("system_from_atoms: requires a finite-atom measure");
  const auto& atoms = m.atoms();
  const Eigen::Index d = static_cast<Eigen::Index>(atoms.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);
  Eigen::VectorXcd phi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    u(i, i) = unit(atoms[i].angle);
    phi(i) = std::sqrt(atoms[i].weight);
  }
  phi /= phi.norm();
  return {std::make_shared<DenseUnitary>(std::move(u)), std::move(phi)};
}

UnitarySystem fixed_point_shift_system(Complex alpha, Complex beta, std::size_t window) {
  if (window < 2) throw ValidationError("fixed_point_shift_system: window too small");
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw ValidationError("fixed_point_shift_system: |alpha|^2 + |beta|^2 must be 1");
  const Eigen::Index d = static_cast<Eigen::Index>(window) + 1;  // |*> plus window sites
  Eigen::SparseMatrix<Complex> u(d, d);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.emplace_back(0, 0, Complex{1.0});
  // the last site has no image: a window truncation. Amplitude reaching it
  // breaks the conservation identity, which monitored_run reports loudly, so
  // results inside the light cone are exact rather than silently wrapped.
  for (std::size_t x = 0; x + 1 < window; ++x) {
    const Eigen::Index from = 1 + static_cast<Eigen::Index>(x);
    trip.emplace_back(from + 1, from, Complex{1.0});
  }
  u.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(d);
  phi(0) = alpha;
  phi(1) = beta;
  return {std::make_shared<SparseUnitary>(std::move(u)), std::move(phi)};
}

UnitCircleMeasure spectral_measure_of(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& phi,
                                      double weight_floor, const Tolerances& tol) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("spectral_measure_of: eigendecomposition failed");
  std::vector<MeasureAtom> atoms;
  double total = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const Complex lam = es.eigenvalues()(i);
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    v /= v.norm();
    const double w = std::norm(v.dot(phi));
    if (w < weight_floor) continue;
    atoms.push_back({std::arg(lam), w});
    total += w;
  }
  for (auto& a : atoms) a.weight /= total;  // discards only sub-floor mass
  return UnitCircleMeasure::from_atoms(std::move(atoms), tol);
}

ArrivalRecord monitored_run(const UnitarySystem& sys, std::size_t n_max, const Tolerances& tol) {
  if (n_max < 1) throw ValidationError("monitored_run: n_max must be >= 1");
  ArrivalRecord rec;
  rec.truncation = n_max;
  rec.a.assign(n_max + 1, Complex{0.0});
  rec.s.assign(n_max + 1, 0.0);
  rec.s[0] = 1.0;
  Eigen::VectorXcd psi = sys.phi, next(sys.phi.size());
  double acc = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    sys.op->apply(psi, next);
    const Complex an = sys.phi.dot(next);  // <phi|U psi>
    psi = next - an * sys.phi;
    rec.a[n] = an;
    acc += std::norm(an);
    rec.s[n] = psi.squaredNorm();
    // conservation threshold grows with the floating-point accumulation bound
    const double thresh = std::max(tol.algebraic, 64.0 * 2.22e-16 * double(n));
    if (std::abs(acc + rec.s[n] - 1.0) > thresh)
      throw ValidationError(
          "monitored_run: conservation sum|a|^2 + s_n - 1 = " +
          std::to_string(acc + rec.s[n] - 1.0) + " beyond " + std::to_string(thresh) +
          " at step " + std::to_string(n) + " (non-unitary operator or window too small)");
  }
  rec.r_partial = acc;
  return rec;
}

ReturnProbability return_probability(const ArrivalRecord& rec) {
  return {rec.r_partial, rec.r_partial + rec.s.back()};
}

namespace {

ReturnTimeResult::Status tail_status(const ArrivalRecord& rec, const TailPolicy& pol) {
  const double sN = rec.s.back();
  if (sN <= pol.converged_tail) return ReturnTimeResult::Status::ok;
  const double s_half = rec.s[rec.truncation / 2];
  if (std::abs(sN - s_half) < pol.plateau_tol && sN > pol.transient_floor)
    return ReturnTimeResult::Status::transient;
  return ReturnTimeResult::Status::lower_bound;
}

}  // namespace

ReturnTimeResult expected_return_time(const ArrivalRecord& rec, const TailPolicy& pol) {
  double tau = 0.0;
  for (std::size_t n = 1; n <= rec.truncation; ++n) tau += double(n) * std::norm(rec.a[n]);
  return {tail_status(rec, pol), tau, rec.s.back()};
}

VarianceResult return_time_variance(const ArrivalRecord& rec, const TailPolicy& pol) {
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t n = 1; n <= rec.truncation; ++n) {
    const double p = std::norm(rec.a[n]);
    m1 += double(n) * p;
    m2 += double(n) * double(n) * p;
  }
  return {tail_status(rec, pol), m2 - m1 * m1, rec.s.back()};
}

double generating_identity_check(const UnitarySystem& sys, const UnitCircleMeasure& measure,
                                 std::size_t n_max, const Tolerances& tol) {
  const auto rec = monitored_run(sys, n_max, tol);
  const auto mom = moments(measure, n_max);
  const auto a_series = arrival_series_from_moments(mom.mu, n_max);
  double dev = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) dev = std::max(dev, std::abs(rec.a[n] - a_series[n]));
  return dev;
}

std::vector<double> tau_radial_estimate(const SchurRepresentation& f,
                                        const std::vector<double>& r_schedule,
                                        const quad::Options& qopt, const Tolerances& tol) {
  const double dev = inner_deviation(f, 2048);
  if (dev > tol.inner)
    throw ValidationError("tau_radial_estimate: not inner (max ||f|-1| on circle = " +
                          std::to_string(dev) + "); lower bounds would diverge");
  std::vector<double> out;
  out.reserve(r_schedule.size());
  for (const double r : r_schedule) {
    if (!(r > 0.0 && r < 1.0))
      throw ValidationError("tau_radial_estimate: schedule radii must lie in (0,1)");
    const double r2 = r * r;
    out.push_back(quad::periodic_mean(
        [&](double t) {
          const Complex fv = schur_eval(f, r * unit(t));
          return (1.0 - r2 * std::norm(fv)) / (1.0 - r2);
        },
        qopt));
  }
  return out;
}

}  // namespace urec
