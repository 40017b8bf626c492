#include "urec/schur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace urec {

std::vector<double> VerblunskySequence::rho() const {
  std::vector<double> out;
  out.reserve(gamma.size());
  for (const auto& g : gamma) out.push_back(std::sqrt(std::max(0.0, 1.0 - std::norm(g))));
  return out;
}

Complex period_disc_sqrt(Complex w, double gamma_abs) {
  const double eta = std::asin(std::clamp(gamma_abs, 0.0, 1.0));
  const Complex e2 = unit(2.0 * eta);
  // Each factor w - e^{±2iη} maps the closed disk into a disk that avoids the
  // ray through e^{±2iη}; rotating that ray onto the negative real axis makes
  // the principal square root single-valued on the image.
  const Complex s1 = unit(eta - 0.5 * kPi) * std::sqrt((w - e2) * unit(kPi - 2.0 * eta));
  const Complex s2 = unit(-0.5 * kPi - eta) * std::sqrt((w - std::conj(e2)) * unit(kPi + 2.0 * eta));
  return -s1 * s2;
}

Complex constant_verblunsky_schur(Complex gamma, Complex z) {
  const double g = std::abs(gamma);
  if (g >= 1.0) throw ValidationError("constant_verblunsky_schur: |gamma| must be < 1");
  if (g == 0.0) return {0.0, 0.0};
  // Fixed point of f -> (1/z)(f-γ)/(1-conj(γ)f), written in the
  // cancellation-free form 2γ / (1 - z + sqrt((z-1)^2 + 4|γ|^2 z)).
  return 2.0 * gamma / (1.0 - z + period_disc_sqrt(z, g));
}

namespace {

Complex blaschke_eval(const BlaschkeSchur& b, Complex z) {
  Complex acc = b.beta;
  for (const auto& a : b.zeros) acc *= (a - z) / (1.0 - std::conj(a) * z);
  return acc;
}

// Walk fixed point with parameters γ,0,γ,0,...: f(z) = 2γ/(1 - z² + sqrt(D(z²))).
Complex walk_tail_eval(Complex gamma, Complex z) {
  const double g = std::abs(gamma);
  if (g == 0.0) return {0.0, 0.0};
  return 2.0 * gamma / (1.0 - z * z + period_disc_sqrt(z * z, g));
}

Complex verblunsky_tail_eval(const VerblunskySchur& v, Complex z) {
  if (!v.period || v.gamma.empty()) return {0.0, 0.0};
  const std::size_t p = *v.period;
  if (p == 0 || p > v.gamma.size())
    throw ValidationError("verblunsky: period must be between 1 and the explicit list length");
  if (p == 1) return constant_verblunsky_schur(v.gamma.back(), z);
  if (p == 2) {
    const Complex a = v.gamma[v.gamma.size() - 2];
    const Complex b = v.gamma[v.gamma.size() - 1];
    if (b == Complex{0.0}) return walk_tail_eval(a, z);
    if (a == Complex{0.0}) return z * walk_tail_eval(b, z);
    if (a == b) return constant_verblunsky_schur(a, z);
    throw ValidationError(
        "verblunsky: period-2 tails are solved in closed form only for blocks (γ,0), (0,γ), (γ,γ)");
  }
  throw ValidationError("verblunsky: periodic tails beyond period 2 are not supported");
}

Complex verblunsky_eval(const VerblunskySchur& v, Complex z) {
  for (const auto& g : v.gamma)
    if (std::abs(g) >= 1.0) throw ValidationError("verblunsky: |gamma_k| must be < 1");
  Complex f = verblunsky_tail_eval(v, z);
  // inverse Schur steps through the explicit prefix
  for (std::size_t i = v.gamma.size(); i-- > 0;) {
    const Complex g = v.gamma[i];
    const Complex zf = z * f;
    f = (zf + g) / (1.0 + std::conj(g) * zf);
  }
  return f;
}

}  // namespace

Complex schur_eval(const SchurRepresentation& f, Complex z) {
  return std::visit(
      [&](const auto& rep) -> Complex {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, RationalSchur>) {
          return poly::eval(rep.num, z) / poly::eval(rep.den, z);
        } else if constexpr (std::is_same_v<T, BlaschkeSchur>) {
          return blaschke_eval(rep, z);
        } else if constexpr (std::is_same_v<T, TaylorSchur>) {
          return poly::eval(rep.coeffs, z);
        } else {
          return verblunsky_eval(rep, z);
        }
      },
      f);
}

double inner_deviation(const SchurRepresentation& f, std::size_t grid) {
  double dev = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    const double t = kTwoPi * double(j) / double(grid);
    dev = std::max(dev, std::abs(std::abs(schur_eval(f, unit(t))) - 1.0));
  }
  return dev;
}

RationalSchur rational_from_blaschke(const BlaschkeSchur& b) {
  poly::CVec num{b.beta}, den{Complex{1.0}};
  for (const auto& a : b.zeros) {
    num = poly::multiply(num, poly::CVec{a, Complex{-1.0}});
    den = poly::multiply(den, poly::CVec{Complex{1.0}, -std::conj(a)});
  }
  return {num, den};
}

RationalSchur rational_schur_from_measure(const UnitCircleMeasure& m) {
  if (!m.pure_point() || m.atoms().empty())
    throw ValidationError("rational_schur_from_measure: requires a finite-atom measure");
  // μ̂ = P/Q with Q = Π(1-u_i z), P = Σ_i m_i Π_{j≠i}(1-u_j z);
  // f = R/conj(P) with R = (conj(P)-conj(Q))/z (conjugate coefficients).
  const auto& atoms = m.atoms();
  poly::CVec q{Complex{1.0}};
  for (const auto& a : atoms) q = poly::multiply(q, poly::CVec{Complex{1.0}, -unit(a.angle)});
  poly::CVec p{Complex{0.0}};
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    poly::CVec term{Complex{atoms[i].weight}};
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (j == i) continue;
      term = poly::multiply(term, poly::CVec{Complex{1.0}, -unit(atoms[j].angle)});
    }
    p.resize(std::max(p.size(), term.size()), Complex{0.0});
    for (std::size_t k = 0; k < term.size(); ++k) p[k] += term[k];
  }
  const auto pbar = poly::conjugate_coeffs(p);
  const auto qbar = poly::conjugate_coeffs(q);
  poly::CVec diff(std::max(pbar.size(), qbar.size()), Complex{0.0});
  for (std::size_t k = 0; k < pbar.size(); ++k) diff[k] += pbar[k];
  for (std::size_t k = 0; k < qbar.size(); ++k) diff[k] -= qbar[k];
  // constant term vanishes because P(0) = Q(0) = 1
  poly::CVec r(diff.begin() + 1, diff.end());
  poly::trim(r);
  return {r, pbar};
}

BlaschkeSchur blaschke_from_rational(const RationalSchur& f, const Tolerances& tol) {
  BlaschkeSchur b;
  b.zeros = blaschke_zeros(f, tol);
  Complex zeta{0.29, 0.17};
  Complex prod;
  for (int attempt = 0; attempt < 8; ++attempt) {
    prod = 1.0;
    for (const auto& a : b.zeros) prod *= (a - zeta) / (1.0 - std::conj(a) * zeta);
    if (std::abs(prod) > 1e-6) break;
    zeta *= Complex{0.7, 0.31};  // move off a zero
  }
  b.beta = schur_eval(SchurRepresentation{f}, zeta) / prod;
  const double mod = std::abs(b.beta);
  if (std::abs(mod - 1.0) > 1e-6)
    throw ValidationError("blaschke_from_rational: prefactor modulus " + std::to_string(mod) +
                          " is not 1; input is not inner");
  b.beta /= mod;
  return b;
}

namespace {

SchurStep step_rational(const RationalSchur& f, const Tolerances& tol) {
  const Complex p0 = f.den.empty() ? Complex{0.0} : f.den[0];
  if (std::abs(p0) < 1e-14)
    throw ValidationError("schur_step: rational denominator vanishes at 0");
  const Complex gamma0 = (f.num.empty() ? Complex{0.0} : f.num[0]) / p0;
  if (std::abs(gamma0) >= 1.0 - tol.algebraic) return {gamma0, std::nullopt, true};
  // f1 = (R - γ0 P) / (z (P - conj(γ0) R)); the numerator's constant term is 0.
  poly::CVec numer(std::max(f.num.size(), f.den.size()), Complex{0.0});
  for (std::size_t k = 0; k < f.num.size(); ++k) numer[k] += f.num[k];
  for (std::size_t k = 0; k < f.den.size(); ++k) numer[k] -= gamma0 * f.den[k];
  poly::CVec denom(std::max(f.num.size(), f.den.size()), Complex{0.0});
  for (std::size_t k = 0; k < f.den.size(); ++k) denom[k] += f.den[k];
  for (std::size_t k = 0; k < f.num.size(); ++k) denom[k] -= std::conj(gamma0) * f.num[k];
  poly::CVec shifted(numer.begin() + 1, numer.end());
  poly::trim(shifted);
  poly::trim(denom);
  return {gamma0, SchurRepresentation{RationalSchur{shifted, denom}}, false};
}

SchurStep step_taylor(const TaylorSchur& f, const Tolerances& tol) {
  if (f.coeffs.empty()) throw ValidationError("schur_step: empty Taylor data");
  const Complex gamma0 = f.coeffs[0];
  if (std::abs(gamma0) >= 1.0 - tol.algebraic) return {gamma0, std::nullopt, true};
  if (f.coeffs.size() < 2)
    throw ValidationError("schur_step: Taylor data exhausted (need more coefficients)");
  const std::size_t n = f.coeffs.size() - 1;
  poly::CVec shifted(f.coeffs.begin() + 1, f.coeffs.end());
  poly::CVec denom(f.coeffs.size(), Complex{0.0});
  denom[0] = 1.0;
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) denom[k] -= std::conj(gamma0) * f.coeffs[k];
  return {gamma0, SchurRepresentation{TaylorSchur{poly::series_divide(shifted, denom, n)}}, false};
}

SchurStep step_verblunsky(const VerblunskySchur& v, const Tolerances&) {
  VerblunskySchur next = v;
  Complex gamma0{0.0};
  if (!v.gamma.empty()) {
    gamma0 = v.gamma.front();
    if (v.period && v.gamma.size() == *v.period) {
      // rotate the period block
      std::rotate(next.gamma.begin(), next.gamma.begin() + 1, next.gamma.end());
    } else {
      next.gamma.erase(next.gamma.begin());
    }
  }
  return {gamma0, SchurRepresentation{next}, false};
}

}  // namespace

SchurStep schur_step(const SchurRepresentation& f, const Tolerances& tol) {
  return std::visit(
      [&](const auto& rep) -> SchurStep {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, RationalSchur>) {
          return step_rational(rep, tol);
        } else if constexpr (std::is_same_v<T, BlaschkeSchur>) {
          if (rep.zeros.empty()) return {rep.beta, std::nullopt, true};
          return step_rational(rational_from_blaschke(rep), tol);
        } else if constexpr (std::is_same_v<T, TaylorSchur>) {
          return step_taylor(rep, tol);
        } else {
          return step_verblunsky(rep, tol);
        }
      },
      f);
}

VerblunskySequence verblunsky_from_taylor(std::span<const Complex> c, std::size_t k_max,
                                          const Tolerances& tol) {
  VerblunskySequence out;
  SchurRepresentation rep{TaylorSchur{poly::CVec(c.begin(), c.end())}};
  for (std::size_t k = 0; k < k_max; ++k) {
    const auto step = schur_step(rep, tol);
    out.gamma.push_back(step.gamma0);
    if (step.terminated) {
      out.finite_blaschke_degree = k;
      return out;
    }
    rep = *step.next;
  }
  return out;
}

poly::CVec taylor_from_verblunsky(std::span<const Complex> gamma, std::size_t n_coeffs) {
  poly::CVec f(n_coeffs, Complex{0.0});
  for (std::size_t i = gamma.size(); i-- > 0;) {
    // f_prev = (z f + γ)/(1 + conj(γ) z f)
    poly::CVec zf(n_coeffs, Complex{0.0});
    for (std::size_t k = 1; k < n_coeffs; ++k) zf[k] = f[k - 1];
    poly::CVec num = zf;
    num[0] += gamma[i];
    poly::CVec den(n_coeffs, Complex{0.0});
    den[0] = 1.0;
    for (std::size_t k = 0; k < n_coeffs; ++k) den[k] += std::conj(gamma[i]) * zf[k];
    f = poly::series_divide(num, den, n_coeffs);
  }
  return f;
}

std::vector<Complex> blaschke_zeros(const RationalSchur& f, const Tolerances& tol) {
  const double cop = poly::sylvester_coprimality(f.num, f.den);
  if (cop < tol.algebraic)
    throw ValidationError("blaschke_zeros: numerator and denominator share a near-common root "
                          "(relative Sylvester coprimality " +
                          std::to_string(cop) + " < " + std::to_string(tol.algebraic) + ")");
  auto zeros = poly::roots(f.num);
  for (const auto& z : zeros)
    if (std::abs(z) >= 1.0)
      throw ValidationError("blaschke_zeros: zero at |z| = " + std::to_string(std::abs(z)) +
                            " >= 1; input is not an inner function of the stated degree");
  return zeros;
}

int winding_number(const SchurRepresentation& f, std::size_t initial_grid, const Tolerances& tol) {
  const double dev = inner_deviation(f, 2048);
  if (dev > tol.inner)
    throw ValidationError("winding_number: not inner (max ||f|-1| on circle = " +
                          std::to_string(dev) + " > " + std::to_string(tol.inner) + ")");
  std::size_t m = std::max<std::size_t>(initial_grid, 64);
  constexpr long kUnset = std::numeric_limits<long>::min();
  long confirmed = kUnset;
  while (m <= (std::size_t{1} << 22)) {
    double total = 0.0;
    Complex prev = std::conj(schur_eval(f, Complex{1.0, 0.0}));
    bool ok = true;
    for (std::size_t j = 1; j <= m; ++j) {
      const double t = kTwoPi * double(j) / double(m);
      const Complex g = unit(t) * std::conj(schur_eval(f, unit(-t)));
      const double d = std::arg(g / prev);
      if (std::abs(d) >= 0.5 * kPi) {
        ok = false;
        break;
      }
      total += d;
      prev = g;
    }
    if (ok) {
      const long w = std::lround(total / kTwoPi);
      if (std::abs(total / kTwoPi - double(w)) < 0.01) {
        if (confirmed != kUnset && confirmed == w) return static_cast<int>(w);
        confirmed = w;
      } else {
        confirmed = kUnset;
      }
    }
    m *= 2;
  }
  throw ConvergenceError(
      "winding_number: phase steps still >= pi/2 (or unconfirmed total) at the maximum grid");
}

double variance_from_zeros(std::span<const Complex> zeros) {
  for (const auto& z : zeros)
    if (std::abs(z) >= 1.0)
      throw ValidationError("variance_from_zeros: all zeros must satisfy |z| < 1");
  Complex acc{0.0};
  for (const auto& zl : zeros)
    for (const auto& zj : zeros) {
      const Complex prod = zl * std::conj(zj);
      acc += 2.0 * prod / (1.0 - prod);
    }
  return acc.real();
}

namespace {

double cross2(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool in_hull(const std::vector<Complex>& pts, Complex z, double tol) {
  if (pts.size() == 1) return std::abs(z - pts[0]) <= tol;
  if (pts.size() == 2) {
    const Complex d = pts[1] - pts[0];
    const double len2 = std::norm(d);
    const double s = std::clamp(((z - pts[0]) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(z - (pts[0] + s * d)) <= std::sqrt(tol);
  }
  // points on the unit circle sorted by angle form the hull polygon
  std::vector<Complex> v = pts;
  std::sort(v.begin(), v.end(),
            [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex a = v[i], b = v[(i + 1) % v.size()];
    if (cross2(b - a, z - a) < -tol) return false;
  }
  return true;
}

}  // namespace

ElectrostaticReport electrostatic_stationarity(const UnitCircleMeasure& m, Complex z,
                                               const Tolerances& tol) {
  if (!m.pure_point() || m.atoms().empty())
    throw ValidationError("electrostatic_stationarity: requires a finite-atom measure");
  if (std::abs(z) >= 1.0)
    throw ValidationError("electrostatic_stationarity: |z| must be < 1");
  Complex grad{0.0};
  std::vector<Complex> pts;
  for (const auto& a : m.atoms()) {
    const Complex u = unit(a.angle);
    pts.push_back(u);
    if (std::abs(u - z) < 1e-12)
      throw ValidationError("electrostatic_stationarity: z coincides with an atom (pole)");
    grad += a.weight / (u - z);
  }
  return {std::abs(grad), in_hull(pts, z, tol.atom_gap)};
}

ToeplitzFeasibility toeplitz_feasibility(std::span<const Complex> a, std::size_t k_max,
                                         const Tolerances& tol) {
  if (a.size() < k_max)
    throw ValidationError("toeplitz_feasibility: need k_max amplitudes");
  poly::CVec one_minus_ahat(k_max + 1, Complex{0.0});
  one_minus_ahat[0] = 1.0;
  for (std::size_t n = 1; n <= k_max; ++n) one_minus_ahat[n] = -a[n - 1];
  const auto mu = poly::series_inverse(one_minus_ahat, k_max + 1);
  ToeplitzFeasibility out{true, -1, {}};
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double lam = toeplitz_min_eigenvalue(mu, k);
    out.min_eigenvalue.push_back(lam);
    if (out.feasible && lam < -tol.psd) {
      out.feasible = false;
      out.first_failing_order = static_cast<int>(k);
    }
  }
  return out;
}

}  // namespace urec
