#include "urec/cmv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "urec/quadrature.hpp"

namespace urec {

namespace {

double rho_of(Complex g) { return std::sqrt(std::max(0.0, 1.0 - std::norm(g))); }

// Theta(γ) = [[conj γ, ρ],[ρ, -γ]] as a 2x2 block at offset (r, r).
void add_theta(std::vector<Eigen::Triplet<Complex>>& trip, Eigen::Index r, Complex g) {
  const double rho = rho_of(g);
  trip.emplace_back(r, r, std::conj(g));
  trip.emplace_back(r, r + 1, Complex{rho});
  trip.emplace_back(r + 1, r, Complex{rho});
  trip.emplace_back(r + 1, r + 1, -g);
}

}  // namespace

CMVMatrix cmv_from_verblunsky(std::span<const Complex> gamma, std::size_t dim) {
  if (gamma.size() < dim + 1)
    throw ValidationError("cmv_from_verblunsky: need dim+1 coefficients for a dim window");
  for (std::size_t k = 0; k <= dim; ++k)
    if (std::abs(gamma[k]) >= 1.0)
      throw ValidationError("cmv_from_verblunsky: |gamma_" + std::to_string(k) +
                            "| >= 1 is outside the open disk");
  // C = M L with L = ⊕ Theta(γ_even) on rows (0,1),(2,3),... and
  // M = (1) ⊕ Theta(γ_odd) on rows (1,2),(3,4),...; build two sizes larger
  // and truncate to the leading dim x dim window.
  const Eigen::Index big = static_cast<Eigen::Index>(dim) + 2;
  std::vector<Eigen::Triplet<Complex>> tl, tm;
  for (Eigen::Index r = 0; r + 1 < big; r += 2) add_theta(tl, r, gamma[static_cast<std::size_t>(r)]);
  // a leftover unpaired row lies outside the truncated window; fill with 1
  if (big % 2 == 1) tl.emplace_back(big - 1, big - 1, Complex{1.0});
  tm.emplace_back(0, 0, Complex{1.0});
  for (Eigen::Index r = 1; r + 1 < big; r += 2) add_theta(tm, r, gamma[static_cast<std::size_t>(r)]);
  if (big % 2 == 0) tm.emplace_back(big - 1, big - 1, Complex{1.0});
  Eigen::SparseMatrix<Complex> l(big, big), m(big, big);
  l.setFromTriplets(tl.begin(), tl.end());
  m.setFromTriplets(tm.begin(), tm.end());
  Eigen::SparseMatrix<Complex> prod = (m * l).pruned(1e-300);
  CMVMatrix out;
  out.dim = dim;
  out.gamma.assign(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(dim) + 1);
  out.C = prod.topLeftCorner(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  out.C.makeCompressed();
  return out;
}

Complex CoinedWalkSpec::gamma_at_site(std::size_t x) const {
  if (x < coin_gamma.size()) return coin_gamma[x];
  if (tail_gamma) return *tail_gamma;
  throw ValidationError("walk: site " + std::to_string(x) +
                        " beyond the coin list and no constant tail given");
}

Complex CoinedWalkSpec::verblunsky_at(std::size_t k) const {
  return (k % 2 == 0) ? gamma_at_site(k / 2) : Complex{0.0};
}

void CoinedWalkSpec::validate() const {
  for (std::size_t x = 0; x < coin_gamma.size(); ++x)
    if (std::abs(coin_gamma[x]) >= 1.0)
      throw ValidationError("walk: |gamma| >= 1 at site " + std::to_string(x) +
                            " decouples the lattice");
  if (tail_gamma && std::abs(*tail_gamma) >= 1.0)
    throw ValidationError("walk: |gamma| >= 1 in the constant tail");
}

CMVMatrix walk_to_cmv(const CoinedWalkSpec& walk, std::size_t dim) {
  walk.validate();
  if (walk.domain == CoinedWalkSpec::Domain::line)
    throw ValidationError(
        "walk_to_cmv: unsupported domain: the line walk is served by closed forms only");
  std::vector<Complex> g(dim + 1);
  for (std::size_t k = 0; k <= dim; ++k) g[k] = walk.verblunsky_at(k);
  return cmv_from_verblunsky(g, dim);
}

Eigen::SparseMatrix<Complex> coined_walk_unitary(const CoinedWalkSpec& walk, std::size_t sites) {
  walk.validate();
  if (walk.domain == CoinedWalkSpec::Domain::line)
    throw ValidationError("coined_walk_unitary: use coined_walk_unitary_line for the line domain");
  const Eigen::Index d = 2 * static_cast<Eigen::Index>(sites);
  const auto up = [](std::size_t x) { return 2 * static_cast<Eigen::Index>(x); };
  const auto down = [](std::size_t x) { return 2 * static_cast<Eigen::Index>(x) + 1; };
  // shift permutation: up-chain ascends, reflects 0-down to 0-up; the window
  // is closed by sending the top up-state into the top down-state
  const auto shift = [&](Eigen::Index i) -> Eigen::Index {
    const std::size_t x = static_cast<std::size_t>(i / 2);
    if (i % 2 == 0) return (x + 1 < sites) ? up(x + 1) : down(sites - 1);
    return (x > 0) ? down(x - 1) : up(0);
  };
  std::vector<Eigen::Triplet<Complex>> trip;
  for (std::size_t x = 0; x < sites; ++x) {
    const Complex g = walk.gamma_at_site(x);
    const double rho = rho_of(g);
    // coin columns: C|x,up> = rho|x,up> + conj(g)|x,down>,
    //               C|x,down> = -g|x,up> + rho|x,down>, then shift
    trip.emplace_back(shift(up(x)), up(x), Complex{rho});
    trip.emplace_back(shift(down(x)), up(x), std::conj(g));
    trip.emplace_back(shift(up(x)), down(x), -g);
    trip.emplace_back(shift(down(x)), down(x), Complex{rho});
  }
  Eigen::SparseMatrix<Complex> u(d, d);
  u.setFromTriplets(trip.begin(), trip.end());
  return u;
}

Eigen::SparseMatrix<Complex> coined_walk_unitary_line(Complex gamma, std::size_t half_width) {
  if (std::abs(gamma) >= 1.0) throw ValidationError("line walk: |gamma| must be < 1");
  const std::size_t sites = 2 * half_width + 1;
  const Eigen::Index d = 2 * static_cast<Eigen::Index>(sites);
  const auto up = [](std::size_t x) { return 2 * static_cast<Eigen::Index>(x); };
  const auto down = [](std::size_t x) { return 2 * static_cast<Eigen::Index>(x) + 1; };
  const auto shift = [&](Eigen::Index i) -> Eigen::Index {
    const std::size_t x = static_cast<std::size_t>(i / 2);
    if (i % 2 == 0) return up((x + 1) % sites);
    return down((x + sites - 1) % sites);
  };
  const double rho = rho_of(gamma);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (std::size_t x = 0; x < sites; ++x) {
    trip.emplace_back(shift(up(x)), up(x), Complex{rho});
    trip.emplace_back(shift(down(x)), up(x), std::conj(gamma));
    trip.emplace_back(shift(up(x)), down(x), -gamma);
    trip.emplace_back(shift(down(x)), down(x), Complex{rho});
  }
  Eigen::SparseMatrix<Complex> u(d, d);
  u.setFromTriplets(trip.begin(), trip.end());
  return u;
}

std::vector<Complex> cmv_moments(const CMVMatrix& cmv, std::size_t k, std::size_t n_max) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cmv.dim));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  Eigen::VectorXcd psi = v;
  std::vector<Complex> mu(n_max + 1);
  mu[0] = 1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    psi = (cmv.C * psi).eval();
    mu[n] = v.dot(psi);
  }
  return mu;
}

UnitarySystem walk_monitored_system(const CoinedWalkSpec& walk, std::size_t n_steps,
                                    std::size_t k) {
  const std::size_t dim = std::max<std::size_t>(2 * (n_steps + 2), k + 8);
  auto cmv = walk_to_cmv(walk, dim);
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  phi(static_cast<Eigen::Index>(k)) = 1.0;
  return make_system(std::move(cmv.C), std::move(phi));
}

Complex constant_coin_schur(Complex gamma, Complex z) {
  const double g = std::abs(gamma);
  if (g == 0.0 || g >= 1.0)
    throw ValidationError("constant_coin_schur: need 0 < |gamma| < 1");
  return 2.0 * gamma / (1.0 - z * z + period_disc_sqrt(z * z, g));
}

VerblunskySchur walk_schur_iterate(const CoinedWalkSpec& walk, std::size_t k) {
  walk.validate();
  VerblunskySchur rep;
  const std::size_t explicit_len = 2 * walk.coin_gamma.size();
  if (walk.tail_gamma && *walk.tail_gamma != Complex{0.0}) {
    if (k < explicit_len) {
      for (std::size_t j = k; j < explicit_len; ++j) rep.gamma.push_back(walk.verblunsky_at(j));
      rep.gamma.push_back(*walk.tail_gamma);
      rep.gamma.push_back(Complex{0.0});
    } else if ((k - explicit_len) % 2 == 0) {
      rep.gamma = {*walk.tail_gamma, Complex{0.0}};
    } else {
      rep.gamma = {Complex{0.0}, *walk.tail_gamma};
    }
    rep.period = 2;
  } else {
    for (std::size_t j = k; j < explicit_len; ++j) rep.gamma.push_back(walk.verblunsky_at(j));
  }
  return rep;
}

double circle_mean_abs_power(const std::function<Complex(Complex)>& f, int power,
                             std::span<const double> breakpoints, double tol) {
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  cuts.push_back(0.0);
  cuts.push_back(kTwoPi);
  std::sort(cuts.begin(), cuts.end());
  const auto integrand = [&](double t) {
    return std::pow(std::abs(f(unit(t))), double(power));
  };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i] + 1e-15)
      acc += quad::tanh_sinh(integrand, cuts[i], cuts[i + 1], tol);
  return acc / kTwoPi;
}

std::vector<double> constant_coin_breakpoints(Complex gamma) {
  const double eta = std::asin(std::clamp(std::abs(gamma), 0.0, 1.0));
  return {eta, kPi - eta, kPi + eta, kTwoPi - eta};
}

double constant_coin_return(Complex gamma, CoinedWalkSpec::Domain domain) {
  const double g = std::abs(gamma);
  if (g == 0.0 || g >= 1.0)
    throw ValidationError("constant_coin_return: need 0 < |gamma| < 1");
  const double rho = std::sqrt(1.0 - g * g);
  const double eta = std::asin(g);
  if (domain == CoinedWalkSpec::Domain::half_line)
    return 2.0 / (kPi * g * g) * (rho * g + (1.0 - 2.0 * rho * rho) * eta);
  return 2.0 / (kPi * g * g * g * g) *
         ((1.0 + 2.0 * rho * rho) * rho * g + (1.0 - 4.0 * rho * rho) * eta);
}

std::vector<Complex> constant_coin_amplitudes(Complex gamma, std::size_t n_max) {
  const double g = std::abs(gamma);
  if (g == 0.0 || g >= 1.0)
    throw ValidationError("constant_coin_amplitudes: need 0 < |gamma| < 1");
  std::vector<Complex> a(n_max + 1, Complex{0.0});
  if (n_max >= 1) a[1] = std::conj(gamma);
  const double x = 1.0 - 2.0 * g * g;
  // upward Legendre recurrence, stable on [-1, 1]
  double p_prev = 1.0;  // P_0
  double p_cur = x;     // P_1
  for (std::size_t n = 1; 2 * n + 1 <= n_max; ++n) {
    a[2 * n + 1] = (p_prev - x * p_cur) / (2.0 * gamma * double(n + 1));
    const double p_next = ((2.0 * double(n) + 1.0) * x * p_cur - double(n) * p_prev) /
                          (double(n) + 1.0);
    p_prev = p_cur;
    p_cur = p_next;
  }
  return a;
}

double khrushchev_return(const CoinedWalkSpec& walk, std::size_t k, double tol) {
  const VerblunskySchur rep = walk_schur_iterate(walk, k);
  const SchurRepresentation f{rep};
  std::vector<double> cuts;
  if (walk.tail_gamma && *walk.tail_gamma != Complex{0.0})
    cuts = constant_coin_breakpoints(*walk.tail_gamma);
  return circle_mean_abs_power([&](Complex z) { return schur_eval(f, z); }, 2, cuts, tol);
}

}  // namespace urec
