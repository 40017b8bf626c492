#include "urec/classical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

namespace urec {

MarkovChain MarkovChain::validated(Eigen::SparseMatrix<double> P, int origin,
                                   bool boundary_truncated, const Tolerances& tol) {
  if (P.rows() != P.cols()) throw ValidationError("markov: transition matrix must be square");
  if (origin < 0 || origin >= P.rows()) throw ValidationError("markov: origin out of range");
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(P.rows());
  for (int k = 0; k < P.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(P, k); it; ++it) {
      if (it.value() < -1e-15)
        throw ValidationError("markov: negative entry at (" + std::to_string(it.row()) + "," +
                              std::to_string(it.col()) + ")");
      row_sums(it.row()) += it.value();
    }
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    const double row = row_sums(i);
    const bool ok = boundary_truncated ? row <= 1.0 + 1e-12 : std::abs(row - 1.0) <= 1e-12;
    if (!ok)
      throw ValidationError("markov: row " + std::to_string(i) + " sums to " +
                            std::to_string(row) + " (must be 1 within 1e-12)");
  }
  (void)tol;
  return {std::move(P), origin, boundary_truncated};
}

MarkovChain MarkovChain::validated(const Eigen::MatrixXd& P, int origin, bool boundary_truncated,
                                   const Tolerances& tol) {
  return validated(Eigen::SparseMatrix<double>(P.sparseView(1.0, 1e-300)), origin,
                   boundary_truncated, tol);
}

double RenewalSequences::p_hat(double z) const {
  double acc = 0.0, zp = 1.0;
  for (const double v : p) {
    acc += v * zp;
    zp *= z;
  }
  return acc;
}

double RenewalSequences::q_hat(double z) const {
  double acc = 0.0, zp = 1.0;
  for (const double v : q) {
    acc += v * zp;
    zp *= z;
  }
  return acc;
}

ReturnSequenceResult return_sequence(const MarkovChain& chain, std::size_t n_max,
                                     const Tolerances& tol) {
  const Eigen::Index d = chain.P.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  v(chain.origin) = 1.0;
  const Eigen::SparseMatrix<double> pt = chain.P.transpose();
  ReturnSequenceResult out;
  out.p.assign(n_max + 1, 0.0);
  out.p[0] = 1.0;
  double min_mass = 1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    v = (pt * v).eval();  // row-vector iteration v <- v P
    out.p[n] = v(chain.origin);
    min_mass = std::min(min_mass, v.sum());
  }
  out.leakage = 1.0 - min_mass;
  out.leakage_warning = chain.boundary_truncated && out.leakage > tol.algebraic;
  return out;
}

std::vector<double> first_return_from_return(std::span<const double> p) {
  if (p.empty() || std::abs(p[0] - 1.0) > 1e-12)
    throw ValidationError("first_return_from_return: p_0 must be 1");
  std::vector<double> q(p.size(), 0.0);
  for (std::size_t n = 1; n < p.size(); ++n) {
    double acc = p[n];
    for (std::size_t k = 1; k < n; ++k) acc -= q[k] * p[n - k];
    q[n] = acc;
  }
  return q;
}

std::vector<double> return_from_first_return(std::span<const double> q) {
  std::vector<double> p(q.size(), 0.0);
  p[0] = 1.0;
  for (std::size_t n = 1; n < q.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) acc += q[k] * p[n - k];
    p[n] = acc;
  }
  return p;
}

PolyaReport polya_classify(std::span<const double> p, const PolyaOptions& opt) {
  if (p.size() < 4) throw ValidationError("polya_classify: sequence too short");
  const std::size_t half = p.size() / 2;
  double sum = 0.0, sum_half = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    sum += p[n];
    if (n + 1 == half) sum_half = sum;
  }
  const double inc = sum - sum_half;
  PolyaReport rep{PolyaClass::inconclusive, sum, inc, std::nullopt};
  if (inc < opt.convergence_tol * std::max(1.0, sum_half)) {
    rep.verdict = PolyaClass::transient;
    rep.r_classical = 1.0 - 1.0 / sum;
  } else if (inc >= opt.growth_min) {
    rep.verdict = PolyaClass::recurrent;
    rep.r_classical = 1.0;
  }
  return rep;
}

SpectralAtoms reversible_spectral(const MarkovChain& chain, const Eigen::VectorXd& pi,
                                  const Tolerances& tol) {
  const Eigen::Index d = chain.P.rows();
  if (pi.size() != d) throw ValidationError("reversible_spectral: pi dimension mismatch");
  for (Eigen::Index i = 0; i < d; ++i)
    if (!(pi(i) > 0.0))
      throw ValidationError("reversible_spectral: pi must have strictly positive components");
  const Eigen::MatrixXd p = Eigen::MatrixXd(chain.P);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y) {
      const double lhs = pi(x) * p(x, y), rhs = p(y, x) * pi(y);
      if (std::abs(lhs - rhs) > tol.algebraic * std::max(1.0, std::abs(lhs)))
        throw ValidationError("reversible_spectral: detailed balance fails at pair (" +
                              std::to_string(x) + "," + std::to_string(y) + "): " +
                              std::to_string(lhs) + " vs " + std::to_string(rhs));
    }
  Eigen::VectorXd sq = pi.array().sqrt();
  Eigen::MatrixXd sym(d, d);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y) sym(x, y) = sq(x) * p(x, y) / sq(y);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("reversible_spectral: eigendecomposition failed");
  SpectralAtoms out;
  out.mass_at_one = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    out.lambda.push_back(es.eigenvalues()(i));
    const double w = es.eigenvectors()(chain.origin, i) * es.eigenvectors()(chain.origin, i);
    out.weight.push_back(w);
    if (std::abs(es.eigenvalues()(i) - 1.0) < 1e-8) out.mass_at_one += w;
  }
  if (out.mass_at_one > tol.algebraic) out.tau_classical = 1.0 / out.mass_at_one;
  return out;
}

SjkQuantities sjk_quantities(std::span<const double> p, std::span<const double> atom_weights,
                             const SjkOptionsClassical& opt) {
  SjkQuantities out;
  out.q_sjk.assign(p.size() + 1, 0.0);
  double survival = 1.0;  // prod_{k<=n}(1 - p_k)
  double tau = 0.0;
  std::size_t n = 0;
  for (; n < p.size() && n < opt.n_cap; ++n) {
    const double pn = p[n];
    if (pn < -1e-15 || pn > 1.0 + 1e-15)
      throw ValidationError("sjk_quantities: p_n must lie in [0,1], got " + std::to_string(pn) +
                            " at n=" + std::to_string(n + 1));
    const double qn = pn * survival;
    out.q_sjk[n + 1] = qn;
    tau += double(n + 1) * qn;
    survival *= (1.0 - pn);
    if (survival < opt.product_floor) {
      ++n;
      break;
    }
  }
  out.q_sjk.resize(n + 1);
  out.r_sjk = 1.0 - survival;
  out.r_sjk_tail = survival;
  out.tau_sjk = tau;
  out.tau_lower_bound_only = survival >= opt.product_floor;
  if (!atom_weights.empty()) {
    double s2 = 0.0;
    for (const double m : atom_weights) s2 += m * m;
    if (s2 > 0.0) out.tau_tilde = 1.0 / s2;
  }
  return out;
}

}  // namespace urec
