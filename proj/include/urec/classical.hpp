#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "urec/types.hpp"

namespace urec {

// Row-stochastic transition matrix with a designated origin state, stored
// sparse so long windowed truncations of infinite chains stay cheap. The
// boundary flag relaxes the row-sum check to <= 1 (mass may leak through the
// truncation boundary; return_sequence reports the leakage).
struct MarkovChain {
  Eigen::SparseMatrix<double> P;
  int origin = 0;
  bool boundary_truncated = false;

  static MarkovChain validated(Eigen::SparseMatrix<double> P, int origin = 0,
                               bool boundary_truncated = false,
                               const Tolerances& tol = default_tol());
  static MarkovChain validated(const Eigen::MatrixXd& P, int origin = 0,
                               bool boundary_truncated = false,
                               const Tolerances& tol = default_tol());
};

// Classical renewal pair: p_n = return in n steps (p_0 = 1), q_n = first
// return in n steps (q_0 = 0), linked by p_n = sum_k p_k q_{n-k}.
struct RenewalSequences {
  std::vector<double> p;
  std::vector<double> q;

  double p_hat(double z) const;  // partial generating functions
  double q_hat(double z) const;
};

struct ReturnSequenceResult {
  std::vector<double> p;  // p[0..n_max]
  double leakage;         // mass lost through the truncation boundary
  bool leakage_warning;
};

ReturnSequenceResult return_sequence(const MarkovChain& chain, std::size_t n_max,
                                     const Tolerances& tol = default_tol());

// Renewal inversion q_n = p_n - sum_{k=1}^{n-1} q_k p_{n-k}; values may be
// negative when p does not come from a Markov chain and are returned as-is.
std::vector<double> first_return_from_return(std::span<const double> p);
std::vector<double> return_from_first_return(std::span<const double> q);

enum class PolyaClass { recurrent, transient, inconclusive };

struct PolyaOptions {
  double convergence_tol = 1e-9;  // second-half increment below this: convergent
  double growth_min = 0.5;        // second-half increment above this: divergent
};

struct PolyaReport {
  PolyaClass verdict;
  double partial_sum;               // sum p_n over the full window
  double increment;                 // sum over the second half
  std::optional<double> r_classical;  // 1 - 1/sum when convergent
};

PolyaReport polya_classify(std::span<const double> p, const PolyaOptions& opt = {});

struct SpectralAtoms {
  std::vector<double> lambda;       // eigenvalues in [-1, 1]
  std::vector<double> weight;       // spectral weights for the origin state
  double mass_at_one;               // m({1})
  std::optional<double> tau_classical;  // 1/m({1}) when positive
};

// Spectral measure of a reversible chain at the origin: detailed balance
// pi_x P_xy = P_yx pi_y is verified, the symmetrized matrix diagonalized.
SpectralAtoms reversible_spectral(const MarkovChain& chain, const Eigen::VectorXd& pi,
                                  const Tolerances& tol = default_tol());

struct SjkOptionsClassical {
  double product_floor = 1e-14;  // stop once the survival product drops below
  std::size_t n_cap = 1000000;
};

struct SjkQuantities {
  double r_sjk;                  // 1 - prod(1 - p_n) over the window
  double r_sjk_tail;             // remaining product (upper-bound slack)
  std::vector<double> q_sjk;     // q^SJK_n = p_n prod_{k<n}(1-p_k)
  double tau_sjk;                // sum n q^SJK_n
  bool tau_lower_bound_only;     // cap hit before the product floor
  std::optional<double> tau_tilde;  // 1/sum m_k^2 when atom weights supplied
};

// p is indexed from n = 1 (p[0] is p_1). Atom weights, when given, feed the
// closed form tau_tilde = 1/sum m_k^2.
SjkQuantities sjk_quantities(std::span<const double> p,
                             std::span<const double> atom_weights = {},
                             const SjkOptionsClassical& opt = {});

}  // namespace urec
