#include "urec/poly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace urec::poly {

Complex eval(std::span<const Complex> p, Complex z) {
  Complex acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
  return acc;
}

CVec multiply(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() || b.empty()) return {};
  CVec out(a.size() + b.size() - 1, Complex{0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

CVec derivative(std::span<const Complex> p) {
  if (p.size() <= 1) return {Complex{0.0}};
  CVec out(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) out[k - 1] = double(k) * p[k];
  return out;
}

CVec conjugate_coeffs(std::span<const Complex> p) {
  CVec out(p.begin(), p.end());
  for (auto& c : out) c = std::conj(c);
  return out;
}

static double max_abs(std::span<const Complex> p) {
  double m = 0.0;
  for (const auto& c : p) m = std::max(m, std::abs(c));
  return m;
}

void trim(CVec& p, double tol_rel) {
  const double cut = tol_rel * max_abs(p);
  while (p.size() > 1 && std::abs(p.back()) <= cut) p.pop_back();
}

int degree(std::span<const Complex> p, double tol_rel) {
  CVec q(p.begin(), p.end());
  trim(q, tol_rel);
  return static_cast<int>(q.size()) - 1;
}

CVec series_multiply(std::span<const Complex> a, std::span<const Complex> b, std::size_t n) {
  CVec out(n, Complex{0.0});
  for (std::size_t i = 0; i < std::min(a.size(), n); ++i)
    for (std::size_t j = 0; i + j < n && j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

CVec series_inverse(std::span<const Complex> a, std::size_t n) {
  if (a.empty() || a[0] == Complex{0.0})
    throw ValidationError("series_inverse: constant term vanishes");
  CVec out(n, Complex{0.0});
  out[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < n; ++k) {
    Complex s = 0.0;
    for (std::size_t j = 1; j <= k && j < a.size(); ++j) s += a[j] * out[k - j];
    out[k] = -s / a[0];
  }
  return out;
}

CVec series_divide(std::span<const Complex> num, std::span<const Complex> den, std::size_t n) {
  return series_multiply(num, series_inverse(den, n), n);
}

std::vector<Complex> roots(std::span<const Complex> p, double tol_rel) {
  CVec q(p.begin(), p.end());
  trim(q, tol_rel);
  if (q.size() == 1) {
    if (std::abs(q[0]) == 0.0) throw ValidationError("roots: zero polynomial");
    return {};
  }
  const std::size_t n = q.size() - 1;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < n; ++i) comp(i, n - 1) = -q[i] / q[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
  std::vector<Complex> out(n);
  const CVec dq = derivative(q);
  for (std::size_t i = 0; i < n; ++i) {
    Complex r = es.eigenvalues()(static_cast<Eigen::Index>(i));
    const Complex dp = eval(dq, r);
    if (std::abs(dp) > 1e-300) {
      const Complex step = eval(q, r) / dp;
      if (std::abs(step) < 0.1) r -= step;  // polish only when contraction is plausible
    }
    out[i] = r;
  }
  std::sort(out.begin(), out.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

namespace {

Eigen::MatrixXcd sylvester_matrix(std::span<const Complex> a, std::span<const Complex> b) {
  CVec pa(a.begin(), a.end()), pb(b.begin(), b.end());
  trim(pa);
  trim(pb);
  const std::size_t m = pa.size() - 1, n = pb.size() - 1;
  Eigen::MatrixXcd syl = Eigen::MatrixXcd::Zero(m + n, m + n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k <= m; ++k) syl(r, r + k) = pa[m - k];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k <= n; ++k) syl(n + r, r + k) = pb[n - k];
  return syl;
}

}  // namespace

Complex resultant_normalized(std::span<const Complex> a, std::span<const Complex> b) {
  CVec pa(a.begin(), a.end()), pb(b.begin(), b.end());
  trim(pa);
  trim(pb);
  const std::size_t m = pa.size() - 1, n = pb.size() - 1;
  if (m == 0 || n == 0) return Complex{1.0};  // constants share no roots
  const Complex det = sylvester_matrix(pa, pb).fullPivLu().determinant();
  const double scale = std::pow(max_abs(pa), double(n)) * std::pow(max_abs(pb), double(m));
  return scale > 0.0 ? det / scale : det;
}

double sylvester_coprimality(std::span<const Complex> a, std::span<const Complex> b) {
  CVec pa(a.begin(), a.end()), pb(b.begin(), b.end());
  trim(pa);
  trim(pb);
  if (pa.size() <= 1 || pb.size() <= 1) return 1.0;
  const Eigen::MatrixXcd syl = sylvester_matrix(pa, pb);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(syl);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) / sv(0);
}

}  // namespace urec::poly
