#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace urec {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline Complex unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Central tolerance record. Operations take it as an optional trailing
// argument; error messages quote the threshold that was violated.
struct Tolerances {
  double algebraic = 1e-10;  // exact identities: conservation, unitarity, mass
  double radial = 1e-6;      // radial-limit extrapolations toward |z| = 1
  double atom_gap = 1e-9;    // minimum angular separation between atoms
  double inner = 1e-8;       // ||f| - 1| on the unit circle
  double series = 1e-8;      // Taylor/Verblunsky round trips
  double psd = 1e-10;        // eigenvalue floor for Toeplitz positivity
};

inline const Tolerances& default_tol() {
  static const Tolerances t{};
  return t;
}

// Invalid input: violated invariant, out-of-domain argument, malformed file.
// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to converge (quadrature refinement,
// radial extrapolation, phase-unwrapping resolution). CLI exit code 2.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace urec
