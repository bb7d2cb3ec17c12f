#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

namespace hermfrac {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// log(sinh x) for x > 0 without overflow: x - log 2 + log1p(-e^{-2x}).
inline double log_sinh(double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  if (x < 1.0) return std::log(std::sinh(x));
  return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
}

/// log(cosh x), overflow-safe.
inline double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

/// coth x for x > 0. std::tanh is accurate down to denormals, so the
/// reciprocal form is stable for the whole range used here.
inline double coth(double x) { return 1.0 / std::tanh(x); }

/// Relative deviation of coth(tau)*tau from 1; small-tau asymptotics helper.
inline double coth_times_tau_minus_one(double tau) { return coth(tau) * tau - 1.0; }

/// n-choose-k as a double, exact for the small orders used here.
inline double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r *= static_cast<double>(n - k + j) / j;
  return r;
}

/// Principal branch of z^p for Re(z) > 0.
inline cplx cpow_principal(cplx z, double p) {
  return std::exp(p * std::log(z));
}

/// FNV-1a hash of a string; used to stamp output files with a config hash.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace hermfrac
