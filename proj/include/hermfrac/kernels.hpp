#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "hermfrac/errors.hpp"
#include "hermfrac/quadrature.hpp"
#include "hermfrac/stable_math.hpp"
#include "hermfrac/spacetime.hpp"
#include "hermfrac/test_functions.hpp"

namespace hermfrac {

/// log of the Mehler heat kernel for H = -Delta + |x|^2 in n dimensions:
///
///   G_tau(x, z) = (2 pi sinh 2 tau)^{-n/2}
///                 exp( -|x-z|^2/4 * coth tau - |x+z|^2/4 * tanh tau ).
///
/// Computed in log form so large tau (sinh overflow) and small tau
/// (Gaussian concentration) are both safe.
inline double mehler_log_kernel(double tau, const std::vector<double>& x,
                                const std::vector<double>& z) {
  if (tau <= 0.0) throw DomainError("mehler_log_kernel: tau must be positive");
  if (x.size() != z.size()) throw DimensionError("mehler_log_kernel: dim mismatch");
  const int n = static_cast<int>(x.size());
  const double c = coth(tau);
  const double tnh = std::tanh(tau);
  double q = 0.0;
  for (int a = 0; a < n; ++a) {
    const double dm = x[a] - z[a];
    const double dp = x[a] + z[a];
    q += dm * dm * c + dp * dp * tnh;
  }
  return -0.25 * q - 0.5 * n * (std::log(2.0 * kPi) + log_sinh(2.0 * tau));
}

struct HeatOptions {
  int nodes = 48;           // Gauss-Hermite nodes per axis
  bool check = false;       // compare against 2x nodes, throw on disagreement
  double check_tol = 1e-6;
};

/// e^{-tau H} applied to a spatial function g at a single point x.
///
/// The z-integral against the Mehler kernel is Gaussian in each axis:
/// with c = coth tau, t = tanh tau the exponent per axis is
///   -A (z - m)^2 + A m^2 - A x^2,   A = (c + t)/4,   m = (c - t) x / (c + t),
/// so a Gauss-Hermite rule scaled to that Gaussian integrates it with a
/// single exp per (tau, x) and none in the inner loop.
inline cplx apply_heat_H_point(double tau, const std::function<cplx(const std::vector<double>&)>& g,
                               const std::vector<double>& x, const HeatOptions& opt = {}) {
  if (tau <= 0.0) throw DomainError("apply_heat_H: tau must be positive");
  const int n = static_cast<int>(x.size());
  if (n < 1 || n > 2) throw CapacityError("apply_heat_H: dimension must be 1 or 2");
  // e^{-tau n} underflows past this point; the semigroup is exactly 0 in doubles.
  if (tau > 700.0) return cplx{0.0, 0.0};

  // With c = coth tau, t = tanh tau everything collapses to double-angle
  // quantities: A = (c+t)/4 = coth(2 tau)/2, m = x (c-t)/(c+t) = x / cosh(2 tau),
  // A (m^2 - x^2) = -(tanh(2 tau)/2) x^2, and sinh(2 tau) A = cosh(2 tau)/2.
  // These forms avoid the cancellation the naive c, t expressions suffer at
  // small tau.
  const double th2 = std::tanh(2.0 * tau);
  const double A = 0.5 / th2;
  const double sA = std::sqrt(A);
  const double lc2 = log_cosh(2.0 * tau);

  // Substituting z = m + u/sqrt(A) turns the kernel Gaussian into e^{-u^2},
  // which the Gauss-Hermite weights carry; each axis contributes 1/sqrt(A).
  double logpref = -0.5 * n * (std::log(kPi) + lc2);
  std::vector<double> m(n);
  for (int a = 0; a < n; ++a) {
    m[a] = x[a] * std::exp(-lc2);
    logpref -= 0.5 * th2 * x[a] * x[a];
  }

  const Rule1D& rule = gauss_hermite_rule(opt.nodes);
  const double pref = std::exp(logpref);

  cplx acc{0.0, 0.0};
  std::vector<double> z(n);
  if (n == 1) {
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      z[0] = m[0] + rule.nodes[j] / sA;
      acc += rule.weights[j] * g(z);
    }
  } else {
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      z[0] = m[0] + rule.nodes[j] / sA;
      cplx inner{0.0, 0.0};
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        z[1] = m[1] + rule.nodes[k] / sA;
        inner += rule.weights[k] * g(z);
      }
      acc += rule.weights[j] * inner;
    }
  }
  cplx result = pref * acc;

  if (opt.check) {
    HeatOptions fine = opt;
    fine.check = false;
    fine.nodes = 2 * opt.nodes;
    const cplx ref = apply_heat_H_point(tau, g, x, fine);
    const double scale = std::max(1.0, std::abs(ref));
    if (std::abs(result - ref) / scale > opt.check_tol)
      throw NumericsError("apply_heat_H: quadrature did not converge");
    result = ref;
  }
  if (!std::isfinite(result.real()) || !std::isfinite(result.imag()))
    throw NumericsError("apply_heat_H: non-finite result");
  return result;
}

/// Heat semigroup for the parabolic operator L = d_t - Delta + |x|^2:
///   e^{-tau L} f(t, x) = e^{-tau H} ( f(t - tau, .) )(x).
inline cplx apply_heat_L_point(double tau, const TestFunction& f, double t,
                               const std::vector<double>& x, const HeatOptions& opt = {}) {
  const double ts = t - tau;
  return apply_heat_H_point(
      tau, [&](const std::vector<double>& z) { return f(ts, z); }, x, opt);
}

/// Same, for a generic spacetime sampler f(t, x).
inline cplx apply_heat_L_point(double tau,
                               const std::function<cplx(double, const std::vector<double>&)>& f,
                               double t, const std::vector<double>& x,
                               const HeatOptions& opt = {}) {
  const double ts = t - tau;
  return apply_heat_H_point(
      tau, [&](const std::vector<double>& z) { return f(ts, z); }, x, opt);
}

inline cplx apply_heat_L_point(double tau, const SpacetimeFunction& f, double t,
                               const std::vector<double>& x, const HeatOptions& opt = {}) {
  const double ts = t - tau;
  return apply_heat_H_point(
      tau, [&](const std::vector<double>& z) { return f(ts, z); }, x, opt);
}

/// Grid-level wrappers over the point evaluators.
inline GridFunction apply_heat_H(double tau,
                                 const std::function<cplx(const std::vector<double>&)>& g,
                                 const QuadratureGrid& eval_grid, const HeatOptions& opt = {}) {
  GridFunction out(eval_grid);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = apply_heat_H_point(tau, g, eval_grid.point(i), opt);
  return out;
}

inline GridFunction apply_heat_H(double tau, const TestFunction& g, const QuadratureGrid& eval_grid,
                                 const HeatOptions& opt = {}) {
  return apply_heat_H(
      tau, [&](const std::vector<double>& z) { return g(0.0, z); }, eval_grid, opt);
}

/// GridFunction input is lifted off its sample grid by spectral synthesis,
/// since the kernel quadrature needs values at arbitrary z.
inline GridFunction apply_heat_H(double tau, const GridFunction& g, const QuadratureGrid& eval_grid,
                                 int N = 32, const HeatOptions& opt = {}) {
  const SpectralCoeffs c = analyze(g, N);
  return apply_heat_H(
      tau, [&](const std::vector<double>& z) { return synthesize_at(c, z); }, eval_grid, opt);
}

inline GridFunction apply_heat_L(double tau, const SpacetimeFunction& f, double t,
                                 const QuadratureGrid& eval_grid, const HeatOptions& opt = {}) {
  const double ts = t - tau;
  return apply_heat_H(
      tau, [&](const std::vector<double>& z) { return f(ts, z); }, eval_grid, opt);
}

/// Closed form of the heat semigroup acting on the constant function 1:
///   e^{-tau L} 1 (x) = (cosh 2 tau)^{-n/2} exp( -(tanh 2 tau / 2) |x|^2 ).
inline double heat_on_one(double tau, const std::vector<double>& x) {
  if (tau <= 0.0) throw DomainError("heat_on_one: tau must be positive");
  const int n = static_cast<int>(x.size());
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::exp(-0.5 * std::tanh(2.0 * tau) * r2 - 0.5 * n * log_cosh(2.0 * tau));
}

}  // namespace hermfrac
