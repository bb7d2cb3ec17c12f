#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "hermfrac/errors.hpp"
#include "hermfrac/kernels.hpp"
#include "hermfrac/spacetime.hpp"
#include "hermfrac/stable_math.hpp"

namespace hermfrac {

inline constexpr int kMaxPoissonDeriv = 8;

namespace detail {

/// Coefficient table of the polynomial p_k in
///   d^k/dy^k [ y e^{-y^2/4 tau} ] = p_k(y, s) e^{-y^2/4 tau},  s = 1/(2 tau).
/// coeff[j][l] multiplies y^j s^l. The recursion is
///   p_{k+1} = dp_k/dy - y s p_k,  p_0 = y.
inline std::vector<std::vector<double>> subordination_poly(int k) {
  std::vector<std::vector<double>> p(k + 2, std::vector<double>(k + 1, 0.0));
  p[1][0] = 1.0;
  for (int step = 0; step < k; ++step) {
    std::vector<std::vector<double>> q(k + 2, std::vector<double>(k + 1, 0.0));
    for (int j = 0; j <= k + 1; ++j)
      for (int l = 0; l <= k; ++l) {
        if (p[j][l] == 0.0) continue;
        if (j >= 1) q[j - 1][l] += j * p[j][l];
        if (j + 1 <= k + 1 && l + 1 <= k) q[j + 1][l + 1] -= p[j][l];
      }
    p.swap(q);
  }
  return p;
}

}  // namespace detail

/// k-th y-derivative of the subordination weight
///   w(y, tau) = y e^{-y^2/4 tau} / (2 sqrt(pi) tau^{3/2}),
/// computed from the exact polynomial recursion (no numerical
/// differentiation). P_y = e^{-y sqrt(L)} = int w(y, tau) e^{-tau L} dtau.
inline double subordination_weight(double y, double tau, int k = 0) {
  if (y <= 0.0 || tau <= 0.0) throw DomainError("subordination_weight: y, tau must be positive");
  if (k < 0 || k > kMaxPoissonDeriv) throw CapacityError("subordination_weight: k must be in [0, 8]");
  const auto p = detail::subordination_poly(k);
  const double s = 0.5 / tau;
  double poly = 0.0;
  for (int j = static_cast<int>(p.size()) - 1; j >= 0; --j) {
    double cl = 0.0;
    for (int l = static_cast<int>(p[j].size()) - 1; l >= 0; --l) cl = cl * s + p[j][l];
    poly = poly * y + cl;
  }
  // poly accumulated highest-degree-first in y via Horner.
  return poly * std::exp(-0.25 * y * y / tau) / (2.0 * std::sqrt(kPi) * tau * std::sqrt(tau));
}

/// tau-quadrature for the subordination integral. Built from the
/// substitution v = y^2 / (4 tau) followed by u = log v with a uniform
/// trapezoid in u. The integrand envelope is e^{-v - c/v} with
/// c = decay * y^2 / 4 (the semigroup supplies e^{-decay*tau} decay, and
/// decay >= n always holds for bounded inputs), which fixes both cutoffs.
///
/// sum_j subordination_weight(y, tau[j], k) * F(tau[j]) * dtau[j]
/// approximates int_0^inf w_k(y, tau) F(tau) dtau; the trapezoid in log v
/// converges spectrally for these analytic integrands.
struct SubordinationRule {
  std::vector<double> tau;   // decreasing (v increasing)
  std::vector<double> dtau;  // positive measure weights, tau[j] * du
  double y = 0.0;
  // Lower cutoff in v = y^2/4tau. The k = 0 weight mass left beyond the
  // largest tau is erf(sqrt(v_min)); consumers integrating curves that do
  // not decay at large tau must add it back.
  double v_min = 0.0;
};

inline SubordinationRule make_subordination_rule(double y, int k = 0, double decay = 1.0,
                                                 double du = 0.05) {
  if (y <= 0.0) throw DomainError("make_subordination_rule: y must be positive");
  if (k < 0 || k > kMaxPoissonDeriv) throw CapacityError("make_subordination_rule: k > 8");
  if (decay < 0.0) throw DomainError("make_subordination_rule: decay must be >= 0");

  // Threshold grows with k: the weight derivative carries polynomial factors
  // v^l, l <= k, so v^k e^{-v} must be negligible at the upper cutoff.
  const double T = 55.0 + 6.0 * k;
  const double c = 0.25 * decay * y * y;
  // Lower cutoff: either the e^{-c/v} factor is dead, or (decay = 0) the
  // v^{1/2} measure factor is; the latter needs v ~ e^{-2T}.
  const double v_min = decay > 0.0 ? std::min(c / T, 1.0) : std::exp(-2.0 * T);
  const double u_lo = std::log(v_min);
  const double u_hi = std::log(T);

  SubordinationRule r;
  r.y = y;
  // Fixed lattice anchored at u_hi (which does not depend on y): rules for
  // nearby y share their nodes exactly, so the quadrature error is the same
  // smooth multiple of the value across a binomial-difference family and
  // cancels with it. Rescaling the step per call breaks that cancellation.
  const int M = static_cast<int>(std::ceil((u_hi - u_lo) / du)) + 1;
  r.v_min = std::exp(u_hi - (M - 1) * du);
  r.tau.resize(M);
  r.dtau.resize(M);
  for (int j = 0; j < M; ++j) {
    const double v = std::exp(u_hi - (M - 1 - j) * du);
    r.tau[j] = 0.25 * y * y / v;
    double w = du;
    if (j == 0 || j == M - 1) w *= 0.5;
    r.dtau[j] = r.tau[j] * w;
  }
  return r;
}

/// d^k/dy^k P_y applied to a heat curve F(tau) = e^{-tau L} f(t, x).
inline cplx poisson_deriv_from_curve(double y, int k, const std::function<cplx(double)>& F,
                                     const SubordinationRule& rule) {
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < rule.tau.size(); ++j)
    acc += subordination_weight(y, rule.tau[j], k) * rule.dtau[j] * F(rule.tau[j]);
  return acc;
}

/// P_y f - f computed in difference form: since the discrete rule carries
/// the weight's unit mass, sum_j w_j dtau_j (F_j - f0) avoids losing the
/// small difference to the rule's own normalization error.
inline cplx poisson_minus_value_from_curve(double y, const std::function<cplx(double)>& F,
                                           cplx f0, const SubordinationRule& rule) {
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < rule.tau.size(); ++j)
    acc += subordination_weight(y, rule.tau[j], 0) * rule.dtau[j] * (F(rule.tau[j]) - f0);
  return acc;
}

struct PoissonOptions {
  double du = 0.05;       // subordination step in log v
  int heat_nodes = 48;    // Gauss-Hermite nodes per axis for each heat solve
  bool check = false;     // recompute at du/2 and compare
  double check_tol = 1e-6;
};

/// d^k/dy^k P_y f(t, x) by direct quadrature: subordination over the heat
/// semigroup, each heat value by the scaled Gauss-Hermite kernel quadrature.
inline cplx apply_poisson_point(double y, const SpacetimeFunction& f, int k, double t,
                                const std::vector<double>& x, const PoissonOptions& opt = {}) {
  if (y <= 0.0) throw DomainError("apply_poisson: y must be positive");
  HeatOptions hopt;
  hopt.nodes = opt.heat_nodes;
  auto F = [&](double tau) { return apply_heat_L_point(tau, f, t, x, hopt); };
  const auto rule = make_subordination_rule(y, k, static_cast<double>(f.n), opt.du);
  cplx result = poisson_deriv_from_curve(y, k, F, rule);
  if (opt.check) {
    const auto fine = make_subordination_rule(y, k, static_cast<double>(f.n), 0.5 * opt.du);
    const cplx ref = poisson_deriv_from_curve(y, k, F, fine);
    if (std::abs(result - ref) > opt.check_tol * std::max(1.0, std::abs(ref)))
      throw NumericsError("apply_poisson: subordination quadrature did not converge");
    result = ref;
  }
  return result;
}

inline GridFunction apply_poisson(double y, const SpacetimeFunction& f, int k, double t,
                                  const QuadratureGrid& eval_grid, const PoissonOptions& opt = {}) {
  GridFunction out(eval_grid);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = apply_poisson_point(y, f, k, t, eval_grid.point(i), opt);
  return out;
}

/// Spacetime Poisson kernel: P_y f(t, x) = int K(y, tau, x, z) f(t - tau, x - z) dz dtau,
///   K = y/(2 sqrt(pi)) e^{-|z|^2 coth(tau)/4} e^{-|2x-z|^2 tanh(tau)/4} e^{-y^2/4tau}
///       / ((2 pi sinh 2tau)^{n/2} tau^{3/2}),
/// i.e. the subordination weight times the heat kernel in convolution
/// coordinates. Zero for tau <= 0 (the semigroup only looks into the past).
inline double poisson_kernel(double y, double tau, const std::vector<double>& x,
                             const std::vector<double>& z) {
  if (y <= 0.0) throw DomainError("poisson_kernel: y must be positive");
  if (x.size() != z.size()) throw DimensionError("poisson_kernel: dim mismatch");
  if (tau <= 0.0) return 0.0;
  const int n = static_cast<int>(x.size());
  const double c = coth(tau);
  const double th = std::tanh(tau);
  double q = 0.0;
  for (int a = 0; a < n; ++a) {
    const double d2 = 2.0 * x[a] - z[a];
    q += z[a] * z[a] * c + d2 * d2 * th;
  }
  const double logv = std::log(y) - std::log(2.0 * std::sqrt(kPi)) - 0.25 * q -
                      0.25 * y * y / tau - 1.5 * std::log(tau) -
                      0.5 * n * (std::log(2.0 * kPi) + log_sinh(2.0 * tau));
  return std::exp(logv);
}

/// Residual of the extension equation d_y^2 P_y f = (d_t - Delta + |x|^2) P_y f,
/// all derivatives by central differences at step h. A single tau-rule (built
/// at the center y) is shared across the whole stencil so the quadrature
/// error varies smoothly and the residual stays O(h^2).
inline double verify_pde(const SpacetimeFunction& f, double y, double t,
                         const std::vector<double>& x, double h,
                         const PoissonOptions& opt = {}) {
  if (!(y > 2.0 * h && h > 0.0)) throw DomainError("verify_pde: need y > 2h > 0");
  HeatOptions hopt;
  hopt.nodes = opt.heat_nodes;
  const auto rule = make_subordination_rule(y, 0, static_cast<double>(f.n), opt.du);
  auto P = [&](double yy, double tt, const std::vector<double>& xx) {
    auto F = [&](double tau) { return apply_heat_L_point(tau, f, tt, xx, hopt); };
    return poisson_deriv_from_curve(yy, 0, F, rule);
  };

  const cplx p0 = P(y, t, x);
  const cplx dyy = (P(y + h, t, x) - 2.0 * p0 + P(y - h, t, x)) / (h * h);
  const cplx dt = (P(y, t + h, x) - P(y, t - h, x)) / (2.0 * h);
  cplx lap{0.0, 0.0};
  double x2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    std::vector<double> xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    lap += (P(y, t, xp) - 2.0 * p0 + P(y, t, xm)) / (h * h);
    x2 += x[a] * x[a];
  }
  return std::abs(dyy - (dt - lap + x2 * p0));
}

}  // namespace hermfrac
