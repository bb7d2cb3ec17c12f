#pragma once

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "hermfrac/errors.hpp"
#include "hermfrac/kernels.hpp"
#include "hermfrac/parallel.hpp"
#include "hermfrac/poisson.hpp"
#include "hermfrac/spacetime.hpp"
#include "hermfrac/stable_math.hpp"

namespace hermfrac {

namespace detail {

/// Curves sampled on a uniform log grid, one per evaluation point.
/// Values between nodes come from 4-point Lagrange interpolation; the
/// stencil clamps at the ends.
struct LogCurveTab {
  double u_lo = 0.0;
  double du = 0.0;
  int nodes = 0;
  std::vector<std::vector<cplx>> curve;  // [point][node]

  cplx interp(std::size_t pt, double arg) const {
    const double u = std::log(arg);
    int i0 = static_cast<int>(std::floor((u - u_lo) / du)) - 1;
    if (i0 < 0) i0 = 0;
    if (i0 > nodes - 4) i0 = nodes - 4;
    const auto& c = curve[pt];
    cplx acc{0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
      double w = 1.0;
      const double ua = u_lo + (i0 + a) * du;
      for (int b = 0; b < 4; ++b) {
        if (b == a) continue;
        w *= (u - (u_lo + (i0 + b) * du)) / (ua - (u_lo + (i0 + b) * du));
      }
      acc += w * c[i0 + a];
    }
    return acc;
  }
};

}  // namespace detail

struct HeatTabOptions {
  double tau_min = 1e-10;
  double tau_max = 60.0;  // exceeds e^{-n tau} visibility for n >= 1
  double du = 0.01;
  int heat_nodes = 48;
};

/// Cached heat curves F_i(tau) = e^{-tau L} f(t, x_i) for a fixed f, t and
/// point set. Every Poisson / fractional-power evaluation downstream is a
/// tau-integral against these curves, so one tabulation amortizes across
/// all (y, k, beta) requests. Below tau_min the semigroup is within
/// O(tau_min) of the identity and F returns f(t, x_i); above tau_max the
/// curve is below double precision and F returns 0.
struct HeatTab {
  double t = 0.0;
  int n = 1;
  std::vector<std::vector<double>> pts;
  std::vector<cplx> f0;
  double tau_min = 0.0, tau_max = 0.0;
  detail::LogCurveTab tab;
  detail::LogCurveTab dtab;  // F - f0 on the same grid

  cplx F(std::size_t pt, double tau) const {
    if (tau <= tau_min) return f0[pt];
    if (tau >= tau_max) return cplx{0.0, 0.0};
    return tab.interp(pt, tau);
  }
  /// F - f0 from its own tabulated curve, so the interpolation error is
  /// relative to the difference itself rather than to f0. This is what the
  /// high difference orders of L^beta need: their nu^{-1-2beta} weights
  /// amplify any absolute noise floor near nu = 0 without bound.
  cplx Fdiff(std::size_t pt, double tau) const {
    // Below the grid F - f0 ~ -tau * (L f); continue linearly through the
    // origin from the first node instead of dropping the contribution.
    if (tau <= tau_min) return dtab.curve[pt][0] * (tau / tau_min);
    if (tau >= tau_max) return -f0[pt];
    return dtab.interp(pt, tau);
  }
};

inline HeatTab build_heat_tab(const SpacetimeFunction& f, double t,
                              std::vector<std::vector<double>> pts,
                              const HeatTabOptions& opt = {}) {
  HeatTab h;
  h.t = t;
  h.n = f.n;
  h.pts = std::move(pts);
  h.tau_min = opt.tau_min;
  h.tau_max = opt.tau_max;
  h.tab.u_lo = std::log(opt.tau_min);
  const double u_hi = std::log(opt.tau_max);
  h.tab.nodes = static_cast<int>(std::ceil((u_hi - h.tab.u_lo) / opt.du)) + 1;
  h.tab.du = (u_hi - h.tab.u_lo) / (h.tab.nodes - 1);
  h.tab.curve.assign(h.pts.size(), std::vector<cplx>(h.tab.nodes));
  h.dtab.u_lo = h.tab.u_lo;
  h.dtab.du = h.tab.du;
  h.dtab.nodes = h.tab.nodes;
  h.dtab.curve.assign(h.pts.size(), std::vector<cplx>(h.tab.nodes));
  h.f0.resize(h.pts.size());

  if (!f.modal.empty()) {
    // e^{-tau L} e^{i rho t} h_mu = e^{i rho (t - tau)} e^{-lambda_mu tau} h_mu:
    // exact curves, no quadrature.
    for (std::size_t i = 0; i < h.pts.size(); ++i) {
      std::vector<cplx> amp(f.modal.size());
      for (std::size_t r = 0; r < f.modal.size(); ++r)
        amp[r] = f.modal[r].coeff * eval_hermite_multi(f.modal[r].mu, h.pts[i]) *
                 std::exp(cplx{0.0, f.modal[r].rho * t});
      cplx v0{0.0, 0.0};
      for (const auto& a : amp) v0 += a;
      h.f0[i] = v0;
      for (int j = 0; j < h.tab.nodes; ++j) {
        const double tau = std::exp(h.tab.u_lo + j * h.tab.du);
        cplx v{0.0, 0.0};
        for (std::size_t r = 0; r < f.modal.size(); ++r)
          v += amp[r] * std::exp(-cplx{f.modal[r].mu.eigenvalue(), f.modal[r].rho} * tau);
        h.tab.curve[i][j] = v;
        h.dtab.curve[i][j] = v - v0;
      }
    }
    return h;
  }

  HeatOptions hopt;
  hopt.nodes = opt.heat_nodes;
  parallel_for(h.pts.size(), [&](std::size_t i) {
    h.f0[i] = f(t, h.pts[i]);
    for (int j = 0; j < h.tab.nodes; ++j) {
      const double tau = std::exp(h.tab.u_lo + j * h.tab.du);
      h.tab.curve[i][j] = apply_heat_L_point(tau, f, t, h.pts[i], hopt);
      h.dtab.curve[i][j] = h.tab.curve[i][j] - h.f0[i];
    }
  });
  return h;
}

/// Poisson evaluations over a HeatTab: whole-point-set rows per (w, k), so
/// the subordination rule is built once per abscissa.
struct SemigroupSampler {
  HeatTab tab;
  double du_sub = 0.05;
  // Rows keyed by (w, k); k = -1 holds P_w f - f. The fractional powers
  // re-request the same abscissas across their beta loop, so this cache
  // is what amortizes the tabulation.
  mutable std::map<std::pair<double, int>, std::vector<cplx>> rows;

  std::size_t size() const { return tab.pts.size(); }

  /// Subordination weight mass sitting below tau_c:
  /// int_0^{tau_c} w(y, tau) d tau = erfc(y / (2 sqrt(tau_c))).
  static double mass_below(double y, double tau_c) {
    return std::erfc(0.5 * y / std::sqrt(tau_c));
  }

  /// d^k/dw^k P_w f at every tabulated point. k = 0 integrates on the
  /// tab's own tau-lattice: a fixed lattice makes the quadrature error a
  /// smooth multiple of the value as a function of w, which the binomial
  /// differences of L^beta then cancel along with the value itself. Per-w
  /// rules do not have that property (their nodes shift against the
  /// integrand's transition region), so they only serve the k >= 1 path,
  /// where no difference cancellation is needed.
  std::vector<cplx> P(double w, int k = 0) const {
    auto it = rows.find({w, k});
    if (it != rows.end()) return it->second;
    std::vector<cplx> out;
    if (k == 0) {
      out = lattice_integral(w, false);
    } else {
      const auto rule = make_subordination_rule(w, k, static_cast<double>(tab.n), du_sub);
      out.assign(size(), cplx{0.0, 0.0});
      for (std::size_t j = 0; j < rule.tau.size(); ++j) {
        const double wk = subordination_weight(w, rule.tau[j], k) * rule.dtau[j];
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += wk * tab.F(i, rule.tau[j]);
      }
    }
    rows.emplace(std::pair<double, int>{w, k}, out);
    return out;
  }

  /// P_w f - f in mass-normalized difference form, on the same fixed lattice.
  std::vector<cplx> P_minus_f(double w) const {
    auto it = rows.find({w, -1});
    if (it != rows.end()) return it->second;
    auto out = lattice_integral(w, true);
    rows.emplace(std::pair<double, int>{w, -1}, out);
    return out;
  }

 private:
  std::vector<cplx> lattice_integral(double w, bool diff) const {
    std::vector<cplx> out(size(), cplx{0.0, 0.0});
    // Below tau = w^2/240 the weight carries e^{-v} with v > 60: no mass.
    int j_lo = static_cast<int>(std::floor((std::log(w * w / 240.0) - tab.tab.u_lo) / tab.tab.du));
    if (j_lo < 0) j_lo = 0;
    for (int j = j_lo; j < tab.tab.nodes; ++j) {
      const double tau = std::exp(tab.tab.u_lo + j * tab.tab.du);
      double wk = subordination_weight(w, tau, 0) * tau * tab.tab.du;
      if (j == 0 || j == tab.tab.nodes - 1) wk *= 0.5;
      if (wk == 0.0) continue;
      if (diff) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += wk * tab.dtab.curve[i][j];
      } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += wk * tab.tab.curve[i][j];
      }
    }
    // Mass below tau_min: F ~ f0 there (resp. F - f0 ~ c1 tau with the
    // linear coefficient taken from the first node); the tau-moment of the
    // weight below tau_c is (y^2 / 4 sqrt(pi)) Gamma(-1/2, y^2/4tau_c).
    const double m_lo = mass_below(w, tab.tau_min);
    const double v_lo = 0.25 * w * w / tab.tau_min;
    // Gamma(-1/2, z) = 2 (e^{-z}/sqrt(z) - sqrt(pi) erfc(sqrt(z)))
    const double sz = std::sqrt(v_lo);
    const double gamma_half = 2.0 * (std::exp(-v_lo) / sz - std::sqrt(kPi) * std::erfc(sz));
    const double tau_mom = 0.25 * w * w / std::sqrt(kPi) * gamma_half;
    // Mass above tau_max: F ~ 0 (resp. F - f0 ~ -f0).
    const double m_hi = 1.0 - mass_below(w, tab.tau_max);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (diff) {
        const cplx c1 = tab.dtab.curve[i][0] / tab.tau_min;
        out[i] += c1 * tau_mom - m_hi * tab.f0[i];
      } else {
        out[i] += m_lo * tab.f0[i];
      }
    }
    return out;
  }
};

struct DerivTabOptions {
  double w_min = 5e-4;
  double w_max = 85.0;
  double du = 0.01;
};

/// Curves D_k(w) = d^k/dw^k P_w f(t, x_i) on a log-w grid. Composed
/// operators (fractional powers or multipliers under a further P_y) only
/// need D_k at shifted abscissae w = y + nu, which the semigroup property
/// turns into lookups here.
struct PoissonDerivTab {
  int k = 0;
  double w_min = 0.0, w_max = 0.0;
  detail::LogCurveTab tab;

  cplx D(std::size_t pt, double w) const {
    if (w >= w_max) return cplx{0.0, 0.0};
    if (w < w_min) throw RangeError("PoissonDerivTab: w below tabulated range");
    return tab.interp(pt, w);
  }
};

inline PoissonDerivTab build_deriv_tab(const SemigroupSampler& s, int k,
                                       const DerivTabOptions& opt = {}) {
  PoissonDerivTab d;
  d.k = k;
  d.w_min = opt.w_min;
  d.w_max = opt.w_max;
  d.tab.u_lo = std::log(opt.w_min);
  const double u_hi = std::log(opt.w_max);
  d.tab.nodes = static_cast<int>(std::ceil((u_hi - d.tab.u_lo) / opt.du)) + 1;
  d.tab.du = (u_hi - d.tab.u_lo) / (d.tab.nodes - 1);
  d.tab.curve.assign(s.size(), std::vector<cplx>(d.tab.nodes));

  std::vector<std::vector<cplx>> rows(d.tab.nodes);
  parallel_for(static_cast<std::size_t>(d.tab.nodes), [&](std::size_t j) {
    rows[j] = s.P(std::exp(d.tab.u_lo + j * d.tab.du), k);
  });
  for (int j = 0; j < d.tab.nodes; ++j)
    for (std::size_t i = 0; i < s.size(); ++i) d.tab.curve[i][j] = rows[j][i];
  return d;
}

}  // namespace hermfrac
