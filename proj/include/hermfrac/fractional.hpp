#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hermfrac/basis.hpp"
#include "hermfrac/errors.hpp"
#include "hermfrac/heat_tab.hpp"
#include "hermfrac/stable_math.hpp"

namespace hermfrac {

// ---------------------------------------------------------------------------
// Gamma constants of the fractional-power normalizations.
// ---------------------------------------------------------------------------

struct GammaConsts {
  double beta = 0.0;
  int m = 0;          // difference order [beta] + 1
  double C = 0.0;     // Gamma(beta)
  double c = 0.0;     // int_0^inf (e^{-t} - 1)^m t^{-1-beta} dt
};

namespace detail {

// S(beta) = sum_{j=1}^{m} C(m,j) (-1)^{m-j} j^beta and its beta-derivative.
inline double binom_power_sum(int m, double beta, bool derivative = false) {
  double s = 0.0;
  for (int j = 1; j <= m; ++j) {
    const double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
    const double term = binomial(m, j) * std::pow(static_cast<double>(j), beta);
    s += sign * (derivative ? term * std::log(static_cast<double>(j)) : term);
  }
  return s;
}

/// c_beta = int_0^inf (e^{-t} - 1)^m t^{-1-beta} dt, m = [beta] + 1, via the
/// closed form Gamma(-beta) * S(beta). At integer beta the Gamma pole meets
/// a zero of S and the limit is (-1)^{beta+1} S'(beta) / beta!; the positive
/// powers hit that case whenever 2 beta is an integer, so it is resolved
/// here rather than rejected.
inline double c_beta_continued(double beta) {
  if (beta <= 0.0) throw DomainError("c_beta: beta must be positive");
  const int m = static_cast<int>(std::floor(beta)) + 1;
  if (beta == std::floor(beta)) {
    const int k = static_cast<int>(beta);
    return ((k % 2 == 0) ? -1.0 : 1.0) * detail::binom_power_sum(k + 1, beta, true) /
           std::tgamma(static_cast<double>(k) + 1.0);
  }
  return std::tgamma(-beta) * detail::binom_power_sum(m, beta);
}

}  // namespace detail

/// C_beta = Gamma(beta); c_beta by the binomial closed form. Integer beta is
/// rejected: the closed form degenerates there and callers that really need
/// the limiting value (the positive powers) use it internally.
inline GammaConsts gamma_consts(double beta) {
  if (beta <= 0.0) throw DomainError("gamma_consts: beta must be positive");
  if (beta == std::floor(beta)) throw DomainError("gamma_consts: c_beta undefined at integer beta");
  GammaConsts g;
  g.beta = beta;
  g.m = static_cast<int>(std::floor(beta)) + 1;
  g.C = std::tgamma(beta);
  g.c = detail::c_beta_continued(beta);
  return g;
}

// ---------------------------------------------------------------------------
// Fractional powers over cached heat curves.
// ---------------------------------------------------------------------------

struct FracOptions {
  double du = 0.02;       // log-nu trapezoid step
  double nu_max_scale = 40.0;
  // Grid-level wrappers re-run the nu-quadrature at du/2 and raise
  // NumericsError past check_tol when enabled.
  bool check = false;
  double check_tol = 1e-5;
  HeatTabOptions tab;
};

namespace detail {

struct LogTrapezoid {
  std::vector<double> nu;
  std::vector<double> dnu;
};

inline LogTrapezoid log_trapezoid(double lo, double hi, double du) {
  LogTrapezoid g;
  const double u_lo = std::log(lo), u_hi = std::log(hi);
  const int M = static_cast<int>(std::ceil((u_hi - u_lo) / du)) + 1;
  const double step = (u_hi - u_lo) / (M - 1);
  g.nu.resize(M);
  g.dnu.resize(M);
  for (int j = 0; j < M; ++j) {
    g.nu[j] = std::exp(u_lo + j * step);
    g.dnu[j] = g.nu[j] * step * ((j == 0 || j == M - 1) ? 0.5 : 1.0);
  }
  return g;
}

}  // namespace detail

/// L^{-beta} f = (1/Gamma(2 beta)) int_0^inf P_nu f nu^{2 beta - 1} d nu,
/// evaluated at every point of the sampler. The (0, nu_min] head is added
/// analytically from a local power fit of P_nu f - f (exact for the f term,
/// which dominates it).
inline std::vector<cplx> frac_negative(double beta, const SemigroupSampler& s,
                                       const FracOptions& opt = {}) {
  if (beta <= 0.0) throw DomainError("frac_negative: beta must be positive");
  const double nu_min = 1e-6;
  const double nu_max = opt.nu_max_scale / std::sqrt(static_cast<double>(s.tab.n));
  const auto grid = detail::log_trapezoid(nu_min, nu_max, opt.du);

  std::vector<cplx> acc(s.size(), cplx{0.0, 0.0});
  for (std::size_t j = 0; j < grid.nu.size(); ++j) {
    const auto row = s.P(grid.nu[j]);
    const double w = std::pow(grid.nu[j], 2.0 * beta - 1.0) * grid.dnu[j];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * row[i];
  }

  // Head: P_nu f ~ f + q nu^e near 0; integrate the model over (0, nu_min].
  const auto d1 = s.P_minus_f(nu_min);
  const auto d2 = s.P_minus_f(2.0 * nu_min);
  double n1 = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    n1 = std::max(n1, std::abs(d1[i]));
    n2 = std::max(n2, std::abs(d2[i]));
  }
  double e = 1.0;
  if (n1 > 0.0 && n2 > 0.0) {
    e = std::log2(n2 / n1);
    if (!(e > 0.1 && e < 4.0)) e = 1.0;
  }
  const double head_f = std::pow(nu_min, 2.0 * beta) / (2.0 * beta);
  const double head_q = std::pow(nu_min, 2.0 * beta) / (e + 2.0 * beta);
  for (std::size_t i = 0; i < acc.size(); ++i)
    acc[i] += head_f * s.tab.f0[i] + head_q * d1[i];

  const double norm = 1.0 / std::tgamma(2.0 * beta);
  for (auto& v : acc) v *= norm;
  return acc;
}

/// L^{beta} f = (1/c_{2 beta}) int_0^inf (P_nu - I)^m f nu^{-1-2 beta} d nu,
/// m = [2 beta] + 1, with the binomial expansion as the working form.
/// The far tail (beyond nu_max, where every P_{j nu} f has decayed) is the
/// closed form (-1)^m f nu_max^{-2 beta} / (2 beta). The head below nu_min
/// comes from a power fit of the m-th difference; the fitted exponent
/// doubles as the roughness monitor: the defining integral only converges
/// when the difference vanishes faster than nu^{2 beta}.
inline std::vector<cplx> frac_positive(double beta, const SemigroupSampler& s,
                                       const FracOptions& opt = {}) {
  if (beta <= 0.0) throw DomainError("frac_positive: beta must be positive");
  const int m = static_cast<int>(std::floor(2.0 * beta)) + 1;
  const double c2b = detail::c_beta_continued(2.0 * beta);
  const double nu_min = (m == 1) ? 1e-6 : 1e-4;
  const double nu_max = opt.nu_max_scale / std::sqrt(static_cast<double>(s.tab.n));
  const auto grid = detail::log_trapezoid(nu_min, nu_max, opt.du);

  auto mth_difference = [&](double nu) {
    std::vector<cplx> row(s.size(), cplx{0.0, 0.0});
    for (int j = 1; j <= m; ++j) {
      const double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
      const double cj = sign * binomial(m, j);
      const auto pj = s.P_minus_f(j * nu);
      for (std::size_t i = 0; i < row.size(); ++i) row[i] += cj * pj[i];
    }
    return row;
  };

  std::vector<cplx> acc(s.size(), cplx{0.0, 0.0});
  for (std::size_t j = 0; j < grid.nu.size(); ++j) {
    const auto row = mth_difference(grid.nu[j]);
    const double w = std::pow(grid.nu[j], -1.0 - 2.0 * beta) * grid.dnu[j];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * row[i];
  }

  // Far tail: P_{j nu} f ~ 0, only the identity term of the expansion is left.
  const double tail = std::pow(nu_max, -2.0 * beta) / (2.0 * beta);
  const double msign = (m % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += msign * tail * s.tab.f0[i];

  // Head fit on (0, nu_min].
  const auto a1 = mth_difference(nu_min);
  const auto a2 = mth_difference(2.0 * nu_min);
  const auto a4 = mth_difference(4.0 * nu_min);
  double n1 = 0.0, n2 = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    n1 = std::max(n1, std::abs(a1[i]));
    n2 = std::max(n2, std::abs(a2[i]));
    scale = std::max(scale, std::abs(s.tab.f0[i]));
  }
  if (n1 > 1e-14 * std::max(scale, 1e-300)) {
    const double e = std::log2(n2 / n1);
    if (e <= 2.0 * beta + 0.02)
      throw NumericsError("frac_positive: integrand not integrable near 0 (input too rough)");
    if (std::abs(e - m) < 0.25) {
      // Smooth input: difference = nu^m (q0 + q1 nu + q2 nu^2); solve the
      // 3x3 system through the samples at nu_min, 2 nu_min, 4 nu_min.
      const std::array<double, 3> cs{1.0, 2.0, 4.0};
      for (std::size_t i = 0; i < acc.size(); ++i) {
        std::array<cplx, 3> r{a1[i] / std::pow(nu_min, m), a2[i] / std::pow(2.0 * nu_min, m),
                              a4[i] / std::pow(4.0 * nu_min, m)};
        // Invert [[1, c, c^2]] rows by elimination.
        std::array<std::array<double, 3>, 3> A;
        for (int row = 0; row < 3; ++row) A[row] = {1.0, cs[row], cs[row] * cs[row]};
        for (int col = 0; col < 3; ++col) {
          for (int row = col + 1; row < 3; ++row) {
            const double fac = A[row][col] / A[col][col];
            for (int cc = col; cc < 3; ++cc) A[row][cc] -= fac * A[col][cc];
            r[row] -= fac * r[col];
          }
        }
        std::array<cplx, 3> q;  // q[r] = q_r * nu_min^r
        for (int row = 2; row >= 0; --row) {
          cplx v = r[row];
          for (int cc = row + 1; cc < 3; ++cc) v -= A[row][cc] * q[cc];
          q[row] = v / A[row][row];
        }
        cplx head{0.0, 0.0};
        for (int rr = 0; rr < 3; ++rr)
          head += q[rr] * std::pow(nu_min, m - 2.0 * beta) / (m + rr - 2.0 * beta);
        acc[i] += head;
      }
    } else {
      // Rough input past the convergence gate: single power nu^e.
      const double head = std::pow(nu_min, -2.0 * beta) / (e - 2.0 * beta);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += head * a1[i];
    }
  }

  for (auto& v : acc) v /= c2b;
  return acc;
}

// ---------------------------------------------------------------------------
// Laplace-transform-type multipliers m(lambda) = lambda^{1/2} int e^{-s lambda^{1/2}} a(s) ds.
// ---------------------------------------------------------------------------

struct LaplaceSymbol {
  std::string name;
  std::function<double(double)> a;
  // Closed-form symbol on an eigenvalue, for oracles and CLI echoes.
  std::function<cplx(cplx)> symbol;
};

inline LaplaceSymbol laplace_symbol(const std::string& name) {
  if (name == "one")
    return {name, [](double) { return 1.0; }, [](cplx) { return cplx{1.0, 0.0}; }};
  if (name == "exp-decay")
    return {name, [](double s) { return std::exp(-s); },
            [](cplx lam) {
              const cplx r = std::sqrt(lam);
              return r / (1.0 + r);
            }};
  if (name == "box")
    return {name, [](double s) { return s <= 1.0 ? 1.0 : 0.0; },
            [](cplx lam) { return 1.0 - std::exp(-std::sqrt(lam)); }};
  throw ParseError("unknown multiplier symbol: " + name);
}

/// m(L) f = -int_0^inf d_s P_s f * a(s) ds. The s-range splits at s = 1 so
/// the box symbol's jump lands on a segment boundary; the (0, s_min] head
/// uses the exact integral of d_s P_s, i.e. -a(0) (P_{s_min} f - f).
inline std::vector<cplx> laplace_multiplier(const LaplaceSymbol& sym, const SemigroupSampler& s,
                                            const FracOptions& opt = {}) {
  const double s_min = 1e-6;
  const double s_max = opt.nu_max_scale / std::sqrt(static_cast<double>(s.tab.n));
  std::vector<cplx> acc(s.size(), cplx{0.0, 0.0});
  const std::array<std::pair<double, double>, 2> segs{{{s_min, 1.0}, {1.0, s_max}}};
  for (const auto& seg : segs) {
    // The segment boundary at s = 1 contributes an uncancelled trapezoid
    // endpoint term, so the composite rule is followed by the leading
    // Euler-Maclaurin correction -(du^2/12)(g'(b) - g'(a)) with one-sided
    // second-order derivative estimates.
    const auto grid = detail::log_trapezoid(seg.first, seg.second, 0.5 * opt.du);
    const std::size_t M = grid.nu.size();
    const double du = std::log(grid.nu[1] / grid.nu[0]);
    std::vector<std::vector<cplx>> g(M);
    for (std::size_t j = 0; j < M; ++j) {
      // Evaluate the symbol one-sidedly from inside the segment so a jump
      // sitting exactly on the boundary is not double counted.
      const double s_eval =
          std::min(std::max(grid.nu[j], seg.first * (1.0 + 1e-12)), seg.second * (1.0 - 1e-12));
      const double av = sym.a(s_eval);
      const bool edge = j < 3 || j + 3 >= M;
      if (av == 0.0 && !edge) continue;
      const auto row = s.P(grid.nu[j], 1);
      if (edge) {
        g[j].resize(acc.size());
        for (std::size_t i = 0; i < acc.size(); ++i) g[j][i] = -av * grid.nu[j] * row[i];
      }
      if (av == 0.0) continue;
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= av * grid.dnu[j] * row[i];
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
      const cplx da = (-3.0 * g[0][i] + 4.0 * g[1][i] - g[2][i]) / (2.0 * du);
      const cplx db = (3.0 * g[M - 1][i] - 4.0 * g[M - 2][i] + g[M - 3][i]) / (2.0 * du);
      acc[i] -= du * du / 12.0 * (db - da);
    }
  }
  const double a0 = sym.a(s_min / 2.0);
  if (a0 != 0.0) {
    const auto head = s.P_minus_f(s_min);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= a0 * head[i];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Hermite Riesz transforms.
// ---------------------------------------------------------------------------

struct RieszOptions {
  bool ladder_first = false;  // alternative composition order, for comparison
  int trunc = 24;             // analysis truncation for sampled spatial inputs
  double dt = 1e-3;           // time step for finite-difference d_t^m
};

/// A^{dirs} H^{-m/2} in spectral form (spatial inputs). dirs lists signed
/// axes: +i applies the lowering operator on axis i, -i the raising one.
/// Default order applies the fractional power first (reading A^nu H^{-m/2}
/// right to left); ladder_first swaps the composition for comparison.
inline SpectralCoeffs riesz_transform(const std::vector<int>& dirs, const SpectralCoeffs& f,
                                      const RieszOptions& opt = {}) {
  if (dirs.empty()) throw DomainError("riesz_transform: empty direction list");
  const int m = static_cast<int>(dirs.size());
  auto halfpower = [&](const SpectralCoeffs& c) {
    SpectralCoeffs out = c;
    for (auto& [mu, v] : out.entries) v *= std::pow(mu.eigenvalue(), -0.5 * m);
    return out;
  };
  auto ladders = [&](SpectralCoeffs c) {
    for (int d : dirs) {
      if (d == 0 || std::abs(d) > c.dim) throw DomainError("riesz_transform: bad axis");
      c = ladder(d > 0 ? LadderDir::Lower : LadderDir::Raise, std::abs(d) - 1, c);
    }
    return c;
  };
  return opt.ladder_first ? halfpower(ladders(f)) : ladders(halfpower(f));
}

// ---------------------------------------------------------------------------
// Grid-level entry points: tabulate heat curves at the evaluation points,
// run the sampler-level quadratures, optionally cross-check at half step.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<double>> grid_points(const QuadratureGrid& g) {
  std::vector<std::vector<double>> pts(g.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = g.point(i);
  return pts;
}

inline GridFunction run_checked(const QuadratureGrid& grid, const SemigroupSampler& s,
                                const FracOptions& opt, const char* what,
                                const std::function<std::vector<cplx>(const FracOptions&)>& run) {
  GridFunction out(grid);
  out.values = run(opt);
  if (opt.check) {
    FracOptions fine = opt;
    fine.du *= 0.5;
    const auto ref = run(fine);
    double scale = 1e-300;
    for (const auto& v : s.tab.f0) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < ref.size(); ++i)
      if (std::abs(out.values[i] - ref[i]) > opt.check_tol * std::max(1.0, scale))
        throw NumericsError(std::string(what) + ": quadrature did not converge");
  }
  return out;
}

}  // namespace detail

inline GridFunction frac_negative(double beta, const SpacetimeFunction& f, double t,
                                  const QuadratureGrid& eval_grid, const FracOptions& opt = {}) {
  SemigroupSampler s{build_heat_tab(f, t, detail::grid_points(eval_grid), opt.tab)};
  return detail::run_checked(eval_grid, s, opt, "frac_negative",
                             [&](const FracOptions& o) { return frac_negative(beta, s, o); });
}

inline GridFunction frac_positive(double beta, const SpacetimeFunction& f, double t,
                                  const QuadratureGrid& eval_grid, const FracOptions& opt = {}) {
  SemigroupSampler s{build_heat_tab(f, t, detail::grid_points(eval_grid), opt.tab)};
  return detail::run_checked(eval_grid, s, opt, "frac_positive",
                             [&](const FracOptions& o) { return frac_positive(beta, s, o); });
}

inline GridFunction laplace_multiplier(const LaplaceSymbol& sym, const SpacetimeFunction& f,
                                       double t, const QuadratureGrid& eval_grid,
                                       const FracOptions& opt = {}) {
  SemigroupSampler s{build_heat_tab(f, t, detail::grid_points(eval_grid), opt.tab)};
  return detail::run_checked(eval_grid, s, opt, "laplace_multiplier",
                             [&](const FracOptions& o) { return laplace_multiplier(sym, s, o); });
}

/// d_t^m f as a spacetime function: exact on modal inputs (each mode picks up
/// (i rho)^m), second-order central differences otherwise.
inline SpacetimeFunction time_derivative(int m, const SpacetimeFunction& f, double h) {
  if (m < 1) throw DomainError("time_derivative: order must be >= 1");
  SpacetimeFunction g;
  g.n = f.n;
  g.spatial = false;
  if (!f.modal.empty()) {
    g.modal = f.modal;
    for (auto& term : g.modal)
      term.coeff *= std::pow(cplx{0.0, term.rho}, static_cast<double>(m));
    const auto modes = g.modal;
    g.eval = [modes](double t, const std::vector<double>& x) {
      cplx v{0.0, 0.0};
      for (const auto& term : modes)
        v += term.coeff * eval_hermite_multi(term.mu, x) * std::exp(cplx{0.0, term.rho * t});
      return v;
    };
    return g;
  }
  // Central binomial stencil on offsets (m/2 - j) h; half-integer offsets for
  // odd m. Second-order accurate in h.
  std::vector<double> w(m + 1);
  for (int j = 0; j <= m; ++j)
    w[j] = ((j % 2 == 0) ? 1.0 : -1.0) * binomial(m, j) / std::pow(h, m);
  const auto base = f.eval;
  g.eval = [base, w, m, h](double t, const std::vector<double>& x) {
    cplx v{0.0, 0.0};
    for (int j = 0; j <= static_cast<int>(w.size()) - 1; ++j)
      v += w[j] * base(t + (0.5 * m - j) * h, x);
    return v;
  };
  return g;
}

/// Grid-level Riesz transform. Spatial f: analyze at time t, apply the
/// spectral transform, synthesize on the evaluation grid. Spacetime f:
/// R_m = d_t^m L^{-m} with m = |dirs| (the directions only fix the order).
inline GridFunction riesz_transform(const std::vector<int>& dirs, const SpacetimeFunction& f,
                                    double t, const QuadratureGrid& eval_grid,
                                    const RieszOptions& opt = {}, const FracOptions& fopt = {}) {
  if (dirs.empty()) throw DomainError("riesz_transform: empty direction list");
  const int m = static_cast<int>(dirs.size());
  if (f.spatial) {
    const SpectralCoeffs c =
        analyze([&](const std::vector<double>& x) { return f(t, x); }, f.n, opt.trunc);
    return synthesize(riesz_transform(dirs, c, opt), eval_grid);
  }
  const SpacetimeFunction g = time_derivative(m, f, opt.dt);
  return frac_negative(static_cast<double>(m), g, t, eval_grid, fopt);
}

}  // namespace hermfrac
