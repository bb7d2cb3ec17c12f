#pragma once

#include <cstdio>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "hermfrac/basis.hpp"
#include "hermfrac/errors.hpp"
#include "hermfrac/test_functions.hpp"

namespace hermfrac {

/// A function f(t, x) the semigroup operators can evaluate anywhere.
/// Either wraps a closed-form TestFunction or a time-tabulated family of
/// spatial snapshots. Tabulated snapshots are stored as spectral
/// coefficients (so evaluation off the sample grid is well defined) with
/// linear interpolation in t.
struct SpacetimeFunction {
  int n = 1;
  bool spatial = true;
  std::function<cplx(double, const std::vector<double>&)> eval;
  // Exact mode decomposition when known (see TestFunction::modal); lets the
  // heat tabulation use closed-form curves instead of Mehler quadrature.
  std::vector<TestFunction::ModalTerm> modal;

  cplx operator()(double t, const std::vector<double>& x) const { return eval(t, x); }

  static SpacetimeFunction from_test(const TestFunction& f) {
    SpacetimeFunction s;
    s.n = f.dim();
    s.spatial = f.is_spatial();
    s.modal = f.modal();
    s.eval = [f](double t, const std::vector<double>& x) { return f(t, x); };
    return s;
  }

  /// Finite combination of modes e^{i rho t} h_mu given directly, e.g. a
  /// ladder or time-derivative image of another modal function.
  static SpacetimeFunction from_modal(int n, std::vector<TestFunction::ModalTerm> terms) {
    SpacetimeFunction s;
    s.n = n;
    s.spatial = true;
    for (const auto& m : terms)
      if (m.rho != 0.0) s.spatial = false;
    s.modal = std::move(terms);
    const auto copy = s.modal;
    s.eval = [copy](double t, const std::vector<double>& x) {
      cplx v{0.0, 0.0};
      for (const auto& m : copy)
        v += m.coeff * eval_hermite_multi(m.mu, x) * std::exp(cplx{0.0, m.rho * t});
      return v;
    };
    return s;
  }

  static SpacetimeFunction from_coeffs(const SpectralCoeffs& c) {
    SpacetimeFunction s;
    s.n = c.dim;
    s.spatial = true;
    for (const auto& [mu, v] : c.entries) s.modal.push_back({0.0, mu, v});
    s.eval = [c](double, const std::vector<double>& x) { return synthesize_at(c, x); };
    return s;
  }

  /// Tabulated form: one spatial snapshot per time, linearly interpolated.
  /// Out-of-range t clamps to the nearest endpoint (with a one-shot stderr
  /// notice) unless clamp = false, in which case it raises RangeError.
  static SpacetimeFunction tabulated(std::vector<double> times, std::vector<GridFunction> slices,
                                     int N = 32, bool clamp = true) {
    if (times.size() != slices.size() || times.empty())
      throw DomainError("SpacetimeFunction: times/slices size mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (times[i] <= times[i - 1]) throw DomainError("SpacetimeFunction: times must be increasing");

    auto coeffs = std::make_shared<std::vector<SpectralCoeffs>>();
    for (const auto& g : slices) coeffs->push_back(analyze(g, N));

    auto ts = std::make_shared<std::vector<double>>(std::move(times));
    auto warned = std::make_shared<bool>(false);

    SpacetimeFunction s;
    s.n = coeffs->front().dim;
    s.spatial = false;
    s.eval = [ts, coeffs, warned, clamp](double t, const std::vector<double>& x) -> cplx {
      const auto& tt = *ts;
      if (t < tt.front() || t > tt.back()) {
        if (!clamp) throw RangeError("SpacetimeFunction: t outside tabulated range");
        if (!*warned) {
          std::fprintf(stderr, "note: time %g outside tabulated range [%g, %g], clamping\n", t,
                       tt.front(), tt.back());
          *warned = true;
        }
        t = t < tt.front() ? tt.front() : tt.back();
      }
      if (tt.size() == 1) return synthesize_at((*coeffs)[0], x);
      std::size_t hi = 1;
      while (hi + 1 < tt.size() && tt[hi] < t) ++hi;
      const double lam = (t - tt[hi - 1]) / (tt[hi] - tt[hi - 1]);
      return (1.0 - lam) * synthesize_at((*coeffs)[hi - 1], x) +
             lam * synthesize_at((*coeffs)[hi], x);
    };
    return s;
  }
};

}  // namespace hermfrac
