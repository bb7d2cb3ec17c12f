#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "hermfrac/errors.hpp"
#include "hermfrac/quadrature.hpp"
#include "hermfrac/stable_math.hpp"

namespace hermfrac {

/// Hermite function h_k(x), orthonormal in L^2(R), via the normalized
/// three-term recurrence
///   h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1},
/// seeded by h_0 = pi^{-1/4} e^{-x^2/2}. No factorials are formed, so the
/// evaluation stays in range for k <= 200, |x| <= 30.
inline double eval_hermite(int k, double x) {
  if (k < 0) throw DomainError("eval_hermite: k < 0");
  double hm1 = 0.0;
  double h0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  for (int j = 0; j < k; ++j) {
    const double h1 = x * std::sqrt(2.0 / (j + 1)) * h0 - std::sqrt(static_cast<double>(j) / (j + 1)) * hm1;
    hm1 = h0;
    h0 = h1;
  }
  return h0;
}

struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) {
    for (int v : entries)
      if (v < 0) throw DomainError("MultiIndex: negative entry");
  }

  int dim() const { return static_cast<int>(entries.size()); }
  int order() const {
    int s = 0;
    for (int v : entries) s += v;
    return s;
  }
  /// Hermite eigenvalue 2|mu| + n of the harmonic oscillator.
  double eigenvalue() const { return 2.0 * order() + dim(); }

  bool operator<(const MultiIndex& o) const { return entries < o.entries; }
  bool operator==(const MultiIndex& o) const { return entries == o.entries; }
};

/// h_mu(x) = prod_j h_{mu_j}(x_j).
inline double eval_hermite_multi(const MultiIndex& mu, const std::vector<double>& x) {
  if (mu.dim() != static_cast<int>(x.size()))
    throw DimensionError("eval_hermite_multi: dim(mu) != dim(x)");
  double p = 1.0;
  for (int a = 0; a < mu.dim(); ++a) p *= eval_hermite(mu.entries[a], x[a]);
  return p;
}

/// Samples of a function on a tensor grid, complex-valued throughout.
struct GridFunction {
  QuadratureGrid grid;
  std::vector<cplx> values;

  GridFunction() = default;
  explicit GridFunction(QuadratureGrid g) : grid(std::move(g)), values(grid.size(), cplx{0.0, 0.0}) {}
};

/// Truncated Hermite expansion, map mu -> coefficient, all |mu| <= trunc.
struct SpectralCoeffs {
  int dim = 1;
  int trunc = 0;
  std::map<MultiIndex, cplx> entries;

  cplx at(const MultiIndex& mu) const {
    auto it = entries.find(mu);
    return it == entries.end() ? cplx{0.0, 0.0} : it->second;
  }
};

/// Enumerate all multi-indices in n axes with |mu| <= N (lexicographic).
inline std::vector<MultiIndex> multi_indices_up_to(int n, int N) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(n, 0);
  std::function<void(int, int)> rec = [&](int axis, int rem) {
    if (axis == n) {
      out.emplace_back(cur);
      return;
    }
    for (int k = 0; k <= rem; ++k) {
      cur[axis] = k;
      rec(axis + 1, rem - k);
    }
  };
  rec(0, N);
  return out;
}

/// Fourier-Hermite analysis: ghat(mu) = integral g(x) h_mu(x) dx for all
/// |mu| <= N, by tensor Gauss-Hermite quadrature with `nodes` points per
/// axis. The caller is responsible for g decaying fast enough for the rule
/// to converge; all built-in test functions qualify.
inline SpectralCoeffs analyze_samples(const QuadratureGrid& grid,
                                      const std::function<cplx(std::size_t, const std::vector<double>&)>& sample,
                                      int N) {
  const int n = grid.dim;
  if (n > 2) throw CapacityError("analyze: dimension n > 2 not supported");
  if (grid.kind != GridKind::GaussHermite)
    throw DomainError("analyze: samples must live on a Gauss-Hermite grid");
  const auto& rule = grid.axes[0];
  const int M = static_cast<int>(rule.nodes.size());

  // Per-axis table of h_k at the quadrature nodes.
  std::vector<std::vector<double>> H(N + 1, std::vector<double>(M));
  for (int k = 0; k <= N; ++k)
    for (int i = 0; i < M; ++i) H[k][i] = eval_hermite(k, rule.nodes[i]);

  // Samples with the e^{-x^2} weight factor folded back out.
  std::vector<cplx> samples(grid.size());
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto x = grid.point(f);
    double ex = 0.0;
    for (double xa : x) ex += xa * xa;
    const cplx v = sample(f, x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericsError("analyze: non-finite sample");
    samples[f] = grid.weight(f) * std::exp(ex) * v;
  }

  SpectralCoeffs c;
  c.dim = n;
  c.trunc = N;
  for (const auto& mu : multi_indices_up_to(n, N)) {
    cplx acc{0.0, 0.0};
    for (std::size_t f = 0; f < grid.size(); ++f) {
      std::size_t rest = f;
      double hm = 1.0;
      for (int a = n - 1; a >= 0; --a) {
        hm *= H[mu.entries[a]][rest % M];
        rest /= M;
      }
      acc += samples[f] * hm;
    }
    c.entries[mu] = acc;
  }
  return c;
}

inline SpectralCoeffs analyze(const std::function<cplx(const std::vector<double>&)>& g,
                              int n, int N, int nodes = 64) {
  QuadratureGrid grid = QuadratureGrid::gauss_hermite(n, nodes);
  return analyze_samples(grid, [&](std::size_t, const std::vector<double>& x) { return g(x); }, N);
}

inline SpectralCoeffs analyze(const GridFunction& g, int N) {
  return analyze_samples(g.grid, [&](std::size_t f, const std::vector<double>&) { return g.values[f]; }, N);
}

/// Evaluate a truncated expansion at a point.
inline cplx synthesize_at(const SpectralCoeffs& c, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != c.dim) throw DimensionError("synthesize_at: dim mismatch");
  cplx acc{0.0, 0.0};
  for (const auto& [mu, v] : c.entries) acc += v * eval_hermite_multi(mu, x);
  return acc;
}

/// Sum_mu c(mu) h_mu at every node of `grid`.
inline GridFunction synthesize(const SpectralCoeffs& c, const QuadratureGrid& grid) {
  GridFunction out(grid);
  for (std::size_t f = 0; f < grid.size(); ++f) out.values[f] = synthesize_at(c, grid.point(f));
  return out;
}

enum class LadderDir { Raise, Lower };

/// Ladder operators in coefficient space. Lower implements
/// A_i = d/dx_i + x_i:  A_i h_mu = sqrt(2 mu_i) h_{mu - e_i}.
/// Raise implements A_{-i} = -d/dx_i + x_i:  A_{-i} h_mu = sqrt(2(mu_i+1)) h_{mu + e_i}.
/// Raising past the truncation extends it by one.
inline SpectralCoeffs ladder(LadderDir dir, int axis, const SpectralCoeffs& c) {
  if (axis < 0 || axis >= c.dim) throw DimensionError("ladder: axis out of range");
  SpectralCoeffs out;
  out.dim = c.dim;
  out.trunc = c.trunc + (dir == LadderDir::Raise ? 1 : 0);
  for (const auto& [mu, v] : c.entries) {
    MultiIndex nu = mu;
    if (dir == LadderDir::Lower) {
      const int k = mu.entries[axis];
      if (k == 0) continue;  // annihilates the ground state on this axis
      nu.entries[axis] = k - 1;
      out.entries[nu] += v * std::sqrt(2.0 * k);
    } else {
      const int k = mu.entries[axis];
      nu.entries[axis] = k + 1;
      out.entries[nu] += v * std::sqrt(2.0 * (k + 1));
    }
  }
  return out;
}

}  // namespace hermfrac
