#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "hermfrac/errors.hpp"
#include "hermfrac/stable_math.hpp"

namespace hermfrac {

// Nodes and weights of a one-dimensional rule.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix built from the
/// three-term recurrence, weights are mu0 * (first eigenvector component)^2.
inline Rule1D golub_welsch(const std::vector<double>& diag,
                           const std::vector<double>& offdiag, double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    J(i, i + 1) = offdiag[i];
    J(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

/// Gauss-Hermite rule for the weight e^{-x^2}:
///   integral of p(x) e^{-x^2} dx  ~=  sum_i w_i p(x_i).
/// Library-wide convention: the e^{-x^2} factor is KEPT inside the weights.
/// Exact for polynomials of degree <= 2N-1. The Mehler quadrature requests
/// the same rule once per tau node, so results are memoized; map entries
/// are reference-stable, hence the const reference return.
inline const Rule1D& gauss_hermite_rule(int N) {
  if (N < 2) throw DomainError("gauss_hermite: need N >= 2");
  if (N > 512) throw CapacityError("gauss_hermite: N > 512 unsupported");
  static std::mutex mu;
  static std::map<int, Rule1D> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  std::vector<double> diag(N, 0.0), off(N - 1);
  for (int k = 1; k < N; ++k) off[k - 1] = std::sqrt(k / 2.0);
  return cache.emplace(N, golub_welsch(diag, off, std::sqrt(kPi))).first->second;
}

/// Gauss-Legendre on [-1, 1].
inline Rule1D gauss_legendre_rule(int N) {
  if (N < 1) throw DomainError("gauss_legendre: need N >= 1");
  std::vector<double> diag(N, 0.0), off(N - 1);
  for (int k = 1; k < N; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(diag, off, 2.0);
}

/// Gauss-Legendre mapped to [a, b].
inline Rule1D gauss_legendre_rule(int N, double a, double b) {
  Rule1D r = gauss_legendre_rule(N);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (auto& x : r.nodes) x = c + h * x;
  for (auto& w : r.weights) w *= h;
  return r;
}

enum class GridKind { GaussHermite, UniformBox };

/// Tensor-product grid: identical structure per axis, independent nodes.
struct QuadratureGrid {
  int dim = 1;
  GridKind kind = GridKind::GaussHermite;
  std::vector<Rule1D> axes;  // size dim

  static QuadratureGrid gauss_hermite(int dim, int N) {
    QuadratureGrid g;
    g.dim = dim;
    g.kind = GridKind::GaussHermite;
    Rule1D r = gauss_hermite_rule(N);
    for (int a = 0; a < dim; ++a) g.axes.push_back(r);
    return g;
  }

  // Uniform nodes on [-extent, extent] with the given step; weights are the
  // step (plain Riemann/trapezoid-style box weights).
  static QuadratureGrid uniform_box(int dim, double extent, double step) {
    if (extent <= 0 || step <= 0) throw DomainError("uniform_box: bad extent/step");
    QuadratureGrid g;
    g.dim = dim;
    g.kind = GridKind::UniformBox;
    Rule1D r;
    const int m = static_cast<int>(std::floor(extent / step));
    for (int i = -m; i <= m; ++i) {
      r.nodes.push_back(i * step);
      r.weights.push_back(step);
    }
    for (int a = 0; a < dim; ++a) g.axes.push_back(r);
    return g;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& a : axes) s *= a.nodes.size();
    return s;
  }

  // Decode a flat index into the tensor point, last axis fastest.
  std::vector<double> point(std::size_t flat) const {
    std::vector<double> x(dim);
    for (int a = dim - 1; a >= 0; --a) {
      const std::size_t m = axes[a].nodes.size();
      x[a] = axes[a].nodes[flat % m];
      flat /= m;
    }
    return x;
  }

  double weight(std::size_t flat) const {
    double w = 1.0;
    for (int a = dim - 1; a >= 0; --a) {
      const std::size_t m = axes[a].nodes.size();
      w *= axes[a].weights[flat % m];
      flat /= m;
    }
    return w;
  }
};

}  // namespace hermfrac
