#include <catch2/catch_amalgamated.hpp>

#include "hermfrac/kernels.hpp"
#include "hermfrac/spacetime.hpp"
#include "oracles.hpp"

using namespace hermfrac;

namespace {
GridFunction heat_H_of(const TestFunction& g, double tau, const QuadratureGrid& grid,
                       const HeatOptions& opt = {}) {
  return apply_heat_H(tau, g, grid, opt);
}
}  // namespace

TEST_CASE("mehler_log_kernel direct-formula oracle and symmetry") {
  const double lhs = mehler_log_kernel(0.5, {1.0}, {-1.0});
  const double ref = std::log(static_cast<double>(oracle::mehler_direct(0.5L, 1.0L, -1.0L)));
  CHECK(lhs == Catch::Approx(ref).epsilon(1e-12));
  CHECK(mehler_log_kernel(0.7, {0.3}, {-0.9}) ==
        Catch::Approx(mehler_log_kernel(0.7, {-0.9}, {0.3})).epsilon(1e-15));

  // Small-tau Gauss-Weierstrass limit at x = z.
  const double tau = 1e-6;
  CHECK(mehler_log_kernel(tau, {0.4}, {0.4}) ==
        Catch::Approx(std::log(std::pow(4.0 * kPi * tau, -0.5))).epsilon(1e-3));

  CHECK_THROWS_AS(mehler_log_kernel(0.0, {0.0}, {0.0}), DomainError);
  CHECK_THROWS_AS(mehler_log_kernel(-1.0, {0.0}, {0.0}), DomainError);
}

TEST_CASE("mehler kernel stability across the tau range") {
  for (double tau : {1e-12, 1e-6, 1e-2, 1.0, 50.0, 700.0}) {
    const double v = mehler_log_kernel(tau, {1.0}, {0.5});
    CHECK(std::isfinite(v));
    CHECK(std::exp(v) >= 0.0);  // positivity of the kernel
  }
  // Remark-7.32-style asymptotics as numeric assertions on the kernel:
  // small tau looks Gauss-Weierstrass, large tau decays like e^{-tau n}.
  const double small = mehler_log_kernel(0.01, {0.0}, {0.0});
  CHECK(small == Catch::Approx(std::log(std::pow(4.0 * kPi * 0.01, -0.5))).epsilon(2e-2));
  const double l5 = mehler_log_kernel(5.0, {0.0}, {0.0});
  const double l6 = mehler_log_kernel(6.0, {0.0}, {0.0});
  CHECK(l5 - l6 == Catch::Approx(1.0).epsilon(1e-3));  // n = 1 ground-state rate
}

TEST_CASE("heat semigroup eigen-decay") {
  const auto grid = QuadratureGrid::uniform_box(1, 3.0, 0.5);
  for (double tau : {0.05, 0.3, 1.0, 3.0}) {
    const auto g = heat_H_of(TestFunction(tf::HermiteMode{MultiIndex{{2}}}), tau, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double expect = std::exp(-tau * 5.0) * eval_hermite(2, grid.point(i)[0]);
      CHECK(std::abs(g.values[i] - cplx{expect, 0.0}) <= 1e-8);
    }
  }
  // 2-D mode.
  const auto grid2 = QuadratureGrid::uniform_box(2, 2.0, 1.0);
  const auto g2 = heat_H_of(TestFunction(tf::HermiteMode{MultiIndex{{1, 2}}}), 0.3, grid2);
  for (std::size_t i = 0; i < grid2.size(); ++i) {
    const auto x = grid2.point(i);
    const double expect = std::exp(-0.3 * 8.0) * eval_hermite_multi(MultiIndex{{1, 2}}, x);
    CHECK(std::abs(g2.values[i] - cplx{expect, 0.0}) <= 1e-8);
  }
}

TEST_CASE("heat on constants: Lemma-type closed form") {
  const auto grid = QuadratureGrid::uniform_box(1, 5.0, 1.0);
  for (double tau : {0.01, 0.1, 1.0, 5.0}) {
    const auto g = heat_H_of(TestFunction(tf::Constant{cplx{1.0, 0.0}, 1}), tau, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.point(i);
      CHECK(std::abs(g.values[i] - cplx{heat_on_one(tau, x), 0.0}) <= 1e-8);
    }
  }
  CHECK(heat_on_one(1.0, {0.0}) == Catch::Approx(std::pow(std::cosh(2.0), -0.5)).epsilon(1e-14));
  CHECK(heat_on_one(1.0, {2.0}) ==
        Catch::Approx(std::exp(-2.0 * std::tanh(2.0)) / std::sqrt(std::cosh(2.0))).epsilon(1e-14));
  CHECK(heat_on_one(1e-6, {0.3}) == Catch::Approx(1.0).margin(1e-5));
  CHECK_THROWS_AS(heat_on_one(0.0, {0.0}), DomainError);
}

TEST_CASE("heat zero function and contraction") {
  const auto grid = QuadratureGrid::uniform_box(1, 2.0, 0.5);
  const auto z = heat_H_of(TestFunction(tf::Constant{cplx{0.0, 0.0}, 1}), 0.5, grid);
  for (const auto& v : z.values) CHECK(std::abs(v) <= 1e-14);

  // Contraction on a bounded input: |e^{-tau H} f| <= sup|f| (+ eps).
  const auto b = heat_H_of(TestFunction(tf::AbsPowerBump{0.5, {0.0}}), 0.2, grid);
  for (const auto& v : b.values) CHECK(std::abs(v) <= std::pow(5.0, 0.5) * (1.0 + 1e-8));
}

TEST_CASE("heat semigroup law") {
  // e^{-(t1+t2) H} g = e^{-t1 H} e^{-t2 H} g on a Gaussian, via grid round trip.
  const auto grid = QuadratureGrid::gauss_hermite(1, 48);
  const TestFunction g(tf::Gaussian{{0.3}, 1.2});
  const auto one_shot = apply_heat_H(0.7, g, grid);
  const auto half = apply_heat_H(0.4, g, grid);
  const auto two_step = apply_heat_H(0.3, half, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(one_shot.values[i] - two_step.values[i]) <= 1e-7);
}

TEST_CASE("parabolic heat: time shift composed with spatial kernel") {
  const auto grid = QuadratureGrid::uniform_box(1, 2.0, 0.5);

  // Time-independent input reduces to the elliptic case.
  const auto sf = SpacetimeFunction::from_test(TestFunction(tf::Gaussian{{0.0}, 1.5}));
  const auto a = apply_heat_L(0.4, sf, 1.3, grid);
  const auto b = heat_H_of(TestFunction(tf::Gaussian{{0.0}, 1.5}), 0.4, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-12);

  // Eigenmode: e^{-tau(i rho + 2|mu| + n)} e^{i rho t} h_mu.
  const auto mode = SpacetimeFunction::from_test(TestFunction(tf::EigenMode{1.0, MultiIndex{{0}}}));
  const double t = 0.6, tau = 0.2;
  const auto m = apply_heat_L(tau, mode, t, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx expect = std::exp(-tau * cplx{1.0, 1.0}) * std::exp(cplx{0.0, t}) *
                        eval_hermite(0, grid.point(i)[0]);
    CHECK(std::abs(m.values[i] - expect) <= 1e-8);
  }

  // Constant input: parabolic semigroup on 1 equals the closed form.
  const auto c = apply_heat_L(1.0, SpacetimeFunction::from_test(TestFunction(tf::Constant{})), 0.0,
                              grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(c.values[i] - cplx{heat_on_one(1.0, grid.point(i)), 0.0}) <= 1e-8);
}

TEST_CASE("tabulated spacetime functions: interpolation and range policy") {
  // Tabulate an eigenmode on t in [-1, 1] and compare against the closed form.
  const auto mode = TestFunction(tf::EigenMode{1.0, MultiIndex{{1}}});
  std::vector<double> ts;
  for (int i = 0; i <= 80; ++i) ts.push_back(-1.0 + 2.0 * i / 80.0);
  const auto ggrid = QuadratureGrid::gauss_hermite(1, 48);
  std::vector<GridFunction> slices;
  for (double t : ts) {
    GridFunction s{ggrid};
    for (std::size_t i = 0; i < ggrid.size(); ++i) s.values[i] = mode(t, ggrid.point(i));
    slices.push_back(std::move(s));
  }
  const auto tab = SpacetimeFunction::tabulated(ts, slices, 8, false);
  CHECK(std::abs(tab(0.3, {0.5}) - mode(0.3, {0.5})) <= 1e-4);
  CHECK_THROWS_AS(tab(2.0, {0.5}), RangeError);
}

TEST_CASE("quadrature self-check flags disagreement only on hard inputs") {
  HeatOptions opt;
  opt.check = true;
  const auto grid = QuadratureGrid::uniform_box(1, 1.0, 0.5);
  // Smooth input: the check passes quietly.
  CHECK_NOTHROW(heat_H_of(TestFunction(tf::Gaussian{{0.0}, 1.0}), 0.5, grid, opt));
}
