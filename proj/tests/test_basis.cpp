#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hermfrac/basis.hpp"
#include "hermfrac/test_functions.hpp"
#include "oracles.hpp"

using namespace hermfrac;

TEST_CASE("eval_hermite closed forms") {
  CHECK(eval_hermite(0, 0.0) == Catch::Approx(std::pow(kPi, -0.25)).epsilon(1e-14));
  CHECK(eval_hermite(1, 0.0) == Catch::Approx(0.0).margin(1e-15));
  const double ref = static_cast<double>(oracle::hermite(10, 1.3L));
  CHECK(eval_hermite(10, 1.3) == Catch::Approx(ref).epsilon(1e-12));
}

TEST_CASE("eval_hermite recurrence stability against extended precision") {
  for (int k : {5, 20, 50, 100}) {
    for (double x : {-10.0, -3.7, -0.5, 0.0, 1.3, 6.2, 10.0}) {
      const double ref = static_cast<double>(oracle::hermite(k, static_cast<long double>(x)));
      if (std::abs(ref) < 1e-300) continue;
      CHECK(eval_hermite(k, x) == Catch::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("eval_hermite_multi factorization and errors") {
  CHECK(eval_hermite_multi(MultiIndex{{0, 0}}, {0.0, 0.0}) ==
        Catch::Approx(std::pow(kPi, -0.5)).epsilon(1e-14));
  CHECK(eval_hermite_multi(MultiIndex{{1, 0}}, {0.0, 5.0}) == Catch::Approx(0.0).margin(1e-15));
  CHECK(eval_hermite_multi(MultiIndex{{2, 3}}, {0.7, -1.1}) ==
        Catch::Approx(eval_hermite(2, 0.7) * eval_hermite(3, -1.1)).epsilon(1e-14));
  CHECK_THROWS_AS(eval_hermite_multi(MultiIndex{{1, 2}}, {0.0}), DimensionError);
}

TEST_CASE("gauss_hermite rule basics") {
  const auto& r2 = gauss_hermite_rule(2);
  REQUIRE(r2.nodes.size() == 2);
  CHECK(std::abs(r2.nodes[0]) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(r2.weights[0] == Catch::Approx(std::sqrt(kPi) / 2.0).epsilon(1e-13));

  // Moment integral x^4 e^{-x^2} = 3 sqrt(pi)/4 with N = 5.
  const auto& r5 = gauss_hermite_rule(5);
  double m4 = 0.0, modd = 0.0;
  for (std::size_t i = 0; i < r5.nodes.size(); ++i) {
    m4 += r5.weights[i] * std::pow(r5.nodes[i], 4);
    modd += r5.weights[i] * std::pow(r5.nodes[i], 3);
  }
  CHECK(m4 == Catch::Approx(0.75 * std::sqrt(kPi)).epsilon(1e-12));
  CHECK(modd == Catch::Approx(0.0).margin(1e-13));

  // Exactness on monomials up to degree 2N-1 for N = 6: x^(2j) integrates
  // to Gamma(j + 1/2).
  const auto& r6 = gauss_hermite_rule(6);
  for (int j = 0; j <= 5; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r6.nodes.size(); ++i)
      acc += r6.weights[i] * std::pow(r6.nodes[i], 2 * j);
    CHECK(acc == Catch::Approx(std::tgamma(j + 0.5)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(gauss_hermite_rule(1), DomainError);
  CHECK_THROWS_AS(gauss_hermite_rule(513), CapacityError);
}

TEST_CASE("analyze orthonormality") {
  // 1-D, all pairs |mu|, |nu| <= 12.
  const auto grid1 = QuadratureGrid::gauss_hermite(1, 64);
  for (int m = 0; m <= 12; ++m) {
    const TestFunction f(tf::HermiteMode{MultiIndex{{m}}});
    const auto c = analyze([&](const std::vector<double>& x) { return f(0.0, x); }, 1, 12);
    for (const auto& [nu, v] : c.entries) {
      const double expect = (nu.entries[0] == m) ? 1.0 : 0.0;
      CHECK(std::abs(v - expect) <= 1e-10);
    }
  }
  // 2-D spot checks.
  const TestFunction f2(tf::HermiteMode{MultiIndex{{3, 2}}});
  const auto c2 = analyze([&](const std::vector<double>& x) { return f2(0.0, x); }, 2, 8);
  for (const auto& [nu, v] : c2.entries) {
    const double expect = (nu == MultiIndex{{3, 2}}) ? 1.0 : 0.0;
    CHECK(std::abs(v - expect) <= 1e-10);
  }
}

TEST_CASE("analyze of x e^{-x^2/2} hits only mu=1") {
  // x e^{-x^2/2} = sqrt(pi^{1/2}/2) * h_1 exactly.
  GridFunction g{QuadratureGrid::gauss_hermite(1, 64)};
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    const double x = g.grid.point(i)[0];
    g.values[i] = x * std::exp(-0.5 * x * x);
  }
  const auto c = analyze(g, 6);
  // ghat(1) = sqrt(2) pi^{-1/4} int x^2 e^{-x^2} dx = pi^{1/4} / sqrt(2).
  const double expect = std::pow(kPi, 0.25) / std::sqrt(2.0);
  for (const auto& [mu, v] : c.entries) {
    if (mu.entries[0] == 1)
      CHECK(std::abs(v) == Catch::Approx(std::abs(expect)).epsilon(1e-10));
    else
      CHECK(std::abs(v) <= 1e-10);
  }
}

TEST_CASE("synthesize round trip and linearity") {
  const auto grid = QuadratureGrid::uniform_box(1, 2.0, 0.5);
  const TestFunction f(tf::HermiteMode{MultiIndex{{2}}});
  const auto c = analyze([&](const std::vector<double>& x) { return f(0.0, x); }, 1, 4);
  const auto g = synthesize(c, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(g.values[i] - eval_hermite(2, grid.point(i)[0])) <= 1e-10);

  SpectralCoeffs two;
  two.dim = 1;
  two.trunc = 4;
  two.entries[MultiIndex{{0}}] = 2.0;
  two.entries[MultiIndex{{3}}] = -0.5;
  const auto h = synthesize(two, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i)[0];
    CHECK(std::abs(h.values[i] - (2.0 * eval_hermite(0, x) - 0.5 * eval_hermite(3, x))) <= 1e-12);
  }

  // Zero function analyzes to zero.
  const auto z = analyze([](const std::vector<double>&) { return cplx{0.0, 0.0}; }, 1, 4);
  for (const auto& [mu, v] : z.entries) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("ladder operators") {
  SpectralCoeffs ground;
  ground.dim = 1;
  ground.trunc = 4;
  ground.entries[MultiIndex{{0}}] = 1.0;

  // Lowering the ground state annihilates it.
  const auto low = ladder(LadderDir::Lower, 0, ground);
  double norm = 0.0;
  for (const auto& [mu, v] : low.entries) norm += std::abs(v);
  CHECK(norm <= 1e-15);

  for (int k : {0, 1, 3, 7}) {
    SpectralCoeffs c;
    c.dim = 1;
    c.trunc = 8;
    c.entries[MultiIndex{{k}}] = 1.0;
    // raise then lower: A_1 A_{-1} = 2(k+1) on h_k.
    const auto rl = ladder(LadderDir::Lower, 0, ladder(LadderDir::Raise, 0, c));
    CHECK(std::abs(rl.entries.at(MultiIndex{{k}}) - cplx{2.0 * (k + 1), 0.0}) <= 1e-12);
    // (A_1 A_{-1} + A_{-1} A_1)/2 = H = 2k+1 on h_k.
    const auto lr = ladder(LadderDir::Raise, 0, ladder(LadderDir::Lower, 0, c));
    cplx h = 0.5 * rl.entries.at(MultiIndex{{k}});
    auto it = lr.entries.find(MultiIndex{{k}});
    if (it != lr.entries.end()) h += 0.5 * it->second;
    CHECK(std::abs(h - cplx{2.0 * k + 1.0, 0.0}) <= 1e-12);
  }
}

TEST_CASE("ladder matches finite-difference (-d/dx + x) on a dense grid") {
  SpectralCoeffs c;
  c.dim = 1;
  c.trunc = 6;
  c.entries[MultiIndex{{3}}] = 1.0;
  const auto raised = ladder(LadderDir::Raise, 0, c);
  const double h = 1e-5;
  for (double x : {-1.7, 0.2, 0.9, 2.4}) {
    const double fd =
        -(eval_hermite(3, x + h) - eval_hermite(3, x - h)) / (2.0 * h) + x * eval_hermite(3, x);
    cplx sp{0.0, 0.0};
    for (const auto& [mu, v] : raised.entries) sp += v * eval_hermite(mu.entries[0], x);
    CHECK(std::abs(sp - cplx{fd, 0.0}) <= 1e-8);
  }
}

TEST_CASE("Parseval on Gaussian test functions") {
  // g = e^{-x^2/2}: integral of g^2 is sqrt(pi); coefficients must recover it.
  const TestFunction g1(tf::Gaussian{{0.0}, 1.0});
  const auto c = analyze([&](const std::vector<double>& x) { return g1(0.0, x); }, 1, 16);
  double sum = 0.0;
  for (const auto& [mu, v] : c.entries) sum += std::norm(v);
  CHECK(sum == Catch::Approx(std::sqrt(kPi)).epsilon(1e-8));

  // Off-center Gaussian, same identity via direct quadrature of g^2.
  const TestFunction g2(tf::Gaussian{{0.7}, 1.0});
  const auto c2 = analyze([&](const std::vector<double>& x) { return g2(0.0, x); }, 1, 24);
  double sum2 = 0.0;
  for (const auto& [mu, v] : c2.entries) sum2 += std::norm(v);
  CHECK(sum2 == Catch::Approx(std::sqrt(kPi)).epsilon(1e-8));
}

TEST_CASE("dimension cap") {
  CHECK_THROWS_AS(TestFunction(tf::HermiteMode{MultiIndex{{1, 1, 1}}}), CapacityError);
}
