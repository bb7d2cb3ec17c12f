#include <catch2/catch_amalgamated.hpp>

#include "hermfrac/fractional.hpp"
#include "oracles.hpp"

using namespace hermfrac;

namespace {

SemigroupSampler sampler_for(const TestFunction& f,
                             std::vector<std::vector<double>> pts, double t = 0.0) {
  return SemigroupSampler{build_heat_tab(SpacetimeFunction::from_test(f), t, std::move(pts), {})};
}

}  // namespace

TEST_CASE("gamma constants") {
  // beta = 1/2: C = Gamma(1/2) = sqrt(pi), c = Gamma(-1/2) = -2 sqrt(pi).
  const auto g = gamma_consts(0.5);
  CHECK(g.m == 1);
  CHECK(g.C == Catch::Approx(std::sqrt(kPi)).epsilon(1e-14));
  CHECK(g.c == Catch::Approx(-2.0 * std::sqrt(kPi)).epsilon(1e-14));

  // Closed form against the defining integral, one beta per difference order.
  for (double beta : {0.25, 0.75, 1.3, 2.4}) {
    const auto gc = gamma_consts(beta);
    CHECK(gc.m == static_cast<int>(std::floor(beta)) + 1);
    const double ref = static_cast<double>(oracle::gamma_c_integral(beta, gc.m));
    CHECK(gc.c == Catch::Approx(ref).epsilon(1e-8));
  }

  // sign(c_beta) = (-1)^{[beta] + 1}.
  for (double beta : {0.3, 0.5, 0.9, 1.2, 1.5, 1.9, 2.2, 2.7}) {
    const double expect = (static_cast<int>(std::floor(beta)) % 2 == 0) ? -1.0 : 1.0;
    CHECK(gamma_consts(beta).c * expect > 0.0);
  }

  // Integer limit used internally by the positive powers: c_1 = 2 ln 2.
  CHECK(detail::c_beta_continued(1.0) == Catch::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(gamma_consts(1.0), DomainError);
  CHECK_THROWS_AS(gamma_consts(2.0), DomainError);
  CHECK_THROWS_AS(gamma_consts(0.0), DomainError);
  CHECK_THROWS_AS(gamma_consts(-0.5), DomainError);
}

TEST_CASE("negative powers act as lambda^{-beta} on eigenfunctions") {
  const std::vector<std::vector<double>> pts{{0.0}, {0.4}, {1.1}};
  const auto s = sampler_for(TestFunction(tf::HermiteMode{MultiIndex{{3}}}), pts);
  for (double beta : {0.25, 0.5, 0.75, 1.3}) {
    const auto out = frac_negative(beta, s);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const cplx expect = std::pow(7.0, -beta) * eval_hermite(3, pts[i][0]);
      CHECK(std::abs(out[i] - expect) <= 1e-6);
    }
  }

  CHECK_THROWS_AS(frac_negative(0.0, s), DomainError);
  CHECK_THROWS_AS(frac_negative(-1.0, s), DomainError);
}

TEST_CASE("negative powers on oscillating modes: principal branch") {
  const double rho = 4.0, t = 0.3;
  const std::vector<std::vector<double>> pts{{0.0}, {0.7}};
  const auto s = sampler_for(TestFunction(tf::EigenMode{rho, MultiIndex{{1}}}), pts, t);
  const cplx lam = oracle::eigenvalue(rho, 1, 1);
  for (double beta : {0.5, 0.75}) {
    const auto out = frac_negative(beta, s);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const cplx expect = std::pow(lam, -beta) * std::exp(cplx{0.0, rho * t}) *
                          eval_hermite(1, pts[i][0]);
      CHECK(std::abs(out[i] - expect) <= 1e-5);
    }
  }
}

TEST_CASE("positive powers act as lambda^{beta} on eigenfunctions") {
  const std::vector<std::vector<double>> pts{{0.0}, {0.4}, {1.1}};
  const auto s = sampler_for(TestFunction(tf::HermiteMode{MultiIndex{{2}}}), pts);
  for (double beta : {0.25, 0.5, 0.75, 1.3}) {
    const auto out = frac_positive(beta, s);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const cplx expect = std::pow(5.0, beta) * eval_hermite(2, pts[i][0]);
      CHECK(std::abs(out[i] - expect) <= 1e-5);
    }
  }

  // Oscillating mode, principal branch of lambda^beta.
  const double rho = 4.0, t = 0.3;
  const auto se = sampler_for(TestFunction(tf::EigenMode{rho, MultiIndex{{1}}}), pts, t);
  const cplx lam = oracle::eigenvalue(rho, 1, 1);
  const auto out = frac_positive(0.75, se);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const cplx expect = std::pow(lam, 0.75) * std::exp(cplx{0.0, rho * t}) *
                        eval_hermite(1, pts[i][0]);
    CHECK(std::abs(out[i] - expect) <= 1e-4);
  }

  CHECK_THROWS_AS(frac_positive(0.0, s), DomainError);
}

TEST_CASE("positive powers reject inputs rougher than the order") {
  // |x|^{0.3} bump has Hoelder class 0.3 < 2 beta = 1: the defining integral
  // diverges near nu = 0 and the head fit's roughness gate must fire.
  const auto s = sampler_for(TestFunction(tf::AbsPowerBump{0.3, {0.0}}), {{0.0}, {0.5}});
  CHECK_THROWS_AS(frac_positive(0.5, s), NumericsError);
}

TEST_CASE("positive then negative power is the identity") {
  const auto sf = SpacetimeFunction::from_test(TestFunction(tf::HermiteMode{MultiIndex{{2}}}));
  const double beta = 0.4;
  const auto ggrid = QuadratureGrid::gauss_hermite(1, 64);
  const auto inner = frac_positive(beta, sf, 0.0, ggrid);
  const auto lifted = SpacetimeFunction::tabulated({0.0}, {inner}, 16, true);
  const auto grid = QuadratureGrid::uniform_box(1, 1.0, 0.5);
  const auto back = frac_negative(beta, lifted, 0.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(back.values[i] - eval_hermite(2, grid.point(i)[0])) <= 1e-4);
}

TEST_CASE("fractional powers are linear") {
  const std::vector<std::vector<double>> pts{{0.0}, {0.4}, {1.1}};
  const auto s1 = sampler_for(TestFunction(tf::HermiteMode{MultiIndex{{1}}}), pts);
  const auto s4 = sampler_for(TestFunction(tf::HermiteMode{MultiIndex{{4}}}), pts);
  const auto ssum = sampler_for(
      TestFunction(tf::Sum{{TestFunction(tf::HermiteMode{MultiIndex{{1}}}),
                            TestFunction(tf::HermiteMode{MultiIndex{{4}}})}}),
      pts);
  const double beta = 0.6;
  const auto a = frac_negative(beta, s1);
  const auto b = frac_negative(beta, s4);
  const auto c = frac_negative(beta, ssum);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(c[i] - a[i] - b[i]) <= 1e-6);

  const auto ap = frac_positive(beta, s1);
  const auto bp = frac_positive(beta, s4);
  const auto cp = frac_positive(beta, ssum);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(cp[i] - ap[i] - bp[i]) <= 1e-6);
}

TEST_CASE("positive power of a bounded smooth input stays bounded") {
  // Not an identity check: just that the operator maps a generic bounded
  // Gaussian to finite values of moderate size.
  std::vector<std::vector<double>> pts;
  for (double x = -3.0; x <= 3.0; x += 0.5) pts.push_back({x});
  const auto s = sampler_for(TestFunction(tf::Gaussian{{0.3}, 1.0}), pts);
  const auto out = frac_positive(0.4, s);
  double sup = 0.0;
  for (const auto& v : out) {
    REQUIRE(std::isfinite(v.real()));
    REQUIRE(std::isfinite(v.imag()));
    sup = std::max(sup, std::abs(v));
  }
  INFO("sup |L^0.4 gaussian| = " << sup);
  CHECK(sup <= 50.0);
}

TEST_CASE("Laplace transform multipliers") {
  const auto grid = QuadratureGrid::uniform_box(1, 1.0, 0.5);
  const auto h0 = SpacetimeFunction::from_test(TestFunction(tf::HermiteMode{MultiIndex{{0}}}));
  const auto h2 = SpacetimeFunction::from_test(TestFunction(tf::HermiteMode{MultiIndex{{2}}}));

  // a = 1: m(lambda) = 1, the identity.
  const auto id = laplace_multiplier(laplace_symbol("one"), h0, 0.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(id.values[i] - eval_hermite(0, grid.point(i)[0])) <= 1e-5);

  // a = e^{-s}: m(lambda) = sqrt(lambda) / (1 + sqrt(lambda)).
  const auto ed = laplace_multiplier(laplace_symbol("exp-decay"), h2, 0.0, grid);
  const double m5 = std::sqrt(5.0) / (1.0 + std::sqrt(5.0));
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(ed.values[i] - m5 * eval_hermite(2, grid.point(i)[0])) <= 1e-5);

  // a = chi_{[0,1]}: m(lambda) = 1 - e^{-sqrt(lambda)}.
  const auto b0 = laplace_multiplier(laplace_symbol("box"), h0, 0.0, grid);
  const auto b2 = laplace_multiplier(laplace_symbol("box"), h2, 0.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i)[0];
    CHECK(std::abs(b0.values[i] - (1.0 - std::exp(-1.0)) * eval_hermite(0, x)) <= 1e-5);
    CHECK(std::abs(b2.values[i] - (1.0 - std::exp(-std::sqrt(5.0))) * eval_hermite(2, x)) <= 1e-5);
  }

  CHECK_THROWS_AS(laplace_symbol("no-such-symbol"), ParseError);
}

TEST_CASE("spectral Riesz transforms on single modes") {
  SpectralCoeffs c;
  c.dim = 1;
  c.trunc = 4;
  c.entries[MultiIndex{{3}}] = cplx{1.0, 0.0};

  // A_1 H^{-1/2} h_3 = sqrt(6) / sqrt(7) h_2 (power first, the default).
  const auto r = riesz_transform({1}, c);
  CHECK(std::abs(r.at(MultiIndex{{2}}) - std::sqrt(6.0 / 7.0)) <= 1e-14);

  // Swapped order lands on the lowered mode's eigenvalue instead.
  RieszOptions lf;
  lf.ladder_first = true;
  const auto r2 = riesz_transform({1}, c, lf);
  CHECK(std::abs(r2.at(MultiIndex{{2}}) - std::sqrt(6.0 / 5.0)) <= 1e-14);

  // Raising direction: A_{-1} H^{-1/2} h_0 = sqrt(2) h_1.
  SpectralCoeffs c0;
  c0.dim = 1;
  c0.entries[MultiIndex{{0}}] = cplx{1.0, 0.0};
  const auto r3 = riesz_transform({-1}, c0);
  CHECK(std::abs(r3.at(MultiIndex{{1}}) - std::sqrt(2.0)) <= 1e-14);

  // Second order: A_1 A_1 H^{-1} h_4 = sqrt(8) sqrt(6) / 9 h_2.
  SpectralCoeffs c4;
  c4.dim = 1;
  c4.trunc = 4;
  c4.entries[MultiIndex{{4}}] = cplx{1.0, 0.0};
  const auto r4 = riesz_transform({1, 1}, c4);
  CHECK(std::abs(r4.at(MultiIndex{{2}}) - std::sqrt(48.0) / 9.0) <= 1e-14);

  CHECK_THROWS_AS(riesz_transform({}, c), DomainError);
  CHECK_THROWS_AS(riesz_transform({2}, c), DomainError);
  CHECK_THROWS_AS(riesz_transform({0}, c), DomainError);
}

TEST_CASE("grid-level Riesz transform") {
  const auto grid = QuadratureGrid::uniform_box(1, 1.0, 0.5);

  // Spatial path goes through analysis; h_0 raised is sqrt(2) h_1.
  const auto h0 = SpacetimeFunction::from_test(TestFunction(tf::HermiteMode{MultiIndex{{0}}}));
  const auto g = riesz_transform({-1}, h0, 0.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(g.values[i] - std::sqrt(2.0) * eval_hermite(1, grid.point(i)[0])) <= 1e-6);

  // Spacetime path: d_t L^{-1} picks up i rho / (i rho + lambda_H).
  const double rho = 1.0, t = 0.2;
  const auto em = SpacetimeFunction::from_test(TestFunction(tf::EigenMode{rho, MultiIndex{{1}}}));
  const auto r = riesz_transform({1}, em, t, grid);
  const cplx fac = cplx{0.0, rho} / oracle::eigenvalue(rho, 1, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx expect =
        fac * std::exp(cplx{0.0, rho * t}) * eval_hermite(1, grid.point(i)[0]);
    CHECK(std::abs(r.values[i] - expect) <= 1e-5);
  }

  CHECK_THROWS_AS(riesz_transform({}, h0, 0.0, grid), DomainError);
}
