#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "hermfrac/io.hpp"

using namespace hermfrac;

TEST_CASE("config hashing") {
  // FNV-1a reference values.
  CHECK(fnv1a(std::string("")) == 14695981039346656037ull);
  CHECK(fnv1a(std::string("a")) == 12638187200555641996ull);
  CHECK(fnv1a(std::string("config-a")) != fnv1a(std::string("config-b")));
  CHECK(detail::hash_comment("") == "# config_hash=cbf29ce484222325");
}

TEST_CASE("shortest round-trip decimal formatting") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-17, -0.0, 1234567.0, 6.02e23, 5e-324}) {
    const std::string s = detail::fmt(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
    // Deterministic: same double, same text.
    CHECK(detail::fmt(v) == s);
  }
  CHECK(detail::fmt(0.5) == "0.5");
  CHECK(detail::fmt(-2.0) == "-2");
}

TEST_CASE("spectral coefficients round-trip through JSON") {
  SpectralCoeffs c;
  c.dim = 2;
  c.trunc = 5;
  c.entries[MultiIndex{{2, 1}}] = cplx{0.5, -1.25};
  c.entries[MultiIndex{{0, 0}}] = cplx{1.0 / 3.0, 0.0};

  const auto j = to_json(c);
  const auto back = coeffs_from_json(j);
  CHECK(back.dim == 2);
  CHECK(back.trunc == 5);
  REQUIRE(back.entries.size() == 2);
  CHECK(back.at(MultiIndex{{2, 1}}) == c.at(MultiIndex{{2, 1}}));
  CHECK(back.at(MultiIndex{{0, 0}}) == c.at(MultiIndex{{0, 0}}));

  // Text round trip preserves every bit as well.
  const auto back2 = coeffs_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back2.at(MultiIndex{{2, 1}}) == c.at(MultiIndex{{2, 1}}));
}

TEST_CASE("malformed JSON is refused") {
  CHECK_THROWS_AS(coeffs_from_json(nlohmann::json::object()), ParseError);
  CHECK_THROWS_AS(coeffs_from_json({{"n", 1}, {"N", 2}}), ParseError);
  // mu dimension disagrees with n.
  nlohmann::json bad = {{"n", 1},
                        {"N", 2},
                        {"entries", {{{"mu", {1, 2}}, {"re", 0.0}, {"im", 0.0}}}}};
  CHECK_THROWS_AS(coeffs_from_json(bad), ParseError);
  // entry missing a field.
  nlohmann::json missing = {{"n", 1}, {"N", 2}, {"entries", {{{"mu", {1}}, {"re", 0.0}}}}};
  CHECK_THROWS_AS(coeffs_from_json(missing), ParseError);
}

TEST_CASE("grid CSV layout") {
  const auto g = QuadratureGrid::uniform_box(1, 1.0, 1.0);
  std::ostringstream os;
  write_grid_csv(os, g, {cplx{0.1, 0.0}, cplx{0.2, -0.5}, cplx{1.0 / 3.0, 0.0}}, "cfg");
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == detail::hash_comment("cfg"));
  std::getline(in, line);
  CHECK(line == "x1,re,im");
  std::getline(in, line);
  CHECK(line == "-1,0.1,0");
  std::getline(in, line);
  CHECK(line == "0,0.2,-0.5");
  std::getline(in, line);
  CHECK(line == "1,0.3333333333333333,0");

  CHECK_THROWS_AS(write_grid_csv(os, g, {cplx{0.0, 0.0}}, "cfg"), DimensionError);

  // Byte-identical on rerun.
  std::ostringstream os2;
  write_grid_csv(os2, g, {cplx{0.1, 0.0}, cplx{0.2, -0.5}, cplx{1.0 / 3.0, 0.0}}, "cfg");
  CHECK(os.str().substr(0, os2.str().size()) == os2.str());
}

TEST_CASE("curve CSV and report JSON") {
  std::ostringstream os;
  write_curve_csv(os, {{1e-3, 2.0}, {1e-2, 0.5}}, "run");
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# config_hash=", 0) == 0);
  std::getline(in, line);
  CHECK(line == "y,norm");
  std::getline(in, line);
  CHECK(line == "0.001,2");

  SeminormReport r;
  r.alpha = 0.5;
  r.alpha_hat = 0.48;
  r.residual = 0.01;
  r.K = 2.5;
  r.k = 1;
  r.samples = {{1e-3, 2.0}};
  const auto j = to_json(r);
  CHECK(j.at("alpha").get<double>() == 0.5);
  CHECK(j.at("seminorm").get<double>() == 2.5);
  CHECK(j.at("order").get<int>() == 1);
  CHECK(j.at("samples").size() == 1);
}

TEST_CASE("outcome tables") {
  VerificationOutcome o;
  o.theorem = "schauder-gain";
  o.input = "alpha_in=0.5;beta=0.25";
  o.measured = {{"class_out", 1.5}, {"target", 1.0}};
  o.tolerance = 0.2;
  o.pass = true;

  std::ostringstream csv;
  write_outcome_table(csv, {o}, "cfg");
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# config_hash=", 0) == 0);
  std::getline(in, line);
  CHECK(line == "theorem,input,pass,measured");
  std::getline(in, line);
  CHECK(line == "schauder-gain,alpha_in=0.5;beta=0.25,pass,class_out=1.5;target=1");

  std::ostringstream md;
  write_outcome_table(md, {o}, "cfg", true);
  CHECK(md.str().find("| schauder-gain | ") != std::string::npos);
  CHECK(md.str().find("|---|") != std::string::npos);
  CHECK(md.str().find("config_hash") == std::string::npos);

  const auto j = to_json(o);
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("measured").at("class_out").get<double>() == 1.5);
}

TEST_CASE("file writing") {
  CHECK_THROWS_AS(write_file("/no/such/dir/out.csv", "x"), RangeError);
  const std::string path = "/tmp/hermfrac_io_test.txt";
  write_file(path, "body\n");
  std::ifstream in(path);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(s == "body\n");
  std::remove(path.c_str());
}
