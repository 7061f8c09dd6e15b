#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "csrkn/serialize.hpp"
#include "support.hpp"

using namespace csrkn;
using namespace csrkn::testing;

namespace {

bool identical(const RknTableau<double>& x, const RknTableau<double>& y) {
  return x.c == y.c && x.a_bar == y.a_bar && x.b_bar == y.b_bar && x.b == y.b;
}

std::string temp_path(const std::string& name) { return "csrkn_test_" + name; }

}  // namespace

TEST_CASE("Stormer-Verlet round trip") {
  const auto text = serialize(verlet());
  const auto doc = deserialize_tableau(text);
  CHECK(identical(doc.tableau, verlet()));
  const auto j = Json::parse(text);
  CHECK(j["format"] == kTableauFormat);
  CHECK(j["r"] == 2);
}

TEST_CASE("round trip is bit exact for arbitrary doubles") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 1 + static_cast<int>(rng() % 5);
    RknTableau<double> t;
    t.c = Eigen::VectorXd::Random(r);
    t.a_bar = Eigen::MatrixXd::Random(r, r) * std::pow(10.0, static_cast<double>(rng() % 40) - 20);
    t.b_bar = Eigen::VectorXd::Random(r);
    t.b = Eigen::VectorXd::Random(r);
    t.b(0) = std::numeric_limits<double>::denorm_min();
    CHECK(identical(deserialize_tableau(serialize(t)).tableau, t));
    CHECK(identical(deserialize_tableau(serialize(t, {}, true)).tableau, t));
  }
}

TEST_CASE("meta round trip") {
  TableauMeta meta;
  meta.source_family_order = 4;
  meta.params = ParameterMap{{"a", 0.25}, {"b", -1.0}};
  meta.quadrature = "gauss:2";
  const auto doc = deserialize_tableau(serialize(family_tableau(4, "gauss:2", 0.25, -1.0), meta));
  REQUIRE(doc.meta.source_family_order);
  CHECK(*doc.meta.source_family_order == 4);
  CHECK(doc.meta.params->at("a") == 0.25);
  CHECK(*doc.meta.quadrature == "gauss:2");
  CHECK_FALSE(deserialize_tableau(serialize(verlet())).meta.quadrature);
}

TEST_CASE("missing b is a parse error naming b") {
  auto j = Json::parse(serialize(verlet()));
  j.erase("b");
  try {
    tableau_from_json(j);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.path() == "b");
  }
}

TEST_CASE("malformed fields report their path") {
  auto j = Json::parse(serialize(verlet()));
  j["a_bar"][1][0] = "half";
  try {
    tableau_from_json(j);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.path() == "a_bar[1][0]");
  }
  CHECK_THROWS_AS(deserialize_tableau("{not json"), ParseError);
  auto k = Json::parse(serialize(verlet()));
  k["format"] = "something-else";
  CHECK_THROWS_AS(tableau_from_json(k), ParseError);
}

TEST_CASE("stage count mismatch is a validation error") {
  auto j = Json::parse(serialize(verlet()));
  j["c"] = {0.0, 0.5, 1.0};
  CHECK_THROWS_AS(tableau_from_json(j), ValidationError);
  auto k = Json::parse(serialize(verlet()));
  k["r"] = 3;
  CHECK_THROWS_AS(tableau_from_json(k), ValidationError);
}

TEST_CASE("parametric round trip") {
  const auto pt = discretize_parametric(2, make_rule("radau-left:2"));
  const auto text = serialize(pt);
  const auto j = Json::parse(text);
  CHECK(is_parametric_document(j));
  CHECK_FALSE(is_parametric_document(Json::parse(serialize(verlet()))));
  CHECK(j["a_bar"][0][0].contains("const"));
  CHECK(j["a_bar"][0][0]["lin"].contains("c"));

  const auto back = deserialize_parametric(text);
  CHECK(back.parameters == pt.parameters);
  const Eigen::Vector3d theta(0.3, -0.2, 0.9);
  CHECK(identical(back.evaluate(theta), pt.evaluate(theta)));
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
  CHECK_THROWS_AS(format_double(std::numeric_limits<double>::infinity()), ValidationError);
  CHECK_THROWS_AS(format_double(std::nan("")), ValidationError);
}

TEST_CASE("output is deterministic") {
  const auto t = family_tableau(5, "lobatto:4", 0.1, 0.2);
  CHECK(serialize(t) == serialize(t));
  CHECK(serialize(t, {}, true) == serialize(t, {}, true));
  CHECK(dump_json(Json{{"b", 1}, {"a", {1, 2}}}) == dump_json(Json{{"b", 1}, {"a", {1, 2}}}));
}

TEST_CASE("file helpers") {
  const auto path = temp_path("verlet.json");
  write_text_file(path, serialize(verlet()));
  CHECK(identical(load_tableau(path).tableau, verlet()));
  std::remove(path.c_str());

  try {
    load_tableau("does/not/exist.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("does/not/exist.json") != std::string::npos);
  }

  const auto bad = temp_path("bad.json");
  auto j = Json::parse(serialize(verlet()));
  j.erase("c");
  write_text_file(bad, j.dump());
  try {
    load_tableau(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(bad) != std::string::npos);
    CHECK(std::string(e.what()).find("c") != std::string::npos);
  }
  std::remove(bad.c_str());
}

TEST_CASE("trajectory CSV") {
  const auto pb = harmonic_oscillator();
  const auto traj = integrate(verlet(), pb.ivp, 0.1, 3);
  const auto csv = trajectory_csv(traj);
  CHECK(csv.rfind("t,q1,p1,H\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  auto no_energy = pb.ivp;
  no_energy.potential = nullptr;
  const auto plain = trajectory_csv(integrate(verlet(), no_energy, 0.1, 2));
  CHECK(plain.rfind("t,q1,p1\n", 0) == 0);

  const auto two = trajectory_csv(integrate(verlet(), kepler(0.3).ivp, 0.01, 1));
  CHECK(two.rfind("t,q1,q2,p1,p2,H\n", 0) == 0);
}
