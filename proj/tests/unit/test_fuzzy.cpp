#include "doctest.h"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "phctl/errors.hpp"
#include "phctl/fuzzy.hpp"

using namespace phctl::fuzzy;
using MF = MembershipFunction;
using Rules = std::vector<std::pair<std::string, std::string>>;

namespace {

const FuzzyController &standard() {
  static const FuzzyController c = FuzzyController::standard();
  return c;
}

std::size_t index_of(const std::vector<LinguisticSet> &sets, const std::string &label) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].label == label) return i;
  }
  throw std::out_of_range(label);
}

// Centroid of the trapezoid (a, b, c, d) from its three pieces: rising
// triangle, plateau rectangle, falling triangle.
double trapezoid_centroid(double a, double b, double c, double d) {
  const double a1 = 0.5 * (b - a), x1 = a + 2.0 * (b - a) / 3.0;
  const double a2 = c - b, x2 = 0.5 * (b + c);
  const double a3 = 0.5 * (d - c), x3 = c + (d - c) / 3.0;
  return (a1 * x1 + a2 * x2 + a3 * x3) / (a1 + a2 + a3);
}

Aggregate single(const MF &mf, double degree) {
  return Aggregate({{degree, mf}}, FuzzyController::kOutputLo, FuzzyController::kOutputHi);
}

} // namespace

TEST_CASE("membership functions") {
  const auto z = MF::triangle(-0.5, 0.0, 0.5);
  CHECK(z(0.0) == 1.0);
  CHECK(z(0.25) == doctest::Approx(0.5));
  CHECK(z(-0.5) == 0.0);
  CHECK(z(0.6) == 0.0);
  const auto nxl = MF::trapezoid(-5.0, -5.0, -4.0, -2.0);
  CHECK(nxl(-3.0) == doctest::Approx(0.5));
  CHECK(nxl(-5.0) == 1.0);
  CHECK(nxl(-4.5) == 1.0);
  CHECK(membership(nxl, -1.0) == 0.0);
  CHECK(z.breakpoints().size() == 3);
  CHECK(nxl.breakpoints().size() == 4);
  CHECK_THROWS_AS(MF::triangle(1.0, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(MF::trapezoid(0.0, 2.0, 1.0, 3.0), std::invalid_argument);
}

TEST_CASE("fuzzification of the standard input table") {
  const auto &c = standard();
  const auto &in = c.inputs();
  REQUIRE(in.size() == 9);

  SUBCASE("zero error") {
    const auto d = c.fuzzify(0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(d[i] == (in[i].label == "Z" ? 1.0 : 0.0));
    }
  }
  SUBCASE("minus two") {
    const auto d = c.fuzzify(-2.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(d[i] == (in[i].label == "NL" ? 1.0 : 0.0));
    }
  }
  SUBCASE("clamped below the universe") {
    const auto d = c.fuzzify(-7.0);
    CHECK(d[index_of(in, "NXL")] == 1.0);
  }
  SUBCASE("coverage over the whole universe") {
    for (int i = -500; i <= 500; ++i) {
      const auto d = c.fuzzify(i / 100.0);
      CHECK(*std::max_element(d.begin(), d.end()) >= 0.25);
    }
  }
}

TEST_CASE("inference") {
  const auto &c = standard();
  const auto &in = c.inputs();
  const auto &out = c.outputs();

  SUBCASE("single full rule reproduces its consequent") {
    std::vector<double> d(9, 0.0);
    d[index_of(in, "Z")] = 1.0;
    const auto agg = c.infer(d);
    const auto &oz = out[index_of(out, "OZ")].mf;
    for (int i = -1000; i <= 1000; ++i) {
      const double x = i / 10.0;
      CHECK(agg(x) == oz(x));
    }
  }
  SUBCASE("max of clipped consequents") {
    std::vector<double> d(9, 0.0);
    d[index_of(in, "Z")] = 0.5;
    d[index_of(in, "PS")] = 0.5;
    const auto agg = c.infer(d);
    const auto &oz = out[index_of(out, "OZ")].mf;
    const auto &ops = out[index_of(out, "OPS")].mf;
    for (int i = -1000; i <= 1000; ++i) {
      const double x = i / 10.0;
      CHECK(agg(x) == std::max(std::min(0.5, oz(x)), std::min(0.5, ops(x))));
    }
  }
  SUBCASE("error of minus two fires only the large negative consequent") {
    const auto agg = c.infer(c.fuzzify(-2.0));
    const auto &onl = out[index_of(out, "ONL")].mf;
    for (int i = -1000; i <= 1000; ++i) {
      CHECK(agg(i / 10.0) == onl(i / 10.0));
    }
  }
  CHECK_THROWS(c.infer(std::vector<double>(8, 0.0)));
}

TEST_CASE("centroid defuzzification") {
  const auto &out = standard().outputs();
  CHECK(std::abs(defuzzify(single(out[index_of(out, "OZ")].mf, 1.0))) <= 1e-9);
  CHECK(defuzzify(single(out[index_of(out, "ONL")].mf, 1.0)) ==
        doctest::Approx(-40.0).epsilon(0.05 / 40.0));
  const double opxl = trapezoid_centroid(45.0, 60.0, 100.0, 100.0);
  CHECK(opxl == doctest::Approx(76.0526).epsilon(1e-5));
  CHECK(std::abs(defuzzify(single(out[index_of(out, "OPXL")].mf, 1.0)) - opxl) <= 0.05);
  CHECK(std::abs(defuzzify(single(out[index_of(out, "ONXL")].mf, 1.0)) + opxl) <= 0.05);
  CHECK_THROWS_AS(defuzzify(single(out[0].mf, 0.0)), phctl::EmptyAggregate);
}

TEST_CASE("crisp control surface") {
  const auto &c = standard();
  CHECK(std::abs(c.output(0.0)) <= 0.05);
  CHECK(std::abs(c.output(-2.0) + 40.0) <= 0.5);
  CHECK(std::abs(c.output(2.0) - 40.0) <= 0.5);

  const double bound = trapezoid_centroid(45.0, 60.0, 100.0, 100.0) + 0.05;
  double prev = -1e9;
  for (int i = -500; i <= 500; ++i) {
    const double e = i / 100.0;
    const double u = c.output(e);
    CHECK(u >= prev - 1e-9);
    CHECK(std::abs(u) <= bound);
    CHECK(std::abs(u + c.output(-e)) <= 2.0 * c.resolution());
    prev = u;
  }
  CHECK(c.output(50.0) == c.output(5.0));
}

TEST_CASE("rule base and controller validation") {
  const auto &c = standard();
  CHECK(c.rules().size() == 9);
  CHECK_THROWS_AS(RuleBase({{"A", "X"}, {"A", "Y"}}), std::invalid_argument);
  CHECK_THROWS_AS(RuleBase({{"A", "X"}, {"B", "X"}}), std::invalid_argument);

  SUBCASE("gap in the input universe") {
    std::vector<LinguisticSet> in = {{"N", MF::trapezoid(-5, -5, -3, -1)},
                                     {"P", MF::trapezoid(1, 3, 5, 5)}};
    std::vector<LinguisticSet> out = {{"ON", MF::trapezoid(-100, -100, -50, 10)},
                                      {"OP", MF::trapezoid(-10, 50, 100, 100)}};
    CHECK_THROWS_AS(FuzzyController(in, out, RuleBase({{"N", "ON"}, {"P", "OP"}})),
                    std::invalid_argument);
  }
  SUBCASE("rule naming an unknown label") {
    std::vector<LinguisticSet> in = {{"N", MF::trapezoid(-5, -5, -1, 1)},
                                     {"P", MF::trapezoid(-1, 1, 5, 5)}};
    std::vector<LinguisticSet> out = {{"ON", MF::trapezoid(-100, -100, -50, 10)},
                                      {"OP", MF::trapezoid(-10, 50, 100, 100)}};
    CHECK_NOTHROW(FuzzyController(in, out, RuleBase({{"N", "ON"}, {"P", "OP"}})));
    CHECK_THROWS_AS(FuzzyController(in, out, RuleBase({{"N", "ON"}, {"Q", "OP"}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(FuzzyController(in, out, RuleBase(Rules{{"N", "ON"}})),
                    std::invalid_argument);
  }
}

TEST_CASE("JSON override") {
  const auto &c = standard();
  const auto j = controller_to_json(c);
  const auto back = controller_from_json(j);
  CHECK(back.inputs() == c.inputs());
  CHECK(back.outputs() == c.outputs());
  CHECK(back.rules().rules() == c.rules().rules());
  CHECK(back.output(1.3) == c.output(1.3));

  SUBCASE("bad shape") {
    auto bad = j;
    bad["inputs"][0]["shape"] = "gaussian";
    CHECK_THROWS(controller_from_json(bad));
  }
  SUBCASE("wrong number of breakpoints") {
    auto bad = j;
    bad["inputs"][1]["points"] = {-3.0, -2.0};
    CHECK_THROWS(controller_from_json(bad));
  }
  SUBCASE("duplicated consequent") {
    auto bad = j;
    bad["rules"][0][1] = bad["rules"][1][1];
    CHECK_THROWS(controller_from_json(bad));
  }
  SUBCASE("coverage hole") {
    auto bad = j;
    bad["inputs"][index_of(c.inputs(), "Z")]["points"] = {-0.1, 0.0, 0.1};
    bad["inputs"][index_of(c.inputs(), "NS")]["points"] = {-1.0, -0.5, -0.3};
    bad["inputs"][index_of(c.inputs(), "PS")]["points"] = {0.3, 0.5, 1.0};
    CHECK_THROWS(controller_from_json(bad));
  }
}
