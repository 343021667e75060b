#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "phctl/chemistry.hpp"
#include "phctl/errors.hpp"

using namespace phctl::chemistry;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("constants and invariants reject invalid values") {
  CHECK_THROWS_AS(EquilibriumConstants(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(EquilibriumConstants(1.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(IonInvariants(-1e-9, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(IonInvariants(0.0, -1e-9), std::invalid_argument);
  CHECK_NOTHROW(IonInvariants(0.0, 0.0));
}

TEST_CASE("quartic coefficients for pure water") {
  const auto q = quartic_coeffs({0.0, 0.0});
  CHECK(rel(q.a1, 1.0e3) <= 1e-15);
  CHECK(rel(q.a2, 12.0 - 1e-14) <= 1e-15);
  CHECK(rel(q.a3, -1.0e-11) <= 1e-12);
  CHECK(rel(q.a4, -1.2e-13) <= 1e-12);
}

TEST_CASE("a4 does not depend on the invariants") {
  for (double a : {0.0, 0.01, 0.1}) {
    for (double b : {0.0, 0.03, 0.1}) {
      CHECK(rel(quartic_coeffs({a, b}).a4, -1.2e-13) <= 1e-12);
    }
  }
}

TEST_CASE("quartic coefficients match the expanded product") {
  for (auto [a, b] : std::vector<std::pair<double, double>>{
           {0.052, 0.052}, {0.026, 0.0}, {0.0, 0.04}, {0.1, 0.07}}) {
    long double ref[5];
    oracle::expanded_quartic(a, b, ref);
    const auto q = quartic_coeffs({a, b});
    CHECK(ref[4] == 1.0L);
    CHECK(rel(q.a1, static_cast<double>(ref[3])) <= 1e-12);
    CHECK(rel(q.a2, static_cast<double>(ref[2])) <= 1e-12);
    CHECK(rel(q.a3, static_cast<double>(ref[1])) <= 1e-12);
    CHECK(rel(q.a4, static_cast<double>(ref[0])) <= 1e-12);
  }
}

TEST_CASE("pure water is neutral") {
  CHECK(rel(hydrogen_ion({0.0, 0.0}), 1.0e-7) <= 1e-9);
  CHECK(std::abs(ph_of({0.0, 0.0}) - 7.0) <= 1e-6);
}

TEST_CASE("hydrogen ion agrees with the charge-balance oracle") {
  SUBCASE("strong diprotic acid") {
    CHECK(rel(hydrogen_ion({0.052, 0.0}), static_cast<double>(oracle::hydrogen(0.052, 0.0))) <=
          1e-9);
  }
  SUBCASE("equivalence point is close to but not exactly neutral") {
    const double h = hydrogen_ion({0.026, 0.052});
    CHECK(rel(h, static_cast<double>(oracle::hydrogen(0.026, 0.052))) <= 1e-9);
    CHECK(rel(h, 1.0e-7) > 1e-3);
    CHECK(std::abs(-std::log10(h) - 7.0) < 1.0);
  }
  SUBCASE("pH of the acid feed") {
    CHECK(std::abs(ph_of({0.052, 0.0}) - static_cast<double>(oracle::ph(0.052, 0.0))) < 1e-9);
  }
}

TEST_CASE("grid: oracle equivalence and a single sign change") {
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double a = 0.005 * i;
      const double b = 0.005 * j;
      const double h = hydrogen_ion({a, b});
      const double ref = static_cast<double>(oracle::hydrogen(a, b));
      CHECK(rel(h, ref) <= 1e-9);
      CHECK(quartic_sign_changes({a, b}, {}) == 1);
    }
  }
}

TEST_CASE("pH monotone in both invariants") {
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double a = 0.005 * i;
      const double b = 0.005 * j;
      CHECK(ph_of({a, b + 0.005}) > ph_of({a, b}) + 1e-10);
      CHECK(ph_of({b + 0.005, a}) < ph_of({b, a}) - 1e-10);
    }
  }
}

TEST_CASE("residual sign brackets the root") {
  CHECK(std::abs(charge_balance_residual({0.0, 0.0}, {}, 1e-7)) <= 1e-18);
  const IonInvariants inv{0.03, 0.02};
  const double h = hydrogen_ion(inv);
  CHECK(charge_balance_residual(inv, {}, h * 1.01) > 0.0);
  CHECK(charge_balance_residual(inv, {}, h * 0.99) < 0.0);
}

TEST_CASE("speciation closed forms") {
  SUBCASE("no sulfate") {
    const auto s = speciation({0.0, 0.01}, {}, 1e-9);
    CHECK(s.h2so4 == 0.0);
    CHECK(s.hso4 == 0.0);
    CHECK(s.so4 == 0.0);
    CHECK(s.na == 0.01);
  }
  SUBCASE("sulfate closure") {
    for (double a : {1e-6, 0.01, 0.052, 0.1}) {
      for (double h : {1e-14, 1e-9, 1e-7, 1e-4, 1e-2, 1.0}) {
        const auto s = speciation({a, 0.0}, {}, h);
        CHECK(rel(s.h2so4 + s.hso4 + s.so4, a) <= 1e-12);
      }
    }
  }
  SUBCASE("alpha = 0.052, h = 1e-2 against long-double closed forms") {
    const long double k1 = 1e3L, k2 = 1.2e-2L, h = 1e-2L, a = 0.052L;
    const long double hso4 = a * k1 * h / (h * h + k1 * h + k1 * k2);
    const auto s = speciation({0.052, 0.0}, {}, 1e-2);
    CHECK(rel(s.hso4, static_cast<double>(hso4)) <= 1e-13);
    CHECK(rel(s.h2so4, static_cast<double>(hso4 * h / k1)) <= 1e-13);
    CHECK(rel(s.so4, static_cast<double>(hso4 * k2 / h)) <= 1e-13);
    CHECK(rel(s.oh, 1e-12) <= 1e-13);
  }
}

TEST_CASE("analytic pH gradient matches finite differences") {
  for (auto [a, b] : std::vector<std::pair<double, double>>{
           {0.026, 0.01}, {0.026, 0.0515}, {0.026, 0.052}, {0.017, 0.0347}, {0.0, 0.01}}) {
    const auto g = ph_gradient({a, b});
    const double step = 1e-9;
    const double fa = (ph_of({a + step, b}) - ph_of({std::max(0.0, a - step), b})) /
                      (a + step - std::max(0.0, a - step));
    const double fb = (ph_of({a, b + step}) - ph_of({a, b - step})) / (2.0 * step);
    CHECK(g.dbeta > 0.0);
    CHECK(g.dalpha <= 0.0);
    CHECK(g.dbeta == doctest::Approx(fb).epsilon(1e-3));
    if (a > 0.0) CHECK(g.dalpha == doctest::Approx(fa).epsilon(1e-3));
  }
}

TEST_CASE("titration curve") {
  SUBCASE("S-shape with the steepest slope at diprotic equivalence") {
    const double a = 0.026;
    std::vector<double> betas;
    for (int i = 0; i <= 780; ++i) betas.push_back(0.078 * i / 780.0);
    const auto curve = titration_curve(a, betas);
    REQUIRE(curve.size() == betas.size());
    double best = 0.0;
    double at = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
      CHECK(curve[i].ph > curve[i - 1].ph);
      const double slope = (curve[i].ph - curve[i - 1].ph) / (betas[i] - betas[i - 1]);
      if (slope > best) {
        best = slope;
        at = 0.5 * (betas[i] + betas[i - 1]);
      }
    }
    CHECK(at >= 1.9 * a);
    CHECK(at <= 2.1 * a);
  }
  SUBCASE("single point") {
    const double b[] = {0.01};
    const auto curve = titration_curve(0.02, b);
    REQUIRE(curve.size() == 1);
    CHECK(curve[0].ph == ph_of({0.02, 0.01}));
  }
  SUBCASE("pure base starts neutral and rises") {
    const double b[] = {0.0, 1e-6, 1e-3};
    const auto curve = titration_curve(0.0, b);
    CHECK(curve[0].ph == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(curve[1].ph > curve[0].ph);
    CHECK(curve[2].ph > curve[1].ph);
  }
  SUBCASE("rejects bad sweeps") {
    const double desc[] = {0.02, 0.01};
    CHECK_THROWS(titration_curve(0.02, desc));
    CHECK_THROWS(titration_curve(0.02, std::span<const double>{}));
  }
}

TEST_CASE("no root inside the bracket") {
  // Absurdly strong base pushes [H+] below the searched range.
  CHECK_THROWS_AS(hydrogen_ion({0.0, 1e6}, EquilibriumConstants(1e3, 1.2e-2, 1e-14)),
                  phctl::NoRoot);
}
