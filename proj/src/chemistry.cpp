#include "phctl/chemistry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "phctl/errors.hpp"

namespace phctl::chemistry {

EquilibriumConstants::EquilibriumConstants(double k1, double k2, double kw)
    : k1_(k1), k2_(k2), kw_(kw) {
  if (!(k1 > 0.0) || !(k2 > 0.0) || !(kw > 0.0)) {
    throw std::invalid_argument("equilibrium constants must be positive");
  }
}

IonInvariants::IonInvariants(double alpha, double beta)
    : alpha_(alpha), beta_(beta) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw std::invalid_argument("ion invariants must be non-negative, got alpha=" +
                                std::to_string(alpha) +
                                " beta=" + std::to_string(beta));
  }
}

QuarticCoeffs quartic_coeffs(const IonInvariants &inv,
                             const EquilibriumConstants &k) {
  const double a = inv.alpha();
  const double b = inv.beta();
  const double k1 = k.k1();
  const double k2 = k.k2();
  const double kw = k.kw();
  return QuarticCoeffs{
      .a1 = k1 + b,
      .a2 = b * k1 + k1 * k2 - kw - k1 * a,
      .a3 = b * k1 * k2 - k1 * kw - 2.0 * k1 * k2 * a,
      .a4 = -k1 * k2 * kw,
  };
}

double hydrogen_ion(const IonInvariants &inv, const EquilibriumConstants &k) {
  const QuarticCoeffs p = quartic_coeffs(inv, k);
  double lo = std::log10(kMinHydrogen);
  double hi = std::log10(kMaxHydrogen);
  if (!(p(kMinHydrogen) < 0.0) || !(p(kMaxHydrogen) > 0.0)) {
    throw NoRoot("hydrogen-ion quartic has no sign change on [1e-16, 1e2]");
  }
  // log10(1 + 1e-12)
  constexpr double kLogTol = 4.3e-13;
  for (int i = 0; i < 200 && hi - lo > kLogTol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double v = p(std::pow(10.0, mid));
    if (v == 0.0) {
      return std::pow(10.0, mid);
    }
    (v < 0.0 ? lo : hi) = mid;
  }
  return std::pow(10.0, 0.5 * (lo + hi));
}

double ph_of(const IonInvariants &inv, const EquilibriumConstants &k) {
  return -std::log10(hydrogen_ion(inv, k));
}

Speciation speciation(const IonInvariants &inv, const EquilibriumConstants &k,
                      double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("speciation requires h > 0");
  }
  const double k1 = k.k1();
  const double k2 = k.k2();
  const double hso4 = inv.alpha() * k1 * h / (h * h + k1 * h + k1 * k2);
  return Speciation{
      .h2so4 = hso4 * h / k1,
      .hso4 = hso4,
      .so4 = hso4 * k2 / h,
      .na = inv.beta(),
      .h = h,
      .oh = k.kw() / h,
  };
}

double charge_balance_residual(const IonInvariants &inv,
                               const EquilibriumConstants &k, double h) {
  const Speciation s = speciation(inv, k, h);
  return (s.na + s.h) - (s.oh + s.hso4 + 2.0 * s.so4);
}

PhGradient ph_gradient(const IonInvariants &inv, const EquilibriumConstants &k) {
  const double h = hydrogen_ion(inv, k);
  const double k1 = k.k1();
  const double k2 = k.k2();
  // Sulfate charge per unit alpha, and its h-derivative.
  const double num = k1 * h + 2.0 * k1 * k2;
  const double den = h * h + k1 * h + k1 * k2;
  const double q = num / den;
  const double dq = (k1 * den - num * (2.0 * h + k1)) / (den * den);
  const double dres_dh = 1.0 + k.kw() / (h * h) - inv.alpha() * dq;
  const double scale = 1.0 / (h * std::log(10.0) * dres_dh);
  return {-q * scale, scale};
}

int quartic_sign_changes(const IonInvariants &inv, const EquilibriumConstants &k,
                         int samples) {
  const QuarticCoeffs p = quartic_coeffs(inv, k);
  const double lo = std::log10(kMinHydrogen);
  const double hi = std::log10(kMaxHydrogen);
  int changes = 0;
  int prev_sign = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = lo + (hi - lo) * i / (samples - 1);
    const double v = p(std::pow(10.0, x));
    const int sign = (v > 0.0) - (v < 0.0);
    if (sign == 0) {
      continue;
    }
    if (prev_sign != 0 && sign != prev_sign) {
      ++changes;
    }
    prev_sign = sign;
  }
  return changes;
}

std::vector<TitrationPoint> titration_curve(double alpha,
                                            std::span<const double> betas,
                                            const EquilibriumConstants &k) {
  if (betas.empty()) {
    throw std::invalid_argument("titration range is empty");
  }
  std::vector<TitrationPoint> out;
  out.reserve(betas.size());
  double prev = -1.0;
  for (double b : betas) {
    if (b < 0.0 || b < prev) {
      throw std::invalid_argument("titration range must be non-negative and ascending");
    }
    prev = b;
    out.push_back({b, ph_of(IonInvariants(alpha, b), k)});
  }
  return out;
}

} // namespace phctl::chemistry
