#pragma once

#include <span>
#include <vector>

// Equilibrium chemistry of the H2SO4 / NaOH system expressed through the
// reaction invariants alpha (total sulfate) and beta (total sodium).
//
// The electroneutrality balance
//   [Na+] + [H+] = [OH-] + [HSO4-] + 2[SO4--]
// combined with the two acid dissociation equilibria and the water product
// reduces to a monic quartic in [H+]. Its unique positive root fixes the pH.
namespace phctl::chemistry {

class EquilibriumConstants {
public:
  EquilibriumConstants() = default;
  EquilibriumConstants(double k1, double k2, double kw);

  double k1() const noexcept { return k1_; }
  double k2() const noexcept { return k2_; }
  double kw() const noexcept { return kw_; }

  friend bool operator==(const EquilibriumConstants &,
                         const EquilibriumConstants &) = default;

private:
  double k1_ = 1.0e3;
  double k2_ = 1.2e-2;
  double kw_ = 1.0e-14;
};

class IonInvariants {
public:
  IonInvariants() = default;
  IonInvariants(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  friend bool operator==(const IonInvariants &, const IonInvariants &) = default;

private:
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

/// Coefficients of h^4 + a1 h^3 + a2 h^2 + a3 h + a4.
struct QuarticCoeffs {
  double a1;
  double a2;
  double a3;
  double a4;

  double operator()(double h) const noexcept {
    return (((h + a1) * h + a2) * h + a3) * h + a4;
  }
};

struct Speciation {
  double h2so4;
  double hso4;
  double so4;
  double na;
  double h;
  double oh;
};

/// Partial derivatives of the equilibrium pH with respect to the invariants.
struct PhGradient {
  double dalpha;  // < 0
  double dbeta;   // > 0
};

struct TitrationPoint {
  double beta;
  double ph;
};

// Bracket searched for [H+], mol/L.
inline constexpr double kMinHydrogen = 1.0e-16;
inline constexpr double kMaxHydrogen = 1.0e2;

QuarticCoeffs quartic_coeffs(const IonInvariants &inv,
                             const EquilibriumConstants &k = {});

/// Positive real root of the quartic, relative accuracy 1e-12.
/// Throws NoRoot when the quartic does not change sign on the bracket.
double hydrogen_ion(const IonInvariants &inv,
                    const EquilibriumConstants &k = {});

double ph_of(const IonInvariants &inv, const EquilibriumConstants &k = {});

Speciation speciation(const IonInvariants &inv, const EquilibriumConstants &k,
                      double h);

/// (positive charge) - (negative charge) at a trial [H+]; strictly increasing in h.
double charge_balance_residual(const IonInvariants &inv,
                               const EquilibriumConstants &k, double h);

/// Analytic gradient of ph_of by implicit differentiation of the charge
/// balance at its root.
PhGradient ph_gradient(const IonInvariants &inv, const EquilibriumConstants &k = {});

/// Number of sign changes of the quartic over `samples` log-spaced points in
/// [kMinHydrogen, kMaxHydrogen]. Exactly one means the physical root is unique.
int quartic_sign_changes(const IonInvariants &inv, const EquilibriumConstants &k,
                         int samples = 10000);

/// pH along a base sweep at fixed acid invariant. `betas` must be non-empty,
/// non-negative and ascending.
std::vector<TitrationPoint> titration_curve(double alpha,
                                            std::span<const double> betas,
                                            const EquilibriumConstants &k = {});

} // namespace phctl::chemistry
