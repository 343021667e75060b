#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

// Single-input Mamdani controller: pH error in, signed correction out.
namespace phctl::fuzzy {

enum class Shape { Triangle, Trapezoid };

/// Piecewise-linear membership with closed breakpoints. A triangle is stored
/// as a trapezoid whose plateau has zero width.
class MembershipFunction {
public:
  static MembershipFunction triangle(double a, double b, double c);
  static MembershipFunction trapezoid(double a, double b, double c, double d);

  double operator()(double x) const noexcept;

  Shape shape() const noexcept { return shape_; }
  /// Breakpoints as tabulated: 3 for a triangle, 4 for a trapezoid.
  std::vector<double> breakpoints() const;
  double lower() const noexcept { return p_[0]; }
  double upper() const noexcept { return p_[3]; }

  friend bool operator==(const MembershipFunction &,
                         const MembershipFunction &) = default;

private:
  MembershipFunction(Shape s, std::array<double, 4> p) : shape_(s), p_(p) {}
  Shape shape_;
  std::array<double, 4> p_;
};

struct LinguisticSet {
  std::string label;
  MembershipFunction mf;
  friend bool operator==(const LinguisticSet &, const LinguisticSet &) = default;
};

/// One consequent per antecedent label, each consequent used once.
class RuleBase {
public:
  RuleBase() = default;
  explicit RuleBase(std::vector<std::pair<std::string, std::string>> rules);

  const std::vector<std::pair<std::string, std::string>> &rules() const noexcept {
    return rules_;
  }
  std::size_t size() const noexcept { return rules_.size(); }

private:
  std::vector<std::pair<std::string, std::string>> rules_;
};

/// Clipped consequent: min(degree, mf(x)).
struct FiredRule {
  double degree;
  MembershipFunction mf;
};

/// Pointwise max over fired rules.
class Aggregate {
public:
  Aggregate(std::vector<FiredRule> terms, double lo, double hi);

  double operator()(double x) const noexcept;
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  const std::vector<FiredRule> &terms() const noexcept { return terms_; }

private:
  std::vector<FiredRule> terms_;
  double lo_;
  double hi_;
};

double membership(const MembershipFunction &mf, double x);

/// Centroid by trapezoidal quadrature on a uniform grid over the aggregate's
/// universe. Throws EmptyAggregate if the aggregate is zero everywhere.
double defuzzify(const Aggregate &aggregate, double resolution = 0.01);

class FuzzyController {
public:
  static constexpr double kInputLo = -5.0;
  static constexpr double kInputHi = 5.0;
  static constexpr double kOutputLo = -100.0;
  static constexpr double kOutputHi = 100.0;

  /// Validates label uniqueness, rule bijectivity and coverage of both
  /// universes; throws std::invalid_argument on violation.
  FuzzyController(std::vector<LinguisticSet> inputs,
                  std::vector<LinguisticSet> outputs, RuleBase rules,
                  double defuzz_resolution = 0.01);

  /// Nine-set input/output tables and the one-to-one rule base.
  static FuzzyController standard();

  /// Degree per input set (input order); `e` is clamped to the input universe.
  std::vector<double> fuzzify(double e) const;

  Aggregate infer(std::span<const double> degrees) const;

  /// Crisp correction in [-100, 100] for a pH error.
  double output(double e) const;

  const std::vector<LinguisticSet> &inputs() const noexcept { return inputs_; }
  const std::vector<LinguisticSet> &outputs() const noexcept { return outputs_; }
  const RuleBase &rules() const noexcept { return rules_; }
  double resolution() const noexcept { return resolution_; }

private:
  std::vector<LinguisticSet> inputs_;
  std::vector<LinguisticSet> outputs_;
  RuleBase rules_;
  std::vector<std::size_t> consequent_;  // input index -> output index
  double resolution_;
};

FuzzyController controller_from_json(const nlohmann::json &j);
nlohmann::json controller_to_json(const FuzzyController &c);

} // namespace phctl::fuzzy
