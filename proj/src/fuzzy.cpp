#include "phctl/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "phctl/errors.hpp"

namespace phctl::fuzzy {

MembershipFunction MembershipFunction::triangle(double a, double b, double c) {
  if (!(a <= b && b <= c)) {
    throw std::invalid_argument("triangle breakpoints must be ascending");
  }
  return MembershipFunction(Shape::Triangle, {a, b, b, c});
}

MembershipFunction MembershipFunction::trapezoid(double a, double b, double c,
                                                 double d) {
  if (!(a <= b && b <= c && c <= d)) {
    throw std::invalid_argument("trapezoid breakpoints must be ascending");
  }
  return MembershipFunction(Shape::Trapezoid, {a, b, c, d});
}

double MembershipFunction::operator()(double x) const noexcept {
  const auto [a, b, c, d] = p_;
  if (x < a || x > d) {
    return 0.0;
  }
  if (x < b) {
    return (x - a) / (b - a);
  }
  if (x <= c) {
    return 1.0;
  }
  return (d - x) / (d - c);
}

std::vector<double> MembershipFunction::breakpoints() const {
  if (shape_ == Shape::Triangle) {
    return {p_[0], p_[1], p_[3]};
  }
  return {p_.begin(), p_.end()};
}

double membership(const MembershipFunction &mf, double x) { return mf(x); }

RuleBase::RuleBase(std::vector<std::pair<std::string, std::string>> rules)
    : rules_(std::move(rules)) {
  std::set<std::string> ins;
  std::set<std::string> outs;
  for (const auto &[in, out] : rules_) {
    if (!ins.insert(in).second) {
      throw std::invalid_argument("duplicate rule antecedent: " + in);
    }
    if (!outs.insert(out).second) {
      throw std::invalid_argument("duplicate rule consequent: " + out);
    }
  }
}

Aggregate::Aggregate(std::vector<FiredRule> terms, double lo, double hi)
    : terms_(std::move(terms)), lo_(lo), hi_(hi) {}

double Aggregate::operator()(double x) const noexcept {
  double m = 0.0;
  for (const auto &t : terms_) {
    m = std::max(m, std::min(t.degree, t.mf(x)));
  }
  return m;
}

double defuzzify(const Aggregate &aggregate, double resolution) {
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("defuzzification resolution must be positive");
  }
  const double lo = aggregate.lo();
  const auto n = static_cast<long>(std::llround((aggregate.hi() - lo) / resolution));
  double num = 0.0;
  double den = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double x = lo + static_cast<double>(i) * resolution;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    const double mu = aggregate(x);
    num += w * x * mu;
    den += w * mu;
  }
  if (!(den > 0.0)) {
    throw EmptyAggregate("aggregate membership is zero everywhere");
  }
  return num / den;
}

namespace {

std::size_t index_of(const std::vector<LinguisticSet> &sets,
                     const std::string &label) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].label == label) {
      return i;
    }
  }
  throw std::invalid_argument("rule refers to unknown set: " + label);
}

void check_family(const std::vector<LinguisticSet> &sets, double lo, double hi,
                  const char *what) {
  if (sets.empty()) {
    throw std::invalid_argument(std::string(what) + " sets are empty");
  }
  std::set<std::string> labels;
  for (const auto &s : sets) {
    if (!labels.insert(s.label).second) {
      throw std::invalid_argument(std::string("duplicate ") + what + " label: " +
                                  s.label);
    }
  }
  constexpr int kSamples = 20001;
  for (int i = 0; i < kSamples; ++i) {
    const double x = lo + (hi - lo) * i / (kSamples - 1);
    const bool covered = std::any_of(sets.begin(), sets.end(),
                                     [x](const LinguisticSet &s) { return s.mf(x) > 0.0; });
    if (!covered) {
      throw std::invalid_argument(std::string(what) + " universe not covered at " +
                                  std::to_string(x));
    }
  }
}

} // namespace

FuzzyController::FuzzyController(std::vector<LinguisticSet> inputs,
                                 std::vector<LinguisticSet> outputs,
                                 RuleBase rules, double defuzz_resolution)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)),
      rules_(std::move(rules)), resolution_(defuzz_resolution) {
  if (!(resolution_ > 0.0)) {
    throw std::invalid_argument("defuzzification resolution must be positive");
  }
  check_family(inputs_, kInputLo, kInputHi, "input");
  check_family(outputs_, kOutputLo, kOutputHi, "output");
  if (rules_.size() != inputs_.size() || rules_.size() != outputs_.size()) {
    throw std::invalid_argument("rule base must map every input set to one output set");
  }
  consequent_.assign(inputs_.size(), 0);
  for (const auto &[in, out] : rules_.rules()) {
    consequent_[index_of(inputs_, in)] = index_of(outputs_, out);
  }
}

FuzzyController FuzzyController::standard() {
  using MF = MembershipFunction;
  std::vector<LinguisticSet> in{
      {"NXL", MF::trapezoid(-5.0, -5.0, -4.0, -2.0)},
      {"NL", MF::triangle(-3.0, -2.0, -1.0)},
      {"NM", MF::triangle(-2.0, -1.25, -0.5)},
      {"NS", MF::triangle(-1.0, -0.5, 0.0)},
      {"Z", MF::triangle(-0.5, 0.0, 0.5)},
      {"PS", MF::triangle(0.0, 0.5, 1.0)},
      {"PM", MF::triangle(0.5, 1.25, 2.0)},
      {"PL", MF::triangle(1.0, 2.0, 3.0)},
      {"PXL", MF::trapezoid(2.0, 4.0, 5.0, 5.0)},
  };
  std::vector<LinguisticSet> out{
      {"ONXL", MF::trapezoid(-100.0, -100.0, -60.0, -45.0)},
      {"ONL", MF::triangle(-50.0, -40.0, -30.0)},
      {"ONM", MF::triangle(-35.0, -25.0, -15.0)},
      {"ONS", MF::triangle(-20.0, -10.0, 0.0)},
      {"OZ", MF::triangle(-0.5, 0.0, 0.5)},
      {"OPS", MF::triangle(0.0, 10.0, 20.0)},
      {"OPM", MF::triangle(15.0, 25.0, 35.0)},
      {"OPL", MF::triangle(30.0, 40.0, 50.0)},
      {"OPXL", MF::trapezoid(45.0, 60.0, 100.0, 100.0)},
  };
  std::vector<std::pair<std::string, std::string>> rules;
  for (const auto &s : in) {
    rules.emplace_back(s.label, "O" + s.label);
  }
  return FuzzyController(std::move(in), std::move(out), RuleBase(std::move(rules)));
}

std::vector<double> FuzzyController::fuzzify(double e) const {
  const double x = std::clamp(e, kInputLo, kInputHi);
  std::vector<double> deg;
  deg.reserve(inputs_.size());
  for (const auto &s : inputs_) {
    deg.push_back(s.mf(x));
  }
  return deg;
}

Aggregate FuzzyController::infer(std::span<const double> degrees) const {
  if (degrees.size() != inputs_.size()) {
    throw std::invalid_argument("degree vector size does not match input sets");
  }
  std::vector<FiredRule> fired;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] > 0.0) {
      fired.push_back({degrees[i], outputs_[consequent_[i]].mf});
    }
  }
  return Aggregate(std::move(fired), kOutputLo, kOutputHi);
}

double FuzzyController::output(double e) const {
  const auto deg = fuzzify(e);
  return defuzzify(infer(deg), resolution_);
}

namespace {

nlohmann::json sets_to_json(const std::vector<LinguisticSet> &sets) {
  auto arr = nlohmann::json::array();
  for (const auto &s : sets) {
    arr.push_back({{"label", s.label},
                   {"shape", s.mf.shape() == Shape::Triangle ? "triangle" : "trapezoid"},
                   {"points", s.mf.breakpoints()}});
  }
  return arr;
}

std::vector<LinguisticSet> sets_from_json(const nlohmann::json &arr) {
  std::vector<LinguisticSet> sets;
  for (const auto &item : arr) {
    const auto shape = item.at("shape").get<std::string>();
    const auto pts = item.at("points").get<std::vector<double>>();
    if (shape == "triangle" && pts.size() == 3) {
      sets.push_back({item.at("label").get<std::string>(),
                      MembershipFunction::triangle(pts[0], pts[1], pts[2])});
    } else if (shape == "trapezoid" && pts.size() == 4) {
      sets.push_back({item.at("label").get<std::string>(),
                      MembershipFunction::trapezoid(pts[0], pts[1], pts[2], pts[3])});
    } else {
      throw std::invalid_argument("bad membership function '" + shape + "' with " +
                                  std::to_string(pts.size()) + " points");
    }
  }
  return sets;
}

} // namespace

FuzzyController controller_from_json(const nlohmann::json &j) {
  std::vector<std::pair<std::string, std::string>> rules;
  for (const auto &r : j.at("rules")) {
    rules.emplace_back(r.at(0).get<std::string>(), r.at(1).get<std::string>());
  }
  return FuzzyController(sets_from_json(j.at("inputs")),
                         sets_from_json(j.at("outputs")), RuleBase(std::move(rules)),
                         j.value("defuzz_resolution", 0.01));
}

nlohmann::json controller_to_json(const FuzzyController &c) {
  auto rules = nlohmann::json::array();
  for (const auto &[in, out] : c.rules().rules()) {
    rules.push_back({in, out});
  }
  return {{"inputs", sets_to_json(c.inputs())},
          {"outputs", sets_to_json(c.outputs())},
          {"rules", rules},
          {"defuzz_resolution", c.resolution()}};
}

} // namespace phctl::fuzzy
