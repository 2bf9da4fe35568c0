#include "fuzzkey/fuzzy_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fuzzkey/errors.hpp"

namespace fuzzkey {

namespace {

void require_unit(double v, const char* name, const std::string& label) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    std::ostringstream os;
    os << "membership function '" << label << "': parameter " << name << "=" << v << " outside [0,1]";
    throw ConfigError(os.str());
  }
}

[[noreturn]] void bad_order(const std::string& label, const char* rule) {
  throw ConfigError("membership function '" + label + "': requires " + rule);
}

}  // namespace

MembershipFunction::MembershipFunction(MfKind kind, double a, double b, double c, std::string label)
    : kind_(kind), a_(a), b_(b), c_(c), label_(std::move(label)) {
  require_unit(a_, "a", label_);
  require_unit(b_, "b", label_);
  require_unit(c_, "c", label_);
  switch (kind_) {
    case MfKind::LeftShoulder:
      if (!(a_ < c_)) bad_order(label_, "a < c");
      break;
    case MfKind::Triangle:
      if (!(a_ < b_ && b_ < c_)) bad_order(label_, "a < b < c");
      break;
    case MfKind::RightShoulder:
      if (!(b_ < c_)) bad_order(label_, "b < c");
      break;
  }
}

MembershipFunction MembershipFunction::left_shoulder(double a, double c, std::string label) {
  return MembershipFunction(MfKind::LeftShoulder, a, a, c, std::move(label));
}

MembershipFunction MembershipFunction::triangle(double a, double b, double c, std::string label) {
  return MembershipFunction(MfKind::Triangle, a, b, c, std::move(label));
}

MembershipFunction MembershipFunction::right_shoulder(double b, double c, std::string label) {
  return MembershipFunction(MfKind::RightShoulder, b, b, c, std::move(label));
}

double MembershipFunction::operator()(double x) const {
  if (std::isnan(x)) throw ContractViolation("membership input is NaN");
  x = std::clamp(x, 0.0, 1.0);
  switch (kind_) {
    case MfKind::LeftShoulder:
      if (x <= a_) return 1.0;
      if (x < c_) return (c_ - x) / (c_ - a_);
      return 0.0;
    case MfKind::Triangle:
      if (x <= a_ || x >= c_) return 0.0;
      if (x < b_) return (x - a_) / (b_ - a_);
      return (c_ - x) / (c_ - b_);
    case MfKind::RightShoulder:
      if (x <= b_) return 0.0;
      if (x < c_) return (x - b_) / (c_ - b_);
      return 1.0;
  }
  return 0.0;
}

double MembershipFunction::peak() const {
  switch (kind_) {
    case MfKind::LeftShoulder:
      return a_;
    case MfKind::Triangle:
      return b_;
    case MfKind::RightShoulder:
      return c_;
  }
  return b_;
}

double MembershipFunction::min_slope_width() const {
  if (kind_ == MfKind::Triangle) return std::min(b_ - a_, c_ - b_);
  return c_ - a_;
}

double eval_membership(double x, const MembershipFunction& mf) { return mf(x); }

FuzzyPartition::FuzzyPartition(std::vector<MembershipFunction> sets) : sets_(std::move(sets)) {
  if (sets_.size() < 2) throw ConfigError("fuzzy partition needs at least 2 sets");
  if (sets_.front().kind() != MfKind::LeftShoulder) throw ConfigError("first fuzzy set must be a left shoulder");
  if (sets_.back().kind() != MfKind::RightShoulder) throw ConfigError("last fuzzy set must be a right shoulder");
  for (std::size_t j = 1; j + 1 < sets_.size(); ++j) {
    if (sets_[j].kind() != MfKind::Triangle) throw ConfigError("interior fuzzy sets must be triangles");
  }
  for (std::size_t j = 1; j < sets_.size(); ++j) {
    if (!(sets_[j - 1].peak() < sets_[j].peak())) {
      throw ConfigError("fuzzy set peaks must be strictly increasing (set " + std::to_string(j) + ")");
    }
  }
}

MembershipVector FuzzyPartition::fuzzify(double x) const {
  MembershipVector mv;
  mv.degrees.reserve(sets_.size());
  for (const auto& mf : sets_) mv.degrees.push_back(mf(x));
  return mv;
}

MembershipVector fuzzify(double x, const FuzzyPartition& partition) { return partition.fuzzify(x); }

std::vector<std::string> default_labels(std::size_t n_sets) {
  if (n_sets == 2) return {"Low", "High"};
  if (n_sets == 3) return {"Low", "Medium", "High"};
  std::vector<std::string> labels;
  labels.reserve(n_sets);
  for (std::size_t j = 0; j < n_sets; ++j) labels.push_back("S" + std::to_string(j + 1));
  return labels;
}

FuzzyPartition make_uniform_partition(std::size_t n_sets) {
  if (n_sets < 2) throw ConfigError("number of fuzzy sets must be >= 2, got " + std::to_string(n_sets));
  const auto labels = default_labels(n_sets);
  const double denom = static_cast<double>(n_sets + 1);
  // p(1..N); index 0 unused
  auto p = [denom](std::size_t j) { return static_cast<double>(j) / denom; };

  std::vector<MembershipFunction> sets;
  sets.reserve(n_sets);
  sets.push_back(MembershipFunction::left_shoulder(p(1), p(2), labels[0]));
  for (std::size_t j = 1; j + 1 < n_sets; ++j) {
    sets.push_back(MembershipFunction::triangle(p(j), p(j + 1), p(j + 2), labels[j]));
  }
  sets.push_back(MembershipFunction::right_shoulder(p(n_sets - 1), p(n_sets), labels[n_sets - 1]));
  return FuzzyPartition(std::move(sets));
}

RuleBase::RuleBase(std::vector<std::size_t> consequent) : consequent_(std::move(consequent)) {
  for (std::size_t j = 0; j < consequent_.size(); ++j) {
    if (consequent_[j] >= consequent_.size()) {
      throw ConfigError("rule " + std::to_string(j) + " targets unknown set " + std::to_string(consequent_[j]));
    }
  }
}

RuleBase RuleBase::identity(std::size_t n_sets) {
  std::vector<std::size_t> c(n_sets);
  for (std::size_t j = 0; j < n_sets; ++j) c[j] = j;
  return RuleBase(std::move(c));
}

ActivationVector evaluate_rules(const MembershipVector& mv, const RuleBase& rules) {
  if (mv.size() != rules.size()) {
    throw ContractViolation("membership vector has " + std::to_string(mv.size()) + " entries, rule base has " +
                            std::to_string(rules.size()));
  }
  ActivationVector act{std::vector<double>(rules.size(), 0.0)};
  for (std::size_t j = 0; j < rules.size(); ++j) {
    double& slot = act.values[rules.consequent(j)];
    slot = std::max(slot, mv[j]);
  }
  return act;
}

DefuzzConfig DefuzzConfig::uniform(std::size_t n_sets) {
  if (n_sets < 2) throw ConfigError("number of fuzzy sets must be >= 2, got " + std::to_string(n_sets));
  DefuzzConfig cfg;
  cfg.centers.resize(n_sets);
  for (std::size_t j = 0; j < n_sets; ++j) {
    cfg.centers[j] = static_cast<double>(j) / static_cast<double>(n_sets - 1);
  }
  return cfg;
}

void DefuzzConfig::validate() const {
  if (centers.empty()) throw ConfigError("defuzzification centers are empty");
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (!std::isfinite(centers[j]) || centers[j] < 0.0 || centers[j] > 1.0) {
      throw ConfigError("defuzzification center " + std::to_string(j) + " outside [0,1]");
    }
    if (j > 0 && centers[j] < centers[j - 1]) throw ConfigError("defuzzification centers must be nondecreasing");
  }
  if (!std::isfinite(empty_activation_value) || empty_activation_value < 0.0 || empty_activation_value > 1.0) {
    throw ConfigError("empty_activation_value outside [0,1]");
  }
}

double defuzzify_centroid(const ActivationVector& act, const DefuzzConfig& cfg) {
  if (act.size() != cfg.centers.size()) {
    throw ContractViolation("activation vector has " + std::to_string(act.size()) + " entries, " +
                            std::to_string(cfg.centers.size()) + " centers configured");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < act.size(); ++j) {
    num += cfg.centers[j] * act[j];
    den += act[j];
  }
  if (den <= 0.0) return cfg.empty_activation_value;
  // Rounding can push the quotient one ulp past the hull of the centers.
  const auto [lo, hi] = std::minmax_element(cfg.centers.begin(), cfg.centers.end());
  return std::clamp(num / den, *lo, *hi);
}

double infer(double x, const FuzzyPartition& partition, const RuleBase& rules, const DefuzzConfig& cfg) {
  return defuzzify_centroid(evaluate_rules(partition.fuzzify(x), rules), cfg);
}

}  // namespace fuzzkey
