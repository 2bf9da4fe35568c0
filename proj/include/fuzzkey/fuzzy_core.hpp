#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fuzzkey {

enum class MfKind { LeftShoulder, Triangle, RightShoulder };

/**
 * Piecewise-linear membership function over [0,1].
 *
 * Left shoulder: 1 up to `a`, falling to 0 at `c`.
 * Triangle:      0 up to `a`, peak 1 at `b`, 0 again from `c`.
 * Right shoulder: 0 up to `b`, rising to 1 at `c`.
 *
 * Unused parameters mirror the nearest used one (left shoulder: b == a;
 * right shoulder: a == b) so that a <= b <= c holds for every kind.
 * Instances are validated on construction and immutable afterwards.
 */
class MembershipFunction {
 public:
  static MembershipFunction left_shoulder(double a, double c, std::string label);
  static MembershipFunction triangle(double a, double b, double c, std::string label);
  static MembershipFunction right_shoulder(double b, double c, std::string label);

  /// Degree of membership; x is clamped to [0,1]. Throws ContractViolation on NaN.
  double operator()(double x) const;

  MfKind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  const std::string& label() const { return label_; }

  /// Position where the function first reaches 1.
  double peak() const;

  /// Narrowest non-degenerate slope (c - a for shoulders).
  double min_slope_width() const;

 private:
  MembershipFunction(MfKind kind, double a, double b, double c, std::string label);

  MfKind kind_;
  double a_;
  double b_;
  double c_;
  std::string label_;
};

double eval_membership(double x, const MembershipFunction& mf);

struct MembershipVector {
  std::vector<double> degrees;

  std::size_t size() const { return degrees.size(); }
  double operator[](std::size_t j) const { return degrees[j]; }
};

/// Per-consequent-set activation after rule evaluation and aggregation.
struct ActivationVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
};

/// Ordered family of N >= 2 membership functions: a left shoulder, N-2
/// triangles, and a right shoulder, with strictly increasing peaks.
class FuzzyPartition {
 public:
  explicit FuzzyPartition(std::vector<MembershipFunction> sets);

  std::size_t size() const { return sets_.size(); }
  const MembershipFunction& operator[](std::size_t j) const { return sets_[j]; }
  const std::vector<MembershipFunction>& sets() const { return sets_; }

  MembershipVector fuzzify(double x) const;

 private:
  std::vector<MembershipFunction> sets_;
};

MembershipVector fuzzify(double x, const FuzzyPartition& partition);

/// Uniform Ruspini partition with breakpoints at j/(N+1), j = 1..N.
FuzzyPartition make_uniform_partition(std::size_t n_sets);

/// Default linguistic labels: Low/High, Low/Medium/High, otherwise S1..SN.
std::vector<std::string> default_labels(std::size_t n_sets);

/// Maps antecedent set j to consequent set consequent[j].
class RuleBase {
 public:
  explicit RuleBase(std::vector<std::size_t> consequent);

  static RuleBase identity(std::size_t n_sets);

  std::size_t size() const { return consequent_.size(); }
  std::size_t consequent(std::size_t antecedent) const { return consequent_[antecedent]; }

 private:
  std::vector<std::size_t> consequent_;
};

/// Rule firing with max aggregation per consequent set.
ActivationVector evaluate_rules(const MembershipVector& mv, const RuleBase& rules);

struct DefuzzConfig {
  std::vector<double> centers;
  double empty_activation_value = 0.0;

  /// Centers j/(N-1), empty activation value 0.
  static DefuzzConfig uniform(std::size_t n_sets);

  /// Throws ConfigError unless centers lie in [0,1] and are nondecreasing.
  void validate() const;
};

/// Weighted average sum(y_j * mu_j) / sum(mu_j); empty_activation_value when
/// every activation is zero.
double defuzzify_centroid(const ActivationVector& act, const DefuzzConfig& cfg);

/// fuzzify -> evaluate_rules -> defuzzify_centroid for a single crisp value.
double infer(double x, const FuzzyPartition& partition, const RuleBase& rules, const DefuzzConfig& cfg);

}  // namespace fuzzkey
