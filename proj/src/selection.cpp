#include "fuzzkey/selection.hpp"

#include <algorithm>
#include <cmath>

#include "fuzzkey/errors.hpp"

namespace fuzzkey {

std::string_view to_string(RelevanceMode mode) {
  return mode == RelevanceMode::Inference ? "inference" : "sum";
}

double multiset_mean(std::vector<double> values) {
  if (values.empty()) throw ContractViolation("mean of an empty value set");
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double relevance_inference(std::span<const double> values, const FuzzyPartition& partition, const RuleBase& rules,
                           const DefuzzConfig& cfg) {
  if (values.empty()) throw ContractViolation("relevance of a feature with no instances");
  std::vector<double> crisp;
  crisp.reserve(values.size());
  for (double v : values) crisp.push_back(infer(v, partition, rules, cfg));
  return multiset_mean(std::move(crisp));
}

double relevance_sum(const MembershipVector& mv) {
  double s = 0.0;
  for (double d : mv.degrees) s += d;
  return s;
}

double relevance_sum(std::span<const double> values, const FuzzyPartition& partition) {
  if (values.empty()) throw ContractViolation("relevance of a feature with no instances");
  std::vector<double> sums;
  sums.reserve(values.size());
  for (double v : values) sums.push_back(relevance_sum(partition.fuzzify(v)));
  return multiset_mean(std::move(sums));
}

std::vector<RelevanceScore> rank(std::span<const RelevanceScore> scores) {
  std::vector<RelevanceScore> ranked(scores.begin(), scores.end());
  for (const auto& s : ranked) {
    if (std::isnan(s.score)) throw ContractViolation("relevance score is NaN");
  }
  std::sort(ranked.begin(), ranked.end(), [](const RelevanceScore& l, const RelevanceScore& r) {
    if (l.score != r.score) return l.score > r.score;
    return l.feature_id < r.feature_id;
  });
  return ranked;
}

namespace {

RelevanceMode common_mode(std::span<const RelevanceScore> scores) {
  if (scores.empty()) return RelevanceMode::Inference;
  const auto mode = scores.front().mode;
  for (const auto& s : scores) {
    if (s.mode != mode) throw ContractViolation("cannot rank scores from different relevance modes together");
  }
  return mode;
}

}  // namespace

SelectionResult select_threshold(std::span<const RelevanceScore> scores, double tau) {
  if (!(tau >= 0.0)) throw ContractViolation("threshold must be >= 0");
  SelectionResult result{rank(scores), {}, Threshold{tau}, common_mode(scores)};
  for (const auto& s : result.ranked) {
    if (s.score >= tau) result.selected.push_back(s.feature_id);
  }
  return result;
}

SelectionResult select_topk(std::span<const RelevanceScore> scores, std::size_t k) {
  SelectionResult result{rank(scores), {}, TopK{k}, common_mode(scores)};
  const std::size_t m = std::min(k, result.ranked.size());
  for (std::size_t r = 0; r < m; ++r) result.selected.push_back(result.ranked[r].feature_id);
  return result;
}

SelectionResult select(std::span<const RelevanceScore> scores, const SelectionCriterion& criterion) {
  if (const auto* top = std::get_if<TopK>(&criterion)) return select_topk(scores, top->k);
  return select_threshold(scores, std::get<Threshold>(criterion).tau);
}

}  // namespace fuzzkey
