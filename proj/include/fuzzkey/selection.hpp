#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "fuzzkey/fuzzy_core.hpp"

namespace fuzzkey {

enum class RelevanceMode { Inference, Sum };

std::string_view to_string(RelevanceMode mode);

struct RelevanceScore {
  std::size_t feature_id = 0;
  double score = 0.0;
  RelevanceMode mode = RelevanceMode::Inference;

  bool operator==(const RelevanceScore&) const = default;
};

struct TopK {
  std::size_t k = 0;
  bool operator==(const TopK&) const = default;
};

struct Threshold {
  double tau = 0.5;
  bool operator==(const Threshold&) const = default;
};

using SelectionCriterion = std::variant<TopK, Threshold>;

struct SelectionResult {
  std::vector<RelevanceScore> ranked;  ///< score descending, ties by ascending feature_id
  std::vector<std::size_t> selected;   ///< a prefix of ranked, as feature ids
  SelectionCriterion criterion;
  RelevanceMode mode = RelevanceMode::Inference;

  bool operator==(const SelectionResult&) const = default;
};

/// Mean over instances of the centroid-defuzzified inference output.
double relevance_inference(std::span<const double> values, const FuzzyPartition& partition, const RuleBase& rules,
                           const DefuzzConfig& cfg);

/// Sum of membership degrees of one fuzzified value.
double relevance_sum(const MembershipVector& mv);

/// Mean over instances of relevance_sum(fuzzify(v)).
double relevance_sum(std::span<const double> values, const FuzzyPartition& partition);

/**
 * Arithmetic mean that depends only on the multiset of its inputs: values
 * are summed in ascending order, so any permutation gives the same bits and
 * pointwise-dominating inputs never produce a smaller mean.
 */
double multiset_mean(std::vector<double> values);

std::vector<RelevanceScore> rank(std::span<const RelevanceScore> scores);

SelectionResult select_threshold(std::span<const RelevanceScore> scores, double tau);
SelectionResult select_topk(std::span<const RelevanceScore> scores, std::size_t k);
SelectionResult select(std::span<const RelevanceScore> scores, const SelectionCriterion& criterion);

}  // namespace fuzzkey
