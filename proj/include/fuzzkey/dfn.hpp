#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fuzzkey/fuzzy_core.hpp"

namespace fuzzkey {

/// Dense row-major weight matrix. Row r holds the incoming weights of node r.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t rows, std::size_t cols, double fill);

  /// Every weight 1/cols, so each node computes the mean of its inputs.
  static WeightMatrix mean(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct PropagationStats {
  std::uint64_t mf_evals = 0;
  std::uint64_t hidden_ops = 0;

  PropagationStats& operator+=(const PropagationStats& o) {
    mf_evals += o.mf_evals;
    hidden_ops += o.hidden_ops;
    return *this;
  }
};

struct Propagation {
  std::vector<double> fuzzy;                ///< F: concatenated memberships
  std::vector<std::vector<double>> hidden;  ///< H per hidden layer
  double output = 0.0;                      ///< O
  PropagationStats stats;
};

using InstanceId = std::uint64_t;
using PatternSignature = std::vector<std::string>;

/// Groups instances whose per-feature dominant fuzzy labels coincide.
class PatternRegistry {
 public:
  void record(InstanceId id, PatternSignature signature);
  void clear();

  const std::map<PatternSignature, std::vector<InstanceId>>& groups() const { return groups_; }
  std::size_t instance_count() const { return ids_.size(); }
  bool contains(InstanceId id) const { return ids_.count(id) != 0; }

 private:
  std::map<PatternSignature, std::vector<InstanceId>> groups_;
  std::set<InstanceId> ids_;
};

/**
 * Layered fuzzy network: input (n) -> fuzzy (sum of N_i) -> hidden layers
 * (width n each) -> output (1).
 *
 * `layers()` holds every weight matrix after the fuzzy layer, hidden layers
 * first and the 1-row output layer last. Propagation is const and may run
 * concurrently; the update operations and record_pattern need exclusive
 * access.
 */
class DynamicFuzzyNetwork {
 public:
  /// n >= 1 features, N >= 2 sets per feature, L >= 4 total layers.
  static DynamicFuzzyNetwork create(std::size_t n_features, std::size_t n_sets, std::size_t n_layers);

  std::size_t feature_count() const { return partitions_.size(); }
  std::size_t sets_per_feature() const { return n_sets_; }
  std::size_t layer_count() const { return weights_.size() + 2; }
  std::size_t hidden_layer_count() const { return weights_.size() - 1; }
  std::size_t fuzzy_width() const;

  const std::vector<FuzzyPartition>& partitions() const { return partitions_; }
  const std::vector<WeightMatrix>& layers() const { return weights_; }
  const PatternRegistry& registry() const { return registry_; }

  /// Replaces one weight matrix. Shape is checked at propagation time.
  void set_weights(std::size_t layer, WeightMatrix w);

  Propagation propagate(std::span<const double> x) const;

  /// Rebuilds every partition with N sets and resets the first hidden layer.
  void update_membership_functions(std::size_t n_sets);

  /**
   * Removes the features at `remove` (indices into the current feature list),
   * then inserts a fresh feature at each position of `add`, in order, each
   * index referring to the list as it stands at that point. All weights are
   * reset to layer means afterwards.
   */
  void update_nodes(std::span<const std::size_t> add, std::span<const std::size_t> remove);

  /// Per-feature argmax label; ties go to the lowest set index.
  PatternSignature signature(std::span<const double> x) const;

  const PatternSignature& record_pattern(InstanceId id, std::span<const double> x);

 private:
  DynamicFuzzyNetwork(std::size_t n_features, std::size_t n_sets, std::size_t n_hidden);
  void reset_weights();

  std::size_t n_sets_ = 0;
  std::vector<FuzzyPartition> partitions_;
  std::vector<WeightMatrix> weights_;
  PatternRegistry registry_;
};

}  // namespace fuzzkey
