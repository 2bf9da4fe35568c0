#include "fuzzkey/dfn.hpp"

#include <algorithm>

#include "fuzzkey/errors.hpp"

namespace fuzzkey {

WeightMatrix::WeightMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

WeightMatrix WeightMatrix::mean(std::size_t rows, std::size_t cols) {
  return WeightMatrix(rows, cols, 1.0 / static_cast<double>(cols));
}

void PatternRegistry::record(InstanceId id, PatternSignature signature) {
  if (!ids_.insert(id).second) {
    throw ContractViolation("instance " + std::to_string(id) + " already recorded");
  }
  groups_[std::move(signature)].push_back(id);
}

void PatternRegistry::clear() {
  groups_.clear();
  ids_.clear();
}

DynamicFuzzyNetwork::DynamicFuzzyNetwork(std::size_t n_features, std::size_t n_sets, std::size_t n_hidden)
    : n_sets_(n_sets), partitions_(n_features, make_uniform_partition(n_sets)), weights_(n_hidden + 1) {
  reset_weights();
}

DynamicFuzzyNetwork DynamicFuzzyNetwork::create(std::size_t n_features, std::size_t n_sets, std::size_t n_layers) {
  if (n_features < 1) throw ConfigError("network needs at least one input feature");
  if (n_sets < 2) throw ConfigError("number of fuzzy sets must be >= 2, got " + std::to_string(n_sets));
  if (n_layers < 4) throw ConfigError("number of layers must be >= 4, got " + std::to_string(n_layers));
  return DynamicFuzzyNetwork(n_features, n_sets, n_layers - 3);
}

std::size_t DynamicFuzzyNetwork::fuzzy_width() const {
  std::size_t w = 0;
  for (const auto& p : partitions_) w += p.size();
  return w;
}

void DynamicFuzzyNetwork::reset_weights() {
  const std::size_t n = feature_count();
  std::size_t prev = fuzzy_width();
  for (std::size_t l = 0; l + 1 < weights_.size(); ++l) {
    weights_[l] = WeightMatrix::mean(n, prev);
    prev = n;
  }
  weights_.back() = WeightMatrix::mean(1, prev);
}

void DynamicFuzzyNetwork::set_weights(std::size_t layer, WeightMatrix w) {
  if (layer >= weights_.size()) {
    throw ContractViolation("layer " + std::to_string(layer) + " out of range (" + std::to_string(weights_.size()) +
                            " weight layers)");
  }
  weights_[layer] = std::move(w);
}

Propagation DynamicFuzzyNetwork::propagate(std::span<const double> x) const {
  if (x.size() != feature_count()) {
    throw ContractViolation("input has " + std::to_string(x.size()) + " values, network expects " +
                            std::to_string(feature_count()));
  }
  Propagation out;
  out.fuzzy.reserve(fuzzy_width());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto mv = partitions_[i].fuzzify(x[i]);
    out.fuzzy.insert(out.fuzzy.end(), mv.degrees.begin(), mv.degrees.end());
    out.stats.mf_evals += mv.size();
  }

  const std::vector<double>* prev = &out.fuzzy;
  std::vector<double> last;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const auto& w = weights_[l];
    if (w.cols() != prev->size()) {
      throw ContractViolation("layer " + std::to_string(l) + " expects " + std::to_string(w.cols()) +
                              " inputs, previous layer has " + std::to_string(prev->size()));
    }
    std::vector<double> next(w.rows(), 0.0);
    for (std::size_t r = 0; r < w.rows(); ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < w.cols(); ++c) acc += w(r, c) * (*prev)[c];
      next[r] = acc;
    }
    out.stats.hidden_ops += static_cast<std::uint64_t>(w.rows()) * w.cols();
    if (l + 1 < weights_.size()) {
      out.hidden.push_back(std::move(next));
      prev = &out.hidden.back();
    } else {
      last = std::move(next);
    }
  }
  if (last.size() != 1) {
    throw ContractViolation("output layer has " + std::to_string(last.size()) + " nodes, expected 1");
  }
  out.output = last.front();
  return out;
}

void DynamicFuzzyNetwork::update_membership_functions(std::size_t n_sets) {
  auto partition = make_uniform_partition(n_sets);
  n_sets_ = n_sets;
  std::fill(partitions_.begin(), partitions_.end(), partition);
  weights_.front() = WeightMatrix::mean(weights_.front().rows(), fuzzy_width());
  registry_.clear();
}

void DynamicFuzzyNetwork::update_nodes(std::span<const std::size_t> add, std::span<const std::size_t> remove) {
  std::vector<std::size_t> doomed(remove.begin(), remove.end());
  std::sort(doomed.begin(), doomed.end());
  if (std::adjacent_find(doomed.begin(), doomed.end()) != doomed.end()) {
    throw ContractViolation("duplicate feature position in removal list");
  }
  if (!doomed.empty() && doomed.back() >= feature_count()) {
    throw ContractViolation("feature position " + std::to_string(doomed.back()) + " out of range");
  }
  std::size_t remaining = feature_count() - doomed.size();
  for (std::size_t pos : add) {
    if (pos > remaining) throw ContractViolation("insertion position " + std::to_string(pos) + " out of range");
    ++remaining;
  }
  if (remaining == 0) throw ConfigError("network must keep at least one feature");

  for (auto it = doomed.rbegin(); it != doomed.rend(); ++it) {
    partitions_.erase(partitions_.begin() + static_cast<std::ptrdiff_t>(*it));
  }
  const auto fresh = make_uniform_partition(n_sets_);
  for (std::size_t pos : add) partitions_.insert(partitions_.begin() + static_cast<std::ptrdiff_t>(pos), fresh);

  reset_weights();
  registry_.clear();
}

PatternSignature DynamicFuzzyNetwork::signature(std::span<const double> x) const {
  if (x.size() != feature_count()) {
    throw ContractViolation("pattern has " + std::to_string(x.size()) + " values, network expects " +
                            std::to_string(feature_count()));
  }
  PatternSignature sig;
  sig.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto mv = partitions_[i].fuzzify(x[i]);
    // max_element keeps the first maximum, i.e. the lowest set index.
    const auto best = std::max_element(mv.degrees.begin(), mv.degrees.end()) - mv.degrees.begin();
    sig.push_back(partitions_[i][static_cast<std::size_t>(best)].label());
  }
  return sig;
}

const PatternSignature& DynamicFuzzyNetwork::record_pattern(InstanceId id, std::span<const double> x) {
  auto sig = signature(x);
  registry_.record(id, sig);
  return registry_.groups().find(sig)->first;
}

}  // namespace fuzzkey
