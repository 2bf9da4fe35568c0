#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzkey/cipher.hpp"
#include "fuzzkey/selection.hpp"

namespace fuzzkey {

/// Everything that shapes a run's output. Execution knobs that must not
/// change results (worker count) live outside this struct.
struct PipelineConfig {
  std::size_t sets = 3;
  std::size_t layers = 4;
  RelevanceMode mode = RelevanceMode::Inference;
  SelectionCriterion selection = Threshold{0.5};
  std::vector<double> centers;  ///< empty means j/(sets-1)
  double empty_activation_value = 0.0;
  CipherMode cipher = CipherMode::ByteShift;
  bool tag = true;
  bool drop_incomplete_rows = false;

  DefuzzConfig defuzz() const;

  /// Throws ConfigError on any component-level invariant violation.
  void validate() const;
};

/**
 * Applies `key = value` lines onto `base`. Blank lines and `#` comments are
 * ignored. Recognised keys: sets, layers, mode, k, tau, centers,
 * empty_activation_value, cipher, tag, drop_incomplete_rows.
 * Setting both k and tau in one file is an error.
 */
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

RelevanceMode parse_mode(std::string_view s);
CipherMode parse_cipher_mode(std::string_view s);

}  // namespace fuzzkey
