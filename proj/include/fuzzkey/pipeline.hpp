#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fuzzkey/config.hpp"
#include "fuzzkey/dfn.hpp"
#include "fuzzkey/ingest.hpp"
#include "fuzzkey/selection.hpp"

namespace fuzzkey {

/// Scores every feature column. Features are independent, so up to `jobs`
/// threads split them; results are identical for any job count.
std::vector<RelevanceScore> score_features(const NormalizedDataset& data, const PipelineConfig& cfg,
                                           unsigned jobs = 1);

struct NetworkSummary {
  std::vector<std::pair<std::size_t, std::size_t>> layer_shapes;  ///< (rows, cols) per weight layer
  std::size_t fuzzy_width = 0;
  std::size_t propagations = 0;
  PropagationStats totals;
  double mean_output = 0.0;
  std::map<PatternSignature, std::size_t> pattern_counts;
};

struct SelectionRun {
  NormalizedDataset normalized;
  std::vector<RelevanceScore> scores;  ///< feature order
  SelectionResult result;
  NetworkSummary network;
};

/// normalize -> score -> select, plus one network pass per row.
SelectionRun run_selection(const Dataset& data, const PipelineConfig& cfg, unsigned jobs = 1);

/// JSON report with a fixed key order (schema in docs/report_schema.md).
std::string render_report(const SelectionRun& run, const PipelineConfig& cfg);

/// Serialized selection of a run, ready for encryption.
std::string serialized_selection(const SelectionRun& run);

struct MembershipRow {
  double x = 0.0;
  std::vector<double> degrees;
  double centroid = 0.0;
};

std::vector<MembershipRow> membership_table(const PipelineConfig& cfg, std::span<const double> xs);

/// Tab-separated: header "x<TAB>label...<TAB>centroid", one line per row.
std::string render_membership_table(const PipelineConfig& cfg, std::span<const MembershipRow> rows);

/// Inclusive sweep start, start+step, ... <= stop (with 1e-9 slack).
std::vector<double> sweep(double start, double stop, double step);

/// Shape and counters of a default network propagated once at x = 0.5.
std::string render_network_stats(std::size_t n_features, std::size_t n_sets, std::size_t n_layers);

}  // namespace fuzzkey
