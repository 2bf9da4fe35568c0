#include "fuzzkey/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "fuzzkey/cipher.hpp"
#include "fuzzkey/errors.hpp"

namespace fuzzkey {

using Json = nlohmann::ordered_json;

std::vector<RelevanceScore> score_features(const NormalizedDataset& data, const PipelineConfig& cfg, unsigned jobs) {
  const auto partition = make_uniform_partition(cfg.sets);
  const auto rules = RuleBase::identity(cfg.sets);
  const auto defuzz = cfg.defuzz();
  const std::size_t n = data.data.feature_count();

  std::vector<RelevanceScore> scores(n);
  auto score_one = [&](std::size_t j) {
    const auto col = data.data.column(j);
    const double s = cfg.mode == RelevanceMode::Inference ? relevance_inference(col, partition, rules, defuzz)
                                                          : relevance_sum(col, partition);
    scores[j] = RelevanceScore{j, s, cfg.mode};
  };

  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), n);
  if (workers <= 1) {
    for (std::size_t j = 0; j < n; ++j) score_one(j);
    return scores;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < n; j = next++) {
          try {
            score_one(j);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return scores;
}

SelectionRun run_selection(const Dataset& data, const PipelineConfig& cfg, unsigned jobs) {
  cfg.validate();
  SelectionRun run;
  run.normalized = normalize(data);
  run.scores = score_features(run.normalized, cfg, jobs);
  run.result = select(run.scores, cfg.selection);

  auto net = DynamicFuzzyNetwork::create(data.feature_count(), cfg.sets, cfg.layers);
  auto& summary = run.network;
  for (const auto& w : net.layers()) summary.layer_shapes.emplace_back(w.rows(), w.cols());
  summary.fuzzy_width = net.fuzzy_width();
  std::vector<double> outputs;
  outputs.reserve(data.row_count());
  const auto& rows = run.normalized.data.rows;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto p = net.propagate(rows[r]);
    summary.totals += p.stats;
    outputs.push_back(p.output);
    net.record_pattern(r, rows[r]);
  }
  summary.propagations = rows.size();
  summary.mean_output = multiset_mean(std::move(outputs));
  for (const auto& [sig, ids] : net.registry().groups()) summary.pattern_counts[sig] = ids.size();
  return run;
}

namespace {

Json criterion_json(const SelectionCriterion& c) {
  Json j;
  if (const auto* t = std::get_if<TopK>(&c)) {
    j["rule"] = "topk";
    j["k"] = t->k;
  } else {
    j["rule"] = "threshold";
    j["tau"] = std::get<Threshold>(c).tau;
  }
  return j;
}

}  // namespace

std::string render_report(const SelectionRun& run, const PipelineConfig& cfg) {
  const auto& names = run.normalized.data.feature_names;
  Json report;
  report["format"] = "fuzzkey-report";
  report["version"] = 1;

  Json config;
  config["sets"] = cfg.sets;
  config["layers"] = cfg.layers;
  config["mode"] = std::string(to_string(cfg.mode));
  config["selection"] = criterion_json(cfg.selection);
  config["centers"] = cfg.defuzz().centers;
  config["empty_activation_value"] = cfg.empty_activation_value;
  config["cipher"] = std::string(to_string(cfg.cipher));
  config["tag"] = cfg.tag;
  config["drop_incomplete_rows"] = cfg.drop_incomplete_rows;
  report["config"] = config;

  const auto& data = run.normalized.data;
  report["dataset"] = {{"rows", data.row_count()},
                       {"features", data.feature_count()},
                       {"dropped_rows", data.dropped_rows},
                       {"target_present", data.target.has_value()}};

  Json norm = Json::array();
  for (std::size_t j = 0; j < names.size(); ++j) {
    const auto& r = run.normalized.ranges[j];
    norm.push_back({{"feature", names[j]}, {"min", r.min}, {"max", r.max}, {"constant", r.constant()}});
  }
  report["normalization"] = norm;

  Json scores = Json::array();
  for (const auto& s : run.scores) {
    scores.push_back({{"feature_id", s.feature_id}, {"feature", names[s.feature_id]}, {"score", s.score}});
  }
  report["scores"] = scores;

  Json ranked = Json::array();
  for (std::size_t r = 0; r < run.result.ranked.size(); ++r) {
    const auto& s = run.result.ranked[r];
    ranked.push_back({{"rank", r}, {"feature_id", s.feature_id}, {"feature", names[s.feature_id]}, {"score", s.score}});
  }
  report["ranked"] = ranked;

  Json selected = Json::array();
  for (std::size_t id : run.result.selected) selected.push_back(names[id]);
  report["selection"] = criterion_json(run.result.criterion);
  report["selection"]["selected"] = selected;

  const auto& net = run.network;
  Json shapes = Json::array();
  for (const auto& [rows, cols] : net.layer_shapes) shapes.push_back({rows, cols});
  Json patterns = Json::array();
  for (const auto& [sig, count] : net.pattern_counts) patterns.push_back({{"signature", sig}, {"count", count}});
  report["network"] = {{"fuzzy_width", net.fuzzy_width},
                       {"weight_layers", shapes},
                       {"propagations", net.propagations},
                       {"mf_evals", net.totals.mf_evals},
                       {"hidden_ops", net.totals.hidden_ops},
                       {"mean_output", net.mean_output},
                       {"patterns", patterns}};
  return report.dump(2) + "\n";
}

std::string serialized_selection(const SelectionRun& run) {
  return serialize_selection(run.result, run.normalized.data.feature_names);
}

std::vector<MembershipRow> membership_table(const PipelineConfig& cfg, std::span<const double> xs) {
  cfg.validate();
  const auto partition = make_uniform_partition(cfg.sets);
  const auto rules = RuleBase::identity(cfg.sets);
  const auto defuzz = cfg.defuzz();
  std::vector<MembershipRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    auto mv = partition.fuzzify(x);
    const double centroid = defuzzify_centroid(evaluate_rules(mv, rules), defuzz);
    rows.push_back({x, std::move(mv.degrees), centroid});
  }
  return rows;
}

std::string render_membership_table(const PipelineConfig& cfg, std::span<const MembershipRow> rows) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  std::string out = "x";
  for (const auto& label : default_labels(cfg.sets)) out += "\t" + label;
  out += "\tcentroid\n";
  for (const auto& row : rows) {
    out += fmt(row.x);
    for (double d : row.degrees) out += "\t" + fmt(d);
    out += "\t" + fmt(row.centroid) + "\n";
  }
  return out;
}

std::vector<double> sweep(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw ConfigError("sweep bounds must be finite");
  }
  if (!(step > 0.0)) throw ConfigError("sweep step must be > 0");
  if (stop < start) throw ConfigError("sweep stop must be >= start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) xs[i] = start + static_cast<double>(i) * step;
  return xs;
}

std::string render_network_stats(std::size_t n_features, std::size_t n_sets, std::size_t n_layers) {
  const auto net = DynamicFuzzyNetwork::create(n_features, n_sets, n_layers);
  const std::vector<double> x(n_features, 0.5);
  const auto p = net.propagate(x);
  Json shapes = Json::array();
  for (const auto& w : net.layers()) shapes.push_back({w.rows(), w.cols()});
  Json j;
  j["features"] = n_features;
  j["sets"] = n_sets;
  j["layers"] = n_layers;
  j["fuzzy_width"] = net.fuzzy_width();
  j["weight_layers"] = shapes;
  j["mf_evals"] = p.stats.mf_evals;
  j["hidden_ops"] = p.stats.hidden_ops;
  return j.dump(2) + "\n";
}

}  // namespace fuzzkey
