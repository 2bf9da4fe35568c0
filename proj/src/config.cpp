#include "fuzzkey/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fuzzkey/errors.hpp"

namespace fuzzkey {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

[[noreturn]] void bad(std::size_t line, std::string_view key, const std::string& why) {
  throw ConfigError("config line " + std::to_string(line) + " (" + std::string(key) + "): " + why);
}

std::size_t to_count(std::size_t line, std::string_view key, std::string_view v) {
  std::size_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad(line, key, "expected a non-negative integer");
  return out;
}

double to_real(std::size_t line, std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out)) bad(line, key, "expected a number");
  return out;
}

bool to_bool(std::size_t line, std::string_view key, std::string_view v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  bad(line, key, "expected true/false");
}

}  // namespace

RelevanceMode parse_mode(std::string_view s) {
  if (s == "inference") return RelevanceMode::Inference;
  if (s == "sum") return RelevanceMode::Sum;
  throw ConfigError("unknown relevance mode '" + std::string(s) + "' (inference|sum)");
}

CipherMode parse_cipher_mode(std::string_view s) {
  if (s == "byte") return CipherMode::ByteShift;
  if (s == "letters") return CipherMode::Letters;
  throw ConfigError("unknown cipher mode '" + std::string(s) + "' (byte|letters)");
}

DefuzzConfig PipelineConfig::defuzz() const {
  DefuzzConfig cfg = centers.empty() ? DefuzzConfig::uniform(sets) : DefuzzConfig{centers, 0.0};
  cfg.empty_activation_value = empty_activation_value;
  return cfg;
}

void PipelineConfig::validate() const {
  if (sets < 2) throw ConfigError("sets must be >= 2");
  if (layers < 4) throw ConfigError("layers must be >= 4");
  if (!centers.empty() && centers.size() != sets) {
    throw ConfigError("centers has " + std::to_string(centers.size()) + " values but sets = " + std::to_string(sets));
  }
  defuzz().validate();
  if (const auto* t = std::get_if<Threshold>(&selection); t && !(t->tau >= 0.0 && std::isfinite(t->tau))) {
    throw ConfigError("tau must be a finite value >= 0");
  }
}

PipelineConfig parse_config(std::string_view text, PipelineConfig base) {
  bool saw_k = false;
  bool saw_tau = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    auto line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) bad(line_no, line, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (value.empty()) bad(line_no, key, "missing value");

    try {
      if (key == "sets") {
        base.sets = to_count(line_no, key, value);
      } else if (key == "layers") {
        base.layers = to_count(line_no, key, value);
      } else if (key == "mode") {
        base.mode = parse_mode(value);
      } else if (key == "k") {
        base.selection = TopK{to_count(line_no, key, value)};
        saw_k = true;
      } else if (key == "tau") {
        base.selection = Threshold{to_real(line_no, key, value)};
        saw_tau = true;
      } else if (key == "centers") {
        base.centers.clear();
        std::string_view rest = value;
        while (true) {
          const auto comma = rest.find(',');
          base.centers.push_back(to_real(line_no, key, trim(rest.substr(0, comma))));
          if (comma == std::string_view::npos) break;
          rest.remove_prefix(comma + 1);
        }
      } else if (key == "empty_activation_value") {
        base.empty_activation_value = to_real(line_no, key, value);
      } else if (key == "cipher") {
        base.cipher = parse_cipher_mode(value);
      } else if (key == "tag") {
        base.tag = to_bool(line_no, key, value);
      } else if (key == "drop_incomplete_rows") {
        base.drop_incomplete_rows = to_bool(line_no, key, value);
      } else {
        bad(line_no, key, "unknown key");
      }
    } catch (const ConfigError& e) {
      if (std::string_view(e.what()).starts_with("config line")) throw;
      bad(line_no, key, e.what());
    }
  }
  if (saw_k && saw_tau) throw ConfigError("config sets both k and tau; choose one selection rule");
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

}  // namespace fuzzkey
