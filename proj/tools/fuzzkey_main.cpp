// fuzzkey: fuzzy feature selection with a key-cycled substitution cipher.
//
// Exit codes: 0 ok, 1 internal error, 2 usage, 3 data format or I/O,
// 4 configuration or key, 5 integrity check failed.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fuzzkey/cipher.hpp"
#include "fuzzkey/config.hpp"
#include "fuzzkey/errors.hpp"
#include "fuzzkey/ingest.hpp"
#include "fuzzkey/pipeline.hpp"

namespace fs = std::filesystem;
using namespace fuzzkey;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitConfig = 4;
constexpr int kExitIntegrity = 5;

constexpr const char* kKeyEnv = "FUZZKEY_KEY_FILE";

class UsageError : public Error {
 public:
  using Error::Error;
};

struct ConfigFlags {
  std::optional<std::string> config_path;
  std::optional<std::size_t> sets;
  std::optional<std::size_t> layers;
  std::optional<std::string> mode;
  std::optional<std::size_t> k;
  std::optional<double> tau;
  std::optional<std::string> cipher;
  std::optional<bool> tag;
  bool drop_incomplete_rows = false;

  void attach(CLI::App& app, bool selection_flags, bool cipher_flags) {
    app.add_option("--config", config_path, "Config file (key = value lines)");
    app.add_option("--sets", sets, "Fuzzy sets per feature (N)");
    if (selection_flags) {
      app.add_option("--layers", layers, "Network layer count (L)");
      app.add_option("--mode", mode, "Relevance mode: inference|sum");
      auto* k_opt = app.add_option("--k", k, "Select the top k features");
      auto* tau_opt = app.add_option("--tau", tau, "Select features scoring >= tau");
      k_opt->excludes(tau_opt);
      app.add_flag("--drop-incomplete-rows", drop_incomplete_rows, "Skip rows with empty cells");
    }
    if (cipher_flags) {
      app.add_option("--cipher", cipher, "Cipher mode: byte|letters");
      app.add_flag("--tag,!--no-tag", tag, "Attach an integrity tag (default on)");
    }
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (config_path) cfg = load_config(*config_path, cfg);
    if (sets) cfg.sets = *sets;
    if (layers) cfg.layers = *layers;
    if (mode) cfg.mode = parse_mode(*mode);
    if (k) cfg.selection = TopK{*k};
    if (tau) cfg.selection = Threshold{*tau};
    if (cipher) cfg.cipher = parse_cipher_mode(*cipher);
    if (tag) cfg.tag = *tag;
    if (drop_incomplete_rows) cfg.drop_incomplete_rows = true;
    cfg.validate();
    return cfg;
  }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

void emit(const std::optional<std::string>& path, std::string_view bytes) {
  if (path) {
    write_file(*path, bytes);
  } else {
    std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
  }
}

/// Key material comes from a file, never from argv. One trailing LF or
/// CRLF is stripped so keys written with `echo` work.
CipherKey load_key(const std::optional<std::string>& key_file, CipherMode mode) {
  std::string path;
  if (key_file) {
    path = *key_file;
  } else if (const char* env = std::getenv(kKeyEnv); env && *env) {
    path = env;
  } else {
    throw ConfigError(std::string("no key material: pass --key-file or set ") + kKeyEnv);
  }
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(std::string("key file: ") + e.what());
  }
  if (!text.empty() && text.back() == '\n') text.pop_back();
  if (!text.empty() && text.back() == '\r') text.pop_back();
  return CipherKey(text, mode);
}

std::string seal_to_bytes(std::string_view plaintext, const CipherKey& key, bool tag) {
  return to_string(encode_envelope(seal(to_bytes(plaintext), key, tag)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuzzkey: fuzzy feature selection and key-based transformation of selected feature sets"};
  app.require_subcommand(1);
  unsigned jobs = 1;
  std::optional<std::string> output;
  std::optional<std::string> report_path;
  std::optional<std::string> key_file;
  std::string data_path;
  std::string input_path;

  ConfigFlags select_flags;
  auto* select_cmd = app.add_subcommand("select", "Rank and select features of a CSV table");
  select_cmd->add_option("data", data_path, "Input CSV")->required();
  select_cmd->add_option("--output", output, "Write the serialized selection here");
  select_cmd->add_option("--report", report_path, "Write the report here instead of stdout");
  select_cmd->add_option("--jobs", jobs, "Worker threads for feature scoring")->check(CLI::Range(1u, 256u));
  select_flags.attach(*select_cmd, true, false);

  ConfigFlags pipeline_flags;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "select, then encrypt the selection into an envelope");
  pipeline_cmd->add_option("data", data_path, "Input CSV")->required();
  pipeline_cmd->add_option("--output", output, "Envelope output path")->required();
  pipeline_cmd->add_option("--report", report_path, "Write the report here instead of stdout");
  pipeline_cmd->add_option("--jobs", jobs, "Worker threads for feature scoring")->check(CLI::Range(1u, 256u));
  pipeline_cmd->add_option("--key-file", key_file, "Key file (default: $FUZZKEY_KEY_FILE)");
  pipeline_flags.attach(*pipeline_cmd, true, true);

  ConfigFlags encrypt_flags;
  auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt a file into an FZK1 envelope");
  encrypt_cmd->add_option("input", input_path, "Plaintext file (e.g. a serialized selection)")->required();
  encrypt_cmd->add_option("--output", output, "Envelope output path")->required();
  encrypt_cmd->add_option("--key-file", key_file, "Key file (default: $FUZZKEY_KEY_FILE)");
  encrypt_flags.attach(*encrypt_cmd, false, true);

  auto* decrypt_cmd = app.add_subcommand("decrypt", "Verify and decrypt an FZK1 envelope");
  decrypt_cmd->add_option("input", input_path, "Envelope file")->required();
  decrypt_cmd->add_option("--output", output, "Plaintext output path (default stdout)");
  decrypt_cmd->add_option("--key-file", key_file, "Key file (default: $FUZZKEY_KEY_FILE)");

  ConfigFlags membership_flags;
  std::optional<double> x_value;
  std::optional<std::string> sweep_spec;
  auto* membership_cmd = app.add_subcommand("membership", "Emit membership degrees and centroids for plotting");
  auto* x_opt = membership_cmd->add_option("--x", x_value, "Single input value");
  membership_cmd->add_option("--sweep", sweep_spec, "START:STOP:STEP (inclusive)")->excludes(x_opt);
  membership_cmd->add_option("--output", output, "Write the table here instead of stdout");
  membership_flags.attach(*membership_cmd, false, false);

  std::size_t stats_n = 1;
  std::size_t stats_sets = 3;
  std::size_t stats_layers = 4;
  auto* stats_cmd = app.add_subcommand("stats", "Network shape and propagation counters");
  stats_cmd->add_option("--n", stats_n, "Feature count")->required();
  stats_cmd->add_option("--sets", stats_sets, "Fuzzy sets per feature");
  stats_cmd->add_option("--layers", stats_layers, "Layer count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "fuzzkey: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*select_cmd || *pipeline_cmd) {
      const auto& flags = *select_cmd ? select_flags : pipeline_flags;
      const auto cfg = flags.resolve();
      // Read the key before the heavy work so key problems fail fast.
      std::optional<CipherKey> key;
      if (*pipeline_cmd) key = load_key(key_file, cfg.cipher);
      const auto data = load_table(data_path, LoadOptions{cfg.drop_incomplete_rows});
      const auto run = run_selection(data, cfg, jobs);
      const auto selection = serialized_selection(run);
      if (*select_cmd) {
        if (output) write_file(*output, selection);
      } else {
        write_file(*output, seal_to_bytes(selection, *key, cfg.tag));
      }
      emit(report_path, render_report(run, cfg));
    } else if (*encrypt_cmd) {
      const auto cfg = encrypt_flags.resolve();
      const auto key = load_key(key_file, cfg.cipher);
      write_file(*output, seal_to_bytes(read_file(input_path), key, cfg.tag));
    } else if (*decrypt_cmd) {
      const auto raw = read_file(input_path);
      const auto env = decode_envelope(to_bytes(raw));
      const auto key = load_key(key_file, env.mode);
      emit(output, to_string(open(env, key)));
    } else if (*membership_cmd) {
      const auto cfg = membership_flags.resolve();
      std::vector<double> xs;
      if (x_value) {
        xs.push_back(*x_value);
      } else if (sweep_spec) {
        double a = 0, b = 0, s = 0;
        char tail = 0;
        if (std::sscanf(sweep_spec->c_str(), "%lf:%lf:%lf%c", &a, &b, &s, &tail) != 3) {
          throw UsageError("--sweep expects START:STOP:STEP");
        }
        xs = sweep(a, b, s);
      } else {
        throw UsageError("membership needs --x or --sweep");
      }
      const auto rows = membership_table(cfg, xs);
      emit(output, render_membership_table(cfg, rows));
    } else if (*stats_cmd) {
      std::cout << render_network_stats(stats_n, stats_sets, stats_layers);
    }
  } catch (const UsageError& e) {
    std::cerr << "fuzzkey: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IntegrityError& e) {
    std::cerr << "fuzzkey: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const ConfigError& e) {
    std::cerr << "fuzzkey: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidKey& e) {
    std::cerr << "fuzzkey: invalid key: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "fuzzkey: format error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    std::cerr << "fuzzkey: " << e.what() << "\n";
    return kExitData;
  } catch (const InvalidPlaintext& e) {
    std::cerr << "fuzzkey: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "fuzzkey: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
