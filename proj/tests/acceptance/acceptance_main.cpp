// Acceptance suite: one line per criterion, nonzero exit if any fails.
//
// Usage: fuzzkey_acceptance <path-to-fuzzkey-cli> <test-data-dir>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "fuzzkey/cipher.hpp"
#include "fuzzkey/dfn.hpp"
#include "fuzzkey/errors.hpp"
#include "fuzzkey/fuzzy_core.hpp"
#include "fuzzkey/ingest.hpp"
#include "fuzzkey/selection.hpp"

namespace fs = std::filesystem;
using namespace fuzzkey;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string g_cli;
fs::path g_data;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// 1. Membership fidelity against a polyline oracle, plus continuity, < 1 s.
Outcome membership_fidelity() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int draws = 0;
  const auto t0 = std::chrono::steady_clock::now();
  while (draws < 10000) {
    double p[3] = {u(rng), u(rng), u(rng)};
    std::sort(p, p + 3);
    if (p[1] - p[0] < 1e-3 || p[2] - p[1] < 1e-3) continue;
    const double x = u(rng) * 1.2 - 0.1;  // include clamped edges
    const int kind = draws % 3;
    double got = 0, want = 0, width = 0;
    std::vector<double> breakpoints;
    if (kind == 0) {
      const auto mf = MembershipFunction::left_shoulder(p[0], p[2], "l");
      got = eval_membership(x, mf);
      want = oracle::polyline(oracle::left_shoulder(p[0], p[2]), x);
      width = mf.min_slope_width();
      breakpoints = {p[0], p[2]};
      for (double bp : breakpoints) {
        const double eps = 1e-6;
        o.check(std::abs(mf(bp - eps) - mf(bp + eps)) <= 10 * eps / width, "left-shoulder discontinuity");
      }
    } else if (kind == 1) {
      const auto mf = MembershipFunction::triangle(p[0], p[1], p[2], "t");
      got = eval_membership(x, mf);
      want = oracle::polyline(oracle::triangle(p[0], p[1], p[2]), x);
      width = mf.min_slope_width();
      breakpoints = {p[0], p[1], p[2]};
      for (double bp : breakpoints) {
        const double eps = 1e-6;
        o.check(std::abs(mf(bp - eps) - mf(bp + eps)) <= 10 * eps / width, "triangle discontinuity");
      }
    } else {
      const auto mf = MembershipFunction::right_shoulder(p[0], p[2], "r");
      got = eval_membership(x, mf);
      want = oracle::polyline(oracle::right_shoulder(p[0], p[2]), x);
      width = mf.min_slope_width();
      breakpoints = {p[0], p[2]};
      for (double bp : breakpoints) {
        const double eps = 1e-6;
        o.check(std::abs(mf(bp - eps) - mf(bp + eps)) <= 10 * eps / width, "right-shoulder discontinuity");
      }
    }
    o.check(got >= 0.0 && got <= 1.0, "value outside [0,1]");
    worst = std::max(worst, std::abs(got - want));
    ++draws;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.check(worst <= 1e-12, "max deviation " + std::to_string(worst));
  o.check(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "10000 draws, max |err| = %.3e, %.3f s", worst, secs);
    o.detail = buf;
  }
  return o;
}

// 2. Partition of unity for N = 2..7 on 1000 grid points.
Outcome partition_of_unity() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t n = 2; n <= 7; ++n) {
    const auto p = make_uniform_partition(n);
    for (int i = 0; i < 1000; ++i) {
      const auto mv = p.fuzzify(i / 999.0);
      double s = 0;
      for (double d : mv.degrees) s += d;
      worst = std::max(worst, std::abs(s - 1.0));
    }
  }
  o.check(worst <= 1e-9, "max |sum - 1| = " + std::to_string(worst));
  if (o.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |sum - 1| = %.3e", worst);
    o.detail = buf;
  }
  return o;
}

// 3. Centroid against a long-double weighted average; the 0.7 activation example.
Outcome centroid_correctness() {
  Outcome o;
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 2 + trial % 7;
    DefuzzConfig cfg;
    for (std::size_t j = 0; j < n; ++j) cfg.centers.push_back(u(rng));
    std::sort(cfg.centers.begin(), cfg.centers.end());
    std::vector<double> mu(n);
    for (auto& m : mu) m = (rng() % 4 == 0) ? 0.0 : u(rng);
    const double got = defuzzify_centroid(ActivationVector{mu}, cfg);
    const double want = oracle::weighted_average(mu, cfg.centers, cfg.empty_activation_value);
    worst = std::max(worst, std::abs(got - want));
  }
  o.check(worst <= 1e-12, "max deviation " + std::to_string(worst));
  const double example = defuzzify_centroid(
      evaluate_rules(MembershipVector{{0.7, 0.3, 0.0}}, RuleBase::identity(3)), DefuzzConfig::uniform(3));
  o.check(std::abs(example - 0.15) <= 1e-12, "activation 0.7 example gave " + std::to_string(example));
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |err| = %.3e; (0.7,0.3,0) -> %.12f", worst, example);
    o.detail = buf;
  }
  return o;
}

// 4. Relevance monotonicity over dominated value multisets.
Outcome relevance_monotonicity() {
  Outcome o;
  const auto partition = make_uniform_partition(3);
  const auto rules = RuleBase::identity(3);
  const auto cfg = DefuzzConfig::uniform(3);
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  int strict_pairs = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 1 + rng() % 16;
    std::vector<double> hi(m), lo(m);
    bool strict = false;
    for (std::size_t i = 0; i < m; ++i) {
      const double r1 = u(rng);
      const double r2 = (rng() % 4 == 0) ? r1 : u(rng);
      const double a = infer(r1, partition, rules, cfg);
      const double b = infer(r2, partition, rules, cfg);
      hi[i] = a >= b ? r1 : r2;
      lo[i] = a >= b ? r2 : r1;
      strict = strict || a != b;
    }
    std::shuffle(hi.begin(), hi.end(), rng);  // multisets, not sequences
    const double s_hi = relevance_inference(hi, partition, rules, cfg);
    const double s_lo = relevance_inference(lo, partition, rules, cfg);
    if (s_hi < s_lo) ++violations;
    if (strict) {
      ++strict_pairs;
      if (!(s_hi > s_lo)) ++violations;
    }
  }
  o.check(violations == 0, std::to_string(violations) + " violations");
  if (o.pass) o.detail = "10000 pairs (" + std::to_string(strict_pairs) + " strict), 0 violations";
  return o;
}

// 5. Top-k equals exhaustive enumeration on 200 random small datasets.
Outcome topk_oracle() {
  Outcome o;
  const auto partition = make_uniform_partition(3);
  const auto rules = RuleBase::identity(3);
  const auto cfg = DefuzzConfig::uniform(3);
  std::mt19937_64 rng(1005);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0;
  int cases = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t rows = 1 + rng() % 16;
    Dataset d;
    for (std::size_t j = 0; j < n; ++j) d.feature_names.push_back("f" + std::to_string(j));
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = std::round(u(rng) * 8.0);  // small grid: tied columns
      d.rows.push_back(row);
    }
    // Duplicate a column now and then to force exact score ties.
    if (n >= 2 && rng() % 2 == 0) {
      for (auto& row : d.rows) row[n - 1] = row[0];
    }
    const auto norm = normalize(d);
    std::vector<RelevanceScore> scores;
    std::vector<double> raw;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = relevance_inference(norm.data.column(j), partition, rules, cfg);
      scores.push_back({j, s, RelevanceMode::Inference});
      raw.push_back(s);
    }
    for (std::size_t k = 0; k <= n + 1; ++k) {
      ++cases;
      auto got = select_topk(scores, k).selected;
      std::sort(got.begin(), got.end());
      if (got != oracle::brute_force_topk(raw, k)) ++mismatches;
    }
  }
  o.check(mismatches == 0, std::to_string(mismatches) + " mismatches");
  if (o.pass) o.detail = "200 datasets, " + std::to_string(cases) + " (dataset, k) cases, 0 mismatches";
  return o;
}

// 6. mf_evals = N * n for 50 random (n, N, L).
Outcome complexity_counters() {
  Outcome o;
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const std::size_t sets = 2 + rng() % 8;
    const std::size_t layers = 4 + rng() % 5;
    const auto net = DynamicFuzzyNetwork::create(n, sets, layers);
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    const auto p = net.propagate(x);
    std::uint64_t ops = 0;
    for (const auto& w : net.layers()) ops += w.rows() * w.cols();
    o.check(p.stats.mf_evals == sets * n, "mf_evals mismatch at n=" + std::to_string(n));
    o.check(p.stats.hidden_ops == ops, "hidden_ops mismatch at n=" + std::to_string(n));
  }
  if (o.pass) o.detail = "50 triples, mf_evals == N*n and hidden_ops == sum(rows*cols)";
  return o;
}

// 7. Cipher roundtrip, identity keys, HELLO/SECRET vs tabula recta.
Outcome cipher_roundtrip() {
  Outcome o;
  std::mt19937_64 rng(1007);
  for (bool letters : {false, true}) {
    const auto mode = letters ? CipherMode::Letters : CipherMode::ByteShift;
    for (int trial = 0; trial < 1000; ++trial) {
      Bytes p(rng() % 257), k(1 + rng() % 32);
      for (auto& b : p) b = letters ? static_cast<std::uint8_t>('A' + rng() % 26) : static_cast<std::uint8_t>(rng());
      for (auto& b : k) b = letters ? static_cast<std::uint8_t>('A' + rng() % 26) : static_cast<std::uint8_t>(rng());
      const CipherKey key(k, mode);
      const auto c = encrypt(p, key);
      o.check(c.size() == p.size(), "length changed");
      o.check(decrypt(c, key) == p, "roundtrip failed");
    }
    Bytes p(100);
    for (auto& b : p) b = letters ? static_cast<std::uint8_t>('A' + rng() % 26) : static_cast<std::uint8_t>(rng());
    const CipherKey identity = letters ? CipherKey("AAAA", mode) : CipherKey(Bytes(4, 0), mode);
    o.check(encrypt(p, identity) == p, "identity key changed plaintext");
  }
  const auto hello = to_string(encrypt(to_bytes("HELLO"), CipherKey("SECRET", CipherMode::Letters)));
  const auto table = oracle::tabula_recta("HELLO", "SECRET");
  o.check(hello == table, "HELLO/SECRET gave " + hello + ", table says " + table);
  if (o.pass) o.detail = "2x1000 roundtrips; HELLO + SECRET -> " + hello + " (tabula recta " + table + ")";
  return o;
}

// 8. Golden FZK1 files and 100/100 corruption detection.
Outcome envelope_format() {
  Outcome o;
  const auto golden_tagged = to_bytes(slurp(g_data / "golden_byte_tagged.fzk"));
  const auto golden_letters = to_bytes(slurp(g_data / "golden_letters_tagged.fzk"));
  const CipherKey byte_key("K3y!", CipherMode::ByteShift);
  const CipherKey letter_key("SECRET", CipherMode::Letters);
  const auto plain = to_bytes("0\ttemp\t0.500000000\n");

  o.check(!golden_tagged.empty() && !golden_letters.empty(), "golden files missing");
  o.check(encode_envelope(seal(plain, byte_key, true)) == golden_tagged, "byte-shift encode differs from golden");
  o.check(encode_envelope(seal(to_bytes("HELLO"), letter_key, true)) == golden_letters,
          "letters encode differs from golden");
  try {
    o.check(open(decode_envelope(golden_tagged), byte_key) == plain, "golden decode mismatch");
    o.check(to_string(open(decode_envelope(golden_letters), letter_key)) == "HELLO", "golden letters decode mismatch");
  } catch (const Error& e) {
    o.check(false, std::string("golden decode threw: ") + e.what());
  }

  std::mt19937_64 rng(1008);
  int detected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Bytes msg(1 + rng() % 80);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    auto wire = encode_envelope(seal(msg, byte_key, true));
    // Flip one byte in the tag or ciphertext region (after the 7-byte header).
    const std::size_t pos = 7 + rng() % (wire.size() - 7);
    wire[pos] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    try {
      open(decode_envelope(wire), byte_key);
    } catch (const IntegrityError&) {
      ++detected;
    }
  }
  o.check(detected == 100, std::to_string(detected) + "/100 corruptions detected");
  if (o.pass) o.detail = "golden encode/decode byte-exact; 100/100 corruptions detected";
  return o;
}

int run_cli(const std::string& args) {
  const int status = std::system(("'" + g_cli + "' " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 9. pipeline determinism across repeated runs and job counts.
Outcome end_to_end_determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("fuzzkey_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto key = dir / "key";
  std::ofstream(key) << "fuzzy-key-material\n";
  ::setenv("FUZZKEY_KEY_FILE", key.c_str(), 1);

  const auto fixture = (g_data / "fixture_5x20.csv").string();
  const auto config = (g_data / "pipeline.conf").string();
  std::string ref_report, ref_env;
  int runs = 0;
  for (int jobs : {1, 4}) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto env = dir / ("run" + std::to_string(runs) + ".fzk");
      const auto report = dir / ("run" + std::to_string(runs) + ".json");
      const int rc = run_cli("pipeline '" + fixture + "' --config '" + config + "' --jobs " + std::to_string(jobs) +
                             " --output '" + env.string() + "' --report '" + report.string() + "'");
      o.check(rc == 0, "pipeline exited " + std::to_string(rc));
      const auto r = slurp(report);
      const auto e = slurp(env);
      if (runs == 0) {
        ref_report = r;
        ref_env = e;
        o.check(!r.empty() && e.size() > 15, "empty outputs");
      } else {
        o.check(r == ref_report, "report differs on run " + std::to_string(runs));
        o.check(e == ref_env, "envelope differs on run " + std::to_string(runs));
      }
      ++runs;
    }
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = "6 runs (3x --jobs 1, 3x --jobs 4): report and envelope byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: " << argv[0] << " <fuzzkey-cli> <test-data-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_data = argv[2];

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 membership-function fidelity", membership_fidelity},
      {"AC2 partition of unity", partition_of_unity},
      {"AC3 centroid correctness", centroid_correctness},
      {"AC4 relevance monotonicity", relevance_monotonicity},
      {"AC5 top-k oracle equivalence", topk_oracle},
      {"AC6 complexity counters", complexity_counters},
      {"AC7 cipher roundtrip", cipher_roundtrip},
      {"AC8 envelope format", envelope_format},
      {"AC9 end-to-end determinism", end_to_end_determinism},
  };

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << "\n";
    failed += o.pass ? 0 : 1;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
