#include "fuzzkey/cipher.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "fuzzkey/errors.hpp"

namespace fuzzkey {

namespace {

bool is_upper(std::uint8_t b) { return b >= 'A' && b <= 'Z'; }

void check_letters(std::span<const std::uint8_t> data, const char* what) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!is_upper(data[i])) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "letters mode requires A-Z %s; byte %zu is 0x%02X", what, i, data[i]);
      throw InvalidPlaintext(msg);
    }
  }
}

template <typename Op>
Bytes transform(std::span<const std::uint8_t> in, const CipherKey& key, Op op, const char* what) {
  Bytes out(in.size());
  if (key.mode() == CipherMode::Letters) {
    check_letters(in, what);
    for (std::size_t t = 0; t < in.size(); ++t) {
      const int shift = key.at_cycled(t) - 'A';
      out[t] = static_cast<std::uint8_t>('A' + op(in[t] - 'A', shift, 26));
    }
  } else {
    for (std::size_t t = 0; t < in.size(); ++t) {
      out[t] = static_cast<std::uint8_t>(op(in[t], key.at_cycled(t), 256));
    }
  }
  return out;
}

int add_mod(int p, int k, int m) { return (p + k) % m; }
int sub_mod(int c, int k, int m) { return (c - k + m) % m; }

}  // namespace

std::string_view to_string(CipherMode mode) { return mode == CipherMode::Letters ? "letters" : "byte"; }

CipherKey::CipherKey(Bytes bytes, CipherMode mode) : bytes_(std::move(bytes)), mode_(mode) {
  if (bytes_.empty()) throw InvalidKey("key is empty");
  if (mode_ == CipherMode::Letters && !std::all_of(bytes_.begin(), bytes_.end(), is_upper)) {
    throw InvalidKey("letters-mode key must consist of uppercase A-Z only");
  }
}

CipherKey::CipherKey(std::string_view text, CipherMode mode) : CipherKey(to_bytes(text), mode) {}

Bytes encrypt(std::span<const std::uint8_t> plaintext, const CipherKey& key) {
  return transform(plaintext, key, add_mod, "plaintext");
}

Bytes decrypt(std::span<const std::uint8_t> ciphertext, const CipherKey& key) {
  return transform(ciphertext, key, sub_mod, "ciphertext");
}

std::uint64_t make_tag(std::span<const std::uint8_t> message, const CipherKey& key) {
  std::uint64_t t = kTagOffsetBasis;
  for (std::size_t i = 0; i < message.size(); ++i) {
    t ^= static_cast<std::uint64_t>(message[i] ^ key.at_cycled(i));
    t *= kTagPrime;
  }
  return t;
}

bool verify_tag(std::span<const std::uint8_t> message, const CipherKey& key, std::uint64_t tag) {
  return make_tag(message, key) == tag;
}

Bytes encode_envelope(const CipherEnvelope& env) {
  Bytes out(kEnvelopeMagic.begin(), kEnvelopeMagic.end());
  out.push_back(env.version);
  out.push_back(static_cast<std::uint8_t>(env.mode));
  out.push_back(env.tag ? 0x01 : 0x00);
  if (env.tag) {
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(*env.tag >> shift));
  }
  out.insert(out.end(), env.ciphertext.begin(), env.ciphertext.end());
  return out;
}

CipherEnvelope decode_envelope(std::span<const std::uint8_t> data) {
  constexpr std::size_t kHeader = 7;
  if (data.size() < kHeader) throw FormatError("envelope truncated: " + std::to_string(data.size()) + " bytes");
  if (!std::equal(kEnvelopeMagic.begin(), kEnvelopeMagic.end(), data.begin())) {
    throw FormatError("not an FZK1 envelope (bad magic)");
  }
  CipherEnvelope env;
  env.version = data[4];
  if (env.version != kEnvelopeVersion) throw FormatError("unsupported envelope version " + std::to_string(data[4]));
  if (data[5] > 0x01) throw FormatError("unknown cipher mode byte " + std::to_string(data[5]));
  env.mode = static_cast<CipherMode>(data[5]);
  const std::uint8_t flags = data[6];
  if (flags & ~0x01u) throw FormatError("reserved envelope flag bits set");

  std::size_t pos = kHeader;
  if (flags & 0x01u) {
    if (data.size() < kHeader + 8) throw FormatError("envelope truncated inside tag");
    std::uint64_t tag = 0;
    for (std::size_t i = 0; i < 8; ++i) tag = (tag << 8) | data[pos + i];
    env.tag = tag;
    pos += 8;
  }
  env.ciphertext.assign(data.begin() + static_cast<std::ptrdiff_t>(pos), data.end());
  return env;
}

CipherEnvelope seal(std::span<const std::uint8_t> plaintext, const CipherKey& key, bool with_tag) {
  CipherEnvelope env;
  env.mode = key.mode();
  env.ciphertext = encrypt(plaintext, key);
  if (with_tag) env.tag = make_tag(env.ciphertext, key);
  return env;
}

Bytes open(const CipherEnvelope& env, const CipherKey& key) {
  if (env.mode != key.mode()) throw InvalidKey("key mode does not match envelope mode");
  if (env.tag && !verify_tag(env.ciphertext, key, *env.tag)) throw IntegrityError("integrity check failed");
  return decrypt(env.ciphertext, key);
}

std::string serialize_selection(const SelectionResult& result, std::span<const std::string> names) {
  std::string out;
  std::size_t rank = 0;
  for (std::size_t id : result.selected) {
    while (rank < result.ranked.size() && result.ranked[rank].feature_id != id) ++rank;
    if (rank == result.ranked.size()) throw ContractViolation("selected feature missing from ranking");
    if (id >= names.size()) throw ContractViolation("no name for feature " + std::to_string(id));
    const auto& name = names[id];
    if (name.find_first_of("\t\r\n") != std::string::npos) {
      throw ContractViolation("feature name contains a tab or line break");
    }
    char score[64];
    std::snprintf(score, sizeof score, "%.9f", result.ranked[rank].score);
    out += std::to_string(rank);
    out += '\t';
    out += name;
    out += '\t';
    out += score;
    out += '\n';
  }
  return out;
}

std::vector<SerializedRow> parse_selection(std::string_view text) {
  std::vector<SerializedRow> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    if (eol == std::string_view::npos) throw FormatError("selection line " + std::to_string(line_no) + " lacks LF");
    const auto line = text.substr(0, eol);
    text.remove_prefix(eol + 1);

    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos) {
      throw FormatError("selection line " + std::to_string(line_no) + " must have exactly 3 tab-separated fields");
    }
    SerializedRow row;
    row.name = std::string(line.substr(t1 + 1, t2 - t1 - 1));
    const auto rank_s = line.substr(0, t1);
    const auto score_s = line.substr(t2 + 1);
    auto [rp, rec] = std::from_chars(rank_s.data(), rank_s.data() + rank_s.size(), row.rank);
    auto [sp, sec] = std::from_chars(score_s.data(), score_s.data() + score_s.size(), row.score);
    if (rec != std::errc{} || rp != rank_s.data() + rank_s.size() || sec != std::errc{} ||
        sp != score_s.data() + score_s.size()) {
      throw FormatError("selection line " + std::to_string(line_no) + " has a malformed rank or score");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::string to_string(std::span<const std::uint8_t> b) { return std::string(b.begin(), b.end()); }

}  // namespace fuzzkey
