#pragma once

// Key-cycled polyalphabetic substitution with an optional keyed FNV-style
// tag. This is a teaching construction and is NOT secure against modern
// cryptanalysis; do not use it to protect real secrets.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzkey/selection.hpp"

namespace fuzzkey {

using Bytes = std::vector<std::uint8_t>;

enum class CipherMode : std::uint8_t {
  ByteShift = 0x00,  ///< c = (p + k) mod 256
  Letters = 0x01,    ///< A-Z only, c = (p + k) mod 26
};

std::string_view to_string(CipherMode mode);

class CipherKey {
 public:
  /// Throws InvalidKey if empty, or (letters mode) not all 'A'-'Z'.
  CipherKey(Bytes bytes, CipherMode mode);
  CipherKey(std::string_view text, CipherMode mode);

  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }
  CipherMode mode() const { return mode_; }
  std::uint8_t at_cycled(std::size_t pos) const { return bytes_[pos % bytes_.size()]; }

 private:
  Bytes bytes_;
  CipherMode mode_;
};

Bytes encrypt(std::span<const std::uint8_t> plaintext, const CipherKey& key);
Bytes decrypt(std::span<const std::uint8_t> ciphertext, const CipherKey& key);

inline constexpr std::uint64_t kTagOffsetBasis = 14695981039346656037ULL;
inline constexpr std::uint64_t kTagPrime = 1099511628211ULL;

std::uint64_t make_tag(std::span<const std::uint8_t> message, const CipherKey& key);
bool verify_tag(std::span<const std::uint8_t> message, const CipherKey& key, std::uint64_t tag);

inline constexpr std::array<std::uint8_t, 4> kEnvelopeMagic = {0x46, 0x5A, 0x4B, 0x31};  // "FZK1"
inline constexpr std::uint8_t kEnvelopeVersion = 0x01;

/**
 * On-disk layout:
 *   magic "FZK1" | version 0x01 | mode | flags (bit0: tag present)
 *   | tag, 8 bytes big-endian, iff flagged | ciphertext to end of file
 */
struct CipherEnvelope {
  std::uint8_t version = kEnvelopeVersion;
  CipherMode mode = CipherMode::ByteShift;
  std::optional<std::uint64_t> tag;
  Bytes ciphertext;

  bool operator==(const CipherEnvelope&) const = default;
};

Bytes encode_envelope(const CipherEnvelope& env);

/// Throws FormatError on bad magic, unknown version/mode, reserved flag bits,
/// or a truncated header.
CipherEnvelope decode_envelope(std::span<const std::uint8_t> data);

/// Encrypt-then-tag: the tag covers the ciphertext.
CipherEnvelope seal(std::span<const std::uint8_t> plaintext, const CipherKey& key, bool with_tag);

/// Verifies the tag (IntegrityError on mismatch) before decrypting.
Bytes open(const CipherEnvelope& env, const CipherKey& key);

/// "rank\tname\tscore\n" per selected feature, score with 9 decimals.
/// `names` is indexed by feature id.
std::string serialize_selection(const SelectionResult& result, std::span<const std::string> names);

struct SerializedRow {
  std::size_t rank = 0;
  std::string name;
  double score = 0.0;
};

std::vector<SerializedRow> parse_selection(std::string_view text);

Bytes to_bytes(std::string_view s);
std::string to_string(std::span<const std::uint8_t> b);

}  // namespace fuzzkey
