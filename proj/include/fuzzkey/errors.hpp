#pragma once

#include <stdexcept>
#include <string>

namespace fuzzkey {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: malformed membership functions, bad layer counts,
/// unparseable config values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (length mismatch, index out
/// of range, non-finite input).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed external data: CSV tables, envelopes, serialized selections.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InvalidKey : public Error {
 public:
  using Error::Error;
};

class InvalidPlaintext : public Error {
 public:
  using Error::Error;
};

/// Envelope tag does not match its ciphertext.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace fuzzkey
