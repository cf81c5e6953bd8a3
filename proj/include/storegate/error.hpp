// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sg {

enum class Errc {
  kEmptyName,
  kIoError,
  kParseError,
  kDuplicateId,
  kDuplicateName,
  kDuplicateKey,
  kUnregisteredType,
  kInvalidKey,
  kNotFound,
  kAmbiguous,
  kLoadFailed,
  kTypeMismatch,
  kLocked,
  kStaleHandle,
  kElementNotInContainer,
  kIndexOutOfRange,
  kNoPolicyForKind,
  kConverterConflict,
  kMissingConverter,
  kUnknownClassId,
  kDecodeFailed,
  kConfigError,
};

// Stable lower-case token for an error code, e.g. "not-found".
std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised by parsers; carries the 1-based line that failed.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(Errc::kParseError,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sg
