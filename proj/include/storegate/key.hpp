// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// User key types. A key must be totally ordered and persistable: KeyAdapter<K>
// supplies a canonical byte-string encoding and its inverse. Violations of
// ordering or of the encoding signatures fail to compile; a lossy adapter is
// caught the first time a key goes through validate_key().

#include <charconv>
#include <concepts>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "storegate/error.hpp"

namespace sg {

template <typename K>
struct KeyAdapter;

template <>
struct KeyAdapter<std::string> {
  static std::string encode(const std::string& key) { return key; }
  static std::string decode(std::string_view bytes) { return std::string(bytes); }
};

// Integers encode as plain decimal ("42", "-7").
template <std::integral I>
  requires(!std::same_as<I, bool>)
struct KeyAdapter<I> {
  static std::string encode(I key) { return std::to_string(key); }
  static I decode(std::string_view bytes) {
    I value{};
    const auto [ptr, ec] =
        std::from_chars(bytes.data(), bytes.data() + bytes.size(), value);
    if (ec != std::errc{} || ptr != bytes.data() + bytes.size()) {
      throw Error(Errc::kInvalidKey,
                  "not a decimal integer key: '" + std::string(bytes) + "'");
    }
    return value;
  }
};

template <typename K>
concept KeyConcept = std::totally_ordered<K> && std::copy_constructible<K> &&
                     requires(const K& key, std::string_view bytes) {
                       { KeyAdapter<K>::encode(key) } -> std::convertible_to<std::string>;
                       { KeyAdapter<K>::decode(bytes) } -> std::convertible_to<K>;
                     };

// Returns the canonical encoding of `key` after checking that it decodes back
// to an equivalent key.
template <KeyConcept K>
std::string validate_key(const K& key) {
  std::string encoding = KeyAdapter<K>::encode(key);
  std::optional<K> decoded;
  try {
    decoded.emplace(KeyAdapter<K>::decode(encoding));
  } catch (const Error& e) {
    throw Error(Errc::kInvalidKey, "key does not decode: " + std::string(e.what()));
  }
  if (*decoded < key || key < *decoded || !(*decoded == key)) {
    throw Error(Errc::kInvalidKey,
                "key encoding '" + encoding + "' does not round-trip");
  }
  return encoding;
}

inline std::string validate_key(std::string_view key) { return std::string(key); }

// Key argument accepted by the store API: either a plain string (borrowed)
// or the validated encoding of a user key (owned).
class KeyRef {
 public:
  KeyRef(std::string_view key) : repr_(key) {}
  KeyRef(const char* key) : repr_(std::string_view(key)) {}
  KeyRef(const std::string& key) : repr_(std::string_view(key)) {}

  template <KeyConcept K>
    requires(!std::convertible_to<const K&, std::string_view>)
  KeyRef(const K& key) : repr_(validate_key(key)) {}

  std::string_view encoding() const noexcept {
    if (const auto* view = std::get_if<std::string_view>(&repr_)) return *view;
    return std::get<std::string>(repr_);
  }

 private:
  std::variant<std::string_view, std::string> repr_;
};

}  // namespace sg
