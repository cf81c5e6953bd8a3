// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Canonical text encoding of stored payloads.
//
// A payload is a sequence of space-separated tokens: unsigned and signed
// integers in decimal, floating values as their shortest round-trip decimal
// form, strings as "<byte-length>:<bytes>". Containers write their element
// count followed by the elements. Codec<T> describes one type in terms of
// those primitives.

#include <charconv>
#include <concepts>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "storegate/error.hpp"

namespace sg {

class PayloadWriter {
 public:
  void put_uint(std::uint64_t v);
  void put_int(std::int64_t v);
  void put_double(double v);
  void put_string(std::string_view v);

  const std::string& str() const& noexcept { return out_; }
  std::string str() && noexcept { return std::move(out_); }

 private:
  void separate();
  std::string out_;
};

// Throws Error(kDecodeFailed) on any malformed token.
class PayloadReader {
 public:
  explicit PayloadReader(std::string_view in) : in_(in) {}

  std::uint64_t get_uint();
  std::int64_t get_int();
  double get_double();
  std::string get_string();
  // Element counts are bounded by the remaining input to reject absurd sizes.
  std::size_t get_count();

  bool at_end() const noexcept { return pos_ >= in_.size(); }
  void expect_end() const;

 private:
  std::string_view next_token();
  [[noreturn]] void fail(std::string_view what) const;

  std::string_view in_;
  std::size_t pos_ = 0;
};

template <typename T>
struct Codec;

template <typename T>
concept Encodable = requires(const T& value, PayloadWriter& w, PayloadReader& r) {
  Codec<T>::encode(value, w);
  { Codec<T>::decode(r) } -> std::convertible_to<T>;
};

template <std::unsigned_integral T>
  requires(!std::same_as<T, bool>)
struct Codec<T> {
  static void encode(T v, PayloadWriter& w) { w.put_uint(v); }
  static T decode(PayloadReader& r) {
    const std::uint64_t v = r.get_uint();
    if (v > std::numeric_limits<T>::max()) {
      throw Error(Errc::kDecodeFailed, "unsigned value out of range");
    }
    return static_cast<T>(v);
  }
};

template <std::signed_integral T>
struct Codec<T> {
  static void encode(T v, PayloadWriter& w) { w.put_int(v); }
  static T decode(PayloadReader& r) {
    const std::int64_t v = r.get_int();
    if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) {
      throw Error(Errc::kDecodeFailed, "signed value out of range");
    }
    return static_cast<T>(v);
  }
};

template <>
struct Codec<bool> {
  static void encode(bool v, PayloadWriter& w) { w.put_uint(v ? 1 : 0); }
  static bool decode(PayloadReader& r) {
    const std::uint64_t v = r.get_uint();
    if (v > 1) throw Error(Errc::kDecodeFailed, "boolean out of range");
    return v == 1;
  }
};

template <>
struct Codec<double> {
  static void encode(double v, PayloadWriter& w) { w.put_double(v); }
  static double decode(PayloadReader& r) { return r.get_double(); }
};

template <>
struct Codec<std::string> {
  static void encode(const std::string& v, PayloadWriter& w) { w.put_string(v); }
  static std::string decode(PayloadReader& r) { return r.get_string(); }
};

template <Encodable A, Encodable B>
struct Codec<std::pair<A, B>> {
  static void encode(const std::pair<A, B>& v, PayloadWriter& w) {
    Codec<A>::encode(v.first, w);
    Codec<B>::encode(v.second, w);
  }
  static std::pair<A, B> decode(PayloadReader& r) {
    A a = Codec<A>::decode(r);
    B b = Codec<B>::decode(r);
    return {std::move(a), std::move(b)};
  }
};

template <Encodable A, Encodable B>
struct Codec<std::pair<const A, B>> {
  static void encode(const std::pair<const A, B>& v, PayloadWriter& w) {
    Codec<A>::encode(v.first, w);
    Codec<B>::encode(v.second, w);
  }
  static std::pair<const A, B> decode(PayloadReader& r) {
    A a = Codec<A>::decode(r);
    B b = Codec<B>::decode(r);
    return {std::move(a), std::move(b)};
  }
};

template <Encodable E>
struct Codec<std::vector<E>> {
  static void encode(const std::vector<E>& v, PayloadWriter& w) {
    w.put_uint(v.size());
    for (const E& e : v) Codec<E>::encode(e, w);
  }
  static std::vector<E> decode(PayloadReader& r) {
    const std::size_t n = r.get_count();
    std::vector<E> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(Codec<E>::decode(r));
    return out;
  }
};

template <Encodable K, Encodable V>
struct Codec<std::map<K, V>> {
  static void encode(const std::map<K, V>& m, PayloadWriter& w) {
    w.put_uint(m.size());
    for (const auto& [k, v] : m) {
      Codec<K>::encode(k, w);
      Codec<V>::encode(v, w);
    }
  }
  static std::map<K, V> decode(PayloadReader& r) {
    const std::size_t n = r.get_count();
    std::map<K, V> out;
    for (std::size_t i = 0; i < n; ++i) {
      K k = Codec<K>::decode(r);
      V v = Codec<V>::decode(r);
      if (!out.emplace(std::move(k), std::move(v)).second) {
        throw Error(Errc::kDecodeFailed, "duplicate map key");
      }
    }
    return out;
  }
};

template <Encodable T>
std::string encode_payload(const T& value) {
  PayloadWriter w;
  Codec<T>::encode(value, w);
  return std::move(w).str();
}

template <Encodable T>
T decode_payload(std::string_view bytes) {
  PayloadReader r(bytes);
  T value = Codec<T>::decode(r);
  r.expect_end();
  return value;
}

}  // namespace sg
