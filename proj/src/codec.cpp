// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include "storegate/codec.hpp"

#include <array>
#include <cmath>

namespace sg {

void PayloadWriter::separate() {
  if (!out_.empty()) out_ += ' ';
}

void PayloadWriter::put_uint(std::uint64_t v) {
  separate();
  out_ += std::to_string(v);
}

void PayloadWriter::put_int(std::int64_t v) {
  separate();
  out_ += std::to_string(v);
}

void PayloadWriter::put_double(double v) {
  separate();
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out_.append(buf.data(), ptr);
}

void PayloadWriter::put_string(std::string_view v) {
  separate();
  out_ += std::to_string(v.size());
  out_ += ':';
  out_ += v;
}

void PayloadReader::fail(std::string_view what) const {
  throw Error(Errc::kDecodeFailed, "payload offset " + std::to_string(pos_) +
                                       ": " + std::string(what));
}

std::string_view PayloadReader::next_token() {
  if (pos_ > 0) {
    if (pos_ >= in_.size() || in_[pos_] != ' ') fail("expected separator");
    ++pos_;
  }
  if (pos_ >= in_.size()) fail("unexpected end of payload");
  const std::size_t end = std::min(in_.find(' ', pos_), in_.size());
  std::string_view tok = in_.substr(pos_, end - pos_);
  if (tok.empty()) fail("empty token");
  pos_ = end;
  return tok;
}

std::uint64_t PayloadReader::get_uint() {
  const std::string_view tok = next_token();
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("bad unsigned");
  return v;
}

std::int64_t PayloadReader::get_int() {
  const std::string_view tok = next_token();
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("bad integer");
  return v;
}

double PayloadReader::get_double() {
  const std::string_view tok = next_token();
  double v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("bad double");
  return v;
}

std::string PayloadReader::get_string() {
  if (pos_ > 0) {
    if (pos_ >= in_.size() || in_[pos_] != ' ') fail("expected separator");
    ++pos_;
  }
  const std::size_t colon = in_.find(':', pos_);
  if (colon == std::string_view::npos) fail("missing string length");
  std::size_t len = 0;
  const char* first = in_.data() + pos_;
  const char* last = in_.data() + colon;
  const auto [ptr, ec] = std::from_chars(first, last, len);
  if (first == last || ec != std::errc{} || ptr != last) fail("bad string length");
  if (len > in_.size() - colon - 1) fail("string overruns payload");
  std::string out(in_.substr(colon + 1, len));
  pos_ = colon + 1 + len;
  return out;
}

std::size_t PayloadReader::get_count() {
  const std::uint64_t n = get_uint();
  if (n > in_.size()) fail("element count exceeds payload size");
  return static_cast<std::size_t>(n);
}

void PayloadReader::expect_end() const {
  if (!at_end()) fail("trailing bytes");
}

}  // namespace sg
