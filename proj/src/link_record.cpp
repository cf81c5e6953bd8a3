// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include "storegate/link_record.hpp"

#include <charconv>
#include <vector>

#include "storegate/base64.hpp"

namespace sg {

std::string PersistentLink::to_line() const {
  std::string out = "LINK ";
  out += std::to_string(container.value());
  out += ' ';
  out += base64::encode(container_key);
  out += ' ';
  out += index ? base64::encode(*index) : std::string("-");
  return out;
}

PersistentLink PersistentLink::parse(std::string_view line, std::size_t line_no) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t end = std::min(line.find(' ', pos), line.size());
    fields.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  if (fields.size() != 4 || fields[0] != "LINK") {
    throw ParseError(line_no, "expected 'LINK <classid> <key> <index>'");
  }
  std::uint32_t id = 0;
  const auto [ptr, ec] =
      std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), id);
  if (fields[1].empty() || ec != std::errc{} ||
      ptr != fields[1].data() + fields[1].size() || id < ClassId::kMin ||
      id >= ClassId::kLimit) {
    throw ParseError(line_no, "bad link class id '" + std::string(fields[1]) + "'");
  }
  auto key = base64::decode(fields[2]);
  if (!key || key->empty()) throw ParseError(line_no, "bad link container key");

  PersistentLink link{ClassId(id), std::move(*key), std::nullopt};
  if (fields[3] != "-") {
    auto index = base64::decode(fields[3]);
    if (!index || index->empty()) throw ParseError(line_no, "bad link index");
    link.index = std::move(*index);
  }
  return link;
}

}  // namespace sg
