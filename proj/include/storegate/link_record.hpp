// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "storegate/classid.hpp"

namespace sg {

// Persistent form of a link: the target container's class id and key
// encoding, plus the element index encoding for element links. As a line:
//
//     LINK <container-classid> <base64(container-key)> <base64(index)>
//
// Object links have no index and write "-" in its place (never valid base64).
struct PersistentLink {
  ClassId container;
  std::string container_key;
  std::optional<std::string> index;

  std::string to_line() const;
  // Throws ParseError naming `line_no`.
  static PersistentLink parse(std::string_view line, std::size_t line_no = 1);

  friend bool operator==(const PersistentLink&, const PersistentLink&) = default;
  friend auto operator<=>(const PersistentLink&, const PersistentLink&) = default;
};

}  // namespace sg
