// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace sg::base64 {

// Standard alphabet with '=' padding.
std::string encode(std::string_view bytes);

// Strict: rejects bad characters, bad padding and non-canonical trailing bits.
std::optional<std::string> decode(std::string_view text);

}  // namespace sg::base64
