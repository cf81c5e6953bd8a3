// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include "storegate/error.hpp"

namespace sg {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kEmptyName: return "empty-name";
    case Errc::kIoError: return "io";
    case Errc::kParseError: return "parse";
    case Errc::kDuplicateId: return "duplicate-id";
    case Errc::kDuplicateName: return "duplicate-name";
    case Errc::kDuplicateKey: return "duplicate-key";
    case Errc::kUnregisteredType: return "unregistered-type";
    case Errc::kInvalidKey: return "invalid-key";
    case Errc::kNotFound: return "not-found";
    case Errc::kAmbiguous: return "ambiguous";
    case Errc::kLoadFailed: return "load-failed";
    case Errc::kTypeMismatch: return "type-mismatch";
    case Errc::kLocked: return "locked";
    case Errc::kStaleHandle: return "stale-handle";
    case Errc::kElementNotInContainer: return "element-not-in-container";
    case Errc::kIndexOutOfRange: return "index-out-of-range";
    case Errc::kNoPolicyForKind: return "no-policy-for-kind";
    case Errc::kConverterConflict: return "converter-conflict";
    case Errc::kMissingConverter: return "missing-converter";
    case Errc::kUnknownClassId: return "unknown-class-id";
    case Errc::kDecodeFailed: return "decode-failed";
    case Errc::kConfigError: return "config";
  }
  return "unknown";
}

}  // namespace sg
