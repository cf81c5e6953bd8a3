// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include "storegate/links.hpp"

#include <charconv>

namespace sg {
namespace detail {

std::optional<std::size_t> parse_position(std::string_view index) {
  if (index.empty() || (index.size() > 1 && index[0] == '0')) return std::nullopt;
  std::size_t pos = 0;
  const auto [ptr, ec] = std::from_chars(index.data(), index.data() + index.size(), pos);
  if (ec != std::errc{} || ptr != index.data() + index.size()) return std::nullopt;
  return pos;
}

void throw_index_out_of_range(std::string_view index, std::size_t size) {
  throw Error(Errc::kIndexOutOfRange, "index '" + std::string(index) +
                                          "' does not name an element of a container of size " +
                                          std::to_string(size));
}

}  // namespace detail

IndexingRegistry& IndexingRegistry::instance() {
  static IndexingRegistry registry;
  return registry;
}

void IndexingRegistry::add(IndexingPolicyInfo info) {
  std::lock_guard lock(mutex_);
  const std::uint32_t id = info.container.value();
  policies_.insert_or_assign(id, std::move(info));
}

void IndexingRegistry::remove(ClassId kind) {
  std::lock_guard lock(mutex_);
  policies_.erase(kind.value());
}

IndexingPolicyInfo IndexingRegistry::default_indexing_for(ClassId kind) const {
  std::lock_guard lock(mutex_);
  auto it = policies_.find(kind.value());
  if (it == policies_.end()) {
    throw Error(Errc::kNoPolicyForKind,
                "no indexing policy for container class id " +
                    std::to_string(kind.value()) +
                    "; provide a matching indexing policy (specialize "
                    "sg::IndexingPolicyFor and call IndexingRegistry::register_kind)");
  }
  return it->second;
}

}  // namespace sg
