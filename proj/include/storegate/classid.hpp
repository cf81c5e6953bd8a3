// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Numeric class identifiers for storable types and the text database that
// keeps them unique.
//
// Database file grammar, one entry per line:
//
//     # comment
//     1234 MyVectorDouble
//
// Ids live in [256, 2^31); smaller values are reserved for the framework.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <typeindex>
#include <unordered_map>
#include <vector>

#include "storegate/error.hpp"

namespace sg {

class ClassId {
 public:
  static constexpr std::uint32_t kMin = 256;
  static constexpr std::uint32_t kLimit = 0x80000000u;

  constexpr ClassId() = default;
  // Throws Error(kUnknownClassId) outside [kMin, kLimit).
  explicit ClassId(std::uint32_t value);

  constexpr std::uint32_t value() const noexcept { return value_; }
  constexpr bool valid() const noexcept {
    return value_ >= kMin && value_ < kLimit;
  }

  friend constexpr auto operator<=>(ClassId, ClassId) = default;

 private:
  std::uint32_t value_ = 0;
};

struct TypeEntry {
  ClassId id;
  std::string type_name;

  friend bool operator==(const TypeEntry&, const TypeEntry&) = default;
  friend auto operator<=>(const TypeEntry&, const TypeEntry&) = default;
};

// True when `name` is usable as a single database token.
bool is_valid_type_name(std::string_view name) noexcept;

namespace detail {

constexpr std::uint32_t fnv1a32(std::string_view bytes) noexcept {
  std::uint32_t h = 2166136261u;
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 16777619u;
  }
  return h;
}

constexpr std::uint32_t fold_class_id(std::uint32_t h) noexcept {
  h &= 0x7fffffffu;
  if (h < ClassId::kMin) h += ClassId::kMin;
  return h;
}

}  // namespace detail

// Deterministic id for a type name: FNV-1a 32 folded into the valid range.
ClassId assign_id(std::string_view type_name);

struct Conflict {
  enum class Kind { kDuplicateId, kDuplicateName };
  Kind kind;
  TypeEntry first;
  TypeEntry second;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

struct ConflictReport {
  std::vector<Conflict> conflicts;

  bool empty() const noexcept { return conflicts.empty(); }
  std::size_t count(Conflict::Kind kind) const;
  std::string to_string() const;
};

// Immutable value; registration returns a new database.
class ClidDatabase {
 public:
  ClidDatabase() = default;
  explicit ClidDatabase(std::vector<TypeEntry> entries,
                        std::optional<std::filesystem::path> source = {})
      : entries_(std::move(entries)), source_path_(std::move(source)) {}

  const std::vector<TypeEntry>& entries() const noexcept { return entries_; }
  const std::optional<std::filesystem::path>& source_path() const noexcept {
    return source_path_;
  }
  std::size_t size() const noexcept { return entries_.size(); }

  std::optional<std::string> name_of(ClassId id) const;
  std::optional<ClassId> id_of(std::string_view name) const;

 private:
  std::vector<TypeEntry> entries_;
  std::optional<std::filesystem::path> source_path_;
};

ClidDatabase parse_db(std::string_view text);
ClidDatabase load_db(const std::filesystem::path& path);
std::string format_db(const ClidDatabase& db);
void save_db(const ClidDatabase& db, const std::filesystem::path& path);

ConflictReport verify(const ClidDatabase& db);

// Appends `entry`, or returns `db` unchanged for an exact duplicate.
// Throws kDuplicateId / kDuplicateName on inconsistent bindings.
ClidDatabase register_runtime(const ClidDatabase& db, TypeEntry entry);

// ---------------------------------------------------------------------------
// Compile-time association between C++ types and class ids.

// Base for types that carry their own identity: derived classes declare
//   static constexpr std::string_view kTypeName = "...";
// and may pin an explicit id with
//   static constexpr std::uint32_t kClassId = ...;
class DataObject {
 public:
  virtual ~DataObject() = default;
};

template <typename T>
struct ClassIdTraits;

template <typename T>
  requires std::derived_from<T, DataObject>
struct ClassIdTraits<T> {
  static constexpr std::string_view name = T::kTypeName;
  static ClassId id() {
    if constexpr (requires { T::kClassId; }) {
      return ClassId(T::kClassId);
    } else {
      return assign_id(name);
    }
  }
};

template <typename T>
concept HasClassId = requires {
  { ClassIdTraits<T>::name } -> std::convertible_to<std::string_view>;
  { ClassIdTraits<T>::id() } -> std::same_as<ClassId>;
};

template <HasClassId T>
ClassId class_id_of() {
  static const ClassId id = ClassIdTraits<T>::id();
  return id;
}

template <HasClassId T>
constexpr std::string_view type_name_of() {
  return ClassIdTraits<T>::name;
}

// Process-wide registry consulted by stores. Registration is serialized;
// lookups take the same lock and are cheap.
class TypeRegistry {
 public:
  static TypeRegistry& instance();

  template <HasClassId T>
  ClassId register_type() {
    register_entry({class_id_of<T>(), std::string(type_name_of<T>())},
                   std::type_index(typeid(T)));
    return class_id_of<T>();
  }

  template <HasClassId T>
  bool is_registered() const {
    return is_registered(std::type_index(typeid(T)), class_id_of<T>());
  }

  bool is_registered(std::type_index type, ClassId id) const;
  std::optional<std::string> name_of(ClassId id) const;
  ClidDatabase database() const;

 private:
  TypeRegistry() = default;
  void register_entry(TypeEntry entry, std::type_index type);

  mutable std::mutex mutex_;
  ClidDatabase db_;
  std::unordered_map<std::uint32_t, std::type_index> types_;
};

}  // namespace sg

// Associates TYPE with NAME and the hashed id of NAME.
#define SG_CLASS_NAME(TYPE, NAME)                                \
  template <>                                                    \
  struct sg::ClassIdTraits<TYPE> {                               \
    static constexpr std::string_view name = NAME;               \
    static ::sg::ClassId id() { return ::sg::assign_id(name); }  \
  }

// Associates TYPE with NAME and an explicit id.
#define SG_CLASS_ID(TYPE, NAME, ID)                              \
  template <>                                                    \
  struct sg::ClassIdTraits<TYPE> {                               \
    static constexpr std::string_view name = NAME;               \
    static ::sg::ClassId id() { return ::sg::ClassId(ID); }      \
  }
