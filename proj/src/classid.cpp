// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include "storegate/classid.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace sg {

ClassId::ClassId(std::uint32_t value) : value_(value) {
  if (!valid()) {
    throw Error(Errc::kUnknownClassId,
                "class id " + std::to_string(value) + " outside [256, 2^31)");
  }
}

bool is_valid_type_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  });
}

ClassId assign_id(std::string_view type_name) {
  if (type_name.empty()) throw Error(Errc::kEmptyName, "empty type name");
  return ClassId(detail::fold_class_id(detail::fnv1a32(type_name)));
}

std::size_t ConflictReport::count(Conflict::Kind kind) const {
  return static_cast<std::size_t>(
      std::count_if(conflicts.begin(), conflicts.end(),
                    [kind](const Conflict& c) { return c.kind == kind; }));
}

std::string ConflictReport::to_string() const {
  std::ostringstream out;
  for (const Conflict& c : conflicts) {
    if (c.kind == Conflict::Kind::kDuplicateId) {
      out << "duplicate-id " << c.first.id.value() << ": " << c.first.type_name
          << " vs " << c.second.type_name << '\n';
    } else {
      out << "duplicate-name " << c.first.type_name << ": "
          << c.first.id.value() << " vs " << c.second.id.value() << '\n';
    }
  }
  return out.str();
}

std::optional<std::string> ClidDatabase::name_of(ClassId id) const {
  for (const TypeEntry& e : entries_) {
    if (e.id == id) return e.type_name;
  }
  return std::nullopt;
}

std::optional<ClassId> ClidDatabase::id_of(std::string_view name) const {
  for (const TypeEntry& e : entries_) {
    if (e.type_name == name) return e.id;
  }
  return std::nullopt;
}

ClidDatabase parse_db(std::string_view text) {
  std::vector<TypeEntry> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    line = line.substr(first);

    const auto space = line.find_first_of(" \t");
    if (space == std::string_view::npos) {
      throw ParseError(line_no, "expected '<id> <type-name>'");
    }
    const std::string_view id_text = line.substr(0, space);
    std::string_view name = line.substr(space);
    name.remove_prefix(std::min(name.find_first_not_of(" \t"), name.size()));
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) {
      name.remove_suffix(1);
    }

    std::uint64_t id = 0;
    const auto [ptr, ec] =
        std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc{} || ptr != id_text.data() + id_text.size()) {
      throw ParseError(line_no, "malformed class id '" + std::string(id_text) +
                                    "'");
    }
    if (id < ClassId::kMin || id >= ClassId::kLimit) {
      throw ParseError(line_no, "class id " + std::string(id_text) +
                                    " outside [256, 2^31)");
    }
    if (!is_valid_type_name(name)) {
      throw ParseError(line_no, "malformed type name");
    }
    entries.push_back({ClassId(static_cast<std::uint32_t>(id)),
                       std::string(name)});
  }
  return ClidDatabase(std::move(entries));
}

ClidDatabase load_db(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(Errc::kIoError, "cannot read '" + path.string() + "'");
  ClidDatabase db = parse_db(buf.str());
  return ClidDatabase(db.entries(), path);
}

std::string format_db(const ClidDatabase& db) {
  std::vector<TypeEntry> sorted = db.entries();
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TypeEntry& a, const TypeEntry& b) {
                     return a.id < b.id;
                   });
  std::string out;
  for (const TypeEntry& e : sorted) {
    out += std::to_string(e.id.value());
    out += ' ';
    out += e.type_name;
    out += '\n';
  }
  return out;
}

void save_db(const ClidDatabase& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path.string() + "'");
  const std::string text = format_db(db);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path.string() + "'");
}

ConflictReport verify(const ClidDatabase& db) {
  // One conflict per offending pair; exact duplicates are not conflicts.
  ConflictReport report;
  std::map<ClassId, std::vector<const TypeEntry*>> by_id;
  std::map<std::string_view, std::vector<const TypeEntry*>> by_name;
  for (const TypeEntry& e : db.entries()) {
    by_id[e.id].push_back(&e);
    by_name[e.type_name].push_back(&e);
  }
  for (const auto& [id, group] : by_id) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        if (group[i]->type_name != group[j]->type_name) {
          report.conflicts.push_back(
              {Conflict::Kind::kDuplicateId, *group[i], *group[j]});
        }
      }
    }
  }
  for (const auto& [name, group] : by_name) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        if (group[i]->id != group[j]->id) {
          report.conflicts.push_back(
              {Conflict::Kind::kDuplicateName, *group[i], *group[j]});
        }
      }
    }
  }
  return report;
}

ClidDatabase register_runtime(const ClidDatabase& db, TypeEntry entry) {
  if (!is_valid_type_name(entry.type_name)) {
    throw Error(Errc::kEmptyName, "invalid type name '" + entry.type_name + "'");
  }
  for (const TypeEntry& e : db.entries()) {
    if (e == entry) return db;
    if (e.id == entry.id) {
      throw Error(Errc::kDuplicateId, e.type_name);
    }
    if (e.type_name == entry.type_name) {
      throw Error(Errc::kDuplicateName, std::to_string(e.id.value()));
    }
  }
  std::vector<TypeEntry> entries = db.entries();
  entries.push_back(std::move(entry));
  return ClidDatabase(std::move(entries), db.source_path());
}

TypeRegistry& TypeRegistry::instance() {
  static TypeRegistry registry;
  return registry;
}

void TypeRegistry::register_entry(TypeEntry entry, std::type_index type) {
  std::lock_guard lock(mutex_);
  if (auto it = types_.find(entry.id.value()); it != types_.end()) {
    if (it->second != type) {
      throw Error(Errc::kDuplicateId,
                  "class id " + std::to_string(entry.id.value()) +
                      " already bound to another C++ type named '" +
                      db_.name_of(entry.id).value_or("?") + "'");
    }
  }
  db_ = register_runtime(db_, entry);
  types_.emplace(entry.id.value(), type);
}

bool TypeRegistry::is_registered(std::type_index type, ClassId id) const {
  std::lock_guard lock(mutex_);
  auto it = types_.find(id.value());
  return it != types_.end() && it->second == type;
}

std::optional<std::string> TypeRegistry::name_of(ClassId id) const {
  std::lock_guard lock(mutex_);
  return db_.name_of(id);
}

ClidDatabase TypeRegistry::database() const {
  std::lock_guard lock(mutex_);
  return db_;
}

}  // namespace sg
