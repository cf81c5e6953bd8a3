// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Store files and the converters that move objects between a store and its
// persistent form.
//
// File format (UTF-8, '\n' line endings, no trailing whitespace):
//
//     SGSTORE v1
//     EVENT <decimal event number>
//     REC <decimal class id> <base64(key)> <type-name> <base64(payload)>
//     LINK <decimal container class id> <base64(container key)> <base64(index)>
//
// Records within an event are sorted by (class id, key). LINK lines follow
// the REC whose payload holds them.

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "storegate/classid.hpp"
#include "storegate/link_record.hpp"
#include "storegate/store.hpp"

namespace sg {

struct Converter {
  ClassId class_id;
  std::string type_name;
  std::function<std::string(const Bucket&)> encode;
  std::function<std::unique_ptr<Bucket>(std::string_view)> decode;
  // Sample value used to compare converters registered for the same id.
  std::shared_ptr<const Bucket> probe;
};

template <Storable T>
Converter make_converter(T probe = T{}) {
  Converter c;
  c.class_id = class_id_of<T>();
  c.type_name = std::string(type_name_of<T>());
  c.encode = [](const Bucket& b) { return encode_payload(bucket_cast<T>(const_cast<Bucket&>(b))); };
  c.decode = [](std::string_view bytes) {
    return make_bucket(std::make_unique<T>(decode_payload<T>(bytes)));
  };
  c.probe = make_bucket(std::make_unique<T>(std::move(probe)));
  return c;
}

// Written during startup, read-only afterwards. Decode counters are atomic so
// stores on different threads may share one registry.
class ConverterRegistry {
 public:
  ConverterRegistry() = default;
  ConverterRegistry(const ConverterRegistry&) = delete;
  ConverterRegistry& operator=(const ConverterRegistry&) = delete;

  // Re-registration under an existing id is accepted only when both
  // converters encode the new probe identically; otherwise kConverterConflict.
  void register_converter(Converter converter);

  bool contains(ClassId id) const { return entries_.contains(id.value()); }
  // Throws kMissingConverter.
  std::string encode(const Bucket& bucket) const;
  // Throws kMissingConverter or kDecodeFailed. Counts every call.
  std::unique_ptr<Bucket> decode(ClassId id, std::string_view bytes) const;

  std::uint64_t decode_count() const;
  std::uint64_t decode_count(ClassId id) const;
  void reset_counters();

 private:
  struct Entry {
    Converter converter;
    mutable std::atomic<std::uint64_t> decodes{0};
  };
  const Entry& entry_or_throw(ClassId id) const;

  std::unordered_map<std::uint32_t, std::unique_ptr<Entry>> entries_;
};

// Converters for every toy type.
void register_toy_converters(ConverterRegistry& registry);

struct ObjectRecord {
  ClassId class_id;
  std::string key;
  std::string type_name;
  std::string payload;
  std::vector<PersistentLink> links;
  std::size_t line = 0;  // source line, 0 when not parsed from a file

  friend bool operator==(const ObjectRecord& a, const ObjectRecord& b) {
    return a.class_id == b.class_id && a.key == b.key && a.type_name == b.type_name &&
           a.payload == b.payload && a.links == b.links;
  }
};

struct EventImage {
  std::uint64_t number = 0;
  std::vector<ObjectRecord> records;
};

struct StoreImage {
  std::vector<EventImage> events;

  const EventImage* find_event(std::uint64_t number) const;
};

inline constexpr std::string_view kStoreFileHeader = "SGSTORE v1";

// Throws ParseError with the offending line.
StoreImage parse_store(std::string_view text);
StoreImage read_image(std::istream& source);

// Serializes every Valid proxy of `store` as one event. Virtual proxies that
// were never loaded are skipped. Throws kMissingConverter before emitting
// anything.
std::string format_event(const EventStore& store, const ConverterRegistry& converters,
                         std::uint64_t event_number);

// Writes a header followed by events. The header is emitted on construction.
class StoreWriter {
 public:
  explicit StoreWriter(std::ostream& sink);
  // Returns the number of object records written.
  std::size_t write_event(const EventStore& store, const ConverterRegistry& converters,
                          std::uint64_t event_number);

 private:
  std::ostream* sink_;
};

// Header plus a single event.
std::size_t write_store(const EventStore& store, const ConverterRegistry& converters,
                        std::ostream& sink, std::uint64_t event_number = 0);

// Installs one Virtual proxy per record; nothing is decoded until a proxy is
// dereferenced. `converters` must outlive the installed proxies.
std::size_t install_event_lazy(const EventImage& event, EventStore& store,
                               const ClidDatabase& clid_db,
                               const ConverterRegistry& converters);

// Decodes every record up front and installs Valid, locked proxies.
std::size_t install_event_eager(const EventImage& event, EventStore& store,
                                const ClidDatabase& clid_db,
                                const ConverterRegistry& converters);

// Reads a store file and installs one of its events (the first by default).
// A file without events installs nothing.
std::size_t read_store_lazy(std::istream& source, EventStore& store,
                            const ClidDatabase& clid_db, const ConverterRegistry& converters,
                            std::optional<std::uint64_t> event_number = std::nullopt);
std::size_t read_store_eager(std::istream& source, EventStore& store,
                             const ClidDatabase& clid_db, const ConverterRegistry& converters,
                             std::optional<std::uint64_t> event_number = std::nullopt);

}  // namespace sg
