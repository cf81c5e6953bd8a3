// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include "storegate/persistence.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "storegate/base64.hpp"
#include "storegate/toy_types.hpp"

namespace sg {

// ---------------------------------------------------------------------------
// Converters

void ConverterRegistry::register_converter(Converter converter) {
  if (!converter.encode || !converter.decode || !converter.probe) {
    throw Error(Errc::kConverterConflict, "incomplete converter for '" +
                                              converter.type_name + "'");
  }
  auto it = entries_.find(converter.class_id.value());
  if (it != entries_.end()) {
    const Converter& old = it->second->converter;
    bool same = old.type_name == converter.type_name;
    if (same) {
      try {
        same = old.encode(*converter.probe) == converter.encode(*converter.probe);
      } catch (const std::exception&) {
        same = false;
      }
    }
    if (!same) {
      throw Error(Errc::kConverterConflict,
                  "converter for class id " + std::to_string(converter.class_id.value()) +
                      " ('" + converter.type_name + "') disagrees with the registered one ('" +
                      old.type_name + "')");
    }
    it->second->converter = std::move(converter);
    return;
  }
  auto entry = std::make_unique<Entry>();
  const std::uint32_t id = converter.class_id.value();
  entry->converter = std::move(converter);
  entries_.emplace(id, std::move(entry));
}

const ConverterRegistry::Entry& ConverterRegistry::entry_or_throw(ClassId id) const {
  auto it = entries_.find(id.value());
  if (it == entries_.end()) {
    throw Error(Errc::kMissingConverter,
                "no converter for class id " + std::to_string(id.value()));
  }
  return *it->second;
}

std::string ConverterRegistry::encode(const Bucket& bucket) const {
  return entry_or_throw(bucket.class_id()).converter.encode(bucket);
}

std::unique_ptr<Bucket> ConverterRegistry::decode(ClassId id, std::string_view bytes) const {
  const Entry& entry = entry_or_throw(id);
  entry.decodes.fetch_add(1, std::memory_order_relaxed);
  try {
    return entry.converter.decode(bytes);
  } catch (const Error& e) {
    if (e.code() == Errc::kDecodeFailed) throw;
    throw Error(Errc::kDecodeFailed, e.what());
  }
}

std::uint64_t ConverterRegistry::decode_count() const {
  std::uint64_t n = 0;
  for (const auto& [id, entry] : entries_) n += entry->decodes.load(std::memory_order_relaxed);
  return n;
}

std::uint64_t ConverterRegistry::decode_count(ClassId id) const {
  auto it = entries_.find(id.value());
  return it == entries_.end() ? 0 : it->second->decodes.load(std::memory_order_relaxed);
}

void ConverterRegistry::reset_counters() {
  for (auto& [id, entry] : entries_) entry->decodes.store(0, std::memory_order_relaxed);
}

void register_toy_converters(ConverterRegistry& registry) {
  using namespace toy;
  registry.register_converter(make_converter<TrackCollection>({{1, 0.5, -0.25, 2, 0.75}}));
  registry.register_converter(make_converter<ClusterCollection>({{1, 10.5, -1.25, 3}}));
  registry.register_converter(make_converter<NumericSequence>({1.5, -2, 1e-300}));
  registry.register_converter(make_converter<StringDoubleMap>({{"pt", 1.5}}));
  ToyGraph g;
  g.add_node(1, "root");
  g.add_node(2, "leaf");
  g.add_edge(1, 2);
  registry.register_converter(make_converter<ToyGraph>(std::move(g)));
  registry.register_converter(make_converter<TrackLinks>({{TrackLink("tracks", "0")}}));
}

// ---------------------------------------------------------------------------
// File parsing

const EventImage* StoreImage::find_event(std::uint64_t number) const {
  for (const EventImage& e : events) {
    if (e.number == number) return &e;
  }
  return nullptr;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t end = std::min(line.find(' ', pos), line.size());
    out.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

std::uint64_t parse_decimal(std::string_view text, std::size_t line, std::string_view what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
      (text.size() > 1 && text[0] == '0')) {
    throw ParseError(line, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

ClassId parse_class_id(std::string_view text, std::size_t line) {
  const std::uint64_t v = parse_decimal(text, line, "class id");
  if (v < ClassId::kMin || v >= ClassId::kLimit) {
    throw ParseError(line, "class id " + std::string(text) + " outside [256, 2^31)");
  }
  return ClassId(static_cast<std::uint32_t>(v));
}

std::string parse_base64(std::string_view text, std::size_t line, std::string_view what) {
  auto bytes = base64::decode(text);
  if (!bytes || bytes->empty()) {
    throw ParseError(line, "bad base64 " + std::string(what));
  }
  return std::move(*bytes);
}

}  // namespace

StoreImage parse_store(std::string_view text) {
  StoreImage image;
  std::size_t line_no = 0;
  bool header = false;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    if (eol == std::string_view::npos) throw ParseError(line_no, "truncated line");
    const std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol + 1);

    if (!header) {
      if (line != kStoreFileHeader) throw ParseError(line_no, "missing 'SGSTORE v1' header");
      header = true;
      continue;
    }
    if (line.empty()) throw ParseError(line_no, "empty line");
    const std::vector<std::string_view> f = split_fields(line);
    if (f[0] == "EVENT") {
      if (f.size() != 2) throw ParseError(line_no, "expected 'EVENT <number>'");
      const std::uint64_t number = parse_decimal(f[1], line_no, "event number");
      if (image.find_event(number)) throw ParseError(line_no, "duplicate event number");
      image.events.push_back({number, {}});
    } else if (f[0] == "REC") {
      if (image.events.empty()) throw ParseError(line_no, "record outside an event");
      if (f.size() != 5) {
        throw ParseError(line_no, "expected 'REC <classid> <key> <type> <payload>'");
      }
      ObjectRecord rec;
      rec.class_id = parse_class_id(f[1], line_no);
      rec.key = parse_base64(f[2], line_no, "key");
      if (!is_valid_type_name(f[3])) throw ParseError(line_no, "bad type name");
      rec.type_name = std::string(f[3]);
      rec.payload = parse_base64(f[4], line_no, "payload");
      rec.line = line_no;
      auto& records = image.events.back().records;
      if (!records.empty()) {
        const ObjectRecord& prev = records.back();
        if (!(std::tie(prev.class_id, prev.key) < std::tie(rec.class_id, rec.key))) {
          throw ParseError(line_no, "records out of (class id, key) order");
        }
      }
      records.push_back(std::move(rec));
    } else if (f[0] == "LINK") {
      if (image.events.empty() || image.events.back().records.empty()) {
        throw ParseError(line_no, "link without an owning record");
      }
      image.events.back().records.back().links.push_back(PersistentLink::parse(line, line_no));
    } else {
      throw ParseError(line_no, "unknown line tag '" + std::string(f[0]) + "'");
    }
  }
  if (!header) throw ParseError(1, "missing 'SGSTORE v1' header");
  return image;
}

StoreImage read_image(std::istream& source) {
  std::ostringstream buf;
  buf << source.rdbuf();
  if (source.bad()) throw Error(Errc::kIoError, "cannot read store file");
  return parse_store(buf.str());
}

// ---------------------------------------------------------------------------
// Writing

std::string format_event(const EventStore& store, const ConverterRegistry& converters,
                         std::uint64_t event_number) {
  std::string out = "EVENT " + std::to_string(event_number) + "\n";
  for (const DataProxy* proxy : store.proxies()) {
    const Bucket* bucket = proxy->bucket();
    if (!bucket) continue;
    const StoreKey& key = proxy->store_key();
    const std::optional<std::string> name = store.registry().name_of(key.class_id);
    if (!name) {
      throw Error(Errc::kUnknownClassId,
                  "class id " + std::to_string(key.class_id.value()) + " is not registered");
    }
    out += "REC ";
    out += std::to_string(key.class_id.value());
    out += ' ';
    out += base64::encode(key.key);
    out += ' ';
    out += *name;
    out += ' ';
    out += base64::encode(converters.encode(*bucket));
    out += '\n';
    for (const PersistentLink& link : bucket->links()) {
      out += link.to_line();
      out += '\n';
    }
  }
  return out;
}

StoreWriter::StoreWriter(std::ostream& sink) : sink_(&sink) {
  *sink_ << kStoreFileHeader << '\n';
  if (!*sink_) throw Error(Errc::kIoError, "cannot write store file header");
}

std::size_t StoreWriter::write_event(const EventStore& store,
                                     const ConverterRegistry& converters,
                                     std::uint64_t event_number) {
  const std::string text = format_event(store, converters, event_number);
  sink_->write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!*sink_) throw Error(Errc::kIoError, "cannot write store file");
  std::size_t n = 0;
  for (const DataProxy* proxy : store.proxies()) n += proxy->is_valid() ? 1 : 0;
  return n;
}

std::size_t write_store(const EventStore& store, const ConverterRegistry& converters,
                        std::ostream& sink, std::uint64_t event_number) {
  const std::string text = format_event(store, converters, event_number);
  StoreWriter writer(sink);
  sink.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!sink) throw Error(Errc::kIoError, "cannot write store file");
  std::size_t n = 0;
  for (const DataProxy* proxy : store.proxies()) n += proxy->is_valid() ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------------------
// Reading into a store

namespace {

void check_record(const ObjectRecord& rec, const ClidDatabase& clid_db,
                  const ConverterRegistry& converters) {
  const std::optional<std::string> name = clid_db.name_of(rec.class_id);
  if (!name || *name != rec.type_name) {
    throw Error(Errc::kUnknownClassId,
                "line " + std::to_string(rec.line) + ": class id " +
                    std::to_string(rec.class_id.value()) + " ('" + rec.type_name +
                    "') is not in the class id database");
  }
  if (!converters.contains(rec.class_id)) {
    throw Error(Errc::kMissingConverter,
                "line " + std::to_string(rec.line) + ": no converter for '" +
                    rec.type_name + "'");
  }
}

std::string describe(const ObjectRecord& rec) {
  return "record " + rec.type_name + " '" + rec.key + "' (line " + std::to_string(rec.line) +
         ")";
}

const EventImage* select_event(const StoreImage& image, std::optional<std::uint64_t> number) {
  if (!number) return image.events.empty() ? nullptr : &image.events.front();
  const EventImage* e = image.find_event(*number);
  if (!e) throw Error(Errc::kNotFound, "no event " + std::to_string(*number) + " in store file");
  return e;
}

}  // namespace

std::size_t install_event_lazy(const EventImage& event, EventStore& store,
                               const ClidDatabase& clid_db,
                               const ConverterRegistry& converters) {
  for (const ObjectRecord& rec : event.records) check_record(rec, clid_db, converters);
  for (const ObjectRecord& rec : event.records) {
    auto payload = std::make_shared<const std::string>(rec.payload);
    const ClassId id = rec.class_id;
    const ConverterRegistry* conv = &converters;
    store.install_loader(StoreKey{id, rec.key},
                         [conv, id, payload] { return conv->decode(id, *payload); });
  }
  return event.records.size();
}

std::size_t install_event_eager(const EventImage& event, EventStore& store,
                                const ClidDatabase& clid_db,
                                const ConverterRegistry& converters) {
  for (const ObjectRecord& rec : event.records) check_record(rec, clid_db, converters);
  std::vector<std::unique_ptr<Bucket>> buckets;
  buckets.reserve(event.records.size());
  for (const ObjectRecord& rec : event.records) {
    try {
      buckets.push_back(converters.decode(rec.class_id, rec.payload));
    } catch (const Error& e) {
      throw Error(Errc::kDecodeFailed, describe(rec) + ": " + e.what());
    }
  }
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const ObjectRecord& rec = event.records[i];
    store.record_bucket(StoreKey{rec.class_id, rec.key}, std::move(buckets[i]), {}, true);
  }
  return event.records.size();
}

std::size_t read_store_lazy(std::istream& source, EventStore& store,
                            const ClidDatabase& clid_db, const ConverterRegistry& converters,
                            std::optional<std::uint64_t> event_number) {
  const StoreImage image = read_image(source);
  const EventImage* event = select_event(image, event_number);
  return event ? install_event_lazy(*event, store, clid_db, converters) : 0;
}

std::size_t read_store_eager(std::istream& source, EventStore& store,
                             const ClidDatabase& clid_db, const ConverterRegistry& converters,
                             std::optional<std::uint64_t> event_number) {
  const StoreImage image = read_image(source);
  const EventImage* event = select_event(image, event_number);
  return event ? install_event_eager(*event, store, clid_db, converters) : 0;
}

}  // namespace sg
