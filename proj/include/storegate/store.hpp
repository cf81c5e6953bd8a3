// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// The transient event store: a blackboard mapping (class id, key) to data
// proxies. Producers record objects and hand over ownership; consumers
// retrieve them by type, by key, or as an ordered range of lazy handles.
//
//   store.record(std::move(tracks), "MyTrackCollection");
//   const auto& def = store.retrieve<TrackCollection>();
//   const auto& mine = store.retrieve<TrackCollection>("MyTrackCollection");
//   for (const auto& h : store.retrieve_range<TrackCollection>()) use(*h);
//
// A proxy is either Valid (holds a bucket) or Virtual (holds a loader that
// produces the bucket on first dereference). Objects become read-only once
// locked; lock_new() is called at every algorithm boundary so everything an
// algorithm recorded is published under its instance name.
//
// A store is single-writer. Independent stores share nothing except the
// process-wide TypeRegistry.

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <typeindex>
#include <unordered_map>
#include <variant>
#include <vector>

#include "storegate/classid.hpp"
#include "storegate/codec.hpp"
#include "storegate/error.hpp"
#include "storegate/key.hpp"
#include "storegate/link_record.hpp"

namespace sg {

template <typename T>
concept Storable = HasClassId<T> && Encodable<T> && std::move_constructible<T>;

enum class Lifetime { kEvent, kJob };
enum class ClearScope { kEventOnly, kAll };

struct StoreKey {
  ClassId class_id;
  std::string key;

  friend bool operator==(const StoreKey&, const StoreKey&) = default;
  friend auto operator<=>(const StoreKey&, const StoreKey&) = default;
};

std::string to_string(const StoreKey& key);

struct StoreKeyView {
  ClassId class_id;
  std::string_view key;
};

struct StoreKeyHash {
  using is_transparent = void;
  std::size_t operator()(StoreKeyView k) const noexcept;
  std::size_t operator()(const StoreKey& k) const noexcept {
    return (*this)(StoreKeyView{k.class_id, k.key});
  }
};

struct StoreKeyEq {
  using is_transparent = void;
  static StoreKeyView view(const StoreKey& k) noexcept { return {k.class_id, k.key}; }
  static StoreKeyView view(StoreKeyView k) noexcept { return k; }
  template <typename A, typename B>
  bool operator()(const A& a, const B& b) const noexcept {
    const StoreKeyView x = view(a);
    const StoreKeyView y = view(b);
    return x.class_id == y.class_id && x.key == y.key;
  }
};

// Type-erased owner of one stored object.
class Bucket {
 public:
  explicit Bucket(ClassId id) : class_id_(id) {}
  virtual ~Bucket() = default;
  Bucket(const Bucket&) = delete;
  Bucket& operator=(const Bucket&) = delete;

  ClassId class_id() const noexcept { return class_id_; }
  virtual std::type_index type() const noexcept = 0;
  // Canonical, deterministic byte encoding of the payload.
  virtual std::string encode() const = 0;
  // Links held by the payload, for listing next to its persistent record.
  virtual std::vector<PersistentLink> links() const { return {}; }

  bool same_encoding(const Bucket& other) const { return encode() == other.encode(); }

 private:
  ClassId class_id_;
};

template <Storable T>
class DataBucket final : public Bucket {
 public:
  explicit DataBucket(std::unique_ptr<T> value)
      : Bucket(class_id_of<T>()), value_(std::move(value)) {}

  std::type_index type() const noexcept override { return typeid(T); }
  std::string encode() const override { return encode_payload(*value_); }
  std::vector<PersistentLink> links() const override {
    if constexpr (requires(const T& v) { v.persistent_links(); }) {
      return value_->persistent_links();
    } else {
      return {};
    }
  }

  T& value() noexcept { return *value_; }
  const T& value() const noexcept { return *value_; }

 private:
  std::unique_ptr<T> value_;
};

template <Storable T>
std::unique_ptr<Bucket> make_bucket(std::unique_ptr<T> value) {
  return std::make_unique<DataBucket<T>>(std::move(value));
}

// Throws kTypeMismatch when the bucket does not hold a T.
template <Storable T>
T& bucket_cast(Bucket& bucket) {
  if (bucket.class_id() != class_id_of<T>() || bucket.type() != typeid(T)) {
    throw Error(Errc::kTypeMismatch,
                "bucket of class id " + std::to_string(bucket.class_id().value()) +
                    " is not a " + std::string(type_name_of<T>()));
  }
  return static_cast<DataBucket<T>&>(bucket).value();
}

// Produces the object for a Virtual proxy. Failure is signalled by throwing
// or by returning null.
using ErasedLoader = std::function<std::unique_ptr<Bucket>()>;

template <typename T>
using Loader = std::function<std::unique_ptr<T>()>;

class DataProxy {
 public:
  const StoreKey& store_key() const noexcept { return key_; }
  bool is_valid() const noexcept {
    return std::holds_alternative<std::unique_ptr<Bucket>>(state_);
  }
  bool is_virtual() const noexcept { return !is_valid(); }
  bool locked() const noexcept { return locked_; }
  Lifetime lifetime() const noexcept { return lifetime_; }
  const std::string& provenance() const noexcept { return provenance_; }
  std::size_t load_count() const noexcept { return load_count_; }
  // Null for a Virtual proxy.
  const Bucket* bucket() const noexcept {
    const auto* b = std::get_if<std::unique_ptr<Bucket>>(&state_);
    return b ? b->get() : nullptr;
  }

 private:
  friend class EventStore;

  StoreKey key_;
  std::variant<std::unique_ptr<Bucket>, ErasedLoader> state_;
  bool locked_ = false;
  Lifetime lifetime_ = Lifetime::kEvent;
  std::string provenance_;
  std::size_t load_count_ = 0;
};

struct RecordOptions {
  Lifetime lifetime = Lifetime::kEvent;
  std::string provenance;
};

struct StoreStats {
  std::uint64_t records = 0;
  std::uint64_t retrieves = 0;
  std::uint64_t loads = 0;
  std::uint64_t load_failures = 0;
};

class EventStore;

// Lazy, epoch-checked reference to one proxy. Dereferencing a handle bound
// to a Virtual proxy materializes it; dereferencing after the store was
// cleared throws kStaleHandle. A handle must not outlive its store object.
template <Storable T>
class DataHandle {
 public:
  DataHandle() = default;

  const T& operator*() const;
  const T* operator->() const { return &**this; }

  bool bound() const noexcept { return store_ != nullptr; }
  bool stale() const noexcept;
  // Does not trigger a load.
  bool is_loaded() const;
  const StoreKey& store_key() const;

 private:
  friend class EventStore;
  DataHandle(EventStore* store, DataProxy* proxy, std::uint64_t epoch)
      : store_(store), proxy_(proxy), epoch_(epoch) {}

  void check() const;

  EventStore* store_ = nullptr;
  DataProxy* proxy_ = nullptr;
  std::uint64_t epoch_ = 0;
};

class EventStore {
 public:
  explicit EventStore(TypeRegistry& registry = TypeRegistry::instance())
      : registry_(&registry) {}
  EventStore(const EventStore&) = delete;
  EventStore& operator=(const EventStore&) = delete;

  // --- record ---------------------------------------------------------------

  // Records under the type's default key (its registered name).
  template <Storable T>
  StoreKey record(std::unique_ptr<T> obj, RecordOptions opts = {}) {
    return record(std::move(obj), KeyRef(type_name_of<T>()), std::move(opts));
  }

  template <Storable T>
  StoreKey record(std::unique_ptr<T> obj, KeyRef key, RecordOptions opts = {}) {
    const ClassId id = require_registered<T>();
    if (!obj) throw Error(Errc::kNotFound, "record of a null object");
    return insert_valid(StoreKey{id, std::string(key.encoding())},
                        make_bucket(std::move(obj)), std::move(opts), false);
  }

  // Installs a Virtual proxy; `loader` runs on first dereference.
  template <Storable T>
  StoreKey register_loader(KeyRef key, Loader<T> loader,
                           Lifetime lifetime = Lifetime::kEvent) {
    const ClassId id = require_registered<T>();
    ErasedLoader erased = [fn = std::move(loader)]() -> std::unique_ptr<Bucket> {
      std::unique_ptr<T> obj = fn();
      if (!obj) return nullptr;
      return make_bucket(std::move(obj));
    };
    return install_loader(StoreKey{id, std::string(key.encoding())},
                          std::move(erased), lifetime);
  }

  // --- retrieve -------------------------------------------------------------

  // Default resolution: the only instance of T, else the one at the default
  // key, else kAmbiguous.
  template <Storable T>
  const T& retrieve() {
    return bucket_cast<T>(materialize(resolve_default(class_id_of<T>(), type_name_of<T>())));
  }

  template <Storable T>
  const T& retrieve(KeyRef key) {
    return bucket_cast<T>(materialize(find_or_throw(class_id_of<T>(), key.encoding())));
  }

  // The key default resolution would pick, without loading anything.
  template <Storable T>
  StoreKey locate() {
    return resolve_default(class_id_of<T>(), type_name_of<T>()).store_key();
  }

  template <Storable T>
  T& retrieve_mut() {
    return bucket_cast<T>(
        materialize_mut(resolve_default(class_id_of<T>(), type_name_of<T>())));
  }

  template <Storable T>
  T& retrieve_mut(KeyRef key) {
    return bucket_cast<T>(materialize_mut(find_or_throw(class_id_of<T>(), key.encoding())));
  }

  // One handle per proxy of T, in ascending key-encoding order. Nothing is
  // loaded until a handle is dereferenced.
  template <Storable T>
  std::vector<DataHandle<T>> retrieve_range() {
    std::vector<DataHandle<T>> out;
    const ClassId id = class_id_of<T>();
    auto it = type_index_.find(id.value());
    if (it == type_index_.end()) return out;
    out.reserve(it->second.size());
    for (const std::string& key : it->second) {
      out.push_back(DataHandle<T>(this, &find_or_throw(id, key), epoch_));
    }
    return out;
  }

  // Never triggers a load.
  template <Storable T>
  bool contains(KeyRef key) const {
    return find_proxy({class_id_of<T>(), key.encoding()}) != nullptr;
  }

  template <Storable T>
  const std::string& provenance_of(KeyRef key) const {
    return provenance_of(StoreKeyView{class_id_of<T>(), key.encoding()});
  }
  const std::string& provenance_of(StoreKeyView key) const;

  template <Storable T>
  std::vector<std::string> keys_of() const {
    return keys_of(class_id_of<T>());
  }
  std::vector<std::string> keys_of(ClassId id) const;

  // --- publication and lifetime ---------------------------------------------

  void lock(const StoreKey& key);
  // Locks every unlocked Valid proxy and stamps `provenance` on those that
  // were recorded without one.
  std::size_t lock_new(std::string_view provenance);
  std::size_t clear(ClearScope scope);

  // --- type-erased access ---------------------------------------------------

  StoreKey record_bucket(StoreKey key, std::unique_ptr<Bucket> bucket,
                         RecordOptions opts = {}, bool locked = false);
  StoreKey install_loader(StoreKey key, ErasedLoader loader,
                          Lifetime lifetime = Lifetime::kEvent);

  const DataProxy* find_proxy(StoreKeyView key) const;
  const Bucket& materialize(const StoreKey& key);
  // All proxies in ascending (class id, key) order.
  std::vector<const DataProxy*> proxies() const;

  std::size_t size() const noexcept { return proxies_.size(); }
  std::uint64_t epoch() const noexcept { return epoch_; }
  const StoreStats& stats() const noexcept { return stats_; }
  void reset_stats() noexcept { stats_ = {}; }
  TypeRegistry& registry() const noexcept { return *registry_; }

  // True when the per-type key index is exactly the projection of the proxy
  // map's keys.
  bool audit() const;

 private:
  template <Storable T>
  friend class DataHandle;

  template <Storable T>
  ClassId require_registered() const {
    if (!registry_->is_registered<T>()) {
      throw Error(Errc::kUnregisteredType,
                  "type '" + std::string(type_name_of<T>()) + "' is not registered");
    }
    return class_id_of<T>();
  }

  StoreKey insert_valid(StoreKey key, std::unique_ptr<Bucket> bucket,
                        RecordOptions opts, bool locked);
  DataProxy& insert_proxy(StoreKey key);
  DataProxy& find_or_throw(ClassId id, std::string_view key);
  DataProxy& resolve_default(ClassId id, std::string_view default_key);
  Bucket& materialize(DataProxy& proxy);
  Bucket& materialize_mut(DataProxy& proxy);

  TypeRegistry* registry_;
  std::unordered_map<StoreKey, std::unique_ptr<DataProxy>, StoreKeyHash, StoreKeyEq>
      proxies_;
  std::unordered_map<std::uint32_t, std::set<std::string, std::less<>>> type_index_;
  std::uint64_t epoch_ = 0;
  StoreStats stats_;
};

template <Storable T>
bool DataHandle<T>::stale() const noexcept {
  return store_ != nullptr && epoch_ != store_->epoch();
}

template <Storable T>
void DataHandle<T>::check() const {
  if (store_ == nullptr) throw Error(Errc::kNotFound, "unbound data handle");
  if (stale()) {
    throw Error(Errc::kStaleHandle,
                "handle from store epoch " + std::to_string(epoch_) +
                    " dereferenced at epoch " + std::to_string(store_->epoch()));
  }
}

template <Storable T>
const T& DataHandle<T>::operator*() const {
  check();
  return bucket_cast<T>(store_->materialize(*proxy_));
}

template <Storable T>
bool DataHandle<T>::is_loaded() const {
  check();
  return proxy_->is_valid();
}

template <Storable T>
const StoreKey& DataHandle<T>::store_key() const {
  check();
  return proxy_->store_key();
}

}  // namespace sg
