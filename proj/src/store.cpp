// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include "storegate/store.hpp"

#include <algorithm>

namespace sg {

std::string to_string(const StoreKey& key) {
  return "(" + std::to_string(key.class_id.value()) + ", '" + key.key + "')";
}

std::size_t StoreKeyHash::operator()(StoreKeyView k) const noexcept {
  const std::size_t h = std::hash<std::string_view>{}(k.key);
  return h ^ (std::size_t(k.class_id.value()) * 0x9e3779b97f4a7c15ull);
}

StoreKey EventStore::insert_valid(StoreKey key, std::unique_ptr<Bucket> bucket,
                                  RecordOptions opts, bool locked) {
  if (bucket->class_id() != key.class_id) {
    throw Error(Errc::kTypeMismatch, "bucket class id " +
                                         std::to_string(bucket->class_id().value()) +
                                         " recorded at " + to_string(key));
  }
  DataProxy& proxy = insert_proxy(std::move(key));
  proxy.state_ = std::move(bucket);
  proxy.lifetime_ = opts.lifetime;
  proxy.provenance_ = std::move(opts.provenance);
  proxy.locked_ = locked;
  ++stats_.records;
  return proxy.key_;
}

DataProxy& EventStore::insert_proxy(StoreKey key) {
  if (key.key.empty()) throw Error(Errc::kInvalidKey, "empty key");
  if (!key.class_id.valid()) {
    throw Error(Errc::kUnknownClassId, "invalid class id in " + to_string(key));
  }
  if (proxies_.find(StoreKeyView{key.class_id, key.key}) != proxies_.end()) {
    throw Error(Errc::kDuplicateKey, "a proxy already exists at " + to_string(key));
  }
  auto proxy = std::make_unique<DataProxy>();
  proxy->key_ = key;
  DataProxy& ref = *proxy;
  type_index_[key.class_id.value()].insert(key.key);
  proxies_.emplace(std::move(key), std::move(proxy));
  return ref;
}

StoreKey EventStore::record_bucket(StoreKey key, std::unique_ptr<Bucket> bucket,
                                   RecordOptions opts, bool locked) {
  if (!bucket) throw Error(Errc::kNotFound, "record of a null bucket");
  if (!registry_->name_of(key.class_id)) {
    throw Error(Errc::kUnregisteredType,
                "class id " + std::to_string(key.class_id.value()) + " is not registered");
  }
  return insert_valid(std::move(key), std::move(bucket), std::move(opts), locked);
}

StoreKey EventStore::install_loader(StoreKey key, ErasedLoader loader,
                                    Lifetime lifetime) {
  if (!loader) throw Error(Errc::kNotFound, "empty loader");
  if (!registry_->name_of(key.class_id)) {
    throw Error(Errc::kUnregisteredType,
                "class id " + std::to_string(key.class_id.value()) + " is not registered");
  }
  DataProxy& proxy = insert_proxy(std::move(key));
  proxy.state_ = std::move(loader);
  proxy.lifetime_ = lifetime;
  return proxy.key_;
}

const DataProxy* EventStore::find_proxy(StoreKeyView key) const {
  auto it = proxies_.find(key);
  return it == proxies_.end() ? nullptr : it->second.get();
}

DataProxy& EventStore::find_or_throw(ClassId id, std::string_view key) {
  auto it = proxies_.find(StoreKeyView{id, key});
  if (it == proxies_.end()) {
    throw Error(Errc::kNotFound, "no object at " + to_string(StoreKey{id, std::string(key)}));
  }
  return *it->second;
}

DataProxy& EventStore::resolve_default(ClassId id, std::string_view default_key) {
  auto it = type_index_.find(id.value());
  if (it == type_index_.end() || it->second.empty()) {
    throw Error(Errc::kNotFound, "no instance of class id " + std::to_string(id.value()));
  }
  const auto& keys = it->second;
  if (keys.size() == 1) return find_or_throw(id, *keys.begin());
  if (keys.find(default_key) != keys.end()) return find_or_throw(id, default_key);
  throw Error(Errc::kAmbiguous, std::to_string(keys.size()) + " instances of '" +
                                    std::string(default_key) +
                                    "' and none at the default key");
}

Bucket& EventStore::materialize(DataProxy& proxy) {
  ++stats_.retrieves;
  if (auto* bucket = std::get_if<std::unique_ptr<Bucket>>(&proxy.state_)) {
    return **bucket;
  }
  ErasedLoader& loader = std::get<ErasedLoader>(proxy.state_);
  std::unique_ptr<Bucket> bucket;
  try {
    bucket = loader();
  } catch (const Error& e) {
    ++stats_.load_failures;
    throw Error(Errc::kLoadFailed, "loading " + to_string(proxy.key_) + ": " +
                                       std::string(errc_name(e.code())) + ": " + e.what());
  } catch (const std::exception& e) {
    ++stats_.load_failures;
    throw Error(Errc::kLoadFailed, "loading " + to_string(proxy.key_) + ": " + e.what());
  }
  if (!bucket) {
    ++stats_.load_failures;
    throw Error(Errc::kLoadFailed, "loader for " + to_string(proxy.key_) + " produced nothing");
  }
  if (bucket->class_id() != proxy.key_.class_id) {
    ++stats_.load_failures;
    throw Error(Errc::kTypeMismatch, "loader for " + to_string(proxy.key_) +
                                         " produced class id " +
                                         std::to_string(bucket->class_id().value()));
  }
  proxy.state_ = std::move(bucket);
  proxy.locked_ = true;
  ++proxy.load_count_;
  ++stats_.loads;
  return *std::get<std::unique_ptr<Bucket>>(proxy.state_);
}

Bucket& EventStore::materialize_mut(DataProxy& proxy) {
  Bucket& bucket = materialize(proxy);
  if (proxy.locked_) {
    throw Error(Errc::kLocked, to_string(proxy.key_) + " was published by '" +
                                   proxy.provenance_ + "'");
  }
  return bucket;
}

const Bucket& EventStore::materialize(const StoreKey& key) {
  return materialize(find_or_throw(key.class_id, key.key));
}

const std::string& EventStore::provenance_of(StoreKeyView key) const {
  const DataProxy* proxy = find_proxy(key);
  if (!proxy) {
    throw Error(Errc::kNotFound,
                "no object at " + to_string(StoreKey{key.class_id, std::string(key.key)}));
  }
  return proxy->provenance_;
}

std::vector<std::string> EventStore::keys_of(ClassId id) const {
  auto it = type_index_.find(id.value());
  if (it == type_index_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

void EventStore::lock(const StoreKey& key) {
  find_or_throw(key.class_id, key.key).locked_ = true;
}

std::size_t EventStore::lock_new(std::string_view provenance) {
  std::size_t n = 0;
  for (auto& [key, proxy] : proxies_) {
    if (proxy->is_valid() && !proxy->locked_) {
      proxy->locked_ = true;
      if (proxy->provenance_.empty()) proxy->provenance_ = provenance;
      ++n;
    }
  }
  return n;
}

std::size_t EventStore::clear(ClearScope scope) {
  std::size_t removed = 0;
  for (auto it = proxies_.begin(); it != proxies_.end();) {
    if (scope == ClearScope::kAll || it->second->lifetime_ == Lifetime::kEvent) {
      auto slot = type_index_.find(it->first.class_id.value());
      slot->second.erase(it->first.key);
      if (slot->second.empty()) type_index_.erase(slot);
      it = proxies_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  ++epoch_;
  return removed;
}

std::vector<const DataProxy*> EventStore::proxies() const {
  std::vector<const DataProxy*> out;
  out.reserve(proxies_.size());
  for (const auto& [key, proxy] : proxies_) out.push_back(proxy.get());
  std::sort(out.begin(), out.end(), [](const DataProxy* a, const DataProxy* b) {
    return a->store_key() < b->store_key();
  });
  return out;
}

bool EventStore::audit() const {
  std::size_t indexed = 0;
  for (const auto& [id, keys] : type_index_) {
    if (keys.empty()) return false;
    for (const std::string& key : keys) {
      if (!find_proxy({ClassId(id), key})) return false;
    }
    indexed += keys.size();
  }
  if (indexed != proxies_.size()) return false;
  for (const auto& [key, proxy] : proxies_) {
    if (!(proxy->key_ == key)) return false;
    auto slot = type_index_.find(key.class_id.value());
    if (slot == type_index_.end() || !slot->second.contains(key.key)) return false;
  }
  return true;
}

}  // namespace sg
