// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Persistable references into the store.
//
// ObjectLink<T> names a whole data object. ElementLink<C> names one element
// of a stored container C through two policies: a storage policy that reaches
// the container through the store's proxies (so a link into an unloaded
// container takes the same cache-fault path as retrieve), and an indexing
// policy that maps an element to a persistable index and back.
//
// Default indexing: sequences index by zero-based position, associative
// containers by map key. A new container kind gets links by specializing
// IndexingPolicyFor<C>; for runtime lookup by class id it must also be added
// to the IndexingRegistry.

#include <cstdint>
#include <deque>
#include <functional>
#include <iterator>
#include <list>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "storegate/error.hpp"
#include "storegate/key.hpp"
#include "storegate/link_record.hpp"
#include "storegate/store.hpp"

namespace sg {

namespace detail {

// Canonical zero-based decimal position; anything else is out of range.
std::optional<std::size_t> parse_position(std::string_view index);

[[noreturn]] void throw_index_out_of_range(std::string_view index, std::size_t size);

}  // namespace detail

template <typename C>
class PositionalIndexing {
 public:
  using container_type = C;
  using element_type = typename C::value_type;
  static constexpr std::string_view name = "positional";

  static std::optional<std::string> index_of(const C& c, const element_type& e) {
    if constexpr (std::ranges::contiguous_range<C>) {
      const element_type* first = std::data(c);
      std::less<const element_type*> before;
      if (c.empty() || before(&e, first) || !before(&e, first + c.size())) {
        return std::nullopt;
      }
      return std::to_string(static_cast<std::size_t>(&e - first));
    } else {
      std::size_t i = 0;
      for (const element_type& x : c) {
        if (&x == &e) return std::to_string(i);
        ++i;
      }
      return std::nullopt;
    }
  }

  static const element_type& element_at(const C& c, std::string_view index) {
    const auto pos = detail::parse_position(index);
    if (!pos || *pos >= c.size()) detail::throw_index_out_of_range(index, c.size());
    return *std::next(std::begin(c), static_cast<std::ptrdiff_t>(*pos));
  }

  static std::vector<std::string> indices(const C& c) {
    std::vector<std::string> out;
    out.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(std::to_string(i));
    return out;
  }
};

// Index is the element's map key, encoded through its KeyAdapter.
template <typename C>
class KeyedIndexing {
 public:
  using container_type = C;
  using key_type = typename C::key_type;
  using element_type = typename C::value_type;
  static constexpr std::string_view name = "keyed";

  static std::optional<std::string> index_of(const C& c, const element_type& e) {
    auto it = c.find(e.first);
    if (it == c.end() || &*it != &e) return std::nullopt;
    return KeyAdapter<key_type>::encode(e.first);
  }

  static const element_type& element_at(const C& c, std::string_view index) {
    std::optional<key_type> key;
    try {
      key.emplace(KeyAdapter<key_type>::decode(index));
    } catch (const Error&) {
      detail::throw_index_out_of_range(index, c.size());
    }
    auto it = c.find(*key);
    if (it == c.end()) detail::throw_index_out_of_range(index, c.size());
    return *it;
  }

  static std::vector<std::string> indices(const C& c) {
    std::vector<std::string> out;
    out.reserve(c.size());
    for (const auto& e : c) out.push_back(KeyAdapter<key_type>::encode(e.first));
    return out;
  }
};

// Extension point: specialize with `using type = <policy>;`.
template <typename C>
struct IndexingPolicyFor {};

template <typename E, typename A>
struct IndexingPolicyFor<std::vector<E, A>> {
  using type = PositionalIndexing<std::vector<E, A>>;
};
template <typename E, typename A>
struct IndexingPolicyFor<std::deque<E, A>> {
  using type = PositionalIndexing<std::deque<E, A>>;
};
template <typename E, typename A>
struct IndexingPolicyFor<std::list<E, A>> {
  using type = PositionalIndexing<std::list<E, A>>;
};
template <typename K, typename V, typename Cmp, typename A>
struct IndexingPolicyFor<std::map<K, V, Cmp, A>> {
  using type = KeyedIndexing<std::map<K, V, Cmp, A>>;
};
template <typename K, typename V, typename H, typename Eq, typename A>
struct IndexingPolicyFor<std::unordered_map<K, V, H, Eq, A>> {
  using type = KeyedIndexing<std::unordered_map<K, V, H, Eq, A>>;
};

template <typename C>
concept HasIndexingPolicy = requires { typename IndexingPolicyFor<C>::type; };

template <typename C>
struct GenerateIndexingPolicy {
  static_assert(HasIndexingPolicy<C>,
                "no indexing policy for this container kind; provide a matching "
                "indexing policy by specializing sg::IndexingPolicyFor<C>");
  using type = typename IndexingPolicyFor<C>::type;
};

template <typename P, typename C>
concept IndexingPolicy = requires(const C& c, const typename P::element_type& e,
                                  std::string_view index) {
  { P::name } -> std::convertible_to<std::string_view>;
  { P::index_of(c, e) } -> std::same_as<std::optional<std::string>>;
  { P::element_at(c, index) } -> std::same_as<const typename P::element_type&>;
  { P::indices(c) } -> std::same_as<std::vector<std::string>>;
};

// Reaches the container through the store's proxy for (class id, key).
template <Storable C>
class DataProxyStorage {
 public:
  DataProxyStorage() = default;
  explicit DataProxyStorage(std::string key) : key_(std::move(key)) {}

  StoreKey store_key() const { return {class_id_of<C>(), key_}; }
  const std::string& key() const noexcept { return key_; }
  const C& container(EventStore& store) const { return store.retrieve<C>(KeyRef(key_)); }

  friend bool operator==(const DataProxyStorage&, const DataProxyStorage&) = default;

 private:
  std::string key_;
};

template <Storable C, typename Indexing = typename GenerateIndexingPolicy<C>::type,
          typename Storage = DataProxyStorage<C>>
  requires IndexingPolicy<Indexing, C>
class ElementLink {
 public:
  using container_type = C;
  using element_type = typename Indexing::element_type;
  using indexing_policy = Indexing;

  ElementLink() = default;
  // Performs no store access.
  ElementLink(std::string container_key, std::string index)
      : storage_(std::move(container_key)), index_(std::move(index)) {}

  StoreKey container_key() const { return storage_.store_key(); }
  const std::string& index() const noexcept { return index_; }

  // Fetches the container (possibly faulting it in) and applies the indexing
  // policy. The element pointer is cached until the store's epoch changes.
  const element_type& resolve(EventStore& store) const {
    if (cache_ && cache_store_ == &store && cache_epoch_ == store.epoch()) {
      return *cache_;
    }
    const C& container = storage_.container(store);
    const element_type& element = Indexing::element_at(container, index_);
    cache_ = &element;
    cache_store_ = &store;
    cache_epoch_ = store.epoch();
    return element;
  }

  PersistentLink to_persistent() const {
    return {class_id_of<C>(), storage_.key(), index_};
  }

  // Throws kTypeMismatch when the record names another container type and
  // ParseError when it carries no index.
  static ElementLink from_persistent(const PersistentLink& record) {
    if (record.container != class_id_of<C>()) {
      throw Error(Errc::kTypeMismatch,
                  "link record targets class id " +
                      std::to_string(record.container.value()) + ", expected " +
                      std::string(type_name_of<C>()));
    }
    if (!record.index) throw ParseError(1, "element link record without index");
    return ElementLink(record.container_key, *record.index);
  }

  friend bool operator==(const ElementLink& a, const ElementLink& b) {
    return a.storage_ == b.storage_ && a.index_ == b.index_;
  }

 private:
  Storage storage_;
  std::string index_;
  mutable const element_type* cache_ = nullptr;
  mutable const EventStore* cache_store_ = nullptr;
  mutable std::uint64_t cache_epoch_ = 0;
};

template <Storable C, typename Indexing = typename GenerateIndexingPolicy<C>::type>
ElementLink<C, Indexing> make_element_link(EventStore& store, KeyRef container_key,
                                           const typename Indexing::element_type& element) {
  const C& container = store.retrieve<C>(container_key);
  std::optional<std::string> index = Indexing::index_of(container, element);
  if (!index) {
    throw Error(Errc::kElementNotInContainer,
                "element is not part of " + std::string(type_name_of<C>()) + " '" +
                    std::string(container_key.encoding()) + "'");
  }
  if (index->empty()) throw Error(Errc::kInvalidKey, "empty element index");
  return ElementLink<C, Indexing>(std::string(container_key.encoding()), std::move(*index));
}

template <Storable T>
class ObjectLink {
 public:
  ObjectLink() = default;
  explicit ObjectLink(std::string key) : key_(std::move(key)) {}

  StoreKey target() const { return {class_id_of<T>(), key_}; }

  const T& resolve(EventStore& store) const {
    if (cache_ && cache_store_ == &store && cache_epoch_ == store.epoch()) return *cache_;
    const T& object = store.retrieve<T>(KeyRef(key_));
    cache_ = &object;
    cache_store_ = &store;
    cache_epoch_ = store.epoch();
    return object;
  }

  PersistentLink to_persistent() const { return {class_id_of<T>(), key_, std::nullopt}; }

  static ObjectLink from_persistent(const PersistentLink& record) {
    if (record.container != class_id_of<T>()) {
      throw Error(Errc::kTypeMismatch,
                  "link record targets class id " +
                      std::to_string(record.container.value()) + ", expected " +
                      std::string(type_name_of<T>()));
    }
    if (record.index) throw ParseError(1, "object link record with an index");
    return ObjectLink(record.container_key);
  }

  friend bool operator==(const ObjectLink& a, const ObjectLink& b) { return a.key_ == b.key_; }

 private:
  std::string key_;
  mutable const T* cache_ = nullptr;
  mutable const EventStore* cache_store_ = nullptr;
  mutable std::uint64_t cache_epoch_ = 0;
};

template <Storable C, typename I, typename S>
  requires IndexingPolicy<I, C>
struct Codec<ElementLink<C, I, S>> {
  static void encode(const ElementLink<C, I, S>& link, PayloadWriter& w) {
    w.put_uint(class_id_of<C>().value());
    w.put_string(link.container_key().key);
    w.put_string(link.index());
  }
  static ElementLink<C, I, S> decode(PayloadReader& r) {
    if (r.get_uint() != class_id_of<C>().value()) {
      throw Error(Errc::kDecodeFailed, "element link to an unexpected container type");
    }
    std::string key = r.get_string();
    std::string index = r.get_string();
    return ElementLink<C, I, S>(std::move(key), std::move(index));
  }
};

// ---------------------------------------------------------------------------
// Runtime lookup of the indexing policy for a container kind (class id).

struct IndexingPolicyInfo {
  std::string policy_name;
  ClassId container;
  // Index encodings of every element, in container order.
  std::function<std::vector<std::string>(const Bucket&)> indices;
  // Canonical payload encoding of the element at an index.
  std::function<std::string(const Bucket&, std::string_view)> element_encoding;
};

class IndexingRegistry {
 public:
  static IndexingRegistry& instance();

  template <Storable C, typename Indexing = typename GenerateIndexingPolicy<C>::type>
    requires IndexingPolicy<Indexing, C> && Encodable<std::remove_cv_t<
                                                typename Indexing::element_type>>
  void register_kind() {
    using Element = std::remove_cv_t<typename Indexing::element_type>;
    IndexingPolicyInfo info;
    info.policy_name = std::string(Indexing::name);
    info.container = class_id_of<C>();
    info.indices = [](const Bucket& b) {
      return Indexing::indices(bucket_cast<C>(const_cast<Bucket&>(b)));
    };
    info.element_encoding = [](const Bucket& b, std::string_view index) {
      const C& c = bucket_cast<C>(const_cast<Bucket&>(b));
      return encode_payload<Element>(Indexing::element_at(c, index));
    };
    add(std::move(info));
  }

  void add(IndexingPolicyInfo info);
  void remove(ClassId kind);
  // Throws kNoPolicyForKind naming the extension point.
  IndexingPolicyInfo default_indexing_for(ClassId kind) const;

 private:
  IndexingRegistry() = default;
  mutable std::mutex mutex_;
  std::unordered_map<std::uint32_t, IndexingPolicyInfo> policies_;
};

inline IndexingPolicyInfo default_indexing_for(ClassId kind) {
  return IndexingRegistry::instance().default_indexing_for(kind);
}

}  // namespace sg
