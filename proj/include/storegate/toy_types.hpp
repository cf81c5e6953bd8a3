// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Toy event data used by the pipeline, the benchmark and the tests. Values
// carry no physical meaning.
//
// Payload field order (see codec.hpp for token syntax):
//   Track      id px py pz quality
//   Cluster    id energy eta phi
//   GraphNode  id label child-count child-ids...
//   ToyGraph   node-count nodes...
//   TrackLinks link-count (container-classid key index)...

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "storegate/classid.hpp"
#include "storegate/codec.hpp"
#include "storegate/links.hpp"

namespace sg::toy {

struct Track {
  std::uint32_t id = 0;
  double px = 0;
  double py = 0;
  double pz = 0;
  double quality = 0;

  friend bool operator==(const Track&, const Track&) = default;
};

struct Cluster {
  std::uint32_t id = 0;
  double energy = 0;
  double eta = 0;
  double phi = 0;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

using TrackCollection = std::vector<Track>;
using ClusterCollection = std::vector<Cluster>;
using NumericSequence = std::vector<double>;
using StringDoubleMap = std::map<std::string, double>;

struct GraphNode {
  std::uint32_t id = 0;
  std::string label;
  std::vector<std::uint32_t> children;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

// Directed graph with stable integer node ids.
class ToyGraph {
 public:
  // Throws kDuplicateKey if the id is taken.
  GraphNode& add_node(std::uint32_t id, std::string label);
  // Throws kNotFound unless both ends exist.
  void add_edge(std::uint32_t from, std::uint32_t to);

  const GraphNode* find(std::uint32_t id) const;
  const std::map<std::uint32_t, GraphNode>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  friend bool operator==(const ToyGraph&, const ToyGraph&) = default;

 private:
  std::map<std::uint32_t, GraphNode> nodes_;
};

// Indexes graph nodes by their decimal node id.
class NodeIdIndexing {
 public:
  using container_type = ToyGraph;
  using element_type = GraphNode;
  static constexpr std::string_view name = "node-id";

  static std::optional<std::string> index_of(const ToyGraph& g, const GraphNode& node);
  static const GraphNode& element_at(const ToyGraph& g, std::string_view index);
  static std::vector<std::string> indices(const ToyGraph& g);
};

}  // namespace sg::toy

template <>
struct sg::IndexingPolicyFor<sg::toy::ToyGraph> {
  using type = sg::toy::NodeIdIndexing;
};

template <>
struct sg::Codec<sg::toy::Track> {
  static void encode(const sg::toy::Track& t, PayloadWriter& w);
  static sg::toy::Track decode(PayloadReader& r);
};

template <>
struct sg::Codec<sg::toy::Cluster> {
  static void encode(const sg::toy::Cluster& c, PayloadWriter& w);
  static sg::toy::Cluster decode(PayloadReader& r);
};

template <>
struct sg::Codec<sg::toy::GraphNode> {
  static void encode(const sg::toy::GraphNode& n, PayloadWriter& w);
  static sg::toy::GraphNode decode(PayloadReader& r);
};

template <>
struct sg::Codec<sg::toy::ToyGraph> {
  static void encode(const sg::toy::ToyGraph& g, PayloadWriter& w);
  static sg::toy::ToyGraph decode(PayloadReader& r);
};

SG_CLASS_NAME(sg::toy::TrackCollection, "TrackCollection");
SG_CLASS_NAME(sg::toy::ClusterCollection, "ClusterCollection");
SG_CLASS_NAME(sg::toy::NumericSequence, "NumericSequence");
SG_CLASS_NAME(sg::toy::StringDoubleMap, "StringDoubleMap");
SG_CLASS_NAME(sg::toy::ToyGraph, "ToyGraph");

namespace sg::toy {

using TrackLink = ElementLink<TrackCollection>;

// Links from selected tracks back into their source collection.
struct TrackLinks {
  std::vector<TrackLink> links;

  std::vector<PersistentLink> persistent_links() const;
  friend bool operator==(const TrackLinks&, const TrackLinks&) = default;
};

// Registers every toy type with the process type registry and its default
// indexing policy. Idempotent.
void register_toy_types();

}  // namespace sg::toy

template <>
struct sg::Codec<sg::toy::TrackLinks> {
  static void encode(const sg::toy::TrackLinks& l, PayloadWriter& w) {
    Codec<std::vector<sg::toy::TrackLink>>::encode(l.links, w);
  }
  static sg::toy::TrackLinks decode(PayloadReader& r) {
    return {Codec<std::vector<sg::toy::TrackLink>>::decode(r)};
  }
};

SG_CLASS_NAME(sg::toy::TrackLinks, "TrackLinks");
