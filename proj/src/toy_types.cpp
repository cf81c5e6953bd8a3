// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include "storegate/toy_types.hpp"

namespace sg {

void Codec<toy::Track>::encode(const toy::Track& t, PayloadWriter& w) {
  w.put_uint(t.id);
  w.put_double(t.px);
  w.put_double(t.py);
  w.put_double(t.pz);
  w.put_double(t.quality);
}

toy::Track Codec<toy::Track>::decode(PayloadReader& r) {
  toy::Track t;
  t.id = Codec<std::uint32_t>::decode(r);
  t.px = r.get_double();
  t.py = r.get_double();
  t.pz = r.get_double();
  t.quality = r.get_double();
  return t;
}

void Codec<toy::Cluster>::encode(const toy::Cluster& c, PayloadWriter& w) {
  w.put_uint(c.id);
  w.put_double(c.energy);
  w.put_double(c.eta);
  w.put_double(c.phi);
}

toy::Cluster Codec<toy::Cluster>::decode(PayloadReader& r) {
  toy::Cluster c;
  c.id = Codec<std::uint32_t>::decode(r);
  c.energy = r.get_double();
  c.eta = r.get_double();
  c.phi = r.get_double();
  return c;
}

void Codec<toy::GraphNode>::encode(const toy::GraphNode& n, PayloadWriter& w) {
  w.put_uint(n.id);
  w.put_string(n.label);
  Codec<std::vector<std::uint32_t>>::encode(n.children, w);
}

toy::GraphNode Codec<toy::GraphNode>::decode(PayloadReader& r) {
  toy::GraphNode n;
  n.id = Codec<std::uint32_t>::decode(r);
  n.label = r.get_string();
  n.children = Codec<std::vector<std::uint32_t>>::decode(r);
  return n;
}

void Codec<toy::ToyGraph>::encode(const toy::ToyGraph& g, PayloadWriter& w) {
  w.put_uint(g.size());
  for (const auto& [id, node] : g.nodes()) Codec<toy::GraphNode>::encode(node, w);
}

toy::ToyGraph Codec<toy::ToyGraph>::decode(PayloadReader& r) {
  const std::size_t n = r.get_count();
  std::vector<toy::GraphNode> nodes;
  nodes.reserve(n);
  toy::ToyGraph g;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back(Codec<toy::GraphNode>::decode(r));
    try {
      g.add_node(nodes.back().id, nodes.back().label);
    } catch (const Error&) {
      throw Error(Errc::kDecodeFailed, "duplicate graph node id");
    }
  }
  for (const toy::GraphNode& node : nodes) {
    for (std::uint32_t child : node.children) {
      try {
        g.add_edge(node.id, child);
      } catch (const Error&) {
        throw Error(Errc::kDecodeFailed, "graph edge to a missing node");
      }
    }
  }
  return g;
}

namespace toy {

GraphNode& ToyGraph::add_node(std::uint32_t id, std::string label) {
  auto [it, inserted] = nodes_.try_emplace(id, GraphNode{id, std::move(label), {}});
  if (!inserted) {
    throw Error(Errc::kDuplicateKey, "graph node " + std::to_string(id) + " exists");
  }
  return it->second;
}

void ToyGraph::add_edge(std::uint32_t from, std::uint32_t to) {
  auto it = nodes_.find(from);
  if (it == nodes_.end() || !nodes_.contains(to)) {
    throw Error(Errc::kNotFound, "edge " + std::to_string(from) + "->" +
                                     std::to_string(to) + " names a missing node");
  }
  it->second.children.push_back(to);
}

const GraphNode* ToyGraph::find(std::uint32_t id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

std::optional<std::string> NodeIdIndexing::index_of(const ToyGraph& g,
                                                    const GraphNode& node) {
  const GraphNode* found = g.find(node.id);
  if (found != &node) return std::nullopt;
  return std::to_string(node.id);
}

const GraphNode& NodeIdIndexing::element_at(const ToyGraph& g, std::string_view index) {
  const auto pos = detail::parse_position(index);
  const GraphNode* node =
      pos && *pos <= UINT32_MAX ? g.find(static_cast<std::uint32_t>(*pos)) : nullptr;
  if (!node) detail::throw_index_out_of_range(index, g.size());
  return *node;
}

std::vector<std::string> NodeIdIndexing::indices(const ToyGraph& g) {
  std::vector<std::string> out;
  out.reserve(g.size());
  for (const auto& [id, node] : g.nodes()) out.push_back(std::to_string(id));
  return out;
}

std::vector<PersistentLink> TrackLinks::persistent_links() const {
  std::vector<PersistentLink> out;
  out.reserve(links.size());
  for (const TrackLink& l : links) out.push_back(l.to_persistent());
  return out;
}

void register_toy_types() {
  TypeRegistry& types = TypeRegistry::instance();
  types.register_type<TrackCollection>();
  types.register_type<ClusterCollection>();
  types.register_type<NumericSequence>();
  types.register_type<StringDoubleMap>();
  types.register_type<ToyGraph>();
  types.register_type<TrackLinks>();

  IndexingRegistry& indexing = IndexingRegistry::instance();
  indexing.register_kind<TrackCollection>();
  indexing.register_kind<ClusterCollection>();
  indexing.register_kind<NumericSequence>();
  indexing.register_kind<StringDoubleMap>();
  indexing.register_kind<ToyGraph>();
}

}  // namespace toy
}  // namespace sg
