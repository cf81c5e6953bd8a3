// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

// Built-in algorithms. Each one reads its inputs from the store by type or
// key and records its outputs there; none knows which algorithm produced
// what it consumes.

#include <cmath>
#include <numbers>

#include "storegate/pipeline.hpp"
#include "storegate/toy_types.hpp"

namespace sg::pipeline {
namespace {

// splitmix64: platform-independent stream derived from (seed, event).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t event)
      : state_(seed * 0x9e3779b97f4a7c15ull + event + 1) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

 private:
  std::uint64_t state_;
};

class TrackMaker final : public Algorithm {
 public:
  explicit TrackMaker(const AlgorithmSpec& spec) : Algorithm(spec.instance_name) {
    Params p(spec);
    seed_ = p.get_uint("seed", 1);
    n_ = p.get_uint("n", 10);
    key_ = p.get_or("key", spec.instance_name);
    lifetime_ = p.get_lifetime("lifetime", Lifetime::kEvent);
    p.finish();
  }

  void execute(EventContext& ctx) override {
    // Job-lifetime output is produced once and then survives event clears.
    if (lifetime_ == Lifetime::kJob && ctx.store.contains<toy::TrackCollection>(key_)) return;
    Rng rng(seed_, ctx.event_number);
    auto tracks = std::make_unique<toy::TrackCollection>();
    tracks->reserve(n_);
    for (std::uint64_t i = 0; i < n_; ++i) {
      toy::Track t;
      t.id = static_cast<std::uint32_t>(i);
      t.px = rng.uniform(-5, 5);
      t.py = rng.uniform(-5, 5);
      t.pz = rng.uniform(-5, 5);
      t.quality = rng.uniform(0, 1);
      tracks->push_back(t);
    }
    ctx.store.record(std::move(tracks), key_, RecordOptions{lifetime_, {}});
  }

 private:
  std::uint64_t seed_;
  std::uint64_t n_;
  std::string key_;
  Lifetime lifetime_;
};

class ClusterMaker final : public Algorithm {
 public:
  explicit ClusterMaker(const AlgorithmSpec& spec) : Algorithm(spec.instance_name) {
    Params p(spec);
    seed_ = p.get_uint("seed", 1);
    n_ = p.get_uint("n", 10);
    key_ = p.get_or("key", spec.instance_name);
    lifetime_ = p.get_lifetime("lifetime", Lifetime::kEvent);
    p.finish();
  }

  void execute(EventContext& ctx) override {
    if (lifetime_ == Lifetime::kJob && ctx.store.contains<toy::ClusterCollection>(key_)) {
      return;
    }
    Rng rng(seed_ ^ 0xc1u, ctx.event_number);
    auto clusters = std::make_unique<toy::ClusterCollection>();
    clusters->reserve(n_);
    for (std::uint64_t i = 0; i < n_; ++i) {
      toy::Cluster c;
      c.id = static_cast<std::uint32_t>(i);
      c.energy = rng.uniform(0, 100);
      c.eta = rng.uniform(-2.5, 2.5);
      c.phi = rng.uniform(-std::numbers::pi, std::numbers::pi);
      clusters->push_back(c);
    }
    ctx.store.record(std::move(clusters), key_, RecordOptions{lifetime_, {}});
  }

 private:
  std::uint64_t seed_;
  std::uint64_t n_;
  std::string key_;
  Lifetime lifetime_;
};

// Keeps tracks with quality >= threshold. Without `input` the source is
// found by type alone.
class TrackSelector final : public Algorithm {
 public:
  explicit TrackSelector(const AlgorithmSpec& spec) : Algorithm(spec.instance_name) {
    Params p(spec);
    input_ = p.get("input");
    threshold_ = p.get_double("threshold", 0.5);
    key_ = p.get_or("key", spec.instance_name);
    p.finish();
  }

  void execute(EventContext& ctx) override {
    const toy::TrackCollection& source =
        input_ ? ctx.store.retrieve<toy::TrackCollection>(*input_)
               : ctx.store.retrieve<toy::TrackCollection>();
    auto selected = std::make_unique<toy::TrackCollection>();
    for (const toy::Track& t : source) {
      if (t.quality >= threshold_) selected->push_back(t);
    }
    ctx.store.record(std::move(selected), key_);
  }

 private:
  std::optional<std::string> input_;
  double threshold_;
  std::string key_;
};

// Links every track passing the threshold back into its source collection.
class LinkBuilder final : public Algorithm {
 public:
  explicit LinkBuilder(const AlgorithmSpec& spec) : Algorithm(spec.instance_name) {
    Params p(spec);
    input_ = p.get("input");
    threshold_ = p.get_double("threshold", 0.5);
    key_ = p.get_or("key", spec.instance_name);
    p.finish();
  }

  void execute(EventContext& ctx) override {
    const std::string source_key =
        input_ ? *input_ : ctx.store.locate<toy::TrackCollection>().key;
    const toy::TrackCollection& source = ctx.store.retrieve<toy::TrackCollection>(source_key);
    auto links = std::make_unique<toy::TrackLinks>();
    for (const toy::Track& t : source) {
      if (t.quality >= threshold_) {
        links->links.push_back(make_element_link<toy::TrackCollection>(ctx.store, source_key, t));
      }
    }
    ctx.store.record(std::move(links), key_);
  }

 private:
  std::optional<std::string> input_;
  double threshold_;
  std::string key_;
};

class StoreWriterAlg final : public Algorithm {
 public:
  explicit StoreWriterAlg(const AlgorithmSpec& spec) : Algorithm(spec.instance_name) {
    Params(spec).finish();
  }

  void execute(EventContext& ctx) override {
    if (!ctx.output) {
      throw Error(Errc::kConfigError, "StoreWriter '" + name() + "' needs an OUT path");
    }
    ctx.output->write(ctx.store, ctx.event_number);
  }

  bool writes_output() const override { return true; }
};

template <typename A>
AlgorithmFactory factory() {
  return [](const AlgorithmSpec& spec) { return std::make_unique<A>(spec); };
}

}  // namespace

AlgorithmCatalog builtin_algorithms() {
  AlgorithmCatalog c;
  c.add("TrackMaker",
        "records seeded pseudo-random tracks; params seed=1 n=10 key=<instance> "
        "lifetime=event|job",
        factory<TrackMaker>());
  c.add("ClusterMaker",
        "records seeded pseudo-random clusters; params seed=1 n=10 key=<instance> "
        "lifetime=event|job",
        factory<ClusterMaker>());
  c.add("TrackSelector",
        "records tracks with quality >= threshold; params input=<key, default by type> "
        "threshold=0.5 key=<instance>",
        factory<TrackSelector>());
  c.add("LinkBuilder",
        "records element links to tracks with quality >= threshold; params "
        "input=<key, default by type> threshold=0.5 key=<instance>",
        factory<LinkBuilder>());
  c.add("StoreWriter", "writes the current store contents to OUT; no params",
        factory<StoreWriterAlg>());
  return c;
}

}  // namespace sg::pipeline
