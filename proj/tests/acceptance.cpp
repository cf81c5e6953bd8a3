// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "pipeline_probe.hpp"
#include "storegate/bench.hpp"
#include "storegate/classid.hpp"
#include "storegate/links.hpp"
#include "storegate/persistence.hpp"
#include "storegate/pipeline.hpp"
#include "storegate/store.hpp"
#include "storegate/toy_types.hpp"
#include "test_util.hpp"

using namespace sg;
using toy::ClusterCollection;
using toy::TrackCollection;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Collects failed checks; `detail` is printed either way.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ += ok ? 0 : 1;
  }
  Outcome done(std::string detail) const {
    Outcome o{failed_ == 0, std::move(detail)};
    o.detail += "; " + std::to_string(checks_ - failed_) + "/" + std::to_string(checks_) +
                " checks";
    for (const auto& f : failures_) o.detail += "; failed: " + f;
    return o;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

const ConverterRegistry& converters() {
  static ConverterRegistry* reg = [] {
    auto* r = new ConverterRegistry;
    register_toy_converters(*r);
    return r;
  }();
  return *reg;
}

std::unique_ptr<TrackCollection> tracks(std::uint32_t n) {
  auto t = std::make_unique<TrackCollection>();
  for (std::uint32_t i = 0; i < n; ++i) t->push_back({i, 0, 0, 0, 0.5});
  return t;
}

// The four access patterns: record with a key, retrieve by type, retrieve by
// key, retrieve every instance.
Outcome api_conformance() {
  Checker c;
  EventStore store;
  auto default_coll = tracks(3);
  auto my_coll = tracks(5);
  const TrackCollection* default_ptr = default_coll.get();
  const TrackCollection* my_ptr = my_coll.get();

  const StoreKey k1 = store.record(std::move(default_coll));
  c.expect(k1 == StoreKey{assign_id("TrackCollection"), "TrackCollection"},
           "record without key lands at the type's default key");
  const StoreKey k2 = store.record(std::move(my_coll), "MyTrackCollection");
  c.expect(k2 == StoreKey{assign_id("TrackCollection"), "MyTrackCollection"},
           "record with key \"MyTrackCollection\"");

  c.expect(&store.retrieve<TrackCollection>() == default_ptr, "default retrieve");
  c.expect(&store.retrieve<TrackCollection>("MyTrackCollection") == my_ptr,
           "keyed retrieve of \"MyTrackCollection\"");
  const auto range = store.retrieve_range<TrackCollection>();
  c.expect(range.size() == 2, "range retrieve yields both collections");
  if (range.size() == 2) {
    c.expect(&*range[0] == my_ptr && &*range[1] == default_ptr,
             "range order is ascending key order");
  }

  // The single-instance case needs no key at all.
  EventStore single;
  auto only = tracks(2);
  const TrackCollection* only_ptr = only.get();
  single.record(std::move(only), "Anything");
  c.expect(&single.retrieve<TrackCollection>() == only_ptr, "single instance by type");
  return c.done("record/default/keyed/range patterns");
}

Outcome default_resolution() {
  Checker c;
  const std::vector<std::string> pool = {"TrackCollection", "a", "b", "zz", "TrackCollectionX"};
  std::size_t stores = 0;
  for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask & (1u << i)) keys.push_back(pool[i]);
    }
    if (keys.size() > 3) continue;
    for (unsigned virt = 0; virt < (1u << keys.size()); ++virt) {
      EventStore store;
      for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto n = static_cast<std::uint32_t>(i + 1);
        if (virt & (1u << i)) {
          store.register_loader<TrackCollection>(keys[i], [n] { return tracks(n); });
        } else {
          store.record(tracks(n), keys[i]);
        }
      }
      store.record(std::make_unique<ClusterCollection>(), "TrackCollection");

      // Brute-force rule: size tags which instance was chosen.
      std::string want;
      if (keys.empty()) {
        want = "not-found";
      } else if (keys.size() == 1) {
        want = "1";
      } else {
        want = "ambiguous";
        for (std::size_t i = 0; i < keys.size(); ++i) {
          if (keys[i] == "TrackCollection") want = std::to_string(i + 1);
        }
      }
      std::string got;
      try {
        got = std::to_string(store.retrieve<TrackCollection>().size());
      } catch (const Error& e) {
        got = std::string(errc_name(e.code()));
      }
      std::string label = "{";
      for (const auto& k : keys) label += k + ",";
      c.expect(got == want, label + "} want " + want + " got " + got);
      ++stores;
    }
  }
  return c.done(std::to_string(stores) + " stores with <=3 instances");
}

Outcome laziness() {
  Checker c;
  std::mt19937_64 rng(5);

  // Instrumented loaders.
  for (int round = 0; round < 50; ++round) {
    EventStore store;
    const std::size_t n = 1 + rng() % 20;
    std::vector<int> calls(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      store.register_loader<TrackCollection>("k" + std::to_string(i), [&calls, i] {
        ++calls[i];
        return tracks(static_cast<std::uint32_t>(i));
      });
    }
    auto range = store.retrieve_range<TrackCollection>();
    for (std::size_t i = 0; i < n; ++i) {
      c.expect(store.contains<TrackCollection>("k" + std::to_string(i)), "contains");
    }
    c.expect(std::all_of(calls.begin(), calls.end(), [](int x) { return x == 0; }),
             "no load before dereference");
    std::set<std::size_t> touched;
    for (int a = 0; a < 60; ++a) {
      if (rng() % 2) {
        const std::size_t i = rng() % n;
        touched.insert(i);
        store.retrieve<TrackCollection>("k" + std::to_string(i));
      } else {
        // Handles come in key order, not loader order.
        const auto& h = range[rng() % n];
        touched.insert(std::stoul(h.store_key().key.substr(1)));
        (void)h->size();
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      c.expect(calls[i] == (touched.contains(i) ? 1 : 0), "exactly one load per touched proxy");
    }
  }

  // Instrumented converters behind a lazily read file.
  for (int round = 0; round < 20; ++round) {
    EventStore source;
    const std::size_t n = 1 + rng() % 10;
    for (std::size_t i = 0; i < n; ++i) {
      source.record(std::make_unique<TrackCollection>(test::random_tracks(rng, 3)),
                    "t" + std::to_string(i));
      source.record(std::make_unique<ClusterCollection>(test::random_clusters(rng, 3)),
                    "c" + std::to_string(i));
    }
    ConverterRegistry conv;
    register_toy_converters(conv);
    std::istringstream in(test::write_to_string(source, conv));
    EventStore store;
    read_store_lazy(in, store, TypeRegistry::instance().database(), conv);
    c.expect(conv.decode_count() == 0, "no decode before dereference");
    std::set<std::size_t> touched;
    for (int a = 0; a < 30; ++a) {
      const std::size_t i = rng() % n;
      touched.insert(i);
      store.retrieve<TrackCollection>("t" + std::to_string(i));
    }
    c.expect(conv.decode_count() == touched.size(), "one decode per dereferenced proxy");
    c.expect(conv.decode_count(class_id_of<ClusterCollection>()) == 0,
             "untouched clusters never decoded");
  }

  // A consumer touching only tracks, through the pipeline.
  test::TempDir dir;
  pipeline::PipelineConfig prod = pipeline::PipelineConfig::parse(
      "ALG TrackMaker TM n=25\nALG ClusterMaker CM n=25\nEVENTS 4\n");
  prod.output = dir.path() / "prod.sg";
  pipeline::run_pipeline(prod);
  ConverterRegistry conv;
  register_toy_converters(conv);
  pipeline::RunOptions opts;
  opts.converters = &conv;
  pipeline::PipelineConfig cons =
      pipeline::PipelineConfig::parse("ALG TrackSelector TS\nMODE consume-lazy\n");
  cons.input = prod.output;
  const auto report = pipeline::run(cons, opts);
  c.expect(report.events.size() == 4, "replayed all events");
  for (const auto& ev : report.events) {
    c.expect(ev.faults == 1 && ev.decodes == 1, "one fault per event");
  }
  c.expect(conv.decode_count(class_id_of<ClusterCollection>()) == 0,
           "pipeline consumer never decoded clusters");
  c.expect(conv.decode_count(class_id_of<TrackCollection>()) == 4, "tracks decoded once per event");
  return c.done("loaders, converters and pipeline replay");
}

Outcome access_control() {
  test::ProbeTally tally;
  const pipeline::AlgorithmCatalog catalog = test::probe_catalog(&tally);
  pipeline::RunOptions opts;
  opts.catalog = &catalog;
  std::mt19937_64 rng(17);
  const int pipelines = 200;
  std::size_t errors = 0;
  for (int i = 0; i < pipelines; ++i) {
    try {
      pipeline::run_pipeline(test::random_probe_pipeline(rng), opts);
    } catch (const Error&) {
      ++errors;
    }
  }
  Checker c;
  c.expect(errors == 0, "generated pipelines run cleanly");
  c.expect(tally.attempts > 0, "probes found foreign objects");
  c.expect(tally.refused == tally.attempts,
           std::to_string(tally.attempts - tally.refused) + " mutations not refused");
  c.expect(tally.read_failures == 0, std::to_string(tally.read_failures) + " reads failed");
  return c.done(std::to_string(pipelines) + " pipelines, " + std::to_string(tally.attempts) +
                " foreign retrieve_mut attempts, " + std::to_string(tally.refused) +
                " refused with Locked");
}

Outcome link_oracle() {
  Checker c;
  std::mt19937_64 rng(23);
  std::size_t elements = 0;
  auto check = [&](const auto& container, const char* what) {
    const std::size_t failures = test::link_roundtrip_failures(container, converters());
    elements += test::element_pointers(container).size();
    c.expect(failures == 0, std::string(what) + " of size " + std::to_string(test::element_pointers(container).size()) +
                                ": " + std::to_string(failures) + " failures");
  };
  std::vector<std::size_t> sizes = {1, 2, 1000};
  for (int i = 0; i < 12; ++i) sizes.push_back(1 + rng() % 1000);
  for (std::size_t n : sizes) {
    check(test::random_sequence(rng, n), "sequence");
    check(test::random_tracks(rng, n), "track collection");
    check(test::random_map(rng, n), "map");
  }
  std::vector<std::size_t> graph_sizes = {1, 2, 100};
  for (int i = 0; i < 20; ++i) graph_sizes.push_back(1 + rng() % 100);
  for (std::size_t n : graph_sizes) check(test::random_graph(rng, n), "graph");
  return c.done(std::to_string(elements) + " element links persisted, restored and resolved");
}

Outcome persistence_roundtrip() {
  Checker c;
  std::mt19937_64 rng(29);
  const ClidDatabase db = TypeRegistry::instance().database();
  std::size_t records = 0;
  for (int round = 0; round < 100; ++round) {
    EventStore source;
    test::fill_random_store(rng, source);
    const std::string first = test::write_to_string(source, converters(), round);
    std::istringstream lazy_in(first), eager_in(first);
    EventStore lazy, eager;
    records += read_store_lazy(lazy_in, lazy, db, converters());
    read_store_eager(eager_in, eager, db, converters());
    const std::string tag = "store " + std::to_string(round);
    c.expect(test::write_to_string(eager, converters(), round) == first,
             tag + ": eager rewrite differs");
    const auto lazy_state = test::materialized_state(lazy);
    c.expect(test::write_to_string(lazy, converters(), round) == first,
             tag + ": lazy rewrite differs");
    c.expect(lazy_state == test::materialized_state(eager), tag + ": lazy and eager differ");
  }
  return c.done("100 random stores, " + std::to_string(records) + " records");
}

Outcome registry() {
  Checker c;
  std::mt19937_64 rng(31);
  std::size_t mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string name = test::random_name(rng, 1 + rng() % 32);
    if (assign_id(name).value() != test::fnv1a_oracle(name)) ++mismatches;
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " of 10000 names differ from oracle");

  std::size_t injected = 0, detected = 0;
  for (int round = 0; round < 60; ++round) {
    // Clean base: distinct names, distinct ids.
    std::vector<TypeEntry> entries;
    std::set<std::uint32_t> ids;
    std::set<std::string> names;
    const std::size_t base = 1 + rng() % 800;
    while (entries.size() < base) {
      const std::string name = "T" + std::to_string(rng());
      const ClassId id = assign_id(name);
      if (!ids.insert(id.value()).second || !names.insert(name).second) continue;
      entries.push_back({id, name});
    }
    c.expect(verify(ClidDatabase(entries)).empty(), "clean base reports no conflicts");
    std::vector<Conflict> expected;
    const std::size_t inject = 1 + rng() % std::min<std::size_t>(200, 1000 - base);
    for (std::size_t k = 0; k < inject; ++k) {
      const TypeEntry victim = entries[rng() % base];
      if (rng() % 2) {
        std::string fresh;
        do fresh = "N" + std::to_string(rng());
        while (!names.insert(fresh).second);
        entries.push_back({victim.id, fresh});
        expected.push_back({Conflict::Kind::kDuplicateId, victim, entries.back()});
      } else {
        std::uint32_t fresh;
        do fresh = 256 + static_cast<std::uint32_t>(rng() % (ClassId::kLimit - 256));
        while (!ids.insert(fresh).second);
        entries.push_back({ClassId(fresh), victim.type_name});
        expected.push_back({Conflict::Kind::kDuplicateName, victim, entries.back()});
      }
    }
    std::shuffle(entries.begin(), entries.end(), rng);
    const ConflictReport report = verify(ClidDatabase(entries));
    for (const Conflict& want : expected) {
      ++injected;
      const bool found = std::any_of(
          report.conflicts.begin(), report.conflicts.end(), [&](const Conflict& got) {
            return got.kind == want.kind &&
                   ((got.first == want.first && got.second == want.second) ||
                    (got.first == want.second && got.second == want.first));
          });
      detected += found ? 1 : 0;
    }
  }
  c.expect(detected == injected, std::to_string(injected - detected) + " injected conflicts missed");
  return c.done("10000 names vs FNV-1a oracle; " + std::to_string(detected) + "/" +
                std::to_string(injected) + " injected conflicts detected");
}

Outcome lifetime() {
  Checker c;
  std::mt19937_64 rng(37);
  std::size_t event_total = 0, job_total = 0, stale_total = 0;
  for (int round = 0; round < 100; ++round) {
    EventStore store;
    std::size_t events = 0, jobs = 0;
    std::vector<std::string> job_keys;
    for (std::size_t i = 0, n = rng() % 30; i < n; ++i) {
      const bool job = rng() % 3 == 0;
      const std::string key = "k" + std::to_string(i);
      const Lifetime life = job ? Lifetime::kJob : Lifetime::kEvent;
      if (rng() % 2) {
        store.record(tracks(1), key, RecordOptions{life, {}});
      } else {
        store.register_loader<TrackCollection>(key, [] { return tracks(2); }, life);
      }
      (job ? jobs : events) += 1;
      if (job) job_keys.push_back(key);
    }
    auto handles = store.retrieve_range<TrackCollection>();
    const std::size_t removed = store.clear(ClearScope::kEventOnly);
    c.expect(removed == events, "clear removes every event proxy");
    std::size_t event_left = 0;
    for (const DataProxy* p : store.proxies()) event_left += p->lifetime() == Lifetime::kEvent;
    c.expect(event_left == 0, "no event proxy remains");
    std::size_t job_left = 0;
    for (const auto& k : job_keys) {
      job_left += store.contains<TrackCollection>(k);
      store.retrieve<TrackCollection>(k);
    }
    c.expect(job_left == jobs, "every job proxy remains");
    for (const auto& h : handles) {
      const auto code = test::error_code([&] { (void)h->size(); });
      c.expect(code == Errc::kStaleHandle, "stale handle refuses access");
      stale_total += code == Errc::kStaleHandle;
    }
    event_total += events;
    job_total += jobs;
  }
  return c.done(std::to_string(event_total) + " event proxies cleared, " +
                std::to_string(job_total) + " job proxies kept, " + std::to_string(stale_total) +
                " stale handles refused");
}

// Median of `trials` medians per size, interleaving the two sizes.
Outcome performance() {
  const std::uint64_t m = 1000000;
  const int trials = 3;
  std::vector<double> small, large;
  double wall_ms = 0;
  for (int t = 0; t < trials; ++t) {
    for (std::uint64_t k : {100000ull, 200000ull}) {
      bench::Options o;
      o.objects = k;
      o.retrieves = m;
      o.flavor = bench::Flavor::kKeyed;
      o.seed = 42 + static_cast<std::uint64_t>(t);
      const bench::Report r = bench::run(o);
      (k == 100000 ? small : large).push_back(r.median_ns);
      wall_ms += r.populate_ms + r.total_ms;
    }
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double a = median(small), b = median(large);
  const double ratio = b / a;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "keyed median %.1f ns at k=1e5, %.1f ns at k=2e5, ratio %.3f (< 2 required), "
                "m=1e6, %d trials, %.0f ms",
                a, b, ratio, trials, wall_ms);
  return {ratio < 2.0, buf};
}

}  // namespace

int main() {
  toy::register_toy_types();
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"api-conformance", api_conformance},
      {"default-resolution-oracle", default_resolution},
      {"laziness", laziness},
      {"access-control", access_control},
      {"link-oracle", link_oracle},
      {"persistence-round-trip", persistence_roundtrip},
      {"registry", registry},
      {"lifetime", lifetime},
      {"performance", performance},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("unexpected exception: ") + e.what()};
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %-26s %s (%.3fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), s);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
