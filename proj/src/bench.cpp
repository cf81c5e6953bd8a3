// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include "storegate/bench.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>
#include <vector>

#include "storegate/store.hpp"
#include "storegate/toy_types.hpp"

namespace sg::bench {

std::string_view flavor_name(Flavor flavor) {
  switch (flavor) {
    case Flavor::kKeyed: return "keyed";
    case Flavor::kDefault: return "default";
    case Flavor::kRange: return "range";
  }
  return "?";
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "flavor " << flavor_name(flavor) << ": objects=" << objects
      << " retrieves=" << retrieves << " median_ns=" << median_ns << " p99_ns=" << p99_ns
      << " mean_ns=" << mean_ns << " populate_ms=" << populate_ms
      << " total_ms=" << total_ms << '\n';
  return out.str();
}

namespace {

using Clock = std::chrono::steady_clock;
using Payload = toy::NumericSequence;

double percentile(std::vector<std::uint64_t>& samples, double q) {
  const std::size_t i =
      std::min(samples.size() - 1, static_cast<std::size_t>(q * static_cast<double>(samples.size())));
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(i),
                   samples.end());
  return static_cast<double>(samples[i]);
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Report run(const Options& options) {
  if (options.objects < 1 || options.retrieves < 1) {
    throw Error(Errc::kConfigError, "bench needs objects >= 1 and retrieves >= 1");
  }
  toy::register_toy_types();

  Report report;
  report.objects = options.objects;
  report.retrieves = options.retrieves;
  report.flavor = options.flavor;

  EventStore store;
  std::vector<std::string> keys;
  keys.reserve(options.objects);
  const auto populate_start = Clock::now();
  for (std::uint64_t i = 0; i < options.objects; ++i) {
    auto obj = std::make_unique<Payload>(1, static_cast<double>(i));
    if (i == 0 && options.flavor == Flavor::kDefault) {
      keys.push_back(store.record(std::move(obj)).key);
    } else {
      keys.push_back("obj" + std::to_string(i));
      store.record(std::move(obj), keys.back());
    }
  }
  report.populate_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - populate_start).count();

  std::vector<std::uint32_t> picks;
  if (options.flavor == Flavor::kKeyed) {
    std::uint64_t state = options.seed;
    picks.resize(options.retrieves);
    for (auto& p : picks) p = static_cast<std::uint32_t>(splitmix(state) % options.objects);
  }

  std::vector<std::uint64_t> samples(options.retrieves);
  double sink = 0;
  const auto loop_start = Clock::now();
  for (std::uint64_t i = 0; i < options.retrieves; ++i) {
    const auto t0 = Clock::now();
    switch (options.flavor) {
      case Flavor::kKeyed:
        sink += store.retrieve<Payload>(keys[picks[i]]).front();
        break;
      case Flavor::kDefault:
        sink += store.retrieve<Payload>().front();
        break;
      case Flavor::kRange:
        for (const auto& h : store.retrieve_range<Payload>()) sink += h->front();
        break;
    }
    const auto t1 = Clock::now();
    samples[i] = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
  }
  report.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - loop_start).count();
  [[maybe_unused]] volatile double keep = sink;

  report.samples = samples.size();
  report.mean_ns = static_cast<double>(std::accumulate(samples.begin(), samples.end(),
                                                       std::uint64_t{0})) /
                   static_cast<double>(samples.size());
  report.median_ns = percentile(samples, 0.5);
  report.p99_ns = percentile(samples, 0.99);
  return report;
}

}  // namespace sg::bench
