// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Retrieval micro-benchmark: populate one store with `objects` entries under
// distinct keys, then time `retrieves` individual retrieve calls.

#include <cstdint>
#include <string>
#include <string_view>

namespace sg::bench {

enum class Flavor {
  kKeyed,    // retrieve<T>(key) with uniformly random keys
  kDefault,  // retrieve<T>() resolving to the object at the default key
  kRange,    // retrieve_range<T>() and dereference every handle
};

std::string_view flavor_name(Flavor flavor);

struct Options {
  std::uint64_t objects = 1000;
  std::uint64_t retrieves = 100000;
  Flavor flavor = Flavor::kKeyed;
  std::uint64_t seed = 42;
};

struct Report {
  std::uint64_t objects = 0;
  std::uint64_t retrieves = 0;
  Flavor flavor = Flavor::kKeyed;
  std::uint64_t samples = 0;
  double median_ns = 0;
  double p99_ns = 0;
  double mean_ns = 0;
  double populate_ms = 0;
  double total_ms = 0;  // wall time of the timed retrieve loop

  std::string to_text() const;
};

// Throws Error(kConfigError) unless objects >= 1 and retrieves >= 1.
Report run(const Options& options);

}  // namespace sg::bench
