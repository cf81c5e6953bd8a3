// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// A sequential event loop over named algorithm instances that communicate
// only through the event store.
//
// Configuration file, one directive per line ('#' starts a comment line):
//
//     ALG <kind> <instance_name> [param=value ...]
//     EVENTS <n>
//     MODE produce|consume-lazy|consume-eager
//     OUT <path>
//     IN <path>
//
// After each algorithm the loop calls lock_new(instance_name), so that
// algorithm becomes the publisher of whatever it recorded. An algorithm may
// still modify its own outputs until it returns.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "storegate/classid.hpp"
#include "storegate/persistence.hpp"
#include "storegate/store.hpp"

namespace sg::pipeline {

enum class RunMode { kProduce, kConsumeLazy, kConsumeEager };

std::string_view mode_name(RunMode mode);

struct AlgorithmSpec {
  std::string kind;
  std::string instance_name;
  std::map<std::string, std::string> params;
};

struct PipelineConfig {
  std::vector<AlgorithmSpec> algorithms;
  std::optional<std::uint64_t> events;
  RunMode mode = RunMode::kProduce;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> input;

  // Throws Error(kConfigError) naming the line.
  static PipelineConfig parse(std::string_view text);
  // Throws kIoError when the file cannot be read.
  static PipelineConfig load(const std::filesystem::path& path);
};

// Sink shared by the StoreWriter algorithm and the end-of-event writer.
class OutputSink {
 public:
  virtual ~OutputSink() = default;
  virtual std::size_t write(const EventStore& store, std::uint64_t event_number) = 0;
};

struct EventContext {
  EventStore& store;
  std::uint64_t event_number;
  OutputSink* output = nullptr;
};

class Algorithm {
 public:
  explicit Algorithm(std::string instance_name) : name_(std::move(instance_name)) {}
  virtual ~Algorithm() = default;

  const std::string& name() const noexcept { return name_; }
  virtual void execute(EventContext& ctx) = 0;
  virtual bool writes_output() const { return false; }

 private:
  std::string name_;
};

// Typed access to "key=value" parameters; every key must be consumed.
class Params {
 public:
  explicit Params(const AlgorithmSpec& spec);

  std::optional<std::string> get(std::string_view key);
  std::string get_or(std::string_view key, std::string fallback);
  std::uint64_t get_uint(std::string_view key, std::uint64_t fallback);
  double get_double(std::string_view key, double fallback);
  Lifetime get_lifetime(std::string_view key, Lifetime fallback);
  // Throws kConfigError for any parameter nobody asked for.
  void finish() const;

 private:
  const AlgorithmSpec* spec_;
  std::map<std::string, std::string> unused_;
};

using AlgorithmFactory = std::function<std::unique_ptr<Algorithm>(const AlgorithmSpec&)>;

class AlgorithmCatalog {
 public:
  struct Entry {
    std::string kind;
    std::string description;
    AlgorithmFactory factory;
  };

  void add(std::string kind, std::string description, AlgorithmFactory factory);
  bool contains(std::string_view kind) const;
  // Throws kConfigError naming an unknown kind.
  std::unique_ptr<Algorithm> create(const AlgorithmSpec& spec) const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// TrackMaker, ClusterMaker, TrackSelector, LinkBuilder, StoreWriter.
AlgorithmCatalog builtin_algorithms();

// Summary of one object an algorithm published during an event.
struct PublishedObject {
  std::string type_name;
  std::string key;
  std::string provenance;
  std::string encoding;

  friend bool operator==(const PublishedObject&, const PublishedObject&) = default;
};

struct EventReport {
  std::uint64_t event_number = 0;
  std::size_t records = 0;         // objects in the store at end of event
  std::uint64_t retrieves = 0;
  std::uint64_t faults = 0;        // successful cache-fault loads
  std::uint64_t decodes = 0;       // converter decode calls
  std::size_t written = 0;         // object records written to OUT
  double wall_ms = 0;
  std::vector<PublishedObject> published;
};

struct RunReport {
  RunMode mode = RunMode::kProduce;
  std::vector<EventReport> events;

  std::string to_text() const;
};

struct RunOptions {
  const AlgorithmCatalog* catalog = nullptr;  // builtin_algorithms() when null
  const ConverterRegistry* converters = nullptr;  // toy converters when null
  std::optional<ClidDatabase> clid_db;  // the process TypeRegistry's when unset
};

// Runs a produce-mode configuration. Store errors are rethrown with the same
// code, naming the event and algorithm.
RunReport run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

// Runs consumers over the events of config.input, loading it lazily or
// eagerly per config.mode.
RunReport replay_consume(const PipelineConfig& config, const RunOptions& options = {});

// Dispatches on config.mode.
RunReport run(const PipelineConfig& config, const RunOptions& options = {});

}  // namespace sg::pipeline
