// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include "storegate/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "storegate/toy_types.hpp"

namespace sg::pipeline {

std::string_view mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::kProduce: return "produce";
    case RunMode::kConsumeLazy: return "consume-lazy";
    case RunMode::kConsumeEager: return "consume-eager";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

[[noreturn]] void config_error(std::size_t line, const std::string& what) {
  throw Error(Errc::kConfigError, "config line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    pos = line.find_first_not_of(" \t", pos);
    if (pos == std::string_view::npos) break;
    const std::size_t end = std::min(line.find_first_of(" \t", pos), line.size());
    out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

template <typename N>
std::optional<N> parse_number(std::string_view text) {
  N v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace

PipelineConfig PipelineConfig::parse(std::string_view text) {
  PipelineConfig config;
  std::set<std::string, std::less<>> names;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto t = tokens(line);
    if (t.empty() || t[0].front() == '#') continue;
    const std::string_view directive = t[0];
    if (directive == "ALG") {
      if (t.size() < 3) config_error(line_no, "expected 'ALG <kind> <instance_name> ...'");
      AlgorithmSpec spec{std::string(t[1]), std::string(t[2]), {}};
      if (!names.insert(spec.instance_name).second) {
        config_error(line_no, "duplicate instance name '" + spec.instance_name + "'");
      }
      for (std::size_t i = 3; i < t.size(); ++i) {
        const std::size_t eq = t[i].find('=');
        if (eq == std::string_view::npos || eq == 0) {
          config_error(line_no, "expected param=value, got '" + std::string(t[i]) + "'");
        }
        if (!spec.params.emplace(std::string(t[i].substr(0, eq)), std::string(t[i].substr(eq + 1)))
                 .second) {
          config_error(line_no, "repeated parameter '" + std::string(t[i].substr(0, eq)) + "'");
        }
      }
      config.algorithms.push_back(std::move(spec));
    } else if (directive == "EVENTS") {
      if (t.size() != 2) config_error(line_no, "expected 'EVENTS <n>'");
      auto n = parse_number<std::uint64_t>(t[1]);
      if (!n) config_error(line_no, "bad event count '" + std::string(t[1]) + "'");
      config.events = *n;
    } else if (directive == "MODE") {
      if (t.size() != 2) config_error(line_no, "expected 'MODE <mode>'");
      if (t[1] == "produce") {
        config.mode = RunMode::kProduce;
      } else if (t[1] == "consume-lazy") {
        config.mode = RunMode::kConsumeLazy;
      } else if (t[1] == "consume-eager") {
        config.mode = RunMode::kConsumeEager;
      } else {
        config_error(line_no, "unknown mode '" + std::string(t[1]) + "'");
      }
    } else if (directive == "OUT" || directive == "IN") {
      if (t.size() != 2) config_error(line_no, "expected '" + std::string(directive) + " <path>'");
      (directive == "OUT" ? config.output : config.input) = std::filesystem::path(t[1]);
    } else {
      config_error(line_no, "unknown directive '" + std::string(directive) + "'");
    }
  }
  return config;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

// ---------------------------------------------------------------------------
// Parameters and catalog

Params::Params(const AlgorithmSpec& spec) : spec_(&spec), unused_(spec.params) {}

std::optional<std::string> Params::get(std::string_view key) {
  auto it = unused_.find(std::string(key));
  if (it == unused_.end()) {
    auto all = spec_->params.find(std::string(key));
    if (all == spec_->params.end()) return std::nullopt;
    return all->second;
  }
  std::string value = std::move(it->second);
  unused_.erase(it);
  return value;
}

std::string Params::get_or(std::string_view key, std::string fallback) {
  auto v = get(key);
  return v ? std::move(*v) : std::move(fallback);
}

std::uint64_t Params::get_uint(std::string_view key, std::uint64_t fallback) {
  auto v = get(key);
  if (!v) return fallback;
  auto n = parse_number<std::uint64_t>(*v);
  if (!n) {
    throw Error(Errc::kConfigError, spec_->instance_name + ": parameter " + std::string(key) +
                                        " is not an unsigned integer: '" + *v + "'");
  }
  return *n;
}

double Params::get_double(std::string_view key, double fallback) {
  auto v = get(key);
  if (!v) return fallback;
  auto d = parse_number<double>(*v);
  if (!d) {
    throw Error(Errc::kConfigError, spec_->instance_name + ": parameter " + std::string(key) +
                                        " is not a number: '" + *v + "'");
  }
  return *d;
}

Lifetime Params::get_lifetime(std::string_view key, Lifetime fallback) {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "event") return Lifetime::kEvent;
  if (*v == "job") return Lifetime::kJob;
  throw Error(Errc::kConfigError, spec_->instance_name + ": parameter " + std::string(key) +
                                      " must be 'event' or 'job', got '" + *v + "'");
}

void Params::finish() const {
  if (!unused_.empty()) {
    throw Error(Errc::kConfigError, spec_->instance_name + " (" + spec_->kind +
                                        "): unknown parameter '" + unused_.begin()->first + "'");
  }
}

void AlgorithmCatalog::add(std::string kind, std::string description, AlgorithmFactory factory) {
  for (Entry& e : entries_) {
    if (e.kind == kind) {
      e = {std::move(kind), std::move(description), std::move(factory)};
      return;
    }
  }
  entries_.push_back({std::move(kind), std::move(description), std::move(factory)});
}

bool AlgorithmCatalog::contains(std::string_view kind) const {
  for (const Entry& e : entries_) {
    if (e.kind == kind) return true;
  }
  return false;
}

std::unique_ptr<Algorithm> AlgorithmCatalog::create(const AlgorithmSpec& spec) const {
  for (const Entry& e : entries_) {
    if (e.kind == spec.kind) return e.factory(spec);
  }
  throw Error(Errc::kConfigError, "unknown algorithm kind '" + spec.kind + "'");
}

// ---------------------------------------------------------------------------
// Reports

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "mode " << mode_name(mode) << ", " << events.size() << " event(s)\n";
  for (const EventReport& e : events) {
    out << "event " << e.event_number << ": records=" << e.records
        << " retrieves=" << e.retrieves << " faults=" << e.faults << " decodes=" << e.decodes
        << " written=" << e.written << " wall_ms=" << e.wall_ms << '\n';
    for (const PublishedObject& p : e.published) {
      out << "  " << p.type_name << " '" << p.key << "' by " << p.provenance << " ("
          << p.encoding.size() << " bytes)\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Event loop

namespace {

class FileSink final : public OutputSink {
 public:
  FileSink(const std::filesystem::path& path, const ConverterRegistry& converters)
      : converters_(&converters) {
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error(Errc::kIoError, "cannot write '" + path.string() + "'");
    writer_.emplace(file_);
    path_ = path;
  }

  std::size_t write(const EventStore& store, std::uint64_t event_number) override {
    const std::size_t n = writer_->write_event(store, *converters_, event_number);
    file_.flush();
    if (!file_) throw Error(Errc::kIoError, "cannot write '" + path_.string() + "'");
    written_ += n;
    return n;
  }

  std::size_t take_written() { return std::exchange(written_, 0); }

 private:
  const ConverterRegistry* converters_;
  std::ofstream file_;
  std::optional<StoreWriter> writer_;
  std::filesystem::path path_;
  std::size_t written_ = 0;
};

struct Loop {
  std::vector<std::unique_ptr<Algorithm>> algorithms;
  bool explicit_writer = false;
};

Loop build(const PipelineConfig& config, const AlgorithmCatalog& catalog) {
  Loop loop;
  for (const AlgorithmSpec& spec : config.algorithms) {
    loop.algorithms.push_back(catalog.create(spec));
    loop.explicit_writer = loop.explicit_writer || loop.algorithms.back()->writes_output();
  }
  if (loop.explicit_writer && !config.output) {
    throw Error(Errc::kConfigError, "StoreWriter requires an OUT path");
  }
  return loop;
}

void run_algorithms(Loop& loop, EventContext& ctx) {
  for (auto& alg : loop.algorithms) {
    try {
      alg->execute(ctx);
    } catch (const Error& e) {
      throw Error(e.code(), "event " + std::to_string(ctx.event_number) + ", algorithm '" +
                                alg->name() + "': " + e.what());
    }
    ctx.store.lock_new(alg->name());
  }
}

EventReport summarize(const EventStore& store, std::uint64_t event_number) {
  EventReport r;
  r.event_number = event_number;
  r.records = store.size();
  r.retrieves = store.stats().retrieves;
  r.faults = store.stats().loads;
  for (const DataProxy* proxy : store.proxies()) {
    if (proxy->provenance().empty() || !proxy->bucket()) continue;
    r.published.push_back({store.registry().name_of(proxy->store_key().class_id).value_or("?"),
                           proxy->store_key().key, proxy->provenance(),
                           proxy->bucket()->encode()});
  }
  return r;
}

const ConverterRegistry& default_converters() {
  static const ConverterRegistry* registry = [] {
    auto* r = new ConverterRegistry;
    register_toy_converters(*r);
    return r;
  }();
  return *registry;
}

const ConverterRegistry& converters_for(const RunOptions& options) {
  return options.converters ? *options.converters : default_converters();
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

RunReport run_pipeline(const PipelineConfig& config, const RunOptions& options) {
  toy::register_toy_types();
  const AlgorithmCatalog catalog = options.catalog ? AlgorithmCatalog{} : builtin_algorithms();
  Loop loop = build(config, options.catalog ? *options.catalog : catalog);
  const ConverterRegistry& converters = converters_for(options);

  std::optional<FileSink> sink;
  if (config.output) sink.emplace(*config.output, converters);

  RunReport report;
  report.mode = RunMode::kProduce;
  EventStore store;
  const std::uint64_t events = config.events.value_or(1);
  for (std::uint64_t ev = 0; ev < events; ++ev) {
    const auto start = std::chrono::steady_clock::now();
    store.reset_stats();
    EventContext ctx{store, ev, sink ? &*sink : nullptr};
    run_algorithms(loop, ctx);
    if (sink && !loop.explicit_writer) sink->write(store, ev);
    EventReport r = summarize(store, ev);
    r.written = sink ? sink->take_written() : 0;
    r.wall_ms = elapsed_ms(start);
    report.events.push_back(std::move(r));
    store.clear(ClearScope::kEventOnly);
  }
  return report;
}

RunReport replay_consume(const PipelineConfig& config, const RunOptions& options) {
  toy::register_toy_types();
  if (config.mode == RunMode::kProduce) {
    throw Error(Errc::kConfigError, "replay requires MODE consume-lazy or consume-eager");
  }
  if (!config.input) throw Error(Errc::kConfigError, "consume mode requires an IN path");
  const AlgorithmCatalog catalog = options.catalog ? AlgorithmCatalog{} : builtin_algorithms();
  Loop loop = build(config, options.catalog ? *options.catalog : catalog);
  const ConverterRegistry& converters = converters_for(options);
  const ClidDatabase clid_db =
      options.clid_db ? *options.clid_db : TypeRegistry::instance().database();

  std::ifstream in(*config.input, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open input '" + config.input->string() + "'");
  const StoreImage image = read_image(in);

  std::optional<FileSink> sink;
  if (config.output) sink.emplace(*config.output, converters);

  RunReport report;
  report.mode = config.mode;
  EventStore store;
  const std::size_t events =
      std::min<std::uint64_t>(config.events.value_or(image.events.size()), image.events.size());
  for (std::size_t i = 0; i < events; ++i) {
    const EventImage& event = image.events[i];
    const auto start = std::chrono::steady_clock::now();
    store.reset_stats();
    const std::uint64_t decodes_before = converters.decode_count();
    if (config.mode == RunMode::kConsumeLazy) {
      install_event_lazy(event, store, clid_db, converters);
    } else {
      install_event_eager(event, store, clid_db, converters);
    }
    EventContext ctx{store, event.number, sink ? &*sink : nullptr};
    run_algorithms(loop, ctx);
    if (sink && !loop.explicit_writer) sink->write(store, event.number);
    EventReport r = summarize(store, event.number);
    r.decodes = converters.decode_count() - decodes_before;
    r.written = sink ? sink->take_written() : 0;
    r.wall_ms = elapsed_ms(start);
    report.events.push_back(std::move(r));
    store.clear(ClearScope::kEventOnly);
  }
  return report;
}

RunReport run(const PipelineConfig& config, const RunOptions& options) {
  return config.mode == RunMode::kProduce ? run_pipeline(config, options)
                                          : replay_consume(config, options);
}

}  // namespace sg::pipeline
