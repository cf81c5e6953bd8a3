// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

// sgtool: run pipelines, inspect store files, manage the class id database
// and time retrievals.
//
// Exit codes: 0 success, 1 I/O, 2 configuration or bad arguments,
// 3 runtime or parse error, 4 class id conflict. Failures print one line
// "sgtool: error: <category>: <message>" on stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "storegate/bench.hpp"
#include "storegate/classid.hpp"
#include "storegate/error.hpp"
#include "storegate/persistence.hpp"
#include "storegate/pipeline.hpp"

namespace {

enum Exit { kOk = 0, kIo = 1, kConfig = 2, kRuntime = 3, kConflict = 4 };

int fail(std::string_view category, std::string message, int code) {
  for (char& c : message) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << "sgtool: error: " << category << ": " << message << '\n';
  return code;
}

int fail(const sg::Error& e, int code) { return fail(sg::errc_name(e.code()), e.what(), code); }

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> events,
            std::optional<std::string> out) {
  try {
    sg::pipeline::PipelineConfig config = sg::pipeline::PipelineConfig::load(config_path);
    if (events) config.events = *events;
    if (out) config.output = *out;
    const sg::pipeline::RunReport report = sg::pipeline::run(config);
    std::cout << report.to_text();
    return kOk;
  } catch (const sg::Error& e) {
    switch (e.code()) {
      case sg::Errc::kIoError: return fail(e, kIo);
      case sg::Errc::kConfigError: return fail(e, kConfig);
      default: return fail(e, kRuntime);
    }
  }
}

int cmd_dump(const std::string& in_path, std::optional<std::uint64_t> event) {
  try {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw sg::Error(sg::Errc::kIoError, "cannot open '" + in_path + "'");
    const sg::StoreImage image = sg::read_image(in);
    if (event && !image.find_event(*event)) {
      throw sg::Error(sg::Errc::kNotFound, "no event " + std::to_string(*event));
    }
    std::cout << "# " << in_path << ": " << image.events.size() << " event(s)\n";
    for (const sg::EventImage& ev : image.events) {
      if (event && ev.number != *event) continue;
      for (const sg::ObjectRecord& rec : ev.records) {
        std::cout << "event " << ev.number << " classid " << rec.class_id.value() << " type "
                  << rec.type_name << " key '" << rec.key << "' payload " << rec.payload.size()
                  << " links " << rec.links.size() << '\n';
      }
    }
    return kOk;
  } catch (const sg::Error& e) {
    return fail(e, e.code() == sg::Errc::kIoError ? kIo : kRuntime);
  }
}

int cmd_clid_gen(const std::string& name, const std::string& db_path) {
  try {
    const sg::ClassId id = sg::assign_id(name);
    if (!sg::is_valid_type_name(name)) {
      return fail("empty-name", "type name must be a single non-empty token", kConfig);
    }
    sg::ClidDatabase db = std::filesystem::exists(db_path) ? sg::load_db(db_path)
                                                            : sg::ClidDatabase{};
    const std::size_t before = db.size();
    db = sg::register_runtime(db, {id, name});
    if (db.size() != before) sg::save_db(db, db_path);
    std::cout << id.value() << ' ' << name << '\n';
    return kOk;
  } catch (const sg::Error& e) {
    switch (e.code()) {
      case sg::Errc::kIoError: return fail(e, kIo);
      case sg::Errc::kEmptyName: return fail(e, kConfig);
      case sg::Errc::kDuplicateId:
        return fail("duplicate-id",
                    "id of '" + name + "' is already bound to '" + e.what() + "'", kConflict);
      case sg::Errc::kDuplicateName:
        return fail("duplicate-name",
                    "'" + name + "' is already bound to id " + e.what(), kConflict);
      default: return fail(e, kRuntime);
    }
  }
}

int cmd_clid_verify(const std::string& db_path) {
  try {
    const sg::ClidDatabase db = sg::load_db(db_path);
    const sg::ConflictReport report = sg::verify(db);
    if (!report.empty()) {
      std::cout << report.to_string();
      return fail("conflict", std::to_string(report.conflicts.size()) + " conflict(s) in '" +
                                  db_path + "'",
                  kConflict);
    }
    std::cout << "ok: " << db.size() << " entries, no conflicts\n";
    return kOk;
  } catch (const sg::Error& e) {
    return fail(e, e.code() == sg::Errc::kIoError ? kIo : kRuntime);
  }
}

int cmd_bench(const sg::bench::Options& options, bool json) {
  try {
    const sg::bench::Report r = sg::bench::run(options);
    if (json) {
      nlohmann::json j = {
          {"objects", r.objects},         {"retrieves", r.retrieves},
          {"flavor", std::string(sg::bench::flavor_name(r.flavor))},
          {"samples", r.samples},         {"median_ns", r.median_ns},
          {"p99_ns", r.p99_ns},           {"mean_ns", r.mean_ns},
          {"populate_ms", r.populate_ms}, {"total_ms", r.total_ms},
      };
      std::cout << j.dump() << '\n';
    } else {
      std::cout << r.to_text();
    }
    return kOk;
  } catch (const sg::Error& e) {
    return fail(e, e.code() == sg::Errc::kConfigError ? kConfig : kRuntime);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"StoreGate event store tool"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> run_events;
  std::optional<std::string> run_out;
  auto* run = app.add_subcommand("run", "run a pipeline configuration");
  run->add_option("--config", config_path, "pipeline configuration file")->required();
  run->add_option("--events", run_events, "override EVENTS");
  run->add_option("--out", run_out, "override OUT");

  std::string dump_in;
  std::optional<std::uint64_t> dump_event;
  auto* dump = app.add_subcommand("dump", "list the records of a store file");
  dump->add_option("--in", dump_in, "store file")->required();
  dump->add_option("--event", dump_event, "only this event");

  auto* clid = app.add_subcommand("clid", "class id database management");
  clid->require_subcommand(1);
  std::string gen_name, gen_db, verify_db;
  auto* gen = clid->add_subcommand("gen", "assign an id to a type name and record it");
  gen->add_option("--name", gen_name, "type name")->required();
  gen->add_option("--db", gen_db, "database file")->required();
  auto* verify = clid->add_subcommand("verify", "check a database for conflicts");
  verify->add_option("--db", verify_db, "database file")->required();

  sg::bench::Options bench_opts;
  bool bench_json = false;
  auto* bench = app.add_subcommand("bench", "retrieval latency micro-benchmark");
  bench->add_option("--objects", bench_opts.objects, "objects in the store")->required();
  bench->add_option("--retrieves", bench_opts.retrieves, "timed retrieves")->required();
  bench->add_option("--seed", bench_opts.seed, "key selection seed");
  auto* flavors = bench->add_option_group("flavor");
  auto* keyed = flavors->add_flag("--keyed", "retrieve by key (default)");
  auto* by_default = flavors->add_flag("--default", "retrieve by type only");
  auto* range = flavors->add_flag("--range", "retrieve the full range");
  flavors->require_option(0, 1);
  bench->add_flag("--json", bench_json, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kConfig);
  }

  if (*run) return cmd_run(config_path, run_events, run_out);
  if (*dump) return cmd_dump(dump_in, dump_event);
  if (*gen) return cmd_clid_gen(gen_name, gen_db);
  if (*verify) return cmd_clid_verify(verify_db);
  if (*bench) {
    (void)keyed;
    if (*by_default) bench_opts.flavor = sg::bench::Flavor::kDefault;
    if (*range) bench_opts.flavor = sg::bench::Flavor::kRange;
    return cmd_bench(bench_opts, bench_json);
  }
  return kConfig;
}
