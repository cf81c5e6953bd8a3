// Copyright 2026 The StoreGate Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <functional>

#include <json.hpp>

#include "test_util.hpp"

#ifndef SGTOOL_PATH
#error "SGTOOL_PATH must name the sgtool binary"
#endif

namespace {

struct Result {
  int exit = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

Result sgtool(const sg::test::TempDir& dir, const std::string& args) {
  const auto out = dir.path() / "stdout.txt";
  const auto err = dir.path() / "stderr.txt";
  const std::string cmd = quote(SGTOOL_PATH) + " " + args + " >" + quote(out.string()) +
                          " 2>" + quote(err.string());
  const int status = std::system(cmd.c_str());
  Result r;
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = sg::test::read_file(out);
  r.err = sg::test::read_file(err);
  return r;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Errors are one line: "sgtool: error: <category>: <message>".
bool one_line_error(const Result& r, std::string_view category) {
  return count_lines(r.err) == 1 &&
         r.err.rfind("sgtool: error: " + std::string(category) + ": ", 0) == 0;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run") {
  sg::test::TempDir dir;
  const auto cfg = dir.path() / "p.cfg";
  const auto out = dir.path() / "p.sg";
  sg::test::write_file(cfg, "ALG TrackMaker TM n=5\nALG ClusterMaker CM\nALG TrackSelector TS\n"
                            "EVENTS 2\nOUT " + out.string() + "\n");
  Result r = sgtool(dir, "run --config " + quote(cfg.string()));
  CHECK(r.exit == 0);
  CHECK(r.out.find("event 0: records=3") != std::string::npos);
  CHECK(r.out.find("event 1: records=3") != std::string::npos);
  const std::string first = sg::test::read_file(out);
  r = sgtool(dir, "run --config " + quote(cfg.string()));
  CHECK(sg::test::read_file(out) == first);

  r = sgtool(dir, "run --config " + quote(cfg.string()) + " --events 1 --out " +
                      quote((dir.path() / "one.sg").string()));
  CHECK(r.exit == 0);
  CHECK(r.out.find("event 1:") == std::string::npos);
  CHECK(std::filesystem::exists(dir.path() / "one.sg"));
}

TEST_CASE("run error paths") {
  sg::test::TempDir dir;
  Result r = sgtool(dir, "run --config " + quote((dir.path() / "missing.cfg").string()));
  CHECK(r.exit == 1);
  CHECK(one_line_error(r, "io"));

  const auto cfg = dir.path() / "bad.cfg";
  sg::test::write_file(cfg, "ALG Frobnicator F\n");
  r = sgtool(dir, "run --config " + quote(cfg.string()));
  CHECK(r.exit == 2);
  CHECK(one_line_error(r, "config"));
  CHECK(r.err.find("Frobnicator") != std::string::npos);

  sg::test::write_file(cfg, "ALG TrackSelector TS\n");
  r = sgtool(dir, "run --config " + quote(cfg.string()));
  CHECK(r.exit == 3);
  CHECK(one_line_error(r, "not-found"));

  sg::test::write_file(cfg, "ALG TrackMaker TM\nOUT /nonexistent/dir/x.sg\n");
  r = sgtool(dir, "run --config " + quote(cfg.string()));
  CHECK(r.exit == 1);

  sg::test::write_file(cfg, "ALG TrackSelector TS\nMODE consume-lazy\nIN /nonexistent/in.sg\n");
  r = sgtool(dir, "run --config " + quote(cfg.string()));
  CHECK(r.exit == 1);
  CHECK(r.err.find("/nonexistent/in.sg") != std::string::npos);

  r = sgtool(dir, "run");
  CHECK(r.exit == 2);
  CHECK(one_line_error(r, "usage"));
  r = sgtool(dir, "frobnicate");
  CHECK(r.exit == 2);
}

TEST_CASE("dump") {
  sg::test::TempDir dir;
  const auto cfg = dir.path() / "p.cfg";
  const auto out = dir.path() / "p.sg";
  sg::test::write_file(cfg, "ALG TrackMaker TM\nALG ClusterMaker CM\nALG LinkBuilder LB\n"
                            "EVENTS 2\nOUT " + out.string() + "\n");
  REQUIRE(sgtool(dir, "run --config " + quote(cfg.string())).exit == 0);
  const std::string before = sg::test::read_file(out);

  Result r = sgtool(dir, "dump --in " + quote(out.string()));
  CHECK(r.exit == 0);
  CHECK(count_lines(r.out) == 1 + 6);
  CHECK(r.out.rfind("# " + out.string() + ": 2 event(s)\n", 0) == 0);
  CHECK(r.out.find("type TrackCollection key 'TM'") != std::string::npos);
  r = sgtool(dir, "dump --in " + quote(out.string()) + " --event 1");
  CHECK(r.exit == 0);
  CHECK(count_lines(r.out) == 1 + 3);
  CHECK(r.out.find("event 0 ") == std::string::npos);
  CHECK(sg::test::read_file(out) == before);

  r = sgtool(dir, "dump --in " + quote(out.string()) + " --event 9");
  CHECK(r.exit == 3);
  r = sgtool(dir, "dump --in " + quote((dir.path() / "none.sg").string()));
  CHECK(r.exit == 1);
  CHECK(one_line_error(r, "io"));
  const auto bad = dir.path() / "bad.sg";
  sg::test::write_file(bad, "SGSTORE v1\nEVENT 0\nJUNK\n");
  r = sgtool(dir, "dump --in " + quote(bad.string()));
  CHECK(r.exit == 3);
  CHECK(one_line_error(r, "parse"));
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("clid gen and verify") {
  sg::test::TempDir dir;
  const auto db = dir.path() / "clid.db";
  Result r = sgtool(dir, "clid gen --name MyTrackCollection --db " + quote(db.string()));
  CHECK(r.exit == 0);
  const std::string after_first = sg::test::read_file(db);
  r = sgtool(dir, "clid gen --name MyTrackCollection --db " + quote(db.string()));
  CHECK(r.exit == 0);
  CHECK(sg::test::read_file(db) == after_first);
  CHECK(count_lines(after_first) == 1);
  CHECK(sgtool(dir, "clid gen --name Other --db " + quote(db.string())).exit == 0);
  r = sgtool(dir, "clid verify --db " + quote(db.string()));
  CHECK(r.exit == 0);

  sg::test::write_file(db, sg::test::read_file(db) + "1234 A\n1234 B\n");
  r = sgtool(dir, "clid verify --db " + quote(db.string()));
  CHECK(r.exit == 4);
  CHECK(r.out.find("1234") != std::string::npos);
  CHECK(one_line_error(r, "conflict"));

  // The name is already bound to an id it does not hash to.
  sg::test::write_file(db, "1234 MyTrackCollection\n");
  r = sgtool(dir, "clid gen --name MyTrackCollection --db " + quote(db.string()));
  CHECK(r.exit == 4);
  CHECK(one_line_error(r, "duplicate-name"));

  r = sgtool(dir, "clid verify --db " + quote((dir.path() / "none.db").string()));
  CHECK(r.exit == 1);
  sg::test::write_file(db, "abc Foo\n");
  r = sgtool(dir, "clid verify --db " + quote(db.string()));
  CHECK(r.exit == 3);
  r = sgtool(dir, "clid gen --name '' --db " + quote(db.string()));
  CHECK(r.exit == 2);
}

TEST_CASE("bench") {
  sg::test::TempDir dir;
  Result r = sgtool(dir, "bench --objects 1 --retrieves 1 --json");
  REQUIRE(r.exit == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* field : {"objects", "retrieves", "median_ns", "p99_ns", "flavor", "samples"}) {
    CHECK(j.contains(field));
  }
  CHECK(j["samples"] == 1);
  CHECK(j["flavor"] == "keyed");

  for (const char* flavor : {"--default", "--range", "--keyed"}) {
    r = sgtool(dir, std::string("bench --objects 50 --retrieves 200 ") + flavor);
    CHECK(r.exit == 0);
    CHECK(r.out.find("median") != std::string::npos);
  }
  CHECK(sgtool(dir, "bench --objects 0 --retrieves 5").exit == 2);
  CHECK(sgtool(dir, "bench --objects 5 --retrieves 0").exit == 2);
  CHECK(sgtool(dir, "bench --objects 5 --retrieves 5 --range --default").exit == 2);
  CHECK(sgtool(dir, "bench --objects x --retrieves 5").exit == 2);
}

}  // TEST_SUITE("cli")
