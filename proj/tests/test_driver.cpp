#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <doctest.h>

#include "bf/aut.hpp"
#include "bf/bisim.hpp"
#include "bf/driver.hpp"
#include "bf/models.hpp"

using namespace bf;

TEST_CASE("a full run at one thread passes") {
  RunConfig config;
  config.threads = 1;
  config.check = "all";
  std::ostringstream out;
  CHECK(run(config, out) == 0);
  CHECK(out.str().find("check invariants: pass") != std::string::npos);
  CHECK(out.str().find("check dpbb: pass") != std::string::npos);
  CHECK(out.str().find("check conesfoci: pass") != std::string::npos);
  CHECK(out.str().find("overall: pass") != std::string::npos);
}

TEST_CASE("a dropped improbable loop fails the dpbb check with a counterexample") {
  RunConfig config;
  config.threads = 2;
  config.check = "bisim";
  config.mutation = "drop-spec-improbable-saf";
  std::ostringstream out;
  CHECK(run(config, out) == 1);
  CHECK(out.str().find("not equivalent") != std::string::npos);
  CHECK(out.str().find("distinguished:") != std::string::npos);
  CHECK(out.str().find("overall: FAIL") != std::string::npos);
}

TEST_CASE("usage errors exit with status two") {
  std::ostringstream out;
  RunConfig bad_check;
  bad_check.check = "everything";
  CHECK(run(bad_check, out) == 2);
  RunConfig bad_threads;
  bad_threads.threads = 0;
  CHECK(run(bad_threads, out) == 2);
  RunConfig bad_mutation;
  bad_mutation.mutation = "no-such-mutation";
  CHECK(run(bad_mutation, out) == 2);
  RunConfig tiny_limit;
  tiny_limit.threads = 1;
  tiny_limit.check = "invariants";
  tiny_limit.state_limit = 2;
  CHECK(run(tiny_limit, out) == 2);
  CHECK(out.str().find("raise --limit") != std::string::npos);
}

TEST_CASE("reports are deterministic apart from timing") {
  auto normalized = [](const std::string& text) {
    std::string out;
    bool in_elapsed = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (!in_elapsed && text.compare(i, 8, "elapsed=") == 0) in_elapsed = true;
      if (in_elapsed && (text[i] == ')' || text[i] == '\n')) in_elapsed = false;
      if (!in_elapsed) out += text[i];
    }
    return out;
  };
  RunConfig config;
  config.threads = 1;
  std::ostringstream a, b;
  CHECK(run(config, a) == 0);
  CHECK(run(config, b) == 0);
  CHECK(normalized(a.str()) == normalized(b.str()));
}

TEST_CASE("the exported system round-trips through the parser") {
  RunConfig config;
  config.threads = 1;
  config.check = "invariants";
  std::string path = "bfcheck_test_export.aut";
  config.export_aut_path = path;
  std::ostringstream out;
  REQUIRE(run(config, out) == 0);

  std::ifstream in(path);
  REQUIRE(in.good());
  AutData data = parse_aut(in);
  in.close();
  std::remove(path.c_str());

  auto lts = hide(explore(impl_lpe(1), 100000), standard_hide_set());
  CHECK(data.initial == lts.initial);
  CHECK(data.state_count == lts.states.size());
  CHECK(data.transition_count == lts.transitions.size());
  std::multiset<std::tuple<std::size_t, std::string, std::size_t>> want, got;
  for (const auto& t : lts.transitions) want.insert({t.src, t.label.str(), t.dst});
  for (const auto& t : data.transitions) got.insert(t);
  CHECK(want == got);
}

TEST_CASE("a degenerate system exports as a bare header") {
  struct One {
    std::string key() const { return "x"; }
    bool operator==(const One&) const = default;
    std::string str() const { return "x"; }
  };
  Lts<One> lts;
  lts.states.push_back({});
  std::ostringstream os;
  export_aut(lts, os);
  CHECK(os.str() == "des (0, 0, 1)\n");
}

TEST_CASE("unwritable export paths are reported") {
  Lts<ImplState> lts = explore(impl_lpe(1), 1000);
  CHECK_THROWS_AS(export_aut_file(lts, "/nonexistent-dir/out.aut"), std::runtime_error);
}

TEST_CASE("header counts match the emitted line count") {
  auto lts = explore(spec_lpe(1), 1000);
  std::ostringstream os;
  export_aut(lts, os);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  std::size_t lines = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++lines;
  CHECK(lines == lts.transitions.size());
}
