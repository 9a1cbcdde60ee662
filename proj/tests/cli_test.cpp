#include <sys/wait.h>

#include <array>
#include <cstdio>

#include "doctest.h"
#include "support.hpp"

using namespace parsivc;
using namespace parsivc::testing;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(PARSIVC_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string corpusArg(const std::string& name) { return "'" + corpusFile(name).string() + "'"; }

}  // namespace

TEST_CASE("exit codes follow discharge status") {
  CHECK(cli("vcs " + corpusArg("Closure_Example.mthy")).code == 0);
  CHECK(cli("vcs " + corpusArg("Running_Example.mthy")).code == 0);
  CHECK(cli("vcs " + corpusArg("Do_Nothing_Capability.mrsl")).code == 2);
  CHECK(cli("vcs " + corpusArg("Contradiction.mrsl")).code == 3);
  CHECK(cli("vcs /nonexistent/file.mrsl").code == 1);
  CHECK(cli("vcs --mode eager " + corpusArg("Closure_Example.mthy")).code != 0);
}

TEST_CASE("text output lists each VC with provenance") {
  const Run r = cli("vcs " + corpusArg("Do_Nothing_Capability.mrsl"));
  CHECK(r.out.find("| restores parameter S | {1 <= |<e'> o S'|} |- {S' = <e'> o S'} | unknown") != std::string::npos);
  CHECK(r.out.find("2 VCs: 1 proved, 0 vacuous, 1 unknown") != std::string::npos);
}

TEST_CASE("--json output round-trips and matches the library") {
  for (const char* mode : {"parsimonious", "conservative"}) {
    const Run r = cli(std::string("vcs --json --mode ") + mode + " " + corpusArg("Selection_Sort_Capability.mrsl"));
    CHECK(r.code == 2);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    const Report parsed = reportFromJson(j);
    CHECK(toJson(parsed) == j);
    CHECK(computeMetrics(parsed.vcs) == parsed.metrics);
    const Report lib = runCorpus("Selection_Sort_Capability.mrsl", *parseMode(mode));
    CHECK(parsed == lib);
  }
}

TEST_CASE("trace and metrics subcommands") {
  const Run t = cli("trace --json " + corpusArg("Running_Example.mthy"));
  REQUIRE(t.code == 0);
  std::vector<std::string> rules;
  const nlohmann::json trace = nlohmann::json::parse(t.out);
  for (const auto& s : trace["trace"]) rules.push_back(s["rule"]);
  CHECK(rules == std::vector<std::string>{"Confirm", "AndRight", "OrRight", "ParsimoniousAssume", "ApplyEqLeft",
                                          "ApplyEqLeft", "ApplyEqLeft", "ApplyEqLeft"});

  const Run m = cli("metrics --json " + corpusArg("Flip_Capability.mrsl") + " " + corpusArg("Append_Capability.mrsl"));
  REQUIRE(m.code == 0);
  const nlohmann::json j = nlohmann::json::parse(m.out);
  CHECK(j["parsimonious"].back()["vcs"] == 14);
  CHECK(j["conservative"].back()["vcs"] == 14);
  CHECK(cli("metrics " + corpusArg("Flip_Capability.mrsl")).out.rfind("component", 0) == 0);
}

TEST_CASE("parallel jobs give identical output") {
  const std::string f = corpusArg("Copy_Capability.mrsl");
  CHECK(cli("vcs --json --jobs 3 " + f).out == cli("vcs --json " + f).out);
}
