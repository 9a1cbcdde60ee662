#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace parsivc;
using namespace parsivc::testing;

namespace {

std::filesystem::path goldenFile(const std::string& name) {
  return std::filesystem::path(PARSIVC_GOLDEN_DIR) / name;
}

// Golden lines leave out the file path so they survive a checkout move.
std::string goldenText(const Report& r) {
  std::string out;
  for (auto v : r.vcs) {
    v.file = std::filesystem::path(v.file).filename().string();
    out += formatVc(v) + '\n';
  }
  return out;
}

// PARSIVC_UPDATE_GOLDEN=1 rewrites the snapshots instead of comparing.
void checkGolden(const std::string& name, const std::string& actual) {
  const std::filesystem::path p = goldenFile(name);
  if (std::getenv("PARSIVC_UPDATE_GOLDEN")) {
    std::ofstream(p) << actual;
    return;
  }
  std::ifstream in(p);
  REQUIRE_MESSAGE(in.good(), "missing golden file " << p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == actual);
}

}  // namespace

TEST_CASE("components come from labels and VC ids") {
  CHECK(componentOf("Flip / path 2 / invariant inductive step#3") == "Flip");
  CHECK(componentOf("Lengths#1") == "Lengths");
  CHECK(componentOf("Lengths") == "Lengths");
}

TEST_CASE("exit status ranks unknown over vacuous") {
  Report r;
  CHECK(exitStatus(r) == 0);
  r.vcs.push_back({});
  r.vcs.back().status = "proved";
  CHECK(exitStatus(r) == 0);
  r.vcs.push_back({});
  r.vcs.back().status = "vacuous";
  CHECK(exitStatus(r) == 3);
  r.vcs.push_back({});
  r.vcs.back().status = "unknown";
  CHECK(exitStatus(r) == 2);
  CHECK(exitStatus(runCorpus("Closure_Example.mthy", Mode::Parsimonious)) == 0);
  CHECK(exitStatus(runCorpus("Contradiction.mrsl", Mode::Parsimonious)) == 3);
  CHECK(exitStatus(runCorpus("Do_Nothing_Capability.mrsl", Mode::Parsimonious)) == 2);
}

TEST_CASE("formatVc shows provenance and both sides") {
  VcRecord v;
  v.id = "P#1";
  v.file = "x.mrsl";
  v.line = 4;
  v.reason = "ensures clause of P";
  v.antecedents = {"a", "b"};
  v.succedents = {"c"};
  v.status = "unknown";
  CHECK(formatVc(v) == "P#1 | x.mrsl:4 | ensures clause of P | {a, b} |- {c} | unknown");
}

TEST_CASE("reports round-trip through JSON") {
  for (const auto& f : allCorpus()) {
    CAPTURE(f);
    for (Mode m : {Mode::Parsimonious, Mode::Conservative}) {
      const Report r = runCorpus(f, m, true);
      const nlohmann::json j = toJson(r);
      CHECK(reportFromJson(j) == r);
      CHECK(reportFromJson(nlohmann::json::parse(j.dump())) == r);
      CHECK(j["version"] == kReportVersion);
    }
  }
}

TEST_CASE("metrics are recomputable from the VC list alone") {
  for (const auto& f : tableCorpus()) {
    CAPTURE(f);
    const Report r = runCorpus(f, Mode::Conservative);
    const Report back = reportFromJson(nlohmann::json::parse(toJson(r).dump()));
    CHECK(computeMetrics(back.vcs) == r.metrics);
    CHECK(r.metrics.back().component == "total");
    CHECK(r.metrics.back().vcs == static_cast<int>(r.vcs.size()));
  }
  const auto empty = computeMetrics({});
  REQUIRE(empty.size() == 1);
  CHECK(empty[0] == Metrics{"total", 0, 0, 0, 0, 0, 0});
}

TEST_CASE("parallel derivation keeps source order") {
  for (const auto& f : tableCorpus()) {
    CAPTURE(f);
    Loaded l = loadCorpus(f);
    RunOptions one, many;
    many.jobs = 4;
    const Report a = makeReport(runModule(*l.module, *l.loader, one), Mode::Parsimonious, true);
    const Report b = makeReport(runModule(*l.module, *l.loader, many), Mode::Parsimonious, true);
    CHECK(toJson(a).dump() == toJson(b).dump());
  }
}

TEST_CASE("frozen VC snapshots of the corpus") {
  for (const auto& f : allCorpus()) {
    CAPTURE(f);
    const std::string stem = std::filesystem::path(f).stem().string();
    checkGolden(stem + ".parsimonious.txt", goldenText(runCorpus(f, Mode::Parsimonious)));
    checkGolden(stem + ".conservative.txt", goldenText(runCorpus(f, Mode::Conservative)));
  }
}

TEST_CASE("frozen metrics table") {
  std::vector<VcRecord> p, c;
  for (const auto& f : tableCorpus()) {
    for (auto& v : runCorpus(f, Mode::Parsimonious).vcs) p.push_back(v);
    for (auto& v : runCorpus(f, Mode::Conservative).vcs) c.push_back(v);
  }
  checkGolden("metrics.txt", formatMetricsTable(computeMetrics(p), computeMetrics(c)));
}
