// parsivc: derive and check verification conditions for RESOLVE-style sources.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parsivc/error.hpp"
#include "parsivc/frontend.hpp"
#include "parsivc/report.hpp"
#ifdef PARSIVC_WITH_SERVICE
#include "parsivc/service.hpp"
#endif

namespace {

constexpr const char* kExitCodes =
    "Exit codes: 0 every VC proved, 2 some VC unknown, 3 no VC unknown but some vacuous, 1 error.";

struct Common {
  std::vector<std::string> files;
  std::string mode = "parsimonious";
  bool json = false;
  int jobs = 1;
  std::vector<std::string> theoryPath;
};

std::vector<std::filesystem::path> searchPath(const Common& c) {
  std::vector<std::filesystem::path> out;
  for (const auto& p : c.theoryPath) {
    for (auto& q : parsivc::splitSearchPath(p)) out.push_back(q);
  }
  if (const char* env = std::getenv("PARSIVC_THEORY_PATH")) {
    for (auto& q : parsivc::splitSearchPath(env)) out.push_back(q);
  }
#ifdef PARSIVC_DEFAULT_THEORY_DIR
  out.emplace_back(PARSIVC_DEFAULT_THEORY_DIR);
#endif
  return out;
}

parsivc::Report run(const Common& c, parsivc::Mode mode, bool fullTrace) {
  parsivc::ModuleLoader loader(searchPath(c));
  parsivc::RunOptions opts;
  opts.engine.mode = mode;
  opts.jobs = c.jobs;
  std::vector<parsivc::BlockResult> all;
  for (const auto& f : c.files) {
    const parsivc::SourceModule& m = loader.loadFile(f);
    for (auto& b : parsivc::runModule(m, loader, opts)) all.push_back(std::move(b));
  }
  return parsivc::makeReport(all, mode, fullTrace);
}

void addCommon(CLI::App* cmd, Common& c, bool withMode) {
  cmd->add_option("files", c.files, "Source files (.mrsl or .mthy)")->required();
  if (withMode) {
    cmd->add_option("--mode", c.mode, "parsimonious or conservative")
        ->check(CLI::IsMember({"parsimonious", "conservative"}));
  }
  cmd->add_flag("--json", c.json, "Structured output");
  cmd->add_option("--jobs", c.jobs, "Derive blocks in parallel")->check(CLI::PositiveNumber);
  cmd->add_option("--theory-path", c.theoryPath, "Directories searched for imported modules");
}

int cmdVcs(const Common& c) {
  const parsivc::Report r = run(c, *parsivc::parseMode(c.mode), false);
  if (c.json) {
    std::cout << parsivc::toJson(r).dump(2) << '\n';
  } else {
    for (const auto& v : r.vcs) std::cout << parsivc::formatVc(v) << '\n';
    const auto& t = r.metrics.back();
    std::cout << t.vcs << " VCs: " << t.proved << " proved, " << t.vacuous << " vacuous, " << t.unknown
              << " unknown\n";
  }
  return parsivc::exitStatus(r);
}

int cmdTrace(const Common& c) {
  const parsivc::Report r = run(c, *parsivc::parseMode(c.mode), true);
  if (c.json) {
    std::cout << parsivc::toJson(r).dump(2) << '\n';
    return 0;
  }
  for (const auto& t : r.trace) {
    std::cout << "== " << t.block << " step " << t.step << ": " << t.rule;
    if (t.kind != "statement") std::cout << " on sequent " << t.sequent << ' ' << t.side << '[' << t.index << ']';
    std::cout << "\n   " << t.subject << '\n' << t.after << '\n';
  }
  return 0;
}

int cmdMetrics(const Common& c) {
  const parsivc::Report pars = run(c, parsivc::Mode::Parsimonious, false);
  const parsivc::Report cons = run(c, parsivc::Mode::Conservative, false);
  if (c.json) {
    nlohmann::json p = nlohmann::json::array();
    nlohmann::json q = nlohmann::json::array();
    for (const auto& m : pars.metrics) p.push_back(parsivc::toJson(m));
    for (const auto& m : cons.metrics) q.push_back(parsivc::toJson(m));
    std::cout << nlohmann::json{{"version", parsivc::kReportVersion}, {"parsimonious", p}, {"conservative", q}}.dump(2)
              << '\n';
  } else {
    std::cout << parsivc::formatMetricsTable(pars.metrics, cons.metrics);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parsimonious sequent-based VC generator", "parsivc"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  Common vcs, metrics, trace;
  addCommon(app.add_subcommand("vcs", "Print the final VCs with discharge status"), vcs, true);
  addCommon(app.add_subcommand("metrics", "Compare VC counts and antecedent sizes across both modes"), metrics, false);
  addCommon(app.add_subcommand("trace", "Dump every rule application"), trace, true);

#ifdef PARSIVC_WITH_SERVICE
  parsivc::ServeOptions serve;
  std::vector<std::string> serveTheoryPath;
  auto* srv = app.add_subcommand("serve", "Run the interactive derivation service");
  srv->add_option("--port", serve.port, "TCP port");
  srv->add_option("--host", serve.host, "Bind address");
  srv->add_option("--ui-dir", serve.uiDir, "Static assets served at /");
  srv->add_option("--theory-path", serveTheoryPath, "Directories searched for imported modules");
#endif

  CLI11_PARSE(app, argc, argv);
  try {
    if (app.got_subcommand("vcs")) return cmdVcs(vcs);
    if (app.got_subcommand("metrics")) return cmdMetrics(metrics);
    if (app.got_subcommand("trace")) return cmdTrace(trace);
#ifdef PARSIVC_WITH_SERVICE
    if (app.got_subcommand("serve")) {
      Common c;
      c.theoryPath = serveTheoryPath;
      serve.searchPath = searchPath(c);
      return parsivc::serve(serve);
    }
#endif
  } catch (const parsivc::Error& e) {
    std::cerr << e.diagnostic() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
