// Python bindings. Reports cross the boundary as JSON text, decoded by the
// parsivc package, so the dict layout is exactly the CLI's `--json` schema.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "parsivc/error.hpp"
#include "parsivc/frontend.hpp"
#include "parsivc/report.hpp"

namespace py = pybind11;

namespace {

using Paths = std::vector<std::filesystem::path>;

parsivc::Mode modeOf(const std::string& name) {
  if (auto m = parsivc::parseMode(name)) return *m;
  throw py::value_error("mode must be 'parsimonious' or 'conservative', got '" + name + "'");
}

parsivc::Report runSources(const std::vector<std::pair<std::string, std::string>>& sources, const Paths& searchPath,
                           parsivc::Mode mode, bool fullTrace, int jobs) {
  parsivc::ModuleLoader loader(searchPath);
  parsivc::RunOptions opts;
  opts.engine.mode = mode;
  opts.jobs = jobs;
  std::vector<parsivc::BlockResult> all;
  for (const auto& [file, text] : sources) {
    const parsivc::SourceModule& m = text.empty() ? loader.loadFile(file) : loader.loadSource(text, file);
    for (auto& b : parsivc::runModule(m, loader, opts)) all.push_back(std::move(b));
  }
  return parsivc::makeReport(all, mode, fullTrace);
}

std::vector<std::pair<std::string, std::string>> files(const std::vector<std::string>& paths) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : paths) out.emplace_back(p, "");
  return out;
}

std::string report(const std::vector<std::string>& paths, const std::string& mode, const Paths& searchPath,
                   bool fullTrace, int jobs) {
  py::gil_scoped_release release;
  return parsivc::toJson(runSources(files(paths), searchPath, modeOf(mode), fullTrace, jobs)).dump();
}

}  // namespace

PYBIND11_MODULE(_parsivc, m) {
  m.doc() = "Parsimonious sequent-based VC generation";

  py::register_exception<parsivc::Error>(m, "ParsivcError", PyExc_RuntimeError);

  m.def(
      "vcs_json",
      [](const std::vector<std::string>& paths, const std::string& mode, const Paths& searchPath, int jobs) {
        return report(paths, mode, searchPath, false, jobs);
      },
      py::arg("paths"), py::arg("mode"), py::arg("search_path"), py::arg("jobs") = 1);

  m.def(
      "trace_json",
      [](const std::vector<std::string>& paths, const std::string& mode, const Paths& searchPath) {
        return report(paths, mode, searchPath, true, 1);
      },
      py::arg("paths"), py::arg("mode"), py::arg("search_path"));

  m.def(
      "source_json",
      [](const std::string& text, const std::string& file, const std::string& mode, const Paths& searchPath) {
        py::gil_scoped_release release;
        return parsivc::toJson(runSources({{file, text}}, searchPath, modeOf(mode), false, 1)).dump();
      },
      py::arg("text"), py::arg("file"), py::arg("mode"), py::arg("search_path"));

  m.def(
      "metrics_table",
      [](const std::string& parsimoniousJson, const std::string& conservativeJson) {
        const auto p = parsivc::reportFromJson(nlohmann::json::parse(parsimoniousJson));
        const auto c = parsivc::reportFromJson(nlohmann::json::parse(conservativeJson));
        return parsivc::formatMetricsTable(p.metrics, c.metrics);
      },
      py::arg("parsimonious"), py::arg("conservative"));

  m.attr("default_theory_dir") = PARSIVC_DEFAULT_THEORY_DIR;
  m.attr("report_version") = parsivc::kReportVersion;
}
