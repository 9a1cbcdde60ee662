#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "parsivc/builder.hpp"
#include "parsivc/engine.hpp"
#include "parsivc/frontend.hpp"
#include "parsivc/ops.hpp"
#include "parsivc/printer.hpp"
#include "parsivc/report.hpp"

namespace doctest {
template <>
struct StringMaker<std::vector<std::string>> {
  static String convert(const std::vector<std::string>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", \"" : "\"") + xs[i] + "\"";
    return (out + "]").c_str();
  }
};
}  // namespace doctest

namespace parsivc::testing {

inline std::filesystem::path corpusFile(const std::string& name) {
  return std::filesystem::path(PARSIVC_CORPUS_DIR) / name;
}

inline std::vector<std::filesystem::path> searchPath() { return {PARSIVC_CORPUS_DIR, PARSIVC_THEORY_DIR}; }

/// A loader plus one module loaded through it.
struct Loaded {
  std::unique_ptr<ModuleLoader> loader;
  const SourceModule* module = nullptr;

  std::vector<AssertiveBlock> blocks() const { return buildModule(*module, *loader); }
  std::vector<RewriteCorollary> rules() const { return loader->rewriteRules(*module); }
};

inline Loaded loadCorpus(const std::string& name) {
  Loaded l;
  l.loader = std::make_unique<ModuleLoader>(searchPath());
  l.module = &l.loader->loadFile(corpusFile(name));
  return l;
}

inline Loaded loadText(const std::string& text, const std::string& file = "<test>") {
  Loaded l;
  l.loader = std::make_unique<ModuleLoader>(searchPath());
  l.module = &l.loader->loadSource(text, file);
  return l;
}

inline Report runCorpus(const std::string& name, Mode mode, bool fullTrace = false) {
  Loaded l = loadCorpus(name);
  RunOptions opts;
  opts.engine.mode = mode;
  return makeReport(runModule(*l.module, *l.loader, opts), mode, fullTrace);
}

inline std::vector<std::string> printed(const std::vector<Expr>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(print(x));
  return out;
}

inline std::vector<std::string> keys(const VarSet& s) {
  std::vector<std::string> out;
  for (const auto& k : s) out.push_back(k.str());
  return out;
}

/// Every program file whose procedures feed the metrics comparison.
inline const std::vector<std::string>& tableCorpus() {
  static const std::vector<std::string> files = {
      "Search_Capability.mrsl", "Selection_Sort_Capability.mrsl", "Copy_Capability.mrsl",
      "Append_Capability.mrsl", "Flip_Capability.mrsl",           "Do_Nothing_Capability.mrsl",
  };
  return files;
}

inline const std::vector<std::string>& allCorpus() {
  static const std::vector<std::string> files = [] {
    std::vector<std::string> f = tableCorpus();
    for (const char* extra : {"Contradiction.mrsl", "Running_Example.mthy", "Closure_Example.mthy"}) f.push_back(extra);
    return f;
  }();
  return files;
}

}  // namespace parsivc::testing
