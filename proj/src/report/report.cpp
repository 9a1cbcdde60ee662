#include "parsivc/report.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "parsivc/builder.hpp"
#include "parsivc/printer.hpp"

namespace parsivc {

namespace {

BlockResult deriveOne(const AssertiveBlock& b, const std::vector<RewriteCorollary>& rules, const RunOptions& opts) {
  BlockResult r;
  r.derivation = runDerivation(b, opts.engine);
  if (opts.discharge) {
    for (const auto& vc : r.derivation.vcs) r.results.push_back(discharge(vc.sequent, rules, *r.derivation.final.context));
  }
  return r;
}

std::string sideName(Side s) { return s == Side::Antecedent ? "antecedent" : "succedent"; }

}  // namespace

std::vector<BlockResult> runBlocks(const std::vector<AssertiveBlock>& blocks, const std::vector<RewriteCorollary>& rules,
                                   const RunOptions& opts) {
  std::vector<BlockResult> out(blocks.size());
  const int workers = std::clamp(opts.jobs, 1, static_cast<int>(std::max<std::size_t>(blocks.size(), 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < blocks.size(); ++i) out[i] = deriveOne(blocks[i], rules, opts);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(blocks.size());
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < blocks.size(); i = next++) {
        try {
          out[i] = deriveOne(blocks[i], rules, opts);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<BlockResult> runModule(const SourceModule& m, const ModuleLoader& loader, const RunOptions& opts) {
  return runBlocks(buildModule(m, loader), loader.rewriteRules(m), opts);
}

std::string componentOf(const std::string& label) {
  const std::size_t cut = std::min(label.find(" / "), label.find('#'));
  return label.substr(0, cut);
}

VcRecord makeVcRecord(const Vc& vc, const DischargeResult* result) {
  VcRecord r;
  r.id = vc.id;
  r.file = vc.sequent.provenance.file;
  r.line = vc.sequent.provenance.line;
  r.reason = vc.sequent.provenance.reason;
  for (const auto& a : vc.sequent.antecedents) r.antecedents.push_back(print(a));
  for (const auto& d : vc.sequent.succedents) r.succedents.push_back(print(d));
  r.status = result ? std::string(toString(result->status)) : "unknown";
  r.closingReason = result ? result->reason : "";
  if (result) {
    for (const auto& a : result->normalized.antecedents) r.normalizedAntecedents.push_back(print(a));
    for (const auto& d : result->normalized.succedents) r.normalizedSuccedents.push_back(print(d));
  }
  return r;
}

Report makeReport(const std::vector<BlockResult>& blocks, Mode mode, bool fullTrace) {
  Report r;
  r.mode = std::string(toString(mode));
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.derivation.vcs.size(); ++i) {
      r.vcs.push_back(makeVcRecord(b.derivation.vcs[i], i < b.results.size() ? &b.results[i] : nullptr));
    }
    int step = 0;
    for (const auto& s : b.derivation.trace.steps) {
      TraceRecord t;
      t.block = b.derivation.initial.label;
      t.step = ++step;
      t.rule = s.target.rule;
      t.kind = std::string(toString(s.target.kind));
      t.sequent = s.target.sequentId;
      t.side = s.target.kind == RuleTarget::Kind::Statement ? "" : sideName(s.target.side);
      t.index = s.target.index;
      t.subject = s.subject;
      if (fullTrace) {
        t.before = print(s.before);
        t.after = print(s.after);
      }
      r.trace.push_back(std::move(t));
    }
  }
  r.metrics = computeMetrics(r.vcs);
  return r;
}

std::vector<Metrics> computeMetrics(const std::vector<VcRecord>& vcs) {
  std::vector<Metrics> rows;
  Metrics total;
  total.component = "total";
  auto count = [](Metrics& m, const VcRecord& v) {
    ++m.vcs;
    const std::size_t n = v.antecedents.size();
    if (n >= 5) ++m.atLeast5;
    if (n >= 10) ++m.atLeast10;
    if (v.status == "proved") ++m.proved;
    if (v.status == "vacuous") ++m.vacuous;
    if (v.status == "unknown") ++m.unknown;
  };
  for (const auto& v : vcs) {
    const std::string c = componentOf(v.id);
    auto it = std::find_if(rows.begin(), rows.end(), [&](const Metrics& m) { return m.component == c; });
    if (it == rows.end()) {
      rows.push_back({});
      rows.back().component = c;
      it = rows.end() - 1;
    }
    count(*it, v);
    count(total, v);
  }
  rows.push_back(total);
  return rows;
}

int exitStatus(const Report& r) {
  bool vacuous = false;
  for (const auto& v : r.vcs) {
    if (v.status == "unknown") return 2;
    vacuous = vacuous || v.status == "vacuous";
  }
  return vacuous ? 3 : 0;
}

nlohmann::json toJson(const VcRecord& v) {
  return {{"id", v.id},
          {"file", v.file},
          {"line", v.line},
          {"reason", v.reason},
          {"antecedents", v.antecedents},
          {"succedents", v.succedents},
          {"status", v.status},
          {"closingReason", v.closingReason},
          {"normalized", {{"antecedents", v.normalizedAntecedents}, {"succedents", v.normalizedSuccedents}}}};
}

nlohmann::json toJson(const TraceRecord& t) {
  nlohmann::json j = {{"block", t.block}, {"step", t.step},       {"rule", t.rule},
                      {"kind", t.kind},   {"sequent", t.sequent}, {"side", t.side},
                      {"index", t.index}, {"subject", t.subject}};
  if (!t.before.empty() || !t.after.empty()) {
    j["before"] = t.before;
    j["after"] = t.after;
  }
  return j;
}

nlohmann::json toJson(const Metrics& m) {
  return {{"component", m.component}, {"vcs", m.vcs},         {"atLeast5", m.atLeast5}, {"atLeast10", m.atLeast10},
          {"proved", m.proved},       {"vacuous", m.vacuous}, {"unknown", m.unknown}};
}

nlohmann::json toJson(const Report& r) {
  nlohmann::json vcs = nlohmann::json::array();
  for (const auto& v : r.vcs) vcs.push_back(toJson(v));
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : r.trace) trace.push_back(toJson(t));
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& m : r.metrics) metrics.push_back(toJson(m));
  return {{"version", r.version}, {"mode", r.mode}, {"vcs", vcs}, {"trace", trace}, {"metrics", metrics}};
}

VcRecord vcFromJson(const nlohmann::json& j) {
  VcRecord v;
  v.id = j.at("id").get<std::string>();
  v.file = j.at("file").get<std::string>();
  v.line = j.at("line").get<int>();
  v.reason = j.at("reason").get<std::string>();
  v.antecedents = j.at("antecedents").get<std::vector<std::string>>();
  v.succedents = j.at("succedents").get<std::vector<std::string>>();
  v.status = j.at("status").get<std::string>();
  v.closingReason = j.value("closingReason", "");
  if (j.contains("normalized")) {
    v.normalizedAntecedents = j["normalized"].at("antecedents").get<std::vector<std::string>>();
    v.normalizedSuccedents = j["normalized"].at("succedents").get<std::vector<std::string>>();
  }
  return v;
}

TraceRecord traceFromJson(const nlohmann::json& j) {
  TraceRecord t;
  t.block = j.at("block").get<std::string>();
  t.step = j.at("step").get<int>();
  t.rule = j.at("rule").get<std::string>();
  t.kind = j.at("kind").get<std::string>();
  t.sequent = j.at("sequent").get<int>();
  t.side = j.at("side").get<std::string>();
  t.index = j.at("index").get<int>();
  t.subject = j.at("subject").get<std::string>();
  t.before = j.value("before", "");
  t.after = j.value("after", "");
  return t;
}

Report reportFromJson(const nlohmann::json& j) {
  Report r;
  r.version = j.at("version").get<int>();
  r.mode = j.at("mode").get<std::string>();
  for (const auto& v : j.at("vcs")) r.vcs.push_back(vcFromJson(v));
  for (const auto& t : j.at("trace")) r.trace.push_back(traceFromJson(t));
  for (const auto& m : j.at("metrics")) {
    Metrics row;
    row.component = m.at("component").get<std::string>();
    row.vcs = m.at("vcs").get<int>();
    row.atLeast5 = m.at("atLeast5").get<int>();
    row.atLeast10 = m.at("atLeast10").get<int>();
    row.proved = m.at("proved").get<int>();
    row.vacuous = m.at("vacuous").get<int>();
    row.unknown = m.at("unknown").get<int>();
    r.metrics.push_back(row);
  }
  return r;
}

std::string formatVc(const VcRecord& v) {
  auto side = [](const std::vector<std::string>& xs) {
    std::string s = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
    return s + "}";
  };
  std::ostringstream os;
  os << v.id << " | " << v.file << ':' << v.line << " | " << v.reason << " | " << side(v.antecedents) << " |- "
     << side(v.succedents) << " | " << v.status;
  return os.str();
}

std::string formatMetricsTable(const std::vector<Metrics>& parsimonious, const std::vector<Metrics>& conservative) {
  std::size_t width = 9;
  for (const auto& m : parsimonious) width = std::max(width, m.component.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "component" << std::right;
  for (const char* h : {"vcs(C)", "A>=5(C)", "A>=10(C)", "vcs(P)", "A>=5(P)", "A>=10(P)"}) os << std::setw(10) << h;
  os << '\n';
  for (std::size_t i = 0; i < parsimonious.size(); ++i) {
    const Metrics& p = parsimonious[i];
    auto it = std::find_if(conservative.begin(), conservative.end(),
                           [&](const Metrics& c) { return c.component == p.component; });
    const Metrics c = it == conservative.end() ? Metrics{} : *it;
    os << std::left << std::setw(static_cast<int>(width)) << p.component << std::right << std::setw(10) << c.vcs
       << std::setw(10) << c.atLeast5 << std::setw(10) << c.atLeast10 << std::setw(10) << p.vcs << std::setw(10)
       << p.atLeast5 << std::setw(10) << p.atLeast10 << '\n';
  }
  return os.str();
}

}  // namespace parsivc
