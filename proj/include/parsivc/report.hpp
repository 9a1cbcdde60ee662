#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "parsivc/discharger.hpp"
#include "parsivc/engine.hpp"
#include "parsivc/frontend.hpp"

namespace parsivc {

inline constexpr int kReportVersion = 1;

struct VcRecord {
  std::string id;
  std::string file;
  int line = 0;
  std::string reason;
  std::vector<std::string> antecedents;
  std::vector<std::string> succedents;
  std::string status;
  std::string closingReason;
  // Γ and Δ after rewriting, as the discharger saw them.
  std::vector<std::string> normalizedAntecedents;
  std::vector<std::string> normalizedSuccedents;

  bool operator==(const VcRecord&) const = default;
};

struct TraceRecord {
  std::string block;
  int step = 0;
  std::string rule;
  std::string kind;
  int sequent = 0;
  std::string side;
  int index = 0;
  std::string subject;
  std::string before;  // pretty-printed block, `trace` output only
  std::string after;

  bool operator==(const TraceRecord&) const = default;
};

struct Metrics {
  std::string component;
  int vcs = 0;
  int atLeast5 = 0;
  int atLeast10 = 0;
  int proved = 0;
  int vacuous = 0;
  int unknown = 0;

  bool operator==(const Metrics&) const = default;
};

struct Report {
  int version = kReportVersion;
  std::string mode;
  std::vector<VcRecord> vcs;
  std::vector<TraceRecord> trace;
  /// One row per component (procedure or assertive code) plus a "total" row.
  std::vector<Metrics> metrics;

  bool operator==(const Report&) const = default;
};

/// One derived and discharged assertive block.
struct BlockResult {
  Derivation derivation;
  std::vector<DischargeResult> results;
};

struct RunOptions {
  EngineConfig engine;
  int jobs = 1;
  bool discharge = true;
};

/// Builds, derives and discharges every block of `m`. With `jobs > 1` the
/// derivations run concurrently; results keep source order.
std::vector<BlockResult> runModule(const SourceModule& m, const ModuleLoader& loader, const RunOptions& opts);

/// Derives and discharges prepared blocks, for callers that build their own.
std::vector<BlockResult> runBlocks(const std::vector<AssertiveBlock>& blocks, const std::vector<RewriteCorollary>& rules,
                                   const RunOptions& opts);

/// Component name of a block label or VC id: the text before " / " or "#".
std::string componentOf(const std::string& label);

VcRecord makeVcRecord(const Vc& vc, const DischargeResult* result);

Report makeReport(const std::vector<BlockResult>& blocks, Mode mode, bool fullTrace);

/// Per-component rows followed by the total, all derived from `vcs` alone.
std::vector<Metrics> computeMetrics(const std::vector<VcRecord>& vcs);

/// 0 all proved, 2 any unknown, 3 vacuous but no unknown.
int exitStatus(const Report& r);

nlohmann::json toJson(const Report& r);
nlohmann::json toJson(const VcRecord& v);
nlohmann::json toJson(const TraceRecord& t);
nlohmann::json toJson(const Metrics& m);
Report reportFromJson(const nlohmann::json& j);
VcRecord vcFromJson(const nlohmann::json& j);
TraceRecord traceFromJson(const nlohmann::json& j);

/// `id | file:line | reason | Γ ⊢ Δ` with the status appended.
std::string formatVc(const VcRecord& v);
std::string formatMetricsTable(const std::vector<Metrics>& parsimonious, const std::vector<Metrics>& conservative);

}  // namespace parsivc
