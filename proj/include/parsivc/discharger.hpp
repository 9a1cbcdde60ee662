#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "parsivc/assertive.hpp"
#include "parsivc/context.hpp"
#include "parsivc/frontend.hpp"

namespace parsivc {

enum class VcStatus { Proved, Vacuous, Unknown };

std::string_view toString(VcStatus status);

struct RewriteStep {
  std::string rule;
  std::string before;
  std::string after;
};

/// Rewrites innermost first with the corollaries (left to right, in order)
/// and ground arithmetic on integer literals. Subtraction folds only when the
/// result is a natural number. Each rewrite costs one unit of `budget`; once
/// it runs out the term is returned as it stands, and `log` gets one
/// "budget exhausted" entry naming the first term left unrewritten.
Expr normalize(const Expr& e, const std::vector<RewriteCorollary>& rules, const Context& ctx,
               std::vector<RewriteStep>* log = nullptr, int budget = 10000);

struct DischargeResult {
  VcStatus status = VcStatus::Unknown;
  std::string reason;
  Sequent normalized;
  std::vector<RewriteStep> log;
};

/// A deliberately small decision procedure: normalization, then congruence
/// closure over the antecedent equalities with variables read as constants.
/// Vacuity is tested before provability.
DischargeResult discharge(const Sequent& s, const std::vector<RewriteCorollary>& rules, const Context& ctx);

}  // namespace parsivc
