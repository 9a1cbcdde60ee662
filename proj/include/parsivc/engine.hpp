#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parsivc/assertive.hpp"
#include "parsivc/context.hpp"

namespace parsivc {

enum class Mode { Parsimonious, Conservative };

std::string_view toString(Mode mode);
std::optional<Mode> parseMode(std::string_view text);

struct EngineConfig {
  Mode mode = Mode::Parsimonious;
  /// Upper bound on ApplyEqLeft folds per sequent.
  int maxEqFoldPasses = 100;
};

enum class Side { Antecedent, Succedent };

/// Names one rule application on a block. Statement rules always target the
/// last statement; sequent rules name a member by sequent id, side and index.
struct RuleTarget {
  enum class Kind { Statement, Reduction, EqFold };

  Kind kind = Kind::Statement;
  std::string rule;
  int sequentId = 0;
  Side side = Side::Antecedent;
  int index = 0;

  bool operator==(const RuleTarget&) const = default;
  std::string describe() const;
};

std::string_view toString(RuleTarget::Kind kind);

struct TraceStep {
  RuleTarget target;
  /// The formula or statement the rule consumed, as source text.
  std::string subject;
  AssertiveBlock before;
  AssertiveBlock after;
};

struct DerivationTrace {
  std::vector<TraceStep> steps;

  std::vector<std::string> ruleNames() const;
};

/// Reduction rule that applies to a member, or "" when it is atomic.
std::string reductionRule(const Expr& member, Side side);

/// Applies reductions to one sequent until only atoms remain; branching
/// rules keep the original first and insert the second right after it.
/// `nextId` supplies ids for new branches.
std::vector<Sequent> reduceSequent(const Sequent& s, int& nextId, std::vector<std::string>* rules = nullptr);
std::vector<Sequent> reduceSequents(const std::vector<Sequent>& psi, int& nextId);

/// Antecedent indexes of `s` holding an equality ApplyEqLeft may fold now.
std::vector<int> eqFoldCandidates(const Sequent& s, const Context& ctx, const EngineConfig& cfg);
/// Folds the equality at antecedent `index`.
Sequent foldEquality(const Sequent& s, int index);
/// Folds candidates in antecedent order, rescanning after each fold.
Sequent applyEqLeft(const Sequent& s, const Context& ctx, const EngineConfig& cfg);

/// For each sequent, the conjuncts of `phi` whose free-variable closure meets
/// the variables of that sequent are added to its antecedent.
std::vector<Sequent> sigmaSelect(const std::vector<Sequent>& psi, const Expr& phi, const Context& ctx);

/// Everything that may be applied now, in canonical order: pending sequent
/// reductions, else the rule for the last statement, else equality folds.
std::vector<RuleTarget> applicableRules(const AssertiveBlock& b, const EngineConfig& cfg);

/// Applies `t` to `b` and returns the recorded step. Throws an Engine error
/// when `t` is not currently applicable.
TraceStep applyRule(AssertiveBlock& b, const RuleTarget& t, const EngineConfig& cfg);

/// Consumes the last statement by its rule, then reduces to atoms.
void eliminateNext(AssertiveBlock& b, const EngineConfig& cfg, DerivationTrace& trace);

struct Vc {
  std::string id;
  std::string block;
  Sequent sequent;
};

struct Derivation {
  AssertiveBlock initial;
  AssertiveBlock final;
  DerivationTrace trace;
  std::vector<Vc> vcs;
};

/// Applies canonical rules until none remain and splits the final Confirm
/// into VCs `label#k`.
Derivation runDerivation(const AssertiveBlock& b, const EngineConfig& cfg);

/// Re-applies the recorded targets to `initial`; throws when a step's result
/// differs from the recorded one.
AssertiveBlock replay(const AssertiveBlock& initial, const DerivationTrace& trace, const EngineConfig& cfg);

std::vector<Vc> extractVcs(const AssertiveBlock& b);

}  // namespace parsivc
