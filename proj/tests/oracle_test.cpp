#include "doctest.h"
#include "oracle.hpp"

using namespace parsivc;

TEST_CASE("the oracle itself: known valid and invalid sequents") {
  testing::Loaded l = testing::loadText(oracle::kVocabulary);
  const Context& ctx = *l.module->assertiveCode.front().context;
  CHECK(oracle::valid(parseSequent("{a} |- {a}", ctx)));
  CHECK(oracle::valid(parseSequent("{x = y, p(x)} |- {p(y)}", ctx)));
  CHECK(oracle::valid(parseSequent("{} |- {a or not a}", ctx)));
  CHECK_FALSE(oracle::valid(parseSequent("{p(x)} |- {p(y)}", ctx)));
  CHECK_FALSE(oracle::valid(parseSequent("{x /= 1} |- {y = 1, x = y}", ctx)));
  CHECK_FALSE(oracle::satisfiable({parseExpression("x = 1", ctx), parseExpression("x /= 1", ctx)}));
}

TEST_CASE("reductions, folding and verdicts agree with brute force") {
  const oracle::Tally t = oracle::check(300, 7);
  CHECK(t.reductionMismatches == 0);
  CHECK(t.foldMismatches == 0);
  CHECK(t.unsoundProofs == 0);
  CHECK(t.unsoundVacuity == 0);
  // Make sure the sample exercised each path.
  CHECK(t.folds > 0);
  CHECK(t.proved > 0);
  CHECK(t.vacuous > 0);
}
