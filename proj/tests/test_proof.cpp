#include "crepe/proof.hpp"
#include "crepe/proof_gen.hpp"
#include "crepe/regex.hpp"
#include "doctest.h"

using namespace crepe;

namespace {

const Alphabet kAb{"ab"};

StepPtr eq_leaf(RuleId rule, const Term* l, const Term* r, StepPtr p0 = nullptr,
                StepPtr p1 = nullptr) {
  return make_step(rule, f_eq(l, r), std::move(p0), std::move(p1));
}

}  // namespace

TEST_CASE("rule metadata") {
  CHECK(rule_arity(RuleId::Refl) == 0);
  CHECK(rule_arity(RuleId::Symm) == 1);
  CHECK(rule_arity(RuleId::Contra) == 2);
  RuleId r;
  CHECK(rule_from_name("SyncCycle", r));
  CHECK(r == RuleId::SyncCycle);
  CHECK_FALSE(rule_from_name("NoSuchRule", r));
  for (uint32_t i = 0; i < kNumRules; ++i) {
    CHECK(rule_from_name(rule_name(static_cast<RuleId>(i)), r));
    CHECK(r == static_cast<RuleId>(i));
    CHECK(rule_arity(static_cast<RuleId>(i)) <= 2);
  }
}

TEST_CASE("equality rule schemas") {
  const Term* x = parse_regex("a*", kAb);
  const Term* y = parse_regex("b", kAb);
  const Term* z = parse_regex("ab", kAb);

  CHECK(check_step_semantic(*eq_leaf(RuleId::Refl, x, x), 2));
  CHECK_FALSE(check_step_semantic(*eq_leaf(RuleId::Refl, x, y), 2));

  StepPtr xy = eq_leaf(RuleId::Refl, x, y);  // premise shape only
  StepPtr yz = eq_leaf(RuleId::Refl, y, z);
  CHECK(check_step_semantic(*eq_leaf(RuleId::Trans, x, z, xy, yz), 2));
  CHECK_FALSE(check_step_semantic(*eq_leaf(RuleId::Trans, x, y, xy, yz), 2));
  CHECK(check_step_semantic(*eq_leaf(RuleId::Symm, y, x, xy), 2));
  CHECK_FALSE(check_step_semantic(*eq_leaf(RuleId::Symm, x, y, xy), 2));

  // Arity mismatches are rejected outright.
  CHECK_FALSE(check_step_semantic(*eq_leaf(RuleId::Trans, x, z, xy), 2));
  CHECK_FALSE(check_step_semantic(*eq_leaf(RuleId::Refl, x, x, xy), 2));
}

TEST_CASE("axiom schemas") {
  const Term* p = parse_regex("a*", kAb);
  const Term* q = parse_regex("b", kAb);
  const Term* r = parse_regex("ab", kAb);

  CHECK(check_step_semantic(
      *eq_leaf(RuleId::UnionAssoc, mk_union(p, mk_union(q, r)), mk_union(mk_union(p, q), r)),
      2));
  CHECK(check_step_semantic(*eq_leaf(RuleId::UnionComm, mk_union(p, q), mk_union(q, p)), 2));
  CHECK(check_step_semantic(*eq_leaf(RuleId::UnionEmpty, mk_union(p, mk_empty()), p), 2));
  CHECK(check_step_semantic(*eq_leaf(RuleId::UnionSelf, mk_union(p, p), p), 2));
  CHECK(check_step_semantic(
      *eq_leaf(RuleId::ConcatAssoc, mk_concat(p, mk_concat(q, r)), mk_concat(mk_concat(p, q), r)),
      2));
  CHECK(check_step_semantic(*eq_leaf(RuleId::ConcatBlankL, mk_concat(mk_blank(), p), p), 2));
  CHECK(check_step_semantic(*eq_leaf(RuleId::ConcatEmptyR, mk_concat(p, mk_empty()), mk_empty()), 2));
  CHECK_FALSE(check_step_semantic(*eq_leaf(RuleId::UnionEmpty, mk_union(mk_empty(), p), p), 2));
  CHECK_FALSE(check_step_semantic(*eq_leaf(RuleId::UnionComm, mk_union(p, q), mk_union(p, q)), 2));
}

TEST_CASE("derivative and epsilon schemas") {
  const Term* a = mk_char(0);
  const Term* b = mk_char(1);

  CHECK(check_step_semantic(*eq_leaf(RuleId::DeriveCharSame, mk_deriv(0, a), mk_blank()), 2));
  // The side condition: characters must differ.
  CHECK(check_step_semantic(*eq_leaf(RuleId::DeriveCharDifferent, mk_deriv(0, b), mk_empty()), 2));
  CHECK_FALSE(
      check_step_semantic(*eq_leaf(RuleId::DeriveCharDifferent, mk_deriv(0, a), mk_empty()), 2));

  const Term* u = mk_union(a, b);
  CHECK(check_step_semantic(
      *eq_leaf(RuleId::DeriveUnion, mk_deriv(1, u), mk_union(mk_deriv(1, a), mk_deriv(1, b))), 2));
  const Term* st = mk_star(a);
  CHECK(check_step_semantic(
      *eq_leaf(RuleId::DeriveStar, mk_deriv(0, st), mk_concat(mk_deriv(0, a), st)), 2));
  const Term* cc = mk_concat(a, b);
  CHECK(check_step_semantic(
      *eq_leaf(RuleId::DeriveConcat, mk_deriv(0, cc),
               mk_union(mk_concat(mk_deriv(0, a), b),
                        mk_concat(mk_epsilon(a), mk_deriv(0, b)))),
      2));

  CHECK(check_step_semantic(*eq_leaf(RuleId::EpsilonStar, mk_epsilon(st), mk_blank()), 2));
  CHECK(check_step_semantic(*eq_leaf(RuleId::EpsilonChar, mk_epsilon(a), mk_empty()), 2));
  StepPtr ea = eq_leaf(RuleId::EpsilonChar, mk_epsilon(a), mk_empty());
  StepPtr eb = eq_leaf(RuleId::EpsilonChar, mk_epsilon(b), mk_empty());
  CHECK(check_step_semantic(
      *eq_leaf(RuleId::EpsilonUnionNeg, mk_epsilon(u), mk_empty(), ea, eb), 2));
  CHECK_FALSE(check_step_semantic(
      *eq_leaf(RuleId::EpsilonUnionPos1, mk_epsilon(u), mk_blank(), ea), 2));
}

TEST_CASE("coinduction schemas") {
  const Term* p = parse_regex("(a*a)*", kAb);
  const Term* q = parse_regex("a*", kAb);
  Str a_str{0};

  // SyncCycle needs derivative chains rooted at the conclusion's terms.
  StepPtr cyc_p = eq_leaf(RuleId::Refl, chain_term(a_str, p), p);
  StepPtr cyc_q = eq_leaf(RuleId::Refl, chain_term(a_str, q), q);
  StepPtr cyc = make_step(RuleId::SyncCycle, f_sync(a_str, p, q), cyc_p, cyc_q);
  CHECK(check_step_semantic(*cyc, 2));

  // The empty-string instance must be rejected.
  StepPtr bad = make_step(RuleId::SyncCycle, f_sync({}, p, q), eq_leaf(RuleId::Refl, p, p),
                          eq_leaf(RuleId::Refl, q, q));
  CHECK_FALSE(check_step_semantic(*bad, 2));

  StepPtr sync_eps =
      make_step(RuleId::EqualSync, f_sync({}, p, q), eq_leaf(RuleId::Refl, p, q));
  CHECK(check_step_semantic(*sync_eps, 2));
  CHECK(check_step_semantic(*make_step(RuleId::SyncEmpty, f_eq(p, q), sync_eps), 2));
  CHECK_FALSE(check_step_semantic(*make_step(RuleId::SyncEmpty, f_eq(p, q), cyc), 2));

  // SyncFold peels one derivative.
  StepPtr folded = make_step(
      RuleId::SyncFold, f_sync({1, 0}, p, q),
      make_step(RuleId::EqualSync, f_sync(a_str, mk_deriv(1, p), mk_deriv(1, q)),
                eq_leaf(RuleId::Refl, chain_term(a_str, mk_deriv(1, p)),
                        chain_term(a_str, mk_deriv(1, q)))));
  CHECK(check_step_semantic(*folded, 2));

  // Binarized chains: counters must track the alphabet.
  StepPtr einit = eq_leaf(RuleId::Refl, mk_epsilon(p), mk_epsilon(q));
  StepPtr init = make_step(RuleId::SyncInit, f_sync_up_to(0, {}, p, q), einit);
  CHECK(check_step_semantic(*init, 2));
  StepPtr s0 = make_step(RuleId::SyncStep, f_sync_up_to(1, {}, p, q), init,
                         make_step(RuleId::EqualSync, f_sync({0}, p, q),
                                   eq_leaf(RuleId::Refl, chain_term({0}, p), chain_term({0}, q))));
  CHECK(check_step_semantic(*s0, 2));
  StepPtr s1 = make_step(RuleId::SyncStep, f_sync_up_to(2, {}, p, q), s0,
                         make_step(RuleId::EqualSync, f_sync({1}, p, q),
                                   eq_leaf(RuleId::Refl, chain_term({1}, p), chain_term({1}, q))));
  CHECK(check_step_semantic(*s1, 2));
  StepPtr fin = make_step(RuleId::CoinductFinish, f_sync({}, p, q), s1);
  CHECK(check_step_semantic(*fin, 2));
  // Closing early (counter != n) is rejected.
  CHECK_FALSE(check_step_semantic(*make_step(RuleId::CoinductFinish, f_sync({}, p, q), s0), 2));
}

TEST_CASE("whole-proof checks") {
  const Term* p = parse_regex("ab|b", kAb);

  StepPtr refl = eq_leaf(RuleId::Refl, p, p);
  StepPtr root = bookend(refl);
  auto rep = check_proof_tree(root, 2);
  CHECK(rep.ok);
  CHECK(rep.steps == 3);

  // Root must conclude Bottom via Contra.
  CHECK_FALSE(check_proof(refl, 2));

  // Assume may only introduce inequalities.
  StepPtr bad_assume = make_step(RuleId::Assume, f_eq(p, p));
  StepPtr bad_root = make_step(RuleId::Contra, f_bottom(), bad_assume, refl);
  CHECK_FALSE(check_proof(bad_root, 2));

  // Two Assume steps are rejected.
  StepPtr assume2 = make_step(RuleId::Assume, f_neq(p, mk_char(0)));
  StepPtr root2 = make_step(RuleId::Contra, f_bottom(),
                            make_step(RuleId::Assume, f_neq(p, p)), refl);
  root2->prem1 = make_step(RuleId::PredCongL, f_eq(p, p), refl,
                           eq_leaf(RuleId::Refl, p, p));
  CHECK(check_proof(root2, 2));
  root2->prem1->prem1 = nullptr;
  CHECK_FALSE(check_proof(root2, 2));
  (void)assume2;

  // A premise cycle is detected rather than looping.
  StepPtr a = eq_leaf(RuleId::Symm, p, p, refl);
  StepPtr b = eq_leaf(RuleId::Symm, p, p, a);
  a->prem0 = b;
  StepPtr cyc_root = make_step(RuleId::Contra, f_bottom(),
                               make_step(RuleId::Assume, f_neq(p, p)), a);
  CHECK_FALSE(check_proof(cyc_root, 2));
}
