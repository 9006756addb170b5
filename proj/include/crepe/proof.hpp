#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "crepe/formula.hpp"

namespace crepe {

class Alphabet;

enum class RuleId : uint8_t {
  // Coinduction core (the n+1-premise rules are split; see Agree*/Sync*).
  MatchFinish = 0,
  CoinductFinish,
  SyncCycle,
  SyncFold,
  EqualSync,
  SyncEmpty,
  // Binarization auxiliaries.
  AgreeInit,
  AgreeStep,
  SyncInit,
  SyncStep,
  // Normalization axioms.
  UnionAssoc,
  UnionComm,
  UnionEmpty,
  UnionSelf,
  ConcatAssoc,
  ConcatBlankL,
  ConcatBlankR,
  ConcatEmptyL,
  ConcatEmptyR,
  // Equality rules.
  Refl,
  Symm,
  Trans,
  PredCongL,
  PredCongR,
  FunCong1,
  FunCong2,
  // Epsilon rules.
  EpsilonEmpty,
  EpsilonBlank,
  EpsilonChar,
  EpsilonUnionPos1,
  EpsilonUnionPos2,
  EpsilonUnionNeg,
  EpsilonConcatPos,
  EpsilonConcatNeg1,
  EpsilonConcatNeg2,
  EpsilonStar,
  // Derivative rules.
  DeriveEmpty,
  DeriveBlank,
  DeriveCharSame,
  DeriveCharDifferent,
  DeriveUnion,
  DeriveConcat,
  DeriveStar,
  // Proof completion.
  Assume,
  Contra,
};

inline constexpr uint32_t kNumRules = 45;

const char* rule_name(RuleId r);
bool rule_from_name(std::string_view name, RuleId& out);
uint32_t rule_arity(RuleId r);

struct ProofStep;
using StepPtr = std::shared_ptr<ProofStep>;

// One derivation step. Premises form a DAG; sharing is introduced by
// deduplication and is legal anywhere.
struct ProofStep {
  RuleId rule;
  const Formula* conclusion;
  StepPtr prem0;
  StepPtr prem1;
};

StepPtr make_step(RuleId rule, const Formula* conclusion, StepPtr prem0 = nullptr,
                  StepPtr prem1 = nullptr);

// True iff the step instantiates its rule's schema, assuming the premises
// were already validated. `n` is the alphabet size (the split Match and
// Coinduction chains close at counter n).
bool check_step_semantic(const ProofStep& step, uint32_t n);

// Formula-level schema check; a and b are premise conclusions and are
// ignored beyond the rule's arity.
bool check_schema(RuleId rule, const Formula* c, const Formula* a, const Formula* b,
                  uint32_t n);

struct ProofCheckReport {
  bool ok = true;
  std::string failure;  // description of the first failing step, if any
  size_t steps = 0;     // distinct steps reachable from the root
};

// Whole-proof check: every reachable step is schema-valid, the premise
// graph is acyclic, exactly one Assume occurs, and the root derives Bottom
// via Contra from that Assume's conclusion.
ProofCheckReport check_proof_tree(const StepPtr& root, uint32_t n);
inline bool check_proof(const StepPtr& root, uint32_t n) {
  return check_proof_tree(root, n).ok;
}

// All distinct steps reachable from root, premises before dependents.
std::vector<ProofStep*> topo_steps(const StepPtr& root);

// Nested derivative chain d_s(p): the first character of s innermost.
const Term* chain_term(const Str& s, const Term* p);

}  // namespace crepe
