#pragma once

#include <stdexcept>
#include <utility>

#include "crepe/equivalence.hpp"
#include "crepe/proof.hpp"

namespace crepe {

struct NotEquivalent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  uint64_t max_calls = 1'000'000;
};

// Generates a proof concluding p = q. The caller normally establishes
// equivalence first via equiv(); on inequivalent inputs this throws
// NotEquivalent at the first nullability disagreement it reaches.
StepPtr proof_gen(const Term* p, const Term* q, const Alphabet& alphabet,
                  GenOptions opts = {});

// Rewrites both argument slots of core's conclusion P(x, y) into P(x', y')
// using the equalities proved by lhs_eq (x = x' or x' = x) and rhs_eq.
// Sides whose equality is reflexive are left untouched. Throws
// std::invalid_argument when an equality does not mention the matching slot.
StepPtr subst(StepPtr core, StepPtr lhs_eq, StepPtr rhs_eq);

// Redirects every premise to the smallest-tree step sharing its conclusion
// (ties: first in a deterministic traversal), repeats to fixpoint, and drops
// steps that end up unreachable from the root.
StepPtr dedup_and_prune(StepPtr root);

// Wraps a proof of p = q into Assume(p != q) plus Contra, concluding Bottom.
StepPtr bookend(StepPtr eq_proof);

// Proof-carrying counterparts of reduce/normalize/epsilon_of. Each returns
// the rewritten term together with a step concluding Eq(input, output).
std::pair<const Term*, StepPtr> reduce_with_proof(const Term* t);
std::pair<const Term*, StepPtr> normalize_with_proof(const Term* p);
StepPtr epsilon_with_proof(const Term* p);  // concludes E(p) = eps or E(p) = empty

}  // namespace crepe
