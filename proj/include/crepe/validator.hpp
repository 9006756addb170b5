#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crepe/tables.hpp"
#include "crepe/zk_sim.hpp"

namespace crepe {

struct ValidationReport {
  bool ok = false;
  std::string first_failure;  // empty when ok
  SizeParams params;
  std::vector<uint64_t> category_counts;  // steps per multiplexing category
  double rule_ms = 0;
  double permutation_ms = 0;
  double consistency_ms = 0;

  // The information a run discloses: size parameters and category counts.
  std::string leakage_text() const;
};

// Executes the step-table program: per-step multiplexed rule checking, cycle
// checking, the permutation check over step ids, and the table consistency
// checks. Steps are dispatched by their (public) category column; use
// ProofTables::with_mux to revalidate one proof under another configuration.
ValidationReport validate(const ProofTables& t, const MuxConfig& mux, Backend& backend);

// One rule's checking instruction over already-fetched formula rows. Performs
// a fixed sequence of backend operations regardless of the data.
bool checking_instr(RuleId rule, Backend& be, const SizeParams& params,
                    const CommittedRow& f0, const CommittedRow& f1, const CommittedRow& f2);

// True iff the Deriv chain at `chain` spells the reversal of the string at
// `str` (exactly nu padded iterations). When `expected_root` is set, the term
// under the chain must be that row; otherwise the chain must end at a
// non-Deriv row.
bool check_reverse(Backend& be, const SizeParams& params, const CommittedWord& chain,
                   const CommittedWord& str,
                   const std::optional<CommittedWord>& expected_root = std::nullopt);

// True iff string(sc) = string(s) plus the single character c at the end;
// exactly nu padded iterations.
bool sync_extend_scan(Backend& be, const SizeParams& params, const CommittedWord& sc,
                      const CommittedWord& s, const CommittedWord& c);

// True iff d is a permutation of 0..pi-1 (backend multiset check).
bool permute_check(Backend& be, const std::vector<CommittedWord>& d, uint64_t pi);

// Character codes below n, child indexes strictly increasing, string heights
// satisfying the +1 law and bounded by nu, exactly one terminator.
bool consistency_check(Backend& be, const ProofTables& t);

// Mirror of what multiplexed validation guarantees, at the formula level:
// every step's conclusion follows from its premises' conclusions by some rule
// in the step's category, premise ids descend, and the tables lift. Used to
// confirm that mutants the VM accepts are semantically sound.
bool semantic_recheck(const ProofTables& t);

}  // namespace crepe
