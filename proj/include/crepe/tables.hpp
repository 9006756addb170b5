#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crepe/proof.hpp"
#include "crepe/regex.hpp"

namespace crepe {

struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat table rows. Every row of a table has the same width; unused cells
// hold 0.
struct TermRow {
  uint64_t kind = 0, imm = 0, child0 = 0, child1 = 0;
  bool operator==(const TermRow&) const = default;
};
struct StringRow {
  uint64_t imm = 0, tail = 0, height = 0;
  bool operator==(const StringRow&) const = default;
};
struct FormulaRow {
  uint64_t kind = 0, imm = 0, str = 0, arg0 = 0, arg1 = 0;
  bool operator==(const FormulaRow&) const = default;
};
struct StepRow {
  uint64_t step_id = 0, rule = 0, cat = 0, res = 0, prem0 = 0, prem1 = 0;
  bool operator==(const StepRow&) const = default;
};

// Rule -> multiplexing category. Default groups the heaviest constant-time
// rules (Symm, Trans, FunCong2) apart from the other constant-time rules and
// keeps the linear-time scans in their own category; Assume and Contra always
// have singleton categories.
struct MuxConfig {
  std::string name;
  std::array<uint32_t, kNumRules> cat{};
  uint32_t num_categories = 0;

  uint32_t category_of(RuleId r) const { return cat[static_cast<size_t>(r)]; }
  std::vector<std::vector<RuleId>> members() const;
  uint32_t assume_category() const { return category_of(RuleId::Assume); }
  uint32_t contra_category() const { return category_of(RuleId::Contra); }

  static MuxConfig default_config();
  static MuxConfig none();
  static MuxConfig full();
  static std::optional<MuxConfig> by_name(std::string_view name);
};

// Public footprint of a proof.
struct SizeParams {
  uint64_t n = 0;    // alphabet size
  uint64_t chi = 0;  // |M_t|
  uint64_t xi = 0;   // |M_s|
  uint64_t pi = 0;   // |M_f| = |M_p|
  uint64_t nu = 0;   // maximum string height
  bool operator==(const SizeParams&) const = default;
};

struct ProofTables {
  SizeParams params;
  std::string alphabet;  // symbols; character codes are positions
  MuxConfig mux;         // category map the step rows were annotated with
  std::vector<TermRow> terms;      // M_t
  std::vector<StringRow> strings;  // M_s
  std::vector<FormulaRow> formulas;  // M_f
  std::vector<StepRow> steps;        // M_p

  // Same tables with the category column rewritten for another config.
  ProofTables with_mux(const MuxConfig& m) const;
};

struct LowerOptions {
  uint64_t seed = 0;  // drives the physical permutation of steps/formulas
  MuxConfig mux = MuxConfig::default_config();
  // Requested minimum sizes; the gap is filled with well-formed dummy rows.
  uint64_t min_chi = 0, min_xi = 0, min_pi = 0, min_nu = 0;
};

// Flattens a checked proof tree: terms and strings hash-consed, formulas one
// per step, step ids in topological order (Assume first, root last) and then
// physically shuffled.
ProofTables lower_proof(const StepPtr& root, const Alphabet& alphabet,
                        const LowerOptions& opts = {});

// Canonical text format; serialize is deterministic and round-trips.
std::string serialize_proof(const ProofTables& t);
ProofTables deserialize_proof(std::string_view text);

// Rebuilds the step tree (inverse of lower_proof up to sharing). Throws
// LoadError when the reachable rows cannot be interpreted.
struct LiftResult {
  StepPtr root;
  Alphabet alphabet;
};
LiftResult lift_proof(const ProofTables& t);

}  // namespace crepe
