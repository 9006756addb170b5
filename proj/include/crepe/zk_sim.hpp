#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "crepe/tables.hpp"

namespace crepe {

// Prime field used for multiset/permutation checks.
inline constexpr uint64_t kFieldModulus = (uint64_t{1} << 61) - 1;

uint64_t field_mul(uint64_t a, uint64_t b);
uint64_t field_sub(uint64_t a, uint64_t b);

// Packs a list position together with a character code: (pos << 8) | code.
// Injective for code < 256 and pos < 2^52; violations throw.
uint64_t join_words(uint64_t position, uint64_t code);

enum class OpKind : uint8_t {
  FetchSeq = 0,   // public-index table read
  FetchObliv,     // hidden-index table read
  ScanStep,       // one padded iteration of a linear-time scan
  Join,           // committed integer packing
  MultisetEq,     // polynomial multiset comparison
  Assert,         // one conjoined assertion
};
enum class TableId : uint8_t { Terms = 0, Strings, Formulas, Steps, None };

const char* op_name(OpKind op);
const char* table_name(TableId t);

struct TraceRecord {
  OpKind op;
  TableId table;
  bool operator==(const TraceRecord&) const = default;
};

// Value-free log of backend operations; equality of transcripts is the
// observable leakage of a validation run.
class Transcript {
 public:
  void add(OpKind op, TableId table) { records_.push_back({op, table}); }
  const std::vector<TraceRecord>& records() const { return records_; }
  size_t count(OpKind op) const;
  size_t count(OpKind op, TableId table) const;
  std::string to_text() const;
  bool operator==(const Transcript&) const = default;

 private:
  std::vector<TraceRecord> records_;
};

bool transcript_compare(const Transcript& a, const Transcript& b);

// A committed value: the verifier-side code sees only the handle and must go
// through the backend for every comparison or combination.
class CommittedWord {
 public:
  CommittedWord() = default;
  uint64_t handle() const { return handle_; }

 private:
  uint64_t value_ = 0;
  uint64_t handle_ = 0;
  friend class Backend;
};

// Committed table row; cells beyond the table's width stay zero.
struct CommittedRow {
  std::array<CommittedWord, 6> cell{};
};

enum class Phase : uint8_t { RuleCheck = 0, Cycle, Permutation, Consistency };
const char* phase_name(Phase p);

struct BackendOptions {
  uint64_t challenge_seed = 1;
  bool fresh_entropy = false;    // draw multiset challenges from a random device
  bool record_transcript = true;
};

// Commitment backend interface. The base class implements the committed-word
// algebra and table access discipline; subclasses choose the multiset check
// and diagnostics.
class Backend {
 public:
  explicit Backend(BackendOptions opts);
  virtual ~Backend() = default;

  void bind(const ProofTables& t);

  // Table access. Oblivious fetches record one operation regardless of the
  // index value; out-of-range indexes poison the verdict and yield row 0.
  CommittedRow fetch_seq(TableId table, uint64_t public_idx);
  CommittedRow fetch(TableId table, const CommittedWord& idx);

  // Committed-word algebra.
  CommittedWord constant(uint64_t v);
  bool eq(const CommittedWord& a, const CommittedWord& b);
  bool eq_const(const CommittedWord& a, uint64_t v);
  bool lt(const CommittedWord& a, const CommittedWord& b);
  bool ge_const(const CommittedWord& a, uint64_t v);
  CommittedWord select(bool bit, const CommittedWord& then_w, const CommittedWord& else_w);
  CommittedWord offset(const CommittedWord& a, int64_t delta);  // wrapping add
  CommittedWord join(const CommittedWord& position, const CommittedWord& code);

  void scan_step(TableId table);
  bool multiset_eq(const std::vector<CommittedWord>& a, const std::vector<CommittedWord>& b);

  void set_phase(Phase p) { phase_ = p; }
  void require(bool ok, const char* what);
  void poison(const char* what);  // fail without a transcript record
  bool verdict() const { return ok_; }
  const std::string& first_failure() const { return first_failure_; }
  const Transcript* transcript() const {
    return opts_.record_transcript ? &transcript_ : nullptr;
  }

 protected:
  virtual bool multiset_eq_impl(std::span<const uint64_t> a, std::span<const uint64_t> b) = 0;
  uint64_t draw_challenge();

  BackendOptions opts_;

 private:
  CommittedWord commit(uint64_t v);

  const ProofTables* tables_ = nullptr;
  std::vector<std::vector<CommittedRow>> mem_;  // indexed by TableId
  Transcript transcript_;
  uint64_t next_handle_ = 1;
  uint64_t rng_state_ = 0;
  bool ok_ = true;
  Phase phase_ = Phase::RuleCheck;
  std::string first_failure_;
};

// Reference engine: exact multiset comparison, no transcript by default.
class PlaintextBackend : public Backend {
 public:
  explicit PlaintextBackend(BackendOptions opts = plain_options());
  static BackendOptions plain_options() {
    BackendOptions o;
    o.record_transcript = false;
    return o;
  }

 protected:
  bool multiset_eq_impl(std::span<const uint64_t> a, std::span<const uint64_t> b) override;
};

// Simulated commit-and-prove engine: random-challenge polynomial multiset
// checks and a full operation transcript.
class ZkSimBackend : public Backend {
 public:
  explicit ZkSimBackend(BackendOptions opts = {});

 protected:
  bool multiset_eq_impl(std::span<const uint64_t> a, std::span<const uint64_t> b) override;
};

}  // namespace crepe
