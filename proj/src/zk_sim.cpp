#include "crepe/zk_sim.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace crepe {

uint64_t field_mul(uint64_t a, uint64_t b) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % kFieldModulus);
}

uint64_t field_sub(uint64_t a, uint64_t b) {
  a %= kFieldModulus;
  b %= kFieldModulus;
  return a >= b ? a - b : a + kFieldModulus - b;
}

uint64_t join_words(uint64_t position, uint64_t code) {
  if (code >= 256) throw std::domain_error("join: character code must be below 256");
  if (position >= (uint64_t{1} << 52)) throw std::domain_error("join: position too large");
  return (position << 8) | code;
}

const char* op_name(OpKind op) {
  switch (op) {
    case OpKind::FetchSeq: return "fetch-seq";
    case OpKind::FetchObliv: return "fetch-obliv";
    case OpKind::ScanStep: return "scan-step";
    case OpKind::Join: return "join";
    case OpKind::MultisetEq: return "multiset-eq";
    case OpKind::Assert: return "assert";
  }
  return "?";
}

const char* table_name(TableId t) {
  switch (t) {
    case TableId::Terms: return "terms";
    case TableId::Strings: return "strings";
    case TableId::Formulas: return "formulas";
    case TableId::Steps: return "steps";
    case TableId::None: return "-";
  }
  return "?";
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::RuleCheck: return "rule-check";
    case Phase::Cycle: return "cycle";
    case Phase::Permutation: return "permutation";
    case Phase::Consistency: return "consistency";
  }
  return "?";
}

size_t Transcript::count(OpKind op) const {
  return std::count_if(records_.begin(), records_.end(),
                       [&](const TraceRecord& r) { return r.op == op; });
}

size_t Transcript::count(OpKind op, TableId table) const {
  return std::count_if(records_.begin(), records_.end(), [&](const TraceRecord& r) {
    return r.op == op && r.table == table;
  });
}

std::string Transcript::to_text() const {
  std::ostringstream out;
  out << "transcript " << records_.size() << "\n";
  for (const TraceRecord& r : records_)
    out << op_name(r.op) << " " << table_name(r.table) << "\n";
  return out.str();
}

bool transcript_compare(const Transcript& a, const Transcript& b) { return a == b; }

// ---------------------------------------------------------------------------

Backend::Backend(BackendOptions opts) : opts_(opts) {
  rng_state_ = opts_.fresh_entropy ? std::random_device{}() : opts_.challenge_seed;
  if (rng_state_ == 0) rng_state_ = 1;
}

uint64_t Backend::draw_challenge() {
  // splitmix64, reduced into the field.
  uint64_t z = (rng_state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return z % kFieldModulus;
}

CommittedWord Backend::commit(uint64_t v) {
  CommittedWord w;
  w.value_ = v;
  w.handle_ = next_handle_++;
  return w;
}

void Backend::bind(const ProofTables& t) {
  tables_ = &t;
  mem_.assign(4, {});
  auto put = [&](TableId id, auto&& rows, auto&& unpack) {
    auto& store = mem_[static_cast<size_t>(id)];
    store.reserve(rows.size());
    for (const auto& r : rows) {
      CommittedRow cr;
      size_t i = 0;
      for (uint64_t v : unpack(r)) cr.cell[i++] = commit(v);
      store.push_back(cr);
    }
  };
  put(TableId::Terms, t.terms, [](const TermRow& r) {
    return std::array<uint64_t, 4>{r.kind, r.imm, r.child0, r.child1};
  });
  put(TableId::Strings, t.strings, [](const StringRow& r) {
    return std::array<uint64_t, 3>{r.imm, r.tail, r.height};
  });
  put(TableId::Formulas, t.formulas, [](const FormulaRow& r) {
    return std::array<uint64_t, 5>{r.kind, r.imm, r.str, r.arg0, r.arg1};
  });
  put(TableId::Steps, t.steps, [](const StepRow& r) {
    return std::array<uint64_t, 6>{r.step_id, r.rule, r.cat, r.res, r.prem0, r.prem1};
  });
}

CommittedRow Backend::fetch_seq(TableId table, uint64_t public_idx) {
  if (opts_.record_transcript) transcript_.add(OpKind::FetchSeq, table);
  const auto& store = mem_[static_cast<size_t>(table)];
  if (public_idx >= store.size()) {
    poison("sequential fetch out of range");
    return store.empty() ? CommittedRow{} : store[0];
  }
  return store[public_idx];
}

CommittedRow Backend::fetch(TableId table, const CommittedWord& idx) {
  if (opts_.record_transcript) transcript_.add(OpKind::FetchObliv, table);
  const auto& store = mem_[static_cast<size_t>(table)];
  if (idx.value_ >= store.size()) {
    // A hidden index pointing outside the table invalidates the proof but
    // must not change the shape of the run.
    poison("hidden index out of range");
    return store.empty() ? CommittedRow{} : store[0];
  }
  return store[idx.value_];
}

CommittedWord Backend::constant(uint64_t v) { return commit(v); }

bool Backend::eq(const CommittedWord& a, const CommittedWord& b) {
  return a.value_ == b.value_;
}

bool Backend::eq_const(const CommittedWord& a, uint64_t v) { return a.value_ == v; }

bool Backend::lt(const CommittedWord& a, const CommittedWord& b) {
  return a.value_ < b.value_;
}

bool Backend::ge_const(const CommittedWord& a, uint64_t v) { return a.value_ >= v; }

CommittedWord Backend::select(bool bit, const CommittedWord& then_w,
                              const CommittedWord& else_w) {
  return commit(bit ? then_w.value_ : else_w.value_);
}

CommittedWord Backend::offset(const CommittedWord& a, int64_t delta) {
  return commit(a.value_ + static_cast<uint64_t>(delta));
}

CommittedWord Backend::join(const CommittedWord& position, const CommittedWord& code) {
  if (opts_.record_transcript) transcript_.add(OpKind::Join, TableId::None);
  // Committed inputs are masked into the stated domain; a violation can only
  // arise from tables the consistency phase rejects anyway.
  return commit(((position.value_ & ((uint64_t{1} << 52) - 1)) << 8) | (code.value_ & 0xff));
}

void Backend::scan_step(TableId table) {
  if (opts_.record_transcript) transcript_.add(OpKind::ScanStep, table);
}

bool Backend::multiset_eq(const std::vector<CommittedWord>& a,
                          const std::vector<CommittedWord>& b) {
  if (opts_.record_transcript) transcript_.add(OpKind::MultisetEq, TableId::None);
  if (a.size() != b.size()) return false;
  std::vector<uint64_t> av(a.size()), bv(b.size());
  for (size_t i = 0; i < a.size(); ++i) av[i] = a[i].value_;
  for (size_t i = 0; i < b.size(); ++i) bv[i] = b[i].value_;
  return multiset_eq_impl(av, bv);
}

void Backend::require(bool ok, const char* what) {
  if (opts_.record_transcript) transcript_.add(OpKind::Assert, TableId::None);
  if (!ok) poison(what);
}

void Backend::poison(const char* what) {
  if (ok_) {
    ok_ = false;
    first_failure_ = std::string(phase_name(phase_)) + ": " + what;
  }
}

PlaintextBackend::PlaintextBackend(BackendOptions opts) : Backend(opts) {}

bool PlaintextBackend::multiset_eq_impl(std::span<const uint64_t> a,
                                        std::span<const uint64_t> b) {
  std::vector<uint64_t> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

ZkSimBackend::ZkSimBackend(BackendOptions opts) : Backend(opts) {}

bool ZkSimBackend::multiset_eq_impl(std::span<const uint64_t> a,
                                    std::span<const uint64_t> b) {
  // Compare the polynomials prod(r - a_i) and prod(r - b_i) at a random
  // field point; soundness error is |a| / field size per challenge.
  uint64_t r = draw_challenge();
  uint64_t pa = 1, pb = 1;
  for (uint64_t v : a) pa = field_mul(pa, field_sub(r, v));
  for (uint64_t v : b) pb = field_mul(pb, field_sub(r, v));
  return pa == pb;
}

}  // namespace crepe
