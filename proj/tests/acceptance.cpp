// Acceptance suite: every criterion prints one PASS/FAIL line; the exit code
// is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include "crepe/equivalence.hpp"
#include "crepe/proof_gen.hpp"
#include "crepe/tables.hpp"
#include "crepe/validator.hpp"
#include "support/gen.hpp"
#include "support/nfa_oracle.hpp"

using namespace crepe;

namespace {

const Alphabet kAb{"ab"};

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

int failures = 0;

void report(int idx, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", idx, detail.c_str());
  if (!ok) ++failures;
}

struct CorpusEntry {
  const Term* p;
  const Term* q;
  StepPtr root;  // deduped, bookended
  size_t raw_steps = 0;
  size_t steps = 0;
};

std::vector<CorpusEntry> corpus;  // filled by criterion 2/3

// --- criterion 1: the worked example end to end -----------------------------

void criterion1() {
  Clock clk;
  bool ok = true;
  std::string detail;
  try {
    Alphabet a{"a"};
    const Term* p = parse_regex("(a*a)*", a);
    const Term* q = parse_regex("a*", a);
    ok &= equiv(p, q, a);
    StepPtr root = dedup_and_prune(bookend(proof_gen(p, q, a)));
    ok &= check_proof(root, 1);
    LowerOptions lo;
    lo.seed = 42;
    ProofTables t = lower_proof(root, a, lo);
    for (const char* name : {"default", "none", "full"}) {
      MuxConfig m = *MuxConfig::by_name(name);
      ProofTables tt = t.with_mux(m);
      ZkSimBackend be({7, false, false});
      ok &= validate(tt, m, be).ok;
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  double secs = clk.s();
  ok &= secs < 1.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "worked example (a*a)* = a* proves and validates in all mux modes "
                "(%.3f s, limit 1 s) %s",
                secs, detail.c_str());
  report(1, ok, buf);
}

// --- criterion 2: equivalence vs automaton oracle ----------------------------

void criterion2() {
  Clock clk;
  std::mt19937_64 rng(20240817);
  size_t disagreements = 0, budget_hits = 0, equivalent = 0;
  std::vector<std::pair<const Term*, const Term*>> equivalent_pairs;

  for (int i = 0; i < 2000; ++i) {
    const Term* p = gen::random_regex(rng, 4, 2);
    const Term* q = gen::random_regex(rng, 4, 2);
    bool want = oracle::nfa_equiv(p, q, 2);
    try {
      bool got = equiv(p, q, kAb);
      if (got != want) ++disagreements;
      if (got) equivalent_pairs.push_back({p, q});
    } catch (const BudgetExceeded&) {
      ++budget_hits;
    }
  }
  for (int i = 0; i < 200; ++i) {
    const Term* p = gen::random_regex(rng, 4, 2);
    const Term* q = gen::perturb(rng, p, 8);
    try {
      if (!equiv(p, q, kAb)) ++disagreements;
      equivalent_pairs.push_back({p, q});
    } catch (const BudgetExceeded&) {
      ++budget_hits;
    }
  }
  equivalent = equivalent_pairs.size();
  for (auto [p, q] : equivalent_pairs) corpus.push_back({p, q, nullptr});

  double secs = clk.s();
  bool ok = disagreements == 0 && budget_hits == 0 && secs < 60.0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "2200 oracle comparisons, %zu equivalent, %zu disagreements, %zu over "
                "budget (%.1f s, limit 60 s)",
                equivalent, disagreements, budget_hits, secs);
  report(2, ok, buf);
}

// --- criterion 3: round-trip proof validity ----------------------------------

void criterion3() {
  Clock clk;
  size_t failures_here = 0;
  GenOptions gopts;
  gopts.max_calls = 10'000'000;
  for (CorpusEntry& e : corpus) {
    try {
      StepPtr raw = bookend(proof_gen(e.p, e.q, kAb, gopts));
      e.raw_steps = topo_steps(raw).size();
      e.root = dedup_and_prune(raw);
      e.steps = topo_steps(e.root).size();
      if (!check_proof(e.root, 2)) {
        ++failures_here;
        continue;
      }
      LowerOptions lo;
      lo.seed = 42;
      ProofTables t = lower_proof(e.root, kAb, lo);
      ZkSimBackend be({7, false, false});
      if (!validate(t, t.mux, be).ok) ++failures_here;
    } catch (const std::exception&) {
      ++failures_here;
    }
  }
  double secs = clk.s();
  bool ok = failures_here == 0 && secs < 300.0 && !corpus.empty();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "generate+dedup+bookend+lower+validate on %zu equivalent pairs, %zu "
                "failures (%.1f s, limit 300 s)",
                corpus.size(), failures_here, secs);
  report(3, ok, buf);
}

// --- criterion 4: adversarial rejection --------------------------------------

ProofTables worked_tables() {
  Alphabet a{"a"};
  const Term* p = parse_regex("(a*a)*", a);
  const Term* q = parse_regex("a*", a);
  StepPtr root = dedup_and_prune(bookend(proof_gen(p, q, a)));
  LowerOptions lo;
  lo.seed = 1;
  return lower_proof(root, a, lo);
}

bool rejected_everywhere(const ProofTables& t) {
  for (const char* name : {"default", "none", "full"}) {
    MuxConfig m = *MuxConfig::by_name(name);
    ProofTables tt = t.with_mux(m);
    ZkSimBackend be({5, false, false});
    if (validate(tt, m, be).ok) return false;
  }
  return true;
}

void criterion4() {
  ProofTables base = worked_tables();
  auto find_step = [&](RuleId r) -> size_t {
    for (size_t i = 0; i < base.steps.size(); ++i)
      if (static_cast<RuleId>(base.steps[i].rule) == r) return i;
    return base.steps.size();
  };

  size_t fixed_rejected = 0;
  {  // empty-string SyncCycle
    ProofTables t = base;
    t.formulas[t.steps[find_step(RuleId::SyncCycle)].res].str = 0;
    fixed_rejected += rejected_everywhere(t);
  }
  {  // Assume concluding Eq
    ProofTables t = base;
    t.formulas[t.steps[find_step(RuleId::Assume)].res].kind =
        static_cast<uint64_t>(FormulaKind::Eq);
    fixed_rejected += rejected_everywhere(t);
  }
  {  // cyclic premise
    ProofTables t = base;
    size_t i = find_step(RuleId::Trans);
    t.steps[i].prem0 = i;
    fixed_rejected += rejected_everywhere(t);
  }
  {  // duplicated step id
    ProofTables t = base;
    t.steps[find_step(RuleId::Trans)].step_id =
        t.steps[find_step(RuleId::Contra)].step_id;
    fixed_rejected += rejected_everywhere(t);
  }
  {  // derivative chain longer than its Sync string
    ProofTables t = base;
    size_t i = find_step(RuleId::SyncCycle);
    size_t prem = t.steps[i].prem0;
    uint64_t chain = t.formulas[t.steps[prem].res].arg0;
    t.terms.push_back({static_cast<uint64_t>(TermKind::Deriv), 0, chain, 0});
    t.params.chi += 1;
    t.formulas[t.steps[prem].res].arg0 = t.terms.size() - 1;
    fixed_rejected += rejected_everywhere(t);
  }
  {  // character code outside the alphabet
    ProofTables t = base;
    for (auto& row : t.terms)
      if (row.kind == static_cast<uint64_t>(TermKind::Char)) {
        row.imm = t.params.n;
        break;
      }
    fixed_rejected += rejected_everywhere(t);
  }

  // 1000 random single-cell mutations of a larger proof.
  ProofTables big = base;
  for (const CorpusEntry& e : corpus)
    if (e.root && e.steps > big.params.pi) {
      LowerOptions lo;
      lo.seed = 3;
      big = lower_proof(e.root, kAb, lo);
    }
  std::mt19937_64 rng(71);
  size_t accepted = 0, unsound = 0, rejected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ProofTables t = big;
    uint64_t which = rng() % 4;
    auto bump = [&](uint64_t& cell) { cell += 1 + rng() % 5; };
    switch (which) {
      case 0: {
        auto& r = t.terms[rng() % t.terms.size()];
        uint64_t c = rng() % 4;
        bump(c == 0 ? r.kind : c == 1 ? r.imm : c == 2 ? r.child0 : r.child1);
        break;
      }
      case 1: {
        auto& r = t.strings[rng() % t.strings.size()];
        uint64_t c = rng() % 3;
        bump(c == 0 ? r.imm : c == 1 ? r.tail : r.height);
        break;
      }
      case 2: {
        auto& r = t.formulas[rng() % t.formulas.size()];
        uint64_t c = rng() % 5;
        bump(c == 0 ? r.kind : c == 1 ? r.imm : c == 2 ? r.str : c == 3 ? r.arg0 : r.arg1);
        break;
      }
      default: {
        auto& r = t.steps[rng() % t.steps.size()];
        uint64_t c = rng() % 6;
        bump(c == 0   ? r.step_id
             : c == 1 ? r.rule
             : c == 2 ? r.cat
             : c == 3 ? r.res
             : c == 4 ? r.prem0
                      : r.prem1);
        if (r.rule >= kNumRules) r.rule %= kNumRules;
        if (r.cat >= t.mux.num_categories) r.cat %= t.mux.num_categories;
        break;
      }
    }
    ZkSimBackend be({static_cast<uint64_t>(100 + trial), false, false});
    if (validate(t, t.mux, be).ok) {
      ++accepted;
      if (!semantic_recheck(t)) ++unsound;
    } else {
      ++rejected;
    }
  }

  bool ok = fixed_rejected == 6 && unsound == 0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "fixed invalid suite %zu/6 rejected in every mux mode; mutations: %zu "
                "rejected, %zu accepted, %zu semantically unsound",
                fixed_rejected, rejected, accepted, unsound);
  report(4, ok, buf);
}

// --- criterion 5: scan oracles ------------------------------------------------

struct ScanTables {
  ProofTables t;
  uint64_t chain_idx = 0;
  std::vector<uint64_t> string_of_len;
};

ScanTables scan_tables(const std::vector<CharCode>& chain, const std::vector<CharCode>& s,
                       uint64_t nu, uint64_t n) {
  ScanTables out;
  ProofTables& t = out.t;
  t.alphabet.assign(static_cast<size_t>(n), 'a');
  for (size_t i = 0; i < t.alphabet.size(); ++i) t.alphabet[i] = static_cast<char>('a' + i);
  t.mux = MuxConfig::default_config();
  t.terms.push_back({static_cast<uint64_t>(TermKind::Blank), 0, 0, 0});
  for (CharCode c : chain) {
    t.terms.push_back({static_cast<uint64_t>(TermKind::Deriv), c, out.chain_idx, 0});
    out.chain_idx = t.terms.size() - 1;
  }
  t.strings.push_back({0, 0, 0});
  out.string_of_len.push_back(0);
  uint64_t tail = 0;
  for (size_t i = s.size(); i-- > 0;) {
    t.strings.push_back({s[i], tail, s.size() - i});
    tail = t.strings.size() - 1;
    out.string_of_len.push_back(tail);
  }
  t.formulas.push_back({static_cast<uint64_t>(FormulaKind::Bottom), 0, 0, 0, 0});
  t.steps.push_back({0, static_cast<uint64_t>(RuleId::Assume), t.mux.assume_category(), 0, 0, 0});
  t.params = {n, t.terms.size(), t.strings.size(), 1, nu};
  return out;
}

void criterion5() {
  Clock clk;
  const uint64_t nu = 16;
  std::mt19937_64 rng(73);
  size_t rev_bad = 0, scan_bad = 0, iter_bad = 0;

  for (int i = 0; i < 10000; ++i) {
    size_t len = rng() % (nu + 1);
    std::vector<CharCode> s(len);
    for (auto& c : s) c = static_cast<CharCode>(rng() % 4);
    std::vector<CharCode> chain = s;
    switch (rng() % 4) {
      case 0: break;  // honest
      case 1:
        if (len < nu) chain.push_back(static_cast<CharCode>(rng() % 4));
        break;
      case 2:
        if (!chain.empty()) chain[rng() % chain.size()] ^= 1;
        break;
      default:
        std::reverse(chain.begin(), chain.end());
        break;
    }
    ScanTables fx = scan_tables(chain, s, nu, 4);
    ZkSimBackend be;
    be.bind(fx.t);
    bool got = check_reverse(be, fx.t.params, be.constant(fx.chain_idx),
                             be.constant(fx.string_of_len.back()), std::nullopt);
    std::vector<CharCode> outside_in(chain.rbegin(), chain.rend());
    std::vector<CharCode> reversed(s.rbegin(), s.rend());
    bool want = outside_in == reversed;
    if (got != want) ++rev_bad;
    if (be.transcript()->count(OpKind::ScanStep) != nu) ++iter_bad;
  }

  for (int i = 0; i < 10000; ++i) {
    size_t len = rng() % nu;
    std::vector<CharCode> s(len);
    for (auto& c : s) c = static_cast<CharCode>(rng() % 4);
    CharCode c = static_cast<CharCode>(rng() % 4);
    std::vector<CharCode> sc = s;
    sc.push_back(c);
    if (rng() % 2 == 0) {
      if (rng() % 2 == 0) {
        sc[rng() % sc.size()] ^= 1;
      } else {
        sc.pop_back();
        sc.insert(sc.begin(), c ^ 1);
      }
    }
    // Both strings in one table: append sc after s.
    ScanTables fx = scan_tables({}, s, nu, 4);
    ProofTables& t = fx.t;
    uint64_t tail = 0;
    for (size_t j = sc.size(); j-- > 0;) {
      t.strings.push_back({sc[j], tail, sc.size() - j});
      tail = t.strings.size() - 1;
    }
    t.params.xi = t.strings.size();
    ZkSimBackend be;
    be.bind(t);
    bool got = sync_extend_scan(be, t.params, be.constant(tail),
                                be.constant(fx.string_of_len.back()), be.constant(c));
    std::vector<CharCode> want_str = s;
    want_str.push_back(c);
    if (got != (sc == want_str)) ++scan_bad;
    if (be.transcript()->count(OpKind::ScanStep) != nu) ++iter_bad;
  }

  bool ok = rev_bad == 0 && scan_bad == 0 && iter_bad == 0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "10000 reversal scans (%zu wrong) and 10000 append scans (%zu wrong); "
                "%zu runs deviated from nu=16 iterations (%.1f s)",
                rev_bad, scan_bad, iter_bad, clk.s());
  report(5, ok, buf);
}

// --- criterion 6: trace constancy ----------------------------------------------

void criterion6() {
  // Bucket corpus proofs by their default-mux category profile (the counts
  // padding cannot change), then pad each pair to common size parameters.
  MuxConfig def = MuxConfig::default_config();
  std::map<std::pair<uint64_t, uint64_t>, std::vector<const CorpusEntry*>> buckets;
  for (const CorpusEntry& e : corpus) {
    if (!e.root) continue;
    uint64_t c0 = 0, c2 = 0;
    for (ProofStep* s : topo_steps(e.root)) {
      uint32_t cat = def.category_of(s->rule);
      if (cat == 0) ++c0;
      if (cat == 2) ++c2;
    }
    buckets[{c0, c2}].push_back(&e);
  }

  size_t pairs = 0, full_mismatch = 0, default_mismatch = 0;
  for (auto& [key, entries] : buckets) {
    for (size_t i = 0; i + 1 < entries.size() && pairs < 30; i += 2) {
      const CorpusEntry* a = entries[i];
      const CorpusEntry* b = entries[i + 1];
      LowerOptions lo;
      lo.seed = 42;
      ProofTables ta = lower_proof(a->root, kAb, lo);
      ProofTables tb = lower_proof(b->root, kAb, lo);
      lo.min_chi = std::max(ta.params.chi, tb.params.chi);
      lo.min_xi = std::max(ta.params.xi, tb.params.xi);
      lo.min_pi = std::max(ta.params.pi, tb.params.pi);
      lo.min_nu = std::max(ta.params.nu, tb.params.nu);
      ta = lower_proof(a->root, kAb, lo);
      tb = lower_proof(b->root, kAb, lo);
      if (!(ta.params == tb.params)) continue;
      ++pairs;

      // Full multiplexing: record-identical transcripts.
      {
        MuxConfig full = MuxConfig::full();
        ZkSimBackend ba({9, false, true}), bb({9, false, true});
        bool va = validate(ta.with_mux(full), full, ba).ok;
        bool vb = validate(tb.with_mux(full), full, bb).ok;
        if (!va || !vb || !transcript_compare(*ba.transcript(), *bb.transcript()))
          ++full_mismatch;
      }
      // Default multiplexing: the aggregate operation counts agree since the
      // per-category counts agree.
      {
        ZkSimBackend ba({9, false, true}), bb({9, false, true});
        bool va = validate(ta, def, ba).ok;
        bool vb = validate(tb, def, bb).ok;
        bool agg = va && vb;
        for (OpKind op : {OpKind::FetchSeq, OpKind::FetchObliv, OpKind::ScanStep,
                          OpKind::Join, OpKind::MultisetEq, OpKind::Assert})
          for (TableId tab : {TableId::Terms, TableId::Strings, TableId::Formulas,
                              TableId::Steps, TableId::None})
            agg = agg && ba.transcript()->count(op, tab) == bb.transcript()->count(op, tab);
        if (!agg) ++default_mismatch;
      }
    }
  }

  bool ok = pairs >= 20 && full_mismatch == 0 && default_mismatch == 0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu matched+padded proof pairs: %zu full-mux transcript mismatches, %zu "
                "default-mux aggregate mismatches",
                pairs, full_mismatch, default_mismatch);
  report(6, ok, buf);
}

// --- criterion 7: plaintext validation speed ------------------------------------

void criterion7() {
  size_t checked = 0, slow = 0, invalid = 0;
  double worst = 0;
  for (const CorpusEntry& e : corpus) {
    if (!e.root || e.steps > 5000) continue;
    LowerOptions lo;
    lo.seed = 42;
    ProofTables t = lower_proof(e.root, kAb, lo);
    PlaintextBackend be;
    Clock clk;
    bool ok = validate(t, t.mux, be).ok;
    double secs = clk.s();
    ++checked;
    worst = std::max(worst, secs);
    if (!ok) ++invalid;
    if (secs >= 0.1) ++slow;
  }
  bool ok = checked > 0 && slow == 0 && invalid == 0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "plaintext validation of %zu proofs: slowest %.4f s (limit 0.1 s per "
                "proof), %zu over limit, %zu invalid",
                checked, worst, slow, invalid);
  report(7, ok, buf);
}

// --- criterion 8: deduplication effectiveness ------------------------------------

void criterion8() {
  size_t grew = 0, big = 0, shrank_big = 0;
  for (const CorpusEntry& e : corpus) {
    if (!e.root) continue;
    if (e.steps > e.raw_steps) ++grew;
    if (e.raw_steps >= 100) {
      ++big;
      if (e.steps < e.raw_steps) ++shrank_big;
    }
  }
  bool ok = grew == 0 && big > 0 && shrank_big * 2 >= big;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "dedup grew %zu proofs; strictly shrank %zu of %zu proofs with >=100 raw "
                "steps (need >=50%%)",
                grew, shrank_big, big);
  report(8, ok, buf);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
