#include "crepe/validator.hpp"

#include <chrono>
#include <sstream>

namespace crepe {

namespace {

constexpr uint64_t tk(TermKind k) { return static_cast<uint64_t>(k); }
constexpr uint64_t fk(FormulaKind k) { return static_cast<uint64_t>(k); }

// Cell layout per table.
namespace cell {
constexpr size_t kind = 0, imm = 1, child0 = 2, child1 = 3;          // terms
constexpr size_t s_imm = 0, s_tail = 1, s_height = 2;                // strings
constexpr size_t f_kind = 0, f_ctr = 1, f_str = 2, f_a0 = 3, f_a1 = 4;  // formulas
constexpr size_t p_id = 0, p_res = 3, p_prem0 = 4, p_prem1 = 5;      // steps
}  // namespace cell

struct Ctx {
  Backend& be;
  const SizeParams& params;

  CommittedRow term(const CommittedWord& idx) { return be.fetch(TableId::Terms, idx); }
  CommittedRow str(const CommittedWord& idx) { return be.fetch(TableId::Strings, idx); }
  bool tkind(const CommittedRow& r, TermKind k) { return be.eq_const(r.cell[cell::kind], tk(k)); }
  bool fkind(const CommittedRow& f, FormulaKind k) {
    return be.eq_const(f.cell[cell::f_kind], fk(k));
  }
};

}  // namespace

bool check_reverse(Backend& be, const SizeParams& params, const CommittedWord& chain,
                   const CommittedWord& str, const std::optional<CommittedWord>& expected_root) {
  Ctx cx{be, params};
  CommittedRow head = cx.str(str);
  CommittedWord h = head.cell[cell::s_height];
  CommittedWord t_hat = chain;
  CommittedWord s_hat = str;
  CommittedWord zero = be.constant(0);
  std::vector<CommittedWord> a, b;
  a.reserve(params.nu);
  b.reserve(params.nu);
  bool ok = true;
  for (uint64_t k = 1; k <= params.nu; ++k) {
    be.scan_step(TableId::Terms);
    CommittedRow trow = cx.term(t_hat);
    CommittedRow srow = cx.str(s_hat);
    bool z = be.ge_const(h, k);
    ok = ok & (!z | cx.tkind(trow, TermKind::Deriv));
    // Chain positions ascend, string positions descend: the multisets agree
    // exactly when one list is the reversal of the other.
    CommittedWord xa = be.select(z, be.join(be.constant(k), trow.cell[cell::imm]), zero);
    CommittedWord xb = be.select(
        z, be.join(be.offset(h, 1 - static_cast<int64_t>(k)), srow.cell[cell::s_imm]), zero);
    a.push_back(xa);
    b.push_back(xb);
    t_hat = be.select(z, trow.cell[cell::child0], t_hat);
    s_hat = be.select(z, srow.cell[cell::s_tail], s_hat);
  }
  CommittedRow s_fin = cx.str(s_hat);
  ok = ok & be.eq_const(s_fin.cell[cell::s_height], 0);
  if (expected_root) {
    ok = ok & be.eq(t_hat, *expected_root);
  } else {
    CommittedRow t_fin = cx.term(t_hat);
    ok = ok & !cx.tkind(t_fin, TermKind::Deriv);
  }
  return ok & be.multiset_eq(a, b);
}

bool sync_extend_scan(Backend& be, const SizeParams& params, const CommittedWord& sc,
                      const CommittedWord& s, const CommittedWord& c) {
  Ctx cx{be, params};
  CommittedRow sc_head = cx.str(sc);
  CommittedRow s_head = cx.str(s);
  CommittedWord h = s_head.cell[cell::s_height];
  bool ok = be.eq(sc_head.cell[cell::s_height], be.offset(h, 1));
  CommittedWord sc_hat = sc;
  CommittedWord s_hat = s;
  for (uint64_t k = 1; k <= params.nu; ++k) {
    be.scan_step(TableId::Strings);
    CommittedRow sc_row = cx.str(sc_hat);
    CommittedRow s_row = cx.str(s_hat);
    bool z = be.ge_const(h, k);
    ok = ok & (!z | be.eq(sc_row.cell[cell::s_imm], s_row.cell[cell::s_imm]));
    sc_hat = be.select(z, sc_row.cell[cell::s_tail], sc_hat);
    s_hat = be.select(z, s_row.cell[cell::s_tail], s_hat);
  }
  CommittedRow s_fin = cx.str(s_hat);
  CommittedRow sc_fin = cx.str(sc_hat);
  CommittedRow sc_tail = cx.str(sc_fin.cell[cell::s_tail]);
  ok = ok & be.eq_const(s_fin.cell[cell::s_height], 0);
  ok = ok & be.eq(sc_fin.cell[cell::s_imm], c);
  ok = ok & be.eq_const(sc_tail.cell[cell::s_height], 0);
  return ok;
}

bool permute_check(Backend& be, const std::vector<CommittedWord>& d, uint64_t pi) {
  std::vector<CommittedWord> ref;
  ref.reserve(pi);
  for (uint64_t i = 0; i < pi; ++i) ref.push_back(be.constant(i));
  return be.multiset_eq(d, ref);
}

// ---------------------------------------------------------------------------
// Checking instructions. Each performs a fixed sequence of fetches and
// comparisons; equality between terms or strings is index equality only.

bool checking_instr(RuleId rule, Backend& be, const SizeParams& params,
                    const CommittedRow& f0, const CommittedRow& f1, const CommittedRow& f2) {
  Ctx cx{be, params};
  using FK = FormulaKind;
  using TK = TermKind;
  const uint64_t n = params.n;

  auto eqc = [&](const CommittedWord& a, const CommittedWord& b) { return be.eq(a, b); };

  switch (rule) {
    case RuleId::Refl:
      return cx.fkind(f0, FK::Eq) & eqc(f0.cell[cell::f_a0], f0.cell[cell::f_a1]);
    case RuleId::Symm:
      return cx.fkind(f0, FK::Eq) & cx.fkind(f1, FK::Eq) &
             eqc(f1.cell[cell::f_a0], f0.cell[cell::f_a1]) &
             eqc(f1.cell[cell::f_a1], f0.cell[cell::f_a0]);
    case RuleId::Trans:
      return cx.fkind(f0, FK::Eq) & cx.fkind(f1, FK::Eq) & cx.fkind(f2, FK::Eq) &
             eqc(f1.cell[cell::f_a0], f0.cell[cell::f_a0]) &
             eqc(f1.cell[cell::f_a1], f2.cell[cell::f_a0]) &
             eqc(f2.cell[cell::f_a1], f0.cell[cell::f_a1]);
    case RuleId::PredCongL: {
      bool pred = cx.fkind(f0, FK::Eq) | cx.fkind(f0, FK::Neq) | cx.fkind(f0, FK::Sync);
      return pred & be.eq(f1.cell[cell::f_kind], f0.cell[cell::f_kind]) &
             cx.fkind(f2, FK::Eq) & eqc(f1.cell[cell::f_str], f0.cell[cell::f_str]) &
             eqc(f1.cell[cell::f_a0], f2.cell[cell::f_a0]) &
             eqc(f0.cell[cell::f_a0], f2.cell[cell::f_a1]) &
             eqc(f1.cell[cell::f_a1], f0.cell[cell::f_a1]);
    }
    case RuleId::PredCongR: {
      bool pred = cx.fkind(f0, FK::Eq) | cx.fkind(f0, FK::Neq) | cx.fkind(f0, FK::Sync);
      return pred & be.eq(f1.cell[cell::f_kind], f0.cell[cell::f_kind]) &
             cx.fkind(f2, FK::Eq) & eqc(f1.cell[cell::f_str], f0.cell[cell::f_str]) &
             eqc(f1.cell[cell::f_a1], f2.cell[cell::f_a0]) &
             eqc(f0.cell[cell::f_a1], f2.cell[cell::f_a1]) &
             eqc(f1.cell[cell::f_a0], f0.cell[cell::f_a0]);
    }
    case RuleId::FunCong1: {
      CommittedRow t1 = cx.term(f0.cell[cell::f_a0]);
      CommittedRow t2 = cx.term(f0.cell[cell::f_a1]);
      bool fn = cx.tkind(t1, TK::Star) | cx.tkind(t1, TK::Epsilon) | cx.tkind(t1, TK::Deriv);
      return cx.fkind(f0, FK::Eq) & cx.fkind(f1, FK::Eq) & fn &
             be.eq(t1.cell[cell::kind], t2.cell[cell::kind]) &
             be.eq(t1.cell[cell::imm], t2.cell[cell::imm]) &
             eqc(t1.cell[cell::child0], f1.cell[cell::f_a0]) &
             eqc(t2.cell[cell::child0], f1.cell[cell::f_a1]);
    }
    case RuleId::FunCong2: {
      CommittedRow t1 = cx.term(f0.cell[cell::f_a0]);
      CommittedRow t2 = cx.term(f0.cell[cell::f_a1]);
      bool fn = cx.tkind(t1, TK::Concat) | cx.tkind(t1, TK::Union);
      return cx.fkind(f0, FK::Eq) & cx.fkind(f1, FK::Eq) & cx.fkind(f2, FK::Eq) & fn &
             be.eq(t1.cell[cell::kind], t2.cell[cell::kind]) &
             eqc(t1.cell[cell::child0], f1.cell[cell::f_a0]) &
             eqc(t2.cell[cell::child0], f1.cell[cell::f_a1]) &
             eqc(t1.cell[cell::child1], f2.cell[cell::f_a0]) &
             eqc(t2.cell[cell::child1], f2.cell[cell::f_a1]);
    }

    case RuleId::UnionAssoc:
    case RuleId::ConcatAssoc: {
      TK k = rule == RuleId::UnionAssoc ? TK::Union : TK::Concat;
      CommittedRow lhs = cx.term(f0.cell[cell::f_a0]);
      CommittedRow inner = cx.term(lhs.cell[cell::child1]);
      CommittedRow rhs = cx.term(f0.cell[cell::f_a1]);
      CommittedRow rinner = cx.term(rhs.cell[cell::child0]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(lhs, k) & cx.tkind(inner, k) & cx.tkind(rhs, k) &
             cx.tkind(rinner, k) & eqc(lhs.cell[cell::child0], rinner.cell[cell::child0]) &
             eqc(inner.cell[cell::child0], rinner.cell[cell::child1]) &
             eqc(inner.cell[cell::child1], rhs.cell[cell::child1]);
    }
    case RuleId::UnionComm: {
      CommittedRow lhs = cx.term(f0.cell[cell::f_a0]);
      CommittedRow rhs = cx.term(f0.cell[cell::f_a1]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(lhs, TK::Union) & cx.tkind(rhs, TK::Union) &
             eqc(lhs.cell[cell::child0], rhs.cell[cell::child1]) &
             eqc(lhs.cell[cell::child1], rhs.cell[cell::child0]);
    }
    case RuleId::UnionEmpty: {
      CommittedRow lhs = cx.term(f0.cell[cell::f_a0]);
      CommittedRow e = cx.term(lhs.cell[cell::child1]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(lhs, TK::Union) & cx.tkind(e, TK::Empty) &
             eqc(lhs.cell[cell::child0], f0.cell[cell::f_a1]);
    }
    case RuleId::UnionSelf: {
      CommittedRow lhs = cx.term(f0.cell[cell::f_a0]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(lhs, TK::Union) &
             eqc(lhs.cell[cell::child0], lhs.cell[cell::child1]) &
             eqc(lhs.cell[cell::child0], f0.cell[cell::f_a1]);
    }
    case RuleId::ConcatBlankL: {
      CommittedRow lhs = cx.term(f0.cell[cell::f_a0]);
      CommittedRow b = cx.term(lhs.cell[cell::child0]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(lhs, TK::Concat) & cx.tkind(b, TK::Blank) &
             eqc(lhs.cell[cell::child1], f0.cell[cell::f_a1]);
    }
    case RuleId::ConcatBlankR: {
      CommittedRow lhs = cx.term(f0.cell[cell::f_a0]);
      CommittedRow b = cx.term(lhs.cell[cell::child1]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(lhs, TK::Concat) & cx.tkind(b, TK::Blank) &
             eqc(lhs.cell[cell::child0], f0.cell[cell::f_a1]);
    }
    case RuleId::ConcatEmptyL: {
      CommittedRow lhs = cx.term(f0.cell[cell::f_a0]);
      CommittedRow e = cx.term(lhs.cell[cell::child0]);
      CommittedRow r = cx.term(f0.cell[cell::f_a1]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(lhs, TK::Concat) & cx.tkind(e, TK::Empty) &
             cx.tkind(r, TK::Empty);
    }
    case RuleId::ConcatEmptyR: {
      CommittedRow lhs = cx.term(f0.cell[cell::f_a0]);
      CommittedRow e = cx.term(lhs.cell[cell::child1]);
      CommittedRow r = cx.term(f0.cell[cell::f_a1]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(lhs, TK::Concat) & cx.tkind(e, TK::Empty) &
             cx.tkind(r, TK::Empty);
    }

    case RuleId::EpsilonEmpty:
    case RuleId::EpsilonBlank:
    case RuleId::EpsilonChar:
    case RuleId::EpsilonStar: {
      CommittedRow lhs = cx.term(f0.cell[cell::f_a0]);
      CommittedRow inner = cx.term(lhs.cell[cell::child0]);
      CommittedRow r = cx.term(f0.cell[cell::f_a1]);
      TK want = rule == RuleId::EpsilonEmpty   ? TK::Empty
                : rule == RuleId::EpsilonBlank ? TK::Blank
                : rule == RuleId::EpsilonChar  ? TK::Char
                                               : TK::Star;
      TK out = rule == RuleId::EpsilonBlank || rule == RuleId::EpsilonStar ? TK::Blank
                                                                           : TK::Empty;
      return cx.fkind(f0, FK::Eq) & cx.tkind(lhs, TK::Epsilon) & cx.tkind(inner, want) &
             cx.tkind(r, out);
    }
    case RuleId::EpsilonUnionPos1:
    case RuleId::EpsilonUnionPos2: {
      CommittedRow l0 = cx.term(f0.cell[cell::f_a0]);
      CommittedRow u = cx.term(l0.cell[cell::child0]);
      CommittedRow r0 = cx.term(f0.cell[cell::f_a1]);
      CommittedRow l1 = cx.term(f1.cell[cell::f_a0]);
      CommittedRow r1 = cx.term(f1.cell[cell::f_a1]);
      size_t child = rule == RuleId::EpsilonUnionPos1 ? cell::child0 : cell::child1;
      return cx.fkind(f0, FK::Eq) & cx.fkind(f1, FK::Eq) & cx.tkind(l0, TK::Epsilon) &
             cx.tkind(u, TK::Union) & cx.tkind(r0, TK::Blank) & cx.tkind(l1, TK::Epsilon) &
             cx.tkind(r1, TK::Blank) & eqc(u.cell[child], l1.cell[cell::child0]);
    }
    case RuleId::EpsilonUnionNeg:
    case RuleId::EpsilonConcatPos: {
      TK shape = rule == RuleId::EpsilonUnionNeg ? TK::Union : TK::Concat;
      TK out = rule == RuleId::EpsilonUnionNeg ? TK::Empty : TK::Blank;
      CommittedRow l0 = cx.term(f0.cell[cell::f_a0]);
      CommittedRow u = cx.term(l0.cell[cell::child0]);
      CommittedRow r0 = cx.term(f0.cell[cell::f_a1]);
      CommittedRow l1 = cx.term(f1.cell[cell::f_a0]);
      CommittedRow r1 = cx.term(f1.cell[cell::f_a1]);
      CommittedRow l2 = cx.term(f2.cell[cell::f_a0]);
      CommittedRow r2 = cx.term(f2.cell[cell::f_a1]);
      return cx.fkind(f0, FK::Eq) & cx.fkind(f1, FK::Eq) & cx.fkind(f2, FK::Eq) &
             cx.tkind(l0, TK::Epsilon) & cx.tkind(u, shape) & cx.tkind(r0, out) &
             cx.tkind(l1, TK::Epsilon) & cx.tkind(r1, out) & cx.tkind(l2, TK::Epsilon) &
             cx.tkind(r2, out) & eqc(u.cell[cell::child0], l1.cell[cell::child0]) &
             eqc(u.cell[cell::child1], l2.cell[cell::child0]);
    }
    case RuleId::EpsilonConcatNeg1:
    case RuleId::EpsilonConcatNeg2: {
      CommittedRow l0 = cx.term(f0.cell[cell::f_a0]);
      CommittedRow u = cx.term(l0.cell[cell::child0]);
      CommittedRow r0 = cx.term(f0.cell[cell::f_a1]);
      CommittedRow l1 = cx.term(f1.cell[cell::f_a0]);
      CommittedRow r1 = cx.term(f1.cell[cell::f_a1]);
      size_t child = rule == RuleId::EpsilonConcatNeg1 ? cell::child0 : cell::child1;
      return cx.fkind(f0, FK::Eq) & cx.fkind(f1, FK::Eq) & cx.tkind(l0, TK::Epsilon) &
             cx.tkind(u, TK::Concat) & cx.tkind(r0, TK::Empty) & cx.tkind(l1, TK::Epsilon) &
             cx.tkind(r1, TK::Empty) & eqc(u.cell[child], l1.cell[cell::child0]);
    }

    case RuleId::DeriveEmpty:
    case RuleId::DeriveBlank: {
      CommittedRow d = cx.term(f0.cell[cell::f_a0]);
      CommittedRow inner = cx.term(d.cell[cell::child0]);
      CommittedRow r = cx.term(f0.cell[cell::f_a1]);
      TK want = rule == RuleId::DeriveEmpty ? TK::Empty : TK::Blank;
      return cx.fkind(f0, FK::Eq) & cx.tkind(d, TK::Deriv) & cx.tkind(inner, want) &
             cx.tkind(r, TK::Empty);
    }
    case RuleId::DeriveCharSame: {
      CommittedRow d = cx.term(f0.cell[cell::f_a0]);
      CommittedRow inner = cx.term(d.cell[cell::child0]);
      CommittedRow r = cx.term(f0.cell[cell::f_a1]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(d, TK::Deriv) & cx.tkind(inner, TK::Char) &
             be.eq(inner.cell[cell::imm], d.cell[cell::imm]) & cx.tkind(r, TK::Blank);
    }
    case RuleId::DeriveCharDifferent: {
      // The calculus's only side condition: the two character codes differ.
      CommittedRow d = cx.term(f0.cell[cell::f_a0]);
      CommittedRow inner = cx.term(d.cell[cell::child0]);
      CommittedRow r = cx.term(f0.cell[cell::f_a1]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(d, TK::Deriv) & cx.tkind(inner, TK::Char) &
             !be.eq(inner.cell[cell::imm], d.cell[cell::imm]) & cx.tkind(r, TK::Empty);
    }
    case RuleId::DeriveUnion: {
      CommittedRow d = cx.term(f0.cell[cell::f_a0]);
      CommittedRow u = cx.term(d.cell[cell::child0]);
      CommittedRow r = cx.term(f0.cell[cell::f_a1]);
      CommittedRow dp = cx.term(r.cell[cell::child0]);
      CommittedRow dq = cx.term(r.cell[cell::child1]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(d, TK::Deriv) & cx.tkind(u, TK::Union) &
             cx.tkind(r, TK::Union) & cx.tkind(dp, TK::Deriv) & cx.tkind(dq, TK::Deriv) &
             be.eq(dp.cell[cell::imm], d.cell[cell::imm]) &
             be.eq(dq.cell[cell::imm], d.cell[cell::imm]) &
             eqc(dp.cell[cell::child0], u.cell[cell::child0]) &
             eqc(dq.cell[cell::child0], u.cell[cell::child1]);
    }
    case RuleId::DeriveConcat: {
      CommittedRow d = cx.term(f0.cell[cell::f_a0]);
      CommittedRow pq = cx.term(d.cell[cell::child0]);
      CommittedRow r = cx.term(f0.cell[cell::f_a1]);
      CommittedRow a = cx.term(r.cell[cell::child0]);
      CommittedRow b = cx.term(r.cell[cell::child1]);
      CommittedRow dp = cx.term(a.cell[cell::child0]);
      CommittedRow ep = cx.term(b.cell[cell::child0]);
      CommittedRow dq = cx.term(b.cell[cell::child1]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(d, TK::Deriv) & cx.tkind(pq, TK::Concat) &
             cx.tkind(r, TK::Union) & cx.tkind(a, TK::Concat) & cx.tkind(b, TK::Concat) &
             cx.tkind(dp, TK::Deriv) & cx.tkind(ep, TK::Epsilon) & cx.tkind(dq, TK::Deriv) &
             eqc(a.cell[cell::child1], pq.cell[cell::child1]) &
             be.eq(dp.cell[cell::imm], d.cell[cell::imm]) &
             eqc(dp.cell[cell::child0], pq.cell[cell::child0]) &
             eqc(ep.cell[cell::child0], pq.cell[cell::child0]) &
             be.eq(dq.cell[cell::imm], d.cell[cell::imm]) &
             eqc(dq.cell[cell::child0], pq.cell[cell::child1]);
    }
    case RuleId::DeriveStar: {
      CommittedRow d = cx.term(f0.cell[cell::f_a0]);
      CommittedRow s = cx.term(d.cell[cell::child0]);
      CommittedRow r = cx.term(f0.cell[cell::f_a1]);
      CommittedRow dp = cx.term(r.cell[cell::child0]);
      return cx.fkind(f0, FK::Eq) & cx.tkind(d, TK::Deriv) & cx.tkind(s, TK::Star) &
             cx.tkind(r, TK::Concat) & cx.tkind(dp, TK::Deriv) &
             be.eq(dp.cell[cell::imm], d.cell[cell::imm]) &
             eqc(dp.cell[cell::child0], s.cell[cell::child0]) &
             eqc(r.cell[cell::child1], d.cell[cell::child0]);
    }

    case RuleId::MatchFinish:
      return cx.fkind(f1, FK::AgreeUpTo) & be.eq_const(f1.cell[cell::f_ctr], n) &
             cx.fkind(f0, FK::Eq) & eqc(f1.cell[cell::f_a0], f0.cell[cell::f_a0]) &
             eqc(f1.cell[cell::f_a1], f0.cell[cell::f_a1]);
    case RuleId::CoinductFinish:
      return cx.fkind(f1, FK::SyncUpTo) & be.eq_const(f1.cell[cell::f_ctr], n) &
             cx.fkind(f0, FK::Sync) & eqc(f1.cell[cell::f_str], f0.cell[cell::f_str]) &
             eqc(f1.cell[cell::f_a0], f0.cell[cell::f_a0]) &
             eqc(f1.cell[cell::f_a1], f0.cell[cell::f_a1]);
    case RuleId::AgreeInit: {
      CommittedRow ep = cx.term(f1.cell[cell::f_a0]);
      CommittedRow eq2 = cx.term(f1.cell[cell::f_a1]);
      return cx.fkind(f0, FK::AgreeUpTo) & be.eq_const(f0.cell[cell::f_ctr], 0) &
             cx.fkind(f1, FK::Eq) & cx.tkind(ep, TK::Epsilon) & cx.tkind(eq2, TK::Epsilon) &
             eqc(ep.cell[cell::child0], f0.cell[cell::f_a0]) &
             eqc(eq2.cell[cell::child0], f0.cell[cell::f_a1]);
    }
    case RuleId::AgreeStep: {
      CommittedRow dp = cx.term(f2.cell[cell::f_a0]);
      CommittedRow dq = cx.term(f2.cell[cell::f_a1]);
      return cx.fkind(f1, FK::AgreeUpTo) & cx.fkind(f0, FK::AgreeUpTo) &
             !be.ge_const(f1.cell[cell::f_ctr], n) &
             be.eq(f0.cell[cell::f_ctr], be.offset(f1.cell[cell::f_ctr], 1)) &
             eqc(f1.cell[cell::f_a0], f0.cell[cell::f_a0]) &
             eqc(f1.cell[cell::f_a1], f0.cell[cell::f_a1]) & cx.fkind(f2, FK::Eq) &
             cx.tkind(dp, TK::Deriv) & cx.tkind(dq, TK::Deriv) &
             be.eq(dp.cell[cell::imm], f1.cell[cell::f_ctr]) &
             be.eq(dq.cell[cell::imm], f1.cell[cell::f_ctr]) &
             eqc(dp.cell[cell::child0], f0.cell[cell::f_a0]) &
             eqc(dq.cell[cell::child0], f0.cell[cell::f_a1]);
    }
    case RuleId::SyncEmpty: {
      CommittedRow s = cx.str(f1.cell[cell::f_str]);
      return cx.fkind(f1, FK::Sync) & be.eq_const(s.cell[cell::s_height], 0) &
             cx.fkind(f0, FK::Eq) & eqc(f1.cell[cell::f_a0], f0.cell[cell::f_a0]) &
             eqc(f1.cell[cell::f_a1], f0.cell[cell::f_a1]);
    }
    case RuleId::SyncFold: {
      CommittedRow cs = cx.str(f0.cell[cell::f_str]);
      CommittedRow dp = cx.term(f1.cell[cell::f_a0]);
      CommittedRow dq = cx.term(f1.cell[cell::f_a1]);
      return cx.fkind(f1, FK::Sync) & cx.fkind(f0, FK::Sync) &
             eqc(cs.cell[cell::s_tail], f1.cell[cell::f_str]) &
             !be.eq_const(cs.cell[cell::s_height], 0) & cx.tkind(dp, TK::Deriv) &
             cx.tkind(dq, TK::Deriv) & be.eq(dp.cell[cell::imm], cs.cell[cell::s_imm]) &
             be.eq(dq.cell[cell::imm], cs.cell[cell::s_imm]) &
             eqc(dp.cell[cell::child0], f0.cell[cell::f_a0]) &
             eqc(dq.cell[cell::child0], f0.cell[cell::f_a1]);
    }
    case RuleId::SyncCycle: {
      CommittedRow s = cx.str(f0.cell[cell::f_str]);
      // An empty cycle string would let Sync(eps, p, q) be derived trivially.
      bool nonempty = !be.eq_const(s.cell[cell::s_height], 0);
      bool rev_p = check_reverse(be, params, f1.cell[cell::f_a0], f0.cell[cell::f_str],
                                 f0.cell[cell::f_a0]);
      bool rev_q = check_reverse(be, params, f2.cell[cell::f_a0], f0.cell[cell::f_str],
                                 f0.cell[cell::f_a1]);
      return cx.fkind(f0, FK::Sync) & cx.fkind(f1, FK::Eq) & cx.fkind(f2, FK::Eq) & nonempty &
             eqc(f1.cell[cell::f_a1], f0.cell[cell::f_a0]) &
             eqc(f2.cell[cell::f_a1], f0.cell[cell::f_a1]) & rev_p & rev_q;
    }
    case RuleId::EqualSync: {
      bool rev_p = check_reverse(be, params, f1.cell[cell::f_a0], f0.cell[cell::f_str],
                                 f0.cell[cell::f_a0]);
      bool rev_q = check_reverse(be, params, f1.cell[cell::f_a1], f0.cell[cell::f_str],
                                 f0.cell[cell::f_a1]);
      return cx.fkind(f0, FK::Sync) & cx.fkind(f1, FK::Eq) & rev_p & rev_q;
    }
    case RuleId::SyncInit: {
      CommittedRow ep = cx.term(f1.cell[cell::f_a0]);
      CommittedRow eq2 = cx.term(f1.cell[cell::f_a1]);
      bool rev_p = check_reverse(be, params, ep.cell[cell::child0], f0.cell[cell::f_str],
                                 f0.cell[cell::f_a0]);
      bool rev_q = check_reverse(be, params, eq2.cell[cell::child0], f0.cell[cell::f_str],
                                 f0.cell[cell::f_a1]);
      return cx.fkind(f0, FK::SyncUpTo) & be.eq_const(f0.cell[cell::f_ctr], 0) &
             cx.fkind(f1, FK::Eq) & cx.tkind(ep, TK::Epsilon) & cx.tkind(eq2, TK::Epsilon) &
             rev_p & rev_q;
    }
    case RuleId::SyncStep: {
      bool scan = sync_extend_scan(be, params, f2.cell[cell::f_str], f0.cell[cell::f_str],
                                   f1.cell[cell::f_ctr]);
      return cx.fkind(f1, FK::SyncUpTo) & cx.fkind(f0, FK::SyncUpTo) &
             !be.ge_const(f1.cell[cell::f_ctr], n) &
             be.eq(f0.cell[cell::f_ctr], be.offset(f1.cell[cell::f_ctr], 1)) &
             eqc(f1.cell[cell::f_str], f0.cell[cell::f_str]) &
             eqc(f1.cell[cell::f_a0], f0.cell[cell::f_a0]) &
             eqc(f1.cell[cell::f_a1], f0.cell[cell::f_a1]) & cx.fkind(f2, FK::Sync) &
             eqc(f2.cell[cell::f_a0], f0.cell[cell::f_a0]) &
             eqc(f2.cell[cell::f_a1], f0.cell[cell::f_a1]) & scan;
    }

    case RuleId::Assume:
      return cx.fkind(f0, FK::Neq);
    case RuleId::Contra:
      return cx.fkind(f1, FK::Neq) & cx.fkind(f2, FK::Eq) &
             eqc(f1.cell[cell::f_a0], f2.cell[cell::f_a0]) &
             eqc(f1.cell[cell::f_a1], f2.cell[cell::f_a1]) & cx.fkind(f0, FK::Bottom);
  }
  return false;
}

// ---------------------------------------------------------------------------

bool consistency_check(Backend& be, const ProofTables& t) {
  bool ok = true;
  const uint64_t n = t.params.n;
  for (uint64_t i = 0; i < t.terms.size(); ++i) {
    CommittedRow r = be.fetch_seq(TableId::Terms, i);
    bool imm_ok = !be.ge_const(r.cell[cell::imm], n);
    be.require(imm_ok, "term character code not below n");
    bool unary = be.eq_const(r.cell[cell::kind], tk(TermKind::Star)) |
                 be.eq_const(r.cell[cell::kind], tk(TermKind::Epsilon)) |
                 be.eq_const(r.cell[cell::kind], tk(TermKind::Deriv));
    bool binary = be.eq_const(r.cell[cell::kind], tk(TermKind::Concat)) |
                  be.eq_const(r.cell[cell::kind], tk(TermKind::Union));
    bool c0_lt = !be.ge_const(r.cell[cell::child0], i);
    bool c1_lt = !be.ge_const(r.cell[cell::child1], i);
    be.require((!unary & !binary) | c0_lt, "term child does not precede its row");
    be.require(!binary | c1_lt, "term child does not precede its row");
    ok = ok & imm_ok;
  }
  uint64_t terminators = 0;
  for (uint64_t i = 0; i < t.strings.size(); ++i) {
    CommittedRow r = be.fetch_seq(TableId::Strings, i);
    bool is_term = be.eq_const(r.cell[cell::s_height], 0);
    if (is_term) ++terminators;
    CommittedRow tail = be.fetch(TableId::Strings, r.cell[cell::s_tail]);
    bool tail_lt = !be.ge_const(r.cell[cell::s_tail], i);
    bool law = be.eq(r.cell[cell::s_height], be.offset(tail.cell[cell::s_height], 1));
    bool bounded = !be.ge_const(r.cell[cell::s_height], t.params.nu + 1);
    bool imm_ok = !be.ge_const(r.cell[cell::s_imm], n);
    be.require(is_term | tail_lt, "string tail does not precede its row");
    be.require(is_term | law, "string height law violated");
    be.require(bounded, "string height above nu");
    be.require(imm_ok, "string character code not below n");
  }
  be.require(terminators == 1, "expected exactly one null terminator");
  return be.verdict();
}

std::string ValidationReport::leakage_text() const {
  std::ostringstream out;
  out << "n=" << params.n << " chi=" << params.chi << " xi=" << params.xi
      << " pi=" << params.pi << " nu=" << params.nu << "\n";
  out << "category-counts:";
  for (size_t i = 0; i < category_counts.size(); ++i) out << " " << category_counts[i];
  out << "\n";
  return out.str();
}

ValidationReport validate(const ProofTables& t, const MuxConfig& mux, Backend& be) {
  using clock = std::chrono::steady_clock;
  ValidationReport rep;
  rep.params = t.params;
  rep.category_counts.assign(mux.num_categories, 0);

  be.bind(t);
  be.set_phase(Phase::RuleCheck);
  be.require(t.formulas.size() == t.params.pi && t.steps.size() == t.params.pi &&
                 t.terms.size() == t.params.chi && t.strings.size() == t.params.xi,
             "size parameters do not match table lengths");

  auto members = mux.members();
  const uint64_t pi = t.steps.size();
  std::vector<CommittedWord> d;
  d.reserve(pi);

  auto t0 = clock::now();
  for (uint64_t pc = 0; pc < pi; ++pc) {
    be.set_phase(Phase::RuleCheck);
    CommittedRow step = be.fetch_seq(TableId::Steps, pc);
    uint64_t cat = t.steps[pc].cat;  // public: drives instruction dispatch
    if (cat >= members.size()) {
      be.require(false, "step category out of range");
      continue;
    }
    ++rep.category_counts[cat];
    CommittedRow f0 = be.fetch(TableId::Formulas, step.cell[cell::p_res]);
    CommittedRow s1 = be.fetch(TableId::Steps, step.cell[cell::p_prem0]);
    CommittedRow s2 = be.fetch(TableId::Steps, step.cell[cell::p_prem1]);
    CommittedRow f1 = be.fetch(TableId::Formulas, s1.cell[cell::p_res]);
    CommittedRow f2 = be.fetch(TableId::Formulas, s2.cell[cell::p_res]);
    bool z = false;
    for (RuleId rule : members[cat]) z = z | checking_instr(rule, be, t.params, f0, f1, f2);
    be.require(z, "no checking instruction in the step's category accepted");
    if (cat != mux.assume_category()) {
      be.set_phase(Phase::Cycle);
      be.require(be.lt(s1.cell[cell::p_id], step.cell[cell::p_id]),
                 "premise step id not strictly lower");
      be.require(be.lt(s2.cell[cell::p_id], step.cell[cell::p_id]),
                 "premise step id not strictly lower");
    }
    d.push_back(step.cell[cell::p_id]);
  }
  auto t1 = clock::now();

  be.set_phase(Phase::Permutation);
  be.require(permute_check(be, d, pi), "step ids are not a permutation of 0..pi-1");
  uint64_t assume_steps = rep.category_counts.size() > mux.assume_category()
                              ? rep.category_counts[mux.assume_category()]
                              : 0;
  uint64_t contra_steps = rep.category_counts.size() > mux.contra_category()
                              ? rep.category_counts[mux.contra_category()]
                              : 0;
  be.require(assume_steps == 1, "expected exactly one Assume step");
  be.require(contra_steps == 1, "expected exactly one Contra step");
  auto t2 = clock::now();

  be.set_phase(Phase::Consistency);
  consistency_check(be, t);
  auto t3 = clock::now();

  rep.ok = be.verdict();
  rep.first_failure = be.first_failure();
  rep.rule_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rep.permutation_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  rep.consistency_ms = std::chrono::duration<double, std::milli>(t3 - t2).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Formula-level mirror of multiplexed validation, for mutation soundness.

bool semantic_recheck(const ProofTables& t) {
  try {
    // Reconstruct each step's conclusion and premise conclusions directly
    // from the rows; stored rule tags are deliberately not trusted (the VM
    // never reads them either).
    std::vector<const Formula*> concl(t.steps.size());
    std::vector<const Formula*> by_row(t.formulas.size(), nullptr);
    auto formula_of = [&](uint64_t step_idx) -> const Formula* {
      const StepRow& s = t.steps[step_idx];
      if (s.res >= by_row.size()) throw LoadError("recheck: bad result index");
      return by_row[s.res];
    };

    struct RowLift {
      const ProofTables& t;
      std::vector<const Term*> terms;
      RowLift(const ProofTables& tt) : t(tt), terms(tt.terms.size(), nullptr) {}
      const Term* term(uint64_t idx) {
        if (idx >= t.terms.size()) throw LoadError("recheck: bad term index");
        if (terms[idx]) return terms[idx];
        const TermRow& r = t.terms[idx];
        bool unary = r.kind == static_cast<uint64_t>(TermKind::Star) ||
                     r.kind == static_cast<uint64_t>(TermKind::Epsilon) ||
                     r.kind == static_cast<uint64_t>(TermKind::Deriv);
        bool binary = r.kind == static_cast<uint64_t>(TermKind::Concat) ||
                      r.kind == static_cast<uint64_t>(TermKind::Union);
        if (((unary || binary) && r.child0 >= idx) || (binary && r.child1 >= idx))
          throw LoadError("recheck: term order");
        const Term* out;
        switch (static_cast<TermKind>(r.kind)) {
          case TermKind::Empty: out = mk_empty(); break;
          case TermKind::Blank: out = mk_blank(); break;
          case TermKind::Char: out = mk_char(static_cast<CharCode>(r.imm)); break;
          case TermKind::Star: out = mk_star(term(r.child0)); break;
          case TermKind::Concat: out = mk_concat(term(r.child0), term(r.child1)); break;
          case TermKind::Union: out = mk_union(term(r.child0), term(r.child1)); break;
          case TermKind::Epsilon: out = mk_epsilon(term(r.child0)); break;
          case TermKind::Deriv: out = mk_deriv(static_cast<CharCode>(r.imm), term(r.child0)); break;
          default: throw LoadError("recheck: bad term kind");
        }
        terms[idx] = out;
        return out;
      }
      Str str(uint64_t idx) {
        Str out;
        size_t guard = t.strings.size() + 1;
        uint64_t cur = idx;
        while (guard--) {
          if (cur >= t.strings.size()) throw LoadError("recheck: bad string index");
          const StringRow& r = t.strings[cur];
          if (r.height == 0) return out;
          out.push_back(static_cast<CharCode>(r.imm));
          cur = r.tail;
        }
        throw LoadError("recheck: string cycle");
      }
    } lifter(t);

    for (size_t i = 0; i < t.formulas.size(); ++i) {
      const FormulaRow& r = t.formulas[i];
      switch (static_cast<FormulaKind>(r.kind)) {
        case FormulaKind::Eq: by_row[i] = f_eq(lifter.term(r.arg0), lifter.term(r.arg1)); break;
        case FormulaKind::Neq: by_row[i] = f_neq(lifter.term(r.arg0), lifter.term(r.arg1)); break;
        case FormulaKind::Bottom: by_row[i] = f_bottom(); break;
        case FormulaKind::Sync:
          by_row[i] = f_sync(lifter.str(r.str), lifter.term(r.arg0), lifter.term(r.arg1));
          break;
        case FormulaKind::AgreeUpTo:
          by_row[i] = f_agree_up_to(static_cast<uint32_t>(r.imm), lifter.term(r.arg0),
                                    lifter.term(r.arg1));
          break;
        case FormulaKind::SyncUpTo:
          by_row[i] = f_sync_up_to(static_cast<uint32_t>(r.imm), lifter.str(r.str),
                                   lifter.term(r.arg0), lifter.term(r.arg1));
          break;
        default:
          return false;
      }
    }
    for (size_t i = 0; i < t.steps.size(); ++i) concl[i] = formula_of(i);

    uint32_t n = static_cast<uint32_t>(t.params.n);
    auto cats = t.mux.members();
    for (size_t i = 0; i < t.steps.size(); ++i) {
      const StepRow& s = t.steps[i];
      if (s.cat >= cats.size()) return false;
      if (s.prem0 >= concl.size() || s.prem1 >= concl.size()) return false;
      const Formula* f1 = concl[s.prem0];
      const Formula* f2 = concl[s.prem1];
      bool any = false;
      for (RuleId r : cats[s.cat])
        if (check_schema(r, concl[i], f1, f2, n)) {
          any = true;
          break;
        }
      if (!any) return false;
      if (s.cat != t.mux.assume_category()) {
        if (t.steps[s.prem0].step_id >= s.step_id) return false;
        if (t.steps[s.prem1].step_id >= s.step_id) return false;
      }
    }
    return true;
  } catch (const LoadError&) {
    return false;
  } catch (const ParseError&) {
    return false;
  }
}

}  // namespace crepe
