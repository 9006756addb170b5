#include "crepe/proof_gen.hpp"

#include <cassert>
#include <unordered_map>
#include <vector>

namespace crepe {

namespace {

StepPtr refl(const Term* t) { return make_step(RuleId::Refl, f_eq(t, t)); }

StepPtr symm(const StepPtr& s) {
  const Formula* f = s->conclusion;
  assert(f->kind == FormulaKind::Eq);
  return make_step(RuleId::Symm, f_eq(f->rhs, f->lhs), s);
}

StepPtr trans(const StepPtr& a, const StepPtr& b) {
  const Formula *fa = a->conclusion, *fb = b->conclusion;
  assert(fa->kind == FormulaKind::Eq && fb->kind == FormulaKind::Eq);
  assert(fa->rhs == fb->lhs);
  return make_step(RuleId::Trans, f_eq(fa->lhs, fb->rhs), a, b);
}

// Lifts an equality through a unary constructor (Star, Epsilon, Deriv).
StepPtr fun_cong1(TermKind k, CharCode imm, const StepPtr& s) {
  const Formula* f = s->conclusion;
  const Term *l, *r;
  switch (k) {
    case TermKind::Star: l = mk_star(f->lhs); r = mk_star(f->rhs); break;
    case TermKind::Epsilon: l = mk_epsilon(f->lhs); r = mk_epsilon(f->rhs); break;
    case TermKind::Deriv: l = mk_deriv(imm, f->lhs); r = mk_deriv(imm, f->rhs); break;
    default: assert(false); return nullptr;
  }
  return make_step(RuleId::FunCong1, f_eq(l, r), s);
}

// Lifts two equalities through a binary constructor (Concat, Union).
StepPtr fun_cong2(TermKind k, const StepPtr& a, const StepPtr& b) {
  const Formula *fa = a->conclusion, *fb = b->conclusion;
  const Term *l, *r;
  if (k == TermKind::Concat) {
    l = mk_concat(fa->lhs, fb->lhs);
    r = mk_concat(fa->rhs, fb->rhs);
  } else {
    l = mk_union(fa->lhs, fb->lhs);
    r = mk_union(fa->rhs, fb->rhs);
  }
  return make_step(RuleId::FunCong2, f_eq(l, r), a, b);
}

// Accumulates an equality proof origin = cur as a Trans chain, skipping
// reflexive links.
class EqChain {
 public:
  explicit EqChain(const Term* origin) : origin_(origin), cur_(origin) {}

  const Term* cur() const { return cur_; }

  void extend(const StepPtr& s) {
    const Formula* f = s->conclusion;
    assert(f->kind == FormulaKind::Eq && f->lhs == cur_);
    if (f->lhs == f->rhs) return;
    cur_ = f->rhs;
    acc_ = acc_ ? trans(acc_, s) : s;
  }

  // Proof of Eq(origin, cur); a Refl step when no link was added.
  StepPtr finish() const { return acc_ ? acc_ : refl(origin_); }
  bool trivial() const { return acc_ == nullptr; }
  StepPtr acc() const { return acc_; }

 private:
  const Term* origin_;
  const Term* cur_;
  StepPtr acc_;
};

// One-step unfolding of Deriv(c, p) at the head, p a regular expression.
StepPtr derive_head(CharCode c, const Term* p) {
  const Term* lhs = mk_deriv(c, p);
  switch (p->kind) {
    case TermKind::Empty:
      return make_step(RuleId::DeriveEmpty, f_eq(lhs, mk_empty()));
    case TermKind::Blank:
      return make_step(RuleId::DeriveBlank, f_eq(lhs, mk_empty()));
    case TermKind::Char:
      return p->imm == c ? make_step(RuleId::DeriveCharSame, f_eq(lhs, mk_blank()))
                         : make_step(RuleId::DeriveCharDifferent, f_eq(lhs, mk_empty()));
    case TermKind::Union:
      return make_step(RuleId::DeriveUnion,
                       f_eq(lhs, mk_union(mk_deriv(c, p->left), mk_deriv(c, p->right))));
    case TermKind::Concat:
      return make_step(
          RuleId::DeriveConcat,
          f_eq(lhs, mk_union(mk_concat(mk_deriv(c, p->left), p->right),
                             mk_concat(mk_epsilon(p->left), mk_deriv(c, p->right)))));
    case TermKind::Star:
      return make_step(RuleId::DeriveStar,
                       f_eq(lhs, mk_concat(mk_deriv(c, p->left), p)));
    default:
      assert(false && "derive_head on a non-regular head");
      return nullptr;
  }
}

}  // namespace

StepPtr epsilon_with_proof(const Term* p) {
  assert(p->is_regex());
  const Term* lhs = mk_epsilon(p);
  switch (p->kind) {
    case TermKind::Empty:
      return make_step(RuleId::EpsilonEmpty, f_eq(lhs, mk_empty()));
    case TermKind::Blank:
      return make_step(RuleId::EpsilonBlank, f_eq(lhs, mk_blank()));
    case TermKind::Char:
      return make_step(RuleId::EpsilonChar, f_eq(lhs, mk_empty()));
    case TermKind::Star:
      return make_step(RuleId::EpsilonStar, f_eq(lhs, mk_blank()));
    case TermKind::Union: {
      StepPtr l = epsilon_with_proof(p->left);
      if (l->conclusion->rhs->kind == TermKind::Blank)
        return make_step(RuleId::EpsilonUnionPos1, f_eq(lhs, mk_blank()), l);
      StepPtr r = epsilon_with_proof(p->right);
      if (r->conclusion->rhs->kind == TermKind::Blank)
        return make_step(RuleId::EpsilonUnionPos2, f_eq(lhs, mk_blank()), r);
      return make_step(RuleId::EpsilonUnionNeg, f_eq(lhs, mk_empty()), l, r);
    }
    case TermKind::Concat: {
      StepPtr l = epsilon_with_proof(p->left);
      if (l->conclusion->rhs->kind == TermKind::Empty)
        return make_step(RuleId::EpsilonConcatNeg1, f_eq(lhs, mk_empty()), l);
      StepPtr r = epsilon_with_proof(p->right);
      if (r->conclusion->rhs->kind == TermKind::Empty)
        return make_step(RuleId::EpsilonConcatNeg2, f_eq(lhs, mk_empty()), r);
      return make_step(RuleId::EpsilonConcatPos, f_eq(lhs, mk_blank()), l, r);
    }
    default:
      assert(false && "epsilon_with_proof on a non-regular term");
      return nullptr;
  }
}

std::pair<const Term*, StepPtr> reduce_with_proof(const Term* t) {
  if (t->pure) return {t, refl(t)};
  switch (t->kind) {
    case TermKind::Star: {
      auto [l, pl] = reduce_with_proof(t->left);
      return {mk_star(l), fun_cong1(TermKind::Star, 0, pl)};
    }
    case TermKind::Concat:
    case TermKind::Union: {
      auto [l, pl] = reduce_with_proof(t->left);
      auto [r, pr] = reduce_with_proof(t->right);
      return {t->kind == TermKind::Concat ? mk_concat(l, r) : mk_union(l, r),
              fun_cong2(t->kind, pl, pr)};
    }
    case TermKind::Epsilon: {
      auto [l, pl] = reduce_with_proof(t->left);
      EqChain chain(t);
      if (l != t->left) chain.extend(fun_cong1(TermKind::Epsilon, 0, pl));
      StepPtr unf = epsilon_with_proof(l);
      chain.extend(unf);
      return {unf->conclusion->rhs, chain.finish()};
    }
    case TermKind::Deriv: {
      auto [l, pl] = reduce_with_proof(t->left);
      EqChain chain(t);
      if (l != t->left) chain.extend(fun_cong1(TermKind::Deriv, t->imm, pl));
      StepPtr head = derive_head(t->imm, l);
      chain.extend(head);
      const Term* rhs = head->conclusion->rhs;
      auto [out, pr] = reduce_with_proof(rhs);
      if (out != rhs) chain.extend(pr);
      return {out, chain.finish()};
    }
    default:
      return {t, refl(t)};
  }
}

// ---------------------------------------------------------------------------
// Normalization with proof. Mirrors normalize() case for case; the tests
// keep the two in lock-step.

namespace {

std::pair<const Term*, StepPtr> insert_union_proof(const Term* m, const Term* u) {
  const Term* start = mk_union(m, u);
  if (m->kind == TermKind::Empty) {
    EqChain chain(start);
    chain.extend(make_step(RuleId::UnionComm, f_eq(start, mk_union(u, m))));
    chain.extend(make_step(RuleId::UnionEmpty, f_eq(mk_union(u, m), u)));
    return {u, chain.finish()};
  }
  if (u->kind == TermKind::Empty)
    return {m, make_step(RuleId::UnionEmpty, f_eq(start, m))};
  if (u->kind == TermKind::Union) {
    const Term* h = u->left;
    const Term* rest = u->right;
    if (m == h) {
      EqChain chain(start);
      chain.extend(make_step(RuleId::UnionAssoc,
                             f_eq(start, mk_union(mk_union(m, h), rest))));
      StepPtr self = make_step(RuleId::UnionSelf, f_eq(mk_union(m, m), m));
      chain.extend(fun_cong2(TermKind::Union, self, refl(rest)));
      return {u, chain.finish()};
    }
    if (term_less(m, h)) return {start, refl(start)};
    EqChain chain(start);
    chain.extend(make_step(RuleId::UnionAssoc, f_eq(start, mk_union(mk_union(m, h), rest))));
    StepPtr comm = make_step(RuleId::UnionComm, f_eq(mk_union(m, h), mk_union(h, m)));
    chain.extend(fun_cong2(TermKind::Union, comm, refl(rest)));
    chain.extend(symm(make_step(
        RuleId::UnionAssoc,
        f_eq(mk_union(h, mk_union(m, rest)), mk_union(mk_union(h, m), rest)))));
    auto [w, pw] = insert_union_proof(m, rest);
    if (w != mk_union(m, rest)) chain.extend(fun_cong2(TermKind::Union, refl(h), pw));
    return {mk_union(h, w), chain.finish()};
  }
  if (m == u) return {m, make_step(RuleId::UnionSelf, f_eq(start, m))};
  if (term_less(m, u)) return {start, refl(start)};
  return {mk_union(u, m), make_step(RuleId::UnionComm, f_eq(start, mk_union(u, m)))};
}

std::pair<const Term*, StepPtr> union_nf_proof(const Term* a, const Term* b) {
  if (a->kind == TermKind::Union) {
    const Term* h = a->left;
    const Term* rest = a->right;
    const Term* start = mk_union(a, b);
    EqChain chain(start);
    chain.extend(symm(make_step(
        RuleId::UnionAssoc, f_eq(mk_union(h, mk_union(rest, b)), start))));
    auto [w, pw] = union_nf_proof(rest, b);
    if (w != mk_union(rest, b)) chain.extend(fun_cong2(TermKind::Union, refl(h), pw));
    auto [out, pi] = insert_union_proof(h, w);
    if (out != mk_union(h, w)) chain.extend(pi);
    return {out, chain.finish()};
  }
  return insert_union_proof(a, b);
}

std::pair<const Term*, StepPtr> concat_nf_proof(const Term* a, const Term* b) {
  const Term* start = mk_concat(a, b);
  if (a->kind == TermKind::Empty)
    return {mk_empty(), make_step(RuleId::ConcatEmptyL, f_eq(start, mk_empty()))};
  if (b->kind == TermKind::Empty)
    return {mk_empty(), make_step(RuleId::ConcatEmptyR, f_eq(start, mk_empty()))};
  if (a->kind == TermKind::Blank)
    return {b, make_step(RuleId::ConcatBlankL, f_eq(start, b))};
  if (b->kind == TermKind::Blank)
    return {a, make_step(RuleId::ConcatBlankR, f_eq(start, a))};
  if (a->kind == TermKind::Concat) {
    const Term* u = a->left;
    const Term* v = a->right;
    EqChain chain(start);
    chain.extend(symm(make_step(RuleId::ConcatAssoc,
                                f_eq(mk_concat(u, mk_concat(v, b)), start))));
    auto [w, pw] = concat_nf_proof(v, b);
    if (w != mk_concat(v, b)) chain.extend(fun_cong2(TermKind::Concat, refl(u), pw));
    auto [out, pc] = concat_nf_proof(u, w);
    if (out != mk_concat(u, w)) chain.extend(pc);
    return {out, chain.finish()};
  }
  return {start, refl(start)};
}

}  // namespace

std::pair<const Term*, StepPtr> normalize_with_proof(const Term* p) {
  assert(p->is_regex());
  switch (p->kind) {
    case TermKind::Empty:
    case TermKind::Blank:
    case TermKind::Char: return {p, refl(p)};
    case TermKind::Star: {
      auto [l, pl] = normalize_with_proof(p->left);
      if (l == p->left) return {p, refl(p)};
      return {mk_star(l), fun_cong1(TermKind::Star, 0, pl)};
    }
    case TermKind::Concat:
    case TermKind::Union: {
      auto [l, pl] = normalize_with_proof(p->left);
      auto [r, pr] = normalize_with_proof(p->right);
      EqChain chain(p);
      if (l != p->left || r != p->right) chain.extend(fun_cong2(p->kind, pl, pr));
      auto [out, pn] = p->kind == TermKind::Concat ? concat_nf_proof(l, r)
                                                   : union_nf_proof(l, r);
      if (out != chain.cur()) chain.extend(pn);
      return {out, chain.finish()};
    }
    default:
      assert(false && "normalize_with_proof on a non-regular term");
      return {p, refl(p)};
  }
}

// ---------------------------------------------------------------------------

StepPtr subst(StepPtr core, StepPtr lhs_eq, StepPtr rhs_eq) {
  const Formula* f = core->conclusion;
  if (f->kind != FormulaKind::Eq && f->kind != FormulaKind::Neq &&
      f->kind != FormulaKind::Sync)
    throw std::invalid_argument("subst expects a binary-predicate conclusion");

  auto oriented = [](StepPtr eq, const Term* slot) -> StepPtr {
    const Formula* e = eq->conclusion;
    if (e->kind != FormulaKind::Eq)
      throw std::invalid_argument("subst premise is not an equality");
    if (e->lhs != slot && e->rhs != slot)
      throw std::invalid_argument("subst equality does not mention the slot");
    if (e->lhs == e->rhs) return nullptr;  // reflexive: nothing to do
    return e->lhs == slot ? eq : symm(eq);
  };

  if (lhs_eq) {
    if (StepPtr e = oriented(std::move(lhs_eq), f->lhs)) {
      const Formula* ef = e->conclusion;
      const Formula* out =
          f->kind == FormulaKind::Eq    ? f_eq(ef->rhs, f->rhs)
          : f->kind == FormulaKind::Neq ? f_neq(ef->rhs, f->rhs)
                                        : f_sync(f->str, ef->rhs, f->rhs);
      core = make_step(RuleId::PredCongL, out, core, e);
      f = core->conclusion;
    }
  }
  if (rhs_eq) {
    if (StepPtr e = oriented(std::move(rhs_eq), f->rhs)) {
      const Formula* ef = e->conclusion;
      const Formula* out =
          f->kind == FormulaKind::Eq    ? f_eq(f->lhs, ef->rhs)
          : f->kind == FormulaKind::Neq ? f_neq(f->lhs, ef->rhs)
                                        : f_sync(f->str, f->lhs, ef->rhs);
      core = make_step(RuleId::PredCongR, out, core, e);
    }
  }
  return core;
}

StepPtr bookend(StepPtr eq_proof) {
  const Formula* f = eq_proof->conclusion;
  assert(f->kind == FormulaKind::Eq);
  StepPtr assume = make_step(RuleId::Assume, f_neq(f->lhs, f->rhs));
  return make_step(RuleId::Contra, f_bottom(), assume, std::move(eq_proof));
}

// ---------------------------------------------------------------------------
// Proof search. Follows the same recursion as the equivalence check; the
// result of each call is either an equality over the call's raw inputs or a
// Sync formula rooted at some ancestor's normalized pair (when a derivative
// cycle to that ancestor was found below).

namespace {

struct PairHash {
  size_t operator()(const std::pair<const Term*, const Term*>& p) const {
    return reinterpret_cast<size_t>(p.first) * 0x9e3779b97f4a7c15ULL ^
           reinterpret_cast<size_t>(p.second);
  }
};

class ProofSearch {
 public:
  ProofSearch(const Alphabet& alphabet, GenOptions opts)
      : alphabet_(alphabet), opts_(opts) {}

  StepPtr run(const Term* p, const Term* q) {
    Outcome out = gen(p, q, nullptr, nullptr, 0);
    assert(out.is_eq);
    return out.step;
  }

 private:
  struct Frame {
    const Term* pn;
    const Term* qn;
    CharCode via = 0;  // character leading from the parent frame to this one
    StepPtr link_p;    // Eq(Deriv(via, parent.pn), pn); null at depth 0
    StepPtr link_q;
  };

  struct Outcome {
    StepPtr step;
    bool is_eq;
    size_t frame = 0;  // SYNC outcomes: ancestor frame the Sync is rooted at
  };

  // Equality proof for the derivative chain from frame i down to frame j:
  // Eq(chain, frames_[j].pn). Null when i == j (the chain is pn itself).
  StepPtr chain_eq(size_t i, size_t j, bool left) const {
    StepPtr acc;
    for (size_t l = i + 1; l <= j; ++l) {
      const Frame& fr = frames_[l];
      StepPtr link = left ? fr.link_p : fr.link_q;
      acc = acc ? trans(fun_cong1(TermKind::Deriv, fr.via, acc), link) : link;
    }
    return acc;
  }

  Str path_from(size_t i) const {
    Str s;
    for (size_t l = i + 1; l < frames_.size(); ++l) s.push_back(frames_[l].via);
    return s;
  }

  Outcome gen(const Term* p_raw, const Term* q_raw, StepPtr pre_p, StepPtr pre_q,
              CharCode via) {
    if (++calls_ > opts_.max_calls)
      throw BudgetExceeded("proof generation call budget exceeded");

    if (p_raw == q_raw) return {refl(p_raw), true};

    auto [pn, psi_p] = normalize_with_proof(p_raw);
    auto [qn, psi_q] = normalize_with_proof(q_raw);

    if (pn == qn) {
      StepPtr out = subst(refl(pn), psi_p, psi_q);
      return {out, true};
    }

    if (auto it = frame_index_.find({pn, qn}); it != frame_index_.end()) {
      size_t i = it->second;
      // Entry link for the current (unpushed) level.
      StepPtr link_p = compose_link(pre_p, psi_p, p_raw, pn);
      StepPtr link_q = compose_link(pre_q, psi_q, q_raw, qn);
      Str u = path_from(i);
      u.push_back(via);
      StepPtr chain_p = extend_chain(chain_eq(i, frames_.size() - 1, true), via, link_p);
      StepPtr chain_q = extend_chain(chain_eq(i, frames_.size() - 1, false), via, link_q);
      StepPtr cyc = make_step(RuleId::SyncCycle, f_sync(u, frames_[i].pn, frames_[i].qn),
                              chain_p, chain_q);
      return {cyc, false, i};
    }

    // Nullability agreement; a mismatch refutes equivalence outright.
    StepPtr psi_1 = epsilon_with_proof(pn);
    StepPtr psi_2 = epsilon_with_proof(qn);
    const Term* e1 = psi_1->conclusion->rhs;
    const Term* e2 = psi_2->conclusion->rhs;
    if (e1 != e2)
      throw NotEquivalent("the inputs disagree on nullability along some derivative path");
    StepPtr psi_e = subst(refl(e1), psi_1, psi_2);  // Eq(E(pn), E(qn))

    Frame frame{pn, qn, via, compose_link(pre_p, psi_p, p_raw, pn),
                compose_link(pre_q, psi_q, q_raw, qn)};
    size_t depth = frames_.size();
    frames_.push_back(frame);
    frame_index_[{pn, qn}] = depth;

    uint32_t n = static_cast<uint32_t>(alphabet_.size());
    std::vector<Outcome> child(n);
    std::vector<StepPtr> red_p(n), red_q(n);
    for (CharCode c = 0; c < n; ++c) {
      auto [pc, r3] = reduce_with_proof(mk_deriv(c, pn));
      auto [qc, r4] = reduce_with_proof(mk_deriv(c, qn));
      red_p[c] = r3;
      red_q[c] = r4;
      child[c] = gen(pc, qc, r3, r4, c);
    }

    bool all_eq = true;
    size_t best = depth;
    for (const Outcome& o : child) {
      if (!o.is_eq) {
        all_eq = false;
        best = std::min(best, o.frame);
      }
    }

    Outcome result;
    if (all_eq) {
      // Every branch closed with an equality: use the split Match chain.
      StepPtr acc = make_step(RuleId::AgreeInit, f_agree_up_to(0, pn, qn), psi_e);
      for (CharCode c = 0; c < n; ++c) {
        EqChain d(mk_deriv(c, pn));
        d.extend(red_p[c]);
        d.extend(child[c].step);
        d.extend(symm(red_q[c]));
        acc = make_step(RuleId::AgreeStep, f_agree_up_to(c + 1, pn, qn), acc, d.finish());
      }
      StepPtr closed = make_step(RuleId::MatchFinish, f_eq(pn, qn), acc);
      result = {subst(closed, psi_p, psi_q), true};
    } else {
      // The split Coinduction chain, rooted at the shallowest frame any
      // descendant cycle reaches.
      Str w = path_from(best);
      const Term* root_p = frames_[best].pn;
      const Term* root_q = frames_[best].qn;
      StepPtr base_p = chain_eq(best, depth, true);   // null when best == depth
      StepPtr base_q = chain_eq(best, depth, false);

      StepPtr eps_prem = psi_e;
      if (best != depth) {
        EqChain chain(mk_epsilon(chain_term(w, root_p)));
        chain.extend(fun_cong1(TermKind::Epsilon, 0, base_p));
        chain.extend(psi_e);
        chain.extend(symm(fun_cong1(TermKind::Epsilon, 0, base_q)));
        eps_prem = chain.finish();
      }
      StepPtr acc = make_step(RuleId::SyncInit, f_sync_up_to(0, w, root_p, root_q), eps_prem);

      for (CharCode c = 0; c < n; ++c) {
        Str wc = w;
        wc.push_back(c);
        StepPtr prem;
        if (child[c].is_eq) {
          EqChain d(chain_term(wc, root_p));
          if (base_p) d.extend(fun_cong1(TermKind::Deriv, c, base_p));
          d.extend(red_p[c]);
          d.extend(child[c].step);
          d.extend(symm(red_q[c]));
          if (base_q) d.extend(symm(fun_cong1(TermKind::Deriv, c, base_q)));
          prem = make_step(RuleId::EqualSync, f_sync(wc, root_p, root_q), d.finish());
        } else {
          prem = reroot(child[c], best);
        }
        acc = make_step(RuleId::SyncStep, f_sync_up_to(c + 1, w, root_p, root_q), acc, prem);
      }
      StepPtr closed = make_step(RuleId::CoinductFinish, f_sync(w, root_p, root_q), acc);

      if (best == depth) {
        StepPtr eq = make_step(RuleId::SyncEmpty, f_eq(pn, qn), closed);
        result = {subst(eq, psi_p, psi_q), true};
      } else {
        result = {closed, false, best};
      }
    }

    frame_index_.erase({pn, qn});
    frames_.pop_back();
    return result;
  }

  // Moves a Sync rooted at frames_[o.frame] down to the (shallower) frame
  // `target`: substitute the rooted pair with the derivative chain from
  // `target`, then fold the chain back character by character.
  StepPtr reroot(const Outcome& o, size_t target) {
    size_t j = o.frame;
    if (j == target) return o.step;
    StepPtr chain_p = chain_eq(target, j, true);
    StepPtr chain_q = chain_eq(target, j, false);
    StepPtr s = subst(o.step, chain_p, chain_q);
    Str t = s->conclusion->str;
    for (size_t l = j; l > target; --l) {
      // Peel Deriv(via_l, .) off both sides of the Sync.
      Str prefix;
      for (size_t m = target + 1; m < l; ++m) prefix.push_back(frames_[m].via);
      const Term* tp = chain_term(prefix, frames_[target].pn);
      const Term* tq = chain_term(prefix, frames_[target].qn);
      Str folded;
      folded.push_back(frames_[l].via);
      folded.insert(folded.end(), t.begin(), t.end());
      s = make_step(RuleId::SyncFold, f_sync(folded, tp, tq), s);
      t = folded;
    }
    return s;
  }

  static StepPtr compose_link(const StepPtr& pre, const StepPtr& psi_norm,
                              const Term* raw, const Term* next) {
    if (!pre) return nullptr;  // depth 0
    return raw == next ? pre : trans(pre, psi_norm);
  }

  static StepPtr extend_chain(StepPtr acc, CharCode via, const StepPtr& link) {
    return acc ? trans(fun_cong1(TermKind::Deriv, via, acc), link) : link;
  }

  const Alphabet& alphabet_;
  GenOptions opts_;
  uint64_t calls_ = 0;
  std::vector<Frame> frames_;
  std::unordered_map<std::pair<const Term*, const Term*>, size_t, PairHash> frame_index_;
};

}  // namespace

StepPtr proof_gen(const Term* p, const Term* q, const Alphabet& alphabet, GenOptions opts) {
  if (!p->is_regex() || !q->is_regex())
    throw std::invalid_argument("proof_gen expects regular expressions");
  return ProofSearch(alphabet, opts).run(p, q);
}

// ---------------------------------------------------------------------------
// Post-processing.

namespace {

std::vector<StepPtr> topo_shared(const StepPtr& root) {
  std::vector<StepPtr> order;
  std::unordered_map<ProofStep*, bool> seen;
  std::vector<std::pair<StepPtr, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(node);
      continue;
    }
    if (seen.count(node.get())) continue;
    seen.emplace(node.get(), true);
    stack.push_back({node, true});
    if (node->prem1) stack.push_back({node->prem1, false});
    if (node->prem0) stack.push_back({node->prem0, false});
  }
  return order;
}

uint64_t sat_add(uint64_t a, uint64_t b) {
  uint64_t s = a + b;
  return s < a ? UINT64_MAX : s;
}

}  // namespace

StepPtr dedup_and_prune(StepPtr root) {
  for (;;) {
    auto order = topo_shared(root);
    std::unordered_map<ProofStep*, uint64_t> size;
    std::unordered_map<const Formula*, StepPtr> best;
    for (const StepPtr& s : order) {
      uint64_t sz = 1;
      if (s->prem0) sz = sat_add(sz, size[s->prem0.get()]);
      if (s->prem1) sz = sat_add(sz, size[s->prem1.get()]);
      size[s.get()] = sz;
      auto [it, fresh] = best.emplace(s->conclusion, s);
      if (!fresh && sz < size[it->second.get()]) it->second = s;
    }
    bool changed = false;
    for (const StepPtr& s : order) {
      if (s->prem0) {
        const StepPtr& rep = best.at(s->prem0->conclusion);
        if (rep != s->prem0) {
          s->prem0 = rep;
          changed = true;
        }
      }
      if (s->prem1) {
        const StepPtr& rep = best.at(s->prem1->conclusion);
        if (rep != s->prem1) {
          s->prem1 = rep;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  // Unreachable steps are dropped implicitly: nothing references them.
  return root;
}

}  // namespace crepe
