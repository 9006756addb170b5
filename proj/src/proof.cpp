#include "crepe/proof.hpp"

#include <unordered_map>
#include <unordered_set>

#include "crepe/regex.hpp"

namespace crepe {

namespace {

struct RuleInfo {
  RuleId id;
  const char* name;
  uint32_t arity;
};

constexpr RuleInfo kRules[] = {
    {RuleId::MatchFinish, "MatchFinish", 1},
    {RuleId::CoinductFinish, "CoinductFinish", 1},
    {RuleId::SyncCycle, "SyncCycle", 2},
    {RuleId::SyncFold, "SyncFold", 1},
    {RuleId::EqualSync, "EqualSync", 1},
    {RuleId::SyncEmpty, "SyncEmpty", 1},
    {RuleId::AgreeInit, "AgreeInit", 1},
    {RuleId::AgreeStep, "AgreeStep", 2},
    {RuleId::SyncInit, "SyncInit", 1},
    {RuleId::SyncStep, "SyncStep", 2},
    {RuleId::UnionAssoc, "UnionAssoc", 0},
    {RuleId::UnionComm, "UnionComm", 0},
    {RuleId::UnionEmpty, "UnionEmpty", 0},
    {RuleId::UnionSelf, "UnionSelf", 0},
    {RuleId::ConcatAssoc, "ConcatAssoc", 0},
    {RuleId::ConcatBlankL, "ConcatBlankL", 0},
    {RuleId::ConcatBlankR, "ConcatBlankR", 0},
    {RuleId::ConcatEmptyL, "ConcatEmptyL", 0},
    {RuleId::ConcatEmptyR, "ConcatEmptyR", 0},
    {RuleId::Refl, "Refl", 0},
    {RuleId::Symm, "Symm", 1},
    {RuleId::Trans, "Trans", 2},
    {RuleId::PredCongL, "PredCongL", 2},
    {RuleId::PredCongR, "PredCongR", 2},
    {RuleId::FunCong1, "FunCong1", 1},
    {RuleId::FunCong2, "FunCong2", 2},
    {RuleId::EpsilonEmpty, "EpsilonEmpty", 0},
    {RuleId::EpsilonBlank, "EpsilonBlank", 0},
    {RuleId::EpsilonChar, "EpsilonChar", 0},
    {RuleId::EpsilonUnionPos1, "EpsilonUnionPos1", 1},
    {RuleId::EpsilonUnionPos2, "EpsilonUnionPos2", 1},
    {RuleId::EpsilonUnionNeg, "EpsilonUnionNeg", 2},
    {RuleId::EpsilonConcatPos, "EpsilonConcatPos", 2},
    {RuleId::EpsilonConcatNeg1, "EpsilonConcatNeg1", 1},
    {RuleId::EpsilonConcatNeg2, "EpsilonConcatNeg2", 1},
    {RuleId::EpsilonStar, "EpsilonStar", 0},
    {RuleId::DeriveEmpty, "DeriveEmpty", 0},
    {RuleId::DeriveBlank, "DeriveBlank", 0},
    {RuleId::DeriveCharSame, "DeriveCharSame", 0},
    {RuleId::DeriveCharDifferent, "DeriveCharDifferent", 0},
    {RuleId::DeriveUnion, "DeriveUnion", 0},
    {RuleId::DeriveConcat, "DeriveConcat", 0},
    {RuleId::DeriveStar, "DeriveStar", 0},
    {RuleId::Assume, "Assume", 0},
    {RuleId::Contra, "Contra", 2},
};

static_assert(sizeof(kRules) / sizeof(kRules[0]) == kNumRules);

}  // namespace

const char* rule_name(RuleId r) { return kRules[static_cast<size_t>(r)].name; }

bool rule_from_name(std::string_view name, RuleId& out) {
  for (const auto& info : kRules) {
    if (name == info.name) {
      out = info.id;
      return true;
    }
  }
  return false;
}

uint32_t rule_arity(RuleId r) { return kRules[static_cast<size_t>(r)].arity; }

StepPtr make_step(RuleId rule, const Formula* conclusion, StepPtr prem0, StepPtr prem1) {
  auto s = std::make_shared<ProofStep>();
  s->rule = rule;
  s->conclusion = conclusion;
  s->prem0 = std::move(prem0);
  s->prem1 = std::move(prem1);
  return s;
}

const Term* chain_term(const Str& s, const Term* p) {
  const Term* t = p;
  for (CharCode c : s) t = mk_deriv(c, t);
  return t;
}

namespace {

bool is_kind(const Formula* f, FormulaKind k) { return f && f->kind == k; }

bool eq_of(const Formula* f, const Term*& l, const Term*& r) {
  if (!is_kind(f, FormulaKind::Eq)) return false;
  l = f->lhs;
  r = f->rhs;
  return true;
}

// Matches Eq(Epsilon(inner), Blank|Empty) and reports which value.
bool eps_eq_of(const Formula* f, const Term*& inner, bool& positive) {
  const Term *l, *r;
  if (!eq_of(f, l, r)) return false;
  if (l->kind != TermKind::Epsilon) return false;
  if (r->kind != TermKind::Blank && r->kind != TermKind::Empty) return false;
  inner = l->left;
  positive = r->kind == TermKind::Blank;
  return true;
}

}  // namespace

bool check_step_semantic(const ProofStep& step, uint32_t n) {
  uint32_t arity = rule_arity(step.rule);
  if ((arity >= 1) != (step.prem0 != nullptr)) return false;
  if ((arity >= 2) != (step.prem1 != nullptr)) return false;
  const Formula* a = step.prem0 ? step.prem0->conclusion : nullptr;
  const Formula* b = step.prem1 ? step.prem1->conclusion : nullptr;
  return check_schema(step.rule, step.conclusion, a, b, n);
}

bool check_schema(RuleId rule, const Formula* c, const Formula* a, const Formula* b,
                  uint32_t n) {
  if (!c) return false;
  uint32_t arity = rule_arity(rule);
  if (arity < 1) a = nullptr;
  if (arity < 2) b = nullptr;
  if (arity >= 1 && !a) return false;
  if (arity >= 2 && !b) return false;
  const Term *x, *y, *z, *w;

  switch (rule) {
    // --- coinduction core -------------------------------------------------
    case RuleId::MatchFinish:
      return is_kind(a, FormulaKind::AgreeUpTo) && a->counter == n &&
             is_kind(c, FormulaKind::Eq) && c->lhs == a->lhs && c->rhs == a->rhs;
    case RuleId::CoinductFinish:
      return is_kind(a, FormulaKind::SyncUpTo) && a->counter == n &&
             is_kind(c, FormulaKind::Sync) && c->str == a->str && c->lhs == a->lhs &&
             c->rhs == a->rhs;
    case RuleId::SyncCycle: {
      // The empty string would make the rule trivially derive Sync(eps,p,q).
      if (!is_kind(c, FormulaKind::Sync) || c->str.empty()) return false;
      if (!eq_of(a, x, y) || !eq_of(b, z, w)) return false;
      return y == c->lhs && w == c->rhs && x == chain_term(c->str, c->lhs) &&
             z == chain_term(c->str, c->rhs);
    }
    case RuleId::SyncFold: {
      if (!is_kind(a, FormulaKind::Sync) || !is_kind(c, FormulaKind::Sync)) return false;
      if (c->str.size() != a->str.size() + 1) return false;
      if (!std::equal(a->str.begin(), a->str.end(), c->str.begin() + 1)) return false;
      CharCode ch = c->str.front();
      return a->lhs == mk_deriv(ch, c->lhs) && a->rhs == mk_deriv(ch, c->rhs);
    }
    case RuleId::EqualSync:
      if (!is_kind(c, FormulaKind::Sync) || !eq_of(a, x, y)) return false;
      return x == chain_term(c->str, c->lhs) && y == chain_term(c->str, c->rhs);
    case RuleId::SyncEmpty:
      return is_kind(a, FormulaKind::Sync) && a->str.empty() && is_kind(c, FormulaKind::Eq) &&
             c->lhs == a->lhs && c->rhs == a->rhs;

    // --- binarization auxiliaries ------------------------------------------
    case RuleId::AgreeInit: {
      if (!is_kind(c, FormulaKind::AgreeUpTo) || c->counter != 0) return false;
      if (!eq_of(a, x, y)) return false;
      return x == mk_epsilon(c->lhs) && y == mk_epsilon(c->rhs);
    }
    case RuleId::AgreeStep: {
      if (!is_kind(a, FormulaKind::AgreeUpTo) || !is_kind(c, FormulaKind::AgreeUpTo))
        return false;
      uint32_t k = a->counter;
      if (k >= n || c->counter != k + 1) return false;
      if (c->lhs != a->lhs || c->rhs != a->rhs) return false;
      if (!eq_of(b, x, y)) return false;
      return x == mk_deriv(k, c->lhs) && y == mk_deriv(k, c->rhs);
    }
    case RuleId::SyncInit: {
      if (!is_kind(c, FormulaKind::SyncUpTo) || c->counter != 0) return false;
      if (!eq_of(a, x, y)) return false;
      return x == mk_epsilon(chain_term(c->str, c->lhs)) &&
             y == mk_epsilon(chain_term(c->str, c->rhs));
    }
    case RuleId::SyncStep: {
      if (!is_kind(a, FormulaKind::SyncUpTo) || !is_kind(c, FormulaKind::SyncUpTo))
        return false;
      uint32_t k = a->counter;
      if (k >= n || c->counter != k + 1) return false;
      if (c->str != a->str || c->lhs != a->lhs || c->rhs != a->rhs) return false;
      if (!is_kind(b, FormulaKind::Sync)) return false;
      if (b->lhs != c->lhs || b->rhs != c->rhs) return false;
      Str extended = c->str;
      extended.push_back(k);
      return b->str == extended;
    }

    // --- normalization axioms ----------------------------------------------
    case RuleId::UnionAssoc: {
      if (!eq_of(c, x, y)) return false;
      if (x->kind != TermKind::Union || x->right->kind != TermKind::Union) return false;
      const Term *p = x->left, *q = x->right->left, *r = x->right->right;
      return y == mk_union(mk_union(p, q), r);
    }
    case RuleId::UnionComm: {
      if (!eq_of(c, x, y)) return false;
      if (x->kind != TermKind::Union) return false;
      return y == mk_union(x->right, x->left);
    }
    case RuleId::UnionEmpty:
      if (!eq_of(c, x, y)) return false;
      return x->kind == TermKind::Union && x->right->kind == TermKind::Empty && y == x->left;
    case RuleId::UnionSelf:
      if (!eq_of(c, x, y)) return false;
      return x->kind == TermKind::Union && x->left == x->right && y == x->left;
    case RuleId::ConcatAssoc: {
      if (!eq_of(c, x, y)) return false;
      if (x->kind != TermKind::Concat || x->right->kind != TermKind::Concat) return false;
      const Term *p = x->left, *q = x->right->left, *r = x->right->right;
      return y == mk_concat(mk_concat(p, q), r);
    }
    case RuleId::ConcatBlankL:
      if (!eq_of(c, x, y)) return false;
      return x->kind == TermKind::Concat && x->left->kind == TermKind::Blank && y == x->right;
    case RuleId::ConcatBlankR:
      if (!eq_of(c, x, y)) return false;
      return x->kind == TermKind::Concat && x->right->kind == TermKind::Blank && y == x->left;
    case RuleId::ConcatEmptyL:
      if (!eq_of(c, x, y)) return false;
      return x->kind == TermKind::Concat && x->left->kind == TermKind::Empty &&
             y->kind == TermKind::Empty;
    case RuleId::ConcatEmptyR:
      if (!eq_of(c, x, y)) return false;
      return x->kind == TermKind::Concat && x->right->kind == TermKind::Empty &&
             y->kind == TermKind::Empty;

    // --- equality rules -----------------------------------------------------
    case RuleId::Refl:
      return eq_of(c, x, y) && x == y;
    case RuleId::Symm:
      return eq_of(a, x, y) && eq_of(c, z, w) && z == y && w == x;
    case RuleId::Trans: {
      const Term *l, *r;
      return eq_of(a, x, y) && eq_of(b, z, w) && eq_of(c, l, r) && l == x && y == z &&
             r == w;
    }
    case RuleId::PredCongL: {
      if (!a || !c || a->kind != c->kind) return false;
      if (a->kind != FormulaKind::Eq && a->kind != FormulaKind::Neq &&
          a->kind != FormulaKind::Sync)
        return false;
      if (!eq_of(b, x, y)) return false;
      // The string slot of Sync is never substituted.
      return a->str == c->str && a->lhs == x && c->lhs == y && a->rhs == c->rhs;
    }
    case RuleId::PredCongR: {
      if (!a || !c || a->kind != c->kind) return false;
      if (a->kind != FormulaKind::Eq && a->kind != FormulaKind::Neq &&
          a->kind != FormulaKind::Sync)
        return false;
      if (!eq_of(b, x, y)) return false;
      return a->str == c->str && a->rhs == x && c->rhs == y && a->lhs == c->lhs;
    }
    case RuleId::FunCong1: {
      if (!eq_of(a, x, y) || !eq_of(c, z, w)) return false;
      if (z->kind != w->kind) return false;
      if (z->kind != TermKind::Star && z->kind != TermKind::Epsilon &&
          z->kind != TermKind::Deriv)
        return false;
      if (z->kind == TermKind::Deriv && z->imm != w->imm) return false;
      return z->left == x && w->left == y;
    }
    case RuleId::FunCong2: {
      if (!eq_of(a, x, y) || !eq_of(b, z, w)) return false;
      const Term *l, *r;
      if (!eq_of(c, l, r)) return false;
      if (l->kind != r->kind) return false;
      if (l->kind != TermKind::Concat && l->kind != TermKind::Union) return false;
      return l->left == x && r->left == y && l->right == z && r->right == w;
    }

    // --- epsilon rules -------------------------------------------------------
    case RuleId::EpsilonEmpty: {
      const Term* inner;
      bool pos;
      return eps_eq_of(c, inner, pos) && inner->kind == TermKind::Empty && !pos;
    }
    case RuleId::EpsilonBlank: {
      const Term* inner;
      bool pos;
      return eps_eq_of(c, inner, pos) && inner->kind == TermKind::Blank && pos;
    }
    case RuleId::EpsilonChar: {
      const Term* inner;
      bool pos;
      return eps_eq_of(c, inner, pos) && inner->kind == TermKind::Char && !pos;
    }
    case RuleId::EpsilonStar: {
      const Term* inner;
      bool pos;
      return eps_eq_of(c, inner, pos) && inner->kind == TermKind::Star && pos;
    }
    case RuleId::EpsilonUnionPos1: {
      const Term *ic, *ia;
      bool pc, pa;
      if (!eps_eq_of(c, ic, pc) || !eps_eq_of(a, ia, pa)) return false;
      return pc && pa && ic->kind == TermKind::Union && ic->left == ia;
    }
    case RuleId::EpsilonUnionPos2: {
      const Term *ic, *ia;
      bool pc, pa;
      if (!eps_eq_of(c, ic, pc) || !eps_eq_of(a, ia, pa)) return false;
      return pc && pa && ic->kind == TermKind::Union && ic->right == ia;
    }
    case RuleId::EpsilonUnionNeg: {
      const Term *ic, *ia, *ib;
      bool pc, pa, pb;
      if (!eps_eq_of(c, ic, pc) || !eps_eq_of(a, ia, pa) || !eps_eq_of(b, ib, pb))
        return false;
      return !pc && !pa && !pb && ic->kind == TermKind::Union && ic->left == ia &&
             ic->right == ib;
    }
    case RuleId::EpsilonConcatPos: {
      const Term *ic, *ia, *ib;
      bool pc, pa, pb;
      if (!eps_eq_of(c, ic, pc) || !eps_eq_of(a, ia, pa) || !eps_eq_of(b, ib, pb))
        return false;
      return pc && pa && pb && ic->kind == TermKind::Concat && ic->left == ia &&
             ic->right == ib;
    }
    case RuleId::EpsilonConcatNeg1: {
      const Term *ic, *ia;
      bool pc, pa;
      if (!eps_eq_of(c, ic, pc) || !eps_eq_of(a, ia, pa)) return false;
      return !pc && !pa && ic->kind == TermKind::Concat && ic->left == ia;
    }
    case RuleId::EpsilonConcatNeg2: {
      const Term *ic, *ia;
      bool pc, pa;
      if (!eps_eq_of(c, ic, pc) || !eps_eq_of(a, ia, pa)) return false;
      return !pc && !pa && ic->kind == TermKind::Concat && ic->right == ia;
    }

    // --- derivative rules ------------------------------------------------------
    case RuleId::DeriveEmpty:
      if (!eq_of(c, x, y)) return false;
      return x->kind == TermKind::Deriv && x->left->kind == TermKind::Empty &&
             y->kind == TermKind::Empty;
    case RuleId::DeriveBlank:
      if (!eq_of(c, x, y)) return false;
      return x->kind == TermKind::Deriv && x->left->kind == TermKind::Blank &&
             y->kind == TermKind::Empty;
    case RuleId::DeriveCharSame:
      if (!eq_of(c, x, y)) return false;
      return x->kind == TermKind::Deriv && x->left->kind == TermKind::Char &&
             x->left->imm == x->imm && y->kind == TermKind::Blank;
    case RuleId::DeriveCharDifferent:
      // The only rule with a side condition: the two characters differ.
      if (!eq_of(c, x, y)) return false;
      return x->kind == TermKind::Deriv && x->left->kind == TermKind::Char &&
             x->left->imm != x->imm && y->kind == TermKind::Empty;
    case RuleId::DeriveUnion: {
      if (!eq_of(c, x, y)) return false;
      if (x->kind != TermKind::Deriv || x->left->kind != TermKind::Union) return false;
      const Term* u = x->left;
      return y == mk_union(mk_deriv(x->imm, u->left), mk_deriv(x->imm, u->right));
    }
    case RuleId::DeriveConcat: {
      if (!eq_of(c, x, y)) return false;
      if (x->kind != TermKind::Deriv || x->left->kind != TermKind::Concat) return false;
      const Term* pq = x->left;
      return y == mk_union(mk_concat(mk_deriv(x->imm, pq->left), pq->right),
                           mk_concat(mk_epsilon(pq->left), mk_deriv(x->imm, pq->right)));
    }
    case RuleId::DeriveStar: {
      if (!eq_of(c, x, y)) return false;
      if (x->kind != TermKind::Deriv || x->left->kind != TermKind::Star) return false;
      return y == mk_concat(mk_deriv(x->imm, x->left->left), x->left);
    }

    // --- proof completion ---------------------------------------------------------
    case RuleId::Assume:
      return is_kind(c, FormulaKind::Neq);
    case RuleId::Contra:
      return is_kind(a, FormulaKind::Neq) && eq_of(b, x, y) && a->lhs == x && a->rhs == y &&
             is_kind(c, FormulaKind::Bottom);
  }
  return false;
}

std::vector<ProofStep*> topo_steps(const StepPtr& root) {
  std::vector<ProofStep*> order;
  if (!root) return order;
  std::unordered_set<ProofStep*> seen;
  // Iterative post-order; proofs can nest thousands of Trans applications.
  std::vector<std::pair<ProofStep*, bool>> stack{{root.get(), false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(node);
      continue;
    }
    if (!seen.insert(node).second) continue;
    stack.push_back({node, true});
    if (node->prem1) stack.push_back({node->prem1.get(), false});
    if (node->prem0) stack.push_back({node->prem0.get(), false});
  }
  return order;
}

ProofCheckReport check_proof_tree(const StepPtr& root, uint32_t n) {
  ProofCheckReport rep;
  if (!root) {
    rep.ok = false;
    rep.failure = "no root step";
    return rep;
  }

  // Cycle detection over the shared-step graph.
  std::unordered_map<ProofStep*, int> state;  // 1 = on stack, 2 = done
  std::vector<std::pair<ProofStep*, int>> stack{{root.get(), 0}};
  while (!stack.empty()) {
    auto& [node, phase] = stack.back();
    if (phase == 0) {
      phase = 1;
      int& st = state[node];
      if (st == 2) {
        stack.pop_back();
        continue;
      }
      st = 1;
      for (ProofStep* p : {node->prem1.get(), node->prem0.get()}) {
        if (!p) continue;
        auto it = state.find(p);
        if (it != state.end() && it->second == 1) {
          rep.ok = false;
          rep.failure = "premise graph has a cycle";
          return rep;
        }
        if (it == state.end() || it->second == 0) stack.push_back({p, 0});
      }
    } else {
      state[node] = 2;
      stack.pop_back();
    }
  }

  auto order = topo_steps(root);
  rep.steps = order.size();
  const ProofStep* assume = nullptr;
  for (ProofStep* s : order) {
    if (!check_step_semantic(*s, n)) {
      rep.ok = false;
      rep.failure = std::string("step with rule ") + rule_name(s->rule) +
                    " does not match its schema";
      return rep;
    }
    if (s->rule == RuleId::Assume) {
      if (assume) {
        rep.ok = false;
        rep.failure = "more than one Assume step";
        return rep;
      }
      assume = s;
    }
  }
  if (!assume) {
    rep.ok = false;
    rep.failure = "no Assume step";
    return rep;
  }
  if (root->rule != RuleId::Contra || root->conclusion->kind != FormulaKind::Bottom) {
    rep.ok = false;
    rep.failure = "root must derive Bottom via Contra";
    return rep;
  }
  if (root->prem0->conclusion != assume->conclusion) {
    rep.ok = false;
    rep.failure = "Contra's inequality premise is not the assumption";
    return rep;
  }
  return rep;
}

}  // namespace crepe
