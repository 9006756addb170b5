#include "support/gen.hpp"

#include <functional>
#include <vector>

namespace gen {

using crepe::CharCode;
using crepe::Term;
using crepe::TermKind;
using crepe::mk_blank;
using crepe::mk_char;
using crepe::mk_concat;
using crepe::mk_empty;
using crepe::mk_star;
using crepe::mk_union;

const Term* random_regex(std::mt19937_64& rng, int depth, size_t n) {
  auto pick = [&](uint64_t bound) { return rng() % bound; };
  if (depth <= 0) {
    uint64_t leaf = pick(8);
    if (leaf == 0) return mk_blank();
    if (leaf == 1) return mk_empty();
    return mk_char(static_cast<CharCode>(pick(n)));
  }
  switch (pick(8)) {
    case 0:
    case 1:
      return mk_union(random_regex(rng, depth - 1, n), random_regex(rng, depth - 1, n));
    case 2:
    case 3:
    case 4:
      return mk_concat(random_regex(rng, depth - 1, n), random_regex(rng, depth - 1, n));
    case 5:
    case 6:
      return mk_star(random_regex(rng, depth - 1, n));
    default:
      return random_regex(rng, 0, n);
  }
}

namespace {

// One random similarity-preserving rewrite at the root of x, if any applies.
const Term* rewrite_root(std::mt19937_64& rng, const Term* x) {
  std::vector<const Term*> options;
  if (x->kind == TermKind::Union) {
    options.push_back(mk_union(x->right, x->left));  // commutativity
    if (x->right->kind == TermKind::Union)
      options.push_back(
          mk_union(mk_union(x->left, x->right->left), x->right->right));  // assoc ->
    if (x->left->kind == TermKind::Union)
      options.push_back(mk_union(x->left->left, mk_union(x->left->right, x->right)));
    if (x->right->kind == TermKind::Empty) options.push_back(x->left);  // p|0 = p
    if (x->left == x->right) options.push_back(x->left);                // p|p = p
  }
  if (x->kind == TermKind::Concat) {
    if (x->right->kind == TermKind::Concat)
      options.push_back(mk_concat(mk_concat(x->left, x->right->left), x->right->right));
    if (x->left->kind == TermKind::Concat)
      options.push_back(mk_concat(x->left->left, mk_concat(x->left->right, x->right)));
    if (x->left->kind == TermKind::Blank) options.push_back(x->right);  // eps p = p
    if (x->right->kind == TermKind::Blank) options.push_back(x->left);  // p eps = p
    if (x->left->kind == TermKind::Empty || x->right->kind == TermKind::Empty)
      options.push_back(mk_empty());
  }
  // Backward directions applicable to any term.
  options.push_back(mk_union(x, mk_empty()));
  options.push_back(mk_union(x, x));
  options.push_back(mk_concat(mk_blank(), x));
  options.push_back(mk_concat(x, mk_blank()));
  return options[rng() % options.size()];
}

const Term* rewrite_at(std::mt19937_64& rng, const Term* t, size_t& node, bool& done) {
  if (done) return t;
  if (node == 0) {
    done = true;
    return rewrite_root(rng, t);
  }
  --node;
  if (t->left) {
    const Term* l = rewrite_at(rng, t->left, node, done);
    if (done)
      return t->right ? (t->kind == TermKind::Concat ? mk_concat(l, t->right)
                         : t->kind == TermKind::Union ? mk_union(l, t->right)
                                                      : l)
             : t->kind == TermKind::Star ? mk_star(l)
                                         : l;
  }
  if (t->right && !done) {
    const Term* r = rewrite_at(rng, t->right, node, done);
    if (done)
      return t->kind == TermKind::Concat ? mk_concat(t->left, r) : mk_union(t->left, r);
  }
  return t;
}

}  // namespace

const Term* perturb(std::mt19937_64& rng, const Term* t, int steps) {
  const Term* cur = t;
  for (int i = 0; i < steps; ++i) {
    size_t node = rng() % crepe::term_size(cur);
    bool done = false;
    cur = rewrite_at(rng, cur, node, done);
  }
  return cur;
}

std::vector<CharCode> random_string(std::mt19937_64& rng, size_t n, size_t max_len) {
  std::vector<CharCode> out(rng() % (max_len + 1));
  for (auto& c : out) c = static_cast<CharCode>(rng() % n);
  return out;
}

}  // namespace gen
