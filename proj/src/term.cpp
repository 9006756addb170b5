#include "crepe/term.hpp"

#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace crepe {

namespace {

struct NodeKey {
  TermKind kind;
  CharCode imm;
  const Term* left;
  const Term* right;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  size_t operator()(const NodeKey& k) const {
    size_t h = static_cast<size_t>(k.kind);
    h = h * 0x9e3779b97f4a7c15ULL + k.imm;
    h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<size_t>(k.left);
    h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<size_t>(k.right);
    return h;
  }
};

// Process-wide interner. Nodes are never freed; the mutex makes the
// constructors safe to call from concurrent read-mostly workloads.
class Pool {
 public:
  const Term* get(TermKind kind, CharCode imm, const Term* l, const Term* r) {
    NodeKey key{kind, imm, l, r};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    auto node = std::make_unique<Term>();
    node->kind = kind;
    node->imm = imm;
    node->left = l;
    node->right = r;
    node->pure = kind != TermKind::Epsilon && kind != TermKind::Deriv &&
                 (l == nullptr || l->pure) && (r == nullptr || r->pure);
    const Term* out = node.get();
    owned_.push_back(std::move(node));
    map_.emplace(key, out);
    return out;
  }

 private:
  std::mutex mu_;
  std::unordered_map<NodeKey, const Term*, NodeKeyHash> map_;
  std::vector<std::unique_ptr<Term>> owned_;
};

Pool& pool() {
  static Pool* p = new Pool();
  return *p;
}

}  // namespace

const char* term_kind_name(TermKind k) {
  switch (k) {
    case TermKind::Empty: return "Empty";
    case TermKind::Blank: return "Blank";
    case TermKind::Char: return "Char";
    case TermKind::Star: return "Star";
    case TermKind::Concat: return "Concat";
    case TermKind::Union: return "Union";
    case TermKind::Epsilon: return "Epsilon";
    case TermKind::Deriv: return "Deriv";
  }
  return "?";
}

const Term* mk_empty() { return pool().get(TermKind::Empty, 0, nullptr, nullptr); }
const Term* mk_blank() { return pool().get(TermKind::Blank, 0, nullptr, nullptr); }
const Term* mk_char(CharCode c) { return pool().get(TermKind::Char, c, nullptr, nullptr); }
const Term* mk_star(const Term* p) { return pool().get(TermKind::Star, 0, p, nullptr); }
const Term* mk_concat(const Term* p, const Term* q) {
  return pool().get(TermKind::Concat, 0, p, q);
}
const Term* mk_union(const Term* p, const Term* q) {
  return pool().get(TermKind::Union, 0, p, q);
}
const Term* mk_epsilon(const Term* p) { return pool().get(TermKind::Epsilon, 0, p, nullptr); }
const Term* mk_deriv(CharCode c, const Term* p) {
  return pool().get(TermKind::Deriv, c, p, nullptr);
}

std::strong_ordering term_compare(const Term* a, const Term* b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = static_cast<int>(a->kind) <=> static_cast<int>(b->kind); c != 0) return c;
  if (auto c = a->imm <=> b->imm; c != 0) return c;
  bool al = a->left != nullptr, bl = b->left != nullptr;
  if (auto c = al <=> bl; c != 0) return c;
  if (al) {
    if (auto c = term_compare(a->left, b->left); c != 0) return c;
  }
  bool ar = a->right != nullptr, br = b->right != nullptr;
  if (auto c = ar <=> br; c != 0) return c;
  if (ar) {
    if (auto c = term_compare(a->right, b->right); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

size_t term_size(const Term* t) {
  size_t n = 1;
  if (t->left) n += term_size(t->left);
  if (t->right) n += term_size(t->right);
  return n;
}

}  // namespace crepe
