#include "crepe/formula.hpp"

#include <memory>
#include <mutex>
#include <unordered_map>

#include "crepe/regex.hpp"

namespace crepe {

namespace {

struct Key {
  FormulaKind kind;
  uint32_t counter;
  Str str;
  const Term* lhs;
  const Term* rhs;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  size_t operator()(const Key& k) const {
    size_t h = static_cast<size_t>(k.kind) * 0x9e3779b97f4a7c15ULL + k.counter;
    for (CharCode c : k.str) h = h * 0x9e3779b97f4a7c15ULL + c + 1;
    h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<size_t>(k.lhs);
    h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<size_t>(k.rhs);
    return h;
  }
};

class Pool {
 public:
  const Formula* get(FormulaKind kind, uint32_t counter, Str str, const Term* lhs,
                     const Term* rhs) {
    Key key{kind, counter, std::move(str), lhs, rhs};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    auto f = std::make_unique<Formula>();
    f->kind = kind;
    f->counter = counter;
    f->str = key.str;
    f->lhs = lhs;
    f->rhs = rhs;
    const Formula* out = f.get();
    owned_.push_back(std::move(f));
    map_.emplace(std::move(key), out);
    return out;
  }

 private:
  std::mutex mu_;
  std::unordered_map<Key, const Formula*, KeyHash> map_;
  std::vector<std::unique_ptr<Formula>> owned_;
};

Pool& pool() {
  static Pool* p = new Pool();
  return *p;
}

}  // namespace

const char* formula_kind_name(FormulaKind k) {
  switch (k) {
    case FormulaKind::Eq: return "Eq";
    case FormulaKind::Sync: return "Sync";
    case FormulaKind::Neq: return "Neq";
    case FormulaKind::Bottom: return "Bottom";
    case FormulaKind::AgreeUpTo: return "AgreeUpTo";
    case FormulaKind::SyncUpTo: return "SyncUpTo";
  }
  return "?";
}

const Formula* f_eq(const Term* p, const Term* q) {
  return pool().get(FormulaKind::Eq, 0, {}, p, q);
}
const Formula* f_sync(const Str& s, const Term* p, const Term* q) {
  return pool().get(FormulaKind::Sync, 0, s, p, q);
}
const Formula* f_neq(const Term* p, const Term* q) {
  return pool().get(FormulaKind::Neq, 0, {}, p, q);
}
const Formula* f_bottom() { return pool().get(FormulaKind::Bottom, 0, {}, nullptr, nullptr); }
const Formula* f_agree_up_to(uint32_t k, const Term* p, const Term* q) {
  return pool().get(FormulaKind::AgreeUpTo, k, {}, p, q);
}
const Formula* f_sync_up_to(uint32_t k, const Str& s, const Term* p, const Term* q) {
  return pool().get(FormulaKind::SyncUpTo, k, s, p, q);
}

std::string to_string(const Formula* f, const Alphabet& alphabet) {
  auto str_of = [&](const Str& s) {
    std::string out;
    for (CharCode c : s) out += alphabet.symbol(c);
    return out.empty() ? std::string("eps") : out;
  };
  switch (f->kind) {
    case FormulaKind::Eq:
      return to_sexpr(f->lhs, alphabet) + " = " + to_sexpr(f->rhs, alphabet);
    case FormulaKind::Neq:
      return to_sexpr(f->lhs, alphabet) + " != " + to_sexpr(f->rhs, alphabet);
    case FormulaKind::Bottom:
      return "false";
    case FormulaKind::Sync:
      return "Sync(" + str_of(f->str) + ", " + to_sexpr(f->lhs, alphabet) + ", " +
             to_sexpr(f->rhs, alphabet) + ")";
    case FormulaKind::AgreeUpTo:
      return "AgreeUpTo(" + std::to_string(f->counter) + ", " + to_sexpr(f->lhs, alphabet) +
             ", " + to_sexpr(f->rhs, alphabet) + ")";
    case FormulaKind::SyncUpTo:
      return "SyncUpTo(" + std::to_string(f->counter) + ", " + str_of(f->str) + ", " +
             to_sexpr(f->lhs, alphabet) + ", " + to_sexpr(f->rhs, alphabet) + ")";
  }
  return "?";
}

}  // namespace crepe
