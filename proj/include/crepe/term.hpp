#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace crepe {

// Dense character code in [0, n) for an alphabet of size n.
using CharCode = uint32_t;

// Kind order doubles as the rank used by term_compare.
enum class TermKind : uint8_t {
  Empty = 0,   // rejects everything
  Blank = 1,   // accepts only the empty string
  Char = 2,    // single character
  Star = 3,
  Concat = 4,
  Union = 5,
  Epsilon = 6, // E(p): nullability as a term
  Deriv = 7,   // d_c(p): single-character derivative
};

const char* term_kind_name(TermKind k);

// Immutable, interned AST node. Structural equality is pointer equality;
// nodes live for the lifetime of the process.
struct Term {
  TermKind kind;
  CharCode imm = 0;              // Char, Deriv only
  const Term* left = nullptr;    // first child
  const Term* right = nullptr;   // second child (Concat, Union)
  bool pure = true;              // no Epsilon/Deriv anywhere below

  bool is_regex() const { return pure; }
};

const Term* mk_empty();
const Term* mk_blank();
const Term* mk_char(CharCode c);
const Term* mk_star(const Term* p);
const Term* mk_concat(const Term* p, const Term* q);
const Term* mk_union(const Term* p, const Term* q);
const Term* mk_epsilon(const Term* p);
const Term* mk_deriv(CharCode c, const Term* p);

// Strict total order: kind rank, then imm, then children left to right.
std::strong_ordering term_compare(const Term* a, const Term* b);
inline bool term_less(const Term* a, const Term* b) {
  return term_compare(a, b) == std::strong_ordering::less;
}

size_t term_size(const Term* t);

}  // namespace crepe
