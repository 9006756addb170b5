#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crepe/term.hpp"

namespace crepe {

// Sync strings: character codes, front of the string first.
using Str = std::vector<CharCode>;

enum class FormulaKind : uint8_t {
  Eq = 0,
  Sync = 1,
  Neq = 2,
  Bottom = 3,
  // Internal accumulators used to keep every rule at <= 2 premises. They
  // never appear as the final conclusion of a proof.
  AgreeUpTo = 4,
  SyncUpTo = 5,
};

const char* formula_kind_name(FormulaKind k);

// Immutable, interned formula; equality is pointer equality.
struct Formula {
  FormulaKind kind;
  uint32_t counter = 0;  // AgreeUpTo / SyncUpTo only
  Str str;               // Sync / SyncUpTo only
  const Term* lhs = nullptr;
  const Term* rhs = nullptr;
};

const Formula* f_eq(const Term* p, const Term* q);
const Formula* f_sync(const Str& s, const Term* p, const Term* q);
const Formula* f_neq(const Term* p, const Term* q);
const Formula* f_bottom();
const Formula* f_agree_up_to(uint32_t k, const Term* p, const Term* q);
const Formula* f_sync_up_to(uint32_t k, const Str& s, const Term* p, const Term* q);

std::string to_string(const Formula* f, const class Alphabet& alphabet);

}  // namespace crepe
