#pragma once

#include <cstdint>
#include <stdexcept>

#include "crepe/regex.hpp"

namespace crepe {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EquivOptions {
  // Recursive-call budget; the underlying problem is PSPACE-complete, so a
  // cutoff stands in for a wall-clock limit.
  uint64_t max_calls = 1'000'000;
};

// Decides L(p) = L(q) by derivative-closure search with path-local cycle
// detection. Throws BudgetExceeded when the call budget runs out.
bool equiv(const Term* p, const Term* q, const Alphabet& alphabet, EquivOptions opts = {});

}  // namespace crepe
