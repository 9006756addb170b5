#pragma once

// Seeded random regular expressions and similarity-preserving perturbations
// for property tests.

#include <random>

#include "crepe/regex.hpp"

namespace gen {

// Random regular expression with AST depth <= depth over codes 0..n-1.
const crepe::Term* random_regex(std::mt19937_64& rng, int depth, size_t n);

// Applies `steps` random rewrites drawn from the union/concat axioms (in
// both directions); the result stays in the input's similarity class.
const crepe::Term* perturb(std::mt19937_64& rng, const crepe::Term* t, int steps);

// Random string over codes 0..n-1 with length <= max_len.
std::vector<crepe::CharCode> random_string(std::mt19937_64& rng, size_t n, size_t max_len);

}  // namespace gen
