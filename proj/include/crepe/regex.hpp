#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crepe/term.hpp"

namespace crepe {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered set of input symbols; character codes are positions in the list.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string symbols);

  // Collects the literal characters of one or more patterns, sorted.
  static Alphabet from_patterns(const std::vector<std::string_view>& patterns);

  size_t size() const { return symbols_.size(); }
  char symbol(CharCode c) const { return symbols_.at(c); }
  bool contains(char ch) const;
  CharCode code(char ch) const;  // throws ParseError if absent
  const std::string& symbols() const { return symbols_; }

 private:
  std::string symbols_;
};

// Pattern syntax: literals, `|`, juxtaposition, `*`, `+`, `?`, parens.
// `p+` desugars to `pp*` and `p?` to `p|eps`; the result never contains
// Epsilon or Deriv nodes.
const Term* parse_regex(std::string_view text, const Alphabet& alphabet);

// E(p): Blank if p accepts the empty string, Empty otherwise.
const Term* epsilon_of(const Term* p);

// Fully unfolded single-character derivative of a regular expression.
const Term* derive_char(CharCode c, const Term* p);

// Unfolds every Epsilon/Deriv node (innermost first); identity on pure terms.
const Term* reduce(const Term* t);

// Canonical representative of the similarity class: unions right-nested,
// members sorted and deduplicated, Empty members dropped; concatenations
// right-nested with Blank factors dropped and Empty collapsing the whole.
const Term* normalize(const Term* p);

// Membership test via repeated derivatives.
bool matches(const Term* p, const std::vector<CharCode>& s);

// S-expression form, e.g. "(* (cat (* a) a))"; round-trips via parse_sexpr.
std::string to_sexpr(const Term* t, const Alphabet& alphabet);
const Term* parse_sexpr(std::string_view text, const Alphabet& alphabet);

// Pattern form; parse_regex(to_pattern(t)) == t for any t that parse_regex
// produced. Throws for shapes the pattern syntax cannot spell (a bare Empty,
// or Blank outside the right side of a union).
std::string to_pattern(const Term* t, const Alphabet& alphabet);

}  // namespace crepe
