#include "crepe/regex.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <set>
#include <sstream>

namespace crepe {

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  std::string sorted = symbols_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParseError("alphabet contains a repeated symbol");
  if (symbols_.size() > 256) throw ParseError("alphabet larger than 256 symbols");
}

namespace {
bool is_meta(char ch) {
  return ch == '|' || ch == '*' || ch == '+' || ch == '?' || ch == '(' || ch == ')';
}
}  // namespace

Alphabet Alphabet::from_patterns(const std::vector<std::string_view>& patterns) {
  std::set<char> seen;
  for (auto p : patterns)
    for (char ch : p)
      if (!is_meta(ch)) seen.insert(ch);
  return Alphabet(std::string(seen.begin(), seen.end()));
}

bool Alphabet::contains(char ch) const {
  return symbols_.find(ch) != std::string::npos;
}

CharCode Alphabet::code(char ch) const {
  auto pos = symbols_.find(ch);
  if (pos == std::string::npos)
    throw ParseError(std::string("character '") + ch + "' outside alphabet");
  return static_cast<CharCode>(pos);
}

// ---------------------------------------------------------------------------
// Pattern parser: alt > cat > postfix > atom, `*` tightest, `|` loosest.

namespace {

class PatternParser {
 public:
  PatternParser(std::string_view text, const Alphabet& alphabet)
      : text_(text), alphabet_(alphabet) {}

  const Term* run() {
    if (text_.empty()) throw ParseError("empty pattern");
    const Term* t = alt();
    if (pos_ != text_.size())
      throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "' at offset " +
                       std::to_string(pos_));
    return t;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void expect(char ch) {
    if (peek() != ch)
      throw ParseError(std::string("expected '") + ch + "' at offset " + std::to_string(pos_));
    ++pos_;
  }

  const Term* alt() {
    const Term* t = cat();
    while (peek() == '|') {
      ++pos_;
      t = mk_union(t, cat());
    }
    return t;
  }

  const Term* cat() {
    const Term* t = postfix();
    while (pos_ < text_.size() && peek() != '|' && peek() != ')')
      t = mk_concat(t, postfix());
    return t;
  }

  const Term* postfix() {
    const Term* t = atom();
    for (;;) {
      switch (peek()) {
        case '*': ++pos_; t = mk_star(t); break;
        case '+': ++pos_; t = mk_concat(t, mk_star(t)); break;
        case '?': ++pos_; t = mk_union(t, mk_blank()); break;
        default: return t;
      }
    }
  }

  const Term* atom() {
    char ch = peek();
    if (ch == '(') {
      ++pos_;
      const Term* t = alt();
      expect(')');
      return t;
    }
    if (ch == '\0' || ch == '|' || ch == ')' )
      throw ParseError("dangling operator or empty group at offset " + std::to_string(pos_));
    if (ch == '*' || ch == '+' || ch == '?')
      throw ParseError(std::string("operator '") + ch + "' with no operand at offset " +
                       std::to_string(pos_));
    ++pos_;
    return mk_char(alphabet_.code(ch));
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  size_t pos_ = 0;
};

}  // namespace

const Term* parse_regex(std::string_view text, const Alphabet& alphabet) {
  return PatternParser(text, alphabet).run();
}

// ---------------------------------------------------------------------------

const Term* epsilon_of(const Term* p) {
  assert(p->is_regex());
  switch (p->kind) {
    case TermKind::Empty: return mk_empty();
    case TermKind::Blank: return mk_blank();
    case TermKind::Char: return mk_empty();
    case TermKind::Star: return mk_blank();
    case TermKind::Union: {
      // Positive if either side is; mirrors the short-circuit rule order.
      if (epsilon_of(p->left)->kind == TermKind::Blank) return mk_blank();
      return epsilon_of(p->right);
    }
    case TermKind::Concat: {
      if (epsilon_of(p->left)->kind == TermKind::Empty) return mk_empty();
      return epsilon_of(p->right);
    }
    default: break;
  }
  assert(false && "epsilon_of on a non-regular term");
  return mk_empty();
}

const Term* derive_char(CharCode c, const Term* p) {
  assert(p->is_regex());
  switch (p->kind) {
    case TermKind::Empty: return mk_empty();
    case TermKind::Blank: return mk_empty();
    case TermKind::Char: return p->imm == c ? mk_blank() : mk_empty();
    case TermKind::Union:
      return mk_union(derive_char(c, p->left), derive_char(c, p->right));
    case TermKind::Concat:
      return mk_union(mk_concat(derive_char(c, p->left), p->right),
                      mk_concat(epsilon_of(p->left), derive_char(c, p->right)));
    case TermKind::Star:
      return mk_concat(derive_char(c, p->left), p);
    default: break;
  }
  assert(false && "derive_char on a non-regular term");
  return mk_empty();
}

const Term* reduce(const Term* t) {
  if (t->pure) return t;
  switch (t->kind) {
    case TermKind::Star: return mk_star(reduce(t->left));
    case TermKind::Concat: return mk_concat(reduce(t->left), reduce(t->right));
    case TermKind::Union: return mk_union(reduce(t->left), reduce(t->right));
    case TermKind::Epsilon: return epsilon_of(reduce(t->left));
    case TermKind::Deriv: return derive_char(t->imm, reduce(t->left));
    default: break;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Normal form. Only union/concat rearrangements justified by the
// normalization axioms are performed; stars are left alone.

namespace {

// m is a normalized non-union member; u is a normalized union spine.
const Term* insert_union(const Term* m, const Term* u) {
  if (m->kind == TermKind::Empty) return u;
  if (u->kind == TermKind::Empty) return m;
  if (u->kind == TermKind::Union) {
    const Term* h = u->left;
    if (m == h) return u;
    if (term_less(m, h)) return mk_union(m, u);
    return mk_union(h, insert_union(m, u->right));
  }
  if (m == u) return m;
  return term_less(m, u) ? mk_union(m, u) : mk_union(u, m);
}

const Term* union_nf(const Term* a, const Term* b) {
  if (a->kind == TermKind::Union) return insert_union(a->left, union_nf(a->right, b));
  return insert_union(a, b);
}

const Term* concat_nf(const Term* a, const Term* b) {
  if (a->kind == TermKind::Empty || b->kind == TermKind::Empty) return mk_empty();
  if (a->kind == TermKind::Blank) return b;
  if (b->kind == TermKind::Blank) return a;
  if (a->kind == TermKind::Concat) return concat_nf(a->left, concat_nf(a->right, b));
  return mk_concat(a, b);
}

}  // namespace

const Term* normalize(const Term* p) {
  assert(p->is_regex());
  switch (p->kind) {
    case TermKind::Empty:
    case TermKind::Blank:
    case TermKind::Char: return p;
    case TermKind::Star: return mk_star(normalize(p->left));
    case TermKind::Concat: return concat_nf(normalize(p->left), normalize(p->right));
    case TermKind::Union: return union_nf(normalize(p->left), normalize(p->right));
    default: break;
  }
  assert(false && "normalize on a non-regular term");
  return p;
}

bool matches(const Term* p, const std::vector<CharCode>& s) {
  const Term* cur = normalize(p);
  for (CharCode c : s) cur = normalize(derive_char(c, cur));
  return epsilon_of(cur)->kind == TermKind::Blank;
}

// ---------------------------------------------------------------------------
// Printers.

namespace {

void sexpr_rec(const Term* t, const Alphabet& a, std::string& out) {
  switch (t->kind) {
    case TermKind::Empty: out += "empty"; return;
    case TermKind::Blank: out += "eps"; return;
    case TermKind::Char: out += a.symbol(t->imm); return;
    case TermKind::Star:
      out += "(* ";
      sexpr_rec(t->left, a, out);
      out += ')';
      return;
    case TermKind::Concat:
    case TermKind::Union:
      out += t->kind == TermKind::Concat ? "(cat " : "(alt ";
      sexpr_rec(t->left, a, out);
      out += ' ';
      sexpr_rec(t->right, a, out);
      out += ')';
      return;
    case TermKind::Epsilon:
      out += "(E ";
      sexpr_rec(t->left, a, out);
      out += ')';
      return;
    case TermKind::Deriv:
      out += "(d ";
      out += a.symbol(t->imm);
      out += ' ';
      sexpr_rec(t->left, a, out);
      out += ')';
      return;
  }
}

class SexprParser {
 public:
  SexprParser(std::string_view text, const Alphabet& alphabet)
      : text_(text), alphabet_(alphabet) {}

  const Term* run() {
    const Term* t = node();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("trailing s-expression input");
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string word() {
    skip_space();
    size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    if (start == pos_) throw ParseError("expected s-expression token");
    return std::string(text_.substr(start, pos_ - start));
  }

  const Term* node() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of s-expression");
    if (text_[pos_] != '(') {
      std::string w = word();
      if (w == "empty") return mk_empty();
      if (w == "eps") return mk_blank();
      if (w.size() != 1) throw ParseError("unknown atom '" + w + "'");
      return mk_char(alphabet_.code(w[0]));
    }
    ++pos_;
    std::string head = word();
    const Term* t = nullptr;
    if (head == "*") {
      t = mk_star(node());
    } else if (head == "cat") {
      const Term* l = node();
      t = mk_concat(l, node());
    } else if (head == "alt") {
      const Term* l = node();
      t = mk_union(l, node());
    } else if (head == "E") {
      t = mk_epsilon(node());
    } else if (head == "d") {
      std::string c = word();
      if (c.size() != 1) throw ParseError("derivative character must be a single symbol");
      t = mk_deriv(alphabet_.code(c[0]), node());
    } else {
      throw ParseError("unknown s-expression head '" + head + "'");
    }
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != ')')
      throw ParseError("missing ')' in s-expression");
    ++pos_;
    return t;
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  size_t pos_ = 0;
};

// Precedence levels for the pattern printer: 0 = alt, 1 = cat, 2 = postfix.
void pattern_rec(const Term* t, const Alphabet& a, int level, std::string& out) {
  switch (t->kind) {
    case TermKind::Empty: throw ParseError("Empty has no pattern notation");
    case TermKind::Blank: throw ParseError("Blank has no pattern notation");
    case TermKind::Char: out += a.symbol(t->imm); return;
    case TermKind::Star:
      pattern_rec(t->left, a, 2, out);
      out += '*';
      return;
    case TermKind::Concat: {
      // Print `p p*` as `p+`; flat printing would reparse left-nested.
      if (t->right->kind == TermKind::Star && t->right->left == t->left) {
        pattern_rec(t->left, a, 2, out);
        out += '+';
        return;
      }
      bool paren = level > 1;
      if (paren) out += '(';
      pattern_rec(t->left, a, 2, out);
      pattern_rec(t->right, a, 1, out);
      if (paren) out += ')';
      return;
    }
    case TermKind::Union: {
      // Print `p|eps` as `p?` so Blank stays expressible.
      if (t->right->kind == TermKind::Blank) {
        pattern_rec(t->left, a, 2, out);
        out += '?';
        return;
      }
      bool paren = level > 0;
      if (paren) out += '(';
      pattern_rec(t->left, a, 1, out);
      out += '|';
      pattern_rec(t->right, a, 0, out);
      if (paren) out += ')';
      return;
    }
    default:
      throw ParseError("pattern notation covers regular expressions only");
  }
}

}  // namespace

std::string to_sexpr(const Term* t, const Alphabet& alphabet) {
  std::string out;
  sexpr_rec(t, alphabet, out);
  return out;
}

const Term* parse_sexpr(std::string_view text, const Alphabet& alphabet) {
  return SexprParser(text, alphabet).run();
}

std::string to_pattern(const Term* t, const Alphabet& alphabet) {
  std::string out;
  pattern_rec(t, alphabet, 0, out);
  return out;
}

}  // namespace crepe
