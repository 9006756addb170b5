#include "crepe/tables.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <sstream>
#include <unordered_map>

namespace crepe {

// ---------------------------------------------------------------------------
// Multiplexing configurations.

std::vector<std::vector<RuleId>> MuxConfig::members() const {
  std::vector<std::vector<RuleId>> out(num_categories);
  for (uint32_t r = 0; r < kNumRules; ++r)
    out[cat[r]].push_back(static_cast<RuleId>(r));
  return out;
}

MuxConfig MuxConfig::default_config() {
  MuxConfig m;
  m.name = "default";
  m.num_categories = 5;
  for (uint32_t r = 0; r < kNumRules; ++r) m.cat[r] = 1;
  m.cat[static_cast<size_t>(RuleId::Symm)] = 0;
  m.cat[static_cast<size_t>(RuleId::Trans)] = 0;
  m.cat[static_cast<size_t>(RuleId::FunCong2)] = 0;
  // Rules whose checking instructions scan strings or derivative chains.
  m.cat[static_cast<size_t>(RuleId::SyncCycle)] = 2;
  m.cat[static_cast<size_t>(RuleId::EqualSync)] = 2;
  m.cat[static_cast<size_t>(RuleId::SyncInit)] = 2;
  m.cat[static_cast<size_t>(RuleId::SyncStep)] = 2;
  m.cat[static_cast<size_t>(RuleId::Assume)] = 3;
  m.cat[static_cast<size_t>(RuleId::Contra)] = 4;
  return m;
}

MuxConfig MuxConfig::none() {
  MuxConfig m;
  m.name = "none";
  m.num_categories = kNumRules;
  for (uint32_t r = 0; r < kNumRules; ++r) m.cat[r] = r;
  return m;
}

MuxConfig MuxConfig::full() {
  MuxConfig m;
  m.name = "full";
  m.num_categories = 3;
  for (uint32_t r = 0; r < kNumRules; ++r) m.cat[r] = 0;
  m.cat[static_cast<size_t>(RuleId::Assume)] = 1;
  m.cat[static_cast<size_t>(RuleId::Contra)] = 2;
  return m;
}

std::optional<MuxConfig> MuxConfig::by_name(std::string_view name) {
  if (name == "default") return default_config();
  if (name == "none") return none();
  if (name == "full") return full();
  return std::nullopt;
}

ProofTables ProofTables::with_mux(const MuxConfig& m) const {
  ProofTables out = *this;
  out.mux = m;
  for (StepRow& s : out.steps) s.cat = m.cat[s.rule];
  return out;
}

// ---------------------------------------------------------------------------
// Lowering.

namespace {

class Lowering {
 public:
  Lowering(const Alphabet& alphabet, const LowerOptions& opts)
      : alphabet_(alphabet), opts_(opts) {
    // Row 0 of M_s is the null terminator shared by every chain.
    t_.strings.push_back({0, 0, 0});
  }

  ProofTables run(const StepPtr& root) {
    if (alphabet_.size() == 0) throw std::invalid_argument("empty alphabet");
    auto order = topo_steps(root);
    // The Assume step carries the minimal step id so that padded premise
    // slots always satisfy the ordering assertion.
    size_t assume_at = order.size();
    for (size_t i = 0; i < order.size(); ++i)
      if (order[i]->rule == RuleId::Assume) {
        if (assume_at != order.size())
          throw std::invalid_argument("proof has more than one Assume step");
        assume_at = i;
      }
    if (assume_at == order.size())
      throw std::invalid_argument("proof has no Assume step");
    std::vector<ProofStep*> steps;
    steps.push_back(order[assume_at]);
    for (size_t i = 0; i < order.size(); ++i)
      if (i != assume_at) steps.push_back(order[i]);

    std::vector<FormulaRow> formulas;
    std::vector<RuleId> rules;
    std::vector<std::array<size_t, 2>> prem_ids;
    std::unordered_map<ProofStep*, size_t> id_of;
    for (size_t i = 0; i < steps.size(); ++i) {
      ProofStep* s = steps[i];
      id_of[s] = i;
      formulas.push_back(formula_row(s->conclusion));
      rules.push_back(s->rule);
      std::array<size_t, 2> pr{0, 0};  // unused slots -> the Assume step
      if (s->prem0) pr[0] = id_of.at(s->prem0.get());
      if (s->prem1) pr[1] = id_of.at(s->prem1.get());
      prem_ids.push_back(pr);
    }

    uint64_t nu = 0;
    for (const StringRow& r : t_.strings) nu = std::max(nu, r.height);
    nu = std::max(nu, opts_.min_nu);

    // Dummy rows to reach requested sizes. Padding steps take the ids just
    // below the root so the root always carries the maximal id.
    while (t_.terms.size() < opts_.min_chi) t_.terms.push_back({
        static_cast<uint64_t>(TermKind::Blank), 0, 0, 0});
    if (t_.strings.size() < opts_.min_xi && nu == 0) nu = 1;
    while (t_.strings.size() < opts_.min_xi) t_.strings.push_back({0, 0, 1});
    if (formulas.size() < opts_.min_pi) {
      FormulaRow root_formula = formulas.back();
      RuleId root_rule = rules.back();
      std::array<size_t, 2> root_prems = prem_ids.back();
      formulas.pop_back();
      rules.pop_back();
      prem_ids.pop_back();
      while (formulas.size() + 1 < opts_.min_pi) {
        formulas.push_back({static_cast<uint64_t>(FormulaKind::Eq), 0, 0, 0, 0});
        rules.push_back(RuleId::Refl);
        prem_ids.push_back({0, 0});
      }
      formulas.push_back(root_formula);
      rules.push_back(root_rule);
      prem_ids.push_back(root_prems);
    }

    size_t pi = formulas.size();
    std::mt19937_64 rng(opts_.seed);
    std::vector<uint64_t> pos(pi), fpos(pi);
    for (size_t i = 0; i < pi; ++i) pos[i] = i;
    std::shuffle(pos.begin(), pos.end(), rng);
    for (size_t i = 0; i < pi; ++i) fpos[i] = i;
    std::shuffle(fpos.begin(), fpos.end(), rng);

    t_.formulas.resize(pi);
    t_.steps.resize(pi);
    for (size_t i = 0; i < pi; ++i) {
      t_.formulas[fpos[i]] = formulas[i];
      StepRow row;
      row.step_id = i;
      row.rule = static_cast<uint64_t>(rules[i]);
      row.cat = opts_.mux.cat[row.rule];
      row.res = fpos[i];
      row.prem0 = pos[prem_ids[i][0]];
      row.prem1 = pos[prem_ids[i][1]];
      t_.steps[pos[i]] = row;
    }

    t_.alphabet = alphabet_.symbols();
    t_.mux = opts_.mux;
    t_.params = {alphabet_.size(), t_.terms.size(), t_.strings.size(), pi, nu};
    return std::move(t_);
  }

 private:
  uint64_t add_term(const Term* t) {
    auto it = term_idx_.find(t);
    if (it != term_idx_.end()) return it->second;
    TermRow row;
    row.kind = static_cast<uint64_t>(t->kind);
    row.imm = t->imm;
    if (t->left) row.child0 = add_term(t->left);
    if (t->right) row.child1 = add_term(t->right);
    uint64_t idx = t_.terms.size();
    t_.terms.push_back(row);
    term_idx_.emplace(t, idx);
    return idx;
  }

  uint64_t add_string(const Str& s, size_t from) {
    if (from == s.size()) return 0;
    Str key(s.begin() + from, s.end());
    auto it = str_idx_.find(key);
    if (it != str_idx_.end()) return it->second;
    uint64_t tail = add_string(s, from + 1);
    StringRow row{s[from], tail, s.size() - from};
    uint64_t idx = t_.strings.size();
    t_.strings.push_back(row);
    str_idx_.emplace(std::move(key), idx);
    return idx;
  }

  FormulaRow formula_row(const Formula* f) {
    FormulaRow row;
    row.kind = static_cast<uint64_t>(f->kind);
    row.imm = f->counter;
    if (f->kind == FormulaKind::Sync || f->kind == FormulaKind::SyncUpTo)
      row.str = add_string(f->str, 0);
    if (f->lhs) row.arg0 = add_term(f->lhs);
    if (f->rhs) row.arg1 = add_term(f->rhs);
    return row;
  }

  struct StrHash {
    size_t operator()(const Str& s) const {
      size_t h = 0x9e3779b97f4a7c15ULL;
      for (CharCode c : s) h = h * 0x100000001b3ULL + c + 1;
      return h;
    }
  };

  const Alphabet& alphabet_;
  const LowerOptions& opts_;
  ProofTables t_;
  std::unordered_map<const Term*, uint64_t> term_idx_;
  std::unordered_map<Str, uint64_t, StrHash> str_idx_;
};

}  // namespace

ProofTables lower_proof(const StepPtr& root, const Alphabet& alphabet,
                        const LowerOptions& opts) {
  return Lowering(alphabet, opts).run(root);
}

// ---------------------------------------------------------------------------
// Serialization: line-oriented text, deterministic for identical tables.

std::string serialize_proof(const ProofTables& t) {
  std::ostringstream out;
  out << "crepe-tables v1\n";
  out << "alphabet " << t.alphabet << "\n";
  out << "n " << t.params.n << "\n";
  out << "chi " << t.params.chi << "\n";
  out << "xi " << t.params.xi << "\n";
  out << "pi " << t.params.pi << "\n";
  out << "nu " << t.params.nu << "\n";
  out << "mux " << t.mux.name << " " << t.mux.num_categories << "\n";
  out << "categories";
  for (uint32_t r = 0; r < kNumRules; ++r)
    out << " " << rule_name(static_cast<RuleId>(r)) << ":" << t.mux.cat[r];
  out << "\n";
  out << "terms " << t.terms.size() << "\n";
  for (const TermRow& r : t.terms)
    out << r.kind << " " << r.imm << " " << r.child0 << " " << r.child1 << "\n";
  out << "strings " << t.strings.size() << "\n";
  for (const StringRow& r : t.strings)
    out << r.imm << " " << r.tail << " " << r.height << "\n";
  out << "formulas " << t.formulas.size() << "\n";
  for (const FormulaRow& r : t.formulas)
    out << r.kind << " " << r.imm << " " << r.str << " " << r.arg0 << " " << r.arg1 << "\n";
  out << "steps " << t.steps.size() << "\n";
  for (const StepRow& r : t.steps)
    out << r.step_id << " " << rule_name(static_cast<RuleId>(r.rule)) << " " << r.cat << " "
        << r.res << " " << r.prem0 << " " << r.prem1 << "\n";
  return out.str();
}

namespace {

class Loader {
 public:
  explicit Loader(std::string_view text) : in_(std::string(text)) {}

  ProofTables run() {
    expect_line("crepe-tables v1", "unsupported format version");
    ProofTables t;
    t.alphabet = tagged_rest("alphabet");
    t.params.n = tagged_num("n");
    t.params.chi = tagged_num("chi");
    t.params.xi = tagged_num("xi");
    t.params.pi = tagged_num("pi");
    t.params.nu = tagged_num("nu");
    read_mux(t.mux);
    read_terms(t);
    read_strings(t);
    read_formulas(t);
    read_steps(t);
    check(t.alphabet.size() == t.params.n, "alphabet length does not match n");
    check(t.terms.size() == t.params.chi, "term count does not match chi");
    check(t.strings.size() == t.params.xi, "string count does not match xi");
    check(t.formulas.size() == t.params.pi && t.steps.size() == t.params.pi,
          "formula/step counts do not match pi");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw LoadError("load error: " + msg + " (line " + std::to_string(lineno_) + ")");
  }
  void check(bool ok, const char* msg) {
    if (!ok) fail(msg);
  }

  std::string next_line() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of file");
    ++lineno_;
    return line;
  }

  void expect_line(const std::string& want, const char* msg) {
    if (next_line() != want) fail(msg);
  }

  std::string tagged_rest(const std::string& tag) {
    std::string line = next_line();
    if (line.rfind(tag + " ", 0) != 0) fail("expected '" + tag + "' line");
    return line.substr(tag.size() + 1);
  }

  uint64_t tagged_num(const std::string& tag) { return to_num(tagged_rest(tag)); }

  uint64_t to_num(const std::string& s) {
    try {
      size_t used = 0;
      uint64_t v = std::stoull(s, &used);
      if (used != s.size()) fail("malformed number '" + s + "'");
      return v;
    } catch (const LoadError&) {
      throw;
    } catch (...) {
      fail("malformed number '" + s + "'");
    }
  }

  void read_mux(MuxConfig& m) {
    std::istringstream head(next_line());
    std::string tag;
    head >> tag >> m.name >> m.num_categories;
    if (tag != "mux" || head.fail()) fail("expected 'mux' line");
    std::istringstream cats(next_line());
    cats >> tag;
    if (tag != "categories") fail("expected 'categories' line");
    uint32_t seen = 0;
    std::string entry;
    while (cats >> entry) {
      auto colon = entry.find(':');
      if (colon == std::string::npos) fail("malformed category entry '" + entry + "'");
      RuleId r;
      if (!rule_from_name(entry.substr(0, colon), r)) fail("unknown rule in categories");
      uint64_t c = to_num(entry.substr(colon + 1));
      if (c >= m.num_categories) fail("category id out of range");
      m.cat[static_cast<size_t>(r)] = static_cast<uint32_t>(c);
      ++seen;
    }
    if (seen != kNumRules) fail("categories line must cover every rule");
  }

  size_t counted(const std::string& tag) {
    std::istringstream head(next_line());
    std::string word;
    size_t count = 0;
    head >> word >> count;
    if (word != tag || head.fail()) fail("expected '" + tag + "' section");
    return count;
  }

  template <typename Fn>
  void rows(const std::string& tag, Fn fn) {
    size_t count = counted(tag);
    for (size_t i = 0; i < count; ++i) {
      std::istringstream row(next_line());
      fn(row);
      if (row.fail()) fail("malformed row in '" + tag + "' section");
      std::string extra;
      if (row >> extra) fail("trailing fields in '" + tag + "' row");
    }
  }

  void read_terms(ProofTables& t) {
    rows("terms", [&](std::istringstream& row) {
      TermRow r;
      row >> r.kind >> r.imm >> r.child0 >> r.child1;
      t.terms.push_back(r);
    });
    for (const TermRow& r : t.terms)
      check(r.child0 < std::max<size_t>(t.terms.size(), 1) &&
                r.child1 < std::max<size_t>(t.terms.size(), 1),
            "term child index out of range");
  }

  void read_strings(ProofTables& t) {
    rows("strings", [&](std::istringstream& row) {
      StringRow r;
      row >> r.imm >> r.tail >> r.height;
      t.strings.push_back(r);
    });
    for (const StringRow& r : t.strings)
      check(r.tail < std::max<size_t>(t.strings.size(), 1), "string tail index out of range");
  }

  void read_formulas(ProofTables& t) {
    rows("formulas", [&](std::istringstream& row) {
      FormulaRow r;
      row >> r.kind >> r.imm >> r.str >> r.arg0 >> r.arg1;
      t.formulas.push_back(r);
    });
    for (const FormulaRow& r : t.formulas)
      check(r.str < std::max<size_t>(t.strings.size(), 1) &&
                r.arg0 < std::max<size_t>(t.terms.size(), 1) &&
                r.arg1 < std::max<size_t>(t.terms.size(), 1),
            "formula argument index out of range");
  }

  void read_steps(ProofTables& t) {
    rows("steps", [&](std::istringstream& row) {
      StepRow r;
      std::string rule;
      row >> r.step_id >> rule >> r.cat >> r.res >> r.prem0 >> r.prem1;
      RuleId id;
      if (!rule_from_name(rule, id)) fail("unknown rule '" + rule + "'");
      r.rule = static_cast<uint64_t>(id);
      t.steps.push_back(r);
    });
    for (const StepRow& r : t.steps) {
      check(r.res < t.formulas.size(), "step result index out of range");
      check(r.cat < t.mux.num_categories, "step category out of range");
      check(r.prem0 < t.steps.size() && r.prem1 < t.steps.size(),
            "step premise index out of range");
    }
  }

  std::istringstream in_;
  size_t lineno_ = 0;
};

}  // namespace

ProofTables deserialize_proof(std::string_view text) { return Loader(text).run(); }

// ---------------------------------------------------------------------------
// Lifting tables back into a step tree.

namespace {

class Lifter {
 public:
  explicit Lifter(const ProofTables& t) : t_(t) {}

  LiftResult run() {
    size_t root = t_.steps.size();
    for (size_t i = 0; i < t_.steps.size(); ++i) {
      if (formula_at(t_.steps[i].res).kind == static_cast<uint64_t>(FormulaKind::Bottom)) {
        if (root != t_.steps.size()) throw LoadError("lift: multiple Bottom steps");
        root = i;
      }
    }
    if (root == t_.steps.size()) throw LoadError("lift: no Bottom-concluding step");
    LiftResult out;
    out.root = step_at(root);
    out.alphabet = Alphabet(t_.alphabet);
    return out;
  }

 private:
  const FormulaRow& formula_at(uint64_t idx) {
    if (idx >= t_.formulas.size()) throw LoadError("lift: formula index out of range");
    return t_.formulas[idx];
  }

  StepPtr step_at(uint64_t idx) {
    if (idx >= t_.steps.size()) throw LoadError("lift: step index out of range");
    auto it = steps_.find(idx);
    if (it != steps_.end()) {
      if (!it->second) throw LoadError("lift: premise cycle");
      return it->second;
    }
    steps_[idx] = nullptr;  // in-progress marker
    const StepRow& row = t_.steps[idx];
    if (row.rule >= kNumRules) throw LoadError("lift: unknown rule id");
    RuleId rule = static_cast<RuleId>(row.rule);
    uint32_t arity = rule_arity(rule);
    StepPtr p0, p1;
    if (arity >= 1) p0 = step_at(row.prem0);
    if (arity >= 2) p1 = step_at(row.prem1);
    StepPtr s = make_step(rule, formula(row.res), std::move(p0), std::move(p1));
    steps_[idx] = s;
    return s;
  }

  const Formula* formula(uint64_t idx) {
    const FormulaRow& row = formula_at(idx);
    switch (row.kind) {
      case static_cast<uint64_t>(FormulaKind::Eq):
        return f_eq(term(row.arg0), term(row.arg1));
      case static_cast<uint64_t>(FormulaKind::Neq):
        return f_neq(term(row.arg0), term(row.arg1));
      case static_cast<uint64_t>(FormulaKind::Bottom):
        return f_bottom();
      case static_cast<uint64_t>(FormulaKind::Sync):
        return f_sync(string(row.str), term(row.arg0), term(row.arg1));
      case static_cast<uint64_t>(FormulaKind::AgreeUpTo):
        return f_agree_up_to(static_cast<uint32_t>(row.imm), term(row.arg0), term(row.arg1));
      case static_cast<uint64_t>(FormulaKind::SyncUpTo):
        return f_sync_up_to(static_cast<uint32_t>(row.imm), string(row.str), term(row.arg0),
                            term(row.arg1));
      default:
        throw LoadError("lift: unknown formula kind");
    }
  }

  const Term* term(uint64_t idx) {
    if (idx >= t_.terms.size()) throw LoadError("lift: term index out of range");
    auto it = terms_.find(idx);
    if (it != terms_.end()) return it->second;
    const TermRow& row = t_.terms[idx];
    // Used child indexes strictly below the row's own keep this finite;
    // padding slots are ignored just like the consistency checks ignore them.
    bool unary = row.kind == static_cast<uint64_t>(TermKind::Star) ||
                 row.kind == static_cast<uint64_t>(TermKind::Epsilon) ||
                 row.kind == static_cast<uint64_t>(TermKind::Deriv);
    bool binary = row.kind == static_cast<uint64_t>(TermKind::Concat) ||
                  row.kind == static_cast<uint64_t>(TermKind::Union);
    if (((unary || binary) && row.child0 >= idx) || (binary && row.child1 >= idx))
      throw LoadError("lift: term child does not precede its parent");
    const Term* t = nullptr;
    switch (row.kind) {
      case static_cast<uint64_t>(TermKind::Empty): t = mk_empty(); break;
      case static_cast<uint64_t>(TermKind::Blank): t = mk_blank(); break;
      case static_cast<uint64_t>(TermKind::Char):
        t = mk_char(code(row.imm));
        break;
      case static_cast<uint64_t>(TermKind::Star): t = mk_star(term(row.child0)); break;
      case static_cast<uint64_t>(TermKind::Concat):
        t = mk_concat(term(row.child0), term(row.child1));
        break;
      case static_cast<uint64_t>(TermKind::Union):
        t = mk_union(term(row.child0), term(row.child1));
        break;
      case static_cast<uint64_t>(TermKind::Epsilon): t = mk_epsilon(term(row.child0)); break;
      case static_cast<uint64_t>(TermKind::Deriv):
        t = mk_deriv(code(row.imm), term(row.child0));
        break;
      default:
        throw LoadError("lift: unknown term kind");
    }
    terms_.emplace(idx, t);
    return t;
  }

  Str string(uint64_t idx) {
    Str out;
    uint64_t cur = idx;
    size_t guard = t_.strings.size() + 1;
    while (guard--) {
      if (cur >= t_.strings.size()) throw LoadError("lift: string index out of range");
      const StringRow& row = t_.strings[cur];
      if (row.height == 0) return out;
      out.push_back(code(row.imm));
      cur = row.tail;
    }
    throw LoadError("lift: string chain does not terminate");
  }

  CharCode code(uint64_t imm) {
    if (imm >= t_.alphabet.size()) throw LoadError("lift: character code out of range");
    return static_cast<CharCode>(imm);
  }

  const ProofTables& t_;
  std::unordered_map<uint64_t, StepPtr> steps_;
  std::unordered_map<uint64_t, const Term*> terms_;
};

}  // namespace

LiftResult lift_proof(const ProofTables& t) { return Lifter(t).run(); }

}  // namespace crepe
