#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "crepe/equivalence.hpp"
#include "crepe/proof_gen.hpp"
#include "crepe/tables.hpp"
#include "crepe/validator.hpp"
#include "crepe/zk_sim.hpp"

namespace {

using namespace crepe;

// 0 = success/equivalent/valid, 1 = inequivalent/invalid, 2 = usage or I/O
// error, 3 = budget exceeded.
constexpr int kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

Alphabet alphabet_for(const std::string& override_syms, const std::string& a,
                      const std::string& b = "") {
  if (!override_syms.empty()) return Alphabet(override_syms);
  return Alphabet::from_patterns({a, b});
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write '" + path + "'");
  out << text;
}

std::unique_ptr<Backend> make_backend(const std::string& kind, uint64_t seed,
                                      bool fresh_entropy, bool transcript) {
  BackendOptions opts;
  opts.challenge_seed = seed;
  opts.fresh_entropy = fresh_entropy;
  opts.record_transcript = transcript;
  if (kind == "plain") return std::make_unique<PlaintextBackend>(opts);
  return std::make_unique<ZkSimBackend>(opts);
}

int cmd_equiv(const std::string& r1, const std::string& r2, const std::string& syms,
              uint64_t budget) {
  Alphabet alphabet = alphabet_for(syms, r1, r2);
  const Term* p = parse_regex(r1, alphabet);
  const Term* q = parse_regex(r2, alphabet);
  bool same = equiv(p, q, alphabet, {budget});
  std::cout << (same ? "equivalent" : "not equivalent") << "\n";
  return same ? kOk : kNegative;
}

int cmd_prove(const std::string& r1, const std::string& r2, const std::string& out_path,
              const std::string& syms, uint64_t seed, const std::string& mux_name,
              uint64_t budget) {
  Alphabet alphabet = alphabet_for(syms, r1, r2);
  const Term* p = parse_regex(r1, alphabet);
  const Term* q = parse_regex(r2, alphabet);
  if (!equiv(p, q, alphabet, {budget})) {
    std::cerr << "not equivalent; no proof exists\n";
    return kNegative;
  }
  StepPtr eq_proof = dedup_and_prune(proof_gen(p, q, alphabet, {budget}));
  StepPtr root = dedup_and_prune(bookend(std::move(eq_proof)));
  auto rep = check_proof_tree(root, static_cast<uint32_t>(alphabet.size()));
  if (!rep.ok) {
    std::cerr << "internal error: generated proof failed self-check: " << rep.failure << "\n";
    return kUsage;
  }
  LowerOptions opts;
  opts.seed = seed;
  opts.mux = *MuxConfig::by_name(mux_name);
  ProofTables t = lower_proof(root, alphabet, opts);
  write_file(out_path, serialize_proof(t));
  std::cout << "proof written: " << rep.steps << " steps, pi=" << t.params.pi
            << " chi=" << t.params.chi << " xi=" << t.params.xi << " nu=" << t.params.nu
            << "\n";
  return kOk;
}

int cmd_validate(const std::string& path, const std::string& mux_name, uint64_t seed,
                 const std::string& transcript_out, const std::string& backend_kind,
                 bool fresh_entropy) {
  ProofTables t = deserialize_proof(read_file(path));
  MuxConfig mux = *MuxConfig::by_name(mux_name);
  if (t.mux.name != mux.name) t = t.with_mux(mux);
  bool want_transcript = !transcript_out.empty() || backend_kind != "plain";
  auto be = make_backend(backend_kind, seed, fresh_entropy, want_transcript);
  ValidationReport rep = validate(t, mux, *be);
  std::cout << rep.leakage_text();
  std::cout << "phases-ms rule=" << rep.rule_ms << " permutation=" << rep.permutation_ms
            << " consistency=" << rep.consistency_ms << "\n";
  if (!transcript_out.empty() && be->transcript())
    write_file(transcript_out, be->transcript()->to_text());
  if (rep.ok) {
    std::cout << "valid\n";
    return kOk;
  }
  std::cout << "invalid: " << rep.first_failure << "\n";
  return kNegative;
}

struct BenchRow {
  std::string name;
  double equiv_ms = 0, gen_ms = 0, lower_ms = 0, validate_ms = 0;
  uint64_t raw_steps = 0, steps = 0, pi = 0;
  std::string verdict;
};

int cmd_bench(const std::string& dir, const std::string& csv_out, uint64_t budget,
              uint64_t seed, unsigned jobs) {
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> pairs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".pairs") continue;
    std::ifstream in(entry.path());
    std::string r1, r2;
    size_t line = 0;
    while (in >> r1 >> r2) {
      ++line;
      pairs.push_back({entry.path().filename().string() + ":" + std::to_string(line),
                       {r1, r2}});
    }
  }
  if (pairs.empty()) {
    std::cerr << "no .pairs files with entries under " << dir << "\n";
    return kUsage;
  }

  std::vector<BenchRow> rows(pairs.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= pairs.size()) return;
      BenchRow& row = rows[i];
      row.name = pairs[i].first;
      try {
        Alphabet alphabet = alphabet_for("", pairs[i].second.first, pairs[i].second.second);
        const Term* p = parse_regex(pairs[i].second.first, alphabet);
        const Term* q = parse_regex(pairs[i].second.second, alphabet);
        Timer te;
        bool same = equiv(p, q, alphabet, {budget});
        row.equiv_ms = te.ms();
        row.verdict = same ? "equivalent" : "inequivalent";
        if (!same) continue;
        Timer tg;
        StepPtr eq_proof = proof_gen(p, q, alphabet, {budget});
        StepPtr root = bookend(std::move(eq_proof));
        row.raw_steps = topo_steps(root).size();
        root = dedup_and_prune(root);
        row.steps = topo_steps(root).size();
        row.gen_ms = tg.ms();
        Timer tl;
        LowerOptions lopts;
        lopts.seed = seed;
        ProofTables t = lower_proof(root, alphabet, lopts);
        row.pi = t.params.pi;
        row.lower_ms = tl.ms();
        Timer tv;
        ZkSimBackend be({seed, false, false});
        ValidationReport rep = validate(t, t.mux, be);
        row.validate_ms = tv.ms();
        if (!rep.ok) row.verdict = "validation-failed";
      } catch (const BudgetExceeded&) {
        row.verdict = "budget-exceeded";
      } catch (const std::exception& e) {
        row.verdict = std::string("error: ") + e.what();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < jobs; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }

  std::ostringstream csv;
  csv << "pair,verdict,equiv_ms,gen_ms,raw_steps,steps,pi,lower_ms,validate_ms\n";
  for (const BenchRow& r : rows)
    csv << r.name << "," << r.verdict << "," << r.equiv_ms << "," << r.gen_ms << ","
        << r.raw_steps << "," << r.steps << "," << r.pi << "," << r.lower_ms << ","
        << r.validate_ms << "\n";
  if (!csv_out.empty())
    write_file(csv_out, csv.str());
  else
    std::cout << csv.str();
  return kOk;
}

int cmd_mutate(const std::string& path, uint64_t trials, uint64_t seed) {
  ProofTables base = deserialize_proof(read_file(path));
  std::mt19937_64 rng(seed);
  uint64_t rejected = 0, accepted = 0, unsound = 0;
  for (uint64_t i = 0; i < trials; ++i) {
    ProofTables t = base;
    // Corrupt one random cell by a random nonzero delta.
    uint64_t table = rng() % 4;
    auto bump = [&](uint64_t& cell) { cell += 1 + rng() % 5; };
    switch (table) {
      case 0: {
        TermRow& r = t.terms[rng() % t.terms.size()];
        uint64_t c = rng() % 4;
        bump(c == 0 ? r.kind : c == 1 ? r.imm : c == 2 ? r.child0 : r.child1);
        break;
      }
      case 1: {
        StringRow& r = t.strings[rng() % t.strings.size()];
        uint64_t c = rng() % 3;
        bump(c == 0 ? r.imm : c == 1 ? r.tail : r.height);
        break;
      }
      case 2: {
        FormulaRow& r = t.formulas[rng() % t.formulas.size()];
        uint64_t c = rng() % 5;
        bump(c == 0   ? r.kind
             : c == 1 ? r.imm
             : c == 2 ? r.str
             : c == 3 ? r.arg0
                      : r.arg1);
        break;
      }
      default: {
        StepRow& r = t.steps[rng() % t.steps.size()];
        uint64_t c = rng() % 6;
        bump(c == 0   ? r.step_id
             : c == 1 ? r.rule
             : c == 2 ? r.cat
             : c == 3 ? r.res
             : c == 4 ? r.prem0
                      : r.prem1);
        if (r.rule >= kNumRules) r.rule %= kNumRules;
        break;
      }
    }
    ZkSimBackend be({seed + i, false, false});
    ValidationReport rep = validate(t, t.mux, be);
    if (rep.ok) {
      ++accepted;
      if (!semantic_recheck(t)) ++unsound;
    } else {
      ++rejected;
    }
  }
  std::cout << "trials " << trials << "\n";
  std::cout << "rejected " << rejected << "\n";
  std::cout << "accepted " << accepted << " (semantically unsound: " << unsound << ")\n";
  return unsound == 0 ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regex equivalence proofs over flat tables with a simulated "
               "zero-knowledge validator"};
  app.require_subcommand(1);

  std::string r1, r2, out_path, syms, mux_name = "default", transcript_out;
  std::string backend_kind = "zk", file, dir, csv_out;
  uint64_t seed = 1, budget = 1'000'000, trials = 1000;
  unsigned jobs = 1;
  bool fresh_entropy = false;

  auto* eq = app.add_subcommand("equiv", "decide whether two patterns are equivalent");
  eq->add_option("pattern1", r1)->required();
  eq->add_option("pattern2", r2)->required();
  eq->add_option("--alphabet", syms, "explicit symbol set (default: inferred literals)");
  eq->add_option("--budget", budget, "recursive-call budget");

  auto* pr = app.add_subcommand("prove", "generate and lower an equivalence proof");
  pr->add_option("pattern1", r1)->required();
  pr->add_option("pattern2", r2)->required();
  pr->add_option("-o,--out", out_path)->required();
  pr->add_option("--alphabet", syms);
  pr->add_option("--seed", seed, "step-shuffle seed");
  pr->add_option("--mux", mux_name)->check(CLI::IsMember({"default", "none", "full"}));
  pr->add_option("--budget", budget);

  auto* va = app.add_subcommand("validate", "validate a lowered proof file");
  va->add_option("file", file)->required();
  va->add_option("--mux", mux_name)->check(CLI::IsMember({"default", "none", "full"}));
  va->add_option("--seed", seed, "verifier challenge seed");
  va->add_option("--transcript", transcript_out, "write the operation transcript here");
  va->add_option("--backend", backend_kind)->check(CLI::IsMember({"zk", "plain"}));
  va->add_flag("--fresh-entropy", fresh_entropy, "draw challenges from the OS");

  auto* be = app.add_subcommand("bench", "run a directory of .pairs files end to end");
  be->add_option("dir", dir)->required();
  be->add_option("--out", csv_out, "write timings CSV here (default: stdout)");
  be->add_option("--budget", budget);
  be->add_option("--seed", seed);
  be->add_option("--jobs", jobs, "worker threads");

  auto* mu = app.add_subcommand("mutate", "rejection rate under single-cell corruption");
  mu->add_option("file", file)->required();
  mu->add_option("--trials", trials);
  mu->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (eq->parsed()) return cmd_equiv(r1, r2, syms, budget);
    if (pr->parsed()) return cmd_prove(r1, r2, out_path, syms, seed, mux_name, budget);
    if (va->parsed())
      return cmd_validate(file, mux_name, seed, transcript_out, backend_kind, fresh_entropy);
    if (be->parsed()) return cmd_bench(dir, csv_out, budget, seed, jobs);
    if (mu->parsed()) return cmd_mutate(file, trials, seed);
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return kBudget;
  } catch (const NotEquivalent& e) {
    std::cerr << e.what() << "\n";
    return kNegative;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
