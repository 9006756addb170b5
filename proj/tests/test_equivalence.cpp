#include <atomic>
#include <random>
#include <thread>

#include "crepe/equivalence.hpp"
#include "doctest.h"
#include "support/gen.hpp"
#include "support/nfa_oracle.hpp"

using namespace crepe;

namespace {
const Alphabet kAb{"ab"};
}

TEST_CASE("worked example and easy verdicts") {
  CHECK(equiv(parse_regex("(a*a)*", kAb), parse_regex("a*", kAb), kAb));
  const Term* p = parse_regex("(ab|b)*a?", kAb);
  CHECK(equiv(p, p, kAb));
  CHECK_FALSE(equiv(parse_regex("a", kAb), parse_regex("b", kAb), kAb));
  CHECK_FALSE(equiv(parse_regex("a*", kAb), parse_regex("a+", kAb), kAb));
  CHECK(equiv(parse_regex("(a|b)*", kAb), parse_regex("(a*b*)*", kAb), kAb));
}

TEST_CASE("agrees with the automaton oracle on random pairs") {
  std::mt19937_64 rng(23);
  int equivalent_seen = 0;
  for (int i = 0; i < 400; ++i) {
    const Term* p = gen::random_regex(rng, 4, 2);
    const Term* q = gen::random_regex(rng, 4, 2);
    bool want = oracle::nfa_equiv(p, q, 2);
    CHECK(equiv(p, q, kAb) == want);
    if (want) ++equivalent_seen;
  }
  // Perturbed pairs are equivalent by construction.
  for (int i = 0; i < 60; ++i) {
    const Term* p = gen::random_regex(rng, 4, 2);
    const Term* q = gen::perturb(rng, p, 6);
    CHECK(equiv(p, q, kAb));
  }
  CHECK(equivalent_seen >= 1);  // the sample should not be vacuous
}

TEST_CASE("symmetry and congruence") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 150; ++i) {
    const Term* p = gen::random_regex(rng, 3, 2);
    const Term* q = gen::random_regex(rng, 3, 2);
    bool pq = equiv(p, q, kAb);
    CHECK(pq == equiv(q, p, kAb));
    if (pq) {
      const Term* r = gen::random_regex(rng, 3, 2);
      CHECK(equiv(mk_union(p, r), mk_union(q, r), kAb));
      CHECK(equiv(mk_concat(p, r), mk_concat(q, r), kAb));
    }
  }
}

TEST_CASE("budget exhaustion reports instead of hanging") {
  EquivOptions tiny{3};
  CHECK_THROWS_AS(
      (void)equiv(parse_regex("(a|b)*", kAb), parse_regex("(a*b*)*", kAb), kAb, tiny),
      BudgetExceeded);
}

TEST_CASE("pure operations are safe to run concurrently") {
  // Interners are shared; equivalence queries and rewrites must not race.
  std::vector<std::thread> workers;
  std::atomic<int> failures{0};
  for (int w = 0; w < 8; ++w) {
    workers.emplace_back([w, &failures]() {
      std::mt19937_64 rng(1000 + w);
      Alphabet ab{"ab"};
      for (int i = 0; i < 200; ++i) {
        const Term* p = gen::random_regex(rng, 3, 2);
        const Term* q = gen::perturb(rng, p, 4);
        try {
          if (!equiv(p, q, ab)) ++failures;
          if (normalize(p) != normalize(q)) ++failures;
        } catch (const BudgetExceeded&) {
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  CHECK(failures == 0);
}

TEST_CASE("alphabet symbols beyond the literals matter") {
  Alphabet abc{"abc"};
  // Over {a}, a* accepts everything without b; over {a,b,c} it does not
  // equal the universal language.
  CHECK(equiv(parse_regex("a*", Alphabet{"a"}), parse_regex("a*", Alphabet{"a"}), Alphabet{"a"}));
  CHECK_FALSE(equiv(parse_regex("a*", abc), parse_regex("(a|b|c)*", abc), abc));
  CHECK(equiv(parse_regex("a|b|c", abc), parse_regex("c|b|a", abc), abc));
  CHECK(equiv(parse_regex("(a|b|c)*", abc), parse_regex("(a*b*c*)*", abc), abc));
}
