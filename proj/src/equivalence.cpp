#include "crepe/equivalence.hpp"

#include <unordered_set>
#include <utility>

namespace crepe {

namespace {

struct PairHash {
  size_t operator()(const std::pair<const Term*, const Term*>& p) const {
    return reinterpret_cast<size_t>(p.first) * 0x9e3779b97f4a7c15ULL ^
           reinterpret_cast<size_t>(p.second);
  }
};

using VisitSet = std::unordered_set<std::pair<const Term*, const Term*>, PairHash>;

class Search {
 public:
  Search(const Alphabet& alphabet, EquivOptions opts) : alphabet_(alphabet), opts_(opts) {}

  bool run(const Term* p, const Term* q) {
    if (++calls_ > opts_.max_calls) throw BudgetExceeded("equivalence call budget exceeded");
    const Term* pn = normalize(p);
    const Term* qn = normalize(q);
    if (pn == qn) return true;
    if (visited_.count({pn, qn})) return true;
    if (epsilon_of(pn) != epsilon_of(qn)) return false;
    // Insert-and-erase keeps the set path-local: siblings never observe
    // each other's additions, matching the recursive H-union formulation.
    visited_.insert({pn, qn});
    bool all = true;
    for (CharCode c = 0; all && c < alphabet_.size(); ++c)
      all = run(derive_char(c, pn), derive_char(c, qn));
    visited_.erase({pn, qn});
    return all;
  }

 private:
  const Alphabet& alphabet_;
  EquivOptions opts_;
  VisitSet visited_;
  uint64_t calls_ = 0;
};

}  // namespace

bool equiv(const Term* p, const Term* q, const Alphabet& alphabet, EquivOptions opts) {
  if (!p->is_regex() || !q->is_regex())
    throw std::invalid_argument("equiv expects regular expressions");
  return Search(alphabet, opts).run(p, q);
}

}  // namespace crepe
