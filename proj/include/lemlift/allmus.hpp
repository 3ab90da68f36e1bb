// All minimal correction subsets, then all minimal unsatisfiable subsets as
// their minimal hitting sets.
#pragma once

#include <vector>

#include "lemlift/smt.hpp"

namespace lemlift::allmus {

using sat::Status;

using IndexSet = std::vector<uint32_t>;  // ascending

constexpr size_t kDefaultCap = 10000;

struct McsResult {
  bool sat = false;       // the formula itself is satisfiable
  bool complete = true;   // false when the cap or the budget stopped enumeration
  std::vector<IndexSet> mcses;  // lexicographically sorted
};

McsResult enumerate_mcs(const Formula& formula, size_t cap = kDefaultCap, smt::SmtOptions options = {});

struct MusResult {
  bool complete = true;
  std::vector<IndexSet> muses;  // lexicographically sorted
};

MusResult minimal_hitting_sets(const std::vector<IndexSet>& mcses, size_t cap = kDefaultCap);

/// One minimal hitting set: greedily grown, then shrunk.
IndexSet single_mus(const std::vector<IndexSet>& mcses);

bool hits_all(const IndexSet& candidate, const std::vector<IndexSet>& sets);

}  // namespace lemlift::allmus
