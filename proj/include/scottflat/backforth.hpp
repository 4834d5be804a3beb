#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scottflat/structures.hpp"

namespace scottflat {

// Arity-indexed partitions E_0..E_{n_max} of M^k, stored as a class id per tuple rank.
// Class ids are canonical: ids appear in increasing order along the lexicographic tuple order.
struct TruncatedSystem {
  int n_max = 1;
  int size = 1;
  std::vector<std::vector<int>> cls;

  int class_of(const Tuple& t) const;
  int num_classes(int k) const;
  bool related(const Tuple& a, const Tuple& b) const { return class_of(a) == class_of(b); }
  // A representative (the least tuple) of every class at arity k.
  std::vector<Tuple> representatives(int k) const;
  bool operator==(const TruncatedSystem&) const = default;
};

// Renumber class ids so that they appear in increasing order of first occurrence.
std::vector<int> canonical_ids(const std::vector<int>& raw);
// True when s refines t arity-wise (every class of s lies inside a class of t).
bool refines(const TruncatedSystem& s, const TruncatedSystem& t);
// Partition-for-partition equality up to class renaming.
bool same_partitions(const TruncatedSystem& s, const TruncatedSystem& t);

struct SharpReport {
  bool ok = true;
  std::string clause;  // "shape", "qf-elementarity", "downward closure", "extension"
  int arity = -1;
  Tuple left, right;
  std::string detail;
};

SharpReport validate_sharp(const FinStructure& m, const TruncatedSystem& s);

using TuplePair = std::pair<Tuple, Tuple>;
using PairSet = std::set<TuplePair>;

// Smallest superset closed under all injective subsequence maps.
PairSet downward_closure(const PairSet& f);
// Checks the (truncated) back-and-forth conditions on a raw pair set.
SharpReport validate_back_and_forth(const FinStructure& m, const PairSet& f, int n_max);
// Arity-wise equivalence closure of the downward closure. Throws InputError when the input is not a
// back-and-forth system and std::logic_error naming the failed clause when the closure is not sharp.
TruncatedSystem sharp_closure(const PairSet& f, const FinStructure& m, int n_max);
PairSet system_pairs(const TruncatedSystem& s);

// The largest truncated sharp system, by refinement from quantifier-free types.
TruncatedSystem compute_F_infinity(const FinStructure& m, int n_max);
// Diagonal orbit equivalence of Aut(M); independent of the refinement.
TruncatedSystem orbit_oracle(const FinStructure& m, int n_max, int guard_size = 8);
// E_k = orbits of the given permutations' generated group on M^k.
TruncatedSystem orbit_system(int size, int n_max, const std::vector<std::vector<int>>& perms);
// E_k = equality of tuples.
TruncatedSystem discrete_system(int size, int n_max);

}  // namespace scottflat
