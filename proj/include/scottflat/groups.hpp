#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scottflat/backforth.hpp"
#include "scottflat/flat.hpp"
#include "scottflat/structures.hpp"

namespace scottflat {

// Image list of a bijection on 0..n-1.
using Perm = std::vector<int>;

Perm identity_perm(int n);
// (p * q)(x) = p(q(x)).
Perm perm_mul(const Perm& p, const Perm& q);
Perm perm_inv(const Perm& p);
Perm perm_pow(const Perm& p, int e);
int perm_order(const Perm& p);
bool is_perm(const Perm& p);
// Sorted cycle lengths, fixed points included.
std::vector<int> cycle_type(const Perm& p);
Tuple apply_perm(const Perm& p, const Tuple& t);

// "(0 1 2)(3 4)" or "()" for the identity. Single-digit cycles may omit spaces: "(012)".
std::string perm_to_cycles(const Perm& p);
Perm parse_cycles(std::string_view text, int degree);

struct PermGroup {
  int degree = 0;
  std::vector<Perm> gens;
  std::vector<Perm> elements;  // sorted lexicographically; elements[0] is the identity

  size_t order() const { return elements.size(); }
  bool contains(const Perm& p) const;
  int index_of(const Perm& p) const;  // -1 when absent
  bool operator==(const PermGroup& o) const { return degree == o.degree && elements == o.elements; }
};

PermGroup generate(int degree, const std::vector<Perm>& gens, size_t cap = 1000000);
// Group from a closed element set; generators are chosen greedily.
PermGroup group_from_elements(int degree, std::vector<Perm> elements);
PermGroup symmetric_group(int n);
// "sN" for Sym(N), otherwise a generator list in cycle notation separated by commas or semicolons.
PermGroup parse_group(std::string_view text, int degree);
std::string group_to_string(const PermGroup& g);

PermGroup automorphism_group(const FinStructure& m, int guard_size = 10);

// Per-arity pair sets over tuples of 0..degree-1, stored as a boolean matrix over tuple ranks.
struct SubgroupCode {
  int degree = 1;
  int n_max = 1;
  std::vector<std::vector<uint8_t>> pairs;

  bool has(const Tuple& a, const Tuple& b) const;
  void add(const Tuple& a, const Tuple& b);
  int64_t count(int k) const;
  bool operator==(const SubgroupCode&) const = default;
};

SubgroupCode empty_code(int degree, int n_max);
SubgroupCode code_of(const std::vector<Perm>& c, int degree, int n_max);
SubgroupCode code_of(const PermGroup& g, int n_max);
// Every permutation whose graph lies in the code. Needs n_max >= degree.
std::vector<Perm> group_of_code(const SubgroupCode& f);
bool is_downward_closed(const SubgroupCode& f);
SharpReport sharp_code_report(const SubgroupCode& f);
bool is_sharp_code(const SubgroupCode& f);
SubgroupCode system_to_code(const TruncatedSystem& s);
// Requires each arity of the code to be an equivalence relation.
TruncatedSystem code_to_system(const SubgroupCode& f);

// Automorphisms moving every tuple within its class.
PermGroup fix(const FinStructure& m, const TruncatedSystem& s, int guard_size = 10);
// Automorphisms of m that also preserve every E_k.
PermGroup sharp_automorphism_group(const FinStructure& m, const TruncatedSystem& s, int guard_size = 10);

bool is_subgroup_of(const PermGroup& h, const PermGroup& g);
PermGroup conjugate(const PermGroup& h, const Perm& delta);
// Least delta in g (lexicographic) with delta h1 delta^-1 = h2.
std::optional<Perm> conjugacy_test(const PermGroup& h1, const PermGroup& h2, const PermGroup& g);

struct BireductionResult {
  bool isomorphic = false;  // (M,S1) and (M,S2) are sharp-isomorphic
  bool conjugate = false;   // fix groups are conjugate in Aut(M)
  std::optional<Perm> isomorphism;
  std::optional<Perm> conjugator;
  bool agree() const { return isomorphic == conjugate; }
};

BireductionResult bireduction_check(const FinStructure& m, const TruncatedSystem& s1, const TruncatedSystem& s2,
                                    int guard_size = 10);

struct InducedAction {
  std::vector<Perm> domain;  // Aut(M, S)
  std::vector<Perm> images;  // induced permutations of the flattening's elements
  std::vector<Perm> target;  // Aut(flatten(M, S)), enumerated on the flat side
  bool homomorphism = false;
  bool surjective = false;
};

InducedAction induced_flat_action(const FinStructure& m, const TruncatedSystem& s, int guard_size = 10);
// The permutation of flatten(m, s) induced by an automorphism preserving s.
Perm induced_permutation(const TruncatedSystem& s, const Perm& sigma);

int64_t exponent(const PermGroup& g);

// All subgroups, ordered by size and then by element bitmask. Needs |g| <= guard (at most 64).
std::vector<PermGroup> all_subgroups(const PermGroup& g, size_t guard = 48);
bool is_normal(const PermGroup& n, const PermGroup& g);
std::vector<PermGroup> normal_subgroups(const PermGroup& g, size_t guard = 48);

// G acting on the left cosets of a normal subgroup: a permutation model of G/N with the quotient map.
struct CosetAction {
  PermGroup quotient;
  std::vector<int> image_of;  // element index in g -> element index in quotient
};
CosetAction coset_action(const PermGroup& g, const PermGroup& n);
PermGroup preimage(const PermGroup& g, const CosetAction& q, const PermGroup& h);

struct DividesWitness {
  PermGroup subgroup;
  std::vector<Perm> images;  // image in h of each subgroup generator
};
// A subgroup of g with a surjective homomorphism onto h, or none.
std::optional<DividesWitness> divides_check(const PermGroup& g, const PermGroup& h, size_t guard = 48);
bool is_surjective_homomorphism(const PermGroup& src, const std::vector<Perm>& images, const PermGroup& dst);

std::string serialize_group_json(const PermGroup& g);
PermGroup parse_group_json(std::string_view text);
std::string serialize_code_json(const SubgroupCode& f);

}  // namespace scottflat
