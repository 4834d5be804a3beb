#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scottflat/backforth.hpp"
#include "scottflat/structures.hpp"

namespace scottflat {

// Every injection k -> n for k = 0..n, concatenated in order of k and then lexicographically.
// A projection table of an n-ary element is indexed by position in this list.
const std::vector<SubseqMap>& projection_maps(int n);
int projection_slot(const SubseqMap& f);
int projection_slot(int n, const std::vector<int>& values);

struct FlatElement {
  int arity = 0;
  QfDiagram diagram;
  std::vector<int> proj;  // image element per projection slot, -1 when missing
  // Diagrams of elements merged into this one. The element's type is the union of all its
  // diagrams, which is complete only when they coincide.
  std::vector<QfDiagram> merged;
  bool operator==(const FlatElement&) const = default;
};

struct FlatStructure {
  int n_max = 1;
  Vocabulary vocab;
  std::vector<FlatElement> elements;
  // Relations that are graphs of relationalized functions: the last place is the value.
  std::vector<int> graph_relations;

  int size() const { return static_cast<int>(elements.size()); }
  int arity(int a) const { return elements[a].arity; }
  const QfDiagram& diagram(int a) const { return elements[a].diagram; }
  int project(int a, const SubseqMap& f) const;
  int project(int a, const std::vector<int>& values) const;
  // Elements of each arity, in id order.
  std::vector<std::vector<int>> universes() const;
  bool operator==(const FlatStructure&) const = default;
};

// Derived lookup tables for a well-formed flat structure.
class FlatIndex {
 public:
  explicit FlatIndex(const FlatStructure& b);
  const std::vector<int>& universe(int n) const { return universe_[n]; }
  // Elements w of arity n+1 with P^{id_{n,n+1}}(w) = a.
  const std::vector<int>& fiber(int a) const { return fiber_[a]; }
  // Elements c of arity m >= arity(a) with P^{id}(c) = a.
  std::vector<int> above(int a, int m) const;

 private:
  const FlatStructure* b_;
  std::vector<std::vector<int>> universe_;
  std::vector<std::vector<int>> fiber_;
};

// E_n-classes as elements, ordered by arity and then by class id.
FlatStructure flatten(const FinStructure& m, const TruncatedSystem& s,
                      std::vector<int> graph_relations = {});
// Offset of the first n-ary element in a flattening of s.
int flat_element_id(const TruncatedSystem& s, int n, int class_id);

struct FlatReport {
  bool ok = true;
  std::string axiom;  // "1a", "1b", "1c", "1d", "2a", "2b", "3", "4", "5", "6", "7"
  std::string detail;
  std::vector<int> witness;
  int64_t amalgamation_checked = 0;
  int64_t amalgamation_skipped = 0;
  int64_t duplication_skipped = 0;
  int64_t function_skipped = 0;
};

FlatReport check_flat_axioms(const FlatStructure& b);

// All c of arity m+n above a with x_{f*(i)} = x_{m+i}; a flat structure has exactly one.
std::vector<int> blowup_witnesses(const FlatStructure& b, int a, const std::vector<int>& fstar);
int blowup(const FlatStructure& b, int a, const std::vector<int>& fstar);
int gen_projection(const FlatStructure& b, int a, const std::vector<int>& fstar);

// The element of arity h.size() realizing the diagram pattern of (x_{h(0)}, ...) over a.
// Needs only h.size() <= n_max; agrees with gen_projection where both are defined.
class PatternLifter {
 public:
  explicit PatternLifter(const FlatStructure& b);
  int lift(int a, const std::vector<int>& h) const;

 private:
  const FlatStructure* b_;
  std::map<std::pair<std::vector<int>, int>, int> by_pattern_;
};

// Translated formulas: each node has a single free point variable of a fixed arity.
struct FlatFormula {
  enum class Kind { Leaf, And, Or, Not, Exists };
  Kind kind = Kind::Leaf;
  int arity = 0;
  Formula leaf;  // quantifier-free, variables below arity
  std::vector<FlatFormula> kids;
};

// Translation at the given point arity; free variables must lie below it.
FlatFormula translate(const Formula& phi, int arity);
FlatFormula translate(const Formula& phi);
int flat_depth(const FlatFormula& f);
bool eval_flat(const FlatStructure& b, const FlatFormula& f, int a);
std::string flat_formula_to_string(const FlatFormula& f, const Vocabulary& v);

struct HausdorffResult {
  bool hausdorff = true;
  int left = -1, right = -1;  // a non-separated pair when not Hausdorff
  std::vector<int> colors;    // stable coloring; discrete iff Hausdorff
  int rounds = 0;
};

HausdorffResult hausdorff_check(const FlatStructure& b);
// Stable colorings of two structures in a shared color space.
std::pair<std::vector<int>, std::vector<int>> joint_colors(const FlatStructure& x, const FlatStructure& y);

// Arity-, diagram- and projection-preserving maps.
bool is_flat_homomorphism(const FlatStructure& x, const FlatStructure& y, const std::vector<int>& map);
bool is_flat_isomorphism(const FlatStructure& x, const FlatStructure& y, const std::vector<int>& map);
void for_each_flat_isomorphism(const FlatStructure& x, const FlatStructure& y,
                               const std::function<bool(const std::vector<int>&)>& visit);
std::optional<std::vector<int>> find_flat_isomorphism(const FlatStructure& x, const FlatStructure& y);
std::vector<std::vector<int>> flat_automorphisms(const FlatStructure& b);
// Image of b under the bijection a -> perm[a].
FlatStructure relabel_flat(const FlatStructure& b, const std::vector<int>& perm);
// Identifies y with x: references to y are redirected, y's diagram joins x's type, ids above y shift down.
FlatStructure merge_flat_elements(const FlatStructure& b, int x, int y);

std::string serialize_flat_json(const FlatStructure& b);
FlatStructure parse_flat_json(std::string_view text);
std::string serialize_system_json(const TruncatedSystem& s);
TruncatedSystem parse_system_json(std::string_view text);

}  // namespace scottflat
