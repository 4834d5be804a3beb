#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scottflat/errors.hpp"

namespace scottflat {

using Tuple = std::vector<int>;

struct Symbol {
  std::string name;
  int arity = 0;
  auto operator<=>(const Symbol&) const = default;
};

// Finite signature. Function symbols are accepted only as input to relationalize().
struct Vocabulary {
  std::vector<Symbol> relations;
  std::vector<std::string> constants;
  std::vector<Symbol> functions;

  void validate() const;
  int relation_index(std::string_view name) const;
  int constant_index(std::string_view name) const;
  int function_index(std::string_view name) const;
  bool relational() const { return functions.empty(); }
  bool operator==(const Vocabulary&) const = default;
};

// Universe is 0..size-1. Relations, constants and functions are parallel to the vocabulary lists.
struct FinStructure {
  Vocabulary vocab;
  int size = 1;
  std::vector<std::set<Tuple>> relations;
  std::vector<int> constants;
  std::vector<std::map<Tuple, int>> functions;

  void validate() const;
  bool holds(int rel, const Tuple& t) const { return relations[rel].count(t) > 0; }
  bool operator==(const FinStructure&) const = default;
};

// Dense membership tables for fast repeated lookups.
class DenseStructure {
 public:
  explicit DenseStructure(const FinStructure& m);
  const FinStructure& structure() const { return *m_; }
  bool holds(int rel, const int* t) const;
  bool holds(int rel, const Tuple& t) const { return holds(rel, t.data()); }

 private:
  const FinStructure* m_;
  std::vector<std::vector<uint8_t>> table_;
};

// Number of tuples of length k over an m-element universe, and the lexicographic rank bijection.
int64_t tuple_count(int m, int k);
int64_t encode_tuple(const Tuple& t, int m);
Tuple decode_tuple(int64_t code, int k, int m);

// Injective map k -> n given by its value list.
struct SubseqMap {
  int k = 0;
  int n = 0;
  std::vector<int> values;

  static SubseqMap identity(int n);
  static SubseqMap prefix(int k, int n);
  void validate() const;
  bool is_identity() const;
  auto operator<=>(const SubseqMap&) const = default;
};

Tuple subsequence(const Tuple& t, const SubseqMap& f);
// g∘f for f: k->n and g: n->m.
SubseqMap compose(const SubseqMap& g, const SubseqMap& f);
// All injections k->n in lexicographic order of their value lists.
const std::vector<SubseqMap>& injections(int k, int n);
// All maps n->m (arbitrary), lexicographic.
std::vector<std::vector<int>> all_maps(int n, int m);

// Complete quantifier-free diagram of an n-tuple.
struct QfDiagram {
  int arity = 0;
  std::vector<int> rel_arity;                // arity of each relation symbol
  std::vector<int> eq;                       // eq[i] = least j with x_j = x_i
  std::vector<std::vector<uint8_t>> atoms;   // per relation, indexed by variable tuples in base `arity`
  std::vector<std::vector<int>> consts;      // per constant, sorted variable indices equal to it

  bool equal(int i, int j) const { return eq[i] == eq[j]; }
  bool atom(int rel, const Tuple& vars) const;
  auto operator<=>(const QfDiagram&) const = default;
};

QfDiagram qf_type(const FinStructure& m, const Tuple& t);
QfDiagram qf_type(const DenseStructure& m, const Tuple& t);
// Diagram of (x_{h(0)},...,x_{h(k-1)}) for any map h: k -> d.arity.
QfDiagram pullback(const QfDiagram& d, const std::vector<int>& h);
// Empty when the diagram is a complete consistent type; otherwise the reason.
std::optional<std::string> diagram_defect(const QfDiagram& d, const Vocabulary& v);
// Quotient witness realizing a consistent diagram: the structure on the equality classes.
FinStructure diagram_witness(const QfDiagram& d, const Vocabulary& v);
std::string diagram_to_string(const QfDiagram& d, const Vocabulary& v);

// Finitary formulas. Quantifiers bind vars[0].
struct Formula {
  enum class Kind { True, False, Rel, Eq, EqConst, And, Or, Not, Exists, Forall };
  Kind kind = Kind::True;
  int symbol = -1;
  std::vector<int> vars;
  std::vector<Formula> kids;

  static Formula truth(bool value);
  static Formula rel(int r, std::vector<int> vars);
  static Formula eq(int i, int j);
  static Formula eq_const(int i, int c);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula neg(Formula f);
  static Formula exists(int var, Formula body);
  static Formula forall(int var, Formula body);
};

int free_bound(const Formula& f);
int quantifier_rank(const Formula& f);
bool is_quantifier_free(const Formula& f);
bool eval_formula(const FinStructure& m, const Formula& f, const Tuple& t);
// Truth of a quantifier-free formula in a diagram.
bool eval_qf(const QfDiagram& d, const Formula& f);
std::string formula_to_string(const Formula& f, const Vocabulary& v);

// Replace each k-ary function by its (k+1)-ary graph relation.
FinStructure relationalize(const FinStructure& m);

// Image of m under the bijection x -> perm[x].
FinStructure relabel(const FinStructure& m, const std::vector<int>& perm);
bool is_isomorphism(const FinStructure& a, const FinStructure& b, const std::vector<int>& perm);
bool is_automorphism(const FinStructure& m, const std::vector<int>& perm);
// Calls visit for each isomorphism a -> b until it returns false. Requires relational vocabularies.
void for_each_isomorphism(const FinStructure& a, const FinStructure& b,
                          const std::function<bool(const std::vector<int>&)>& visit);
std::optional<std::vector<int>> find_isomorphism(const FinStructure& a, const FinStructure& b);
std::vector<std::vector<int>> enumerate_automorphisms(const FinStructure& m);

// Text format: `size m; rel E/2 {(0,1)}; const c = 0; fun f/1 {(0)->1};`
FinStructure parse_structure(std::string_view text);
std::string serialize_structure(const FinStructure& m);
FinStructure parse_structure_json(std::string_view text);
std::string serialize_structure_json(const FinStructure& m);

}  // namespace scottflat
