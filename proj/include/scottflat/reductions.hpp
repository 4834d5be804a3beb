#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scottflat/groups.hpp"
#include "scottflat/structures.hpp"

namespace scottflat {

// ---- graphs and padded trees

struct Graph {
  int k = 1;
  std::set<std::pair<int, int>> edges;  // i < j

  void validate() const;
  bool adjacent(int i, int j) const;
  bool operator==(const Graph&) const = default;
};

// Text format: `k; (i,j); (i,j);`
Graph parse_graph(std::string_view text);
std::string serialize_graph(const Graph& g);
Graph relabel_graph(const Graph& g, const Perm& perm);
bool graphs_isomorphic(const Graph& g, const Graph& h);
// Every graph on k vertices, by edge bitmask.
std::vector<Graph> all_graphs(int k);

struct PaddedTree {
  std::vector<int> parent;  // parent[root] = -1; nodes are numbered in BFS order
  int p = 3;

  int size() const { return static_cast<int>(parent.size()); }
  int root() const;
  std::vector<std::vector<int>> children() const;
};

// Nested-parenthesis code of each subtree; equal codes mean isomorphic subtrees.
std::vector<std::string> subtree_codes(const std::vector<int>& parent);
// Renumbers nodes in BFS order with siblings sorted by subtree code.
PaddedTree canonical_tree(const std::vector<int>& parent, int p);
bool trees_isomorphic(const PaddedTree& a, const PaddedTree& b);
// Reason a node fails the padding condition with multiplicity p, if any.
std::optional<std::string> padding_defect(const PaddedTree& t, int p);

// Root with p caterpillars per vertex ordering; each caterpillar encodes the adjacency bit string.
PaddedTree graph_to_padded_tree(const Graph& g, int p = 3, int guard_vertices = 5);

std::string serialize_tree_json(const PaddedTree& t);
PaddedTree parse_tree_json(std::string_view text);

// ---- groups on tree nodes

struct SparsePerm {
  std::vector<std::pair<int, int>> moves;  // (point, image) for moved points, sorted by point
  int image(int x) const;
};

struct SparseGroup {
  int degree = 0;
  std::vector<SparsePerm> gens;
};

SparsePerm to_sparse(const Perm& p);
Perm to_dense(const SparsePerm& s, int degree);
// Transpositions of every pair of isomorphic sibling subtrees.
SparseGroup tree_automorphism_generators(const PaddedTree& t);

struct PartialOrder {
  int n = 0;
  std::vector<std::vector<int>> above;  // above[a] = sorted {b : a <= b}
  std::vector<std::vector<int>> below;  // below[b] = sorted {a : a <= b}

  bool leq(int a, int b) const;
  bool operator==(const PartialOrder& o) const { return n == o.n && above == o.above; }
};

PartialOrder ancestor_order(const PaddedTree& t);
// a <= b iff every generator that moves a also moves b. Equals "every element fixing b fixes a"
// when the stabilizers are generated by the generators they contain, as for sibling transpositions.
PartialOrder recover_order(const SparseGroup& a);
// Parent array when the order is a rooted-tree order, otherwise none.
std::optional<std::vector<int>> order_as_tree(const PartialOrder& o);

// Conjugacy in Sym(nodes) decided through recovered orders: order isomorphisms are tried and
// each candidate is verified as a conjugator.
std::optional<Perm> conjugacy_by_orders(const SparseGroup& a, const SparseGroup& b);
// Exhaustive search over Sym(degree); only for tiny degrees.
std::optional<Perm> blind_conjugacy(const SparseGroup& a, const SparseGroup& b, int guard_degree = 8);
bool is_conjugator(const SparseGroup& a, const SparseGroup& b, const Perm& delta);
// Every rooted unlabeled tree with n nodes, in canonical form.
std::vector<PaddedTree> all_rooted_trees(int n);

struct FsReport {
  bool graphs_isomorphic = false;
  bool trees_isomorphic = false;
  bool codes_conjugate = false;
  int nodes_g = 0, nodes_h = 0;
  std::optional<Perm> conjugator;
  bool agree() const { return graphs_isomorphic == codes_conjugate && trees_isomorphic == graphs_isomorphic; }
};

FsReport fs_pipeline_check(const Graph& g, const Graph& h, int p = 3);

// ---- cross-cutting equivalence relations

struct CrossCutSpec {
  std::vector<int> h;                        // class count per relation
  std::map<std::vector<int>, int> mult;      // cell -> multiplicity; absent cells have multiplicity 1

  void validate() const;
  int multiplicity(const std::vector<int>& cell) const;
  std::vector<std::vector<int>> cells() const;
  bool atomic() const;
};

CrossCutSpec parse_cross_cut_spec(std::string_view h_list);
// Relations E0..E{N-1}; elements are the copies of each cell in lexicographic cell order.
FinStructure build_cross_cut(const CrossCutSpec& spec, int guard_size = 64);
// Number of classes of the intersection of the relations selected by the mask.
int intersection_class_count(const FinStructure& m, uint32_t mask);

struct ExponentReport {
  int64_t aut_order = 0;
  int64_t exponent = 0;
  int k = 0;  // largest class count
  int64_t k_factorial = 0;
  bool divides = false;
  int q = 0;                 // prime above k
  bool obstruction = false;  // no subgroup of Aut maps onto C_q
};

ExponentReport exponent_experiment(const CrossCutSpec& spec, int guard_size = 64);

// Universe M/E_inf with the induced relations and unary predicates U<m> for class size m.
FinStructure quotient_coloring(const FinStructure& m);

}  // namespace scottflat
