#include "scottflat/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

#include "json.hpp"

namespace scottflat {

// ---- graphs

void Graph::validate() const {
  if (k < 1) throw InputError("graph needs at least one vertex");
  for (const auto& [i, j] : edges) {
    if (i == j) throw InputError("graph has a loop at " + std::to_string(i));
    if (i > j) throw InputError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") is not normalized");
    if (i < 0 || j >= k) throw InputError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
  }
}

bool Graph::adjacent(int i, int j) const {
  if (i > j) std::swap(i, j);
  return edges.count({i, j}) > 0;
}

Graph parse_graph(std::string_view text) {
  size_t pos = 0;
  int line = 1, col = 1;
  auto advance = [&] {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  };
  auto skip = [&] {
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        advance();
      } else if (text[pos] == '#') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else {
        break;
      }
    }
  };
  auto fail = [&](const std::string& msg) -> ParseError { return ParseError(msg, line, col); };
  auto number = [&] {
    skip();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) throw fail("expected a number");
    int v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      if (v > 1000000) throw fail("number too large");
      advance();
    }
    return v;
  };
  auto expect = [&](char c) {
    skip();
    if (pos >= text.size() || text[pos] != c) throw fail(std::string("expected '") + c + "'");
    advance();
  };
  Graph g;
  g.k = number();
  skip();
  if (pos < text.size() && text[pos] == ';') advance();
  while (true) {
    skip();
    if (pos >= text.size()) break;
    expect('(');
    int i = number();
    expect(',');
    int j = number();
    expect(')');
    if (i == j) throw InputError("loop at vertex " + std::to_string(i));
    if (i >= g.k || j >= g.k)
      throw InputError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") leaves the vertex range");
    g.edges.insert({std::min(i, j), std::max(i, j)});
    skip();
    if (pos < text.size() && text[pos] == ';') advance();
  }
  g.validate();
  return g;
}

std::string serialize_graph(const Graph& g) {
  std::string out = std::to_string(g.k) + ";";
  for (const auto& [i, j] : g.edges) out += " (" + std::to_string(i) + "," + std::to_string(j) + ");";
  return out + "\n";
}

Graph relabel_graph(const Graph& g, const Perm& perm) {
  Graph out;
  out.k = g.k;
  for (const auto& [i, j] : g.edges) out.edges.insert({std::min(perm[i], perm[j]), std::max(perm[i], perm[j])});
  return out;
}

bool graphs_isomorphic(const Graph& g, const Graph& h) {
  if (g.k != h.k || g.edges.size() != h.edges.size()) return false;
  Perm perm = identity_perm(g.k);
  do {
    if (relabel_graph(g, perm) == h) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::vector<Graph> all_graphs(int k) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) slots.push_back({i, j});
  if (slots.size() > 20) throw GuardExceeded("too many graphs to enumerate");
  std::vector<Graph> out;
  for (uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
    Graph g;
    g.k = k;
    for (size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1) g.edges.insert(slots[s]);
    out.push_back(std::move(g));
  }
  return out;
}

// ---- trees

namespace {

void validate_parent(const std::vector<int>& parent) {
  const int n = static_cast<int>(parent.size());
  if (n == 0) throw InputError("tree has no nodes");
  int roots = 0;
  for (int v = 0; v < n; ++v) {
    if (parent[v] == -1) {
      ++roots;
    } else if (parent[v] < 0 || parent[v] >= n || parent[v] == v) {
      throw InputError("node " + std::to_string(v) + " has invalid parent " + std::to_string(parent[v]));
    }
  }
  if (roots != 1) throw InputError("tree must have exactly one root, found " + std::to_string(roots));
}

std::vector<std::vector<int>> child_lists(const std::vector<int>& parent) {
  std::vector<std::vector<int>> ch(parent.size());
  for (size_t v = 0; v < parent.size(); ++v)
    if (parent[v] >= 0) ch[parent[v]].push_back(static_cast<int>(v));
  return ch;
}

int find_root(const std::vector<int>& parent) {
  return static_cast<int>(std::find(parent.begin(), parent.end(), -1) - parent.begin());
}

std::vector<int> bfs_order(const std::vector<int>& parent, const std::vector<std::vector<int>>& ch) {
  std::vector<int> order{find_root(parent)};
  for (size_t i = 0; i < order.size(); ++i)
    for (int c : ch[order[i]]) order.push_back(c);
  if (order.size() != parent.size()) throw InputError("parent array has a cycle or is disconnected");
  return order;
}

// Children sorted by subtree code, ties by id.
std::vector<std::vector<int>> sorted_children(const std::vector<std::vector<int>>& ch,
                                              const std::vector<std::string>& code) {
  auto out = ch;
  for (auto& list : out)
    std::stable_sort(list.begin(), list.end(), [&](int a, int b) { return code[a] < code[b]; });
  return out;
}

// New id -> old id for the canonical BFS numbering.
std::vector<int> canonical_order(const std::vector<int>& parent, const std::vector<std::string>& code) {
  auto ch = sorted_children(child_lists(parent), code);
  std::vector<int> order{find_root(parent)};
  for (size_t i = 0; i < order.size(); ++i)
    for (int c : ch[order[i]]) order.push_back(c);
  return order;
}

PaddedTree renumber(const std::vector<int>& parent, const std::vector<int>& order, int p) {
  std::vector<int> new_id(parent.size());
  for (size_t i = 0; i < order.size(); ++i) new_id[order[i]] = static_cast<int>(i);
  PaddedTree t;
  t.p = p;
  t.parent.resize(parent.size());
  for (size_t i = 0; i < order.size(); ++i) {
    int old = order[i];
    t.parent[i] = parent[old] < 0 ? -1 : new_id[parent[old]];
  }
  return t;
}

}  // namespace

int PaddedTree::root() const { return find_root(parent); }

std::vector<std::vector<int>> PaddedTree::children() const { return child_lists(parent); }

std::vector<std::string> subtree_codes(const std::vector<int>& parent) {
  validate_parent(parent);
  auto ch = child_lists(parent);
  auto order = bfs_order(parent, ch);
  std::vector<std::string> code(parent.size());
  std::vector<int> idx;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    idx = ch[v];
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return code[a] < code[b]; });
    size_t len = 2;
    for (int c : idx) len += code[c].size();
    std::string s;
    s.reserve(len);
    s += '(';
    for (int c : idx) s += code[c];
    s += ')';
    code[v] = std::move(s);
  }
  return code;
}

PaddedTree canonical_tree(const std::vector<int>& parent, int p) {
  auto code = subtree_codes(parent);
  return renumber(parent, canonical_order(parent, code), p);
}

bool trees_isomorphic(const PaddedTree& a, const PaddedTree& b) {
  if (a.size() != b.size()) return false;
  return canonical_tree(a.parent, a.p).parent == canonical_tree(b.parent, b.p).parent;
}

std::optional<std::string> padding_defect(const PaddedTree& t, int p) {
  auto code = subtree_codes(t.parent);
  auto ch = t.children();
  for (int v = 0; v < t.size(); ++v) {
    std::map<std::string_view, int> counts;
    for (int c : ch[v]) ++counts[code[c]];
    for (int c : ch[v])
      if (counts[code[c]] < p)
        return "node " + std::to_string(v) + ": child " + std::to_string(c) + " has " +
               std::to_string(counts[code[c]]) + " isomorphic siblings (itself included), need " + std::to_string(p);
  }
  return std::nullopt;
}

PaddedTree graph_to_padded_tree(const Graph& g, int p, int guard_vertices) {
  g.validate();
  if (g.k > guard_vertices)
    throw GuardExceeded("padded tree coding limited to " + std::to_string(guard_vertices) + " vertices");
  if (p < 2) throw InputError("padding multiplicity must be at least 2");
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < g.k; ++i)
    for (int j = i + 1; j < g.k; ++j) slots.push_back({i, j});
  const int len = static_cast<int>(slots.size());

  std::vector<int> parent{-1};
  auto add = [&](int par) {
    parent.push_back(par);
    return static_cast<int>(parent.size()) - 1;
  };
  auto add_star = [&](int par, int leaves) {
    int s = add(par);
    for (int i = 0; i < leaves; ++i) add(s);
  };

  Perm order = identity_perm(g.k);
  do {
    std::vector<int> ones;
    for (int s = 0; s < len; ++s)
      if (g.adjacent(order[slots[s].first], order[slots[s].second])) ones.push_back(s);
    for (int copy = 0; copy < p; ++copy) {
      int cat = add(0);
      // The largest star marks the string length; a star with p + s leaves marks a one at position s.
      for (int r = 0; r < p; ++r) add_star(cat, p + len);
      for (int s : ones)
        for (int r = 0; r < p; ++r) add_star(cat, p + s);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return canonical_tree(parent, p);
}

std::string serialize_tree_json(const PaddedTree& t) {
  nlohmann::json j = {{"nodes", t.size()}, {"p", t.p}, {"parent", t.parent}};
  return j.dump() + "\n";
}

PaddedTree parse_tree_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1, static_cast<int>(e.byte));
  }
  try {
    PaddedTree t;
    t.parent = j.at("parent").get<std::vector<int>>();
    t.p = j.value("p", 3);
    if (j.contains("nodes") && j.at("nodes").get<int>() != t.size())
      throw InputError("node count does not match the parent array");
    validate_parent(t.parent);
    bfs_order(t.parent, child_lists(t.parent));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed tree JSON: ") + e.what());
  }
}

// ---- sparse permutations

int SparsePerm::image(int x) const {
  auto it = std::lower_bound(moves.begin(), moves.end(), std::make_pair(x, std::numeric_limits<int>::min()));
  return it != moves.end() && it->first == x ? it->second : x;
}

SparsePerm to_sparse(const Perm& p) {
  SparsePerm s;
  for (size_t x = 0; x < p.size(); ++x)
    if (p[x] != static_cast<int>(x)) s.moves.push_back({static_cast<int>(x), p[x]});
  return s;
}

Perm to_dense(const SparsePerm& s, int degree) {
  Perm p = identity_perm(degree);
  for (const auto& [x, y] : s.moves) p[x] = y;
  return p;
}

SparseGroup tree_automorphism_generators(const PaddedTree& t) {
  auto code = subtree_codes(t.parent);
  auto ch = sorted_children(t.children(), code);
  // Preorder of each subtree with canonically sorted children; equal codes give aligned lists.
  std::function<void(int, std::vector<int>&)> preorder = [&](int v, std::vector<int>& out) {
    out.push_back(v);
    for (int c : ch[v]) preorder(c, out);
  };
  SparseGroup a;
  a.degree = t.size();
  for (int v = 0; v < t.size(); ++v) {
    const auto& kids = ch[v];
    for (size_t i = 0; i < kids.size(); ++i)
      for (size_t j = i + 1; j < kids.size() && code[kids[j]] == code[kids[i]]; ++j) {
        std::vector<int> left, right;
        preorder(kids[i], left);
        preorder(kids[j], right);
        SparsePerm s;
        for (size_t q = 0; q < left.size(); ++q) {
          s.moves.push_back({left[q], right[q]});
          s.moves.push_back({right[q], left[q]});
        }
        std::sort(s.moves.begin(), s.moves.end());
        a.gens.push_back(std::move(s));
      }
  }
  return a;
}

// ---- orders

bool PartialOrder::leq(int a, int b) const { return std::binary_search(above[a].begin(), above[a].end(), b); }

namespace {

void fill_below(PartialOrder& o) {
  o.below.assign(o.n, {});
  for (int a = 0; a < o.n; ++a)
    for (int b : o.above[a]) o.below[b].push_back(a);
}

}  // namespace

PartialOrder ancestor_order(const PaddedTree& t) {
  auto ch = t.children();
  PartialOrder o;
  o.n = t.size();
  o.above.assign(o.n, {});
  auto order = bfs_order(t.parent, ch);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    auto& up = o.above[v];
    up.push_back(v);
    for (int c : ch[v]) up.insert(up.end(), o.above[c].begin(), o.above[c].end());
    std::sort(up.begin(), up.end());
  }
  fill_below(o);
  return o;
}

PartialOrder recover_order(const SparseGroup& a) {
  const int n = a.degree;
  std::vector<std::vector<int>> support(a.gens.size());
  std::vector<std::vector<int>> movers(n);
  for (size_t g = 0; g < a.gens.size(); ++g) {
    for (const auto& [x, y] : a.gens[g].moves)
      if (x != y) {
        support[g].push_back(x);
        movers[x].push_back(static_cast<int>(g));
      }
    std::sort(support[g].begin(), support[g].end());
  }
  PartialOrder o;
  o.n = n;
  o.above.assign(n, {});
  for (int x = 0; x < n; ++x) {
    if (movers[x].empty()) {
      o.above[x].resize(n);
      std::iota(o.above[x].begin(), o.above[x].end(), 0);
      continue;
    }
    int best = *std::min_element(movers[x].begin(), movers[x].end(),
                                 [&](int g, int h) { return support[g].size() < support[h].size(); });
    for (int y : support[best]) {
      bool all = true;
      for (int g : movers[x])
        if (!std::binary_search(support[g].begin(), support[g].end(), y)) {
          all = false;
          break;
        }
      if (all) o.above[x].push_back(y);
    }
  }
  fill_below(o);
  return o;
}

std::optional<std::vector<int>> order_as_tree(const PartialOrder& o) {
  std::vector<int> parent(o.n, -1);
  int roots = 0;
  for (int b = 0; b < o.n; ++b) {
    const auto& preds = o.below[b];
    if (preds.size() == 1) {
      ++roots;
      continue;
    }
    int par = -1;
    for (int a : preds)
      if (a != b && (par < 0 || o.below[a].size() > o.below[par].size())) par = a;
    if (o.below[par].size() + 1 != preds.size()) return std::nullopt;
    parent[b] = par;
  }
  if (roots != 1) return std::nullopt;
  PaddedTree t;
  t.parent = parent;
  try {
    if (!(ancestor_order(t) == o)) return std::nullopt;
  } catch (const InputError&) {
    return std::nullopt;
  }
  return parent;
}

// ---- conjugacy

namespace {

SparsePerm conjugate_sparse(const SparsePerm& g, const Perm& delta) {
  SparsePerm c;
  for (const auto& [x, y] : g.moves) c.moves.push_back({delta[x], delta[y]});
  std::sort(c.moves.begin(), c.moves.end());
  return c;
}

bool preserves(const SparsePerm& c, const PartialOrder& o) {
  for (const auto& [x, cx] : c.moves) {
    for (int y : o.above[x])
      if (!o.leq(cx, c.image(y))) return false;
    for (int y : o.below[x])
      if (!o.leq(c.image(y), cx)) return false;
  }
  return true;
}

constexpr int kDenseDegree = 8;
constexpr int kOrderSearchDegree = 12;

PermGroup materialize(const SparseGroup& a) {
  std::vector<Perm> gens;
  for (const auto& g : a.gens) gens.push_back(to_dense(g, a.degree));
  return generate(a.degree, gens);
}

// Order isomorphisms from o1 to o2, in lexicographic order of their image lists.
void for_each_order_isomorphism(const PartialOrder& o1, const PartialOrder& o2,
                                const std::function<bool(const Perm&)>& visit) {
  const int n = o1.n;
  Perm img(n, -1);
  std::vector<bool> used(n, false);
  bool stop = false;
  std::function<void(int)> rec = [&](int x) {
    if (stop) return;
    if (x == n) {
      if (!visit(img)) stop = true;
      return;
    }
    for (int y = 0; y < n && !stop; ++y) {
      if (used[y] || o1.above[x].size() != o2.above[y].size() || o1.below[x].size() != o2.below[y].size()) continue;
      bool ok = true;
      for (int z = 0; z < x && ok; ++z)
        ok = o1.leq(z, x) == o2.leq(img[z], y) && o1.leq(x, z) == o2.leq(y, img[z]);
      if (!ok) continue;
      img[x] = y;
      used[y] = true;
      rec(x + 1);
      used[y] = false;
      img[x] = -1;
    }
  };
  rec(0);
}

}  // namespace

bool is_conjugator(const SparseGroup& a, const SparseGroup& b, const Perm& delta) {
  if (a.degree != b.degree || static_cast<int>(delta.size()) != a.degree || !is_perm(delta)) return false;
  if (a.degree <= kDenseDegree) {
    PermGroup ga = materialize(a), gb = materialize(b);
    if (ga.order() != gb.order()) return false;
    for (const auto& g : ga.gens)
      if (!gb.contains(perm_mul(delta, perm_mul(g, perm_inv(delta))))) return false;
    return true;
  }
  // Beyond tiny degrees both groups are taken to be the full automorphism groups of their recovered
  // orders, which holds for sibling-transposition generators of padded trees.
  PartialOrder oa = recover_order(a), ob = recover_order(b);
  Perm inv = perm_inv(delta);
  for (const auto& g : a.gens)
    if (!preserves(conjugate_sparse(g, delta), ob)) return false;
  for (const auto& h : b.gens)
    if (!preserves(conjugate_sparse(h, inv), oa)) return false;
  return true;
}

std::optional<Perm> conjugacy_by_orders(const SparseGroup& a, const SparseGroup& b) {
  if (a.degree != b.degree) return std::nullopt;
  PartialOrder oa = recover_order(a), ob = recover_order(b);
  auto ta = order_as_tree(oa), tb = order_as_tree(ob);
  if (ta.has_value() != tb.has_value()) return std::nullopt;
  if (ta) {
    auto ca = subtree_codes(*ta), cb = subtree_codes(*tb);
    if (ca[find_root(*ta)] != cb[find_root(*tb)]) return std::nullopt;
    auto na = canonical_order(*ta, ca), nb = canonical_order(*tb, cb);
    Perm delta(a.degree);
    for (size_t i = 0; i < na.size(); ++i) delta[na[i]] = nb[i];
    if (is_conjugator(a, b, delta)) return delta;
  }
  if (a.degree > kOrderSearchDegree) return std::nullopt;
  std::optional<Perm> found;
  for_each_order_isomorphism(oa, ob, [&](const Perm& delta) {
    if (!is_conjugator(a, b, delta)) return true;
    found = delta;
    return false;
  });
  return found;
}

std::optional<Perm> blind_conjugacy(const SparseGroup& a, const SparseGroup& b, int guard_degree) {
  if (a.degree > guard_degree) throw GuardExceeded("blind conjugacy search limited to degree " + std::to_string(guard_degree));
  if (a.degree != b.degree) return std::nullopt;
  const int n = a.degree;
  PermGroup ga = materialize(a), gb = materialize(b);
  if (ga.order() != gb.order()) return std::nullopt;
  auto orbit_sizes = [n](const PermGroup& g) {
    std::vector<int> size(n, 0);
    for (int x = 0; x < n; ++x) {
      std::set<int> orbit;
      for (const auto& p : g.elements) orbit.insert(p[x]);
      size[x] = static_cast<int>(orbit.size());
    }
    return size;
  };
  auto sa = orbit_sizes(ga), sb = orbit_sizes(gb);
  Perm delta(n, -1);
  std::vector<bool> used(n, false);
  std::optional<Perm> found;
  std::function<bool(int)> rec = [&](int x) {
    if (x == n) {
      Perm inv = perm_inv(delta);
      for (const auto& g : ga.gens)
        if (!gb.contains(perm_mul(delta, perm_mul(g, inv)))) return false;
      found = delta;
      return true;
    }
    for (int y = 0; y < n; ++y) {
      if (used[y] || sa[x] != sb[y]) continue;
      delta[x] = y;
      used[y] = true;
      if (rec(x + 1)) return true;
      used[y] = false;
    }
    return false;
  };
  rec(0);
  return found;
}

std::vector<PaddedTree> all_rooted_trees(int n) {
  if (n < 1) throw InputError("trees need at least one node");
  if (n > 10) throw GuardExceeded("rooted tree enumeration limited to 10 nodes");
  std::set<std::vector<int>> seen;
  std::vector<PaddedTree> out;
  std::vector<int> parent(n, -1);
  std::function<void(int)> rec = [&](int v) {
    if (v == n) {
      PaddedTree t = canonical_tree(parent, 1);
      if (seen.insert(t.parent).second) out.push_back(std::move(t));
      return;
    }
    for (int par = 0; par < v; ++par) {
      parent[v] = par;
      rec(v + 1);
    }
  };
  rec(1);
  std::sort(out.begin(), out.end(), [](const PaddedTree& x, const PaddedTree& y) { return x.parent < y.parent; });
  return out;
}

FsReport fs_pipeline_check(const Graph& g, const Graph& h, int p) {
  FsReport r;
  r.graphs_isomorphic = graphs_isomorphic(g, h);
  PaddedTree tg = graph_to_padded_tree(g, p), th = graph_to_padded_tree(h, p);
  r.nodes_g = tg.size();
  r.nodes_h = th.size();
  r.trees_isomorphic = trees_isomorphic(tg, th);
  if (r.nodes_g != r.nodes_h) return r;
  r.conjugator = conjugacy_by_orders(tree_automorphism_generators(tg), tree_automorphism_generators(th));
  r.codes_conjugate = r.conjugator.has_value();
  return r;
}

}  // namespace scottflat
