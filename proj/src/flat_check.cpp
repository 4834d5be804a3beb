#include <algorithm>
#include <map>
#include <set>

#include "scottflat/flat.hpp"

namespace scottflat {

namespace {

std::string vars_str(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::string("x") + std::to_string(v[i]);
  return s;
}

std::string map_str(const std::vector<int>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// A literal asserted by one diagram and negated by the other.
std::string conflict(const QfDiagram& d1, const QfDiagram& d2, const Vocabulary& v) {
  int n = d1.arity;
  if (d2.arity != n) return "diagrams of different arity";
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (d1.equal(i, j) != d2.equal(i, j))
        return "asserts both x" + std::to_string(i) + "=x" + std::to_string(j) + " and x" + std::to_string(i) +
               "!=x" + std::to_string(j);
  for (size_t r = 0; r < d1.atoms.size() && r < d2.atoms.size(); ++r)
    for (size_t code = 0; code < d1.atoms[r].size() && code < d2.atoms[r].size(); ++code)
      if (d1.atoms[r][code] != d2.atoms[r][code]) {
        std::string atom = v.relations[r].name + "(" +
                           vars_str(decode_tuple(static_cast<int64_t>(code), d1.rel_arity[r], n)) + ")";
        return "asserts both " + atom + " and !" + atom;
      }
  for (size_t c = 0; c < d1.consts.size() && c < d2.consts.size(); ++c)
    if (d1.consts[c] != d2.consts[c]) return "disagrees on which variables equal " + v.constants[c];
  return "";
}

FlatReport fail(std::string axiom, std::string detail, std::vector<int> witness) {
  FlatReport r;
  r.ok = false;
  r.axiom = std::move(axiom);
  r.detail = std::move(detail);
  r.witness = std::move(witness);
  return r;
}

// Maps through which every injection factors: adjacent transpositions and the last-place deletion.
std::vector<SubseqMap> elementary_maps(int m) {
  std::vector<SubseqMap> out;
  for (int i = 0; i + 1 < m; ++i) {
    SubseqMap t = SubseqMap::identity(m);
    std::swap(t.values[i], t.values[i + 1]);
    out.push_back(t);
  }
  if (m >= 1) out.push_back(SubseqMap::prefix(m - 1, m));
  return out;
}

std::optional<FlatReport> check_structural(const FlatStructure& b) {
  try {
    b.vocab.validate();
  } catch (const InputError& e) {
    return fail("1a", std::string("bad vocabulary: ") + e.what(), {});
  }
  if (!b.vocab.relational()) return fail("1a", "vocabulary has function symbols", {});
  if (b.n_max < 1) return fail("1a", "n_max must be at least 1", {});
  for (int a = 0; a < b.size(); ++a) {
    int n = b.arity(a);
    if (n < 0 || n > b.n_max) return fail("1a", "element " + std::to_string(a) + " has no arity in range", {a});
  }
  for (int a = 0; a < b.size(); ++a) {
    const auto& maps = projection_maps(b.arity(a));
    const auto& proj = b.elements[a].proj;
    if (proj.size() != maps.size()) return fail("1b", "element " + std::to_string(a) + " has a malformed projection table", {a});
    for (size_t s = 0; s < maps.size(); ++s) {
      int img = proj[s];
      std::string where = "P^" + map_str(maps[s].values) + " of element " + std::to_string(a);
      if (img < 0 || img >= b.size()) return fail("1b", where + " is undefined", {a});
      if (b.arity(img) != maps[s].k)
        return fail("1b", where + " lands in arity " + std::to_string(b.arity(img)), {a, img});
    }
  }
  for (int a = 0; a < b.size(); ++a) {
    int n = b.arity(a);
    if (n >= 1 && b.project(a, SubseqMap::identity(n)) != a)
      return fail("1c", "identity projection moves element " + std::to_string(a), {a, b.project(a, SubseqMap::identity(n))});
  }
  for (int a = 0; a < b.size(); ++a) {
    const FlatElement& e = b.elements[a];
    if (e.diagram.arity != e.arity) return fail("1d", "diagram arity differs from element arity", {a});
    if (auto why = diagram_defect(e.diagram, b.vocab)) return fail("1d", "element " + std::to_string(a) + ": " + *why, {a});
    for (const auto& other : e.merged) {
      std::string c = conflict(e.diagram, other, b.vocab);
      if (!c.empty()) return fail("1d", "type of element " + std::to_string(a) + " is not complete: " + c, {a});
    }
  }
  return std::nullopt;
}

std::optional<FlatReport> check_relational(const FlatStructure& b) {
  for (int a = 0; a < b.size(); ++a) {
    int m = b.arity(a);
    for (const auto& g : elementary_maps(m)) {
      int ga = b.project(a, g);
      for (const auto& f : projection_maps(g.k)) {
        int lhs = b.project(a, compose(g, f));
        int rhs = b.project(ga, f);
        if (lhs != rhs)
          return fail("2a",
                      "P^" + map_str(compose(g, f).values) + " of element " + std::to_string(a) + " is " +
                          std::to_string(lhs) + " but P^" + map_str(f.values) + "(P^" + map_str(g.values) + ") is " +
                          std::to_string(rhs),
                      {a, lhs, rhs});
      }
    }
  }
  // With composition in place, pullbacks along elementary maps determine all others.
  for (int a = 0; a < b.size(); ++a) {
    for (const auto& f : elementary_maps(b.arity(a))) {
      int img = b.project(a, f);
      if (b.diagram(img) != pullback(b.diagram(a), f.values))
        return fail("2b",
                    "diagram of P^" + map_str(f.values) + " of element " + std::to_string(a) +
                        " is not the pullback of its diagram",
                    {a, img});
    }
  }
  return std::nullopt;
}

std::optional<FlatReport> check_equality(const FlatStructure& b) {
  for (int a = 0; a < b.size(); ++a) {
    const QfDiagram& d = b.diagram(a);
    int n = b.arity(a);
    for (int k = 1; k <= n; ++k) {
      std::map<std::vector<int>, std::pair<int, std::vector<int>>> seen;
      for (const auto& f : injections(k, n)) {
        std::vector<int> key(k);
        for (int i = 0; i < k; ++i) key[i] = d.eq[f.values[i]];
        int img = b.project(a, f);
        auto [it, fresh] = seen.emplace(key, std::make_pair(img, f.values));
        if (!fresh && it->second.first != img)
          return fail("3",
                      "element " + std::to_string(a) + " identifies the variables of P^" + map_str(it->second.second) +
                          " and P^" + map_str(f.values) + " but their images differ",
                      {a, it->second.first, img});
      }
    }
  }
  return std::nullopt;
}

std::optional<FlatReport> check_amalgamation(const FlatStructure& b, const FlatIndex& idx, FlatReport& rep) {
  int top = b.n_max;
  for (int n = 0; n <= top; ++n)
    for (int m = 0; m <= top; ++m)
      for (int k = 0; k <= std::min(n, m); ++k) {
        int s = n + m - k;
        std::vector<int> v(m);
        for (int i = 0; i < m; ++i) v[i] = i < k ? i : n + (i - k);
        if (s > top) {
          for (int a : idx.universe(k))
            rep.amalgamation_skipped +=
                static_cast<int64_t>(idx.above(a, n).size()) * static_cast<int64_t>(idx.above(a, m).size());
          continue;
        }
        std::set<std::pair<int, int>> realized;
        int bslot = projection_slot(SubseqMap::prefix(n, s));
        int cslot = projection_slot(s, v);
        for (int d : idx.universe(s)) realized.emplace(b.elements[d].proj[bslot], b.elements[d].proj[cslot]);
        for (int a : idx.universe(k)) {
          auto bs = idx.above(a, n);
          auto cs = idx.above(a, m);
          for (int x : bs)
            for (int y : cs) {
              ++rep.amalgamation_checked;
              if (!realized.count({x, y}))
                return fail("4",
                            "no amalgam in arity " + std::to_string(s) + " of elements " + std::to_string(x) +
                                " and " + std::to_string(y) + " over " + std::to_string(a),
                            {a, x, y});
            }
        }
      }
  return std::nullopt;
}

std::optional<FlatReport> check_existentials(const FlatStructure& b, const FlatIndex& idx, FlatReport& rep) {
  if (b.n_max >= 2) {
    for (int a : idx.universe(1)) {
      bool found = false;
      for (int w : idx.fiber(a)) found = found || b.diagram(w).equal(0, 1);
      if (!found) return fail("5", "no duplicate of element " + std::to_string(a), {a});
    }
  } else {
    rep.duplication_skipped += static_cast<int64_t>(idx.universe(1).size());
  }
  for (size_t c = 0; c < b.vocab.constants.size(); ++c)
    for (int z : idx.universe(0)) {
      bool found = false;
      for (int w : idx.fiber(z)) found = found || !b.diagram(w).consts[c].empty();
      if (!found) return fail("6", "no point equals constant " + b.vocab.constants[c], {z});
    }
  for (int r : b.graph_relations) {
    if (r < 0 || r >= static_cast<int>(b.vocab.relations.size()))
      return fail("7", "graph relation index out of range", {});
    int k = b.vocab.relations[r].arity - 1;
    const std::string& name = b.vocab.relations[r].name;
    if (k + 1 > b.n_max) {
      rep.function_skipped += static_cast<int64_t>(idx.universe(k).size());
    } else {
      std::vector<int> vars(k + 1);
      for (int i = 0; i <= k; ++i) vars[i] = i;
      for (int a : idx.universe(k)) {
        bool found = false;
        for (int w : idx.fiber(a)) found = found || b.diagram(w).atom(r, vars);
        if (!found) return fail("7", name + " has no value on element " + std::to_string(a), {a});
      }
    }
    if (k + 2 > b.n_max) {
      rep.function_skipped += static_cast<int64_t>(idx.universe(k).size());
    } else {
      std::vector<int> first(k + 1), second(k + 1);
      for (int i = 0; i < k; ++i) first[i] = second[i] = i;
      first[k] = k;
      second[k] = k + 1;
      for (int w : idx.universe(k + 2)) {
        const QfDiagram& d = b.diagram(w);
        if (d.atom(r, first) && d.atom(r, second) && !d.equal(k, k + 1))
          return fail("7", name + " takes two values on element " + std::to_string(w), {w});
      }
    }
  }
  return std::nullopt;
}

}  // namespace

FlatReport check_flat_axioms(const FlatStructure& b) {
  if (auto r = check_structural(b)) return *r;
  if (auto r = check_relational(b)) return *r;
  if (auto r = check_equality(b)) return *r;
  FlatReport rep;
  FlatIndex idx(b);
  if (auto r = check_amalgamation(b, idx, rep)) {
    r->amalgamation_checked = rep.amalgamation_checked;
    r->amalgamation_skipped = rep.amalgamation_skipped;
    return *r;
  }
  if (auto r = check_existentials(b, idx, rep)) {
    r->amalgamation_checked = rep.amalgamation_checked;
    r->amalgamation_skipped = rep.amalgamation_skipped;
    return *r;
  }
  return rep;
}

}  // namespace scottflat
