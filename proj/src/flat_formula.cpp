#include <algorithm>
#include <map>

#include "scottflat/flat.hpp"

namespace scottflat {

namespace {

Formula rename(const Formula& f, const std::map<int, int>& vars, int arity) {
  Formula out = f;
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall)
    throw InputError("rename applies to quantifier-free formulas");
  for (int& v : out.vars) {
    auto it = vars.find(v);
    if (it == vars.end() || it->second >= arity)
      throw InputError("variable x" + std::to_string(v) + " is free beyond arity " + std::to_string(arity));
    v = it->second;
  }
  out.kids.clear();
  for (const auto& k : f.kids) out.kids.push_back(rename(k, vars, arity));
  return out;
}

FlatFormula node(FlatFormula::Kind kind, int arity, std::vector<FlatFormula> kids) {
  FlatFormula f;
  f.kind = kind;
  f.arity = arity;
  f.kids = std::move(kids);
  return f;
}

// Bound variables are renamed to their level: a quantifier under n free variables binds x_n.
FlatFormula translate_rec(const Formula& phi, int n, const std::map<int, int>& vars) {
  using K = Formula::Kind;
  if (is_quantifier_free(phi)) {
    FlatFormula f;
    f.kind = FlatFormula::Kind::Leaf;
    f.arity = n;
    f.leaf = rename(phi, vars, n);
    return f;
  }
  switch (phi.kind) {
    case K::And:
    case K::Or: {
      std::vector<FlatFormula> kids;
      for (const auto& k : phi.kids) kids.push_back(translate_rec(k, n, vars));
      return node(phi.kind == K::And ? FlatFormula::Kind::And : FlatFormula::Kind::Or, n, std::move(kids));
    }
    case K::Not:
      return node(FlatFormula::Kind::Not, n, {translate_rec(phi.kids[0], n, vars)});
    case K::Exists: {
      auto inner = vars;
      inner[phi.vars[0]] = n;
      return node(FlatFormula::Kind::Exists, n, {translate_rec(phi.kids[0], n + 1, inner)});
    }
    case K::Forall: {
      auto inner = vars;
      inner[phi.vars[0]] = n;
      FlatFormula body = node(FlatFormula::Kind::Not, n + 1, {translate_rec(phi.kids[0], n + 1, inner)});
      return node(FlatFormula::Kind::Not, n, {node(FlatFormula::Kind::Exists, n, {std::move(body)})});
    }
    default:
      break;
  }
  throw InputError("unexpected formula node");
}

}  // namespace

FlatFormula translate(const Formula& phi, int arity) {
  if (arity < free_bound(phi))
    throw InputError("formula has free variables beyond arity " + std::to_string(arity));
  std::map<int, int> vars;
  for (int i = 0; i < arity; ++i) vars[i] = i;
  return translate_rec(phi, arity, vars);
}

FlatFormula translate(const Formula& phi) { return translate(phi, free_bound(phi)); }

int flat_depth(const FlatFormula& f) {
  int d = 0;
  for (const auto& k : f.kids) d = std::max(d, flat_depth(k));
  return f.kind == FlatFormula::Kind::Exists ? d + 1 : d;
}

bool eval_flat(const FlatStructure& b, const FlatFormula& f, int a) {
  if (a < 0 || a >= b.size()) throw InputError("element out of range");
  if (b.arity(a) != f.arity)
    throw InputError("element arity " + std::to_string(b.arity(a)) + " does not match formula arity " +
                     std::to_string(f.arity));
  using K = FlatFormula::Kind;
  switch (f.kind) {
    case K::Leaf:
      return eval_qf(b.diagram(a), f.leaf);
    case K::And:
      for (const auto& k : f.kids)
        if (!eval_flat(b, k, a)) return false;
      return true;
    case K::Or:
      for (const auto& k : f.kids)
        if (eval_flat(b, k, a)) return true;
      return false;
    case K::Not:
      return !eval_flat(b, f.kids[0], a);
    case K::Exists: {
      int n = f.arity;
      if (n + 1 > b.n_max)
        throw InputError("arity overflow: quantifier needs arity " + std::to_string(n + 1) + " > n_max " +
                         std::to_string(b.n_max));
      int slot = projection_slot(SubseqMap::prefix(n, n + 1));
      for (int w = 0; w < b.size(); ++w)
        if (b.arity(w) == n + 1 && b.elements[w].proj[slot] == a && eval_flat(b, f.kids[0], w)) return true;
      return false;
    }
  }
  return false;
}

std::string flat_formula_to_string(const FlatFormula& f, const Vocabulary& v) {
  using K = FlatFormula::Kind;
  std::string z = "z" + std::to_string(f.arity);
  switch (f.kind) {
    case K::Leaf:
      return "[" + formula_to_string(f.leaf, v) + "](" + z + ")";
    case K::And:
    case K::Or: {
      if (f.kids.empty()) return f.kind == K::And ? "true" : "false";
      std::string s = "(";
      for (size_t i = 0; i < f.kids.size(); ++i)
        s += (i ? (f.kind == K::And ? " & " : " | ") : "") + flat_formula_to_string(f.kids[i], v);
      return s + ")";
    }
    case K::Not:
      return "!" + flat_formula_to_string(f.kids[0], v);
    case K::Exists: {
      std::string w = "z" + std::to_string(f.arity + 1);
      return "E" + w + " in U" + std::to_string(f.arity + 1) + ".(" + w + " >= " + z + " & " +
             flat_formula_to_string(f.kids[0], v) + ")";
    }
  }
  return "?";
}

}  // namespace scottflat
