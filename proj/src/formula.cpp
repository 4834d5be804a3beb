#include <algorithm>
#include <set>
#include <sstream>

#include "scottflat/structures.hpp"

namespace scottflat {

Formula Formula::truth(bool value) {
  Formula f;
  f.kind = value ? Kind::True : Kind::False;
  return f;
}

Formula Formula::rel(int r, std::vector<int> vars) {
  Formula f;
  f.kind = Kind::Rel;
  f.symbol = r;
  f.vars = std::move(vars);
  return f;
}

Formula Formula::eq(int i, int j) {
  Formula f;
  f.kind = Kind::Eq;
  f.vars = {i, j};
  return f;
}

Formula Formula::eq_const(int i, int c) {
  Formula f;
  f.kind = Kind::EqConst;
  f.symbol = c;
  f.vars = {i};
  return f;
}

Formula Formula::conj(std::vector<Formula> parts) {
  Formula f;
  f.kind = Kind::And;
  f.kids = std::move(parts);
  return f;
}

Formula Formula::disj(std::vector<Formula> parts) {
  Formula f;
  f.kind = Kind::Or;
  f.kids = std::move(parts);
  return f;
}

Formula Formula::neg(Formula g) {
  Formula f;
  f.kind = Kind::Not;
  f.kids.push_back(std::move(g));
  return f;
}

Formula Formula::exists(int var, Formula body) {
  Formula f;
  f.kind = Kind::Exists;
  f.vars = {var};
  f.kids.push_back(std::move(body));
  return f;
}

Formula Formula::forall(int var, Formula body) {
  Formula f;
  f.kind = Kind::Forall;
  f.vars = {var};
  f.kids.push_back(std::move(body));
  return f;
}

namespace {

void collect_free(const Formula& f, std::set<int>& out) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
    case K::False:
      return;
    case K::Rel:
    case K::Eq:
    case K::EqConst:
      out.insert(f.vars.begin(), f.vars.end());
      return;
    case K::And:
    case K::Or:
    case K::Not:
      for (const auto& k : f.kids) collect_free(k, out);
      return;
    case K::Exists:
    case K::Forall: {
      std::set<int> inner;
      collect_free(f.kids[0], inner);
      inner.erase(f.vars[0]);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

int max_var(const Formula& f) {
  int m = -1;
  for (int v : f.vars) m = std::max(m, v);
  for (const auto& k : f.kids) m = std::max(m, max_var(k));
  return m;
}

bool eval_rec(const DenseStructure& dm, const Formula& f, std::vector<int>& a) {
  using K = Formula::Kind;
  const FinStructure& m = dm.structure();
  switch (f.kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Rel: {
      Tuple elems(f.vars.size());
      for (size_t i = 0; i < f.vars.size(); ++i) elems[i] = a[f.vars[i]];
      return dm.holds(f.symbol, elems);
    }
    case K::Eq:
      return a[f.vars[0]] == a[f.vars[1]];
    case K::EqConst:
      return a[f.vars[0]] == m.constants[f.symbol];
    case K::And:
      for (const auto& k : f.kids)
        if (!eval_rec(dm, k, a)) return false;
      return true;
    case K::Or:
      for (const auto& k : f.kids)
        if (eval_rec(dm, k, a)) return true;
      return false;
    case K::Not:
      return !eval_rec(dm, f.kids[0], a);
    case K::Exists:
    case K::Forall: {
      int v = f.vars[0];
      int saved = a[v];
      bool want = f.kind == K::Exists;
      bool result = !want;
      for (int x = 0; x < m.size; ++x) {
        a[v] = x;
        if (eval_rec(dm, f.kids[0], a) == want) {
          result = want;
          break;
        }
      }
      a[v] = saved;
      return result;
    }
  }
  return false;
}

}  // namespace

int free_bound(const Formula& f) {
  std::set<int> fv;
  collect_free(f, fv);
  return fv.empty() ? 0 : *fv.rbegin() + 1;
}

int quantifier_rank(const Formula& f) {
  int r = 0;
  for (const auto& k : f.kids) r = std::max(r, quantifier_rank(k));
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) ++r;
  return r;
}

bool is_quantifier_free(const Formula& f) { return quantifier_rank(f) == 0; }

bool eval_formula(const FinStructure& m, const Formula& f, const Tuple& t) {
  int need = free_bound(f);
  if (need > static_cast<int>(t.size()))
    throw InputError("formula has free variable x" + std::to_string(need - 1) +
                     " beyond tuple length " + std::to_string(t.size()));
  for (int x : t)
    if (x < 0 || x >= m.size) throw InputError("tuple entry out of range");
  std::vector<int> a(t);
  a.resize(std::max<size_t>(t.size(), static_cast<size_t>(max_var(f) + 1)), 0);
  DenseStructure dm(m);
  return eval_rec(dm, f, a);
}

bool eval_qf(const QfDiagram& d, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Rel:
      return d.atom(f.symbol, f.vars);
    case K::Eq:
      return d.equal(f.vars[0], f.vars[1]);
    case K::EqConst:
      return std::binary_search(d.consts[f.symbol].begin(), d.consts[f.symbol].end(), f.vars[0]);
    case K::And:
      for (const auto& k : f.kids)
        if (!eval_qf(d, k)) return false;
      return true;
    case K::Or:
      for (const auto& k : f.kids)
        if (eval_qf(d, k)) return true;
      return false;
    case K::Not:
      return !eval_qf(d, f.kids[0]);
    case K::Exists:
    case K::Forall:
      throw InputError("eval_qf called on a quantified formula");
  }
  return false;
}

std::string formula_to_string(const Formula& f, const Vocabulary& v) {
  using K = Formula::Kind;
  std::ostringstream os;
  auto var = [](int i) { return "x" + std::to_string(i); };
  switch (f.kind) {
    case K::True:
      return "true";
    case K::False:
      return "false";
    case K::Rel:
      os << v.relations[f.symbol].name << "(";
      for (size_t i = 0; i < f.vars.size(); ++i) os << (i ? "," : "") << var(f.vars[i]);
      os << ")";
      return os.str();
    case K::Eq:
      return var(f.vars[0]) + "=" + var(f.vars[1]);
    case K::EqConst:
      return var(f.vars[0]) + "=" + v.constants[f.symbol];
    case K::And:
    case K::Or: {
      if (f.kids.empty()) return f.kind == K::And ? "true" : "false";
      os << "(";
      for (size_t i = 0; i < f.kids.size(); ++i)
        os << (i ? (f.kind == K::And ? " & " : " | ") : "") << formula_to_string(f.kids[i], v);
      os << ")";
      return os.str();
    }
    case K::Not:
      return "!" + formula_to_string(f.kids[0], v);
    case K::Exists:
      return "E" + var(f.vars[0]) + "." + formula_to_string(f.kids[0], v);
    case K::Forall:
      return "A" + var(f.vars[0]) + "." + formula_to_string(f.kids[0], v);
  }
  return "?";
}

FinStructure relationalize(const FinStructure& m) {
  m.validate();
  FinStructure out;
  out.vocab.relations = m.vocab.relations;
  out.vocab.constants = m.vocab.constants;
  out.size = m.size;
  out.relations = m.relations;
  out.constants = m.constants;
  for (size_t f = 0; f < m.functions.size(); ++f) {
    out.vocab.relations.push_back(Symbol{m.vocab.functions[f].name, m.vocab.functions[f].arity + 1});
    std::set<Tuple> graph;
    for (const auto& [args, val] : m.functions[f]) {
      Tuple t = args;
      t.push_back(val);
      graph.insert(std::move(t));
    }
    out.relations.push_back(std::move(graph));
  }
  return out;
}

}  // namespace scottflat
