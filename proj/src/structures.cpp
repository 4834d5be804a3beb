#include "scottflat/structures.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

namespace scottflat {

namespace {

void check_unique_names(const Vocabulary& v) {
  std::set<std::string> seen;
  auto add = [&](const std::string& name) {
    if (name.empty()) throw InputError("empty symbol name");
    if (!seen.insert(name).second) throw InputError("duplicate symbol name '" + name + "'");
  };
  for (const auto& r : v.relations) add(r.name);
  for (const auto& c : v.constants) add(c);
  for (const auto& f : v.functions) add(f.name);
}

int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

void Vocabulary::validate() const {
  check_unique_names(*this);
  for (const auto& r : relations)
    if (r.arity < 1) throw InputError("relation '" + r.name + "' needs positive arity");
  for (const auto& f : functions)
    if (f.arity < 1) throw InputError("function '" + f.name + "' needs positive arity");
}

int Vocabulary::relation_index(std::string_view name) const {
  for (size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == name) return static_cast<int>(i);
  return -1;
}

int Vocabulary::constant_index(std::string_view name) const {
  for (size_t i = 0; i < constants.size(); ++i)
    if (constants[i] == name) return static_cast<int>(i);
  return -1;
}

int Vocabulary::function_index(std::string_view name) const {
  for (size_t i = 0; i < functions.size(); ++i)
    if (functions[i].name == name) return static_cast<int>(i);
  return -1;
}

void FinStructure::validate() const {
  vocab.validate();
  if (size < 1) throw InputError("structure size must be at least 1");
  if (relations.size() != vocab.relations.size() || constants.size() != vocab.constants.size() ||
      functions.size() != vocab.functions.size())
    throw InputError("interpretation does not match vocabulary");
  for (size_t r = 0; r < relations.size(); ++r) {
    for (const auto& t : relations[r]) {
      if (static_cast<int>(t.size()) != vocab.relations[r].arity)
        throw InputError("tuple of wrong length in relation '" + vocab.relations[r].name + "'");
      for (int x : t)
        if (x < 0 || x >= size)
          throw InputError("index " + std::to_string(x) + " out of range in relation '" +
                           vocab.relations[r].name + "'");
    }
  }
  for (size_t c = 0; c < constants.size(); ++c)
    if (constants[c] < 0 || constants[c] >= size)
      throw InputError("constant '" + vocab.constants[c] + "' out of range");
  for (size_t f = 0; f < functions.size(); ++f) {
    int k = vocab.functions[f].arity;
    if (static_cast<int64_t>(functions[f].size()) != tuple_count(size, k))
      throw InputError("function '" + vocab.functions[f].name + "' is not total");
    for (const auto& [args, val] : functions[f]) {
      if (static_cast<int>(args.size()) != k)
        throw InputError("wrong argument count for function '" + vocab.functions[f].name + "'");
      for (int x : args)
        if (x < 0 || x >= size) throw InputError("function argument out of range");
      if (val < 0 || val >= size) throw InputError("function value out of range");
    }
  }
}

DenseStructure::DenseStructure(const FinStructure& m) : m_(&m) {
  table_.resize(m.relations.size());
  for (size_t r = 0; r < m.relations.size(); ++r) {
    table_[r].assign(static_cast<size_t>(tuple_count(m.size, m.vocab.relations[r].arity)), 0);
    for (const auto& t : m.relations[r]) table_[r][static_cast<size_t>(encode_tuple(t, m.size))] = 1;
  }
}

bool DenseStructure::holds(int rel, const int* t) const {
  int ar = m_->vocab.relations[rel].arity;
  int64_t code = 0;
  for (int i = 0; i < ar; ++i) code = code * m_->size + t[i];
  return table_[rel][static_cast<size_t>(code)] != 0;
}

int64_t tuple_count(int m, int k) { return ipow(m, k); }

int64_t encode_tuple(const Tuple& t, int m) {
  int64_t code = 0;
  for (int x : t) code = code * m + x;
  return code;
}

Tuple decode_tuple(int64_t code, int k, int m) {
  Tuple t(k);
  for (int i = k - 1; i >= 0; --i) {
    t[i] = static_cast<int>(code % m);
    code /= m;
  }
  return t;
}

// ---- subsequence maps

SubseqMap SubseqMap::identity(int n) { return prefix(n, n); }

SubseqMap SubseqMap::prefix(int k, int n) {
  SubseqMap f{k, n, std::vector<int>(k)};
  std::iota(f.values.begin(), f.values.end(), 0);
  return f;
}

void SubseqMap::validate() const {
  if (k < 0 || n < 0 || k > n || static_cast<int>(values.size()) != k)
    throw InputError("subsequence map has inconsistent shape");
  std::vector<bool> used(n, false);
  for (int v : values) {
    if (v < 0 || v >= n) throw InputError("subsequence map value out of range");
    if (used[v]) throw InputError("subsequence map is not injective");
    used[v] = true;
  }
}

bool SubseqMap::is_identity() const {
  if (k != n) return false;
  for (int i = 0; i < k; ++i)
    if (values[i] != i) return false;
  return true;
}

Tuple subsequence(const Tuple& t, const SubseqMap& f) {
  if (static_cast<int>(t.size()) != f.n)
    throw InputError("tuple length " + std::to_string(t.size()) + " does not match map domain " +
                     std::to_string(f.n));
  Tuple out(f.k);
  for (int i = 0; i < f.k; ++i) out[i] = t[f.values[i]];
  return out;
}

SubseqMap compose(const SubseqMap& g, const SubseqMap& f) {
  if (f.n != g.k) throw InputError("maps are not composable");
  SubseqMap h{f.k, g.n, std::vector<int>(f.k)};
  for (int i = 0; i < f.k; ++i) h.values[i] = g.values[f.values[i]];
  return h;
}

const std::vector<SubseqMap>& injections(int k, int n) {
  static std::map<std::pair<int, int>, std::vector<SubseqMap>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(k, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<SubseqMap> out;
  if (k <= n && k >= 0) {
    std::vector<int> cur;
    std::vector<bool> used(n, false);
    std::function<void()> rec = [&]() {
      if (static_cast<int>(cur.size()) == k) {
        out.push_back(SubseqMap{k, n, cur});
        return;
      }
      for (int v = 0; v < n; ++v) {
        if (used[v]) continue;
        used[v] = true;
        cur.push_back(v);
        rec();
        cur.pop_back();
        used[v] = false;
      }
    };
    rec();
  }
  return cache.emplace(key, std::move(out)).first->second;
}

std::vector<std::vector<int>> all_maps(int n, int m) {
  std::vector<std::vector<int>> out;
  if (m == 0 && n > 0) return out;
  int64_t total = tuple_count(m, n);
  out.reserve(static_cast<size_t>(total));
  for (int64_t c = 0; c < total; ++c) out.push_back(decode_tuple(c, n, m));
  return out;
}

// ---- diagrams

bool QfDiagram::atom(int rel, const Tuple& vars) const {
  int64_t code = 0;
  for (int v : vars) code = code * arity + v;
  return atoms[rel][static_cast<size_t>(code)] != 0;
}

QfDiagram qf_type(const FinStructure& m, const Tuple& t) { return qf_type(DenseStructure(m), t); }

QfDiagram qf_type(const DenseStructure& dm, const Tuple& t) {
  const FinStructure& m = dm.structure();
  int n = static_cast<int>(t.size());
  for (int x : t)
    if (x < 0 || x >= m.size) throw InputError("tuple entry out of range");
  QfDiagram d;
  d.arity = n;
  d.eq.resize(n);
  for (int i = 0; i < n; ++i) {
    d.eq[i] = i;
    for (int j = 0; j < i; ++j)
      if (t[j] == t[i]) {
        d.eq[i] = j;
        break;
      }
  }
  d.atoms.resize(m.relations.size());
  for (const auto& sym : m.vocab.relations) d.rel_arity.push_back(sym.arity);
  std::vector<int> elems;
  for (size_t r = 0; r < m.relations.size(); ++r) {
    int ar = m.vocab.relations[r].arity;
    int64_t total = tuple_count(n, ar);
    d.atoms[r].assign(static_cast<size_t>(total), 0);
    elems.resize(ar);
    for (int64_t c = 0; c < total; ++c) {
      int64_t rest = c;
      for (int i = ar - 1; i >= 0; --i) {
        elems[i] = t[static_cast<size_t>(rest % n)];
        rest /= n;
      }
      d.atoms[r][static_cast<size_t>(c)] = dm.holds(static_cast<int>(r), elems.data()) ? 1 : 0;
    }
  }
  d.consts.resize(m.constants.size());
  for (size_t c = 0; c < m.constants.size(); ++c)
    for (int i = 0; i < n; ++i)
      if (t[i] == m.constants[c]) d.consts[c].push_back(i);
  return d;
}

QfDiagram pullback(const QfDiagram& d, const std::vector<int>& h) {
  int k = static_cast<int>(h.size());
  for (int v : h)
    if (v < 0 || v >= d.arity) throw InputError("pullback map out of range");
  QfDiagram out;
  out.arity = k;
  out.eq.resize(k);
  for (int i = 0; i < k; ++i) {
    out.eq[i] = i;
    for (int j = 0; j < i; ++j)
      if (d.eq[h[j]] == d.eq[h[i]]) {
        out.eq[i] = j;
        break;
      }
  }
  out.rel_arity = d.rel_arity;
  out.atoms.resize(d.atoms.size());
  std::vector<int> w;
  for (size_t r = 0; r < d.atoms.size(); ++r) {
    int ar = d.rel_arity[r];
    int64_t total = tuple_count(k, ar);
    out.atoms[r].assign(static_cast<size_t>(total), 0);
    w.resize(ar);
    for (int64_t c = 0; c < total; ++c) {
      int64_t rest = c;
      int64_t src = 0;
      for (int i = ar - 1; i >= 0; --i) {
        w[i] = static_cast<int>(rest % k);
        rest /= k;
      }
      for (int i = 0; i < ar; ++i) src = src * d.arity + h[w[i]];
      out.atoms[r][static_cast<size_t>(c)] = d.atoms[r][static_cast<size_t>(src)];
    }
  }
  out.consts.resize(d.consts.size());
  for (size_t c = 0; c < d.consts.size(); ++c)
    for (int i = 0; i < k; ++i)
      if (std::binary_search(d.consts[c].begin(), d.consts[c].end(), h[i])) out.consts[c].push_back(i);
  return out;
}

std::optional<std::string> diagram_defect(const QfDiagram& d, const Vocabulary& v) {
  int n = d.arity;
  if (n < 0) return "negative arity";
  if (static_cast<int>(d.eq.size()) != n) return "equality pattern has wrong length";
  for (int i = 0; i < n; ++i) {
    if (d.eq[i] < 0 || d.eq[i] > i || d.eq[d.eq[i]] != d.eq[i]) return "equality pattern is not canonical";
  }
  if (d.atoms.size() != v.relations.size() || d.rel_arity.size() != v.relations.size())
    return "atom table does not match vocabulary";
  for (size_t r = 0; r < v.relations.size(); ++r) {
    if (d.rel_arity[r] != v.relations[r].arity) return "relation arity mismatch";
    if (static_cast<int64_t>(d.atoms[r].size()) != tuple_count(n, v.relations[r].arity))
      return "atom table for '" + v.relations[r].name + "' has wrong size";
  }
  if (d.consts.size() != v.constants.size()) return "constant table does not match vocabulary";
  for (size_t c = 0; c < d.consts.size(); ++c) {
    const auto& vs = d.consts[c];
    if (!std::is_sorted(vs.begin(), vs.end())) return "constant variable list not sorted";
    if (vs.empty()) continue;
    for (int x : vs)
      if (x < 0 || x >= n) return "constant variable out of range";
    int cls = d.eq[vs[0]];
    std::vector<int> expected;
    for (int i = 0; i < n; ++i)
      if (d.eq[i] == cls) expected.push_back(i);
    if (expected != vs)
      return "x_i = " + v.constants[c] + " is not closed under equality";
  }
  // Realizability: the quotient witness must reproduce the diagram exactly.
  FinStructure w = diagram_witness(d, v);
  Tuple t(n);
  std::vector<int> cls_index(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (d.eq[i] == i) cls_index[i] = next++;
    t[i] = cls_index[d.eq[i]];
  }
  if (qf_type(w, t) != d) return "atoms are not invariant under the equality pattern";
  return std::nullopt;
}

FinStructure diagram_witness(const QfDiagram& d, const Vocabulary& v) {
  int n = d.arity;
  std::vector<int> cls_index(n, -1);
  int classes = 0;
  for (int i = 0; i < n; ++i)
    if (d.eq[i] == i) cls_index[i] = classes++;
  FinStructure w;
  w.vocab = v;
  w.vocab.functions.clear();
  w.relations.resize(v.relations.size());
  w.constants.assign(v.constants.size(), -1);
  int extra = 0;
  for (size_t c = 0; c < v.constants.size(); ++c) {
    if (!d.consts[c].empty())
      w.constants[c] = cls_index[d.eq[d.consts[c][0]]];
    else
      w.constants[c] = classes + extra++;
  }
  w.size = std::max(1, classes + extra);
  for (size_t r = 0; r < v.relations.size(); ++r) {
    int ar = v.relations[r].arity;
    int64_t total = tuple_count(n, ar);
    for (int64_t code = 0; code < total; ++code) {
      if (!d.atoms[r][static_cast<size_t>(code)]) continue;
      Tuple vars = decode_tuple(code, ar, n);
      Tuple elems(ar);
      for (int i = 0; i < ar; ++i) elems[i] = cls_index[d.eq[vars[i]]];
      w.relations[r].insert(elems);
    }
  }
  return w;
}

std::string diagram_to_string(const QfDiagram& d, const Vocabulary& v) {
  std::ostringstream os;
  os << "arity " << d.arity << "; eq [";
  for (int i = 0; i < d.arity; ++i) os << (i ? "," : "") << d.eq[i];
  os << "]";
  for (size_t r = 0; r < d.atoms.size(); ++r) {
    os << "; " << v.relations[r].name << " {";
    bool first = true;
    for (size_t code = 0; code < d.atoms[r].size(); ++code) {
      if (!d.atoms[r][code]) continue;
      Tuple vars = decode_tuple(static_cast<int64_t>(code), d.rel_arity[r], d.arity);
      os << (first ? "" : ",") << "(";
      for (size_t i = 0; i < vars.size(); ++i) os << (i ? "," : "") << "x" << vars[i];
      os << ")";
      first = false;
    }
    os << "}";
  }
  for (size_t c = 0; c < d.consts.size(); ++c) {
    os << "; " << v.constants[c] << " = {";
    for (size_t i = 0; i < d.consts[c].size(); ++i) os << (i ? "," : "") << "x" << d.consts[c][i];
    os << "}";
  }
  return os.str();
}

}  // namespace scottflat
