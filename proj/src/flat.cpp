#include "scottflat/flat.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace scottflat {

namespace {

// Number of injections j -> n.
int falling(int n, int j) {
  int r = 1;
  for (int i = 0; i < j; ++i) r *= n - i;
  return r;
}

std::string values_str(const std::vector<int>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace

const std::vector<SubseqMap>& projection_maps(int n) {
  static std::map<int, std::vector<SubseqMap>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<SubseqMap> out;
  for (int k = 0; k <= n; ++k) {
    const auto& inj = injections(k, n);
    out.insert(out.end(), inj.begin(), inj.end());
  }
  return cache.emplace(n, std::move(out)).first->second;
}

int projection_slot(int n, const std::vector<int>& values) {
  int k = static_cast<int>(values.size());
  if (k > n) throw InputError("projection map " + values_str(values) + " does not fit arity " + std::to_string(n));
  int slot = 0;
  for (int j = 0; j < k; ++j) slot += falling(n, j);
  std::vector<bool> used(n, false);
  for (int i = 0; i < k; ++i) {
    int v = values[i];
    if (v < 0 || v >= n || used[v]) throw InputError("projection map " + values_str(values) + " is not injective into " + std::to_string(n));
    int smaller = 0;
    for (int u = 0; u < v; ++u)
      if (!used[u]) ++smaller;
    slot += smaller * falling(n - i - 1, k - i - 1);
    used[v] = true;
  }
  return slot;
}

int projection_slot(const SubseqMap& f) { return projection_slot(f.n, f.values); }

int FlatStructure::project(int a, const SubseqMap& f) const {
  if (f.n != elements[a].arity) throw InputError("projection domain does not match element arity");
  return elements[a].proj[projection_slot(f)];
}

int FlatStructure::project(int a, const std::vector<int>& values) const {
  return elements[a].proj[projection_slot(elements[a].arity, values)];
}

std::vector<std::vector<int>> FlatStructure::universes() const {
  std::vector<std::vector<int>> u(n_max + 1);
  for (int a = 0; a < size(); ++a) {
    int n = elements[a].arity;
    if (n < 0 || n > n_max) throw InputError("element " + std::to_string(a) + " has arity out of range");
    u[n].push_back(a);
  }
  return u;
}

FlatIndex::FlatIndex(const FlatStructure& b) : b_(&b), universe_(b.universes()), fiber_(b.size()) {
  for (int w = 0; w < b.size(); ++w) {
    int n = b.arity(w);
    if (n == 0) continue;
    int parent = b.elements[w].proj[projection_slot(SubseqMap::prefix(n - 1, n))];
    if (parent >= 0 && parent < b.size()) fiber_[parent].push_back(w);
  }
}

std::vector<int> FlatIndex::above(int a, int m) const {
  std::vector<int> out;
  int k = b_->arity(a);
  if (m < k || m > b_->n_max) return out;
  int slot = projection_slot(SubseqMap::prefix(k, m));
  for (int c : universe_[m])
    if (b_->elements[c].proj[slot] == a) out.push_back(c);
  return out;
}

int flat_element_id(const TruncatedSystem& s, int n, int class_id) {
  int off = 0;
  for (int j = 0; j < n; ++j) off += s.num_classes(j);
  return off + class_id;
}

FlatStructure flatten(const FinStructure& m, const TruncatedSystem& s, std::vector<int> graph_relations) {
  if (!m.vocab.relational()) throw InputError("relationalize function symbols before flattening");
  SharpReport rep = validate_sharp(m, s);
  if (!rep.ok) throw InputError("system is not sharp (" + rep.clause + "): " + rep.detail);
  for (int r : graph_relations)
    if (r < 0 || r >= static_cast<int>(m.vocab.relations.size()))
      throw InputError("graph relation index out of range");
  DenseStructure dm(m);
  FlatStructure b;
  b.n_max = s.n_max;
  b.vocab = m.vocab;
  b.graph_relations = std::move(graph_relations);
  std::vector<int> offset(s.n_max + 2, 0);
  for (int n = 0; n <= s.n_max; ++n) offset[n + 1] = offset[n] + s.num_classes(n);
  b.elements.resize(offset[s.n_max + 1]);
  for (int n = 0; n <= s.n_max; ++n) {
    const auto& maps = projection_maps(n);
    auto reps = s.representatives(n);
    for (size_t c = 0; c < reps.size(); ++c) {
      FlatElement& e = b.elements[offset[n] + c];
      e.arity = n;
      e.diagram = qf_type(dm, reps[c]);
      e.proj.resize(maps.size());
      for (size_t slot = 0; slot < maps.size(); ++slot)
        e.proj[slot] = offset[maps[slot].k] + s.class_of(subsequence(reps[c], maps[slot]));
    }
  }
  return b;
}

std::vector<int> blowup_witnesses(const FlatStructure& b, int a, const std::vector<int>& fstar) {
  if (a < 0 || a >= b.size()) throw InputError("element out of range");
  int m = b.arity(a);
  int n = static_cast<int>(fstar.size());
  for (int v : fstar)
    if (v < 0 || v >= m) throw InputError("map value out of range for arity " + std::to_string(m));
  if (m + n > b.n_max)
    throw InputError("arity overflow: blowup needs arity " + std::to_string(m + n) + " > n_max " +
                     std::to_string(b.n_max));
  int slot = projection_slot(SubseqMap::prefix(m, m + n));
  std::vector<int> out;
  for (int c = 0; c < b.size(); ++c) {
    if (b.arity(c) != m + n || b.elements[c].proj[slot] != a) continue;
    const QfDiagram& d = b.diagram(c);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = d.equal(fstar[i], m + i);
    if (ok) out.push_back(c);
  }
  return out;
}

int blowup(const FlatStructure& b, int a, const std::vector<int>& fstar) {
  auto w = blowup_witnesses(b, a, fstar);
  if (w.empty()) throw FlatnessViolation("no blowup of element " + std::to_string(a) + " along " + values_str(fstar));
  if (w.size() > 1)
    throw FlatnessViolation("blowup of element " + std::to_string(a) + " along " + values_str(fstar) +
                            " is not unique: elements " + std::to_string(w[0]) + " and " + std::to_string(w[1]));
  return w[0];
}

int gen_projection(const FlatStructure& b, int a, const std::vector<int>& fstar) {
  int c = blowup(b, a, fstar);
  int m = b.arity(a);
  std::vector<int> shift(fstar.size());
  std::iota(shift.begin(), shift.end(), m);
  return b.project(c, shift);
}

PatternLifter::PatternLifter(const FlatStructure& b) : b_(&b) {
  for (int c = 0; c < b.size(); ++c) {
    const QfDiagram& d = b.diagram(c);
    std::vector<int> firsts;
    for (int i = 0; i < d.arity; ++i)
      if (d.eq[i] == i) firsts.push_back(i);
    auto key = std::make_pair(d.eq, b.project(c, firsts));
    auto [it, fresh] = by_pattern_.emplace(key, c);
    if (!fresh) it->second = -2;
  }
}

int PatternLifter::lift(int a, const std::vector<int>& h) const {
  const FlatStructure& b = *b_;
  const QfDiagram& d = b.diagram(a);
  int n = static_cast<int>(h.size());
  if (n > b.n_max) throw InputError("lift arity exceeds n_max");
  std::vector<int> pattern(n), base;
  for (int i = 0; i < n; ++i) {
    if (h[i] < 0 || h[i] >= d.arity) throw InputError("lift map value out of range");
    pattern[i] = i;
    for (int j = 0; j < i; ++j)
      if (d.equal(h[j], h[i])) {
        pattern[i] = j;
        break;
      }
    if (pattern[i] == i) base.push_back(h[i]);
  }
  auto it = by_pattern_.find(std::make_pair(pattern, b.project(a, base)));
  if (it == by_pattern_.end())
    throw FlatnessViolation("no element realizes pattern " + values_str(pattern) + " over element " + std::to_string(a));
  if (it->second == -2)
    throw FlatnessViolation("pattern " + values_str(pattern) + " over element " + std::to_string(a) + " is realized twice");
  return it->second;
}

FlatStructure relabel_flat(const FlatStructure& b, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != b.size()) throw InputError("relabeling has wrong length");
  std::vector<bool> hit(b.size(), false);
  for (int p : perm) {
    if (p < 0 || p >= b.size() || hit[p]) throw InputError("relabeling is not a bijection");
    hit[p] = true;
  }
  FlatStructure out = b;
  for (int a = 0; a < b.size(); ++a) {
    FlatElement e = b.elements[a];
    for (int& x : e.proj)
      if (x >= 0) x = perm[x];
    out.elements[perm[a]] = std::move(e);
  }
  return out;
}

FlatStructure merge_flat_elements(const FlatStructure& b, int x, int y) {
  if (x < 0 || y < 0 || x >= b.size() || y >= b.size() || x == y) throw InputError("bad merge pair");
  if (b.arity(x) != b.arity(y)) throw InputError("merged elements must share an arity");
  FlatStructure out = b;
  FlatElement& keep = out.elements[x];
  keep.merged.push_back(b.elements[y].diagram);
  keep.merged.insert(keep.merged.end(), b.elements[y].merged.begin(), b.elements[y].merged.end());
  out.elements.erase(out.elements.begin() + y);
  int nx = x > y ? x - 1 : x;
  for (auto& e : out.elements)
    for (int& p : e.proj) {
      if (p == y)
        p = nx;
      else if (p > y)
        --p;
    }
  return out;
}

}  // namespace scottflat
