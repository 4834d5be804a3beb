#include "scottflat/backforth.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace scottflat {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<int> ids_from_union_find(UnionFind& uf) {
  std::vector<int> raw(uf.parent.size());
  for (size_t i = 0; i < raw.size(); ++i) raw[i] = uf.find(static_cast<int>(i));
  return canonical_ids(raw);
}

std::string tuple_str(const Tuple& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

SharpReport failure(std::string clause, int arity, Tuple a, Tuple b, std::string detail) {
  SharpReport r;
  r.ok = false;
  r.clause = std::move(clause);
  r.arity = arity;
  r.left = std::move(a);
  r.right = std::move(b);
  r.detail = std::move(detail);
  return r;
}

std::vector<int> extension_classes(const TruncatedSystem& s, const Tuple& t) {
  Tuple u = t;
  u.push_back(0);
  std::vector<int> out;
  for (int c = 0; c < s.size; ++c) {
    u.back() = c;
    out.push_back(s.class_of(u));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

int TruncatedSystem::class_of(const Tuple& t) const {
  int k = static_cast<int>(t.size());
  if (k > n_max) throw InputError("tuple longer than n_max");
  return cls[k][static_cast<size_t>(encode_tuple(t, size))];
}

int TruncatedSystem::num_classes(int k) const {
  int mx = -1;
  for (int c : cls[k]) mx = std::max(mx, c);
  return mx + 1;
}

std::vector<Tuple> TruncatedSystem::representatives(int k) const {
  std::vector<Tuple> reps(num_classes(k));
  std::vector<bool> have(reps.size(), false);
  for (size_t i = 0; i < cls[k].size(); ++i) {
    int c = cls[k][i];
    if (!have[c]) {
      have[c] = true;
      reps[c] = decode_tuple(static_cast<int64_t>(i), k, size);
    }
  }
  return reps;
}

std::vector<int> canonical_ids(const std::vector<int>& raw) {
  std::map<int, int> seen;
  std::vector<int> out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    auto it = seen.find(raw[i]);
    if (it == seen.end()) it = seen.emplace(raw[i], static_cast<int>(seen.size())).first;
    out[i] = it->second;
  }
  return out;
}

bool refines(const TruncatedSystem& s, const TruncatedSystem& t) {
  if (s.size != t.size || s.n_max != t.n_max) return false;
  for (int k = 0; k <= s.n_max; ++k) {
    std::vector<int> image(s.num_classes(k), -1);
    for (size_t i = 0; i < s.cls[k].size(); ++i) {
      int& img = image[s.cls[k][i]];
      if (img == -1)
        img = t.cls[k][i];
      else if (img != t.cls[k][i])
        return false;
    }
  }
  return true;
}

bool same_partitions(const TruncatedSystem& s, const TruncatedSystem& t) {
  return refines(s, t) && refines(t, s);
}

SharpReport validate_sharp(const FinStructure& m, const TruncatedSystem& s) {
  if (s.size != m.size) return failure("shape", -1, {}, {}, "system size differs from structure size");
  if (s.n_max < 1 || static_cast<int>(s.cls.size()) != s.n_max + 1)
    return failure("shape", -1, {}, {}, "wrong number of arities");
  for (int k = 0; k <= s.n_max; ++k) {
    if (static_cast<int64_t>(s.cls[k].size()) != tuple_count(m.size, k))
      return failure("shape", k, {}, {}, "class table has wrong length");
    for (int c : s.cls[k])
      if (c < 0) return failure("shape", k, {}, {}, "negative class id");
  }
  if (s.cls[0][0] != 0) return failure("shape", 0, {}, {}, "E_0 must be a single class");

  DenseStructure dm(m);
  for (int k = 0; k <= s.n_max; ++k) {
    auto reps = s.representatives(k);
    std::vector<QfDiagram> rep_diag;
    for (const auto& r : reps) rep_diag.push_back(qf_type(dm, r));
    for (size_t i = 0; i < s.cls[k].size(); ++i) {
      Tuple t = decode_tuple(static_cast<int64_t>(i), k, m.size);
      int c = s.cls[k][i];
      if (qf_type(dm, t) != rep_diag[c])
        return failure("qf-elementarity", k, reps[c], t, "related tuples have different diagrams");
    }
  }
  for (int k = 0; k <= s.n_max; ++k) {
    auto reps = s.representatives(k);
    for (size_t i = 0; i < s.cls[k].size(); ++i) {
      Tuple t = decode_tuple(static_cast<int64_t>(i), k, m.size);
      const Tuple& r = reps[s.cls[k][i]];
      for (int j = 0; j <= k; ++j)
        for (const auto& f : injections(j, k))
          if (s.class_of(subsequence(t, f)) != s.class_of(subsequence(r, f)))
            return failure("downward closure", k, r, t,
                           "subsequences " + tuple_str(subsequence(r, f)) + " and " +
                               tuple_str(subsequence(t, f)) + " are not related");
    }
  }
  for (int k = 0; k < s.n_max; ++k) {
    auto reps = s.representatives(k);
    std::vector<std::vector<int>> rep_ext;
    for (const auto& r : reps) rep_ext.push_back(extension_classes(s, r));
    for (size_t i = 0; i < s.cls[k].size(); ++i) {
      Tuple t = decode_tuple(static_cast<int64_t>(i), k, m.size);
      int c = s.cls[k][i];
      if (extension_classes(s, t) != rep_ext[c])
        return failure("extension", k, reps[c], t, "one-point extensions reach different classes");
    }
  }
  return SharpReport{};
}

PairSet downward_closure(const PairSet& f) {
  PairSet out;
  for (const auto& [a, b] : f) {
    if (a.size() != b.size()) throw InputError("pair " + tuple_str(a) + " / " + tuple_str(b) + " has mismatched lengths");
    int n = static_cast<int>(a.size());
    for (int j = 0; j <= n; ++j)
      for (const auto& g : injections(j, n)) out.emplace(subsequence(a, g), subsequence(b, g));
  }
  return out;
}

SharpReport validate_back_and_forth(const FinStructure& m, const PairSet& f, int n_max) {
  if (f.empty()) return failure("shape", -1, {}, {}, "a back-and-forth system is non-empty");
  DenseStructure dm(m);
  for (const auto& [a, b] : f) {
    if (a.size() != b.size() || static_cast<int>(a.size()) > n_max)
      return failure("shape", static_cast<int>(a.size()), a, b, "pair has bad length");
    for (int x : a)
      if (x < 0 || x >= m.size) return failure("shape", -1, a, b, "entry out of range");
    for (int x : b)
      if (x < 0 || x >= m.size) return failure("shape", -1, a, b, "entry out of range");
    if (qf_type(dm, a) != qf_type(dm, b))
      return failure("qf-elementarity", static_cast<int>(a.size()), a, b, "pair is not quantifier-free elementary");
  }
  for (const auto& [a, b] : f) {
    if (static_cast<int>(a.size()) >= n_max) continue;
    Tuple ac = a, bd = b;
    ac.push_back(0);
    bd.push_back(0);
    for (int c = 0; c < m.size; ++c) {
      ac.back() = c;
      bool found = false;
      for (int d = 0; d < m.size && !found; ++d) {
        bd.back() = d;
        found = f.count({ac, bd}) > 0;
      }
      if (!found)
        return failure("extension", static_cast<int>(a.size()), a, b,
                       "forth: no partner for " + std::to_string(c));
    }
    for (int d = 0; d < m.size; ++d) {
      bd.back() = d;
      bool found = false;
      for (int c = 0; c < m.size && !found; ++c) {
        ac.back() = c;
        found = f.count({ac, bd}) > 0;
      }
      if (!found)
        return failure("extension", static_cast<int>(a.size()), a, b,
                       "back: no partner for " + std::to_string(d));
    }
  }
  return SharpReport{};
}

TruncatedSystem sharp_closure(const PairSet& f, const FinStructure& m, int n_max) {
  if (n_max < 1) throw InputError("n_max must be at least 1");
  SharpReport bf = validate_back_and_forth(m, f, n_max);
  if (!bf.ok)
    throw InputError("input is not a back-and-forth system (" + bf.clause + " at " + tuple_str(bf.left) + " / " +
                     tuple_str(bf.right) + ": " + bf.detail + ")");
  PairSet dc = downward_closure(f);
  TruncatedSystem s;
  s.n_max = n_max;
  s.size = m.size;
  s.cls.resize(n_max + 1);
  std::vector<UnionFind> ufs;
  for (int k = 0; k <= n_max; ++k) ufs.emplace_back(static_cast<size_t>(tuple_count(m.size, k)));
  for (const auto& [a, b] : dc) {
    int k = static_cast<int>(a.size());
    ufs[k].unite(static_cast<int>(encode_tuple(a, m.size)), static_cast<int>(encode_tuple(b, m.size)));
  }
  for (int k = 0; k <= n_max; ++k) s.cls[k] = ids_from_union_find(ufs[k]);
  SharpReport rep = validate_sharp(m, s);
  if (!rep.ok)
    throw std::logic_error("closure is not sharp (" + rep.clause + " at " + tuple_str(rep.left) + " / " +
                           tuple_str(rep.right) + ": " + rep.detail + ")");
  return s;
}

PairSet system_pairs(const TruncatedSystem& s) {
  PairSet out;
  for (int k = 0; k <= s.n_max; ++k) {
    int64_t total = tuple_count(s.size, k);
    for (int64_t i = 0; i < total; ++i)
      for (int64_t j = 0; j < total; ++j)
        if (s.cls[k][static_cast<size_t>(i)] == s.cls[k][static_cast<size_t>(j)])
          out.emplace(decode_tuple(i, k, s.size), decode_tuple(j, k, s.size));
  }
  return out;
}

TruncatedSystem compute_F_infinity(const FinStructure& m, int n_max) {
  if (n_max < 1) throw InputError("n_max must be at least 1");
  m.validate();
  if (!m.vocab.relational()) throw InputError("relationalize function symbols first");
  DenseStructure dm(m);
  TruncatedSystem s;
  s.n_max = n_max;
  s.size = m.size;
  s.cls.resize(n_max + 1);
  for (int k = 0; k <= n_max; ++k) {
    std::map<QfDiagram, int> ids;
    int64_t total = tuple_count(m.size, k);
    s.cls[k].resize(static_cast<size_t>(total));
    for (int64_t i = 0; i < total; ++i) {
      auto d = qf_type(dm, decode_tuple(i, k, m.size));
      auto it = ids.emplace(std::move(d), static_cast<int>(ids.size())).first;
      s.cls[k][static_cast<size_t>(i)] = it->second;
    }
  }
  // Refine each arity by the classes of its subsequences and of its one-point extensions.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k <= n_max; ++k) {
      int before = s.num_classes(k);
      int64_t total = tuple_count(m.size, k);
      std::map<std::vector<int>, int> ids;
      std::vector<int> next(static_cast<size_t>(total));
      std::vector<int> sig;
      for (int64_t i = 0; i < total; ++i) {
        Tuple t = decode_tuple(i, k, m.size);
        sig.clear();
        sig.push_back(s.cls[k][static_cast<size_t>(i)]);
        for (int j = 0; j <= k; ++j)
          for (const auto& f : injections(j, k)) sig.push_back(s.class_of(subsequence(t, f)));
        if (k < n_max) {
          sig.push_back(-1);
          auto ext = extension_classes(s, t);
          sig.insert(sig.end(), ext.begin(), ext.end());
        }
        next[static_cast<size_t>(i)] = ids.emplace(sig, static_cast<int>(ids.size())).first->second;
      }
      s.cls[k] = std::move(next);
      if (s.num_classes(k) != before) changed = true;
    }
  }
  return s;
}

TruncatedSystem orbit_system(int size, int n_max, const std::vector<std::vector<int>>& perms) {
  TruncatedSystem s;
  s.n_max = n_max;
  s.size = size;
  s.cls.resize(n_max + 1);
  for (int k = 0; k <= n_max; ++k) {
    int64_t total = tuple_count(size, k);
    UnionFind uf(static_cast<size_t>(total));
    for (int64_t i = 0; i < total; ++i) {
      Tuple t = decode_tuple(i, k, size);
      for (const auto& p : perms) {
        Tuple u(k);
        for (int j = 0; j < k; ++j) u[j] = p[t[j]];
        uf.unite(static_cast<int>(i), static_cast<int>(encode_tuple(u, size)));
      }
    }
    s.cls[k] = ids_from_union_find(uf);
  }
  return s;
}

TruncatedSystem orbit_oracle(const FinStructure& m, int n_max, int guard_size) {
  if (m.size > guard_size)
    throw GuardExceeded("orbit oracle limited to structures of size " + std::to_string(guard_size));
  if (n_max < 1) throw InputError("n_max must be at least 1");
  return orbit_system(m.size, n_max, enumerate_automorphisms(m));
}

TruncatedSystem discrete_system(int size, int n_max) {
  TruncatedSystem s;
  s.n_max = n_max;
  s.size = size;
  s.cls.resize(n_max + 1);
  for (int k = 0; k <= n_max; ++k) {
    s.cls[k].resize(static_cast<size_t>(tuple_count(size, k)));
    std::iota(s.cls[k].begin(), s.cls[k].end(), 0);
  }
  return s;
}

}  // namespace scottflat
