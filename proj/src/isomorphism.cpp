#include <algorithm>
#include <numeric>

#include "scottflat/structures.hpp"

namespace scottflat {

namespace {

void require_comparable(const FinStructure& a, const FinStructure& b) {
  if (!a.vocab.relational() || !b.vocab.relational())
    throw InputError("isomorphism search needs relational vocabularies; relationalize first");
  if (a.vocab != b.vocab) throw InputError("structures have different vocabularies");
}

// Per-element invariant: occurrence counts by (relation, position) plus constant membership.
std::vector<std::vector<int>> signatures(const FinStructure& m) {
  std::vector<std::vector<int>> sig(m.size);
  size_t width = 0;
  for (const auto& r : m.vocab.relations) width += static_cast<size_t>(r.arity) + 1;
  width += m.constants.size();
  for (auto& s : sig) s.assign(width, 0);
  size_t off = 0;
  for (size_t r = 0; r < m.relations.size(); ++r) {
    int ar = m.vocab.relations[r].arity;
    for (const auto& t : m.relations[r]) {
      for (int i = 0; i < ar; ++i) ++sig[t[i]][off + i];
      if (std::all_of(t.begin(), t.end(), [&](int x) { return x == t[0]; })) ++sig[t[0]][off + ar];
    }
    off += static_cast<size_t>(ar) + 1;
  }
  for (size_t c = 0; c < m.constants.size(); ++c) sig[m.constants[c]][off + c] = 1;
  return sig;
}

}  // namespace

FinStructure relabel(const FinStructure& m, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != m.size) throw InputError("relabeling has wrong length");
  FinStructure out = m;
  for (size_t r = 0; r < m.relations.size(); ++r) {
    out.relations[r].clear();
    for (const auto& t : m.relations[r]) {
      Tuple u(t.size());
      for (size_t i = 0; i < t.size(); ++i) u[i] = perm[t[i]];
      out.relations[r].insert(std::move(u));
    }
  }
  for (size_t c = 0; c < m.constants.size(); ++c) out.constants[c] = perm[m.constants[c]];
  for (size_t f = 0; f < m.functions.size(); ++f) {
    out.functions[f].clear();
    for (const auto& [args, val] : m.functions[f]) {
      Tuple u(args.size());
      for (size_t i = 0; i < args.size(); ++i) u[i] = perm[args[i]];
      out.functions[f][u] = perm[val];
    }
  }
  return out;
}

bool is_isomorphism(const FinStructure& a, const FinStructure& b, const std::vector<int>& perm) {
  if (a.size != b.size || static_cast<int>(perm.size()) != a.size || a.vocab != b.vocab) return false;
  std::vector<bool> seen(a.size, false);
  for (int x : perm) {
    if (x < 0 || x >= a.size || seen[x]) return false;
    seen[x] = true;
  }
  return relabel(a, perm) == b;
}

bool is_automorphism(const FinStructure& m, const std::vector<int>& perm) {
  return is_isomorphism(m, m, perm);
}

void for_each_isomorphism(const FinStructure& a, const FinStructure& b,
                          const std::function<bool(const std::vector<int>&)>& visit) {
  require_comparable(a, b);
  if (a.size != b.size) return;
  for (size_t r = 0; r < a.relations.size(); ++r)
    if (a.relations[r].size() != b.relations[r].size()) return;
  const int n = a.size;
  DenseStructure da(a), db(b);
  auto sa = signatures(a), sb = signatures(b);
  std::vector<int> img(n, -1), pre(n, -1);
  std::vector<int> ta, tb;
  // Checks every tuple over {0..x} that mentions x once x has been assigned.
  auto consistent = [&](int x) {
    for (size_t r = 0; r < a.relations.size(); ++r) {
      int ar = a.vocab.relations[r].arity;
      int64_t total = tuple_count(x + 1, ar);
      ta.resize(ar);
      tb.resize(ar);
      for (int64_t code = 0; code < total; ++code) {
        int64_t rest = code;
        bool mentions = false;
        for (int i = ar - 1; i >= 0; --i) {
          ta[i] = static_cast<int>(rest % (x + 1));
          rest /= (x + 1);
          mentions = mentions || ta[i] == x;
        }
        if (!mentions) continue;
        for (int i = 0; i < ar; ++i) tb[i] = img[ta[i]];
        if (da.holds(static_cast<int>(r), ta) != db.holds(static_cast<int>(r), tb)) return false;
      }
    }
    return true;
  };
  bool stop = false;
  std::function<void(int)> rec = [&](int x) {
    if (stop) return;
    if (x == n) {
      if (!visit(img)) stop = true;
      return;
    }
    for (int y = 0; y < n && !stop; ++y) {
      if (pre[y] != -1 || sa[x] != sb[y]) continue;
      img[x] = y;
      pre[y] = x;
      if (consistent(x)) rec(x + 1);
      pre[y] = -1;
      img[x] = -1;
    }
  };
  rec(0);
}

std::optional<std::vector<int>> find_isomorphism(const FinStructure& a, const FinStructure& b) {
  std::optional<std::vector<int>> found;
  for_each_isomorphism(a, b, [&](const std::vector<int>& p) {
    found = p;
    return false;
  });
  return found;
}

std::vector<std::vector<int>> enumerate_automorphisms(const FinStructure& m) {
  std::vector<std::vector<int>> out;
  for_each_isomorphism(m, m, [&](const std::vector<int>& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

}  // namespace scottflat
