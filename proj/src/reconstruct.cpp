#include "scottflat/reconstruct.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace scottflat {

namespace {

template <typename T>
std::vector<T> ordered(std::vector<T> v, ChainOrder order) {
  if (order == ChainOrder::Greatest) std::reverse(v.begin(), v.end());
  return v;
}

struct Requirement {
  SubseqMap f;
  int target = -1;
};

// First fiber element over a projection of the top that is not yet covered by a lift of the top.
std::optional<Requirement> open_requirement(const FlatStructure& b, const FlatIndex& idx, const PatternLifter& lifter,
                                            int top, ChainOrder order) {
  int n = b.arity(top);
  for (int k = 0; k <= std::min(n, b.n_max - 1); ++k)
    for (const auto& f : ordered(injections(k, n), order)) {
      int base = b.project(top, f);
      std::vector<int> covered;
      std::vector<int> h = f.values;
      h.push_back(0);
      for (int j = 0; j < n; ++j) {
        h.back() = j;
        covered.push_back(lifter.lift(top, h));
      }
      for (int c : ordered(idx.fiber(base), order))
        if (std::find(covered.begin(), covered.end(), c) == covered.end()) return Requirement{f, c};
    }
  return std::nullopt;
}

}  // namespace

CoveringChain build_covering_chain(const FlatStructure& b, ChainOrder order) {
  FlatIndex idx(b);
  PatternLifter lifter(b);
  if (idx.universe(0).size() != 1)
    throw InputError("covering chain needs exactly one element of arity 0, found " +
                     std::to_string(idx.universe(0).size()));
  CoveringChain ch;
  ch.chain.push_back(idx.universe(0)[0]);
  while (true) {
    int top = ch.top();
    int n = b.arity(top);
    auto req = open_requirement(b, idx, lifter, top, order);
    if (!req && n < b.n_max) {
      ch.closed = true;
      return ch;
    }
    if (n + 1 > b.n_max)
      throw TruncationTooSmall("truncation too small: covering chain reached arity " + std::to_string(n) +
                               " = n_max without closing");
    std::vector<int> g = req->f.values;
    g.push_back(n);
    int next = -1;
    for (int d : ordered(idx.fiber(top), order))
      if (b.project(d, g) == req->target) {
        next = d;
        break;
      }
    if (next < 0)
      throw FlatnessViolation("no amalgam extends element " + std::to_string(top) + " to cover element " +
                              std::to_string(req->target));
    ch.chain.push_back(next);
  }
}

int Reconstruction::cover(const Tuple& t) const {
  return cov[t.size()][static_cast<size_t>(encode_tuple(t, m.size))];
}

Reconstruction reconstruct(const FlatStructure& b, ChainOrder order) {
  Reconstruction r;
  r.chain = build_covering_chain(b, order);
  int top = r.chain.top();
  const QfDiagram& d = b.diagram(top);
  std::vector<int> firsts, elem_of_var(d.arity);
  for (int i = 0; i < d.arity; ++i)
    if (d.eq[i] == i) firsts.push_back(i);
  for (int i = 0; i < d.arity; ++i)
    elem_of_var[i] = static_cast<int>(std::find(firsts.begin(), firsts.end(), d.eq[i]) - firsts.begin());
  if (firsts.empty()) throw InputError("flat structure has no points of arity 1");

  FinStructure& m = r.m;
  m.vocab = b.vocab;
  m.size = static_cast<int>(firsts.size());
  m.relations.resize(b.vocab.relations.size());
  for (size_t rel = 0; rel < b.vocab.relations.size(); ++rel) {
    int ar = b.vocab.relations[rel].arity;
    int64_t total = tuple_count(m.size, ar);
    for (int64_t code = 0; code < total; ++code) {
      Tuple t = decode_tuple(code, ar, m.size);
      Tuple vars(ar);
      for (int i = 0; i < ar; ++i) vars[i] = firsts[t[i]];
      if (d.atom(static_cast<int>(rel), vars)) m.relations[rel].insert(t);
    }
  }
  for (size_t c = 0; c < b.vocab.constants.size(); ++c) {
    if (d.consts[c].empty())
      throw FlatnessViolation("constant " + b.vocab.constants[c] + " is not named along the covering chain");
    m.constants.push_back(elem_of_var[d.consts[c][0]]);
  }
  m.validate();

  PatternLifter lifter(b);
  r.cov.resize(b.n_max + 1);
  r.s.n_max = b.n_max;
  r.s.size = m.size;
  r.s.cls.resize(b.n_max + 1);
  for (int n = 0; n <= b.n_max; ++n) {
    int64_t total = tuple_count(m.size, n);
    r.cov[n].resize(static_cast<size_t>(total));
    std::vector<int> h(n);
    for (int64_t code = 0; code < total; ++code) {
      Tuple t = decode_tuple(code, n, m.size);
      for (int i = 0; i < n; ++i) h[i] = firsts[t[i]];
      r.cov[n][static_cast<size_t>(code)] = lifter.lift(top, h);
    }
    r.s.cls[n] = canonical_ids(r.cov[n]);
  }
  return r;
}

RoundtripResult roundtrip_check(const FlatStructure& b, ChainOrder order) {
  RoundtripResult res;
  Reconstruction r;
  FlatStructure back;
  try {
    r = reconstruct(b, order);
    back = flatten(r.m, r.s, b.graph_relations);
  } catch (const std::exception& e) {
    return RoundtripResult{false, e.what()};
  }
  std::vector<int> map;
  for (int n = 0; n <= b.n_max; ++n)
    for (const auto& rep : r.s.representatives(n)) map.push_back(r.cover(rep));
  if (is_flat_isomorphism(back, b, map)) return res;
  if (find_flat_isomorphism(back, b)) {
    res.detail = "covering map is not an isomorphism, but another isomorphism exists";
    return res;
  }
  res.ok = false;
  std::vector<int> cb(b.n_max + 1, 0), cr(b.n_max + 1, 0);
  for (int a = 0; a < b.size(); ++a) ++cb[b.arity(a)];
  for (int a = 0; a < back.size(); ++a) ++cr[back.arity(a)];
  res.detail = "no isomorphism between b and its round trip";
  for (int n = 0; n <= b.n_max; ++n)
    if (cb[n] != cr[n]) {
      res.detail = "arity " + std::to_string(n) + " has " + std::to_string(cb[n]) + " elements but the round trip has " +
                   std::to_string(cr[n]);
      break;
    }
  return res;
}

bool is_sharp_isomorphism(const FinStructure& m1, const TruncatedSystem& s1, const FinStructure& m2,
                          const TruncatedSystem& s2, const std::vector<int>& perm) {
  if (s1.n_max != s2.n_max || s1.size != m1.size || s2.size != m2.size) return false;
  if (!is_isomorphism(m1, m2, perm)) return false;
  for (int k = 0; k <= s1.n_max; ++k) {
    std::vector<int> fwd(s1.num_classes(k), -1), bwd(s2.num_classes(k), -1);
    int64_t total = tuple_count(m1.size, k);
    for (int64_t code = 0; code < total; ++code) {
      Tuple t = decode_tuple(code, k, m1.size);
      int c1 = s1.cls[k][static_cast<size_t>(code)];
      for (int& x : t) x = perm[x];
      int c2 = s2.class_of(t);
      if (fwd[c1] == -1 && bwd[c2] == -1) {
        fwd[c1] = c2;
        bwd[c2] = c1;
      } else if (fwd[c1] != c2 || bwd[c2] != c1) {
        return false;
      }
    }
  }
  return true;
}

std::optional<std::vector<int>> find_sharp_isomorphism(const FinStructure& m1, const TruncatedSystem& s1,
                                                       const FinStructure& m2, const TruncatedSystem& s2) {
  std::optional<std::vector<int>> out;
  if (m1.size != m2.size || s1.n_max != s2.n_max) return out;
  for (int k = 0; k <= s1.n_max; ++k)
    if (s1.num_classes(k) != s2.num_classes(k)) return out;
  for_each_isomorphism(m1, m2, [&](const std::vector<int>& p) {
    if (!is_sharp_isomorphism(m1, s1, m2, s2, p)) return true;
    out = p;
    return false;
  });
  return out;
}

RoundtripResult roundtrip_sharp(const FinStructure& m, const TruncatedSystem& s) {
  try {
    Reconstruction r = reconstruct(flatten(m, s));
    if (find_sharp_isomorphism(r.m, r.s, m, s)) return {};
    if (!find_isomorphism(r.m, m)) return {false, "reconstructed structure is not isomorphic to the input"};
    return {false, "no isomorphism carries the reconstructed system onto the input system"};
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
}

std::vector<int> canonical_labeling(const FinStructure& m, int guard_size) {
  if (m.size > guard_size)
    throw GuardExceeded("canonical labeling limited to structures of size " + std::to_string(guard_size));
  std::vector<int> perm(m.size);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  FinStructure best_img = relabel(m, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    FinStructure img = relabel(m, perm);
    if (std::tie(img.relations, img.constants) < std::tie(best_img.relations, best_img.constants)) {
      best_img = std::move(img);
      best = perm;
    }
  }
  return best;
}

FinStructure canonical_structure(const FinStructure& m, int guard_size) {
  return relabel(m, canonical_labeling(m, guard_size));
}

FlatStructure canonical_form(const FlatStructure& b) {
  Reconstruction r = reconstruct(b);
  FinStructure cm = canonical_structure(r.m);
  return flatten(cm, compute_F_infinity(cm, b.n_max), b.graph_relations);
}

std::vector<int> cmap(const FlatStructure& b) {
  Reconstruction r = reconstruct(b);
  std::vector<int> perm = canonical_labeling(r.m);
  FinStructure cm = relabel(r.m, perm);
  TruncatedSystem f = compute_F_infinity(cm, b.n_max);
  std::vector<int> out(b.size(), -1);
  for (int n = 0; n <= b.n_max; ++n) {
    int64_t total = tuple_count(r.m.size, n);
    for (int64_t code = 0; code < total; ++code) {
      int x = r.cov[n][static_cast<size_t>(code)];
      if (out[x] != -1) continue;
      Tuple t = decode_tuple(code, n, r.m.size);
      for (int& v : t) v = perm[v];
      out[x] = flat_element_id(f, n, f.class_of(t));
    }
  }
  for (int x = 0; x < b.size(); ++x)
    if (out[x] == -1) throw FlatnessViolation("element " + std::to_string(x) + " is not covered by any tuple");
  return out;
}

std::string serialize_cov_json(const Reconstruction& r) {
  using nlohmann::json;
  json cov = json::object();
  for (size_t n = 0; n < r.cov.size(); ++n) {
    json level = json::object();
    for (size_t code = 0; code < r.cov[n].size(); ++code) {
      Tuple t = decode_tuple(static_cast<int64_t>(code), static_cast<int>(n), r.m.size);
      std::string key;
      for (size_t i = 0; i < t.size(); ++i) key += (i ? "," : "") + std::to_string(t[i]);
      level[key] = r.cov[n][code];
    }
    cov[std::to_string(n)] = level;
  }
  json j = {{"n_max", r.s.n_max}, {"chain", r.chain.chain}, {"closed", r.chain.closed}, {"cov", cov}};
  return j.dump(2) + "\n";
}

}  // namespace scottflat
