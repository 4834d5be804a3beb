#include "scottflat/groups.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "json.hpp"
#include "scottflat/reconstruct.hpp"

namespace scottflat {

// ---- permutations

Perm identity_perm(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm perm_mul(const Perm& p, const Perm& q) {
  if (p.size() != q.size()) throw InputError("permutation degrees differ");
  Perm r(p.size());
  for (size_t x = 0; x < q.size(); ++x) r[x] = p[q[x]];
  return r;
}

Perm perm_inv(const Perm& p) {
  Perm r(p.size());
  for (size_t x = 0; x < p.size(); ++x) r[p[x]] = static_cast<int>(x);
  return r;
}

Perm perm_pow(const Perm& p, int e) {
  Perm r = identity_perm(static_cast<int>(p.size()));
  Perm base = e < 0 ? perm_inv(p) : p;
  for (int i = 0; i < std::abs(e); ++i) r = perm_mul(base, r);
  return r;
}

std::vector<int> cycle_type(const Perm& p) {
  std::vector<int> lens;
  std::vector<bool> seen(p.size(), false);
  for (size_t s = 0; s < p.size(); ++s) {
    if (seen[s]) continue;
    int len = 0;
    for (size_t x = s; !seen[x]; x = static_cast<size_t>(p[x])) {
      seen[x] = true;
      ++len;
    }
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end());
  return lens;
}

int perm_order(const Perm& p) {
  int64_t o = 1;
  for (int len : cycle_type(p)) o = std::lcm(o, static_cast<int64_t>(len));
  return static_cast<int>(o);
}

bool is_perm(const Perm& p) {
  std::vector<bool> hit(p.size(), false);
  for (int x : p) {
    if (x < 0 || x >= static_cast<int>(p.size()) || hit[x]) return false;
    hit[x] = true;
  }
  return true;
}

Tuple apply_perm(const Perm& p, const Tuple& t) {
  Tuple out(t.size());
  for (size_t i = 0; i < t.size(); ++i) out[i] = p[t[i]];
  return out;
}

std::string perm_to_cycles(const Perm& p) {
  std::string s;
  std::vector<bool> seen(p.size(), false);
  for (size_t start = 0; start < p.size(); ++start) {
    if (seen[start] || p[start] == static_cast<int>(start)) continue;
    s += "(";
    for (size_t x = start; !seen[x]; x = static_cast<size_t>(p[x])) {
      seen[x] = true;
      s += (x == start ? "" : " ") + std::to_string(x);
    }
    s += ")";
  }
  return s.empty() ? "()" : s;
}

Perm parse_cycles(std::string_view text, int degree) {
  std::vector<std::vector<int>> cycles;
  size_t i = 0;
  auto bad = [&](const std::string& msg) { throw InputError("bad cycle notation '" + std::string(text) + "': " + msg); };
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '(') bad("expected '('");
    size_t close = text.find(')', i);
    if (close == std::string_view::npos) bad("missing ')'");
    std::string body(text.substr(i + 1, close - i - 1));
    i = close + 1;
    std::vector<int> cyc;
    bool separated = body.find_first_of(" ,\t") != std::string::npos;
    if (!separated && body.size() > 1) {
      for (char c : body) {
        if (!std::isdigit(static_cast<unsigned char>(c))) bad("unexpected character");
        cyc.push_back(c - '0');
      }
    } else {
      std::string num;
      for (char c : body + " ") {
        if (std::isdigit(static_cast<unsigned char>(c))) {
          num += c;
        } else if (c == ' ' || c == ',' || c == '\t') {
          if (!num.empty()) cyc.push_back(std::stoi(num));
          num.clear();
        } else {
          bad("unexpected character");
        }
      }
    }
    cycles.push_back(std::move(cyc));
  }
  int top = -1;
  for (const auto& c : cycles)
    for (int x : c) top = std::max(top, x);
  if (degree <= 0) degree = top + 1;
  if (degree <= 0) degree = 1;
  if (top >= degree) bad("point " + std::to_string(top) + " exceeds degree " + std::to_string(degree));
  Perm result = identity_perm(degree);
  for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
    const auto& c = *it;
    std::set<int> distinct(c.begin(), c.end());
    if (distinct.size() != c.size()) bad("repeated point in a cycle");
    Perm cyc = identity_perm(degree);
    for (size_t j = 0; j < c.size(); ++j) cyc[c[j]] = c[(j + 1) % c.size()];
    result = perm_mul(cyc, result);
  }
  return result;
}

// ---- groups

bool PermGroup::contains(const Perm& p) const { return std::binary_search(elements.begin(), elements.end(), p); }

int PermGroup::index_of(const Perm& p) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), p);
  if (it == elements.end() || *it != p) return -1;
  return static_cast<int>(it - elements.begin());
}

PermGroup generate(int degree, const std::vector<Perm>& gens, size_t cap) {
  for (const auto& g : gens)
    if (static_cast<int>(g.size()) != degree || !is_perm(g)) throw InputError("generator is not a permutation of the given degree");
  std::set<Perm> seen{identity_perm(degree)};
  std::vector<Perm> frontier{identity_perm(degree)};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        Perm y = perm_mul(g, x);
        if (seen.insert(y).second) {
          if (seen.size() > cap) throw GuardExceeded("group closure exceeds " + std::to_string(cap) + " elements");
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }
  PermGroup g;
  g.degree = degree;
  g.gens = gens;
  g.elements.assign(seen.begin(), seen.end());
  return g;
}

PermGroup group_from_elements(int degree, std::vector<Perm> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  std::vector<Perm> gens;
  std::set<Perm> span{identity_perm(degree)};
  for (const auto& e : elements) {
    if (span.count(e)) continue;
    gens.push_back(e);
    auto g = generate(degree, gens);
    span = std::set<Perm>(g.elements.begin(), g.elements.end());
  }
  PermGroup g;
  g.degree = degree;
  g.gens = gens;
  g.elements.assign(span.begin(), span.end());
  if (g.elements != elements) throw InputError("element set is not closed under composition");
  return g;
}

PermGroup symmetric_group(int n) {
  std::vector<Perm> gens;
  if (n >= 2) {
    Perm t = identity_perm(n);
    std::swap(t[0], t[1]);
    gens.push_back(t);
  }
  if (n >= 3) {
    Perm c(n);
    for (int i = 0; i < n; ++i) c[i] = (i + 1) % n;
    gens.push_back(c);
  }
  return generate(n, gens);
}

PermGroup parse_group(std::string_view text, int degree) {
  std::string t(text);
  t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)) && c != ' '; }),
          t.end());
  size_t first = t.find_first_not_of(' ');
  t = first == std::string::npos ? "" : t.substr(first, t.find_last_not_of(' ') - first + 1);
  if (t.size() >= 2 && (t[0] == 's' || t[0] == 'S') &&
      std::all_of(t.begin() + 1, t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    int n = std::stoi(t.substr(1));
    if (n < 1) throw InputError("symmetric group needs positive degree");
    if (degree > 0 && degree != n) throw InputError("group degree mismatch");
    return symmetric_group(n);
  }
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : t) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == ',' || c == ';')) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (degree <= 0) {
    degree = 1;
    for (const auto& p : parts)
      if (p.find_first_not_of(' ') != std::string::npos)
        degree = std::max(degree, static_cast<int>(parse_cycles(p, 0).size()));
  }
  std::vector<Perm> gens;
  for (const auto& p : parts)
    if (p.find_first_not_of(' ') != std::string::npos) gens.push_back(parse_cycles(p, degree));
  return generate(degree, gens);
}

std::string group_to_string(const PermGroup& g) {
  std::string s = "<";
  for (size_t i = 0; i < g.gens.size(); ++i) s += (i ? ", " : "") + perm_to_cycles(g.gens[i]);
  return s + "> of order " + std::to_string(g.order());
}

PermGroup automorphism_group(const FinStructure& m, int guard_size) {
  if (m.size > guard_size)
    throw GuardExceeded("automorphism search limited to structures of size " + std::to_string(guard_size));
  const FinStructure rel = m.vocab.relational() ? m : relationalize(m);
  return group_from_elements(m.size, enumerate_automorphisms(rel));
}

// ---- codes

namespace {

int64_t rank_of(const Tuple& t, int degree) { return encode_tuple(t, degree); }

}  // namespace

bool SubgroupCode::has(const Tuple& a, const Tuple& b) const {
  size_t k = a.size();
  int64_t total = tuple_count(degree, static_cast<int>(k));
  return pairs[k][static_cast<size_t>(rank_of(a, degree) * total + rank_of(b, degree))] != 0;
}

void SubgroupCode::add(const Tuple& a, const Tuple& b) {
  if (a.size() != b.size() || static_cast<int>(a.size()) > n_max) throw InputError("pair does not fit the code");
  size_t k = a.size();
  int64_t total = tuple_count(degree, static_cast<int>(k));
  pairs[k][static_cast<size_t>(rank_of(a, degree) * total + rank_of(b, degree))] = 1;
}

int64_t SubgroupCode::count(int k) const {
  return std::count(pairs[k].begin(), pairs[k].end(), static_cast<uint8_t>(1));
}

SubgroupCode empty_code(int degree, int n_max) {
  if (degree < 1 || n_max < 0) throw InputError("bad code shape");
  SubgroupCode f;
  f.degree = degree;
  f.n_max = n_max;
  f.pairs.resize(n_max + 1);
  for (int k = 0; k <= n_max; ++k) {
    int64_t t = tuple_count(degree, k);
    f.pairs[k].assign(static_cast<size_t>(t * t), 0);
  }
  return f;
}

SubgroupCode code_of(const std::vector<Perm>& c, int degree, int n_max) {
  SubgroupCode f = empty_code(degree, n_max);
  for (const auto& s : c)
    if (static_cast<int>(s.size()) != degree || !is_perm(s)) throw InputError("code_of needs permutations of the code degree");
  for (int k = 0; k <= n_max; ++k) {
    int64_t total = tuple_count(degree, k);
    for (const auto& s : c)
      for (int64_t i = 0; i < total; ++i) {
        int64_t j = rank_of(apply_perm(s, decode_tuple(i, k, degree)), degree);
        f.pairs[k][static_cast<size_t>(i * total + j)] = 1;
      }
  }
  return f;
}

SubgroupCode code_of(const PermGroup& g, int n_max) { return code_of(g.elements, g.degree, n_max); }

std::vector<Perm> group_of_code(const SubgroupCode& f) {
  if (f.n_max < f.degree)
    throw InputError("code with n_max " + std::to_string(f.n_max) + " < degree " + std::to_string(f.degree) +
                     " does not determine its group");
  std::vector<Perm> out;
  Perm p = identity_perm(f.degree);
  do {
    bool inside = true;
    for (int k = 0; k <= f.n_max && inside; ++k) {
      int64_t total = tuple_count(f.degree, k);
      for (int64_t i = 0; i < total && inside; ++i) {
        int64_t j = rank_of(apply_perm(p, decode_tuple(i, k, f.degree)), f.degree);
        inside = f.pairs[k][static_cast<size_t>(i * total + j)] != 0;
      }
    }
    if (inside) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool is_downward_closed(const SubgroupCode& f) {
  for (int k = 0; k <= f.n_max; ++k) {
    int64_t total = tuple_count(f.degree, k);
    for (int64_t i = 0; i < total; ++i)
      for (int64_t j = 0; j < total; ++j) {
        if (!f.pairs[k][static_cast<size_t>(i * total + j)]) continue;
        Tuple a = decode_tuple(i, k, f.degree), b = decode_tuple(j, k, f.degree);
        for (int l = 0; l < k; ++l)
          for (const auto& g : injections(l, k))
            if (!f.has(subsequence(a, g), subsequence(b, g))) return false;
      }
  }
  return true;
}

SharpReport sharp_code_report(const SubgroupCode& f) {
  auto bad = [](int k, Tuple a, Tuple b, std::string detail) {
    SharpReport r;
    r.ok = false;
    r.clause = "equivalence";
    r.arity = k;
    r.left = std::move(a);
    r.right = std::move(b);
    r.detail = std::move(detail);
    return r;
  };
  for (int k = 0; k <= f.n_max; ++k) {
    int64_t total = tuple_count(f.degree, k);
    auto at = [&](int64_t i, int64_t j) { return f.pairs[k][static_cast<size_t>(i * total + j)] != 0; };
    for (int64_t i = 0; i < total; ++i)
      if (!at(i, i)) return bad(k, decode_tuple(i, k, f.degree), decode_tuple(i, k, f.degree), "not reflexive");
    for (int64_t i = 0; i < total; ++i)
      for (int64_t j = 0; j < total; ++j)
        if (at(i, j) && !at(j, i)) return bad(k, decode_tuple(i, k, f.degree), decode_tuple(j, k, f.degree), "not symmetric");
    for (int64_t i = 0; i < total; ++i)
      for (int64_t j = 0; j < total; ++j) {
        if (!at(i, j)) continue;
        for (int64_t l = 0; l < total; ++l)
          if (at(j, l) && !at(i, l))
            return bad(k, decode_tuple(i, k, f.degree), decode_tuple(l, k, f.degree), "not transitive");
      }
  }
  FinStructure pure;
  pure.size = f.degree;
  return validate_sharp(pure, code_to_system(f));
}

bool is_sharp_code(const SubgroupCode& f) { return sharp_code_report(f).ok; }

SubgroupCode system_to_code(const TruncatedSystem& s) {
  SubgroupCode f = empty_code(s.size, s.n_max);
  for (int k = 0; k <= s.n_max; ++k) {
    size_t total = s.cls[k].size();
    for (size_t i = 0; i < total; ++i)
      for (size_t j = 0; j < total; ++j)
        if (s.cls[k][i] == s.cls[k][j]) f.pairs[k][i * total + j] = 1;
  }
  return f;
}

TruncatedSystem code_to_system(const SubgroupCode& f) {
  TruncatedSystem s;
  s.size = f.degree;
  s.n_max = f.n_max;
  s.cls.resize(f.n_max + 1);
  for (int k = 0; k <= f.n_max; ++k) {
    int64_t total = tuple_count(f.degree, k);
    std::vector<int> raw(static_cast<size_t>(total), -1);
    for (int64_t i = 0; i < total; ++i) {
      for (int64_t j = 0; j <= i; ++j)
        if (f.pairs[k][static_cast<size_t>(i * total + j)]) {
          raw[static_cast<size_t>(i)] = static_cast<int>(j);
          break;
        }
      if (raw[static_cast<size_t>(i)] < 0) throw InputError("code is not reflexive at arity " + std::to_string(k));
    }
    s.cls[k] = canonical_ids(raw);
  }
  return s;
}

// ---- fix, conjugacy, bireduction

namespace {

bool moves_within_classes(const TruncatedSystem& s, const Perm& sigma) {
  for (int k = 0; k <= s.n_max; ++k) {
    int64_t total = tuple_count(s.size, k);
    for (int64_t i = 0; i < total; ++i) {
      Tuple t = apply_perm(sigma, decode_tuple(i, k, s.size));
      if (s.cls[k][static_cast<size_t>(i)] != s.class_of(t)) return false;
    }
  }
  return true;
}

}  // namespace

PermGroup fix(const FinStructure& m, const TruncatedSystem& s, int guard_size) {
  if (s.size != m.size) throw InputError("system and structure sizes differ");
  PermGroup aut = automorphism_group(m, guard_size);
  std::vector<Perm> keep;
  for (const auto& p : aut.elements)
    if (moves_within_classes(s, p)) keep.push_back(p);
  return group_from_elements(m.size, keep);
}

PermGroup sharp_automorphism_group(const FinStructure& m, const TruncatedSystem& s, int guard_size) {
  if (s.size != m.size) throw InputError("system and structure sizes differ");
  PermGroup aut = automorphism_group(m, guard_size);
  const FinStructure rel = m.vocab.relational() ? m : relationalize(m);
  std::vector<Perm> keep;
  for (const auto& p : aut.elements)
    if (is_sharp_isomorphism(rel, s, rel, s, p)) keep.push_back(p);
  return group_from_elements(m.size, keep);
}

bool is_subgroup_of(const PermGroup& h, const PermGroup& g) {
  if (h.degree != g.degree) return false;
  for (const auto& p : h.elements)
    if (!g.contains(p)) return false;
  return true;
}

PermGroup conjugate(const PermGroup& h, const Perm& delta) {
  Perm inv = perm_inv(delta);
  std::vector<Perm> gens, elems;
  for (const auto& g : h.gens) gens.push_back(perm_mul(delta, perm_mul(g, inv)));
  for (const auto& e : h.elements) elems.push_back(perm_mul(delta, perm_mul(e, inv)));
  std::sort(elems.begin(), elems.end());
  PermGroup out;
  out.degree = h.degree;
  out.gens = std::move(gens);
  out.elements = std::move(elems);
  return out;
}

std::optional<Perm> conjugacy_test(const PermGroup& h1, const PermGroup& h2, const PermGroup& g) {
  if (!is_subgroup_of(h1, g) || !is_subgroup_of(h2, g)) throw InputError("conjugacy test needs subgroups of the ambient group");
  if (h1.order() != h2.order()) return std::nullopt;
  std::multiset<std::vector<int>> t1, t2;
  for (const auto& p : h1.elements) t1.insert(cycle_type(p));
  for (const auto& p : h2.elements) t2.insert(cycle_type(p));
  if (t1 != t2) return std::nullopt;
  for (const auto& delta : g.elements) {
    Perm inv = perm_inv(delta);
    bool ok = true;
    for (const auto& x : h1.gens) {
      if (!h2.contains(perm_mul(delta, perm_mul(x, inv)))) {
        ok = false;
        break;
      }
    }
    if (ok) return delta;
  }
  return std::nullopt;
}

BireductionResult bireduction_check(const FinStructure& m, const TruncatedSystem& s1, const TruncatedSystem& s2,
                                    int guard_size) {
  BireductionResult r;
  const FinStructure rel = m.vocab.relational() ? m : relationalize(m);
  r.isomorphism = find_sharp_isomorphism(rel, s1, rel, s2);
  r.isomorphic = r.isomorphism.has_value();
  PermGroup aut = automorphism_group(m, guard_size);
  r.conjugator = conjugacy_test(fix(m, s1, guard_size), fix(m, s2, guard_size), aut);
  r.conjugate = r.conjugator.has_value();
  return r;
}

Perm induced_permutation(const TruncatedSystem& s, const Perm& sigma) {
  Perm out;
  int offset = 0;
  for (int n = 0; n <= s.n_max; ++n) {
    for (const auto& rep : s.representatives(n)) out.push_back(offset + s.class_of(apply_perm(sigma, rep)));
    offset += s.num_classes(n);
  }
  return out;
}

InducedAction induced_flat_action(const FinStructure& m, const TruncatedSystem& s, int guard_size) {
  InducedAction act;
  act.domain = sharp_automorphism_group(m, s, guard_size).elements;
  for (const auto& p : act.domain) act.images.push_back(induced_permutation(s, p));
  FlatStructure b = flatten(m.vocab.relational() ? m : relationalize(m), s);
  act.target = flat_automorphisms(b);
  std::sort(act.target.begin(), act.target.end());
  act.homomorphism = true;
  for (size_t i = 0; i < act.domain.size() && act.homomorphism; ++i) {
    if (!is_flat_isomorphism(b, b, act.images[i])) act.homomorphism = false;
    for (size_t j = 0; j < act.domain.size() && act.homomorphism; ++j) {
      Perm prod = perm_mul(act.domain[i], act.domain[j]);
      size_t k = static_cast<size_t>(std::lower_bound(act.domain.begin(), act.domain.end(), prod) - act.domain.begin());
      if (perm_mul(act.images[i], act.images[j]) != act.images[k]) act.homomorphism = false;
    }
  }
  std::vector<Perm> distinct = act.images;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  act.surjective = distinct == act.target;
  return act;
}

int64_t exponent(const PermGroup& g) {
  int64_t e = 1;
  for (const auto& p : g.elements) e = std::lcm(e, static_cast<int64_t>(perm_order(p)));
  return e;
}

// ---- subgroups and quotients

namespace {

struct Table {
  std::vector<std::vector<int>> mul;
  explicit Table(const PermGroup& g) : mul(g.order(), std::vector<int>(g.order())) {
    for (size_t i = 0; i < g.order(); ++i)
      for (size_t j = 0; j < g.order(); ++j) mul[i][j] = g.index_of(perm_mul(g.elements[i], g.elements[j]));
  }
  uint64_t closure(uint64_t mask) const {
    while (true) {
      uint64_t next = mask;
      for (size_t i = 0; i < mul.size(); ++i)
        if (mask >> i & 1)
          for (size_t j = 0; j < mul.size(); ++j)
            if (mask >> j & 1) next |= uint64_t{1} << mul[i][j];
      if (next == mask) return mask;
      mask = next;
    }
  }
};

PermGroup from_mask(const PermGroup& g, uint64_t mask) {
  std::vector<Perm> elems;
  for (size_t i = 0; i < g.order(); ++i)
    if (mask >> i & 1) elems.push_back(g.elements[i]);
  return group_from_elements(g.degree, elems);
}

}  // namespace

std::vector<PermGroup> all_subgroups(const PermGroup& g, size_t guard) {
  if (g.order() > guard || g.order() > 64)
    throw GuardExceeded("subgroup enumeration limited to groups of order " + std::to_string(std::min<size_t>(guard, 64)));
  Table t(g);
  std::set<uint64_t> seen{1};
  std::vector<uint64_t> queue{1};
  for (size_t q = 0; q < queue.size(); ++q) {
    uint64_t h = queue[q];
    for (size_t i = 0; i < g.order(); ++i) {
      if (h >> i & 1) continue;
      uint64_t c = t.closure(h | uint64_t{1} << i);
      if (seen.insert(c).second) queue.push_back(c);
    }
  }
  std::vector<uint64_t> masks(seen.begin(), seen.end());
  std::sort(masks.begin(), masks.end(), [](uint64_t a, uint64_t b) {
    int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<PermGroup> out;
  for (uint64_t m : masks) out.push_back(from_mask(g, m));
  return out;
}

bool is_normal(const PermGroup& n, const PermGroup& g) {
  if (!is_subgroup_of(n, g)) return false;
  for (const auto& x : g.gens) {
    Perm inv = perm_inv(x);
    for (const auto& y : n.gens)
      if (!n.contains(perm_mul(x, perm_mul(y, inv)))) return false;
  }
  return true;
}

std::vector<PermGroup> normal_subgroups(const PermGroup& g, size_t guard) {
  std::vector<PermGroup> out;
  for (auto& h : all_subgroups(g, guard))
    if (is_normal(h, g)) out.push_back(std::move(h));
  return out;
}

CosetAction coset_action(const PermGroup& g, const PermGroup& n) {
  if (!is_normal(n, g)) throw InputError("coset action needs a normal subgroup");
  std::vector<int> coset(g.order(), -1);
  int count = 0;
  for (size_t i = 0; i < g.order(); ++i) {
    if (coset[i] >= 0) continue;
    for (const auto& y : n.elements) coset[g.index_of(perm_mul(g.elements[i], y))] = count;
    ++count;
  }
  std::vector<int> rep(count, -1);
  for (size_t i = 0; i < g.order(); ++i)
    if (rep[coset[i]] < 0) rep[coset[i]] = static_cast<int>(i);
  std::vector<Perm> images(g.order(), Perm(count));
  for (size_t i = 0; i < g.order(); ++i)
    for (int c = 0; c < count; ++c)
      images[i][c] = coset[g.index_of(perm_mul(g.elements[i], g.elements[rep[c]]))];
  CosetAction out;
  out.quotient = group_from_elements(count, images);
  for (size_t i = 0; i < g.order(); ++i) out.image_of.push_back(out.quotient.index_of(images[i]));
  return out;
}

PermGroup preimage(const PermGroup& g, const CosetAction& q, const PermGroup& h) {
  std::vector<Perm> elems;
  for (size_t i = 0; i < g.order(); ++i)
    if (h.contains(q.quotient.elements[q.image_of[i]])) elems.push_back(g.elements[i]);
  return group_from_elements(g.degree, elems);
}

bool is_surjective_homomorphism(const PermGroup& src, const std::vector<Perm>& images, const PermGroup& dst) {
  if (images.size() != src.gens.size()) return false;
  for (const auto& im : images)
    if (!dst.contains(im)) return false;
  std::vector<int> img(src.order(), -1);
  std::vector<int> queue{src.index_of(identity_perm(src.degree))};
  img[queue[0]] = dst.index_of(identity_perm(dst.degree));
  for (size_t q = 0; q < queue.size(); ++q) {
    int x = queue[q];
    for (size_t i = 0; i < src.gens.size(); ++i) {
      int y = src.index_of(perm_mul(src.gens[i], src.elements[x]));
      int want = dst.index_of(perm_mul(images[i], dst.elements[img[x]]));
      if (img[y] == -1) {
        img[y] = want;
        queue.push_back(y);
      } else if (img[y] != want) {
        return false;
      }
    }
  }
  std::set<int> hit(img.begin(), img.end());
  return hit.size() == dst.order() && !hit.count(-1);
}

std::optional<DividesWitness> divides_check(const PermGroup& g, const PermGroup& h, size_t guard) {
  int64_t e = exponent(g);
  for (const auto& x : h.elements)
    if (e % perm_order(x) != 0) return std::nullopt;
  for (const auto& sub : all_subgroups(g, guard)) {
    if (sub.order() % h.order() != 0) continue;
    std::vector<Perm> images(sub.gens.size());
    std::function<bool(size_t)> rec = [&](size_t i) {
      if (i == sub.gens.size()) return is_surjective_homomorphism(sub, images, h);
      int ord = perm_order(sub.gens[i]);
      for (const auto& y : h.elements) {
        if (ord % perm_order(y) != 0) continue;
        images[i] = y;
        if (rec(i + 1)) return true;
      }
      return false;
    };
    if (rec(0)) return DividesWitness{sub, images};
  }
  return std::nullopt;
}

// ---- serialization

std::string serialize_group_json(const PermGroup& g) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& p : g.gens) gens.push_back(perm_to_cycles(p));
  nlohmann::json j = {{"degree", g.degree}, {"generators", gens}, {"order", g.order()}};
  return j.dump(2) + "\n";
}

PermGroup parse_group_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1, static_cast<int>(e.byte));
  }
  try {
    int degree = j.at("degree").get<int>();
    std::vector<Perm> gens;
    for (const auto& s : j.at("generators")) gens.push_back(parse_cycles(s.get<std::string>(), degree));
    return generate(degree, gens);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed group JSON: ") + e.what(), 1, 1);
  }
}

std::string serialize_code_json(const SubgroupCode& f) {
  nlohmann::json pairs = nlohmann::json::object();
  for (int k = 0; k <= f.n_max; ++k) {
    nlohmann::json list = nlohmann::json::array();
    int64_t total = tuple_count(f.degree, k);
    for (int64_t i = 0; i < total; ++i)
      for (int64_t j = 0; j < total; ++j)
        if (f.pairs[k][static_cast<size_t>(i * total + j)])
          list.push_back({decode_tuple(i, k, f.degree), decode_tuple(j, k, f.degree)});
    pairs[std::to_string(k)] = list;
  }
  nlohmann::json j = {{"degree", f.degree}, {"n_max", f.n_max}, {"pairs", pairs}};
  return j.dump(2) + "\n";
}

}  // namespace scottflat
