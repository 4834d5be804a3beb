#include <algorithm>
#include <numeric>
#include <sstream>

#include "scottflat/reductions.hpp"

namespace scottflat {

void CrossCutSpec::validate() const {
  if (h.empty()) throw InputError("cross-cut spec needs at least one relation");
  if (h.size() > 16) throw InputError("cross-cut spec limited to 16 relations");
  for (int c : h)
    if (c < 2) throw InputError("every relation needs at least 2 classes");
  for (const auto& [cell, m] : mult) {
    if (cell.size() != h.size()) throw InputError("multiplicity cell has the wrong length");
    for (size_t n = 0; n < h.size(); ++n)
      if (cell[n] < 0 || cell[n] >= h[n]) throw InputError("multiplicity cell out of range");
    if (m < 1) throw InputError("multiplicities must be positive");
  }
}

int CrossCutSpec::multiplicity(const std::vector<int>& cell) const {
  auto it = mult.find(cell);
  return it == mult.end() ? 1 : it->second;
}

std::vector<std::vector<int>> CrossCutSpec::cells() const {
  std::vector<std::vector<int>> out;
  std::vector<int> cell(h.size(), 0);
  while (true) {
    out.push_back(cell);
    int n = static_cast<int>(h.size()) - 1;
    while (n >= 0 && ++cell[n] == h[n]) cell[n--] = 0;
    if (n < 0) return out;
  }
}

bool CrossCutSpec::atomic() const {
  return std::all_of(mult.begin(), mult.end(), [](const auto& kv) { return kv.second == 1; });
}

CrossCutSpec parse_cross_cut_spec(std::string_view h_list) {
  CrossCutSpec spec;
  std::stringstream in{std::string(h_list)};
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      size_t used = 0;
      int v = std::stoi(part, &used);
      if (part.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(part);
      spec.h.push_back(v);
    } catch (const std::logic_error&) {
      throw ParseError("expected a comma-separated list of class counts", 1, 1);
    }
  }
  spec.validate();
  return spec;
}

FinStructure build_cross_cut(const CrossCutSpec& spec, int guard_size) {
  spec.validate();
  auto cells = spec.cells();
  int64_t total = 0;
  for (const auto& c : cells) total += spec.multiplicity(c);
  if (total > guard_size)
    throw GuardExceeded("cross-cut structure has " + std::to_string(total) + " elements, guard is " +
                        std::to_string(guard_size));
  std::vector<const std::vector<int>*> cell_of;
  for (const auto& c : cells)
    for (int r = 0; r < spec.multiplicity(c); ++r) cell_of.push_back(&c);
  FinStructure m;
  m.size = static_cast<int>(total);
  for (size_t n = 0; n < spec.h.size(); ++n) m.vocab.relations.push_back({"E" + std::to_string(n), 2});
  m.relations.resize(spec.h.size());
  for (size_t n = 0; n < spec.h.size(); ++n)
    for (int x = 0; x < m.size; ++x)
      for (int y = 0; y < m.size; ++y)
        if ((*cell_of[x])[n] == (*cell_of[y])[n]) m.relations[n].insert({x, y});
  m.validate();
  return m;
}

namespace {

// Least element related to x under each selected relation.
std::vector<int> class_key(const FinStructure& m, int x, uint32_t mask) {
  std::vector<int> key;
  for (size_t n = 0; n < m.relations.size(); ++n) {
    if (!(mask >> n & 1)) continue;
    int least = x;
    for (int y = 0; y < x; ++y)
      if (m.holds(static_cast<int>(n), {x, y})) {
        least = y;
        break;
      }
    key.push_back(least);
  }
  return key;
}

bool is_equivalence(const FinStructure& m, int rel) {
  for (int x = 0; x < m.size; ++x) {
    if (!m.holds(rel, {x, x})) return false;
    for (int y = 0; y < m.size; ++y) {
      if (m.holds(rel, {x, y}) != m.holds(rel, {y, x})) return false;
      if (!m.holds(rel, {x, y})) continue;
      for (int z = 0; z < m.size; ++z)
        if (m.holds(rel, {y, z}) && !m.holds(rel, {x, z})) return false;
    }
  }
  return true;
}

}  // namespace

int intersection_class_count(const FinStructure& m, uint32_t mask) {
  std::set<std::vector<int>> keys;
  for (int x = 0; x < m.size; ++x) keys.insert(class_key(m, x, mask));
  return static_cast<int>(keys.size());
}

FinStructure quotient_coloring(const FinStructure& m) {
  const size_t rels = m.vocab.relations.size();
  if (rels == 0 || rels > 16 || !m.vocab.constants.empty() || !m.vocab.functions.empty())
    throw InputError("not a cross-cut structure: expected only relations E0..E(N-1)");
  std::vector<int> counts;
  for (size_t n = 0; n < rels; ++n) {
    const auto& sym = m.vocab.relations[n];
    if (sym.name != "E" + std::to_string(n) || sym.arity != 2)
      throw InputError("not a cross-cut structure: relation " + std::to_string(n) + " should be binary E" +
                       std::to_string(n));
    if (!is_equivalence(m, static_cast<int>(n)))
      throw InputError("not a cross-cut structure: " + sym.name + " is not an equivalence relation");
    counts.push_back(intersection_class_count(m, 1u << n));
  }
  for (uint32_t mask = 1; mask < (1u << rels); ++mask) {
    int64_t want = 1;
    for (size_t n = 0; n < rels; ++n)
      if (mask >> n & 1) want *= counts[n];
    if (intersection_class_count(m, mask) != want)
      throw InputError("not a cross-cut structure: relations do not cross-cut");
  }

  const uint32_t all = (1u << rels) - 1;
  std::map<std::vector<int>, int> class_id;
  std::vector<int> rep, size;
  for (int x = 0; x < m.size; ++x) {
    auto [it, fresh] = class_id.emplace(class_key(m, x, all), static_cast<int>(rep.size()));
    if (fresh) {
      rep.push_back(x);
      size.push_back(0);
    }
    ++size[it->second];
  }
  std::vector<int> sizes = size;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  FinStructure q;
  q.size = static_cast<int>(rep.size());
  q.vocab.relations = m.vocab.relations;
  for (int s : sizes) q.vocab.relations.push_back({"U" + std::to_string(s), 1});
  q.relations.resize(q.vocab.relations.size());
  for (size_t n = 0; n < rels; ++n)
    for (int a = 0; a < q.size; ++a)
      for (int b = 0; b < q.size; ++b)
        if (m.holds(static_cast<int>(n), {rep[a], rep[b]})) q.relations[n].insert({a, b});
  for (int a = 0; a < q.size; ++a) {
    size_t u = static_cast<size_t>(std::lower_bound(sizes.begin(), sizes.end(), size[a]) - sizes.begin());
    q.relations[rels + u].insert({a});
  }
  q.validate();
  return q;
}

ExponentReport exponent_experiment(const CrossCutSpec& spec, int guard_size) {
  if (!spec.atomic()) throw InputError("exponent experiment needs an atomic spec (all multiplicities 1)");
  PermGroup aut = automorphism_group(build_cross_cut(spec, guard_size), guard_size);
  ExponentReport r;
  r.aut_order = static_cast<int64_t>(aut.order());
  r.exponent = exponent(aut);
  r.k = *std::max_element(spec.h.begin(), spec.h.end());
  r.k_factorial = 1;
  for (int i = 2; i <= r.k; ++i) r.k_factorial *= i;
  r.divides = r.k_factorial % r.exponent == 0;
  auto prime = [](int v) {
    for (int d = 2; d * d <= v; ++d)
      if (v % d == 0) return false;
    return v >= 2;
  };
  r.q = r.k + 1;
  while (!prime(r.q)) ++r.q;
  Perm cycle(r.q);
  for (int i = 0; i < r.q; ++i) cycle[i] = (i + 1) % r.q;
  r.obstruction = !divides_check(aut, generate(r.q, {cycle})).has_value();
  return r;
}

}  // namespace scottflat
