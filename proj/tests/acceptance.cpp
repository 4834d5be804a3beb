// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "scottflat/backforth.hpp"
#include "scottflat/corpus.hpp"
#include "scottflat/flat.hpp"
#include "scottflat/groups.hpp"
#include "scottflat/reconstruct.hpp"
#include "scottflat/reductions.hpp"
#include "scottflat/structures.hpp"

using namespace scottflat;

namespace {

struct Outcome {
  int failures = 0;
  int64_t checks = 0;
  std::string first;
  std::string note;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
};

// A corpus structure paired with one of its subgroup systems.
struct Instance {
  std::string name;
  FinStructure m;
  TruncatedSystem s;
  PermGroup h;
  bool largest = false;
};

const Corpus& corpus() {
  static const Corpus c = generate_corpus(0);
  return c;
}

FinStructure relational_form(const FinStructure& m) { return m.vocab.relational() ? m : relationalize(m); }

// Every corpus structure with the orbit system of every subgroup of its automorphism group.
std::vector<Instance> instances(const std::function<int(const FinStructure&)>& n_max_of, int max_size = 4) {
  std::vector<Instance> out;
  for (const auto& c : corpus().structures) {
    if (c.m.size > max_size) continue;
    FinStructure m = relational_form(c.m);
    PermGroup aut = automorphism_group(m);
    int n = n_max_of(m);
    for (const auto& h : all_subgroups(aut)) {
      Instance inst{c.name, m, orbit_system(m.size, n, h.gens), h, h.order() == aut.order()};
      out.push_back(std::move(inst));
    }
  }
  return out;
}

int size_plus_one(const FinStructure& m) { return m.size + 1; }

int element_of(const TruncatedSystem& s, const Tuple& t) {
  return flat_element_id(s, static_cast<int>(t.size()), s.class_of(t));
}

bool injective(const std::vector<int>& v) { return std::set<int>(v.begin(), v.end()).size() == v.size(); }

// ---- 1
Outcome oracle_equivalence() {
  Outcome o;
  int count = 0;
  for (const auto& c : corpus().structures) {
    if (c.m.size > 4) continue;
    ++count;
    o.expect(same_partitions(compute_F_infinity(c.m, 3), orbit_oracle(c.m, 3)), c.name);
  }
  o.note = std::to_string(count) + " structures at n_max 3";
  return o;
}

// ---- 2
Outcome flattening_soundness() {
  Outcome o;
  int64_t checked = 0, skipped = 0;
  auto all = instances(size_plus_one);
  for (const auto& inst : all) {
    FlatReport r = check_flat_axioms(flatten(inst.m, inst.s));
    checked += r.amalgamation_checked;
    skipped += r.amalgamation_skipped;
    o.expect(r.ok, inst.name + " " + group_to_string(inst.h) + ": axiom " + r.axiom + " " + r.detail);
  }
  o.note = std::to_string(all.size()) + " (M,S) pairs; amalgamation instances checked " + std::to_string(checked) +
           ", skipped " + std::to_string(skipped);
  return o;
}

// ---- 3
Formula random_formula(std::mt19937& rng, const Vocabulary& v, int vars, int quantifiers, int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<uint32_t>(n)); };
  if (depth == 0 || pick(4) == 0 || (vars == 0 && quantifiers == 0)) {
    if (vars == 0) return Formula::truth(pick(2) == 0);
    if (v.relations.empty() || pick(3) == 0) return Formula::eq(pick(vars), pick(vars));
    int r = pick(static_cast<int>(v.relations.size()));
    std::vector<int> args;
    for (int i = 0; i < v.relations[r].arity; ++i) args.push_back(pick(vars));
    return Formula::rel(r, args);
  }
  int choice = pick(quantifiers > 0 ? 5 : 3);
  switch (choice) {
    case 0:
      return Formula::neg(random_formula(rng, v, vars, quantifiers, depth - 1));
    case 1:
      return Formula::conj({random_formula(rng, v, vars, quantifiers, depth - 1),
                            random_formula(rng, v, vars, quantifiers, depth - 1)});
    case 2:
      return Formula::disj({random_formula(rng, v, vars, quantifiers, depth - 1),
                            random_formula(rng, v, vars, quantifiers, depth - 1)});
    case 3:
      return Formula::exists(vars, random_formula(rng, v, vars + 1, quantifiers - 1, depth - 1));
    default:
      return Formula::forall(vars, random_formula(rng, v, vars + 1, quantifiers - 1, depth - 1));
  }
}

Outcome transfer() {
  Outcome o;
  const int n_max = 3;
  auto all = instances([](const FinStructure&) { return n_max; });
  std::vector<FlatStructure> flats;
  for (const auto& inst : all) flats.push_back(flatten(inst.m, inst.s));
  std::mt19937 rng(2024);
  int64_t evaluations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    size_t i = rng() % all.size();
    const Instance& inst = all[i];
    int arity = static_cast<int>(rng() % 3);
    Formula f = random_formula(rng, inst.m.vocab, arity, n_max - arity, 5);
    if (quantifier_rank(f) + arity > n_max) {
      o.expect(false, "generator exceeded the rank bound");
      continue;
    }
    FlatFormula g = translate(f, arity);
    for (int64_t code = 0; code < tuple_count(inst.m.size, arity); ++code) {
      Tuple t = decode_tuple(code, arity, inst.m.size);
      ++evaluations;
      o.expect(eval_formula(inst.m, f, t) == eval_flat(flats[i], g, element_of(inst.s, t)),
               inst.name + " " + formula_to_string(f, inst.m.vocab));
    }
  }
  o.note = "500 formulas, " + std::to_string(evaluations) + " evaluations over " + std::to_string(all.size()) +
           " (M,S) pairs";
  return o;
}

// ---- 4
Outcome round_trips() {
  Outcome o;
  auto all = instances(size_plus_one);
  for (const auto& inst : all) {
    FlatStructure b = flatten(inst.m, inst.s);
    std::string tag = inst.name + " " + group_to_string(inst.h);
    RoundtripResult flat_side = roundtrip_check(b);
    o.expect(flat_side.ok, tag + " flat: " + flat_side.detail);
    RoundtripResult sharp_side = roundtrip_sharp(inst.m, inst.s);
    o.expect(sharp_side.ok, tag + " sharp: " + sharp_side.detail);
    Reconstruction lo = reconstruct(b, ChainOrder::Least), hi = reconstruct(b, ChainOrder::Greatest);
    o.expect(find_sharp_isomorphism(lo.m, lo.s, hi.m, hi.s).has_value(), tag + " chain orders");
  }
  o.note = std::to_string(all.size()) + " (M,S) pairs, both chain orders";
  return o;
}

// ---- 5
Outcome hausdorff_characterization() {
  Outcome o;
  auto all = instances(size_plus_one);
  int haus = 0;
  for (const auto& inst : all) {
    FlatStructure b = flatten(inst.m, inst.s);
    bool h = hausdorff_check(b).hausdorff;
    bool largest = same_partitions(inst.s, compute_F_infinity(inst.m, inst.s.n_max));
    haus += h;
    std::string tag = inst.name + " " + group_to_string(inst.h);
    o.expect(h == largest, tag + " hausdorff " + std::to_string(h));
    o.expect(injective(cmap(b)) == h, tag + " cmap");
  }
  o.note = std::to_string(all.size()) + " (M,S) pairs, " + std::to_string(haus) + " Hausdorff";
  return o;
}

// ---- 6
std::vector<Perm> all_perms(int n) {
  Perm p = identity_perm(n);
  std::vector<Perm> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool closed_subset(const std::vector<Perm>& c, int n) {
  std::set<Perm> s(c.begin(), c.end());
  if (!s.count(identity_perm(n))) return false;
  for (const auto& a : c)
    for (const auto& b : c)
      if (!s.count(perm_mul(a, b))) return false;
  return true;
}

Outcome codes() {
  Outcome o;
  int subgroups = 0, sharp = 0;
  for (int n = 1; n <= 4; ++n)
    for (const auto& h : all_subgroups(symmetric_group(n))) {
      ++subgroups;
      SubgroupCode f = code_of(h, n);
      o.expect(group_of_code(f) == h.elements, "C(F(C)) for " + group_to_string(h));
    }
  std::vector<Perm> s3 = all_perms(3);
  for (int mask = 0; mask < 64; ++mask) {
    std::vector<Perm> c;
    for (int i = 0; i < 6; ++i)
      if (mask >> i & 1) c.push_back(s3[i]);
    SubgroupCode f = code_of(c, 3, 3);
    bool is_sharp = is_sharp_code(f);
    o.expect(is_sharp == closed_subset(c, 3), "sharpness of subset " + std::to_string(mask));
    if (!is_sharp) continue;
    ++sharp;
    o.expect(code_of(group_of_code(f), 3, 3) == f, "F(C(F)) for subset " + std::to_string(mask));
  }
  for (int n = 1; n <= 4; ++n)
    for (const auto& h : all_subgroups(symmetric_group(n))) {
      SubgroupCode f = system_to_code(orbit_system(n, n, h.gens));
      if (!is_sharp_code(f)) {
        o.expect(false, "orbit code not sharp");
        continue;
      }
      ++sharp;
      o.expect(code_of(group_of_code(f), n, n) == f, "F(C(F)) for " + group_to_string(h));
    }
  o.note = std::to_string(subgroups) + " subgroups of Sym(n<=4), 64 subsets of Sym(3), " + std::to_string(sharp) +
           " sharp codes";
  return o;
}

// ---- 7
Outcome fix_and_extension() {
  Outcome o;
  auto all = instances(size_plus_one);
  int64_t pairs = 0;
  for (const auto& inst : all) {
    std::string tag = inst.name + " " + group_to_string(inst.h);
    PermGroup f = fix(inst.m, inst.s);
    o.expect(f.elements == group_of_code(system_to_code(inst.s)), tag + " fix");
    const TruncatedSystem& s = inst.s;
    for (int k = 1; k <= s.n_max; ++k) {
      int64_t total = tuple_count(s.size, k);
      for (int64_t a = 0; a < total; ++a) {
        Tuple ta = decode_tuple(a, k, s.size);
        // Every tuple in the class of ta is reached by some element of the fix group.
        std::set<Tuple> reached;
        for (const auto& p : f.elements) reached.insert(apply_perm(p, ta));
        for (int64_t b = 0; b < total; ++b) {
          if (s.cls[k][static_cast<size_t>(a)] != s.cls[k][static_cast<size_t>(b)]) continue;
          ++pairs;
          o.expect(reached.count(decode_tuple(b, k, s.size)) > 0, tag + " extension");
        }
      }
    }
  }
  o.note = std::to_string(all.size()) + " (M,S) pairs, " + std::to_string(pairs) + " related tuple pairs";
  return o;
}

// ---- 8
Outcome bireduction() {
  Outcome o;
  int64_t pairs = 0, conjugate = 0;
  for (const auto& c : corpus().structures) {
    if (c.m.size > 4) continue;
    FinStructure m = relational_form(c.m);
    auto subs = all_subgroups(automorphism_group(m));
    std::vector<TruncatedSystem> systems;
    for (const auto& h : subs) systems.push_back(orbit_system(m.size, m.size, h.gens));
    for (size_t i = 0; i < subs.size(); ++i)
      for (size_t j = 0; j < subs.size(); ++j) {
        BireductionResult r = bireduction_check(m, systems[i], systems[j]);
        ++pairs;
        conjugate += r.conjugate;
        o.expect(r.agree(), c.name + " " + group_to_string(subs[i]) + " vs " + group_to_string(subs[j]));
      }
  }
  o.note = std::to_string(pairs) + " subgroup pairs, " + std::to_string(conjugate) + " conjugate";
  return o;
}

// ---- 9
Outcome induced_action() {
  Outcome o;
  auto all = instances(size_plus_one);
  for (const auto& inst : all) {
    InducedAction a = induced_flat_action(inst.m, inst.s);
    std::string tag = inst.name + " " + group_to_string(inst.h);
    o.expect(a.homomorphism, tag + " homomorphism");
    o.expect(a.surjective, tag + " surjective");
  }
  o.note = std::to_string(all.size()) + " (M,S) pairs";
  return o;
}

// ---- 10
Outcome fs_pipeline() {
  Outcome o;
  int graph_pairs = 0, trees = 0;
  int64_t tree_pairs = 0;
  auto check_tree = [&](const PaddedTree& t, const std::string& tag) {
    ++trees;
    o.expect(!padding_defect(t, 3).has_value(), tag + " padding");
    o.expect(recover_order(tree_automorphism_generators(t)) == ancestor_order(t), tag + " recovered order");
  };
  for (int k = 1; k <= 3; ++k) {
    auto graphs = all_graphs(k);
    for (const auto& g : graphs) check_tree(graph_to_padded_tree(g, 3), serialize_graph(g));
    for (const auto& g : graphs)
      for (const auto& h : graphs) {
        ++graph_pairs;
        o.expect(fs_pipeline_check(g, h, 3).agree(), serialize_graph(g) + " vs " + serialize_graph(h));
      }
  }
  for (const auto& pair : corpus().graph_pairs) {
    if (pair.g.k != 4) continue;
    ++graph_pairs;
    FsReport r = fs_pipeline_check(pair.g, pair.h, 3);
    o.expect(r.agree(), pair.name);
    check_tree(graph_to_padded_tree(pair.g, 3), pair.name + " g");
    check_tree(graph_to_padded_tree(pair.h, 3), pair.name + " h");
  }
  for (int n = 1; n <= 8; ++n) {
    auto small = all_rooted_trees(n);
    std::vector<SparseGroup> gens;
    for (const auto& t : small) gens.push_back(tree_automorphism_generators(t));
    for (size_t i = 0; i < small.size(); ++i)
      for (size_t j = 0; j < small.size(); ++j) {
        ++tree_pairs;
        auto fast = conjugacy_by_orders(gens[i], gens[j]);
        auto blind = blind_conjugacy(gens[i], gens[j]);
        o.expect(fast.has_value() == blind.has_value(), "trees of size " + std::to_string(n));
      }
  }
  o.note = std::to_string(graph_pairs) + " graph pairs, " + std::to_string(trees) + " padded trees, " +
           std::to_string(tree_pairs) + " small tree pairs";
  return o;
}

// ---- 11
std::vector<std::vector<int>> specs_up_to_three() {
  std::vector<std::vector<int>> out;
  for (int n = 1; n <= 3; ++n)
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> h;
      for (int i = 0; i < n; ++i) h.push_back(mask >> i & 1 ? 3 : 2);
      out.push_back(h);
    }
  return out;
}

// A spec symmetry: one permutation of class indices per coordinate.
using Symmetry = std::vector<Perm>;

std::vector<Symmetry> spec_symmetries(const std::vector<int>& h) {
  std::vector<Symmetry> out{{}};
  for (int c : h) {
    std::vector<Symmetry> next;
    for (const auto& s : out)
      for (const auto& p : all_perms(c)) {
        Symmetry t = s;
        t.push_back(p);
        next.push_back(t);
      }
    out = next;
  }
  return out;
}

std::vector<int> apply_symmetry(const Symmetry& s, const std::vector<int>& cell) {
  std::vector<int> out(cell.size());
  for (size_t n = 0; n < cell.size(); ++n) out[n] = s[n][cell[n]];
  return out;
}

bool related_by_symmetry(const CrossCutSpec& a, const CrossCutSpec& b, const std::vector<Symmetry>& syms) {
  auto cells = a.cells();
  for (const auto& s : syms)
    if (std::all_of(cells.begin(), cells.end(), [&](const std::vector<int>& cell) {
          return a.multiplicity(cell) == b.multiplicity(apply_symmetry(s, cell));
        }))
      return true;
  return false;
}

Outcome cross_cut() {
  Outcome o;
  std::ostringstream note;
  for (const auto& h : specs_up_to_three()) {
    CrossCutSpec spec;
    spec.h = h;
    ExponentReport r = exponent_experiment(spec);
    std::string tag;
    for (int v : h) tag += (tag.empty() ? "" : ",") + std::to_string(v);
    o.expect(r.divides && r.k_factorial % r.exponent == 0, "exponent for h=" + tag);
    o.expect(r.obstruction, "obstruction for h=" + tag);
    if (h == std::vector<int>{2, 2}) o.expect(r.aut_order == 4 && r.exponent == 2, "h=2,2 values");
    if (h == std::vector<int>{2, 3}) o.expect(r.aut_order == 12 && r.exponent == 6, "h=2,3 values");
  }

  std::mt19937 rng(6);
  int64_t comparisons = 0, iso = 0;
  for (const auto& h : specs_up_to_three()) {
    CrossCutSpec base;
    base.h = h;
    auto cells = base.cells();
    auto syms = spec_symmetries(h);
    // Half the patterns are random, half are symmetric images of earlier ones.
    std::vector<CrossCutSpec> patterns;
    for (int t = 0; t < 20; ++t) {
      CrossCutSpec s = base;
      if (t % 2 == 0 || patterns.empty()) {
        for (const auto& cell : cells) s.mult[cell] = 1 + static_cast<int>(rng() % 2);
      } else {
        const CrossCutSpec& src = patterns[rng() % patterns.size()];
        const Symmetry& sym = syms[rng() % syms.size()];
        for (const auto& cell : cells) s.mult[apply_symmetry(sym, cell)] = src.multiplicity(cell);
      }
      patterns.push_back(s);
    }
    std::vector<FinStructure> built, quotients;
    for (const auto& p : patterns) {
      built.push_back(build_cross_cut(p));
      quotients.push_back(quotient_coloring(built.back()));
    }
    for (size_t i = 0; i < patterns.size(); ++i)
      for (size_t j = i; j < patterns.size(); ++j) {
        ++comparisons;
        bool sym = related_by_symmetry(patterns[i], patterns[j], syms);
        bool m_iso = built[i].size == built[j].size && find_isomorphism(built[i], built[j]).has_value();
        bool q_iso = quotients[i].vocab == quotients[j].vocab && quotients[i].size == quotients[j].size &&
                     find_isomorphism(quotients[i], quotients[j]).has_value();
        iso += m_iso;
        o.expect(m_iso == sym && q_iso == m_iso, "quotient for h of length " + std::to_string(h.size()));
      }
  }
  note << "14 atomic specs; " << comparisons << " pattern comparisons, " << iso << " isomorphic";
  o.note = note.str();
  return o;
}

// ---- 12
Outcome blowup_and_composition() {
  Outcome o;
  int64_t blowups = 0, compositions = 0;
  const int n_max = 4;
  auto all = instances([](const FinStructure&) { return n_max; });
  for (const auto& inst : all) {
    const FinStructure& m = inst.m;
    const TruncatedSystem& s = inst.s;
    FlatStructure b = flatten(m, s);
    std::string name = inst.name + " " + group_to_string(inst.h);
    for (int a = 0; a < b.size(); ++a) {
      int ar = b.arity(a);
      for (int n = 0; ar + n <= n_max; ++n)
        for (const auto& f : all_maps(n, ar)) {
          ++blowups;
          o.expect(blowup_witnesses(b, a, f).size() == 1, name + " blowup at element " + std::to_string(a));
        }
    }
    // gen_projection([t], f) = [t o f] and projections compose.
    for (int ar = 0; ar <= n_max; ++ar)
      for (int64_t code = 0; code < tuple_count(m.size, ar); ++code) {
        Tuple t = decode_tuple(code, ar, m.size);
        int a = element_of(s, t);
        for (int n = 0; ar + n <= n_max; ++n)
          for (const auto& f : all_maps(n, ar)) {
            Tuple tf;
            for (int v : f) tf.push_back(t[v]);
            int pa = gen_projection(b, a, f);
            o.expect(pa == element_of(s, tf), name + " projection value");
            for (int k = 0; n + k <= n_max && ar + k <= n_max; ++k)
              for (const auto& g : all_maps(k, n)) {
                std::vector<int> fg;
                for (int v : g) fg.push_back(f[v]);
                ++compositions;
                o.expect(gen_projection(b, pa, g) == gen_projection(b, a, fg), name + " composition");
              }
          }
      }
  }
  o.note = std::to_string(all.size()) + " flattenings at n_max 4, " + std::to_string(blowups) + " blowups, " + std::to_string(compositions) + " compositions";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    Outcome (*run)();
    double limit_seconds;
  };
  const Criterion criteria[] = {
      {1, "largest system equals orbit partition", oracle_equivalence, 60},
      {2, "flattenings satisfy the flat axioms", flattening_soundness, 0},
      {3, "formula translation preserves truth", transfer, 0},
      {4, "reconstruction round trips", round_trips, 0},
      {5, "Hausdorff exactly for the largest system", hausdorff_characterization, 0},
      {6, "code round trips and sharpness", codes, 120},
      {7, "fix group equals group of code; pairs extend", fix_and_extension, 0},
      {8, "sharp isomorphism matches conjugacy", bireduction, 0},
      {9, "induced action is onto the flat automorphisms", induced_action, 0},
      {10, "graph isomorphism matches code conjugacy", fs_pipeline, 0},
      {11, "cross-cut exponent bound and quotient coloring", cross_cut, 0},
      {12, "blowup uniqueness and projection composition", blowup_and_composition, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds)
      o.expect(false, "took longer than " + std::to_string(static_cast<int>(c.limit_seconds)) + " s");
    bool pass = o.failures == 0 && o.checks > 0;
    failed += !pass;
    std::printf("%s criterion %d: %s [%s; %lld checks; %.1f s]\n", pass ? "PASS" : "FAIL", c.id, c.title,
                o.note.c_str(), static_cast<long long>(o.checks), secs);
    if (!pass) std::printf("  %d failures, first: %s\n", o.failures, o.first.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
