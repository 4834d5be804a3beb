#include <gtest/gtest.h>

#include <random>

#include "scottflat/corpus.hpp"
#include "scottflat/structures.hpp"

using namespace scottflat;

namespace {

const char* kPath = "size 3; rel E/2 {(0,1),(1,0),(1,2),(2,1)};";

// Quantifier expansion written directly against the relation sets.
bool naive_eval(const FinStructure& m, const Formula& f, std::vector<int>& env) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Rel: {
      Tuple t;
      for (int v : f.vars) t.push_back(env[v]);
      return m.relations[f.symbol].count(t) > 0;
    }
    case K::Eq:
      return env[f.vars[0]] == env[f.vars[1]];
    case K::EqConst:
      return env[f.vars[0]] == m.constants[f.symbol];
    case K::And:
      for (const auto& k : f.kids)
        if (!naive_eval(m, k, env)) return false;
      return true;
    case K::Or:
      for (const auto& k : f.kids)
        if (naive_eval(m, k, env)) return true;
      return false;
    case K::Not:
      return !naive_eval(m, f.kids[0], env);
    case K::Exists:
    case K::Forall: {
      int v = f.vars[0];
      if (static_cast<int>(env.size()) <= v) env.resize(v + 1, 0);
      int saved = env[v];
      bool exists = f.kind == K::Exists;
      bool result = !exists;
      for (int x = 0; x < m.size; ++x) {
        env[v] = x;
        bool b = naive_eval(m, f.kids[0], env);
        if (exists && b) result = true;
        if (!exists && !b) result = false;
      }
      env[v] = saved;
      return result;
    }
  }
  return false;
}

Formula random_formula(std::mt19937& rng, const Vocabulary& v, int vars, int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<uint32_t>(n)); };
  if (depth == 0 || pick(3) == 0) {
    int choice = pick(v.relations.empty() ? 1 : 2);
    if (choice == 0 || v.relations.empty()) return Formula::eq(pick(vars), pick(vars));
    int r = pick(static_cast<int>(v.relations.size()));
    std::vector<int> args;
    for (int i = 0; i < v.relations[r].arity; ++i) args.push_back(pick(vars));
    return Formula::rel(r, args);
  }
  switch (pick(4)) {
    case 0:
      return Formula::neg(random_formula(rng, v, vars, depth - 1));
    case 1:
      return Formula::conj({random_formula(rng, v, vars, depth - 1), random_formula(rng, v, vars, depth - 1)});
    case 2:
      return Formula::exists(vars, random_formula(rng, v, vars + 1, depth - 1));
    default:
      return Formula::forall(vars, random_formula(rng, v, vars + 1, depth - 1));
  }
}

}  // namespace

TEST(Parse, EmptyRelation) {
  FinStructure m = parse_structure("size 2; rel E/2 {};");
  EXPECT_EQ(m.size, 2);
  ASSERT_EQ(m.relations.size(), 1u);
  EXPECT_TRUE(m.relations[0].empty());
}

TEST(Parse, PathGraph) {
  FinStructure m = parse_structure(kPath);
  EXPECT_EQ(m.size, 3);
  EXPECT_EQ(m.relations[0], (std::set<Tuple>{{0, 1}, {1, 0}, {1, 2}, {2, 1}}));
}

TEST(Parse, IndexOutOfRange) { EXPECT_THROW(parse_structure("size 2; rel E/2 {(0,5)};"), InputError); }

TEST(Parse, MalformedText) { EXPECT_THROW(parse_structure("size 2; rel E/2 {(0,1};"), ParseError); }

TEST(Parse, RoundTripsOnCorpus) {
  for (const auto& s : generate_corpus().structures) {
    std::string text = serialize_structure(s.m);
    EXPECT_EQ(parse_structure(text), s.m) << s.name;
    EXPECT_EQ(serialize_structure(parse_structure(text)), text) << s.name;
    EXPECT_EQ(parse_structure_json(serialize_structure_json(s.m)), s.m) << s.name;
  }
}

TEST(QfType, DiscretePair) {
  QfDiagram d = qf_type(parse_structure("size 2;"), {0, 1});
  EXPECT_EQ(d.arity, 2);
  EXPECT_FALSE(d.equal(0, 1));
}

TEST(QfType, PathEndpoints) {
  QfDiagram d = qf_type(parse_structure(kPath), {0, 2});
  EXPECT_FALSE(d.equal(0, 1));
  EXPECT_FALSE(d.atom(0, {0, 1}));
  EXPECT_FALSE(d.atom(0, {1, 0}));
}

TEST(QfType, EmptyTuple) {
  QfDiagram d = qf_type(parse_structure(kPath), {});
  EXPECT_EQ(d.arity, 0);
}

TEST(QfType, InvariantUnderAutomorphisms) {
  for (const auto& s : generate_corpus().structures) {
    if (!s.m.vocab.relational()) continue;
    auto autos = enumerate_automorphisms(s.m);
    for (int k = 0; k <= 3; ++k)
      for (int64_t code = 0; code < tuple_count(s.m.size, k); ++code) {
        Tuple t = decode_tuple(code, k, s.m.size);
        for (const auto& sigma : autos) {
          Tuple u = t;
          for (int& x : u) x = sigma[x];
          EXPECT_EQ(qf_type(s.m, u), qf_type(s.m, t)) << s.name;
        }
      }
  }
}

TEST(Subsequence, PicksPositions) {
  EXPECT_EQ(subsequence({5, 7, 9}, SubseqMap{2, 3, {2, 0}}), (Tuple{9, 5}));
  EXPECT_EQ(subsequence({5, 7}, SubseqMap::identity(2)), (Tuple{5, 7}));
  EXPECT_THROW(subsequence({5}, SubseqMap{2, 3, {2, 0}}), InputError);
}

TEST(Subsequence, Composes) {
  Tuple t{4, 8, 15, 16};
  for (int k = 0; k <= 4; ++k)
    for (int n = k; n <= 4; ++n)
      for (const auto& f : injections(k, n))
        for (const auto& g : injections(n, 4))
          EXPECT_EQ(subsequence(subsequence(t, g), f), subsequence(t, compose(g, f)));
}

TEST(Eval, Examples) {
  FinStructure two = parse_structure("size 2;");
  EXPECT_TRUE(eval_formula(two, Formula::exists(1, Formula::eq(0, 1)), {0}));
  FinStructure p3 = parse_structure(kPath);
  EXPECT_TRUE(eval_formula(p3, Formula::exists(1, Formula::rel(0, {0, 1})), {2}));
  EXPECT_FALSE(eval_formula(p3, Formula::forall(1, Formula::rel(0, {0, 1})), {0}));
}

TEST(Eval, AgreesWithNaiveExpansion) {
  std::mt19937 rng(7);
  for (const auto& s : generate_corpus().structures) {
    if (!s.m.vocab.constants.empty()) continue;
    for (int trial = 0; trial < 20; ++trial) {
      int arity = 1 + static_cast<int>(rng() % 2);
      Formula f = random_formula(rng, s.m.vocab, arity, 3);
      for (int64_t code = 0; code < tuple_count(s.m.size, arity); ++code) {
        Tuple t = decode_tuple(code, arity, s.m.size);
        std::vector<int> env = t;
        EXPECT_EQ(eval_formula(s.m, f, t), naive_eval(s.m, f, env)) << s.name << " " << formula_to_string(f, s.m.vocab);
      }
    }
  }
}

TEST(Relationalize, SuccessorModTwo) {
  FinStructure r = relationalize(parse_structure("size 2; fun s/1 {(0)->1,(1)->0};"));
  ASSERT_EQ(r.relations.size(), 1u);
  EXPECT_EQ(r.relations[0], (std::set<Tuple>{{0, 1}, {1, 0}}));
}

TEST(Relationalize, ConstantsOnlyUnchanged) {
  FinStructure m = parse_structure("size 2; const c = 1;");
  EXPECT_EQ(relationalize(m), m);
}

TEST(Relationalize, BinaryMax) {
  FinStructure r =
      relationalize(parse_structure("size 2; fun max/2 {(0,0)->0,(0,1)->1,(1,0)->1,(1,1)->1};"));
  EXPECT_EQ(r.vocab.relations[0].arity, 3);
  EXPECT_EQ(r.relations[0].size(), 4u);
}
