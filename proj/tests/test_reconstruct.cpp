#include <gtest/gtest.h>

#include <numeric>

#include "scottflat/corpus.hpp"
#include "scottflat/groups.hpp"
#include "scottflat/reconstruct.hpp"

using namespace scottflat;

namespace {

const char* kPath = "size 3; rel E/2 {(0,1),(1,0),(1,2),(2,1)};";

FinStructure two() { return parse_structure("size 2;"); }
FinStructure three() { return parse_structure("size 3;"); }
TruncatedSystem cyclic(int n_max) { return orbit_system(3, n_max, {{1, 2, 0}}); }

int element_of(const TruncatedSystem& s, const Tuple& t) {
  return flat_element_id(s, static_cast<int>(t.size()), s.class_of(t));
}

bool injective(const std::vector<int>& v) {
  std::set<int> seen(v.begin(), v.end());
  return seen.size() == v.size();
}

}  // namespace

TEST(Chain, TwoPointsClosesAtTwo) {
  TruncatedSystem s = compute_F_infinity(two(), 3);
  CoveringChain ch = build_covering_chain(flatten(two(), s));
  EXPECT_TRUE(ch.closed);
  ASSERT_EQ(ch.chain.size(), 3u);
  EXPECT_EQ(ch.top(), element_of(s, {0, 1}));
}

TEST(Chain, OnePointClosesAtOne) {
  FinStructure one = parse_structure("size 1;");
  CoveringChain ch = build_covering_chain(flatten(one, compute_F_infinity(one, 2)));
  EXPECT_TRUE(ch.closed);
  EXPECT_EQ(ch.chain.size(), 2u);
}

TEST(Chain, TruncationTooSmall) {
  EXPECT_THROW(build_covering_chain(flatten(two(), compute_F_infinity(two(), 1))), TruncationTooSmall);
}

TEST(Reconstruct, TwoPoints) {
  TruncatedSystem s = compute_F_infinity(two(), 3);
  Reconstruction r = reconstruct(flatten(two(), s));
  EXPECT_EQ(r.m.size, 2);
  EXPECT_TRUE(same_partitions(r.s, s));
}

TEST(Reconstruct, CyclicClosure) {
  Reconstruction r = reconstruct(flatten(three(), cyclic(4)));
  EXPECT_EQ(r.m.size, 3);
  EXPECT_EQ(r.s.num_classes(2), 3);
}

TEST(Reconstruct, PathNeedsArityFour) {
  FinStructure p3 = parse_structure(kPath);
  Reconstruction r = reconstruct(flatten(p3, compute_F_infinity(p3, 4)));
  EXPECT_TRUE(find_isomorphism(r.m, p3).has_value());
  EXPECT_THROW(reconstruct(flatten(p3, compute_F_infinity(p3, 3))), TruncationTooSmall);
}

TEST(Roundtrip, Examples) {
  FinStructure p3 = parse_structure(kPath);
  for (const auto& [m, s] : std::vector<std::pair<FinStructure, TruncatedSystem>>{
           {two(), compute_F_infinity(two(), 3)}, {three(), cyclic(4)}, {p3, compute_F_infinity(p3, 4)}}) {
    FlatStructure b = flatten(m, s);
    EXPECT_TRUE(roundtrip_check(b).ok) << roundtrip_check(b).detail;
    EXPECT_TRUE(roundtrip_check(b, ChainOrder::Greatest).ok);
    EXPECT_TRUE(roundtrip_sharp(m, s).ok) << roundtrip_sharp(m, s).detail;
  }
}

TEST(Roundtrip, BrokenProjectionIsRejected) {
  TruncatedSystem s = compute_F_infinity(two(), 3);
  FlatStructure b = flatten(two(), s);
  // Point the pair class at the wrong coordinate projection.
  int pair = element_of(s, {0, 1});
  b.elements[pair].proj[projection_slot(2, {1})] = element_of(s, {0, 0});
  bool failed = false;
  try {
    failed = !roundtrip_check(b).ok;
  } catch (const std::exception&) {
    failed = true;
  }
  EXPECT_TRUE(failed);
}

TEST(Roundtrip, ChainOrdersAgreeUpToIsomorphism) {
  FinStructure p3 = parse_structure(kPath);
  FlatStructure b = flatten(p3, compute_F_infinity(p3, 4));
  Reconstruction lo = reconstruct(b, ChainOrder::Least), hi = reconstruct(b, ChainOrder::Greatest);
  EXPECT_TRUE(find_sharp_isomorphism(lo.m, lo.s, hi.m, hi.s).has_value());
}

TEST(Stepup, EveryElementAboveACoverIsCovered) {
  for (const auto& c : generate_corpus().structures) {
    if (c.m.size > 3 || !c.m.vocab.relational()) continue;
    FlatStructure b = flatten(c.m, compute_F_infinity(c.m, c.m.size + 1));
    Reconstruction r = reconstruct(b);
    FlatIndex idx(b);
    for (int n = 0; n < b.n_max; ++n)
      for (int64_t code = 0; code < tuple_count(r.m.size, n); ++code) {
        Tuple t = decode_tuple(code, n, r.m.size);
        int cover = r.cover(t);
        for (int m = n; m <= b.n_max; ++m)
          for (int above : idx.above(cover, m)) {
            bool found = false;
            for (int64_t ext = 0; ext < tuple_count(r.m.size, m - n) && !found; ++ext) {
              Tuple u = t, e = decode_tuple(ext, m - n, r.m.size);
              u.insert(u.end(), e.begin(), e.end());
              found = r.cover(u) == above;
            }
            EXPECT_TRUE(found) << c.name << " element " << above;
          }
      }
  }
}

TEST(Canonical, RelabelingInvariant) {
  FlatStructure b = flatten(two(), compute_F_infinity(two(), 3));
  std::vector<int> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  auto u2 = b.universes()[2];
  std::swap(perm[u2[0]], perm[u2[1]]);
  EXPECT_EQ(canonical_form(relabel_flat(b, perm)), canonical_form(b));
}

TEST(Canonical, ForgetsTheCyclicRefinement) {
  FlatStructure cyc = flatten(three(), cyclic(4)), full = flatten(three(), compute_F_infinity(three(), 4));
  EXPECT_EQ(canonical_form(cyc), canonical_form(full));
  EXPECT_EQ(canonical_form(canonical_form(cyc)), canonical_form(cyc));
}

TEST(Cmap, CyclicClosureMergesOffDiagonalPairs) {
  TruncatedSystem s = cyclic(4);
  FlatStructure b = flatten(three(), s);
  std::vector<int> h = cmap(b);
  EXPECT_TRUE(is_flat_homomorphism(b, canonical_form(b), h));
  EXPECT_EQ(h[element_of(s, {0, 1})], h[element_of(s, {0, 2})]);
  EXPECT_FALSE(injective(h));
}

TEST(Cmap, InjectiveExactlyOnHausdorff) {
  for (const auto& c : generate_corpus().structures) {
    if (c.m.size > 3 || !c.m.vocab.relational()) continue;
    for (const auto& g : all_subgroups(automorphism_group(c.m))) {
      FlatStructure b = flatten(c.m, orbit_system(c.m.size, c.m.size + 1, g.gens));
      std::vector<int> h = cmap(b);
      bool haus = hausdorff_check(b).hausdorff;
      EXPECT_EQ(injective(h), haus) << c.name;
      EXPECT_EQ(is_flat_isomorphism(b, canonical_form(b), h), haus) << c.name;
    }
  }
}

TEST(Canonical, EqualExactlyForIsomorphicHausdorffFlats) {
  std::vector<std::pair<std::string, FlatStructure>> flats;
  for (const auto& c : generate_corpus().structures)
    if (c.m.size <= 3 && c.m.vocab.relational())
      flats.push_back({c.name, flatten(c.m, compute_F_infinity(c.m, c.m.size + 1))});
  for (const auto& [na, a] : flats)
    for (const auto& [nb, b] : flats) {
      if (a.n_max != b.n_max || a.vocab != b.vocab) continue;
      bool iso = find_flat_isomorphism(a, b).has_value();
      EXPECT_EQ(canonical_form(a) == canonical_form(b), iso) << na << " " << nb;
      if (iso && a.size() <= 8) {
        int count = 0;
        for_each_flat_isomorphism(a, b, [&](const std::vector<int>&) { return ++count < 3; });
        EXPECT_EQ(count, 1) << na << " " << nb;
      }
    }
}

TEST(Canonical, StructuresIsomorphicIffFlatteningsAre) {
  auto corpus = generate_corpus().structures;
  for (const auto& x : corpus)
    for (const auto& y : corpus) {
      if (x.m.size > 3 || y.m.size > 3 || x.m.vocab != y.m.vocab || !x.m.vocab.relational()) continue;
      int n = std::max(x.m.size, y.m.size) + 1;
      bool iso = x.m.size == y.m.size && find_isomorphism(x.m, y.m).has_value();
      bool flat_iso =
          find_flat_isomorphism(flatten(x.m, compute_F_infinity(x.m, n)), flatten(y.m, compute_F_infinity(y.m, n)))
              .has_value();
      EXPECT_EQ(iso, flat_iso) << x.name << " " << y.name;
    }
}
