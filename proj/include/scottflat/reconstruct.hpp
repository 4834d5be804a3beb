#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scottflat/backforth.hpp"
#include "scottflat/flat.hpp"
#include "scottflat/structures.hpp"

namespace scottflat {

// Tie-breaking for chain construction: process requirements and pick witnesses from the low or
// the high end of the id order.
enum class ChainOrder { Least, Greatest };

struct CoveringChain {
  std::vector<int> chain;  // chain[i] has arity i and lies below chain[i+1]
  bool closed = false;
  int top() const { return chain.back(); }
};

CoveringChain build_covering_chain(const FlatStructure& b, ChainOrder order = ChainOrder::Least);

struct Reconstruction {
  FinStructure m;
  TruncatedSystem s;
  std::vector<std::vector<int>> cov;  // cov[n][rank of an n-tuple] = element of arity n
  CoveringChain chain;

  int cover(const Tuple& t) const;
};

Reconstruction reconstruct(const FlatStructure& b, ChainOrder order = ChainOrder::Least);

struct RoundtripResult {
  bool ok = true;
  std::string detail;
};

// flatten(reconstruct(b)) against b.
RoundtripResult roundtrip_check(const FlatStructure& b, ChainOrder order = ChainOrder::Least);
// reconstruct(flatten(m, s)) against (m, s).
RoundtripResult roundtrip_sharp(const FinStructure& m, const TruncatedSystem& s);

// A bijection preserving the relations, constants and every E_k in both directions.
bool is_sharp_isomorphism(const FinStructure& m1, const TruncatedSystem& s1, const FinStructure& m2,
                          const TruncatedSystem& s2, const std::vector<int>& perm);
std::optional<std::vector<int>> find_sharp_isomorphism(const FinStructure& m1, const TruncatedSystem& s1,
                                                       const FinStructure& m2, const TruncatedSystem& s2);

// Relabeling perm minimizing the relabeled structure; isomorphic inputs get identical images.
std::vector<int> canonical_labeling(const FinStructure& m, int guard_size = 8);
FinStructure canonical_structure(const FinStructure& m, int guard_size = 8);

// flatten(canonical M, F-infinity) for the M reconstructed from b.
FlatStructure canonical_form(const FlatStructure& b);
// The surjective homomorphism b -> canonical_form(b).
std::vector<int> cmap(const FlatStructure& b);

std::string serialize_cov_json(const Reconstruction& r);

}  // namespace scottflat
