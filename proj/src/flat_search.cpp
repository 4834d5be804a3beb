#include <algorithm>
#include <map>
#include <numeric>

#include "scottflat/flat.hpp"

namespace scottflat {

namespace {

// Stable coloring of several structures in one color space. Features: arity and diagram, then the
// colors of all projections, then the set of colors in the fiber above.
std::vector<std::vector<int>> refine(const std::vector<const FlatStructure*>& bs, int* rounds) {
  std::vector<std::vector<int>> colors(bs.size());
  std::vector<FlatIndex> idx;
  for (const auto* b : bs) idx.emplace_back(*b);
  int count = 0;
  {
    std::map<std::pair<int, QfDiagram>, int> ids;
    for (size_t s = 0; s < bs.size(); ++s)
      for (int a = 0; a < bs[s]->size(); ++a) {
        auto key = std::make_pair(bs[s]->arity(a), bs[s]->diagram(a));
        colors[s].push_back(ids.emplace(key, static_cast<int>(ids.size())).first->second);
      }
    count = static_cast<int>(ids.size());
  }
  int r = 0;
  while (true) {
    ++r;
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> next(bs.size());
    std::vector<int> sig, fib;
    for (size_t s = 0; s < bs.size(); ++s)
      for (int a = 0; a < bs[s]->size(); ++a) {
        sig.clear();
        sig.push_back(colors[s][a]);
        for (int p : bs[s]->elements[a].proj) sig.push_back(p >= 0 ? colors[s][p] : -2);
        sig.push_back(-1);
        fib.clear();
        for (int w : idx[s].fiber(a)) fib.push_back(colors[s][w]);
        std::sort(fib.begin(), fib.end());
        fib.erase(std::unique(fib.begin(), fib.end()), fib.end());
        sig.insert(sig.end(), fib.begin(), fib.end());
        next[s].push_back(ids.emplace(sig, static_cast<int>(ids.size())).first->second);
      }
    colors = std::move(next);
    int now = static_cast<int>(ids.size());
    if (now == count) break;
    count = now;
  }
  if (rounds) *rounds = r;
  return colors;
}

}  // namespace

HausdorffResult hausdorff_check(const FlatStructure& b) {
  HausdorffResult res;
  res.colors = refine({&b}, &res.rounds)[0];
  std::map<int, int> first;
  for (int a = 0; a < b.size(); ++a) {
    auto [it, fresh] = first.emplace(res.colors[a], a);
    if (!fresh) {
      res.hausdorff = false;
      res.left = it->second;
      res.right = a;
      break;
    }
  }
  return res;
}

std::pair<std::vector<int>, std::vector<int>> joint_colors(const FlatStructure& x, const FlatStructure& y) {
  auto c = refine({&x, &y}, nullptr);
  return {std::move(c[0]), std::move(c[1])};
}

bool is_flat_homomorphism(const FlatStructure& x, const FlatStructure& y, const std::vector<int>& map) {
  if (static_cast<int>(map.size()) != x.size()) return false;
  for (int a = 0; a < x.size(); ++a) {
    int b = map[a];
    if (b < 0 || b >= y.size()) return false;
    if (x.arity(a) != y.arity(b) || x.diagram(a) != y.diagram(b)) return false;
    const auto& px = x.elements[a].proj;
    const auto& py = y.elements[b].proj;
    if (px.size() != py.size()) return false;
    for (size_t s = 0; s < px.size(); ++s)
      if (px[s] < 0 || map[px[s]] != py[s]) return false;
  }
  return true;
}

bool is_flat_isomorphism(const FlatStructure& x, const FlatStructure& y, const std::vector<int>& map) {
  if (x.size() != y.size() || x.n_max != y.n_max || x.vocab != y.vocab) return false;
  std::vector<bool> hit(y.size(), false);
  for (int b : map) {
    if (b < 0 || b >= y.size() || hit[b]) return false;
    hit[b] = true;
  }
  return is_flat_homomorphism(x, y, map);
}

void for_each_flat_isomorphism(const FlatStructure& x, const FlatStructure& y,
                               const std::function<bool(const std::vector<int>&)>& visit) {
  if (x.size() != y.size() || x.n_max != y.n_max || x.vocab != y.vocab) return;
  auto [cx, cy] = joint_colors(x, y);
  std::map<int, std::vector<int>> bucket_x, bucket_y;
  for (int a = 0; a < x.size(); ++a) bucket_x[cx[a]].push_back(a);
  for (int b = 0; b < y.size(); ++b) bucket_y[cy[b]].push_back(b);
  for (const auto& [c, as] : bucket_x) {
    auto it = bucket_y.find(c);
    if (it == bucket_y.end() || it->second.size() != as.size()) return;
  }
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (x.arity(a) != x.arity(b)) return x.arity(a) > x.arity(b);
    return bucket_x[cx[a]].size() < bucket_x[cx[b]].size();
  });

  std::vector<int> map(x.size(), -1), inv(y.size(), -1), trail;
  auto undo = [&](size_t mark) {
    while (trail.size() > mark) {
      int a = trail.back();
      trail.pop_back();
      inv[map[a]] = -1;
      map[a] = -1;
    }
  };
  // Assigning a point forces the images of all its projections.
  auto assign = [&](int a0, int b0) {
    std::vector<std::pair<int, int>> stack{{a0, b0}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      if (a < 0 || b < 0) return false;
      if (map[a] == b) continue;
      if (map[a] != -1 || inv[b] != -1 || cx[a] != cy[b]) return false;
      map[a] = b;
      inv[b] = a;
      trail.push_back(a);
      const auto& px = x.elements[a].proj;
      const auto& py = y.elements[b].proj;
      if (px.size() != py.size()) return false;
      for (size_t s = 0; s < px.size(); ++s) stack.emplace_back(px[s], py[s]);
    }
    return true;
  };
  bool stop = false;
  std::function<void(size_t)> rec = [&](size_t i) {
    while (i < order.size() && map[order[i]] != -1) ++i;
    if (i == order.size()) {
      if (is_flat_isomorphism(x, y, map) && !visit(map)) stop = true;
      return;
    }
    int a = order[i];
    for (int b : bucket_y[cx[a]]) {
      if (inv[b] != -1) continue;
      size_t mark = trail.size();
      if (assign(a, b)) rec(i + 1);
      undo(mark);
      if (stop) return;
    }
  };
  rec(0);
}

std::optional<std::vector<int>> find_flat_isomorphism(const FlatStructure& x, const FlatStructure& y) {
  std::optional<std::vector<int>> out;
  for_each_flat_isomorphism(x, y, [&](const std::vector<int>& m) {
    out = m;
    return false;
  });
  return out;
}

std::vector<std::vector<int>> flat_automorphisms(const FlatStructure& b) {
  std::vector<std::vector<int>> out;
  for_each_flat_isomorphism(b, b, [&](const std::vector<int>& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

}  // namespace scottflat
