#include "scottflat/corpus.hpp"

#include <cstdio>
#include <random>

#include "json.hpp"

namespace scottflat {

namespace {

// Raw engine output keeps the corpus identical across standard libraries.
class Draw {
 public:
  explicit Draw(uint64_t seed) : eng_(static_cast<std::mt19937::result_type>(seed)) {}
  int below(int n) { return static_cast<int>(eng_() % static_cast<uint32_t>(n)); }
  bool coin(int num, int den) { return below(den) < num; }

 private:
  std::mt19937 eng_;
};

FinStructure named(const char* text) { return parse_structure(text); }

FinStructure random_structure(Draw& d, int max_size) {
  int size = 1 + d.below(max_size);
  int kind = d.below(6);
  FinStructure m;
  m.size = size;
  auto add_rel = [&](const std::string& name, int arity) {
    m.vocab.relations.push_back({name, arity});
    m.relations.emplace_back();
    return static_cast<int>(m.relations.size()) - 1;
  };
  auto symmetric_graph = [&](int r) {
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j)
        if (d.coin(1, 2)) {
          m.relations[r].insert({i, j});
          m.relations[r].insert({j, i});
        }
  };
  switch (kind) {
    case 0:
      break;
    case 1:
      symmetric_graph(add_rel("E", 2));
      break;
    case 2: {
      int r = add_rel("R", 2);
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
          if (d.coin(1, 3)) m.relations[r].insert({i, j});
      break;
    }
    case 3: {
      int p = add_rel("P", 1);
      for (int i = 0; i < size; ++i)
        if (d.coin(1, 2)) m.relations[p].insert({i});
      symmetric_graph(add_rel("E", 2));
      break;
    }
    case 4:
      symmetric_graph(add_rel("E", 2));
      m.vocab.constants.push_back("c");
      m.constants.push_back(d.below(size));
      break;
    default: {
      m.size = size = std::min(size, 3);
      int r = add_rel("T", 3);
      int64_t total = tuple_count(size, 3);
      for (int64_t code = 0; code < total; ++code)
        if (d.coin(1, 6)) m.relations[r].insert(decode_tuple(code, 3, size));
      break;
    }
  }
  m.validate();
  return m;
}

Graph random_graph(Draw& d, int k) {
  Graph g;
  g.k = k;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (d.coin(1, 2)) g.edges.insert({i, j});
  return g;
}

std::string pad(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", i);
  return buf;
}

}  // namespace

Corpus generate_corpus(uint64_t seed, int max_size, int random_structures, int graph_pairs) {
  if (max_size < 1 || max_size > 6) throw InputError("corpus sizes must lie in 1..6");
  Corpus c;
  c.seed = seed;
  c.structures = {
      {"empty1", named("size 1;")},
      {"empty2", named("size 2;")},
      {"empty3", named("size 3;")},
      {"empty4", named("size 4;")},
      {"p3", named("size 3; rel E/2 {(0,1),(1,0),(1,2),(2,1)};")},
      {"k3", named("size 3; rel E/2 {(0,1),(1,0),(0,2),(2,0),(1,2),(2,1)};")},
      {"dicycle3", named("size 3; rel R/2 {(0,1),(1,2),(2,0)};")},
      {"order3", named("size 3; rel L/2 {(0,1),(0,2),(1,2)};")},
      {"c4", named("size 4; rel E/2 {(0,1),(1,0),(1,2),(2,1),(2,3),(3,2),(3,0),(0,3)};")},
  };
  Draw d(seed);
  for (int i = 0; i < random_structures; ++i)
    c.structures.push_back({"random" + pad(i), random_structure(d, max_size)});
  for (int i = 0; i < graph_pairs; ++i) {
    Graph g = random_graph(d, 4);
    // Every other pair is a relabeled copy so both verdicts occur.
    Graph h = random_graph(d, 4);
    if (i % 2 == 0) {
      Perm perm = identity_perm(4);
      for (int s = 3; s > 0; --s) std::swap(perm[s], perm[d.below(s + 1)]);
      h = relabel_graph(g, perm);
    }
    c.graph_pairs.push_back({"pair" + pad(i), g, h});
  }
  return c;
}

uint64_t fnv1a64(std::string_view bytes, uint64_t h) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<CorpusFile> corpus_files(const Corpus& c) {
  std::vector<CorpusFile> files;
  for (const auto& s : c.structures) files.push_back({"structures/" + s.name + ".struct", serialize_structure(s.m)});
  for (const auto& p : c.graph_pairs) {
    files.push_back({"graphs/" + p.name + "_g.graph", serialize_graph(p.g)});
    files.push_back({"graphs/" + p.name + "_h.graph", serialize_graph(p.h)});
  }
  uint64_t h = 0xcbf29ce484222325ULL;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& f : files) {
    h = fnv1a64(f.path, h);
    h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(f.contents, h);
    list.push_back({{"path", f.path}, {"fnv1a64", hex64(fnv1a64(f.contents))}});
  }
  nlohmann::json manifest = {{"seed", c.seed}, {"count", files.size()}, {"hash", hex64(h)}, {"files", list}};
  files.push_back({"manifest.json", manifest.dump(2) + "\n"});
  return files;
}

uint64_t corpus_hash(const Corpus& c) {
  auto files = corpus_files(c);
  return std::stoull(nlohmann::json::parse(files.back().contents).at("hash").get<std::string>(), nullptr, 16);
}

}  // namespace scottflat
