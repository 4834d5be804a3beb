#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scottflat/reductions.hpp"
#include "scottflat/structures.hpp"

namespace scottflat {

struct CorpusStructure {
  std::string name;
  FinStructure m;
};

struct CorpusGraphPair {
  std::string name;
  Graph g, h;
};

struct Corpus {
  uint64_t seed = 0;
  std::vector<CorpusStructure> structures;
  std::vector<CorpusGraphPair> graph_pairs;  // sampled pairs on 4 vertices
};

// Deterministic for a given seed: fixed named structures first, then seeded random ones.
Corpus generate_corpus(uint64_t seed = 0, int max_size = 4, int random_structures = 40, int graph_pairs = 20);

uint64_t fnv1a64(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(uint64_t v);

struct CorpusFile {
  std::string path;  // relative to the corpus directory
  std::string contents;
};

// Files of the corpus plus manifest.json, whose "hash" covers every other file in order.
std::vector<CorpusFile> corpus_files(const Corpus& c);
uint64_t corpus_hash(const Corpus& c);

}  // namespace scottflat
