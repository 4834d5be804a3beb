// scottflat: command-line front end for the library.
// Exit codes: 0 success, 1 semantic failure, 2 input error, 3 guard exceeded.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "scottflat/backforth.hpp"
#include "scottflat/corpus.hpp"
#include "scottflat/errors.hpp"
#include "scottflat/flat.hpp"
#include "scottflat/groups.hpp"
#include "scottflat/reconstruct.hpp"
#include "scottflat/reductions.hpp"
#include "scottflat/structures.hpp"

using namespace scottflat;
using nlohmann::json;

namespace {

struct Config {
  int n_max = 2;
  int p = 3;
  int guard_size = 0;  // 0 keeps the default
  std::string format = "text";
  uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::string output;
  std::string order = "least";
  int degree = 0;
  std::string h_list;
  std::vector<std::string> mult;
  int max_size = 4;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_json(const std::string& text) {
  size_t i = text.find_first_not_of(" \t\r\n");
  return i != std::string::npos && text[i] == '{';
}

FinStructure load_structure(const std::string& path) {
  std::string text = read_file(path);
  return looks_like_json(text) ? parse_structure_json(text) : parse_structure(text);
}

int guard_or(const Config& c, int fallback) { return c.guard_size > 0 ? c.guard_size : fallback; }

void emit(const Config& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw InputError("cannot write " + c.output);
  out << text;
}

std::string tuple_text(const Tuple& t) {
  if (t.size() == 1) return std::to_string(t[0]);
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

std::string system_text(const TruncatedSystem& s) {
  std::string out;
  for (int k = 0; k <= s.n_max; ++k) {
    std::vector<std::vector<Tuple>> classes(s.num_classes(k));
    int64_t total = tuple_count(s.size, k);
    for (int64_t code = 0; code < total; ++code)
      classes[s.cls[k][static_cast<size_t>(code)]].push_back(decode_tuple(code, k, s.size));
    out += "E_" + std::to_string(k) + " = {";
    for (size_t c = 0; c < classes.size(); ++c) {
      out += c ? ",{" : "{";
      for (size_t i = 0; i < classes[c].size(); ++i) out += (i ? "," : "") + tuple_text(classes[c][i]);
      out += "}";
    }
    out += "}\n";
  }
  return out;
}

int cmd_scott(const Config& c) {
  FinStructure m = load_structure(c.inputs.at(0));
  if (!m.vocab.relational()) m = relationalize(m);
  TruncatedSystem s = compute_F_infinity(m, c.n_max);
  emit(c, c.format == "json" ? serialize_system_json(s) : system_text(s));
  return 0;
}

int cmd_flatten(const Config& c) {
  FinStructure m = load_structure(c.inputs.at(0));
  if (!m.vocab.relational()) m = relationalize(m);
  TruncatedSystem s =
      c.inputs.size() > 1 ? parse_system_json(read_file(c.inputs[1])) : compute_F_infinity(m, c.n_max);
  emit(c, serialize_flat_json(flatten(m, s)));
  return 0;
}

int cmd_checkflat(const Config& c) {
  FlatStructure b = parse_flat_json(read_file(c.inputs.at(0)));
  FlatReport r = check_flat_axioms(b);
  if (c.format == "json") {
    json j = {{"ok", r.ok},
              {"axiom", r.axiom},
              {"detail", r.detail},
              {"witness", r.witness},
              {"amalgamation_checked", r.amalgamation_checked},
              {"amalgamation_skipped", r.amalgamation_skipped},
              {"duplication_skipped", r.duplication_skipped},
              {"function_skipped", r.function_skipped}};
    emit(c, j.dump(2) + "\n");
  } else if (r.ok) {
    emit(c, "flat: yes (amalgamation instances checked " + std::to_string(r.amalgamation_checked) + ", skipped " +
                std::to_string(r.amalgamation_skipped) + ")\n");
  } else {
    std::string w;
    for (size_t i = 0; i < r.witness.size(); ++i) w += (i ? " " : "") + std::to_string(r.witness[i]);
    emit(c, "flat: no\naxiom " + r.axiom + ": " + r.detail + "\nwitness elements: " + w + "\n");
  }
  return r.ok ? 0 : 1;
}

int cmd_reconstruct(const Config& c) {
  FlatStructure b = parse_flat_json(read_file(c.inputs.at(0)));
  if (c.order != "least" && c.order != "greatest") throw InputError("--order must be least or greatest");
  Reconstruction r = reconstruct(b, c.order == "least" ? ChainOrder::Least : ChainOrder::Greatest);
  if (c.format == "json") {
    json j = {{"structure", json::parse(serialize_structure_json(r.m))},
              {"system", json::parse(serialize_system_json(r.s))},
              {"chain", r.chain.chain},
              {"closed", r.chain.closed}};
    emit(c, j.dump(2) + "\n");
  } else {
    std::string chain;
    for (size_t i = 0; i < r.chain.chain.size(); ++i) chain += (i ? " " : "") + std::to_string(r.chain.chain[i]);
    emit(c, serialize_structure(r.m) + "chain: " + chain + "\n" + system_text(r.s));
  }
  return 0;
}

int cmd_hausdorff(const Config& c) {
  FlatStructure b = parse_flat_json(read_file(c.inputs.at(0)));
  HausdorffResult h = hausdorff_check(b);
  if (c.format == "json") {
    json j = {{"hausdorff", h.hausdorff}, {"rounds", h.rounds}};
    if (!h.hausdorff) j["pair"] = {h.left, h.right};
    emit(c, j.dump(2) + "\n");
  } else if (h.hausdorff) {
    emit(c, "hausdorff: yes\n");
  } else {
    emit(c, "hausdorff: no; elements " + std::to_string(h.left) + " and " + std::to_string(h.right) +
                " are not separated\n");
  }
  return 0;
}

int inferred_degree(const std::vector<std::string>& texts) {
  int d = 1;
  for (const auto& t : texts) d = std::max(d, parse_group(t, 0).degree);
  return d;
}

int cmd_code(const Config& c) {
  int degree = c.degree > 0 ? c.degree : inferred_degree({c.inputs.at(0)});
  PermGroup g = parse_group(c.inputs[0], degree);
  SubgroupCode f = code_of(g, c.n_max);
  if (c.format == "json") {
    emit(c, serialize_code_json(f));
  } else {
    std::string out = "group " + group_to_string(g) + "\n";
    for (int k = 0; k <= f.n_max; ++k) out += "arity " + std::to_string(k) + ": " + std::to_string(f.count(k)) + " pairs\n";
    out += std::string("sharp: ") + (is_sharp_code(f) ? "yes" : "no") + "\n";
    emit(c, out);
  }
  return 0;
}

int cmd_conj(const Config& c) {
  if (c.inputs.size() != 3) throw InputError("conj needs a group and two subgroups");
  int degree = c.degree > 0 ? c.degree : inferred_degree(c.inputs);
  PermGroup g = parse_group(c.inputs[0], degree);
  PermGroup h1 = parse_group(c.inputs[1], degree), h2 = parse_group(c.inputs[2], degree);
  if (!is_subgroup_of(h1, g) || !is_subgroup_of(h2, g)) throw InputError("subgroups must lie in the ambient group");
  auto delta = conjugacy_test(h1, h2, g);
  if (c.format == "json") {
    json j = {{"conjugate", delta.has_value()}};
    if (delta) j["delta"] = perm_to_cycles(*delta);
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, delta ? "δ=" + perm_to_cycles(*delta) + "\n" : std::string("not conjugate\n"));
  }
  return 0;
}

int cmd_fs(const Config& c) {
  if (c.inputs.size() != 2) throw InputError("fs needs two graph files");
  Graph g = parse_graph(read_file(c.inputs[0])), h = parse_graph(read_file(c.inputs[1]));
  FsReport r = fs_pipeline_check(g, h, c.p);
  if (c.format == "json") {
    json j = {{"graphs_isomorphic", r.graphs_isomorphic},
              {"trees_isomorphic", r.trees_isomorphic},
              {"codes_conjugate", r.codes_conjugate},
              {"nodes", {r.nodes_g, r.nodes_h}},
              {"agreement", r.agree()}};
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, std::string(r.graphs_isomorphic ? "isomorphic" : "not isomorphic") + "; " +
                (r.codes_conjugate ? "codes conjugate" : "codes not conjugate") + "; agreement: " +
                (r.agree() ? "yes" : "no") + "\n");
  }
  return r.agree() ? 0 : 1;
}

CrossCutSpec spec_from(const Config& c) {
  CrossCutSpec spec = parse_cross_cut_spec(c.h_list);
  for (const auto& entry : c.mult) {
    auto eq = entry.find('=');
    if (eq == std::string::npos) throw InputError("--mult entries look like 0,1=2");
    std::vector<int> idx;
    std::stringstream in(entry.substr(0, eq));
    std::string part;
    try {
      while (std::getline(in, part, ',')) idx.push_back(std::stoi(part));
      spec.mult[idx] = std::stoi(entry.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw InputError("bad --mult entry " + entry);
    }
  }
  spec.validate();
  return spec;
}

int cmd_th(const Config& c) {
  CrossCutSpec spec = spec_from(c);
  int guard = guard_or(c, 64);
  if (!spec.atomic()) {
    FinStructure q = quotient_coloring(build_cross_cut(spec, guard));
    emit(c, c.format == "json" ? serialize_structure_json(q) : serialize_structure(q));
    return 0;
  }
  ExponentReport r = exponent_experiment(spec, guard);
  if (c.format == "json") {
    json j = {{"aut_order", r.aut_order}, {"exponent", r.exponent},    {"k", r.k},
              {"k_factorial", r.k_factorial}, {"divides", r.divides}, {"q", r.q},
              {"obstruction", r.obstruction}, {"truncated_relations", spec.h.size()}};
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, "exponent " + std::to_string(r.exponent) + (r.divides ? " divides " : " does not divide ") +
                std::to_string(r.k_factorial) + "\n|Aut| = " + std::to_string(r.aut_order) +
                ", K = " + std::to_string(r.k) + "; C_" + std::to_string(r.q) +
                (r.obstruction ? " is not a quotient of any subgroup" : " divides Aut") +
                "\nE_inf is the intersection of " + std::to_string(spec.h.size()) + " relations\n");
  }
  return r.divides ? 0 : 1;
}

int cmd_corpus(const Config& c) {
  if (c.output.empty()) throw InputError("corpus needs --out DIR");
  Corpus corpus = generate_corpus(c.seed, c.max_size);
  auto files = corpus_files(corpus);
  namespace fs = std::filesystem;
  for (const auto& f : files) {
    fs::path p = fs::path(c.output) / f.path;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError("cannot write " + p.string());
    out << f.contents;
  }
  std::cout << "wrote " << files.size() << " files; hash " << hex64(corpus_hash(corpus)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Back-and-forth systems, flat structures and subgroup codes on finite structures"};
  app.require_subcommand(1);
  Config c;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("-o,--output", c.output, "write the result to a file");
  };

  auto scott = app.add_subcommand("scott", "largest sharp system of a structure");
  scott->add_option("structure", c.inputs, "structure file")->required()->expected(1);
  scott->add_option("--n-max", c.n_max, "arity bound")->check(CLI::NonNegativeNumber);
  common(scott);

  auto flat = app.add_subcommand("flatten", "flat structure of a structure and system (default: the largest)");
  flat->add_option("files", c.inputs, "structure file and optional system JSON")->required()->expected(1, 2);
  flat->add_option("--n-max", c.n_max, "arity bound when no system is given")->check(CLI::NonNegativeNumber);
  common(flat);

  auto check = app.add_subcommand("checkflat", "check the flat axioms");
  check->add_option("flat", c.inputs, "flat JSON")->required()->expected(1);
  common(check);

  auto recon = app.add_subcommand("reconstruct", "structure and system from a flat structure");
  recon->add_option("flat", c.inputs, "flat JSON")->required()->expected(1);
  recon->add_option("--order", c.order, "covering chain tie-break: least or greatest");
  common(recon);

  auto haus = app.add_subcommand("hausdorff", "do flat formulas separate the elements");
  haus->add_option("flat", c.inputs, "flat JSON")->required()->expected(1);
  common(haus);

  auto code = app.add_subcommand("code", "subgroup code of a permutation group");
  code->add_option("group", c.inputs, "sN or generators in cycle notation")->required()->expected(1);
  code->add_option("--degree", c.degree, "permutation degree (inferred by default)");
  code->add_option("--n-max", c.n_max, "arity bound")->check(CLI::NonNegativeNumber);
  common(code);

  auto conj = app.add_subcommand("conj", "least conjugator between two subgroups");
  conj->add_option("groups", c.inputs, "ambient group, first subgroup, second subgroup")->required()->expected(3);
  conj->add_option("--degree", c.degree, "permutation degree (inferred by default)");
  common(conj);

  auto fs = app.add_subcommand("fs", "graph isomorphism against conjugacy of padded-tree codes");
  fs->add_option("graphs", c.inputs, "two graph files")->required()->expected(2);
  fs->add_option("--p", c.p, "padding multiplicity")->check(CLI::Range(2, 8));
  common(fs);

  auto th = app.add_subcommand("th", "cross-cutting equivalence relations");
  th->set_help_flag("--help", "Print this help message and exit");
  th->add_option("--h", c.h_list, "class counts, e.g. 2,3")->required();
  th->add_option("--mult", c.mult, "cell multiplicity, e.g. 0,1=2 (repeatable)");
  th->add_option("--guard-size", c.guard_size, "largest structure for the automorphism search")
      ->check(CLI::PositiveNumber);
  common(th);

  auto corpus = app.add_subcommand("corpus", "write the seeded test corpus");
  corpus->add_option("--seed", c.seed, "corpus seed");
  corpus->add_option("--out", c.output, "output directory")->required();
  corpus->add_option("--max-size", c.max_size, "largest structure size")->check(CLI::Range(1, 6));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*scott) return cmd_scott(c);
    if (*flat) return cmd_flatten(c);
    if (*check) return cmd_checkflat(c);
    if (*recon) return cmd_reconstruct(c);
    if (*haus) return cmd_hausdorff(c);
    if (*code) return cmd_code(c);
    if (*conj) return cmd_conj(c);
    if (*fs) return cmd_fs(c);
    if (*th) return cmd_th(c);
    if (*corpus) return cmd_corpus(c);
  } catch (const GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
