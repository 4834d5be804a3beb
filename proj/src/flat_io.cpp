#include "json.hpp"
#include "scottflat/flat.hpp"

namespace scottflat {

namespace {

using nlohmann::json;

std::string key_of(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> parse_key(const std::string& s) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    std::string part = s.substr(pos, end - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("malformed key '" + s + "'");
    out.push_back(std::stoi(part));
    pos = end + 1;
  }
  return out;
}

json diagram_json(const QfDiagram& d, const Vocabulary& v) {
  json atoms = json::object();
  for (size_t r = 0; r < d.atoms.size(); ++r) {
    json list = json::array();
    for (size_t code = 0; code < d.atoms[r].size(); ++code)
      if (d.atoms[r][code]) list.push_back(decode_tuple(static_cast<int64_t>(code), d.rel_arity[r], d.arity));
    atoms[v.relations[r].name] = list;
  }
  json consts = json::object();
  for (size_t c = 0; c < d.consts.size(); ++c) consts[v.constants[c]] = d.consts[c];
  return {{"eq", d.eq}, {"atoms", atoms}, {"consts", consts}};
}

QfDiagram diagram_from_json(const json& j, int arity, const Vocabulary& v) {
  QfDiagram d;
  d.arity = arity;
  d.eq = j.at("eq").get<std::vector<int>>();
  if (static_cast<int>(d.eq.size()) != arity) throw InputError("equality pattern length differs from arity");
  for (const auto& sym : v.relations) {
    d.rel_arity.push_back(sym.arity);
    std::vector<uint8_t> table(static_cast<size_t>(tuple_count(arity, sym.arity)), 0);
    const json& atoms = j.at("atoms");
    if (atoms.contains(sym.name))
      for (const auto& t : atoms.at(sym.name)) {
        Tuple vars = t.get<Tuple>();
        if (static_cast<int>(vars.size()) != sym.arity) throw InputError("atom of wrong length for " + sym.name);
        for (int x : vars)
          if (x < 0 || x >= arity) throw InputError("atom variable out of range");
        table[static_cast<size_t>(encode_tuple(vars, arity))] = 1;
      }
    d.atoms.push_back(std::move(table));
  }
  for (const auto& c : v.constants) {
    std::vector<int> vars;
    if (j.contains("consts") && j.at("consts").contains(c)) vars = j.at("consts").at(c).get<std::vector<int>>();
    d.consts.push_back(std::move(vars));
  }
  return d;
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1, static_cast<int>(e.byte));
  }
}

}  // namespace

std::string serialize_flat_json(const FlatStructure& b) {
  json j;
  j["n_max"] = b.n_max;
  json rels = json::array();
  for (const auto& r : b.vocab.relations) rels.push_back({{"name", r.name}, {"arity", r.arity}});
  j["vocabulary"] = {{"relations", rels}, {"constants", b.vocab.constants}};
  j["graph_relations"] = b.graph_relations;
  json elems = json::array();
  for (int a = 0; a < b.size(); ++a) {
    const FlatElement& e = b.elements[a];
    json proj = json::object();
    const auto& maps = projection_maps(e.arity);
    for (size_t s = 0; s < maps.size() && s < e.proj.size(); ++s)
      if (e.proj[s] >= 0) proj[key_of(maps[s].values)] = e.proj[s];
    json el = {{"id", a}, {"arity", e.arity}, {"diagram", diagram_json(e.diagram, b.vocab)}, {"proj", proj}};
    if (!e.merged.empty()) {
      json extra = json::array();
      for (const auto& d : e.merged) extra.push_back(diagram_json(d, b.vocab));
      el["merged"] = extra;
    }
    elems.push_back(el);
  }
  j["elements"] = elems;
  return j.dump(2) + "\n";
}

FlatStructure parse_flat_json(std::string_view text) {
  json j = parse_json_text(text);
  try {
    FlatStructure b;
    b.n_max = j.at("n_max").get<int>();
    if (b.n_max < 1) throw InputError("n_max must be at least 1");
    const json& voc = j.at("vocabulary");
    for (const auto& r : voc.value("relations", json::array()))
      b.vocab.relations.push_back(Symbol{r.at("name").get<std::string>(), r.at("arity").get<int>()});
    for (const auto& c : voc.value("constants", json::array())) b.vocab.constants.push_back(c.get<std::string>());
    b.vocab.validate();
    b.graph_relations = j.value("graph_relations", std::vector<int>{});
    const json& elems = j.at("elements");
    b.elements.resize(elems.size());
    for (size_t i = 0; i < elems.size(); ++i) {
      const json& el = elems[i];
      if (el.contains("id") && el.at("id").get<size_t>() != i) throw InputError("element ids must be 0..N-1 in order");
      FlatElement& e = b.elements[i];
      e.arity = el.at("arity").get<int>();
      if (e.arity < 0 || e.arity > b.n_max) throw InputError("element " + std::to_string(i) + " has arity out of range");
      e.diagram = diagram_from_json(el.at("diagram"), e.arity, b.vocab);
      e.proj.assign(projection_maps(e.arity).size(), -1);
      for (const auto& [key, val] : el.at("proj").items())
        e.proj[projection_slot(e.arity, parse_key(key))] = val.get<int>();
      if (el.contains("merged"))
        for (const auto& d : el.at("merged")) e.merged.push_back(diagram_from_json(d, e.arity, b.vocab));
    }
    return b;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed flat structure JSON: ") + e.what(), 1, 1);
  }
}

std::string serialize_system_json(const TruncatedSystem& s) {
  json e = json::object();
  for (int k = 0; k <= s.n_max; ++k) {
    json cls = json::object();
    for (size_t i = 0; i < s.cls[k].size(); ++i)
      cls[key_of(decode_tuple(static_cast<int64_t>(i), k, s.size))] = s.cls[k][i];
    e[std::to_string(k)] = cls;
  }
  json j = {{"size", s.size}, {"n_max", s.n_max}, {"E", e}};
  return j.dump(2) + "\n";
}

TruncatedSystem parse_system_json(std::string_view text) {
  json j = parse_json_text(text);
  try {
    TruncatedSystem s;
    s.size = j.at("size").get<int>();
    s.n_max = j.at("n_max").get<int>();
    if (s.size < 1 || s.n_max < 1) throw InputError("size and n_max must be positive");
    s.cls.resize(s.n_max + 1);
    for (int k = 0; k <= s.n_max; ++k) {
      int64_t total = tuple_count(s.size, k);
      std::vector<int> raw(static_cast<size_t>(total), -1);
      const json& cls = j.at("E").at(std::to_string(k));
      for (const auto& [key, val] : cls.items()) {
        Tuple t = parse_key(key);
        if (static_cast<int>(t.size()) != k) throw InputError("tuple '" + key + "' listed under arity " + std::to_string(k));
        for (int x : t)
          if (x >= s.size) throw InputError("tuple '" + key + "' out of range");
        raw[static_cast<size_t>(encode_tuple(t, s.size))] = val.get<int>();
      }
      for (size_t i = 0; i < raw.size(); ++i)
        if (raw[i] < 0) throw InputError("arity " + std::to_string(k) + " partition does not cover every tuple");
      s.cls[k] = canonical_ids(raw);
    }
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed system JSON: ") + e.what(), 1, 1);
  }
}

}  // namespace scottflat
