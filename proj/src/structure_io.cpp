#include <cctype>
#include <sstream>

#include "json.hpp"
#include "scottflat/structures.hpp"

namespace scottflat {

namespace {

struct Token {
  enum Kind { Int, Name, Punct, End } kind = End;
  std::string text;
  long value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        advance(2);
        t.kind = Token::Punct;
        t.text = "->";
        return t;
      }
      size_t start = pos_;
      if (c == '-') advance(1);
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance(1);
      t.kind = Token::Int;
      t.text = std::string(src_.substr(start, pos_ - start));
      if (t.text == "-") throw ParseError("stray '-'", t.line, t.col);
      t.value = std::stol(t.text);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance(1);
      t.kind = Token::Name;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (std::string_view(";/{}(),=").find(c) != std::string_view::npos) {
      advance(1);
      t.kind = Token::Punct;
      t.text = std::string(1, c);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

 private:
  void advance(size_t k) {
    for (size_t i = 0; i < k; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

  FinStructure run() {
    FinStructure m;
    bool have_size = false;
    while (tok_.kind != Token::End) {
      Token kw = expect_name();
      if (kw.text == "size") {
        if (have_size) fail("duplicate size declaration", kw);
        m.size = static_cast<int>(expect_int());
        have_size = true;
        expect(";");
      } else if (kw.text == "rel") {
        Token name = expect_name();
        expect("/");
        int arity = static_cast<int>(expect_int());
        if (arity < 1) fail("relation arity must be positive", name);
        expect("{");
        std::set<Tuple> tuples;
        if (!is("}")) {
          do {
            Token at = tok_;
            Tuple t = parse_tuple();
            if (static_cast<int>(t.size()) != arity)
              fail("tuple length " + std::to_string(t.size()) + " does not match arity", at);
            tuples.insert(std::move(t));
          } while (accept(","));
        }
        expect("}");
        expect(";");
        m.vocab.relations.push_back(Symbol{name.text, arity});
        m.relations.push_back(std::move(tuples));
      } else if (kw.text == "const") {
        Token name = expect_name();
        expect("=");
        int v = static_cast<int>(expect_int());
        expect(";");
        m.vocab.constants.push_back(name.text);
        m.constants.push_back(v);
      } else if (kw.text == "fun") {
        Token name = expect_name();
        expect("/");
        int arity = static_cast<int>(expect_int());
        if (arity < 1) fail("function arity must be positive", name);
        expect("{");
        std::map<Tuple, int> table;
        if (!is("}")) {
          do {
            Token at = tok_;
            Tuple args = parse_tuple();
            if (static_cast<int>(args.size()) != arity) fail("argument count does not match arity", at);
            expect("->");
            int val = static_cast<int>(expect_int());
            if (!table.emplace(args, val).second) fail("function defined twice on the same arguments", at);
          } while (accept(","));
        }
        expect("}");
        expect(";");
        m.vocab.functions.push_back(Symbol{name.text, arity});
        m.functions.push_back(std::move(table));
      } else {
        fail("unknown keyword '" + kw.text + "'", kw);
      }
    }
    if (!have_size) throw ParseError("missing size declaration", tok_.line, tok_.col);
    m.validate();
    return m;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& at) { throw ParseError(msg, at.line, at.col); }
  bool is(const char* p) const { return tok_.kind == Token::Punct && tok_.text == p; }
  bool accept(const char* p) {
    if (!is(p)) return false;
    tok_ = lex_.next();
    return true;
  }
  void expect(const char* p) {
    if (!accept(p)) fail(std::string("expected '") + p + "'", tok_);
  }
  Token expect_name() {
    if (tok_.kind != Token::Name) fail("expected a name", tok_);
    Token t = tok_;
    tok_ = lex_.next();
    return t;
  }
  long expect_int() {
    if (tok_.kind != Token::Int) fail("expected an integer", tok_);
    long v = tok_.value;
    tok_ = lex_.next();
    return v;
  }
  Tuple parse_tuple() {
    expect("(");
    Tuple t;
    if (!is(")")) {
      do {
        t.push_back(static_cast<int>(expect_int()));
      } while (accept(","));
    }
    expect(")");
    return t;
  }

  Lexer lex_;
  Token tok_;
};

std::string tuple_text(const Tuple& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

}  // namespace

FinStructure parse_structure(std::string_view text) { return Parser(text).run(); }

std::string serialize_structure(const FinStructure& m) {
  std::ostringstream os;
  os << "size " << m.size << ";\n";
  for (size_t r = 0; r < m.relations.size(); ++r) {
    os << "rel " << m.vocab.relations[r].name << "/" << m.vocab.relations[r].arity << " {";
    bool first = true;
    for (const auto& t : m.relations[r]) {
      os << (first ? "" : ",") << tuple_text(t);
      first = false;
    }
    os << "};\n";
  }
  for (size_t c = 0; c < m.constants.size(); ++c)
    os << "const " << m.vocab.constants[c] << " = " << m.constants[c] << ";\n";
  for (size_t f = 0; f < m.functions.size(); ++f) {
    os << "fun " << m.vocab.functions[f].name << "/" << m.vocab.functions[f].arity << " {";
    bool first = true;
    for (const auto& [args, val] : m.functions[f]) {
      os << (first ? "" : ",") << tuple_text(args) << "->" << val;
      first = false;
    }
    os << "};\n";
  }
  return os.str();
}

FinStructure parse_structure_json(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1, static_cast<int>(e.byte));
  }
  try {
    FinStructure m;
    m.size = j.at("size").get<int>();
    for (const auto& r : j.value("relations", json::array())) {
      m.vocab.relations.push_back(Symbol{r.at("name").get<std::string>(), r.at("arity").get<int>()});
      std::set<Tuple> tuples;
      for (const auto& t : r.at("tuples")) tuples.insert(t.get<Tuple>());
      m.relations.push_back(std::move(tuples));
    }
    for (const auto& c : j.value("constants", json::array())) {
      m.vocab.constants.push_back(c.at("name").get<std::string>());
      m.constants.push_back(c.at("value").get<int>());
    }
    for (const auto& f : j.value("functions", json::array())) {
      m.vocab.functions.push_back(Symbol{f.at("name").get<std::string>(), f.at("arity").get<int>()});
      std::map<Tuple, int> table;
      for (const auto& e : f.at("table")) table[e.at(0).get<Tuple>()] = e.at(1).get<int>();
      m.functions.push_back(std::move(table));
    }
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed structure JSON: ") + e.what(), 1, 1);
  }
}

std::string serialize_structure_json(const FinStructure& m) {
  using nlohmann::json;
  json j;
  j["size"] = m.size;
  j["relations"] = json::array();
  for (size_t r = 0; r < m.relations.size(); ++r)
    j["relations"].push_back({{"name", m.vocab.relations[r].name},
                              {"arity", m.vocab.relations[r].arity},
                              {"tuples", m.relations[r]}});
  j["constants"] = json::array();
  for (size_t c = 0; c < m.constants.size(); ++c)
    j["constants"].push_back({{"name", m.vocab.constants[c]}, {"value", m.constants[c]}});
  j["functions"] = json::array();
  for (size_t f = 0; f < m.functions.size(); ++f) {
    json table = json::array();
    for (const auto& [args, val] : m.functions[f]) table.push_back(json::array({args, val}));
    j["functions"].push_back({{"name", m.vocab.functions[f].name},
                              {"arity", m.vocab.functions[f].arity},
                              {"table", table}});
  }
  return j.dump(2) + "\n";
}

}  // namespace scottflat
