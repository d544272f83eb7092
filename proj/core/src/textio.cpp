#include "wlp/textio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "wlp/solver.hpp"

namespace wlp {

namespace {

enum class Tok { Name, Var, Int, Float, Quoted, Punct, Directive, Origin, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src, int first_line = 1) : src_(src), line_(first_line) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourceSpan at{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", at});
        return out;
      }
      char c = src_[pos_];
      if (c == '%') {
        std::size_t end = src_.find('\n', pos_);
        if (end == std::string_view::npos) end = src_.size();
        std::string_view body = src_.substr(pos_ + 1, end - pos_ - 1);
        while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        while (!body.empty() && (body.back() == ' ' || body.back() == '\r')) body.remove_suffix(1);
        constexpr std::string_view tag = "origin:";
        if (body.substr(0, tag.size()) == tag) {
          std::string_view note = body.substr(tag.size());
          while (!note.empty() && note.front() == ' ') note.remove_prefix(1);
          out.push_back({Tok::Origin, std::string(note), at});
        }
        advance(end - pos_);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance(1);
        std::string word(src_.substr(start, pos_ - start));
        out.push_back({std::isupper(static_cast<unsigned char>(c)) ? Tok::Var : Tok::Name, word, at});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(number(at));
        continue;
      }
      if (c == '"') {
        out.push_back(quoted(at));
        continue;
      }
      if (c == '@') {
        std::size_t start = pos_;
        advance(1);
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance(1);
        out.push_back({Tok::Directive, std::string(src_.substr(start, pos_ - start)), at});
        continue;
      }
      static const char* two[] = {"+=", "::", "!="};
      bool matched = false;
      for (const char* t : two) {
        if (src_.substr(pos_, 2) == t) {
          out.push_back({Tok::Punct, t, at});
          advance(2);
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("(),.*=[]<>+-/").find(c) != std::string_view::npos) {
        out.push_back({Tok::Punct, std::string(1, c), at});
        advance(1);
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", at);
    }
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance(1);
  }

  bool digit_at(std::size_t p) const {
    return p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]));
  }

  Token number(SourceSpan at) {
    std::size_t start = pos_;
    bool is_float = false;
    while (digit_at(pos_)) advance(1);
    if (pos_ < src_.size() && src_[pos_] == '.' && digit_at(pos_ + 1)) {
      is_float = true;
      advance(1);
      while (digit_at(pos_)) advance(1);
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (digit_at(p)) {
        is_float = true;
        advance(p - pos_);
        while (digit_at(pos_)) advance(1);
      }
    }
    return {is_float ? Tok::Float : Tok::Int, std::string(src_.substr(start, pos_ - start)), at};
  }

  Token quoted(SourceSpan at) {
    advance(1);
    std::string text;
    for (;;) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') throw ParseError("unterminated quoted symbol", at);
      char c = src_[pos_];
      if (c == '"') {
        advance(1);
        break;
      }
      if (c == '\\') {
        if (pos_ + 1 >= src_.size()) throw ParseError("unterminated escape", at);
        char e = src_[pos_ + 1];
        text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        advance(2);
        continue;
      }
      text += c;
      advance(1);
    }
    return {Tok::Quoted, text, at};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    std::optional<std::string> origin;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Origin) {
        origin = next().text;
        continue;
      }
      if (peek().kind == Tok::Directive) {
        directive(p);
        origin.reset();
        continue;
      }
      SourceSpan at = peek().span;
      Atom head = atom();
      if (is_punct("+=")) {
        next();
        Rule r;
        r.head = std::move(head);
        r.span = at;
        r.body.push_back(atom());
        while (is_punct("*")) {
          next();
          r.body.push_back(atom());
        }
        if (peek().kind == Tok::Name && peek().text == "if") {
          next();
          r.conditions.push_back(condition());
          while (is_punct(",")) {
            next();
            r.conditions.push_back(condition());
          }
        }
        expect(".");
        r.origin = std::move(origin);
        origin.reset();
        p.rules.push_back(std::move(r));
      } else if (is_punct("=")) {
        next();
        Axiom a;
        a.atom = std::move(head);
        a.span = at;
        a.value = value();
        expect(".");
        origin.reset();
        p.axioms.push_back(std::move(a));
      } else {
        fail("expected '+=' or '=' after " + head.to_string());
      }
    }
    return p;
  }

  Atom atom() {
    const Token& t = peek();
    if (t.kind != Tok::Name) fail("expected a predicate name");
    Atom a(next().text);
    if (is_punct("(")) {
      next();
      a.args.push_back(term());
      while (is_punct(",")) {
        next();
        a.args.push_back(term());
      }
      expect(")");
    }
    return a;
  }

  Term term() {
    Term t = primary();
    if (is_punct("::")) {
      next();
      return Term::cons(std::move(t), term());
    }
    return t;
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected trailing input");
  }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }

 private:
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool is_punct(const char* p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + " (found " + found + ")", t.span);
  }

  void expect(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'");
    next();
  }

  std::string name() {
    if (peek().kind != Tok::Name) fail("expected a name");
    return next().text;
  }

  std::size_t integer() {
    if (peek().kind != Tok::Int) fail("expected an integer");
    return std::stoull(next().text);
  }

  void directive(Program& p) {
    Token d = next();
    if (d.text == "@semiring") {
      std::string n = name();
      auto id = parse_semiring_id(n);
      if (!id) throw ParseError("unknown semiring '" + n + "'", d.span);
      p.semiring = *id;
    } else if (d.text == "@pair") {
      PairDirective pd;
      pd.left.name = name();
      expect("/");
      pd.left.arity = integer();
      pd.right.name = name();
      expect("/");
      pd.right.arity = integer();
      if (peek().kind != Tok::Name || peek().text != "as") fail("expected 'as'");
      next();
      pd.product = name();
      p.pairs.push_back(std::move(pd));
    } else if (d.text == "@input") {
      PredicateKey k;
      k.name = name();
      expect("/");
      k.arity = integer();
      p.inputs.insert(std::move(k));
    } else {
      throw ParseError("unknown directive '" + d.text + "'", d.span);
    }
    expect(".");
  }

  std::int64_t signed_int() {
    bool neg = false;
    if (is_punct("-") || is_punct("+")) neg = next().text == "-";
    if (peek().kind != Tok::Int) fail("expected an integer");
    std::int64_t v = std::stoll(next().text);
    return neg ? -v : v;
  }

  Term primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var: {
        Term v = Term::variable(next().text);
        if (is_punct("+") || is_punct("-")) {
          bool neg = next().text == "-";
          if (peek().kind != Tok::Int) fail("expected an integer offset");
          std::int64_t off = std::stoll(next().text);
          if (off == 0) return v;
          return Term::arith(std::move(v), neg ? -off : off);
        }
        return v;
      }
      case Tok::Name: {
        if (is_punct("(", 1)) fail("compound terms are not supported");
        return Term::symbol(next().text);
      }
      case Tok::Quoted:
        return Term::symbol(next().text);
      case Tok::Int:
        return Term::integer(signed_int());
      case Tok::Punct:
        if (t.text == "-" && peek(1).kind == Tok::Int) return Term::integer(signed_int());
        if (t.text == "[") {
          next();
          expect("]");
          return Term::nil();
        }
        if (t.text == "(") {
          next();
          Term inner = term();
          expect(")");
          return inner;
        }
        break;
      default:
        break;
    }
    fail("expected a term");
  }

  SideCondition condition() {
    if (peek().kind == Tok::Name && !is_punct("=", 1) && !is_punct("!=", 1) && !is_punct("::", 1))
      return SideCondition::guard(atom());
    Term l = term();
    if (is_punct("=")) {
      next();
      return SideCondition::eq(std::move(l), term());
    }
    if (is_punct("!=")) {
      next();
      return SideCondition::neq(std::move(l), term());
    }
    fail("expected '=' or '!=' in condition");
  }

  double number() {
    bool neg = false;
    if (is_punct("-") || is_punct("+")) neg = next().text == "-";
    const Token& t = peek();
    double d;
    if (t.kind == Tok::Int || t.kind == Tok::Float) {
      d = std::strtod(next().text.c_str(), nullptr);
    } else if (t.kind == Tok::Name && t.text == "inf") {
      next();
      d = std::numeric_limits<double>::infinity();
    } else {
      fail("expected a number");
    }
    return neg ? -d : d;
  }

  Value value() {
    if (peek().kind == Tok::Name && (peek().text == "true" || peek().text == "false"))
      return next().text == "true";
    if (is_punct("<")) {
      next();
      Triple t;
      t.x = number();
      expect(",");
      t.y = number();
      expect(",");
      t.z = number();
      expect(">");
      return t;
    }
    return number();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(Lexer(text).run());
  return p.program();
}

Atom parse_atom(std::string_view text) {
  Parser p(Lexer(text).run());
  Atom a = p.atom();
  p.expect_end();
  return a;
}

Term parse_term(std::string_view text) {
  Parser p(Lexer(text).run());
  Term t = p.term();
  p.expect_end();
  return t;
}

std::string render_program(const Program& program) {
  std::ostringstream out;
  bool header = false;
  if (program.semiring) {
    out << "@semiring " << semiring_name(*program.semiring) << ".\n";
    header = true;
  }
  for (const auto& k : program.inputs) {
    out << "@input " << k.name << "/" << k.arity << ".\n";
    header = true;
  }
  for (const auto& p : program.pairs) {
    out << "@pair " << p.left.to_string() << " " << p.right.to_string() << " as " << p.product << ".\n";
    header = true;
  }
  if (header && (!program.rules.empty() || !program.axioms.empty())) out << "\n";
  for (const auto& r : program.rules) {
    if (r.origin) {
      std::string note = *r.origin;
      std::replace(note.begin(), note.end(), '\n', ' ');
      out << "% origin: " << note << "\n";
    }
    out << r.to_string() << "\n";
  }
  if (!program.rules.empty() && !program.axioms.empty()) out << "\n";
  for (const auto& a : program.axioms) out << a.atom.to_string() << " = " << to_string(a.value) << ".\n";
  return out.str();
}

std::vector<Axiom> parse_facts_tsv(std::string_view text, const Value& default_value) {
  std::vector<Axiom> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (end == text.size()) break;
      continue;
    }
    if (line[0] == '#' || line[0] == '%') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    auto fail = [&](const std::string& msg) -> void {
      throw ParseError("facts line " + std::to_string(line_no) + ": " + msg, {line_no, 1});
    };
    if (fields.size() > 3) fail("expected at most three tab-separated columns");
    Axiom a;
    a.span = {line_no, 1};
    std::string atom_text = fields[0];
    if (fields.size() >= 2 && !fields[1].empty()) atom_text += "(" + fields[1] + ")";
    try {
      Parser p(Lexer(atom_text, line_no).run());
      a.atom = p.atom();
      p.expect_end();
    } catch (const ParseError& e) {
      fail(e.detail());
    }
    if (!a.atom.is_ground()) fail("fact " + a.atom.to_string() + " is not ground");
    if (fields.size() == 3 && fields[2].find_first_not_of(" \t") != std::string::npos) {
      auto v = parse_value(fields[2]);
      if (!v) fail("cannot read value '" + fields[2] + "'");
      a.value = *v;
    } else {
      a.value = default_value;
    }
    out.push_back(std::move(a));
    if (end == text.size()) break;
  }
  return out;
}

std::string render_facts_tsv(const std::vector<Axiom>& facts) {
  std::string out;
  for (const auto& f : facts) {
    out += f.atom.predicate + "\t";
    for (std::size_t i = 0; i < f.atom.args.size(); ++i) {
      if (i) out += ",";
      out += f.atom.args[i].to_string();
    }
    out += "\t" + to_string(f.value) + "\n";
  }
  return out;
}

namespace {

std::string json_number(double d) {
  if (d == std::numeric_limits<double>::infinity()) return "\"inf\"";
  if (d == -std::numeric_limits<double>::infinity()) return "\"-inf\"";
  return format_number(d, 12);
}

}  // namespace

std::string format_output(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d, 12);
  const auto& t = std::get<Triple>(v);
  return "<" + format_number(t.x, 12) + "," + format_number(t.y, 12) + "," + format_number(t.z, 12) + ">";
}

std::string render_chart(const Chart& chart) {
  std::string out;
  for (const auto& [atom, value] : chart.sorted_entries()) {
    out += "{\"atom\":" + nlohmann::json(atom.to_string()).dump() + ",\"value\":";
    if (const auto* b = std::get_if<bool>(&value)) {
      out += *b ? "true" : "false";
    } else if (const auto* d = std::get_if<double>(&value)) {
      out += json_number(*d);
    } else {
      const auto& t = std::get<Triple>(value);
      out += "[" + json_number(t.x) + "," + json_number(t.y) + "," + json_number(t.z) + "]";
    }
    out += "}\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << contents;
}

}  // namespace wlp
