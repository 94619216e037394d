#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "msocard/error.hpp"
#include "msocard/formula.hpp"
#include "msocard/templates.hpp"

namespace msocard {

namespace {

enum class Tok {
  ident,
  lparen,
  rparen,
  comma,
  dot,
  tilde,
  amp,
  bar,
  arrow,
  iff,
  less,
  eq,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(c)) {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
    if (starts("<->")) {
      out.push_back({Tok::iff, "<->", start});
      i += 3;
    } else if (starts("->")) {
      out.push_back({Tok::arrow, "->", start});
      i += 2;
    } else {
      Tok k;
      switch (c) {
        case '(': k = Tok::lparen; break;
        case ')': k = Tok::rparen; break;
        case ',': k = Tok::comma; break;
        case '.': k = Tok::dot; break;
        case '~': k = Tok::tilde; break;
        case '&': k = Tok::amp; break;
        case '|': k = Tok::bar; break;
        case '<': k = Tok::less; break;
        case '=': k = Tok::eq; break;
        default:
          throw SyntaxError(std::string("unexpected character '") + s[i] + "'", start);
      }
      out.push_back({k, std::string(1, s[i]), start});
      ++i;
    }
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

bool is_keyword(const std::string& w) {
  static const std::set<std::string> kw = {"ex1", "all1", "ex2", "all2", "in",
                                           "sub", "true", "false"};
  return kw.count(w) != 0;
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : toks_(tokenize(text)), sig_(sig) {
    for (const auto& t : toks_)
      if (t.kind == Tok::ident && !is_keyword(t.text)) names_.reserve(t.text);
  }

  Formula parse() {
    Formula f = parse_iff();
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().pos); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw SyntaxError(msg, at);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    ++pos_;
  }

  Formula parse_iff() {
    Formula lhs = parse_implication();
    while (peek().kind == Tok::iff) {
      ++pos_;
      lhs = Formula::equivalence(lhs, parse_implication());
    }
    return lhs;
  }

  Formula parse_implication() {
    Formula lhs = parse_or();
    if (peek().kind == Tok::arrow) {
      ++pos_;
      return Formula::implication(lhs, parse_implication());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (peek().kind == Tok::bar) {
      ++pos_;
      lhs = Formula::disjunction(lhs, parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (peek().kind == Tok::amp) {
      ++pos_;
      lhs = Formula::conjunction(lhs, parse_unary());
    }
    return lhs;
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (t.kind == Tok::tilde) {
      ++pos_;
      return Formula::negation(parse_unary());
    }
    if (t.kind == Tok::ident &&
        (t.text == "ex1" || t.text == "all1" || t.text == "ex2" || t.text == "all2")) {
      ++pos_;
      bool set_quantifier = t.text.back() == '2';
      const Token& v = peek();
      if (v.kind != Tok::ident || is_keyword(v.text)) fail("expected variable after " + t.text);
      Sort want = set_quantifier ? Sort::set : Sort::element;
      if (sort_of(v.text) != want) {
        fail(t.text + " binds " + (set_quantifier ? "second" : "first") +
             "-order variables; '" + v.text + "' has the wrong case");
      }
      ++pos_;
      expect(Tok::dot, "'.' after quantified variable");
      Formula body = parse_iff();
      bool exists = t.text.rfind("ex", 0) == 0;
      return exists ? Formula::exists(v.text, body) : Formula::forall(v.text, body);
    }
    return parse_primary();
  }

  std::string parse_variable() {
    const Token& t = peek();
    if (t.kind != Tok::ident || is_keyword(t.text)) fail("expected variable");
    ++pos_;
    return t.text;
  }

  Formula parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::lparen) {
      ++pos_;
      Formula f = parse_iff();
      expect(Tok::rparen, "')'");
      return f;
    }
    if (t.kind != Tok::ident) fail("expected formula");
    if (t.text == "true") {
      ++pos_;
      return Formula::top();
    }
    if (t.text == "false") {
      ++pos_;
      return Formula::bottom();
    }
    if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "'");
    if (toks_[pos_ + 1].kind == Tok::lparen) return parse_relation();

    std::size_t lhs_pos = t.pos;
    std::string lhs = parse_variable();
    const Token& op = peek();
    std::size_t op_pos = op.pos;
    if (op.kind == Tok::less) {
      ++pos_;
      std::size_t rhs_pos = peek().pos;
      std::string rhs = parse_variable();
      if (sort_of(lhs) != Sort::element || sort_of(rhs) != Sort::element)
        fail_at("'<' applied to second-order variables", sort_of(lhs) == Sort::set ? lhs_pos : rhs_pos);
      return Formula::less(lhs, rhs);
    }
    if (op.kind == Tok::eq) {
      ++pos_;
      std::size_t rhs_pos = peek().pos;
      std::string rhs = parse_variable();
      if (sort_of(lhs) != sort_of(rhs)) fail_at("'=' between variables of different sorts", rhs_pos);
      if (sort_of(lhs) == Sort::element) return Formula::equal(lhs, rhs);
      return set_equal(lhs, rhs, names_);
    }
    if (op.kind == Tok::ident && op.text == "in") {
      ++pos_;
      std::size_t rhs_pos = peek().pos;
      std::string rhs = parse_variable();
      if (sort_of(lhs) != Sort::element) fail_at("left operand of 'in' must be first-order", lhs_pos);
      if (sort_of(rhs) != Sort::set) fail_at("right operand of 'in' must be second-order", rhs_pos);
      return Formula::member(lhs, rhs);
    }
    if (op.kind == Tok::ident && op.text == "sub") {
      ++pos_;
      std::size_t rhs_pos = peek().pos;
      std::string rhs = parse_variable();
      if (sort_of(lhs) != Sort::set) fail_at("'sub' applied to a first-order variable", lhs_pos);
      if (sort_of(rhs) != Sort::set) fail_at("'sub' applied to a first-order variable", rhs_pos);
      return subset(lhs, rhs, names_);
    }
    fail_at("expected '<', '=', 'in' or 'sub'", op_pos);
  }

  Formula parse_relation() {
    const Token& name = next();
    const RelationSymbol* sym = sig_.find(name.text);
    if (sym == nullptr) fail_at("unknown relation symbol " + name.text, name.pos);
    expect(Tok::lparen, "'('");
    std::vector<std::string> args;
    for (;;) {
      std::size_t at = peek().pos;
      std::string a = parse_variable();
      if (sym->set_arguments_only && sort_of(a) != Sort::set)
        fail_at(name.text + " takes second-order arguments only", at);
      args.push_back(a);
      if (peek().kind == Tok::comma) {
        ++pos_;
        continue;
      }
      break;
    }
    expect(Tok::rparen, "')'");
    if (args.size() != sym->arity) {
      fail_at("relation " + name.text + " expects " + std::to_string(sym->arity) +
                  " arguments, got " + std::to_string(args.size()),
              name.pos);
    }
    return Formula::relation(name.text, args);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  NameSupply names_;
};

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  return Parser(text, sig).parse();
}

}  // namespace msocard
