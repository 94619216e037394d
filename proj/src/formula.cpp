#include "msocard/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

#include "msocard/error.hpp"
#include "msocard/templates.hpp"

namespace msocard {

Sort sort_of(std::string_view name) {
  if (name.empty()) throw FormulaError("empty variable name");
  return std::isupper(static_cast<unsigned char>(name.front())) ? Sort::set : Sort::element;
}

bool is_identifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

Signature::Signature(std::initializer_list<RelationSymbol> symbols) {
  for (const auto& s : symbols) add(s);
}

void Signature::add(RelationSymbol symbol) {
  if (symbol.arity == 0) throw FormulaError("relation symbol " + symbol.name + " has arity 0");
  if (!is_identifier(symbol.name)) throw FormulaError("invalid relation name '" + symbol.name + "'");
  if (find(symbol.name) != nullptr) throw FormulaError("duplicate relation symbol " + symbol.name);
  symbols_.push_back(std::move(symbol));
}

const RelationSymbol* Signature::find(std::string_view name) const {
  for (const auto& s : symbols_)
    if (s.name == name) return &s;
  return nullptr;
}

bool is_quantifier(NodeKind kind) {
  return kind == NodeKind::exists_element || kind == NodeKind::forall_element ||
         kind == NodeKind::exists_set || kind == NodeKind::forall_set;
}

bool is_binary(NodeKind kind) {
  return kind == NodeKind::conjunction || kind == NodeKind::disjunction ||
         kind == NodeKind::implication || kind == NodeKind::equivalence;
}

Formula Formula::make(NodeKind kind, std::vector<std::string> vars, std::string symbol,
                      std::vector<Formula> children) {
  return Formula(std::make_shared<const Node>(
      Node{kind, std::move(vars), std::move(symbol), std::move(children)}));
}

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
  static const Formula t = make(NodeKind::truth, {}, {}, {});
  return t;
}

Formula Formula::bottom() {
  static const Formula f = make(NodeKind::falsity, {}, {}, {});
  return f;
}

namespace {

void require_sort(const std::string& name, Sort expected, const char* where) {
  if (!is_identifier(name)) throw FormulaError("invalid variable name '" + name + "'");
  if (sort_of(name) != expected) {
    throw FormulaError(std::string(where) + ": variable " + name + " must be " +
                       (expected == Sort::element ? "first-order (lowercase)"
                                                  : "second-order (uppercase)"));
  }
}

}  // namespace

Formula Formula::less(std::string x, std::string y) {
  require_sort(x, Sort::element, "<");
  require_sort(y, Sort::element, "<");
  return make(NodeKind::less, {std::move(x), std::move(y)}, {}, {});
}

Formula Formula::equal(std::string x, std::string y) {
  require_sort(x, Sort::element, "=");
  require_sort(y, Sort::element, "=");
  return make(NodeKind::equal, {std::move(x), std::move(y)}, {}, {});
}

Formula Formula::member(std::string x, std::string set) {
  require_sort(x, Sort::element, "in");
  require_sort(set, Sort::set, "in");
  return make(NodeKind::member, {std::move(x), std::move(set)}, {}, {});
}

Formula Formula::relation(std::string symbol, std::vector<std::string> args) {
  if (!is_identifier(symbol)) throw FormulaError("invalid relation name '" + symbol + "'");
  if (args.empty()) throw FormulaError("relation " + symbol + " applied to no arguments");
  for (const auto& a : args) require_sort(a, Sort::set, symbol.c_str());
  return make(NodeKind::relation, std::move(args), std::move(symbol), {});
}

Formula Formula::negation(Formula f) { return make(NodeKind::negation, {}, {}, {std::move(f)}); }

Formula Formula::conjunction(Formula a, Formula b) {
  return make(NodeKind::conjunction, {}, {}, {std::move(a), std::move(b)});
}

Formula Formula::disjunction(Formula a, Formula b) {
  return make(NodeKind::disjunction, {}, {}, {std::move(a), std::move(b)});
}

Formula Formula::implication(Formula a, Formula b) {
  return make(NodeKind::implication, {}, {}, {std::move(a), std::move(b)});
}

Formula Formula::equivalence(Formula a, Formula b) {
  return make(NodeKind::equivalence, {}, {}, {std::move(a), std::move(b)});
}

Formula Formula::exists(std::string var, Formula body) {
  if (!is_identifier(var)) throw FormulaError("invalid variable name '" + var + "'");
  auto kind = sort_of(var) == Sort::element ? NodeKind::exists_element : NodeKind::exists_set;
  return make(kind, {std::move(var)}, {}, {std::move(body)});
}

Formula Formula::forall(std::string var, Formula body) {
  if (!is_identifier(var)) throw FormulaError("invalid variable name '" + var + "'");
  auto kind = sort_of(var) == Sort::element ? NodeKind::forall_element : NodeKind::forall_set;
  return make(kind, {std::move(var)}, {}, {std::move(body)});
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.variables() != b.variables() || a.symbol() != b.symbol() ||
      a.children().size() != b.children().size())
    return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!(a.children()[i] == b.children()[i])) return false;
  return true;
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.size();
  return n;
}

Formula conjoin(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::top();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::conjunction(acc, parts[i]);
  return acc;
}

Formula disjoin(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::bottom();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::disjunction(acc, parts[i]);
  return acc;
}

namespace {

void collect_free(const Formula& f, std::multiset<std::string>& bound, FreeVariables& out) {
  auto note = [&](const std::string& v) {
    if (bound.count(v) != 0) return;
    (sort_of(v) == Sort::element ? out.elements : out.sets).insert(v);
  };
  switch (f.kind()) {
    case NodeKind::truth:
    case NodeKind::falsity:
      return;
    case NodeKind::less:
    case NodeKind::equal:
    case NodeKind::member:
    case NodeKind::relation:
      for (const auto& v : f.variables()) note(v);
      return;
    default:
      break;
  }
  if (is_quantifier(f.kind())) {
    auto it = bound.insert(f.bound_variable());
    collect_free(f.child(), bound, out);
    bound.erase(it);
    return;
  }
  for (const auto& c : f.children()) collect_free(c, bound, out);
}

void collect_all(const Formula& f, std::set<std::string>& out) {
  for (const auto& v : f.variables()) out.insert(v);
  for (const auto& c : f.children()) collect_all(c, out);
}

}  // namespace

FreeVariables free_variables(const Formula& f) {
  FreeVariables out;
  std::multiset<std::string> bound;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> all_variables(const Formula& f) {
  std::set<std::string> out;
  collect_all(f, out);
  return out;
}

std::vector<RelationSymbol> relation_symbols(const Formula& f) {
  std::vector<RelationSymbol> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind() == NodeKind::relation) {
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const RelationSymbol& s) { return s.name == g.symbol(); });
      if (it == out.end()) {
        out.push_back({g.symbol(), g.variables().size(), true});
      } else if (it->arity != g.variables().size()) {
        throw FormulaError("relation " + g.symbol() + " used with inconsistent arities");
      }
    }
    for (const auto& c : g.children()) walk(c);
  };
  walk(f);
  return out;
}

namespace {

// Maps each bound name to the depth of its binder; free names compare by name.
using Scope = std::vector<std::pair<std::string, std::string>>;

bool alpha_eq(const Formula& a, const Formula& b, Scope& scope) {
  if (a.kind() != b.kind() || a.symbol() != b.symbol() ||
      a.variables().size() != b.variables().size() ||
      a.children().size() != b.children().size())
    return false;
  if (is_quantifier(a.kind())) {
    scope.emplace_back(a.bound_variable(), b.bound_variable());
    bool ok = alpha_eq(a.child(), b.child(), scope);
    scope.pop_back();
    return ok;
  }
  for (std::size_t i = 0; i < a.variables().size(); ++i) {
    const auto& va = a.variables()[i];
    const auto& vb = b.variables()[i];
    // innermost binder for each name
    int ia = -1, ib = -1;
    for (int k = static_cast<int>(scope.size()) - 1; k >= 0; --k) {
      if (ia < 0 && scope[k].first == va) ia = k;
      if (ib < 0 && scope[k].second == vb) ib = k;
    }
    if (ia != ib) return false;
    if (ia < 0 && va != vb) return false;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!alpha_eq(a.children()[i], b.children()[i], scope)) return false;
  return true;
}

}  // namespace

bool alpha_equivalent(const Formula& a, const Formula& b) {
  Scope scope;
  return alpha_eq(a, b, scope);
}

void check_well_formed(const Formula& f, const Signature& sig) {
  if (f.kind() == NodeKind::relation) {
    const auto* s = sig.find(f.symbol());
    if (s == nullptr) throw FormulaError("unknown relation symbol " + f.symbol());
    if (s->arity != f.variables().size()) {
      throw FormulaError("relation " + f.symbol() + " expects " + std::to_string(s->arity) +
                         " arguments, got " + std::to_string(f.variables().size()));
    }
  }
  for (const auto& c : f.children()) check_well_formed(c, sig);
}

namespace {

Formula relativize_rec(const Formula& f, const std::string& domain, NameSupply& names) {
  switch (f.kind()) {
    case NodeKind::exists_element:
      return Formula::exists(
          f.bound_variable(),
          Formula::conjunction(Formula::member(f.bound_variable(), domain),
                               relativize_rec(f.child(), domain, names)));
    case NodeKind::forall_element:
      return Formula::forall(
          f.bound_variable(),
          Formula::implication(Formula::member(f.bound_variable(), domain),
                               relativize_rec(f.child(), domain, names)));
    case NodeKind::exists_set:
      return Formula::exists(
          f.bound_variable(),
          Formula::conjunction(subset(f.bound_variable(), domain, names),
                               relativize_rec(f.child(), domain, names)));
    case NodeKind::forall_set:
      return Formula::forall(
          f.bound_variable(),
          Formula::implication(subset(f.bound_variable(), domain, names),
                               relativize_rec(f.child(), domain, names)));
    case NodeKind::negation:
      return Formula::negation(relativize_rec(f.child(), domain, names));
    case NodeKind::conjunction:
      return Formula::conjunction(relativize_rec(f.child(0), domain, names),
                                  relativize_rec(f.child(1), domain, names));
    case NodeKind::disjunction:
      return Formula::disjunction(relativize_rec(f.child(0), domain, names),
                                  relativize_rec(f.child(1), domain, names));
    case NodeKind::implication:
      return Formula::implication(relativize_rec(f.child(0), domain, names),
                                  relativize_rec(f.child(1), domain, names));
    case NodeKind::equivalence:
      return Formula::equivalence(relativize_rec(f.child(0), domain, names),
                                  relativize_rec(f.child(1), domain, names));
    default:
      return f;
  }
}

}  // namespace

Formula relativize(const Formula& f, const std::string& domain) {
  if (!is_identifier(domain) || sort_of(domain) != Sort::set)
    throw FormulaError("relativization domain must be a set variable, got '" + domain + "'");
  if (free_variables(f).sets.count(domain) != 0)
    throw FormulaError("cannot relativize to " + domain + ": it is free in the formula");
  if (all_variables(f).count(domain) != 0)
    throw FormulaError("cannot relativize to " + domain + ": it is bound in the formula");
  NameSupply names;
  names.reserve_all(f);
  names.reserve(domain);
  return relativize_rec(f, domain, names);
}

Formula replace_relation(const Formula& f, const std::string& symbol,
                         const std::function<Formula(const std::vector<std::string>&)>& replace) {
  switch (f.kind()) {
    case NodeKind::relation:
      return f.symbol() == symbol ? replace(f.variables()) : f;
    case NodeKind::negation:
      return Formula::negation(replace_relation(f.child(), symbol, replace));
    case NodeKind::conjunction:
      return Formula::conjunction(replace_relation(f.child(0), symbol, replace),
                                  replace_relation(f.child(1), symbol, replace));
    case NodeKind::disjunction:
      return Formula::disjunction(replace_relation(f.child(0), symbol, replace),
                                  replace_relation(f.child(1), symbol, replace));
    case NodeKind::implication:
      return Formula::implication(replace_relation(f.child(0), symbol, replace),
                                  replace_relation(f.child(1), symbol, replace));
    case NodeKind::equivalence:
      return Formula::equivalence(replace_relation(f.child(0), symbol, replace),
                                  replace_relation(f.child(1), symbol, replace));
    case NodeKind::exists_element:
    case NodeKind::exists_set:
      return Formula::exists(f.bound_variable(), replace_relation(f.child(), symbol, replace));
    case NodeKind::forall_element:
    case NodeKind::forall_set:
      return Formula::forall(f.bound_variable(), replace_relation(f.child(), symbol, replace));
    default:
      return f;
  }
}

void NameSupply::reserve_all(const Formula& f) {
  for (const auto& v : all_variables(f)) used_.insert(v);
}

std::string NameSupply::fresh(const std::string& base) {
  if (used_.insert(base).second) return base;
  for (std::size_t i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (used_.insert(candidate).second) return candidate;
  }
}

// ---------------------------------------------------------------- printing

namespace {

const char* binary_token(NodeKind kind) {
  switch (kind) {
    case NodeKind::conjunction:
      return " & ";
    case NodeKind::disjunction:
      return " | ";
    case NodeKind::implication:
      return " -> ";
    default:
      return " <-> ";
  }
}

const char* quantifier_token(NodeKind kind) {
  switch (kind) {
    case NodeKind::exists_element:
      return "ex1 ";
    case NodeKind::forall_element:
      return "all1 ";
    case NodeKind::exists_set:
      return "ex2 ";
    default:
      return "all2 ";
  }
}

// `open_right`: more tokens of the same group follow, so a quantifier whose
// body would swallow them must be parenthesized.
void print_rec(const Formula& f, bool open_right, std::ostream& os) {
  const auto& v = f.variables();
  switch (f.kind()) {
    case NodeKind::truth:
      os << "true";
      return;
    case NodeKind::falsity:
      os << "false";
      return;
    case NodeKind::less:
      os << v[0] << " < " << v[1];
      return;
    case NodeKind::equal:
      os << v[0] << " = " << v[1];
      return;
    case NodeKind::member:
      os << v[0] << " in " << v[1];
      return;
    case NodeKind::relation:
      os << f.symbol() << '(';
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
      os << ')';
      return;
    case NodeKind::negation: {
      os << '~';
      const auto& c = f.child();
      bool atomic_child = c.kind() == NodeKind::negation || c.kind() == NodeKind::relation ||
                          c.kind() == NodeKind::truth || c.kind() == NodeKind::falsity ||
                          is_binary(c.kind()) || is_quantifier(c.kind());
      if (atomic_child) {
        print_rec(c, open_right, os);
      } else {
        os << '(';
        print_rec(c, false, os);
        os << ')';
      }
      return;
    }
    default:
      break;
  }
  if (is_binary(f.kind())) {
    os << '(';
    print_rec(f.child(0), true, os);
    os << binary_token(f.kind());
    print_rec(f.child(1), false, os);
    os << ')';
    return;
  }
  if (open_right) os << '(';
  os << quantifier_token(f.kind()) << f.bound_variable() << ". ";
  print_rec(f.child(), false, os);
  if (open_right) os << ')';
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::ostringstream os;
  print_rec(f, false, os);
  return os.str();
}

}  // namespace msocard
