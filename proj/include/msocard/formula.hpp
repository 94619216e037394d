#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace msocard {

/// Variables are sorted by the case of their first letter: lowercase names
/// denote elements, uppercase names denote finite sets.
enum class Sort { element, set };

Sort sort_of(std::string_view name);
bool is_identifier(std::string_view name);

struct RelationSymbol {
  std::string name;
  std::size_t arity = 1;
  bool set_arguments_only = true;
};

class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<RelationSymbol> symbols);

  void add(RelationSymbol symbol);
  const RelationSymbol* find(std::string_view name) const;
  const std::vector<RelationSymbol>& symbols() const { return symbols_; }

 private:
  std::vector<RelationSymbol> symbols_;
};

enum class NodeKind {
  truth,
  falsity,
  less,         // x < y
  equal,        // x = y
  member,       // x in X
  relation,     // R(X1,...,Xn)
  negation,
  conjunction,
  disjunction,
  implication,
  equivalence,
  exists_element,
  forall_element,
  exists_set,
  forall_set,
};

bool is_quantifier(NodeKind kind);
bool is_binary(NodeKind kind);

/// Immutable MSO formula. Copies share structure.
class Formula {
 public:
  /// The constant `true`.
  Formula();

  static Formula top();
  static Formula bottom();
  static Formula less(std::string x, std::string y);
  static Formula equal(std::string x, std::string y);
  static Formula member(std::string x, std::string set);
  static Formula relation(std::string symbol, std::vector<std::string> args);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula equivalence(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  NodeKind kind() const { return node_->kind; }
  /// Atom operands, or the bound variable of a quantifier.
  const std::vector<std::string>& variables() const { return node_->variables; }
  const std::string& bound_variable() const { return node_->variables.front(); }
  const std::string& symbol() const { return node_->symbol; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children[i]; }

  /// Structural equality (bound names matter).
  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  std::size_t size() const;

 private:
  struct Node {
    NodeKind kind;
    std::vector<std::string> variables;
    std::string symbol;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(NodeKind kind, std::vector<std::string> vars, std::string symbol,
                      std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

Formula conjoin(const std::vector<Formula>& parts);  // empty -> true
Formula disjoin(const std::vector<Formula>& parts);  // empty -> false

struct FreeVariables {
  std::set<std::string> elements;
  std::set<std::string> sets;

  bool empty() const { return elements.empty() && sets.empty(); }
  friend bool operator==(const FreeVariables&, const FreeVariables&) = default;
};

FreeVariables free_variables(const Formula& f);
/// Every variable name occurring in f, free or bound.
std::set<std::string> all_variables(const Formula& f);
/// Every relation symbol used in f with the arity of its occurrences.
std::vector<RelationSymbol> relation_symbols(const Formula& f);

bool alpha_equivalent(const Formula& a, const Formula& b);

/// Checks arities against `sig` and that atoms use correctly sorted
/// variables. Throws FormulaError.
void check_well_formed(const Formula& f, const Signature& sig);

Formula parse_formula(std::string_view text, const Signature& sig);
std::string print_formula(const Formula& f);

/// Bounds every quantifier of f to the set variable `domain`:
/// ∃x φ becomes ∃x (x in D & φ), ∀Y φ becomes ∀Y (Y sub D -> φ).
Formula relativize(const Formula& f, const std::string& domain);

/// Replaces every atom `symbol(T1,...,Tn)` by `replace(T1,...,Tn)`. The
/// caller guarantees the replacement does not capture variables.
Formula replace_relation(const Formula& f, const std::string& symbol,
                         const std::function<Formula(const std::vector<std::string>&)>& replace);

/// Produces names that avoid a reserved set, deterministically.
class NameSupply {
 public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> reserved) : used_(std::move(reserved)) {}

  void reserve(const std::string& name) { used_.insert(name); }
  void reserve_all(const Formula& f);
  /// `base` if unused, otherwise base_1, base_2, ...
  std::string fresh(const std::string& base);

 private:
  std::set<std::string> used_;
};

}  // namespace msocard
