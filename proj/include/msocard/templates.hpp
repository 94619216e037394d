#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "msocard/formula.hpp"

namespace msocard {

// Set-level notation, expanded into membership atoms and element
// quantifiers. Bound helper variables come from `names`.

Formula subset(const std::string& a, const std::string& b, NameSupply& names);
Formula strict_subset(const std::string& a, const std::string& b, NameSupply& names);
Formula set_equal(const std::string& a, const std::string& b, NameSupply& names);
/// U = A ∪ B. Operands are ordered by name, union being commutative.
Formula union_is(const std::string& u, const std::string& a, const std::string& b,
                 NameSupply& names);
Formula intersection_is(const std::string& u, const std::string& a, const std::string& b,
                        NameSupply& names);
Formula disjoint(const std::string& a, const std::string& b, NameSupply& names);
/// Z ∩ (X ∪ Y) = ∅
Formula disjoint_from_union(const std::string& z, const std::string& x, const std::string& y,
                            NameSupply& names);
Formula nonempty(const std::string& a, NameSupply& names);
/// X = X1 ⊎ ... ⊎ Xk
Formula partition(const std::string& whole, const std::vector<std::string>& parts,
                  NameSupply& names);

/// Argument of a relation atom: a variable, or the union of two variables.
struct SetTerm {
  std::string first;
  std::optional<std::string> second;

  SetTerm(std::string v) : first(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  SetTerm(std::string a, std::string b) : first(std::move(a)), second(std::move(b)) {}
};

/// R(t1,...,tn) where union terms become ∃U (U = A ∪ B ∧ R(...,U,...)).
Formula relation_on(const std::string& symbol, const std::vector<SetTerm>& args,
                    NameSupply& names);

// Auxiliary {<}-definable relations.

Formula card_equals(std::size_t k, const std::string& set, NameSupply& names);  // |X| = k
Formula card_less(std::size_t k, const std::string& set, NameSupply& names);    // |X| < k
Formula interval(const std::string& x, const std::string& y, const std::string& set,
                 NameSupply& names);  // X = [min(x,y), max(x,y)]
Formula consecutive(const std::string& x, const std::string& y, const std::string& set,
                    NameSupply& names);  // x < y adjacent elements of Z
Formula even_card(const std::string& set, NameSupply& names);
Formula is_zero(const std::string& x, NameSupply& names);
Formula less_equal(const std::string& x, const std::string& y);

// Constructions over a cardinality relation symbol.

/// ∀Z (Z ∩ (X ∪ Y) = ∅ → (R(X ∪ Z) ↔ R(Y ∪ Z))), R unary.
Formula f_formula(const std::string& symbol, const std::string& x, const std::string& y,
                  NameSupply& names);
/// The n-ary generalisation of f_formula.
Formula ff_formula(std::size_t arity, const std::string& symbol, const std::string& x,
                   const std::string& y, NameSupply& names);
/// FF(X,Y) ∧ ¬∃X' (X' ⊊ X ∧ FF(X',Y)) ∧ ¬∃Y' (Y' ⊊ Y ∧ FF(X,Y')).
Formula quasi_eq(std::size_t arity, const std::string& symbol, const std::string& x,
                 const std::string& y, NameSupply& names);
Formula fstrup(std::size_t arity, const std::string& symbol, const std::string& y,
               const std::vector<std::string>& periods, NameSupply& names);
/// Sentence over one n-ary symbol that holds in (ℕ,<,R) for a cardinality
/// relation R iff R is {<}-definable.
Formula psi(std::size_t arity, const std::string& symbol);

Formula plus_def(const std::string& x, const std::string& y, const std::string& z,
                 const std::string& eqcard, NameSupply& names);
Formula times_def(const std::string& x, const std::string& y, const std::string& z,
                  const std::string& eqcard, NameSupply& names);

Formula good_init_seg(const std::string& set, std::size_t arity, const std::string& symbol,
                      NameSupply& names);
/// ∃S (GoodInitSeg(S) ∧ G*) for a {<,EqCard}-sentence G.
Formula theta(const Formula& g, std::size_t arity, const std::string& symbol,
              const std::string& eqcard = "EqCard");

/// |X|=|Y| from 8-way splits into quasi-equicardinal parts (R unary).
Formula eqcard_pow2(const std::string& x, const std::string& y, const std::string& symbol,
                    NameSupply& names);
/// The sum-of-at-most-7-primes formula on parts (R unary).
Formula primes_h(const std::string& x, const std::string& y, const std::string& symbol,
                 NameSupply& names);
/// |X|=|Y| from 4-way splits into H-related parts (R unary).
Formula eqcard_primes(const std::string& x, const std::string& y, const std::string& symbol,
                      NameSupply& names);

inline constexpr std::size_t kPow2SplitParts = 8;
inline constexpr std::size_t kPrimeSummands = 7;
inline constexpr std::size_t kPrimesSplitParts = 4;

// Named constructions with their parameters, as exposed on the command line.

enum class TemplateKind {
  interval,
  consec,
  card,
  cardless,
  union_of,
  intersection_of,
  even_card,
  f,
  ff,
  quasi_eq,
  fstrup,
  psi,
  plus_def,
  times_def,
  good_init_seg,
  theta,
  eqcard_pow2,
  eqcard_primes,
  primes_h,
};

struct FormulaTemplate {
  TemplateKind kind = TemplateKind::quasi_eq;
  std::size_t n = 1;              // relation arity
  std::size_t k = 0;              // CARD_k / CARDLESS_k
  std::string symbol = "R";       // cardinality relation symbol
  std::string eqcard = "EqCard";  // symbol replaced in Theta / used by Plus/Times
  std::optional<Formula> sentence;  // G for Theta
};

std::optional<TemplateKind> template_kind_from_name(std::string_view name);
std::string template_name(TemplateKind kind);
std::vector<std::string> template_names();

/// Instantiates a template with conventional free variable names
/// (X, Y for binary set relations; x, y, z for arithmetic).
Formula build_template(const FormulaTemplate& t);
/// Signature the built formula is written over.
Signature template_signature(const FormulaTemplate& t);

}  // namespace msocard
