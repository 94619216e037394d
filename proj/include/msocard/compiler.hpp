#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "msocard/automata.hpp"
#include "msocard/cardinality.hpp"
#include "msocard/formula.hpp"

namespace msocard {

using NatSet = std::set<Nat>;

/// R(P1,...,Pn) := body, with body over {<} and free variables among P1..Pn.
struct OrderDefinition {
  std::vector<std::string> parameters;
  Formula body;
};

using SymbolTarget = std::variant<RecognizableRel, OrderDefinition, CardOracle>;

/// Interpretation of relation symbols for compilation.
class SymbolBinding {
 public:
  SymbolBinding() = default;

  void bind(const std::string& symbol, SymbolTarget target);
  const SymbolTarget* find(const std::string& symbol) const;
  std::size_t arity(const std::string& symbol) const;
  Signature signature() const;
  const std::map<std::string, SymbolTarget>& entries() const { return entries_; }

 private:
  std::map<std::string, SymbolTarget> entries_;
};

struct EncodedTuple {
  Word word;
  std::vector<std::string> labels;
};

/// c(X̄): letter i has bit j set iff i ∈ Xⱼ; ε for the empty tuple of sets.
EncodedTuple encode(const std::vector<NatSet>& sets, std::vector<std::string> labels = {});
/// Inverse of encode on canonical words.
std::vector<NatSet> decode(const Word& w, std::size_t tracks);
/// ∑_{i∈X} 2^i, for elements below 64.
std::uint64_t cod(const NatSet& x);

// Atom automata, over the sorted labels of their variables.
Dfa atom_less(const std::string& x, const std::string& y);
Dfa atom_equal(const std::string& x, const std::string& y);
Dfa atom_member(const std::string& x, const std::string& set);
/// Words whose track `label` holds exactly one 1.
Dfa singleton_track(const std::vector<std::string>& labels, const std::string& label);

/// Automaton of the relation defined by f; tracks are the sorted free
/// variables, first-order ones constrained to singletons.
Dfa compile(const Formula& f, const SymbolBinding& bind = {});
/// Truth of the sentence f in (ℕ,<) with the bound symbols.
bool decide_sentence(const Formula& f, const SymbolBinding& bind = {});

/// Definability analysis of the relation a formula defines over (ℕ,<).
DefinabilityReport analyze_definability(const Formula& f, const SymbolBinding& bind,
                                        const AnalysisOptions& opts = {});

}  // namespace msocard
