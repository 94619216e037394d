#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "msocard/automata.hpp"
#include "msocard/cardinality.hpp"
#include "msocard/compiler.hpp"
#include "msocard/formula.hpp"
#include "msocard/templates.hpp"

namespace testkit {

using namespace msocard;

inline Formula parse(const std::string& text, const Signature& sig = {}) {
  return parse_formula(text, sig);
}

// Defining formulas of the three introductory relations.
inline Formula r1_formula() {
  return parse("(ex1 x. x in X) & all1 x. all1 y. (y < x & x in X) -> y in X");
}
inline Formula even_card_of(const std::string& set) {
  NameSupply names({set});
  return even_card(set, names);
}
inline Formula r2_formula() { return even_card_of("X"); }
inline Formula r3_formula() {
  return Formula::equivalence(even_card_of("X"), even_card_of("Y"));
}

// Hand-written fixtures.
inline Dfa ones_plus_fixture() {
  return dfa_from_text(
      "dfa tracks=1 labels=X states=3 initial=0\n"
      "accepting: 1\n"
      "0 0 2\n0 1 1\n1 0 2\n1 1 1\n2 0 2\n2 1 2\n");
}
inline Dfa even_ones_fixture() {
  // 0: even count and canonical so far, 1: even ending in 0, 2: odd.
  return dfa_from_text(
      "dfa tracks=1 labels=X states=3 initial=0\n"
      "accepting: 0\n"
      "0 0 1\n0 1 2\n1 0 1\n1 1 2\n2 0 2\n2 1 0\n");
}
inline Dfa parity_match_fixture() {
  // 0: parities agree and canonical, 1: agree ending in 00, 2: disagree.
  return dfa_from_text(
      "dfa tracks=2 labels=X,Y states=3 initial=0\n"
      "accepting: 0\n"
      "0 00 1\n0 01 2\n0 10 2\n0 11 0\n"
      "1 00 1\n1 01 2\n1 10 2\n1 11 0\n"
      "2 00 2\n2 01 0\n2 10 0\n2 11 2\n");
}

/// Number of 1s on each track.
inline Point counts(const Word& w, std::size_t tracks) {
  Point c(tracks, 0);
  for (Letter a : w)
    for (std::size_t j = 0; j < tracks; ++j) c[j] += (a >> j) & 1U;
  return c;
}

/// Random {<}-formulas over set variables X, Y and element variables x, y, z.
/// At most two set variable names occur, and quantifier depth is bounded.
class FormulaGenerator {
 public:
  explicit FormulaGenerator(std::uint64_t seed) : rng_(seed) {}

  Formula operator()(int quantifier_depth, int size) {
    std::vector<std::string> scope;
    return gen(quantifier_depth, size, scope);
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string set_var() { return pick(2) == 0 ? "X" : "Y"; }

  Formula atom(const std::vector<std::string>& scope) {
    if (scope.empty()) {
      NameSupply names({"X", "Y", "x", "y", "z"});
      switch (pick(4)) {
        case 0:
          return set_equal(set_var(), set_var(), names);
        case 1:
          return subset(set_var(), set_var(), names);
        case 2:
          return Formula::top();
        default:
          return Formula::bottom();
      }
    }
    const std::string& a = scope[static_cast<std::size_t>(pick(static_cast<int>(scope.size())))];
    const std::string& b = scope[static_cast<std::size_t>(pick(static_cast<int>(scope.size())))];
    switch (pick(3)) {
      case 0:
        return Formula::less(a, b);
      case 1:
        return Formula::equal(a, b);
      default:
        return Formula::member(a, set_var());
    }
  }

  Formula gen(int qd, int size, std::vector<std::string>& scope) {
    if (size <= 1) return atom(scope);
    int choice = pick(qd > 0 ? 8 : 5);
    switch (choice) {
      case 0:
        return Formula::negation(gen(qd, size - 1, scope));
      case 1:
      case 2:
      case 3:
      case 4: {
        int left = 1 + pick(std::max(1, size - 2));
        Formula a = gen(qd, left, scope);
        Formula b = gen(qd, std::max(1, size - 1 - left), scope);
        switch (choice) {
          case 1:
            return Formula::conjunction(a, b);
          case 2:
            return Formula::disjunction(a, b);
          case 3:
            return Formula::implication(a, b);
          default:
            return Formula::equivalence(a, b);
        }
      }
      case 5:
      case 6: {
        static const char* names[] = {"x", "y", "z"};
        std::string v = names[pick(3)];
        scope.push_back(v);
        Formula body = gen(qd - 1, size - 1, scope);
        scope.pop_back();
        return pick(2) == 0 ? Formula::exists(v, body) : Formula::forall(v, body);
      }
      default: {
        std::string v = set_var();
        Formula body = gen(qd - 1, size - 1, scope);
        return pick(2) == 0 ? Formula::exists(v, body) : Formula::forall(v, body);
      }
    }
  }

  std::mt19937_64 rng_;
};

inline UpSet random_upset(std::mt19937_64& rng, Nat max_threshold, Nat max_period) {
  auto pick = [&](Nat lo, Nat hi) { return std::uniform_int_distribution<Nat>(lo, hi)(rng); };
  Nat m = pick(0, max_threshold);
  Nat p = pick(1, max_period);
  std::set<Nat> fin, res;
  for (Nat i = 0; i < m; ++i)
    if (pick(0, 1)) fin.insert(i);
  for (Nat r = 0; r < p; ++r)
    if (pick(0, 1)) res.insert(r);
  return UpSet(m, p, fin, res);
}

inline RecognizableRel random_rel(std::mt19937_64& rng, std::size_t arity, std::size_t terms,
                                  Nat max_threshold, Nat max_period) {
  std::vector<RecognizableRel::Term> ts;
  for (std::size_t t = 0; t < terms; ++t) {
    RecognizableRel::Term term;
    for (std::size_t j = 0; j < arity; ++j) term.push_back(random_upset(rng, max_threshold, max_period));
    ts.push_back(term);
  }
  return RecognizableRel(arity, ts);
}

}  // namespace testkit
