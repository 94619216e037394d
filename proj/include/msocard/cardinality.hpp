#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "msocard/automata.hpp"

namespace msocard {

using Nat = std::uint64_t;
using Point = std::vector<Nat>;

/// Ultimately periodic subset of ℕ: below `threshold` membership is the
/// explicit finite part, from it on x ∈ S iff (x mod period) ∈ residues.
/// Always kept in normal form (minimal period, then minimal threshold).
class UpSet {
 public:
  UpSet(Nat threshold, Nat period, std::set<Nat> finite_part, std::set<Nat> residues);

  static UpSet empty();
  static UpSet all();
  static UpSet finite(const std::set<Nat>& elements);
  static UpSet at_least(Nat k);
  static UpSet modulo(Nat period, Nat residue);
  /// Normal form of the set whose membership on [0, threshold + period)
  /// is `member` and which has period `period` from `threshold` on.
  static UpSet from_pattern(Nat threshold, Nat period, const std::function<bool(Nat)>& member);

  bool contains(Nat x) const;
  Nat threshold() const { return threshold_; }
  Nat period() const { return period_; }
  const std::set<Nat>& finite_part() const { return finite_; }
  const std::set<Nat>& residues() const { return residues_; }
  bool is_empty() const { return finite_.empty() && residues_.empty(); }

  std::string to_string() const;
  friend bool operator==(const UpSet&, const UpSet&) = default;
  friend auto operator<=>(const UpSet&, const UpSet&) = default;

 private:
  UpSet() = default;

  Nat threshold_ = 0;
  Nat period_ = 1;
  std::set<Nat> finite_;
  std::set<Nat> residues_;
};

bool up_member(const UpSet& u, Nat x);

/// Finite union of products E₁ × ⋯ × Eₙ of UP sets.
class RecognizableRel {
 public:
  using Term = std::vector<UpSet>;

  explicit RecognizableRel(std::size_t arity, std::vector<Term> terms = {});

  std::size_t arity() const { return arity_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool contains(const Point& x) const;
  /// Largest threshold and lcm of all periods.
  Nat max_threshold() const;
  Nat period_lcm() const;
  std::string to_string() const;

  friend bool operator==(const RecognizableRel&, const RecognizableRel&) = default;

 private:
  std::size_t arity_;
  std::vector<Term> terms_;
};

/// A cardinality relation given by its image I(R) ⊆ ℕⁿ, trusted on [0,bound]ⁿ.
struct CardOracle {
  std::string name;
  std::size_t arity = 1;
  std::function<bool(const Point&)> predicate;
  Nat bound = 256;
  /// Set when the relation is known to be recognizable.
  std::optional<RecognizableRel> structure;

  bool operator()(const Point& x) const { return predicate(x); }
};

bool is_prime(Nat x);
bool is_power_of(Nat x, Nat k);
bool is_square(Nat x);

CardOracle up_oracle(const UpSet& u, Nat bound = 256);
CardOracle recognizable_oracle(const RecognizableRel& r, Nat bound = 256);
CardOracle pow_oracle(Nat k, Nat bound = 256);
CardOracle primes_oracle(Nat bound = 256);
CardOracle squares_oracle(Nat bound = 256);
CardOracle eqcard_oracle(Nat bound = 256);
/// |X₁|+⋯+|X_r| < |Y₁|+⋯+|Y_s|
CardOracle sumless_oracle(std::size_t r, std::size_t s, Nat bound = 256);
/// {0,…,k}
CardOracle le_oracle(Nat k, Nat bound = 256);
CardOracle finite_oracle(const std::set<Nat>& elements, Nat bound = 256);
/// a × b, arities adding up.
CardOracle product_oracle(const CardOracle& a, const CardOracle& b);

/// Parses `up:M,p,r1|r2[,f1|f2]`, `pow:k`, `primes`, `squares`, `eqcard`,
/// `sumless:r,s`, `le:k`, `fin:a|b|c`, products `A x:B`, each with an
/// optional `@B` reliability bound.
CardOracle parse_oracle(const std::string& spec);
std::string oracle_grammar();

/// Fixes coordinate i (1-based) to C.
CardOracle section(const CardOracle& o, std::size_t i, Nat c);
RecognizableRel section(const RecognizableRel& r, std::size_t i, Nat c);

/// Automaton of the cardinality relation C(r) over the given labels
/// (default X1, …, Xn).
Dfa rel_to_dfa(const RecognizableRel& r, std::vector<std::string> labels = {});
std::vector<std::string> default_labels(std::size_t n);

/// Reads I(R) off the block words a₁^x₁⋯aₙ^xₙ. With `verify`, checks that
/// rel_to_dfa of the result is equivalent to `a` and throws otherwise.
RecognizableRel decompose(const Dfa& a, bool verify = true);

struct InvarianceCounterexample {
  Word accepted;
  Word rejected;
  Point counts;
};

/// Checks that acceptance of canonical words of length ≤ max_length only
/// depends on the number of 1s per track.
std::optional<InvarianceCounterexample> card_invariance_check(const Dfa& a,
                                                              std::size_t max_length);

struct StrupMu {
  Nat m = 0;
  std::vector<Nat> periods;

  std::string to_string() const;
  friend bool operator==(const StrupMu&, const StrupMu&) = default;
};

struct StrupWitness {
  Point point;
  std::size_t coordinate = 1;  // 1-based
  StrupMu mu;
  bool point_in_relation = false;

  std::string to_string() const;
};

/// Exhaustive μ-STRUP check on [m,bound]ⁿ. Requires bound + max p ≤ o.bound.
std::optional<StrupWitness> check_mu_strup(const CardOracle& o, const StrupMu& mu, Nat bound);
/// Exact check on a fundamental domain.
std::optional<StrupWitness> check_mu_strup(const RecognizableRel& r, const StrupMu& mu);

struct StrupSearchEntry {
  StrupMu mu;
  std::optional<StrupWitness> witness;  // empty: none found within the oracle bound
};

/// Searches a witness against every μ with m ≤ S and 1 ≤ pᵢ ≤ S.
std::vector<StrupSearchEntry> find_strup_violation(const CardOracle& o, Nat search);

/// Some μ whose check succeeds for r (exists by recognizability).
StrupMu strup_parameters(const RecognizableRel& r);

enum class Verdict { definable, not_definable, inconclusive, not_a_cardinality_relation };
std::string verdict_name(Verdict v);

struct AnalysisOptions {
  Nat section_cutoff = 16;
  Nat strup_search = 8;
  std::size_t invariance_length = 8;
};

struct DefinabilityReport {
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> lines;
  std::optional<RecognizableRel> decomposition;
  std::optional<Dfa> automaton;
  std::optional<StrupWitness> witness;
  std::optional<InvarianceCounterexample> counterexample;
};

DefinabilityReport analyze_definability(const RecognizableRel& r);
DefinabilityReport analyze_definability(const CardOracle& o, const AnalysisOptions& opts = {});
/// For the automaton of a {<}-definable relation.
DefinabilityReport analyze_definability(const Dfa& a, const AnalysisOptions& opts = {});

}  // namespace msocard
