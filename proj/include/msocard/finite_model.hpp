#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "msocard/cardinality.hpp"
#include "msocard/formula.hpp"

namespace msocard {

/// Subset of [0,q) as a bit mask.
using Mask = std::uint64_t;
inline constexpr std::size_t kMaxDomain = 62;

/// M_q = ([0,q), <, R₁, …) with every Rᵢ read through its cardinality image.
struct FiniteModel {
  std::size_t q = 1;
  std::map<std::string, CardOracle> relations;

  /// Throws unless 1 ≤ q ≤ kMaxDomain and every oracle is reliable up to q.
  void validate() const;
};

struct Assignment {
  std::map<std::string, std::size_t> elements;
  std::map<std::string, Mask> sets;
};

struct EvalOptions {
  bool memoize = true;
  /// Largest memo table per quantifier node, in entries.
  std::size_t memo_entries = std::size_t{1} << 25;
  /// Total memo budget per evaluator, in bytes.
  std::size_t memo_budget = std::size_t{1} << 29;
};

/// Reusable evaluator of one formula in one model. Subformula values are
/// memoized on the values of their free variables.
class Evaluator {
 public:
  Evaluator(const Formula& f, const FiniteModel& m, EvalOptions opts = {});
  ~Evaluator();
  Evaluator(Evaluator&&) noexcept;
  Evaluator& operator=(Evaluator&&) noexcept;

  /// Free variables in slot order: elements then sets, each sorted.
  const std::vector<std::string>& free_elements() const;
  const std::vector<std::string>& free_sets() const;

  bool operator()(const Assignment& a) const;
  /// Values listed in free_elements() then free_sets() order.
  bool evaluate(const std::vector<std::uint64_t>& values) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool eval(const Formula& f, const FiniteModel& m, const Assignment& a, const EvalOptions& opts = {});

/// All tuples of subsets satisfying f, in lexicographic mask order over
/// `order` (default: sorted free set variables).
std::vector<std::vector<Mask>> val_q(const Formula& f, const FiniteModel& m,
                                     std::vector<std::string> order = {});
/// All tuples of elements satisfying an f with only element variables free.
std::vector<std::vector<std::size_t>> graph_q(const Formula& f, const FiniteModel& m,
                                              std::vector<std::string> order = {});

struct IqResult {
  bool invariant = true;
  std::set<Point> image;
  /// Two tuples with equal cardinalities, the first satisfying f.
  std::optional<std::pair<std::vector<Mask>, std::vector<Mask>>> counterexample;
  std::vector<std::string> order;
};

IqResult i_q(const Formula& f, const FiniteModel& m, std::vector<std::string> order = {});

std::size_t popcount(Mask m);
std::string mask_to_string(Mask m);
/// Smallest realisation: X = [0,x), Y = [x−i, x−i+y).
std::pair<Mask, Mask> realize_profile(std::size_t x, std::size_t y, std::size_t i);

struct CardProfile {
  std::size_t x = 0;  // |X|
  std::size_t y = 0;  // |Y|
  std::size_t i = 0;  // |X ∩ Y|
  std::size_t q = 1;

  bool valid() const;
  std::string to_string() const;
};

enum class CardTemplate { f, ff, quasi_eq };

/// Truth of F / FF(n) / QuasiEq(n) at a cardinality profile, n = o.arity.
bool eval_card_fast(CardTemplate t, const CardOracle& o, const CardProfile& p);

/// Table-driven fast evaluation for a fixed oracle and domain size.
class FastCardEvaluator {
 public:
  FastCardEvaluator(const CardOracle& o, std::size_t q);

  std::size_t q() const { return q_; }
  bool ff(std::size_t x, std::size_t y, std::size_t i) const;
  bool quasi_eq(std::size_t x, std::size_t y, std::size_t i) const;
  /// φ true for every / some feasible intersection size.
  bool quasi_eq_robust(std::size_t x, std::size_t y) const;
  bool quasi_eq_some(std::size_t x, std::size_t y) const;

 private:
  std::size_t index(std::size_t x, std::size_t y, std::size_t i) const;
  bool ff_at(std::size_t x, std::size_t y, std::size_t i) const;

  CardOracle oracle_;
  std::size_t q_;
  std::vector<std::uint8_t> oracle_table_;
  mutable std::vector<std::int8_t> ff_;  // -1 unknown
  // prefix_x_[(a,b,t)]: number of true FF(a,b,·) for intersections ≤ t.
  mutable std::vector<std::int32_t> prefix_x_;
  mutable bool prefix_ready_ = false;
  void build_prefix() const;
};

enum class VerifyMode { fast, brute, both };

struct ReportLine {
  std::size_t q = 0;
  std::string check;
  bool ok = true;
  std::string witness;
  /// Witness sets: (X,Y) for soundness/completeness, (X,Y) holding then
  /// (X,Y) failing for invariance.
  std::vector<Mask> sets;

  std::string to_string() const;
};

struct QuasiReport {
  std::vector<ReportLine> lines;
  /// Least q from which completeness held up to the top of the range.
  std::optional<std::size_t> stabilized_from;
  /// 2k + max x_{p,i} when a witness exists for every p ≤ k.
  std::optional<Nat> constructive_q;
  bool premise_holds = true;
  std::vector<std::pair<Nat, StrupWitness>> premise_witnesses;
  bool invariant_everywhere = true;
  bool sound_everywhere = true;

  std::string to_string() const;
};

/// Audits φ = QuasiEq(n) per q. Completeness is only asked on sizes < k.
QuasiReport verify_quasi_eqcard(const CardOracle& o, std::size_t k, std::size_t q_min,
                                std::size_t q_max, VerifyMode mode = VerifyMode::fast);

enum class SplitVariant { pow2, primes };

/// Card-level check that EqCardPow2 / EqCardPrimes defines {(x,x) | x ≤ q} in M_q.
bool verify_eqcard_split(SplitVariant variant, const CardOracle& o, std::size_t q);

/// H(X,Y) bounds: true for every / some overlap of X and Y.
struct PrimesH {
  std::vector<std::vector<bool>> robust;
  std::vector<std::vector<bool>> some;
};
PrimesH primes_h_table(const FastCardEvaluator& fast, const CardOracle& o);

struct SatResult {
  std::optional<std::size_t> q;
  std::size_t tested = 0;
};

/// Least q ≤ q_max with M_q ⊨ f.
SatResult bounded_sat(const Formula& f, const std::map<std::string, CardOracle>& relations,
                      std::size_t q_max, const EvalOptions& opts = {});

}  // namespace msocard
