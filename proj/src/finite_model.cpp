#include "msocard/finite_model.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "msocard/error.hpp"
#include "msocard/templates.hpp"

namespace msocard {

void FiniteModel::validate() const {
  if (q < 1 || q > kMaxDomain)
    throw InvalidArgument("domain size q=" + std::to_string(q) + " outside [1," +
                          std::to_string(kMaxDomain) + "]");
  for (const auto& [name, o] : relations) {
    if (o.bound < q)
      throw InvalidArgument("oracle " + o.name + " for " + name + " is reliable only up to " +
                            std::to_string(o.bound) + " < q=" + std::to_string(q));
  }
}

std::size_t popcount(Mask m) { return static_cast<std::size_t>(std::popcount(m)); }

std::string mask_to_string(Mask m) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < 64; ++i) {
    if ((m >> i) & 1U) {
      s += (first ? "" : ",") + std::to_string(i);
      first = false;
    }
  }
  return s + "}";
}

namespace {

Mask low_bits(std::size_t n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

}  // namespace

std::pair<Mask, Mask> realize_profile(std::size_t x, std::size_t y, std::size_t i) {
  if (i > x || i > y) throw InvalidArgument("intersection larger than a set");
  Mask xs = low_bits(x);
  Mask ys = low_bits(y) << (x - i);
  return {xs, ys};
}

// ---------------------------------------------------------------------------
// Brute-force evaluator

struct Evaluator::Impl {
  struct Node {
    NodeKind kind;
    std::vector<int> slots;  // atom operands or relation arguments
    int relation = -1;
    std::vector<int> kids;
    int bound = -1;
    // Memo on the values of the free slots.
    std::vector<int> free;
    std::vector<std::uint64_t> strides;
    std::size_t memo_size = 0;
    mutable std::vector<std::int8_t> memo;
  };

  struct Relation {
    std::size_t arity;
    std::vector<std::uint8_t> table;  // over [0,q]^arity
  };

  std::size_t q = 1;
  EvalOptions opts;
  std::vector<Node> nodes;
  std::vector<bool> slot_is_set;
  std::vector<Relation> relations;
  std::vector<std::string> free_elements;
  std::vector<std::string> free_sets;
  std::size_t root = 0;
  mutable std::size_t allocated = 0;

  std::uint64_t domain(int slot) const {
    return slot_is_set[static_cast<std::size_t>(slot)] ? (std::uint64_t{1} << q) : q;
  }

  int new_slot(bool is_set) {
    slot_is_set.push_back(is_set);
    return static_cast<int>(slot_is_set.size() - 1);
  }

  int build(const Formula& f, std::map<std::string, std::vector<int>>& scope,
            std::map<std::string, int>& relation_index, const FiniteModel& m,
            std::set<int>& free_out) {
    Node n;
    n.kind = f.kind();
    auto lookup = [&](const std::string& v) {
      auto it = scope.find(v);
      if (it == scope.end() || it->second.empty()) throw FormulaError("unbound variable " + v);
      return it->second.back();
    };
    switch (f.kind()) {
      case NodeKind::truth:
      case NodeKind::falsity:
        break;
      case NodeKind::less:
      case NodeKind::equal:
      case NodeKind::member:
        for (const auto& v : f.variables()) {
          n.slots.push_back(lookup(v));
          free_out.insert(n.slots.back());
        }
        break;
      case NodeKind::relation: {
        auto it = relation_index.find(f.symbol());
        if (it == relation_index.end()) {
          auto o = m.relations.find(f.symbol());
          if (o == m.relations.end())
            throw FormulaError("relation symbol " + f.symbol() + " has no interpretation");
          Relation r;
          r.arity = o->second.arity;
          std::size_t size = 1;
          for (std::size_t k = 0; k < r.arity; ++k) size *= q + 1;
          r.table.resize(size);
          Point pt(r.arity, 0);
          for (std::size_t idx = 0; idx < size; ++idx) {
            std::size_t rest = idx;
            for (std::size_t k = 0; k < r.arity; ++k) {
              pt[k] = rest % (q + 1);
              rest /= q + 1;
            }
            r.table[idx] = o->second(pt) ? 1 : 0;
          }
          relations.push_back(std::move(r));
          it = relation_index.emplace(f.symbol(), static_cast<int>(relations.size() - 1)).first;
        }
        n.relation = it->second;
        if (f.variables().size() != relations[static_cast<std::size_t>(n.relation)].arity)
          throw FormulaError("relation " + f.symbol() + " used with the wrong arity");
        for (const auto& v : f.variables()) {
          n.slots.push_back(lookup(v));
          free_out.insert(n.slots.back());
        }
        break;
      }
      case NodeKind::exists_element:
      case NodeKind::forall_element:
      case NodeKind::exists_set:
      case NodeKind::forall_set: {
        const auto& v = f.bound_variable();
        n.bound = new_slot(sort_of(v) == Sort::set);
        scope[v].push_back(n.bound);
        std::set<int> inner;
        n.kids.push_back(build(f.child(), scope, relation_index, m, inner));
        scope[v].pop_back();
        inner.erase(n.bound);
        n.free.assign(inner.begin(), inner.end());
        free_out.insert(inner.begin(), inner.end());
        std::uint64_t size = 1;
        bool fits = true;
        for (int s : n.free) {
          n.strides.push_back(size);
          std::uint64_t d = domain(s);
          if (size > opts.memo_entries / d) {
            fits = false;
            break;
          }
          size *= d;
        }
        n.memo_size = (opts.memoize && fits) ? size : 0;
        break;
      }
      default:
        for (const auto& c : f.children())
          n.kids.push_back(build(c, scope, relation_index, m, free_out));
        break;
    }
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size() - 1);
  }

  bool quantified(const Node& n, std::vector<std::uint64_t>& vals) const {
    const std::uint64_t dom = domain(n.bound);
    const bool exists = n.kind == NodeKind::exists_element || n.kind == NodeKind::exists_set;
    const auto& body = nodes[static_cast<std::size_t>(n.kids[0])];
    const std::uint64_t saved = vals[static_cast<std::size_t>(n.bound)];
    bool result = !exists;
    for (std::uint64_t v = 0; v < dom; ++v) {
      vals[static_cast<std::size_t>(n.bound)] = v;
      if (run(body, vals) == exists) {
        result = exists;
        break;
      }
    }
    vals[static_cast<std::size_t>(n.bound)] = saved;
    return result;
  }

  bool run(const Node& n, std::vector<std::uint64_t>& vals) const {
    auto val = [&](int slot) { return vals[static_cast<std::size_t>(slot)]; };
    auto kid = [&](std::size_t i) -> const Node& {
      return nodes[static_cast<std::size_t>(n.kids[i])];
    };
    switch (n.kind) {
      case NodeKind::truth:
        return true;
      case NodeKind::falsity:
        return false;
      case NodeKind::less:
        return val(n.slots[0]) < val(n.slots[1]);
      case NodeKind::equal:
        return val(n.slots[0]) == val(n.slots[1]);
      case NodeKind::member:
        return (val(n.slots[1]) >> val(n.slots[0])) & 1U;
      case NodeKind::relation: {
        const auto& r = relations[static_cast<std::size_t>(n.relation)];
        std::size_t idx = 0;
        for (std::size_t k = r.arity; k-- > 0;)
          idx = idx * (q + 1) + popcount(val(n.slots[k]));
        return r.table[idx] != 0;
      }
      case NodeKind::negation:
        return !run(kid(0), vals);
      case NodeKind::conjunction:
        return run(kid(0), vals) && run(kid(1), vals);
      case NodeKind::disjunction:
        return run(kid(0), vals) || run(kid(1), vals);
      case NodeKind::implication:
        return !run(kid(0), vals) || run(kid(1), vals);
      case NodeKind::equivalence:
        return run(kid(0), vals) == run(kid(1), vals);
      default:
        break;
    }
    if (n.memo_size == 0) return quantified(n, vals);
    if (n.memo.empty()) {
      if (allocated + n.memo_size > opts.memo_budget) return quantified(n, vals);
      n.memo.assign(n.memo_size, -1);
      allocated += n.memo_size;
    }
    std::size_t key = 0;
    for (std::size_t k = 0; k < n.free.size(); ++k) key += val(n.free[k]) * n.strides[k];
    std::int8_t& cell = n.memo[key];
    if (cell < 0) cell = quantified(n, vals) ? 1 : 0;
    return cell != 0;
  }
};

Evaluator::Evaluator(const Formula& f, const FiniteModel& m, EvalOptions opts)
    : impl_(std::make_unique<Impl>()) {
  m.validate();
  impl_->q = m.q;
  impl_->opts = opts;
  auto fv = free_variables(f);
  std::map<std::string, std::vector<int>> scope;
  for (const auto& v : fv.elements) {
    impl_->free_elements.push_back(v);
    scope[v].push_back(impl_->new_slot(false));
  }
  for (const auto& v : fv.sets) {
    impl_->free_sets.push_back(v);
    scope[v].push_back(impl_->new_slot(true));
  }
  std::map<std::string, int> relation_index;
  std::set<int> free_out;
  impl_->root = static_cast<std::size_t>(impl_->build(f, scope, relation_index, m, free_out));
}

Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

const std::vector<std::string>& Evaluator::free_elements() const { return impl_->free_elements; }
const std::vector<std::string>& Evaluator::free_sets() const { return impl_->free_sets; }

bool Evaluator::evaluate(const std::vector<std::uint64_t>& values) const {
  const std::size_t nfree = impl_->free_elements.size() + impl_->free_sets.size();
  if (values.size() != nfree) throw InvalidArgument("wrong number of values for free variables");
  std::vector<std::uint64_t> vals(impl_->slot_is_set.size(), 0);
  const Mask universe = low_bits(impl_->q);
  for (std::size_t k = 0; k < nfree; ++k) {
    if (impl_->slot_is_set[k] ? (values[k] & ~universe) != 0 : values[k] >= impl_->q)
      throw InvalidArgument("assigned value outside the domain [0," + std::to_string(impl_->q) + ")");
    vals[k] = values[k];
  }
  return impl_->run(impl_->nodes[impl_->root], vals);
}

bool Evaluator::operator()(const Assignment& a) const {
  std::vector<std::uint64_t> values;
  for (const auto& v : impl_->free_elements) {
    auto it = a.elements.find(v);
    if (it == a.elements.end()) throw FormulaError("no value for free variable " + v);
    values.push_back(it->second);
  }
  for (const auto& v : impl_->free_sets) {
    auto it = a.sets.find(v);
    if (it == a.sets.end()) throw FormulaError("no value for free variable " + v);
    values.push_back(it->second);
  }
  return evaluate(values);
}

bool eval(const Formula& f, const FiniteModel& m, const Assignment& a, const EvalOptions& opts) {
  return Evaluator(f, m, opts)(a);
}

namespace {

/// Positions of `order` inside `names`; order must be a permutation of names.
std::vector<std::size_t> permutation(const std::vector<std::string>& names,
                                     const std::vector<std::string>& order) {
  if (order.size() != names.size())
    throw InvalidArgument("variable order must list every free variable exactly once");
  std::vector<std::size_t> pos;
  for (const auto& v : order) {
    auto it = std::find(names.begin(), names.end(), v);
    if (it == names.end()) throw InvalidArgument("variable " + v + " is not free in the formula");
    pos.push_back(static_cast<std::size_t>(it - names.begin()));
  }
  auto sorted = pos;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("variable order repeats a variable");
  return pos;
}

/// Calls visit(tuple, holds) for every tuple in lexicographic order.
template <typename Visit>
void enumerate_sets(const Evaluator& e, std::size_t q, const std::vector<std::string>& order,
                    Visit visit) {
  if (!e.free_elements().empty())
    throw InvalidArgument("expected only free set variables; " + e.free_elements().front() +
                          " is first-order");
  auto pos = permutation(e.free_sets(), order);
  const std::size_t n = order.size();
  if (n * q > 30) throw InvalidArgument("too many tuples to enumerate");
  const Mask limit = Mask{1} << q;
  std::vector<Mask> tuple(n, 0);
  std::vector<std::uint64_t> values(n, 0);
  for (;;) {
    for (std::size_t k = 0; k < n; ++k) values[pos[k]] = tuple[k];
    visit(tuple, e.evaluate(values));
    std::size_t k = n;
    while (k > 0 && tuple[k - 1] + 1 == limit) tuple[--k] = 0;
    if (k == 0) break;
    ++tuple[k - 1];
  }
}

}  // namespace

std::vector<std::vector<Mask>> val_q(const Formula& f, const FiniteModel& m,
                                     std::vector<std::string> order) {
  Evaluator e(f, m);
  if (order.empty()) order = e.free_sets();
  std::vector<std::vector<Mask>> out;
  enumerate_sets(e, m.q, order, [&](const std::vector<Mask>& t, bool holds) {
    if (holds) out.push_back(t);
  });
  return out;
}

std::vector<std::vector<std::size_t>> graph_q(const Formula& f, const FiniteModel& m,
                                              std::vector<std::string> order) {
  Evaluator e(f, m);
  if (!e.free_sets().empty())
    throw InvalidArgument("expected only free element variables; " + e.free_sets().front() +
                          " is second-order");
  if (order.empty()) order = e.free_elements();
  auto pos = permutation(e.free_elements(), order);
  const std::size_t n = order.size();
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> tuple(n, 0);
  std::vector<std::uint64_t> values(n, 0);
  for (;;) {
    for (std::size_t k = 0; k < n; ++k) values[pos[k]] = tuple[k];
    if (e.evaluate(values)) out.push_back(tuple);
    std::size_t k = n;
    while (k > 0 && tuple[k - 1] + 1 == m.q) tuple[--k] = 0;
    if (k == 0) break;
    ++tuple[k - 1];
  }
  return out;
}

IqResult i_q(const Formula& f, const FiniteModel& m, std::vector<std::string> order) {
  Evaluator e(f, m);
  if (order.empty()) order = e.free_sets();
  IqResult res;
  res.order = order;
  std::map<Point, std::pair<std::optional<std::vector<Mask>>, std::optional<std::vector<Mask>>>> seen;
  enumerate_sets(e, m.q, order, [&](const std::vector<Mask>& t, bool holds) {
    Point counts;
    for (Mask x : t) counts.push_back(popcount(x));
    auto& slot = seen[counts];
    auto& target = holds ? slot.first : slot.second;
    if (!target) target = t;
  });
  for (const auto& [counts, slot] : seen) {
    if (slot.first) res.image.insert(counts);
    if (slot.first && slot.second && !res.counterexample) {
      res.invariant = false;
      res.counterexample = std::make_pair(*slot.first, *slot.second);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Cardinality-level evaluation

bool CardProfile::valid() const {
  return i <= std::min(x, y) && x + y - i <= q;
}

std::string CardProfile::to_string() const {
  return "(x=" + std::to_string(x) + ",y=" + std::to_string(y) + ",i=" + std::to_string(i) +
         ",q=" + std::to_string(q) + ")";
}

FastCardEvaluator::FastCardEvaluator(const CardOracle& o, std::size_t q) : oracle_(o), q_(q) {
  if (q < 1 || q > kMaxDomain) throw InvalidArgument("q outside [1," + std::to_string(kMaxDomain) + "]");
  if (o.bound < q)
    throw InvalidArgument("oracle " + o.name + " is reliable only up to " + std::to_string(o.bound));
  if (o.arity == 0 || o.arity > 3) throw InvalidArgument("fast evaluation supports arity 1 to 3");
  std::size_t size = 1;
  for (std::size_t k = 0; k < o.arity; ++k) size *= q + 1;
  oracle_table_.resize(size);
  Point pt(o.arity, 0);
  for (std::size_t idx = 0; idx < size; ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = 0; k < o.arity; ++k) {
      pt[k] = rest % (q + 1);
      rest /= q + 1;
    }
    oracle_table_[idx] = o(pt) ? 1 : 0;
  }
  ff_.assign((q + 1) * (q + 1) * (q + 1), -1);
}

std::size_t FastCardEvaluator::index(std::size_t x, std::size_t y, std::size_t i) const {
  return (x * (q_ + 1) + y) * (q_ + 1) + i;
}

// Only Z_j is disjoint from X ∪ Y; the other arguments range over all sizes.
bool FastCardEvaluator::ff_at(std::size_t x, std::size_t y, std::size_t i) const {
  const std::size_t n = oracle_.arity;
  const std::size_t free = q_ - (x + y - i);
  const std::size_t side = q_ + 1;
  std::size_t others = 1;
  for (std::size_t k = 1; k < n; ++k) others *= side;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t stride_j = 1;
    for (std::size_t k = 0; k < j; ++k) stride_j *= side;
    for (std::size_t rest = 0; rest < others; ++rest) {
      // Spread `rest` over the coordinates other than j.
      std::size_t base = 0, r = rest, stride = 1;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) {
          base += (r % side) * stride;
          r /= side;
        }
        stride *= side;
      }
      for (std::size_t z = 0; z <= free; ++z) {
        if (oracle_table_[base + (z + x) * stride_j] != oracle_table_[base + (z + y) * stride_j])
          return false;
      }
    }
  }
  return true;
}

bool FastCardEvaluator::ff(std::size_t x, std::size_t y, std::size_t i) const {
  CardProfile p{x, y, i, q_};
  if (!p.valid()) throw InvalidArgument("infeasible profile " + p.to_string());
  auto& cell = ff_[index(x, y, i)];
  if (cell < 0) cell = ff_at(x, y, i) ? 1 : 0;
  return cell != 0;
}

void FastCardEvaluator::build_prefix() const {
  const std::size_t side = q_ + 1;
  prefix_x_.assign(side * side * side, 0);
  for (std::size_t a = 0; a <= q_; ++a) {
    for (std::size_t b = 0; b <= q_; ++b) {
      std::int32_t acc = 0;
      for (std::size_t t = 0; t <= q_; ++t) {
        CardProfile p{a, b, t, q_};
        if (p.valid() && ff(a, b, t)) ++acc;
        prefix_x_[index(a, b, t)] = acc;
      }
    }
  }
  prefix_ready_ = true;
}

bool FastCardEvaluator::quasi_eq(std::size_t x, std::size_t y, std::size_t i) const {
  if (!ff(x, y, i)) return false;
  if (!prefix_ready_) build_prefix();
  auto any_true = [&](std::size_t a, std::size_t b, std::size_t lo, std::size_t hi) {
    if (lo > hi) return false;
    std::int32_t below = lo == 0 ? 0 : prefix_x_[index(a, b, lo - 1)];
    return prefix_x_[index(a, b, hi)] - below > 0;
  };
  // X' ⊊ X with |X'| = x', |X' ∩ Y| = i'.
  for (std::size_t xp = 0; xp < x; ++xp) {
    std::size_t lo = xp > x - i ? xp - (x - i) : 0;
    std::size_t hi = std::min(xp, i);
    if (any_true(xp, y, lo, hi)) return false;
  }
  for (std::size_t yp = 0; yp < y; ++yp) {
    std::size_t lo = yp > y - i ? yp - (y - i) : 0;
    std::size_t hi = std::min(yp, i);
    if (any_true(x, yp, lo, hi)) return false;
  }
  return true;
}

bool FastCardEvaluator::quasi_eq_robust(std::size_t x, std::size_t y) const {
  std::size_t lo = x + y > q_ ? x + y - q_ : 0;
  for (std::size_t i = lo; i <= std::min(x, y); ++i)
    if (!quasi_eq(x, y, i)) return false;
  return true;
}

bool FastCardEvaluator::quasi_eq_some(std::size_t x, std::size_t y) const {
  std::size_t lo = x + y > q_ ? x + y - q_ : 0;
  for (std::size_t i = lo; i <= std::min(x, y); ++i)
    if (quasi_eq(x, y, i)) return true;
  return false;
}

bool eval_card_fast(CardTemplate t, const CardOracle& o, const CardProfile& p) {
  if (!p.valid()) throw InvalidArgument("infeasible profile " + p.to_string());
  if (t == CardTemplate::f && o.arity != 1) throw InvalidArgument("F needs a unary relation");
  FastCardEvaluator e(o, p.q);
  return t == CardTemplate::quasi_eq ? e.quasi_eq(p.x, p.y, p.i) : e.ff(p.x, p.y, p.i);
}

// ---------------------------------------------------------------------------
// Reports

std::string ReportLine::to_string() const {
  return "q=" + std::to_string(q) + " check=" + check + " verdict=" + (ok ? "ok" : "fail") +
         " witness=" + (witness.empty() ? "-" : witness);
}

std::string QuasiReport::to_string() const {
  std::ostringstream out;
  for (const auto& l : lines) out << l.to_string() << '\n';
  for (const auto& [p, w] : premise_witnesses)
    out << "premise p=" << p << " " << w.to_string() << '\n';
  out << "summary invariant=" << (invariant_everywhere ? "yes" : "no")
      << " sound=" << (sound_everywhere ? "yes" : "no") << " stabilized_from="
      << (stabilized_from ? std::to_string(*stabilized_from) : "none")
      << " constructive_Q=" << (constructive_q ? std::to_string(*constructive_q) : "none")
      << " premise=" << (premise_holds ? "holds" : "fails") << '\n';
  return out.str();
}

namespace {

std::string pair_witness(std::size_t x, std::size_t y, std::size_t i) {
  auto [xs, ys] = realize_profile(x, y, i);
  return "X=" + mask_to_string(xs) + ",Y=" + mask_to_string(ys);
}

constexpr std::size_t kBruteMaxQ = 6;

}  // namespace

QuasiReport verify_quasi_eqcard(const CardOracle& o, std::size_t k, std::size_t q_min,
                                std::size_t q_max, VerifyMode mode) {
  if (q_min < 1 || q_min > q_max) throw InvalidArgument("empty q range");
  if (q_max > o.bound)
    throw InvalidArgument("q range exceeds the reliability bound of " + o.name);
  if (mode == VerifyMode::brute && q_max > kBruteMaxQ)
    throw InvalidArgument("brute-force verification is limited to q <= " + std::to_string(kBruteMaxQ));
  QuasiReport rep;
  std::vector<bool> complete(q_max + 1, false);
  Formula phi;
  if (mode != VerifyMode::fast) {
    FormulaTemplate t;
    t.kind = TemplateKind::quasi_eq;
    t.n = o.arity;
    phi = build_template(t);
  }

  for (std::size_t q = q_min; q <= q_max; ++q) {
    FastCardEvaluator fast(o, q);
    bool use_fast = mode != VerifyMode::brute;
    bool use_brute = mode != VerifyMode::fast && q <= kBruteMaxQ;

    if (use_fast) {
      // Invariance: φ must not depend on the overlap of X and Y.
      ReportLine inv{q, "invariance", true, "", {}};
      for (std::size_t x = 0; x <= q && inv.ok; ++x) {
        for (std::size_t y = 0; y <= q && inv.ok; ++y) {
          std::size_t lo = x + y > q ? x + y - q : 0;
          for (std::size_t i = lo + 1; i <= std::min(x, y); ++i) {
            if (fast.quasi_eq(x, y, i) != fast.quasi_eq(x, y, lo)) {
              bool first = fast.quasi_eq(x, y, lo);
              std::size_t t = first ? lo : i, f = first ? i : lo;
              inv.ok = false;
              inv.witness = "holds:" + pair_witness(x, y, t) + ";fails:" + pair_witness(x, y, f);
              auto [xt, yt] = realize_profile(x, y, t);
              auto [xf, yf] = realize_profile(x, y, f);
              inv.sets = {xt, yt, xf, yf};
              break;
            }
          }
        }
      }
      rep.lines.push_back(inv);
      rep.invariant_everywhere = rep.invariant_everywhere && inv.ok;

      // Soundness: φ(X,Y) implies |X| = |Y|.
      ReportLine sound{q, "soundness", true, "", {}};
      for (std::size_t x = 0; x <= q && sound.ok; ++x)
        for (std::size_t y = 0; y <= q && sound.ok; ++y) {
          if (x == y) continue;
          std::size_t lo = x + y > q ? x + y - q : 0;
          for (std::size_t i = lo; i <= std::min(x, y); ++i)
            if (fast.quasi_eq(x, y, i)) {
              sound.ok = false;
              sound.witness = pair_witness(x, y, i);
              auto [xs, ys] = realize_profile(x, y, i);
              sound.sets = {xs, ys};
              break;
            }
        }
      rep.lines.push_back(sound);
      rep.sound_everywhere = rep.sound_everywhere && sound.ok;

      // Completeness: φ(X,Y) whenever |X| = |Y| < k.
      ReportLine comp{q, "completeness", true, "", {}};
      for (std::size_t x = 0; x < k && x <= q && comp.ok; ++x) {
        std::size_t lo = 2 * x > q ? 2 * x - q : 0;
        for (std::size_t i = lo; i <= x; ++i)
          if (!fast.quasi_eq(x, x, i)) {
            comp.ok = false;
            comp.witness = pair_witness(x, x, i);
            auto [xs, ys] = realize_profile(x, x, i);
            comp.sets = {xs, ys};
            break;
          }
      }
      rep.lines.push_back(comp);
      complete[q] = comp.ok;
    }

    if (use_brute) {
      FiniteModel m{q, {{"R", o}}};
      Evaluator e(phi, m);
      ReportLine inv{q, "brute-invariance", true, "", {}};
      ReportLine sound{q, "brute-soundness", true, "", {}};
      ReportLine comp{q, "brute-completeness", true, "", {}};
      ReportLine agree{q, "agreement", true, "", {}};
      std::map<std::pair<std::size_t, std::size_t>, std::pair<Mask, Mask>> holds, fails;
      const Mask limit = Mask{1} << q;
      for (Mask xs = 0; xs < limit; ++xs) {
        for (Mask ys = 0; ys < limit; ++ys) {
          bool v = e.evaluate({xs, ys});
          std::size_t x = popcount(xs), y = popcount(ys), i = popcount(xs & ys);
          auto key = std::make_pair(x, y);
          (v ? holds : fails).emplace(key, std::make_pair(xs, ys));
          if (v && x != y && sound.ok) {
            sound.ok = false;
            sound.witness = "X=" + mask_to_string(xs) + ",Y=" + mask_to_string(ys);
            sound.sets = {xs, ys};
          }
          if (!v && x == y && x < k && comp.ok) {
            comp.ok = false;
            comp.witness = "X=" + mask_to_string(xs) + ",Y=" + mask_to_string(ys);
            comp.sets = {xs, ys};
          }
          if (use_fast && agree.ok && fast.quasi_eq(x, y, i) != v) {
            agree.ok = false;
            agree.witness = "X=" + mask_to_string(xs) + ",Y=" + mask_to_string(ys);
            agree.sets = {xs, ys};
          }
        }
      }
      for (const auto& [key, h] : holds) {
        auto f = fails.find(key);
        if (f != fails.end()) {
          inv.ok = false;
          inv.witness = "holds:X=" + mask_to_string(h.first) + ",Y=" + mask_to_string(h.second) +
                        ";fails:X=" + mask_to_string(f->second.first) +
                        ",Y=" + mask_to_string(f->second.second);
          inv.sets = {h.first, h.second, f->second.first, f->second.second};
          break;
        }
      }
      rep.lines.push_back(inv);
      rep.lines.push_back(sound);
      rep.lines.push_back(comp);
      if (use_fast) rep.lines.push_back(agree);
      rep.invariant_everywhere = rep.invariant_everywhere && inv.ok;
      rep.sound_everywhere = rep.sound_everywhere && sound.ok;
      if (!use_fast) complete[q] = comp.ok;
    }
  }

  for (std::size_t q = q_max + 1; q-- > q_min;) {
    if (!complete[q]) break;
    rep.stabilized_from = q;
  }

  // Constructive bound from witnesses against μ = (k, p, ..., p), 1 ≤ p ≤ k.
  Nat largest = 0;
  for (Nat p = 1; p <= k; ++p) {
    StrupMu mu{k, std::vector<Nat>(o.arity, p)};
    std::optional<StrupWitness> w;
    if (o.bound >= p + k) w = check_mu_strup(o, mu, o.bound - p);
    if (!w) {
      rep.premise_holds = false;
      rep.lines.push_back({0, "premise", false, "no witness against " + mu.to_string() +
                                                    " up to " + std::to_string(o.bound), {}});
      continue;
    }
    for (Nat c : w->point) largest = std::max(largest, c);
    rep.premise_witnesses.emplace_back(p, *w);
  }
  if (rep.premise_holds) rep.constructive_q = 2 * k + largest;
  return rep;
}

// ---------------------------------------------------------------------------
// EqCard from splits

namespace {

using PairTable = std::vector<std::vector<bool>>;

/// Pairs (a,b) ≤ q reachable as sums of exactly `parts` pairs from `allowed`.
PairTable sums(const PairTable& allowed, std::size_t parts, std::size_t q) {
  std::vector<std::pair<std::size_t, std::size_t>> list;
  for (std::size_t a = 0; a <= q; ++a)
    for (std::size_t b = 0; b <= q; ++b)
      if (allowed[a][b]) list.emplace_back(a, b);
  PairTable reach(q + 1, std::vector<bool>(q + 1, false));
  reach[0][0] = true;
  for (std::size_t step = 0; step < parts; ++step) {
    PairTable next(q + 1, std::vector<bool>(q + 1, false));
    for (std::size_t a = 0; a <= q; ++a)
      for (std::size_t b = 0; b <= q; ++b) {
        if (!reach[a][b]) continue;
        for (auto [c, d] : list)
          if (a + c <= q && b + d <= q) next[a + c][b + d] = true;
      }
    reach.swap(next);
  }
  return reach;
}

bool defines_diagonal(const PairTable& robust, const PairTable& some, std::size_t q) {
  for (std::size_t a = 0; a <= q; ++a) {
    if (!robust[a][a]) return false;
    for (std::size_t b = 0; b <= q; ++b)
      if (a != b && some[a][b]) return false;
  }
  return true;
}

}  // namespace

PrimesH primes_h_table(const FastCardEvaluator& fast, const CardOracle& o) {
  const std::size_t q = fast.q();
  PairTable part_robust(q + 1, std::vector<bool>(q + 1, false));
  PairTable part_some = part_robust;
  for (std::size_t c = 0; c <= q; ++c)
    for (std::size_t d = 0; d <= q; ++d) {
      if (!o(Point{c}) || !o(Point{d})) continue;
      bool small = c == d && (c == 2 || c == 3);
      part_robust[c][d] = small || fast.quasi_eq_robust(c, d);
      part_some[c][d] = small || fast.quasi_eq_some(c, d);
    }
  PrimesH h{PairTable(q + 1, std::vector<bool>(q + 1, false)),
            PairTable(q + 1, std::vector<bool>(q + 1, false))};
  h.robust[0][0] = h.some[0][0] = true;
  if (q >= 1) h.robust[1][1] = h.some[1][1] = true;
  for (std::size_t j = 1; j <= kPrimeSummands; ++j) {
    auto r = sums(part_robust, j, q);
    auto s = sums(part_some, j, q);
    for (std::size_t a = 0; a <= q; ++a)
      for (std::size_t b = 0; b <= q; ++b) {
        if (r[a][b]) h.robust[a][b] = true;
        if (s[a][b]) h.some[a][b] = true;
      }
  }
  return h;
}

bool verify_eqcard_split(SplitVariant variant, const CardOracle& o, std::size_t q) {
  if (o.arity != 1) throw InvalidArgument("split formulas use a unary relation");
  if (variant == SplitVariant::pow2 && q < 4)
    throw InvalidArgument("EqCardPow2 is stated for q >= 4");
  if (variant == SplitVariant::primes && q < 6)
    throw InvalidArgument("EqCardPrimes is stated for q >= 6");
  FastCardEvaluator fast(o, q);
  if (variant == SplitVariant::pow2) {
    PairTable robust(q + 1, std::vector<bool>(q + 1, false));
    PairTable some = robust;
    for (std::size_t a = 0; a <= q; ++a)
      for (std::size_t b = 0; b <= q; ++b) {
        robust[a][b] = fast.quasi_eq_robust(a, b);
        some[a][b] = fast.quasi_eq_some(a, b);
      }
    return defines_diagonal(sums(robust, kPow2SplitParts, q), sums(some, kPow2SplitParts, q), q);
  }
  PrimesH h = primes_h_table(fast, o);
  return defines_diagonal(sums(h.robust, kPrimesSplitParts, q), sums(h.some, kPrimesSplitParts, q),
                          q);
}

SatResult bounded_sat(const Formula& f, const std::map<std::string, CardOracle>& relations,
                      std::size_t q_max, const EvalOptions& opts) {
  if (!free_variables(f).empty()) throw FormulaError("bounded_sat expects a sentence");
  SatResult res;
  for (std::size_t q = 1; q <= q_max; ++q) {
    FiniteModel m{q, relations};
    ++res.tested;
    if (Evaluator(f, m, opts)(Assignment{})) {
      res.q = q;
      return res;
    }
  }
  return res;
}

}  // namespace msocard
