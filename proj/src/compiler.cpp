#include "msocard/compiler.hpp"

#include <algorithm>

#include "msocard/error.hpp"

namespace msocard {

void SymbolBinding::bind(const std::string& symbol, SymbolTarget target) {
  if (!is_identifier(symbol)) throw InvalidArgument("invalid relation name '" + symbol + "'");
  if (auto* d = std::get_if<OrderDefinition>(&target)) {
    if (d->parameters.empty()) throw InvalidArgument(symbol + " needs at least one parameter");
    for (const auto& p : d->parameters)
      if (sort_of(p) != Sort::set) throw InvalidArgument(symbol + " parameters must be set variables");
    auto fv = free_variables(d->body);
    if (!fv.elements.empty()) throw InvalidArgument(symbol + " definition has free element variables");
    for (const auto& v : fv.sets)
      if (std::find(d->parameters.begin(), d->parameters.end(), v) == d->parameters.end())
        throw InvalidArgument(symbol + " definition mentions unbound " + v);
  }
  entries_.insert_or_assign(symbol, std::move(target));
}

const SymbolTarget* SymbolBinding::find(const std::string& symbol) const {
  auto it = entries_.find(symbol);
  return it == entries_.end() ? nullptr : &it->second;
}

std::size_t SymbolBinding::arity(const std::string& symbol) const {
  const SymbolTarget* t = find(symbol);
  if (t == nullptr) throw FormulaError("unbound relation symbol " + symbol);
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, OrderDefinition>)
          return v.parameters.size();
        else if constexpr (std::is_same_v<T, RecognizableRel>)
          return v.arity();
        else
          return v.arity;
      },
      *t);
}

Signature SymbolBinding::signature() const {
  Signature sig;
  for (const auto& [name, target] : entries_) sig.add({name, arity(name), true});
  return sig;
}

EncodedTuple encode(const std::vector<NatSet>& sets, std::vector<std::string> labels) {
  if (labels.empty()) labels = default_labels(sets.size());
  if (labels.size() != sets.size()) throw InvalidArgument("one label per set required");
  if (sets.size() > kMaxTracks) throw InvalidArgument("too many sets to encode");
  Nat length = 0;
  for (const auto& s : sets)
    if (!s.empty()) length = std::max(length, *s.rbegin() + 1);
  if (length > (Nat{1} << 26)) throw InvalidArgument("set element too large to encode");
  Word w(length, 0);
  for (std::size_t j = 0; j < sets.size(); ++j)
    for (Nat i : sets[j]) w[i] |= Letter{1} << j;
  return {std::move(w), std::move(labels)};
}

std::vector<NatSet> decode(const Word& w, std::size_t tracks) {
  if (!is_canonical_word(w)) throw InvalidArgument("word is not canonical (ends in the zero letter)");
  std::vector<NatSet> out(tracks);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] >> tracks) throw InvalidArgument("letter outside the track alphabet");
    for (std::size_t j = 0; j < tracks; ++j)
      if ((w[i] >> j) & 1U) out[j].insert(i);
  }
  return out;
}

std::uint64_t cod(const NatSet& x) {
  std::uint64_t c = 0;
  for (Nat i : x) {
    if (i >= 64) throw InvalidArgument("cod is limited to elements below 64");
    c |= std::uint64_t{1} << i;
  }
  return c;
}

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// DFA given as a function of (state, letter) over a fixed state count.
template <typename Step>
Dfa tabulate(std::vector<std::string> labels, std::size_t states, std::vector<bool> accepting,
             Step step) {
  const std::size_t sigma = std::size_t{1} << labels.size();
  std::vector<State> delta(states * sigma);
  for (State s = 0; s < states; ++s)
    for (Letter l = 0; l < sigma; ++l) delta[s * sigma + l] = step(s, l);
  return Dfa(std::move(labels), states, 0, std::move(accepting), std::move(delta));
}

}  // namespace

Dfa singleton_track(const std::vector<std::string>& labels, const std::string& label) {
  auto bit = std::find(labels.begin(), labels.end(), label) - labels.begin();
  if (static_cast<std::size_t>(bit) == labels.size()) throw AutomatonError("no track " + label);
  // 0: no 1 yet; 1: one 1, last letter nonzero; 2: one 1, last letter zero; 3: dead.
  return tabulate(labels, 4, {false, true, false, false}, [&](State s, Letter l) -> State {
    bool hit = (l >> bit) & 1U;
    switch (s) {
      case 0:
        return hit ? 1 : 0;
      case 1:
      case 2:
        return hit ? 3 : (l != 0 ? 1 : 2);
      default:
        return 3;
    }
  });
}

Dfa atom_less(const std::string& x, const std::string& y) {
  if (x == y) return Dfa::empty({x});
  auto labels = sorted_unique({x, y});
  Letter bx = Letter{1} << (labels[0] == x ? 0 : 1);
  Letter by = Letter{1} << (labels[0] == y ? 0 : 1);
  // 0: before x; 1: after x; 2: at y (accept); 3: dead.
  return tabulate(labels, 4, {false, false, true, false}, [&](State s, Letter l) -> State {
    if (s == 0) return l == 0 ? 0 : (l == bx ? 1 : 3);
    if (s == 1) return l == 0 ? 1 : (l == by ? 2 : 3);
    return 3;
  });
}

Dfa atom_equal(const std::string& x, const std::string& y) {
  if (x == y) {
    return tabulate({x}, 3, {false, true, false},
                    [](State s, Letter l) -> State { return s == 0 ? (l == 0 ? 0 : 1) : 2; });
  }
  auto labels = sorted_unique({x, y});
  // 0: before; 1: at x = y (accept); 2: dead.
  return tabulate(labels, 3, {false, true, false}, [](State s, Letter l) -> State {
    if (s == 0) return l == 0 ? 0 : (l == 3 ? 1 : 2);
    return 2;
  });
}

Dfa atom_member(const std::string& x, const std::string& set) {
  auto labels = sorted_unique({x, set});
  Letter bx = Letter{1} << (labels[0] == x ? 0 : 1);
  Letter bs = Letter{1} << (labels[0] == set ? 0 : 1);
  // 0: x unseen; 1: x seen, last letter nonzero (accept); 2: x seen, last letter zero; 3: dead.
  return tabulate(labels, 4, {false, true, false, false}, [&](State s, Letter l) -> State {
    bool hx = (l & bx) != 0;
    bool hs = (l & bs) != 0;
    switch (s) {
      case 0:
        return hx ? (hs ? 1 : 3) : 0;
      case 1:
      case 2:
        return hx ? 3 : (hs ? 1 : 2);
      default:
        return 3;
    }
  });
}

namespace {

class Compiler {
 public:
  explicit Compiler(const SymbolBinding& bind) : bind_(bind) {}

  Dfa run(const Formula& f) {
    switch (f.kind()) {
      case NodeKind::truth:
        return Dfa::canonical({});
      case NodeKind::falsity:
        return Dfa::empty({});
      case NodeKind::less:
        return atom_less(f.variables()[0], f.variables()[1]);
      case NodeKind::equal:
        return atom_equal(f.variables()[0], f.variables()[1]);
      case NodeKind::member:
        return atom_member(f.variables()[0], f.variables()[1]);
      case NodeKind::relation:
        return relation(f.symbol(), f.variables());
      case NodeKind::negation:
        return negate(run(f.child()));
      case NodeKind::conjunction:
      case NodeKind::disjunction: {
        auto [a, b] = aligned(run(f.child(0)), run(f.child(1)));
        return combine(a, b, f.kind() == NodeKind::conjunction ? BoolOp::conjunction
                                                               : BoolOp::disjunction);
      }
      case NodeKind::implication: {
        auto [a, b] = aligned(run(f.child(0)), run(f.child(1)));
        return unite(negate(a), b);
      }
      case NodeKind::equivalence: {
        auto [a, b] = aligned(run(f.child(0)), run(f.child(1)));
        return unite(intersect(a, b), intersect(negate(a), negate(b)));
      }
      case NodeKind::exists_element:
      case NodeKind::exists_set:
        return exists(f.bound_variable(), run(f.child()));
      case NodeKind::forall_element:
      case NodeKind::forall_set:
        return negate(exists(f.bound_variable(), negate(run(f.child()))));
    }
    throw FormulaError("unknown formula node");
  }

 private:
  /// Canonical complement, keeping element tracks singletons.
  Dfa negate(const Dfa& a) { return constrain(complement(a)); }

  Dfa constrain(Dfa a) {
    const std::vector<std::string> labels = a.labels();
    for (const auto& l : labels)
      if (sort_of(l) == Sort::element) a = intersect(a, singleton_track(a.labels(), l));
    return a;
  }

  Dfa widen(const Dfa& a, const std::vector<std::string>& labels) {
    Dfa out = a;
    for (const auto& l : labels) {
      if (out.track_of(l) != out.tracks()) continue;
      out = cylindrify(out, l);
      if (sort_of(l) == Sort::element) out = intersect(out, singleton_track(out.labels(), l));
    }
    return out;
  }

  std::pair<Dfa, Dfa> aligned(const Dfa& a, const Dfa& b) {
    std::vector<std::string> all = a.labels();
    all.insert(all.end(), b.labels().begin(), b.labels().end());
    all = sorted_unique(std::move(all));
    return {widen(a, all), widen(b, all)};
  }

  Dfa exists(const std::string& v, const Dfa& body) {
    if (body.track_of(v) == body.tracks()) return body;
    return project(body, v);
  }

  /// Automaton of symbol over the tracks P1 < P2 < ... in argument order.
  const Dfa& symbol_dfa(const std::string& symbol) {
    if (auto it = cache_.find(symbol); it != cache_.end()) return it->second;
    const SymbolTarget* t = bind_.find(symbol);
    if (t == nullptr) throw FormulaError("unbound relation symbol " + symbol);
    Dfa d = std::visit(
        [&](const auto& v) -> Dfa {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, RecognizableRel>) {
            return rel_to_dfa(v);
          } else if constexpr (std::is_same_v<T, CardOracle>) {
            if (!v.structure)
              throw FormulaError("symbol " + symbol + " is bound to the non-recognizable oracle " +
                                 v.name + " and cannot be compiled");
            return rel_to_dfa(*v.structure);
          } else {
            Compiler inner(bind_);
            Dfa body = widen(inner.run(v.body), sorted_unique(v.parameters));
            if (sorted_unique(v.parameters).size() != v.parameters.size())
              throw FormulaError("definition of " + symbol + " repeats a parameter");
            // Reorder from sorted parameter tracks to argument positions.
            auto labels = default_labels(v.parameters.size());
            std::vector<std::size_t> source(body.tracks());
            for (std::size_t k = 0; k < body.tracks(); ++k) {
              auto pos = std::find(v.parameters.begin(), v.parameters.end(), body.labels()[k]) -
                         v.parameters.begin();
              source[k] = static_cast<std::size_t>(pos);
            }
            return remap_tracks(body, labels, source);
          }
        },
        *t);
    return cache_.emplace(symbol, std::move(d)).first->second;
  }

  Dfa relation(const std::string& symbol, const std::vector<std::string>& args) {
    const Dfa& base = symbol_dfa(symbol);
    if (base.tracks() != args.size())
      throw FormulaError("relation " + symbol + " applied to " + std::to_string(args.size()) +
                         " arguments, bound with arity " + std::to_string(base.tracks()));
    auto labels = sorted_unique(args);
    std::vector<std::size_t> source(args.size());
    for (std::size_t i = 0; i < args.size(); ++i)
      source[i] = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), args[i]) -
                                           labels.begin());
    return remap_tracks(base, labels, source);
  }

  const SymbolBinding& bind_;
  std::map<std::string, Dfa> cache_;
};

}  // namespace

Dfa compile(const Formula& f, const SymbolBinding& bind) {
  check_well_formed(f, bind.signature());
  return Compiler(bind).run(f);
}

bool decide_sentence(const Formula& f, const SymbolBinding& bind) {
  if (!free_variables(f).empty()) throw FormulaError("decide expects a sentence (no free variables)");
  Dfa a = compile(f, bind);
  return a.accepts({});
}

DefinabilityReport analyze_definability(const Formula& f, const SymbolBinding& bind,
                                        const AnalysisOptions& opts) {
  auto fv = free_variables(f);
  if (!fv.elements.empty())
    throw FormulaError("analysis expects free set variables only");
  return analyze_definability(compile(f, bind), opts);
}

}  // namespace msocard
