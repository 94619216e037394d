#include "msocard/templates.hpp"

#include <algorithm>
#include <map>

#include "msocard/error.hpp"

namespace msocard {

namespace {

using F = Formula;

F in(const std::string& x, const std::string& s) { return F::member(x, s); }
F neg(F f) { return F::negation(std::move(f)); }
F land(F a, F b) { return F::conjunction(std::move(a), std::move(b)); }
F lor(F a, F b) { return F::disjunction(std::move(a), std::move(b)); }
F imp(F a, F b) { return F::implication(std::move(a), std::move(b)); }
F iff(F a, F b) { return F::equivalence(std::move(a), std::move(b)); }

void reserve(NameSupply& names, std::initializer_list<std::string> vs) {
  for (const auto& v : vs) names.reserve(v);
}

void reserve(NameSupply& names, const std::vector<std::string>& vs) {
  for (const auto& v : vs) names.reserve(v);
}

F exists_all(const std::vector<std::string>& vars, F body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = F::exists(*it, std::move(body));
  return body;
}

F forall_all(const std::vector<std::string>& vars, F body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = F::forall(*it, std::move(body));
  return body;
}

std::vector<std::string> fresh_family(const std::string& base, std::size_t count,
                                      NameSupply& names) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= count; ++i) out.push_back(names.fresh(base + std::to_string(i)));
  return out;
}

void require_arity(std::size_t n) {
  if (n == 0) throw InvalidArgument("relation arity must be at least 1");
}

}  // namespace

Formula subset(const std::string& a, const std::string& b, NameSupply& names) {
  reserve(names, {a, b});
  auto v = names.fresh("v");
  return F::forall(v, imp(in(v, a), in(v, b)));
}

Formula strict_subset(const std::string& a, const std::string& b, NameSupply& names) {
  return land(subset(a, b, names), neg(subset(b, a, names)));
}

Formula set_equal(const std::string& a, const std::string& b, NameSupply& names) {
  reserve(names, {a, b});
  auto v = names.fresh("v");
  return F::forall(v, iff(in(v, a), in(v, b)));
}

Formula union_is(const std::string& u, const std::string& a, const std::string& b,
                 NameSupply& names) {
  reserve(names, {u, a, b});
  const auto& lo = std::min(a, b);
  const auto& hi = std::max(a, b);
  auto v = names.fresh("v");
  return F::forall(v, iff(in(v, u), lor(in(v, lo), in(v, hi))));
}

Formula intersection_is(const std::string& u, const std::string& a, const std::string& b,
                        NameSupply& names) {
  reserve(names, {u, a, b});
  const auto& lo = std::min(a, b);
  const auto& hi = std::max(a, b);
  auto v = names.fresh("v");
  return F::forall(v, iff(in(v, u), land(in(v, lo), in(v, hi))));
}

Formula disjoint(const std::string& a, const std::string& b, NameSupply& names) {
  reserve(names, {a, b});
  auto v = names.fresh("v");
  return F::forall(v, neg(land(in(v, a), in(v, b))));
}

Formula disjoint_from_union(const std::string& z, const std::string& x, const std::string& y,
                            NameSupply& names) {
  reserve(names, {z, x, y});
  auto v = names.fresh("v");
  return F::forall(v, neg(land(in(v, z), lor(in(v, x), in(v, y)))));
}

Formula nonempty(const std::string& a, NameSupply& names) {
  reserve(names, {a});
  auto v = names.fresh("v");
  return F::exists(v, in(v, a));
}

Formula partition(const std::string& whole, const std::vector<std::string>& parts,
                  NameSupply& names) {
  reserve(names, {whole});
  reserve(names, parts);
  auto v = names.fresh("v");
  std::vector<F> cover;
  for (const auto& p : parts) cover.push_back(in(v, p));
  std::vector<F> conj{F::forall(v, iff(in(v, whole), disjoin(cover)))};
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      conj.push_back(disjoint(parts[i], parts[j], names));
  return conjoin(conj);
}

Formula relation_on(const std::string& symbol, const std::vector<SetTerm>& args,
                    NameSupply& names) {
  for (const auto& t : args) {
    names.reserve(t.first);
    if (t.second) names.reserve(*t.second);
  }
  std::vector<std::string> plain;
  std::vector<std::pair<std::string, const SetTerm*>> unions;
  for (const auto& t : args) {
    if (!t.second) {
      plain.push_back(t.first);
      continue;
    }
    auto u = names.fresh("U");
    unions.emplace_back(u, &t);
    plain.push_back(u);
  }
  // Definitions are generated outermost first so names stay in argument order.
  std::vector<F> defs;
  for (const auto& [u, t] : unions) defs.push_back(union_is(u, t->first, *t->second, names));
  F body = F::relation(symbol, plain);
  for (std::size_t i = unions.size(); i-- > 0;)
    body = F::exists(unions[i].first, land(defs[i], body));
  return body;
}

Formula card_equals(std::size_t k, const std::string& set, NameSupply& names) {
  reserve(names, {set});
  if (k == 0) {
    auto v = names.fresh("v");
    return F::forall(v, neg(in(v, set)));
  }
  auto xs = fresh_family("c", k, names);
  auto v = names.fresh("v");
  std::vector<F> conj;
  for (std::size_t i = 0; i + 1 < k; ++i) conj.push_back(F::less(xs[i], xs[i + 1]));
  std::vector<F> alts;
  for (const auto& x : xs) alts.push_back(F::equal(v, x));
  conj.push_back(F::forall(v, iff(in(v, set), disjoin(alts))));
  return exists_all(xs, conjoin(conj));
}

Formula card_less(std::size_t k, const std::string& set, NameSupply& names) {
  if (k == 0) return F::bottom();
  reserve(names, {set});
  auto xs = fresh_family("c", k, names);
  std::vector<F> conj;
  for (std::size_t i = 0; i + 1 < k; ++i) conj.push_back(F::less(xs[i], xs[i + 1]));
  for (const auto& x : xs) conj.push_back(in(x, set));
  return neg(exists_all(xs, conjoin(conj)));
}

Formula less_equal(const std::string& x, const std::string& y) {
  return lor(F::less(x, y), F::equal(x, y));
}

Formula interval(const std::string& x, const std::string& y, const std::string& set,
                 NameSupply& names) {
  reserve(names, {x, y, set});
  auto v = names.fresh("v");
  return F::forall(v, iff(in(v, set), lor(land(less_equal(x, v), less_equal(v, y)),
                                          land(less_equal(y, v), less_equal(v, x)))));
}

Formula consecutive(const std::string& x, const std::string& y, const std::string& set,
                    NameSupply& names) {
  reserve(names, {x, y, set});
  auto w = names.fresh("w");
  return conjoin({in(x, set), in(y, set), F::less(x, y),
                  F::forall(w, imp(land(F::less(x, w), F::less(w, y)), neg(in(w, set))))});
}

Formula is_zero(const std::string& x, NameSupply& names) {
  reserve(names, {x});
  auto w = names.fresh("w");
  return F::forall(w, neg(F::less(w, x)));
}

// Empty, or some E ⊆ X contains min X, misses max X and alternates along X.
Formula even_card(const std::string& set, NameSupply& names) {
  reserve(names, {set});
  auto e = names.fresh("E");
  auto f = names.fresh("f");
  auto l = names.fresh("l");
  auto a = names.fresh("a");
  auto b = names.fresh("b");
  auto v = names.fresh("v");
  F empty = F::forall(v, neg(in(v, set)));
  F first = F::exists(f, conjoin({in(f, set), F::forall(v, imp(F::less(v, f), neg(in(v, set)))),
                                  in(f, e)}));
  F last = F::exists(l, conjoin({in(l, set), F::forall(v, imp(F::less(l, v), neg(in(v, set)))),
                                 neg(in(l, e))}));
  F alternate = F::forall(
      a, F::forall(b, imp(consecutive(a, b, set, names), iff(in(a, e), neg(in(b, e))))));
  return lor(empty, F::exists(e, conjoin({subset(e, set, names), first, last, alternate})));
}

Formula f_formula(const std::string& symbol, const std::string& x, const std::string& y,
                  NameSupply& names) {
  reserve(names, {x, y});
  auto z = names.fresh("Z");
  return F::forall(z, imp(disjoint_from_union(z, x, y, names),
                          iff(relation_on(symbol, {SetTerm(x, z)}, names),
                              relation_on(symbol, {SetTerm(y, z)}, names))));
}

Formula ff_formula(std::size_t arity, const std::string& symbol, const std::string& x,
                   const std::string& y, NameSupply& names) {
  require_arity(arity);
  reserve(names, {x, y});
  auto zs = fresh_family("Z", arity, names);
  // Only Z_i, the set joined with X or Y, is required disjoint from X ∪ Y.
  std::vector<F> conj;
  for (std::size_t i = 0; i < arity; ++i) {
    std::vector<SetTerm> with_x, with_y;
    for (std::size_t l = 0; l < arity; ++l) {
      if (l == i) {
        with_x.emplace_back(x, zs[l]);
        with_y.emplace_back(y, zs[l]);
      } else {
        with_x.emplace_back(zs[l]);
        with_y.emplace_back(zs[l]);
      }
    }
    F guard = disjoint_from_union(zs[i], x, y, names);
    conj.push_back(imp(guard, iff(relation_on(symbol, with_x, names),
                                  relation_on(symbol, with_y, names))));
  }
  return forall_all(zs, conjoin(conj));
}

Formula quasi_eq(std::size_t arity, const std::string& symbol, const std::string& x,
                 const std::string& y, NameSupply& names) {
  require_arity(arity);
  reserve(names, {x, y});
  F both = ff_formula(arity, symbol, x, y, names);
  auto xp = names.fresh(x + "p");
  F min_x = neg(F::exists(xp, land(strict_subset(xp, x, names),
                                   ff_formula(arity, symbol, xp, y, names))));
  auto yp = names.fresh(y + "p");
  F min_y = neg(F::exists(yp, land(strict_subset(yp, y, names),
                                   ff_formula(arity, symbol, x, yp, names))));
  return conjoin({both, min_x, min_y});
}

Formula fstrup(std::size_t arity, const std::string& symbol, const std::string& y,
               const std::vector<std::string>& periods, NameSupply& names) {
  require_arity(arity);
  if (periods.size() != arity) throw InvalidArgument("FSTRUP needs one period set per argument");
  reserve(names, {y});
  reserve(names, periods);
  std::vector<F> conj;
  for (const auto& p : periods) conj.push_back(disjoint(y, p, names));
  for (const auto& p : periods) conj.push_back(nonempty(p, names));
  auto xs = fresh_family("X", arity, names);
  std::vector<F> guard;
  for (std::size_t i = 0; i < arity; ++i) {
    guard.push_back(disjoint(xs[i], periods[i], names));
    guard.push_back(subset(y, xs[i], names));
  }
  std::vector<F> shifts;
  for (std::size_t j = 0; j < arity; ++j) {
    std::vector<SetTerm> shifted;
    for (std::size_t i = 0; i < arity; ++i) {
      if (i == j)
        shifted.emplace_back(xs[i], periods[i]);
      else
        shifted.emplace_back(xs[i]);
    }
    shifts.push_back(iff(F::relation(symbol, xs), relation_on(symbol, shifted, names)));
  }
  conj.push_back(forall_all(xs, imp(conjoin(guard), conjoin(shifts))));
  return conjoin(conj);
}

namespace {

Formula psi_b(std::size_t arity, const std::string& symbol) {
  NameSupply names;
  auto y = names.fresh("Y");
  auto ps = fresh_family("P", arity, names);
  F body = fstrup(arity, symbol, y, ps, names);
  return F::exists(y, exists_all(ps, body));
}

}  // namespace

Formula psi(std::size_t arity, const std::string& symbol) {
  require_arity(arity);
  if (arity == 1) return land(F::top(), psi_b(1, symbol));
  // Every section ψ_{n-1} is stated over a placeholder symbol first.
  std::string inner = symbol + "_" + std::to_string(arity - 1);
  F prev = psi(arity - 1, inner);
  std::vector<F> sections;
  for (std::size_t i = 0; i < arity; ++i) {
    NameSupply names;
    names.reserve_all(prev);
    auto z = names.fresh("Z" + std::to_string(i + 1));
    F sub = replace_relation(prev, inner, [&](const std::vector<std::string>& ts) {
      std::vector<std::string> args(ts.begin(), ts.end());
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(i), z);
      return F::relation(symbol, args);
    });
    sections.push_back(F::forall(z, sub));
  }
  return land(conjoin(sections), psi_b(arity, symbol));
}

Formula plus_def(const std::string& x, const std::string& y, const std::string& z,
                 const std::string& eqcard, NameSupply& names) {
  reserve(names, {x, y, z});
  auto a = names.fresh("A");
  auto b = names.fresh("B");
  auto v = names.fresh("v");
  F a_def = F::forall(v, iff(in(v, a), land(F::less(x, v), less_equal(v, z))));
  F b_def = F::forall(v, iff(in(v, b), F::less(v, y)));
  return land(less_equal(x, z),
              F::exists(a, land(a_def, F::exists(b, land(b_def, F::relation(eqcard, {a, b}))))));
}

// A ⊆ [0,z] holds 0 and z, |A| = x+1, and consecutive members of A are y apart.
Formula times_def(const std::string& x, const std::string& y, const std::string& z,
                  const std::string& eqcard, NameSupply& names) {
  reserve(names, {x, y, z});
  F zero_case = land(lor(is_zero(x, names), is_zero(y, names)), is_zero(z, names));
  auto a = names.fresh("A");
  auto b = names.fresh("B");
  auto c = names.fresh("C");
  auto d = names.fresh("D");
  auto o = names.fresh("o");
  auto s = names.fresh("s");
  auto t = names.fresh("t");
  auto v = names.fresh("v");
  F in_range = F::forall(v, imp(in(v, a), less_equal(v, z)));
  F has_zero = F::exists(o, land(is_zero(o, names), in(o, a)));
  F size = F::exists(b, land(F::forall(v, iff(in(v, b), less_equal(v, x))),
                             F::relation(eqcard, {a, b})));
  F gap = F::exists(c, land(F::forall(v, iff(in(v, c), land(less_equal(s, v), F::less(v, t)))),
                            F::exists(d, land(F::forall(v, iff(in(v, d), F::less(v, y))),
                                              F::relation(eqcard, {c, d})))));
  F steps = F::forall(s, F::forall(t, imp(consecutive(s, t, a, names), gap)));
  F positive = conjoin({neg(is_zero(x, names)), neg(is_zero(y, names)),
                        F::exists(a, conjoin({in_range, has_zero, in(z, a), size, steps}))});
  return lor(zero_case, positive);
}

Formula good_init_seg(const std::string& set, std::size_t arity, const std::string& symbol,
                      NameSupply& names) {
  reserve(names, {set});
  auto z = names.fresh("z");
  auto x = names.fresh("x");
  auto y = names.fresh("Y");
  F segment = F::exists(z, F::forall(x, iff(in(x, set), less_equal(x, z))));
  F reflexive =
      F::forall(y, imp(subset(y, set, names), quasi_eq(arity, symbol, y, y, names)));
  return land(segment, reflexive);
}

Formula theta(const Formula& g, std::size_t arity, const std::string& symbol,
              const std::string& eqcard) {
  require_arity(arity);
  if (!free_variables(g).empty()) throw InvalidArgument("Theta expects a sentence");
  for (const auto& r : relation_symbols(g)) {
    if (r.name != eqcard || r.arity != 2)
      throw InvalidArgument("Theta expects a sentence over {<, " + eqcard + "}; found " + r.name);
  }
  NameSupply names;
  names.reserve_all(g);
  names.reserve(symbol);
  auto s = names.fresh("S");
  F relativized = relativize(g, s);
  names.reserve_all(relativized);
  F star = replace_relation(relativized, eqcard, [&](const std::vector<std::string>& args) {
    return quasi_eq(arity, symbol, args[0], args[1], names);
  });
  return F::exists(s, land(good_init_seg(s, arity, symbol, names), star));
}

Formula eqcard_pow2(const std::string& x, const std::string& y, const std::string& symbol,
                    NameSupply& names) {
  reserve(names, {x, y});
  auto xs = fresh_family(x, kPow2SplitParts, names);
  auto ys = fresh_family(y, kPow2SplitParts, names);
  std::vector<F> conj{partition(x, xs, names), partition(y, ys, names)};
  for (std::size_t i = 0; i < kPow2SplitParts; ++i)
    conj.push_back(quasi_eq(1, symbol, xs[i], ys[i], names));
  std::vector<std::string> all = xs;
  all.insert(all.end(), ys.begin(), ys.end());
  return exists_all(all, conjoin(conj));
}

Formula primes_h(const std::string& x, const std::string& y, const std::string& symbol,
                 NameSupply& names) {
  reserve(names, {x, y});
  std::vector<F> alts{land(card_equals(0, x, names), card_equals(0, y, names)),
                      land(card_equals(1, x, names), card_equals(1, y, names))};
  for (std::size_t j = 1; j <= kPrimeSummands; ++j) {
    auto xs = fresh_family(x, j, names);
    auto ys = fresh_family(y, j, names);
    std::vector<F> conj{partition(x, xs, names), partition(y, ys, names)};
    for (std::size_t i = 0; i < j; ++i) {
      F small = lor(land(card_equals(2, xs[i], names), card_equals(2, ys[i], names)),
                    land(card_equals(3, xs[i], names), card_equals(3, ys[i], names)));
      conj.push_back(conjoin({F::relation(symbol, {xs[i]}), F::relation(symbol, {ys[i]}),
                              lor(quasi_eq(1, symbol, xs[i], ys[i], names), small)}));
    }
    std::vector<std::string> all = xs;
    all.insert(all.end(), ys.begin(), ys.end());
    alts.push_back(exists_all(all, conjoin(conj)));
  }
  return disjoin(alts);
}

Formula eqcard_primes(const std::string& x, const std::string& y, const std::string& symbol,
                      NameSupply& names) {
  reserve(names, {x, y});
  auto xs = fresh_family(x, kPrimesSplitParts, names);
  auto ys = fresh_family(y, kPrimesSplitParts, names);
  std::vector<F> conj{partition(x, xs, names), partition(y, ys, names)};
  for (std::size_t i = 0; i < kPrimesSplitParts; ++i)
    conj.push_back(primes_h(xs[i], ys[i], symbol, names));
  std::vector<std::string> all = xs;
  all.insert(all.end(), ys.begin(), ys.end());
  return exists_all(all, conjoin(conj));
}

namespace {

const std::vector<std::pair<TemplateKind, std::string>>& template_table() {
  static const std::vector<std::pair<TemplateKind, std::string>> table = {
      {TemplateKind::interval, "Interval"},
      {TemplateKind::consec, "Consec"},
      {TemplateKind::card, "CARD"},
      {TemplateKind::cardless, "CARDLESS"},
      {TemplateKind::union_of, "Union"},
      {TemplateKind::intersection_of, "Intersection"},
      {TemplateKind::even_card, "EvenCard"},
      {TemplateKind::f, "F"},
      {TemplateKind::ff, "FF"},
      {TemplateKind::quasi_eq, "QuasiEq"},
      {TemplateKind::fstrup, "FSTRUP"},
      {TemplateKind::psi, "Psi"},
      {TemplateKind::plus_def, "PlusDef"},
      {TemplateKind::times_def, "TimesDef"},
      {TemplateKind::good_init_seg, "GoodInitSeg"},
      {TemplateKind::theta, "Theta"},
      {TemplateKind::eqcard_pow2, "EqCardPow2"},
      {TemplateKind::eqcard_primes, "EqCardPrimes"},
      {TemplateKind::primes_h, "H"},
  };
  return table;
}

}  // namespace

std::optional<TemplateKind> template_kind_from_name(std::string_view name) {
  for (const auto& [k, n] : template_table())
    if (n == name) return k;
  return std::nullopt;
}

std::string template_name(TemplateKind kind) {
  for (const auto& [k, n] : template_table())
    if (k == kind) return n;
  return "?";
}

std::vector<std::string> template_names() {
  std::vector<std::string> out;
  for (const auto& entry : template_table()) out.push_back(entry.second);
  return out;
}

Formula build_template(const FormulaTemplate& t) {
  if (t.n == 0) throw InvalidArgument("template arity n must be at least 1");
  if (!is_identifier(t.symbol) || !is_identifier(t.eqcard))
    throw InvalidArgument("invalid relation symbol name");
  NameSupply names;
  auto unary_only = [&] {
    if (t.n != 1) throw InvalidArgument(template_name(t.kind) + " is defined for unary R only");
  };
  switch (t.kind) {
    case TemplateKind::interval:
      return interval("x", "y", "X", names);
    case TemplateKind::consec:
      return consecutive("x", "y", "Z", names);
    case TemplateKind::card:
      return card_equals(t.k, "X", names);
    case TemplateKind::cardless:
      return card_less(t.k, "X", names);
    case TemplateKind::union_of:
      return union_is("Z", "X", "Y", names);
    case TemplateKind::intersection_of:
      return intersection_is("Z", "X", "Y", names);
    case TemplateKind::even_card:
      return even_card("X", names);
    case TemplateKind::f:
      unary_only();
      return f_formula(t.symbol, "X", "Y", names);
    case TemplateKind::ff:
      return ff_formula(t.n, t.symbol, "X", "Y", names);
    case TemplateKind::quasi_eq:
      return quasi_eq(t.n, t.symbol, "X", "Y", names);
    case TemplateKind::fstrup: {
      std::vector<std::string> ps;
      for (std::size_t i = 1; i <= t.n; ++i) ps.push_back("P" + std::to_string(i));
      return fstrup(t.n, t.symbol, "Y", ps, names);
    }
    case TemplateKind::psi:
      return psi(t.n, t.symbol);
    case TemplateKind::plus_def:
      return plus_def("x", "y", "z", t.eqcard, names);
    case TemplateKind::times_def:
      return times_def("x", "y", "z", t.eqcard, names);
    case TemplateKind::good_init_seg:
      return good_init_seg("X", t.n, t.symbol, names);
    case TemplateKind::theta:
      if (!t.sentence) throw InvalidArgument("Theta needs a sentence G");
      return theta(*t.sentence, t.n, t.symbol, t.eqcard);
    case TemplateKind::eqcard_pow2:
      unary_only();
      return eqcard_pow2("X", "Y", t.symbol, names);
    case TemplateKind::eqcard_primes:
      unary_only();
      return eqcard_primes("X", "Y", t.symbol, names);
    case TemplateKind::primes_h:
      unary_only();
      return primes_h("X", "Y", t.symbol, names);
  }
  throw InvalidArgument("unknown template");
}

Signature template_signature(const FormulaTemplate& t) {
  switch (t.kind) {
    case TemplateKind::interval:
    case TemplateKind::consec:
    case TemplateKind::card:
    case TemplateKind::cardless:
    case TemplateKind::union_of:
    case TemplateKind::intersection_of:
    case TemplateKind::even_card:
      return {};
    case TemplateKind::plus_def:
    case TemplateKind::times_def:
      return {{t.eqcard, 2, true}};
    case TemplateKind::f:
    case TemplateKind::eqcard_pow2:
    case TemplateKind::eqcard_primes:
    case TemplateKind::primes_h:
      return {{t.symbol, 1, true}};
    default:
      return {{t.symbol, t.n, true}};
  }
}

}  // namespace msocard
