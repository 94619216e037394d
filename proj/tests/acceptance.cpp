// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "msocard/finite_model.hpp"
#include "support.hpp"

using namespace msocard;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> artifacts;  // printed below the verdict line
};

Outcome fail(std::string why) { return {false, std::move(why), {}}; }

// 1. Compiled introductory relations against hand-written automata.
Outcome bet_fixtures() {
  Dfa r1 = compile(testkit::r1_formula());
  Dfa r2 = compile(testkit::r2_formula());
  Dfa r3 = compile(testkit::r3_formula());
  if (!equivalent(r1, testkit::ones_plus_fixture())) return fail("R1 differs from 11*");
  if (!equivalent(r2, testkit::even_ones_fixture())) return fail("R2 differs from even-ones");
  if (!equivalent(r3, testkit::parity_match_fixture())) return fail("R3 differs from parity match");
  return {true, "states " + std::to_string(r1.state_count()) + "/" +
                    std::to_string(r2.state_count()) + "/" + std::to_string(r3.state_count()), {}};
}

// 2. Automaton of InitSeg(S) ∧ f relativised to S, read at S = [0,q), against
// brute-force satisfaction of f in M_q, for every q ≤ 9 and every tuple in M_q.
Outcome compiler_vs_model() {
  constexpr std::size_t kFormulas = 200, kMaxQ = 9;
  testkit::FormulaGenerator gen(20240917);
  const Formula init_seg = testkit::parse("all1 s. all1 t. (t < s & s in S) -> t in S");
  std::size_t checked = 0;
  for (std::size_t n = 0; n < kFormulas; ++n) {
    Formula f = gen(3, 9);
    Formula g = Formula::conjunction(init_seg, relativize(f, "S"));
    Dfa a = compile(g);
    auto fv = free_variables(f);
    std::vector<std::string> sets(fv.sets.begin(), fv.sets.end());
    // Track of each set variable in the compiled automaton.
    std::vector<std::size_t> track;
    for (const auto& v : sets) track.push_back(a.track_of(v));
    const std::size_t s_track = a.track_of("S");
    for (std::size_t q = 1; q <= kMaxQ; ++q) {
      FiniteModel m{q, {}};
      Evaluator e(f, m);
      const std::size_t total = std::size_t{1} << (q * sets.size());
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::uint64_t> values;
        for (std::size_t j = 0; j < sets.size(); ++j)
          values.push_back((code >> (j * q)) & ((Mask{1} << q) - 1));
        Word w(q, Letter{1} << s_track);
        for (std::size_t j = 0; j < sets.size(); ++j)
          for (std::size_t i = 0; i < q; ++i)
            if ((values[j] >> i) & 1U) w[i] |= Letter{1} << track[j];
        ++checked;
        if (a.accepts(w) != e.evaluate(values)) {
          std::ostringstream why;
          why << "formula " << print_formula(f) << " q=" << q;
          for (std::size_t j = 0; j < sets.size(); ++j)
            why << ' ' << sets[j] << '=' << mask_to_string(values[j]);
          return fail(why.str());
        }
      }
    }
  }
  return {true, std::to_string(kFormulas) + " formulas, " + std::to_string(checked) + " tuples", {}};
}

// 3. decompose ∘ rel_to_dfa ∘ decompose is stable and reproduces the automaton.
Outcome decomposition_round_trip() {
  std::vector<std::pair<std::string, Dfa>> inputs = {{"R2", compile(testkit::r2_formula())},
                                                     {"R3", compile(testkit::r3_formula())}};
  std::mt19937_64 rng(7);
  for (std::size_t n = 0; n < 50; ++n) {
    std::size_t arity = 1 + n % 3;
    std::size_t terms = 1 + (n / 3) % 3;
    RecognizableRel r = testkit::random_rel(rng, arity, terms, 4, 5);
    inputs.emplace_back(r.to_string(), rel_to_dfa(r));
  }
  for (const auto& [name, a] : inputs) {
    RecognizableRel r1 = decompose(a);
    Dfa back = rel_to_dfa(r1, a.labels());
    RecognizableRel r2 = decompose(back);
    if (!(r1 == r2)) return fail(name + ": decomposition not stable");
    if (!equivalent(back, a)) return fail(name + ": rel_to_dfa(decompose) differs");
  }
  return {true, std::to_string(inputs.size()) + " relations", {}};
}

// 4. STRUP confirmation for primes x [0,3] and refutation for four oracles.
Outcome strup() {
  CardOracle r4 = parse_oracle("primesx:le3");
  if (auto w = check_mu_strup(r4, StrupMu{4, {1, 1}}, 200)) return fail("R4: " + w->to_string());
  std::size_t total = 0;
  for (const char* spec : {"eqcard", "pow:2", "primes", "squares"}) {
    CardOracle o = parse_oracle(spec);
    for (const auto& e : find_strup_violation(o, 8)) {
      ++total;
      if (!e.witness) return fail(std::string(spec) + ": no witness for " + e.mu.to_string());
      if (!check_mu_strup(o, e.mu, o.bound - *std::max_element(e.mu.periods.begin(), e.mu.periods.end())))
        return fail(std::string(spec) + ": witness not reproduced");
    }
  }
  return {true, std::to_string(total) + " mu refuted", {}};
}

// 5. PlusDef and TimesDef in M_q are the graphs of + and x.
Outcome arithmetic() {
  FormulaTemplate plus;
  plus.kind = TemplateKind::plus_def;
  FormulaTemplate times;
  times.kind = TemplateKind::times_def;
  Formula fp = build_template(plus), ft = build_template(times);
  for (std::size_t q = 1; q <= 12; ++q) {
    FiniteModel m{q, {{"EqCard", eqcard_oracle()}}};
    auto gp = graph_q(fp, m, {"x", "y", "z"});
    auto gt = graph_q(ft, m, {"x", "y", "z"});
    std::vector<std::vector<std::size_t>> ep, et;
    for (std::size_t x = 0; x < q; ++x)
      for (std::size_t y = 0; y < q; ++y)
        for (std::size_t z = 0; z < q; ++z) {
          if (x + y == z) ep.push_back({x, y, z});
          if (x * y == z) et.push_back({x, y, z});
        }
    if (gp != ep) return fail("PlusDef differs at q=" + std::to_string(q));
    if (gt != et) return fail("TimesDef differs at q=" + std::to_string(q));
  }
  return {true, "q=1..12", {}};
}

// 6. Profile-level evaluation equals brute force on every pair of subsets.
Outcome dual_evaluators() {
  std::size_t pairs = 0;
  for (const char* spec : {"pow:2", "primes", "squares", "eqcard"}) {
    CardOracle o = parse_oracle(spec);
    std::vector<std::pair<CardTemplate, TemplateKind>> kinds;
    if (o.arity == 1) kinds.push_back({CardTemplate::f, TemplateKind::f});
    kinds.push_back({CardTemplate::ff, TemplateKind::ff});
    kinds.push_back({CardTemplate::quasi_eq, TemplateKind::quasi_eq});
    for (auto [card, kind] : kinds) {
      FormulaTemplate t;
      t.kind = kind;
      t.n = o.arity;
      Formula f = build_template(t);
      for (std::size_t q = 1; q <= 6; ++q) {
        FiniteModel m{q, {{"R", o}}};
        Evaluator e(f, m);
        FastCardEvaluator fast(o, q);
        for (Mask x = 0; x < (Mask{1} << q); ++x)
          for (Mask y = 0; y < (Mask{1} << q); ++y) {
            std::size_t a = popcount(x), b = popcount(y), i = popcount(x & y);
            bool quick = card == CardTemplate::quasi_eq ? fast.quasi_eq(a, b, i) : fast.ff(a, b, i);
            ++pairs;
            if (quick != e.evaluate({x, y}))
              return fail(std::string(spec) + " " + template_name(kind) + " q=" + std::to_string(q) +
                          " X=" + mask_to_string(x) + " Y=" + mask_to_string(y));
          }
      }
    }
  }
  return {true, std::to_string(pairs) + " pairs", {}};
}

bool sound_fast(const FastCardEvaluator& e) {
  const std::size_t q = e.q();
  for (std::size_t x = 0; x <= q; ++x)
    for (std::size_t y = 0; y <= q; ++y)
      if (x != y && e.quasi_eq_some(x, y)) return false;
  return true;
}

// 7. Powers of two: φ sound, exact on sizes ≤ 4, and the 8-way split works.
Outcome powers_of_two() {
  CardOracle o = pow_oracle(2);
  for (std::size_t q = 16; q <= 31; ++q) {
    FastCardEvaluator e(o, q);
    if (!sound_fast(e)) return fail("phi unsound at q=" + std::to_string(q));
    for (std::size_t x = 0; x <= 4; ++x)
      if (!e.quasi_eq_robust(x, x)) return fail("phi misses size " + std::to_string(x) + " at q=" + std::to_string(q));
    if (!verify_eqcard_split(SplitVariant::pow2, o, q)) return fail("split fails at q=" + std::to_string(q));
  }
  return {true, "q=16..31", {}};
}

// 8. Primes: φ exact on prime sizes in (3, q/3], H exact up to q/3, 4-way split works.
Outcome primes() {
  CardOracle o = primes_oracle();
  for (std::size_t q = 6; q <= 60; ++q) {
    FastCardEvaluator e(o, q);
    const std::string at = " at q=" + std::to_string(q);
    if (!sound_fast(e)) return fail("phi unsound" + at);
    for (std::size_t p = 4; p <= q / 3; ++p)
      if (is_prime(p) && !e.quasi_eq_robust(p, p)) return fail("phi misses prime " + std::to_string(p) + at);
    PrimesH h = primes_h_table(e, o);
    for (std::size_t a = 0; a <= q / 3; ++a) {
      if (!h.robust[a][a]) return fail("H misses size " + std::to_string(a) + at);
      for (std::size_t b = 0; b <= q / 3; ++b)
        if (a != b && h.some[a][b]) return fail("H relates sizes " + std::to_string(a) + "," + std::to_string(b) + at);
    }
    if (!verify_eqcard_split(SplitVariant::primes, o, q)) return fail("split fails" + at);
  }
  return {true, "q=6..60", {}};
}

// 9. θ(G) is satisfiable with the powers-of-two oracle, and inside every good
// initial segment G* agrees with G evaluated on a model of that size.
Outcome theta_reduction() {
  Signature eq_sig{{"EqCard", 2, true}};
  Formula g = testkit::parse(
      "ex2 X. ex2 Y. ~(X = Y) & EqCard(X,Y) & (ex1 x. x in X) & ex1 z. ~(z in X) & ~(z in Y)",
      eq_sig);
  auto direct = [&](std::size_t s) {
    return eval(g, FiniteModel{s, {{"EqCard", eqcard_oracle()}}}, {});
  };
  auto least = bounded_sat(g, {{"EqCard", eqcard_oracle()}}, 8);
  if (!least.q || *least.q != 3) return fail("G should first hold at q=3");

  FormulaTemplate t;
  t.kind = TemplateKind::theta;
  t.sentence = g;
  Formula th = build_template(t);
  CardOracle o = pow_oracle(2);
  auto found = bounded_sat(th, {{"R", o}}, 64);
  if (!found.q) return fail("Theta(G) unsatisfied up to q=64");
  const std::size_t q = *found.q;

  // Open the outer ∃S: th = ∃S body.
  const std::string s_name = th.bound_variable();
  Formula good = [&] {
    NameSupply names;
    names.reserve_all(th);
    return good_init_seg(s_name, 1, "R", names);
  }();
  Formula body = th.child();
  FiniteModel m{q, {{"R", o}}};
  Evaluator eb(body, m), eg(good, m);
  std::size_t segments = 0, witness = 0;
  for (std::size_t s = 1; s <= q; ++s) {
    Mask seg = (Mask{1} << s) - 1;
    if (!eg.evaluate({seg})) continue;
    ++segments;
    bool relativised = eb.evaluate({seg});
    if (relativised != direct(s))
      return fail("segment [0," + std::to_string(s) + ") disagrees with G at size " + std::to_string(s));
    if (relativised && witness == 0) witness = s;
  }
  if (witness == 0) return fail("no witnessing segment at q=" + std::to_string(q));
  return {true, "Theta(G) first holds at q=" + std::to_string(q) + ", segment [0," +
                    std::to_string(witness) + "), " + std::to_string(segments) + " good segments",
          {}};
}

// 10. Invariance is checked, never assumed; every counterexample re-checks.
Outcome invariance_audit() {
  Outcome out;
  std::size_t runs = 0, counterexamples = 0;
  auto recheck = [&](const CardOracle& o, std::size_t q, const ReportLine& l) {
    FormulaTemplate t;
    t.n = o.arity;
    Formula phi = build_template(t);
    if (q <= 6) {
      Evaluator e(phi, FiniteModel{q, {{"R", o}}});
      return e.evaluate({l.sets[0], l.sets[1]}) && !e.evaluate({l.sets[2], l.sets[3]});
    }
    FastCardEvaluator f(o, q);
    return f.quasi_eq(popcount(l.sets[0]), popcount(l.sets[1]), popcount(l.sets[0] & l.sets[1])) &&
           !f.quasi_eq(popcount(l.sets[2]), popcount(l.sets[3]), popcount(l.sets[2] & l.sets[3]));
  };
  for (const char* spec : {"pow:2", "primes", "squares", "up:0,2,0", "fin:1|2|3|4", "eqcard"}) {
    CardOracle o = parse_oracle(spec);
    std::size_t top = o.arity == 1 ? 32 : 12;
    std::vector<QuasiReport> reps = {verify_quasi_eqcard(o, 3, 1, 6, VerifyMode::both),
                                     verify_quasi_eqcard(o, 3, 7, top, VerifyMode::fast)};
    for (const auto& rep : reps) {
      for (const auto& l : rep.lines) {
        if (l.check == "agreement" && !l.ok) return fail(std::string(spec) + ": fast and brute disagree " + l.witness);
        if (l.check != "invariance" && l.check != "brute-invariance") continue;
        ++runs;
        if (l.ok) continue;
        ++counterexamples;
        if (l.sets.size() != 4 || !recheck(o, l.q, l))
          return fail(std::string(spec) + ": counterexample does not re-check at q=" + std::to_string(l.q));
        out.artifacts.push_back(std::string(spec) + " " + l.to_string());
      }
    }
  }
  // F itself is not profile-invariant in general.
  FormulaTemplate tf;
  tf.kind = TemplateKind::f;
  IqResult r = i_q(build_template(tf), FiniteModel{5, {{"R", parse_oracle("fin:1|2|3|4")}}});
  ++runs;
  if (!r.invariant) {
    ++counterexamples;
    auto [h, f] = *r.counterexample;
    out.artifacts.push_back("fin:1|2|3|4 F q=5 holds:X=" + mask_to_string(h[0]) + ",Y=" +
                            mask_to_string(h[1]) + ";fails:X=" + mask_to_string(f[0]) +
                            ",Y=" + mask_to_string(f[1]));
  }
  out.detail = std::to_string(runs) + " invariance checks, " + std::to_string(counterexamples) +
               " counterexamples re-checked";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {"bet-fixtures", bet_fixtures},
      {"compiler-vs-model", compiler_vs_model},
      {"decomposition-round-trip", decomposition_round_trip},
      {"strup", strup},
      {"arithmetic", arithmetic},
      {"dual-evaluators", dual_evaluators},
      {"powers-of-two", powers_of_two},
      {"primes", primes},
      {"theta-reduction", theta_reduction},
      {"invariance-audit", invariance_audit},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char t[32];
    std::snprintf(t, sizeof t, "%.2fs", secs);
    std::cout << "criterion " << (i + 1) << " " << criteria[i].name << ": "
              << (o.ok ? "PASS" : "FAIL") << " (" << t << ") " << o.detail << std::endl;
    for (const auto& a : o.artifacts) std::cout << "  " << a << '\n';
    all = all && o.ok;
  }
  return all ? 0 : 1;
}
