#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "msocard/error.hpp"
#include "support.hpp"

using namespace msocard;
using testkit::parse;

namespace {

bool mentions_symbol(const Formula& f, const std::string& symbol) {
  for (const auto& r : relation_symbols(f))
    if (r.name == symbol) return true;
  return false;
}

FormulaTemplate make(TemplateKind kind, std::size_t n = 1, std::size_t k = 0) {
  FormulaTemplate t;
  t.kind = kind;
  t.n = n;
  t.k = k;
  return t;
}

/// Every template with a small valid parameter choice.
std::vector<FormulaTemplate> sample_templates() {
  std::vector<FormulaTemplate> out;
  for (auto kind : {TemplateKind::interval, TemplateKind::consec, TemplateKind::union_of,
                    TemplateKind::intersection_of, TemplateKind::even_card, TemplateKind::f,
                    TemplateKind::plus_def, TemplateKind::times_def, TemplateKind::good_init_seg,
                    TemplateKind::eqcard_pow2, TemplateKind::eqcard_primes, TemplateKind::primes_h})
    out.push_back(make(kind));
  for (std::size_t k = 0; k <= 3; ++k) {
    out.push_back(make(TemplateKind::card, 1, k));
    out.push_back(make(TemplateKind::cardless, 1, k));
  }
  for (std::size_t n = 1; n <= 3; ++n) {
    out.push_back(make(TemplateKind::ff, n));
    out.push_back(make(TemplateKind::quasi_eq, n));
    out.push_back(make(TemplateKind::fstrup, n));
    out.push_back(make(TemplateKind::psi, n));
  }
  auto th = make(TemplateKind::theta);
  th.sentence = parse("ex2 X. EqCard(X,X)", Signature{{"EqCard", 2, true}});
  out.push_back(th);
  return out;
}

}  // namespace

TEST_CASE("parse: quantifier prefix and negated atom") {
  Formula f = parse("ex1 x. all1 y. ~(y < x)");
  CHECK(f == Formula::exists("x", Formula::forall("y", Formula::negation(Formula::less("y", "x")))));
}

TEST_CASE("parse: relation atom needs its signature entry") {
  Signature sig{{"R", 2, true}};
  Formula f = parse("R(X,Y)", sig);
  CHECK(f.kind() == NodeKind::relation);
  CHECK(f.symbol() == "R");
  CHECK(f.variables() == std::vector<std::string>{"X", "Y"});
  CHECK_THROWS_AS(parse("R(X,Y)"), Error);
  CHECK_THROWS_AS(parse("R(X)", sig), Error);
}

TEST_CASE("parse: order between set variables is a sort error") {
  CHECK_THROWS_AS(parse("x in X & X < Y"), Error);
}

TEST_CASE("parse: syntax errors carry a position") {
  try {
    parse("ex1 x. x < ");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() >= 9);
  }
  CHECK_THROWS_AS(parse("ex1 X. x in X"), Error);
  CHECK_THROWS_AS(parse("x in y"), Error);
}

TEST_CASE("parse: precedence of connectives") {
  CHECK(parse("x < y & y < z | z < x") ==
        Formula::disjunction(Formula::conjunction(Formula::less("x", "y"), Formula::less("y", "z")),
                             Formula::less("z", "x")));
  CHECK(parse("x < y -> y < z -> z < x") ==
        Formula::implication(Formula::less("x", "y"),
                             Formula::implication(Formula::less("y", "z"), Formula::less("z", "x"))));
  CHECK(parse("x < y <-> ~y < x").kind() == NodeKind::equivalence);
}

TEST_CASE("parse: set sugar expands to membership") {
  Formula f = parse("X sub Y");
  CHECK(f.kind() == NodeKind::forall_element);
  CHECK(free_variables(f).sets == std::set<std::string>{"X", "Y"});
  Formula g = parse("X = Y");
  CHECK(free_variables(g).elements.empty());
}

TEST_CASE("free variables") {
  CHECK(free_variables(build_template(make(TemplateKind::f))) ==
        FreeVariables{{}, {"X", "Y"}});
  CHECK(free_variables(parse("ex1 x. all1 y. ~(y < x)")).empty());
  CHECK(free_variables(parse("x < y")) == FreeVariables{{"x", "y"}, {}});
  CHECK(free_variables(parse("(ex1 x. x in X) & x < y")) == FreeVariables{{"x", "y"}, {"X"}});
}

TEST_CASE("templates: free variables follow the naming conventions") {
  CHECK(free_variables(build_template(make(TemplateKind::card, 1, 2))).sets ==
        std::set<std::string>{"X"});
  CHECK(free_variables(build_template(make(TemplateKind::plus_def))).elements ==
        std::set<std::string>{"x", "y", "z"});
  CHECK(free_variables(build_template(make(TemplateKind::interval))) ==
        FreeVariables{{"x", "y"}, {"X"}});
  CHECK(free_variables(build_template(make(TemplateKind::fstrup, 2))).sets ==
        std::set<std::string>{"P1", "P2", "Y"});
  CHECK(free_variables(build_template(make(TemplateKind::psi, 2))).empty());
}

TEST_CASE("templates: FF(1) is F up to bound names") {
  CHECK(alpha_equivalent(build_template(make(TemplateKind::ff, 1)),
                         build_template(make(TemplateKind::f))));
  CHECK_FALSE(alpha_equivalent(build_template(make(TemplateKind::ff, 1)),
                               build_template(make(TemplateKind::quasi_eq, 1))));
}

TEST_CASE("templates: Psi(1) is a trivially true conjunct and the b-part") {
  Formula p = build_template(make(TemplateKind::psi, 1));
  REQUIRE(p.kind() == NodeKind::conjunction);
  CHECK(p.child(0).kind() == NodeKind::truth);
  CHECK(p.child(1).kind() == NodeKind::exists_set);
  Formula p2 = build_template(make(TemplateKind::psi, 2));
  REQUIRE(p2.kind() == NodeKind::conjunction);
  CHECK(p2.child(0).kind() != NodeKind::truth);
  // Only the binary symbol survives substitution.
  auto syms = relation_symbols(p2);
  REQUIRE(syms.size() == 1);
  CHECK(syms[0].name == "R");
  CHECK(syms[0].arity == 2);
}

TEST_CASE("templates: Theta wraps a relativised copy under a good initial segment") {
  Signature sig{{"EqCard", 2, true}};
  auto t = make(TemplateKind::theta);
  t.sentence = parse("ex2 X. EqCard(X,X)", sig);
  Formula th = build_template(t);
  REQUIRE(th.kind() == NodeKind::exists_set);
  const std::string s = th.bound_variable();
  REQUIRE(th.child().kind() == NodeKind::conjunction);
  NameSupply names;
  names.reserve_all(th);
  CHECK(alpha_equivalent(th.child().child(0), good_init_seg(s, 1, "R", names)));
  CHECK_FALSE(mentions_symbol(th, "EqCard"));
  CHECK(mentions_symbol(th, "R"));
  // G* quantifies X inside S.
  Formula gstar = th.child().child(1);
  REQUIRE(gstar.kind() == NodeKind::exists_set);
  CHECK(gstar.child().kind() == NodeKind::conjunction);
  CHECK(free_variables(gstar).sets == std::set<std::string>{s});

  t.sentence = parse("ex2 X. EqCard(X,X) & X = Y", sig);
  CHECK_THROWS_AS(build_template(t), Error);
}

TEST_CASE("templates: parameter validation") {
  CHECK_THROWS_AS(build_template(make(TemplateKind::f, 2)), Error);
  CHECK_THROWS_AS(build_template(make(TemplateKind::ff, 0)), Error);
  CHECK_THROWS_AS(build_template(make(TemplateKind::eqcard_pow2, 2)), Error);
  CHECK_THROWS_AS(build_template(make(TemplateKind::theta)), Error);
  NameSupply names;
  CHECK_THROWS_AS(fstrup(2, "R", "Y", {"P1"}, names), Error);
  CHECK(template_kind_from_name("QuasiEq") == TemplateKind::quasi_eq);
  CHECK_FALSE(template_kind_from_name("Nope").has_value());
  for (const auto& name : template_names())
    CHECK(template_name(*template_kind_from_name(name)) == name);
}

TEST_CASE("relativize") {
  CHECK(relativize(parse("ex1 x. x = x"), "S") == parse("ex1 x. x in S & x = x"));
  CHECK(relativize(parse("all1 x. x < y"), "S") == parse("all1 x. x in S -> x < y"));
  Formula r = relativize(parse("all2 Y. ex1 y. y in Y"), "S");
  REQUIRE(r.kind() == NodeKind::forall_set);
  REQUIRE(r.child().kind() == NodeKind::implication);
  CHECK(alpha_equivalent(r.child().child(0), parse("Y sub S")));
  CHECK(r.child().child(1) == parse("ex1 y. y in S & y in Y"));
  CHECK_THROWS_AS(relativize(parse("ex2 S. ex1 x. x in S"), "S"), Error);
  CHECK_THROWS_AS(relativize(parse("ex1 x. x in S"), "S"), Error);
  CHECK_THROWS_AS(relativize(parse("x < y"), "s"), Error);
}

TEST_CASE("property: printing then parsing every template is the identity") {
  for (const auto& t : sample_templates()) {
    Formula f = build_template(t);
    CAPTURE(template_name(t.kind));
    CHECK(parse_formula(print_formula(f), template_signature(t)) == f);
  }
}

TEST_CASE("property: printing then parsing random formulas is the identity") {
  testkit::FormulaGenerator gen(11);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen(3, 12);
    CHECK(parse(print_formula(f)) == f);
    CHECK(alpha_equivalent(f, f));
  }
}

TEST_CASE("property: templates are well formed over their signature") {
  for (const auto& t : sample_templates()) {
    CAPTURE(template_name(t.kind));
    CHECK_NOTHROW(check_well_formed(build_template(t), template_signature(t)));
  }
}

TEST_CASE("name supply is deterministic") {
  NameSupply a({"v", "v_1"});
  CHECK(a.fresh("v") == "v_2");
  CHECK(a.fresh("w") == "w");
  CHECK(a.fresh("w") == "w_1");
  CHECK(print_formula(build_template(make(TemplateKind::psi, 2))) ==
        print_formula(build_template(make(TemplateKind::psi, 2))));
}

TEST_CASE("replace_relation substitutes every occurrence") {
  Signature sig{{"R", 1, true}};
  Formula f = parse("R(X) & ex2 Y. R(Y)", sig);
  Formula g = replace_relation(f, "R", [](const std::vector<std::string>& a) {
    return Formula::relation("S", {a[0], a[0]});
  });
  CHECK_FALSE(mentions_symbol(g, "R"));
  CHECK(relation_symbols(g).front().arity == 2);
}
