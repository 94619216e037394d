#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "msocard/error.hpp"
#include "support.hpp"

using namespace msocard;

namespace {

Dfa ones() { return testkit::ones_plus_fixture(); }
Dfa evens() { return testkit::even_ones_fixture(); }

/// Random complete DFA over the given labels, restricted to canonical words.
Dfa random_dfa(std::mt19937_64& rng, std::vector<std::string> labels) {
  std::uniform_int_distribution<std::size_t> nstates(1, 4);
  std::size_t n = nstates(rng);
  std::uniform_int_distribution<State> st(0, static_cast<State>(n - 1));
  std::size_t sigma = std::size_t{1} << labels.size();
  std::vector<State> delta(n * sigma);
  for (auto& d : delta) d = st(rng);
  std::vector<bool> acc(n);
  for (std::size_t i = 0; i < n; ++i) acc[i] = (rng() & 1U) != 0;
  return restrict_to_canonical(Dfa(std::move(labels), n, 0, acc, delta));
}

/// Words whose accepted-ness is asserted by `expect`, all canonical words up to `len`.
template <typename Pred>
void agree(const Dfa& a, std::size_t len, Pred expect) {
  for (const auto& w : canonical_words(a.tracks(), len)) {
    CAPTURE(word_to_string(w, a.tracks()));
    CHECK(a.accepts(w) == expect(w));
  }
}

Word strip_zeros(Word w) {
  while (!w.empty() && w.back() == 0) w.pop_back();
  return w;
}

/// Deletes track `t` from every letter.
Word erase_track(const Word& w, std::size_t t) {
  Word out;
  for (Letter a : w) {
    Letter low = a & ((Letter{1} << t) - 1);
    Letter high = (a >> (t + 1)) << t;
    out.push_back(low | high);
  }
  return out;
}

/// All words (canonical or not) of length ≤ len over n tracks.
std::vector<Word> all_words(std::size_t n, std::size_t len) {
  std::vector<Word> out{{}};
  std::vector<Word> layer{{}};
  for (std::size_t l = 1; l <= len; ++l) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (Letter a = 0; a < (Letter{1} << n); ++a) {
        Word v = w;
        v.push_back(a);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer.swap(next);
  }
  return out;
}

}  // namespace

TEST_CASE("membership on the 11* fixture") {
  CHECK(ones().accepts(word_from_string("111", 1)));
  CHECK_FALSE(ones().accepts(word_from_string("10", 1)));
  CHECK_FALSE(ones().accepts({}));
  CHECK(minimize(ones()).state_count() == 3);
}

TEST_CASE("combine") {
  Dfa r2 = evens();
  CHECK(equivalent(intersect(r2, r2), r2));
  CHECK(equivalent(unite(r2, Dfa::empty({"X"})), r2));
  // 11* ∩ even ones = 1^{2k}, k ≥ 1.
  agree(intersect(ones(), r2), 10, [](const Word& w) {
    if (w.empty() || w.size() % 2 != 0) return false;
    for (Letter a : w)
      if (a != 1) return false;
    return true;
  });
  CHECK_THROWS_AS(intersect(ones(), testkit::parity_match_fixture()), Error);
}

TEST_CASE("complement") {
  CHECK(equivalent(complement(complement(ones())), ones()));
  CHECK(complement(ones()).accepts(word_from_string("101", 1)));
  CHECK_FALSE(complement(ones()).accepts(word_from_string("10", 1)));
  CHECK(is_empty(complement(Dfa::canonical({"X"}))));
  CHECK(is_empty(intersect(ones(), complement(ones()))));
}

TEST_CASE("cylindrify") {
  CHECK(is_empty(cylindrify(Dfa::empty({"X"}), "Y")));
  Dfa c = cylindrify(ones(), "Y");
  CHECK(c.labels() == std::vector<std::string>{"X", "Y"});
  // (X,Y) letters (1,0)(1,1).
  CHECK(c.accepts(Word{0b01, 0b11}));
  // Y may extend past the end of X.
  CHECK(c.accepts(Word{0b01, 0b00, 0b10}));
  CHECK(c.accepts(Word{0b01, 0b10}));
  CHECK_FALSE(c.accepts(Word{0b01, 0b10, 0b01}));
  CHECK(equivalent(project(c, "Y"), ones()));
  Dfa front = cylindrify(ones(), "A");
  CHECK(front.labels() == std::vector<std::string>{"A", "X"});
  CHECK_THROWS_AS(cylindrify(ones(), "X"), Error);
}

TEST_CASE("project") {
  Dfa r3 = testkit::parity_match_fixture();
  Dfa p = project(r3, "Y");
  CHECK(equivalent(p, Dfa::canonical({"X"})));
  Dfa zero = project(ones(), "X");
  CHECK(zero.tracks() == 0);
  CHECK(zero.accepts({}));
  CHECK(is_empty(project(Dfa::empty({"X"}), "X")));
  CHECK_THROWS_AS(project(ones(), "Q"), Error);
}

TEST_CASE("minimize") {
  Dfa m = minimize(ones());
  CHECK(minimize(m) == m);
  // Two constructions of the even-cardinality language.
  Dfa built = compile(testkit::r2_formula());
  Dfa counted = rel_to_dfa(RecognizableRel(1, {{UpSet::modulo(2, 0)}}), {"X"});
  CHECK(minimize(built) == minimize(counted));
  CHECK(minimize(built) == minimize(evens()));
}

TEST_CASE("remap_tracks") {
  Dfa r = remap_tracks(ones(), {"A"}, {0});
  CHECK(r.labels() == std::vector<std::string>{"A"});
  CHECK(r.accepts(Word{1, 1}));
  // Both old tracks read the same new track: the diagonal X = Y.
  Dfa r3 = remap_tracks(testkit::parity_match_fixture(), {"A"}, {0, 0});
  CHECK(equivalent(r3, Dfa::canonical({"A"})));
  CHECK_THROWS_AS(remap_tracks(ones(), {"A", "B"}, {1}), Error);
}

TEST_CASE("text form") {
  Dfa r3 = testkit::parity_match_fixture();
  std::string text = dfa_to_text(r3);
  CHECK(text.rfind("dfa tracks=2 labels=X,Y states=3 initial=0\naccepting: 0\n", 0) == 0);
  CHECK(dfa_from_text(text) == r3);
  CHECK(dfa_from_text("# comment\n\n" + text) == r3);
  CHECK_THROWS_AS(dfa_from_text("dfa tracks=1 labels=X states=1 initial=0\naccepting:\n0 0 0\n"), Error);
  CHECK_THROWS_AS(dfa_from_text("dfa tracks=1 labels=X states=1 initial=0\naccepting:\n0 0 0\n0 0 0\n0 1 0\n"), Error);
  CHECK_THROWS_AS(dfa_from_text("automaton\n"), Error);
  CHECK(word_to_string({}, 1) == "ε");
  CHECK(word_to_string(Word{1, 0, 1}, 1) == "101");
  CHECK(word_to_string(Word{0b01, 0b11}, 2) == "10 11");
  CHECK(word_from_string("10 11", 2) == Word{0b01, 0b11});
  CHECK(letter_to_string(0, 0) == "-");
}

TEST_CASE("shortest accepted word") {
  Word w;
  REQUIRE(shortest_accepted(intersect(ones(), evens()), w));
  CHECK(w == Word{1, 1});
  CHECK_FALSE(shortest_accepted(Dfa::empty({"X"}), w));
}

TEST_CASE("canonical words") {
  auto ws = canonical_words(1, 3);
  CHECK(ws.size() == 1 + 1 + 2 + 4);
  for (const auto& w : ws) CHECK(is_canonical_word(w));
  CHECK_FALSE(is_canonical_word(Word{1, 0}));
}

TEST_CASE("property: boolean algebra laws on random automata") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 60; ++round) {
    std::vector<std::string> labels = round % 2 ? std::vector<std::string>{"X"}
                                                : std::vector<std::string>{"X", "Y"};
    Dfa a = random_dfa(rng, labels), b = random_dfa(rng, labels), c = random_dfa(rng, labels);
    CHECK(equivalent(complement(unite(a, b)), intersect(complement(a), complement(b))));
    CHECK(equivalent(complement(intersect(a, b)), unite(complement(a), complement(b))));
    CHECK(equivalent(intersect(a, unite(b, c)), unite(intersect(a, b), intersect(a, c))));
    CHECK(equivalent(complement(complement(a)), a));
    agree(intersect(a, b), 6, [&](const Word& w) { return a.accepts(w) && b.accepts(w); });
    agree(unite(a, b), 6, [&](const Word& w) { return a.accepts(w) || b.accepts(w); });
    agree(complement(a), 6, [&](const Word& w) { return !a.accepts(w); });
  }
}

TEST_CASE("property: every result accepts only canonical words") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 40; ++round) {
    Dfa a = random_dfa(rng, {"X", "Y"});
    CHECK(accepts_only_canonical(a));
    CHECK(accepts_only_canonical(complement(a)));
    CHECK(accepts_only_canonical(project(a, "X")));
    CHECK(accepts_only_canonical(cylindrify(a, "Z")));
    CHECK(accepts_only_canonical(minimize(a)));
  }
}

TEST_CASE("property: cylindrify and project against set semantics") {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 40; ++round) {
    Dfa a = random_dfa(rng, {"X", "Z"});
    CHECK(equivalent(project(cylindrify(a, "Y"), "Y"), a));
    // Cylinder: deleting Y leaves a word of L(a) up to trailing zeros.
    Dfa c = cylindrify(a, "Y");
    agree(c, 5, [&](const Word& w) { return a.accepts(strip_zeros(erase_track(w, 1))); });
    // Projection: some accepted word of a erases to w up to trailing zeros.
    std::set<Word> image;
    for (const auto& u : all_words(2, 8))
      if (a.accepts(u)) image.insert(strip_zeros(erase_track(u, 1)));
    agree(project(a, "Z"), 5, [&](const Word& w) { return image.count(w) != 0; });
  }
}

TEST_CASE("property: minimization is canonical") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 40; ++round) {
    Dfa a = random_dfa(rng, {"X"});
    Dfa b = unite(a, a);
    CHECK(minimize(a) == minimize(b));
    CHECK(minimize(a).state_count() <= a.state_count());
  }
}
