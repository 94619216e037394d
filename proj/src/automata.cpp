#include "msocard/automata.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "msocard/error.hpp"

namespace msocard {

namespace {

void check_labels(const std::vector<std::string>& labels) {
  if (labels.size() > kMaxTracks)
    throw AutomatonError("too many tracks (" + std::to_string(labels.size()) + ")");
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (!(labels[i - 1] < labels[i]))
      throw AutomatonError("track labels must be sorted and distinct");
  }
}

void require_aligned(const Dfa& a, const Dfa& b) {
  if (a.labels() != b.labels()) throw AutomatonError("automata have different track labels");
}

/// Builds a DFA from a state-exploration callback over pairs/sets.
struct TableBuilder {
  std::size_t sigma;
  std::vector<bool> accepting;
  std::vector<State> delta;

  State add(bool acc) {
    accepting.push_back(acc);
    delta.resize(delta.size() + sigma, 0);
    return static_cast<State>(accepting.size() - 1);
  }
};

Letter insert_bit(Letter a, std::size_t pos, bool bit) {
  Letter low = a & ((Letter{1} << pos) - 1);
  Letter high = (a >> pos) << (pos + 1);
  return high | (bit ? Letter{1} << pos : 0) | low;
}

Letter erase_bit(Letter a, std::size_t pos) {
  Letter low = a & ((Letter{1} << pos) - 1);
  Letter high = (a >> (pos + 1)) << pos;
  return high | low;
}

}  // namespace

Dfa::Dfa(std::vector<std::string> labels, std::size_t states, State initial,
         std::vector<bool> accepting, std::vector<State> transitions)
    : labels_(std::move(labels)),
      initial_(initial),
      accepting_(std::move(accepting)),
      delta_(std::move(transitions)) {
  check_labels(labels_);
  if (states == 0) throw AutomatonError("a DFA needs at least one state");
  if (accepting_.size() != states) throw AutomatonError("accepting vector has wrong size");
  if (delta_.size() != states * alphabet_size())
    throw AutomatonError("transition table is not total");
  if (initial_ >= states) throw AutomatonError("initial state out of range");
  for (State t : delta_)
    if (t >= states) throw AutomatonError("transition target out of range");
}

Dfa Dfa::empty(std::vector<std::string> labels) {
  check_labels(labels);
  std::size_t sigma = std::size_t{1} << labels.size();
  return Dfa(std::move(labels), 1, 0, {false}, std::vector<State>(sigma, 0));
}

Dfa Dfa::canonical(std::vector<std::string> labels) {
  check_labels(labels);
  std::size_t sigma = std::size_t{1} << labels.size();
  // 0: ε or last letter nonzero; 1: last letter zero.
  std::vector<State> delta(2 * sigma, 0);
  delta[0] = 1;
  delta[sigma] = 1;
  return Dfa(std::move(labels), 2, 0, {true, false}, std::move(delta));
}

State Dfa::run(const Word& w) const {
  State s = initial_;
  for (Letter a : w) {
    if (a >= alphabet_size()) throw AutomatonError("letter outside the track alphabet");
    s = next(s, a);
  }
  return s;
}

bool Dfa::accepts(const Word& w) const { return is_accepting(run(w)); }

std::size_t Dfa::track_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return static_cast<std::size_t>(it - labels_.begin());
}

namespace {

Dfa product(const Dfa& a, const Dfa& b, BoolOp op) {
  require_aligned(a, b);
  const std::size_t sigma = a.alphabet_size();
  TableBuilder t{sigma, {}, {}};
  std::unordered_map<std::uint64_t, State> index;
  std::deque<std::pair<State, State>> work;
  auto key = [](State p, State q) { return (std::uint64_t{p} << 32) | q; };
  auto visit = [&](State p, State q) {
    auto [it, fresh] = index.emplace(key(p, q), 0);
    if (fresh) {
      bool acc = op == BoolOp::conjunction ? a.is_accepting(p) && b.is_accepting(q)
                                           : a.is_accepting(p) || b.is_accepting(q);
      it->second = t.add(acc);
      work.emplace_back(p, q);
    }
    return it->second;
  };
  visit(a.initial(), b.initial());
  while (!work.empty()) {
    auto [p, q] = work.front();
    work.pop_front();
    State from = index.at(key(p, q));
    for (Letter l = 0; l < sigma; ++l) {
      State to = visit(a.next(p, l), b.next(q, l));
      t.delta[from * sigma + l] = to;
    }
  }
  std::size_t n = t.accepting.size();
  return Dfa(a.labels(), n, 0, std::move(t.accepting), std::move(t.delta));
}

}  // namespace

Dfa minimize(const Dfa& a) {
  const std::size_t sigma = a.alphabet_size();
  // Reachable part.
  std::vector<State> order;
  std::vector<bool> seen(a.state_count(), false);
  order.push_back(a.initial());
  seen[a.initial()] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Letter l = 0; l < sigma; ++l) {
      State t = a.next(order[i], l);
      if (!seen[t]) {
        seen[t] = true;
        order.push_back(t);
      }
    }
  }
  // Moore refinement: class ids are recomputed from (class, successor classes).
  std::vector<std::size_t> cls(a.state_count(), 0);
  for (State s : order) cls[s] = a.is_accepting(s) ? 1 : 0;
  std::size_t classes = 0;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next_cls(a.state_count(), 0);
    for (State s : order) {
      std::vector<std::size_t> sig;
      sig.reserve(sigma + 1);
      sig.push_back(cls[s]);
      for (Letter l = 0; l < sigma; ++l) sig.push_back(cls[a.next(s, l)]);
      auto [it, fresh] = ids.emplace(std::move(sig), ids.size());
      next_cls[s] = it->second;
    }
    std::size_t count = ids.size();
    cls.swap(next_cls);
    if (count == classes) break;
    classes = count;
  }
  // BFS renumbering over representatives.
  std::vector<State> rep(classes, 0);
  for (State s : order) rep[cls[s]] = s;
  std::vector<std::int64_t> number(classes, -1);
  std::vector<std::size_t> queue{cls[a.initial()]};
  number[cls[a.initial()]] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (Letter l = 0; l < sigma; ++l) {
      std::size_t c = cls[a.next(rep[queue[i]], l)];
      if (number[c] < 0) {
        number[c] = static_cast<std::int64_t>(queue.size());
        queue.push_back(c);
      }
    }
  }
  std::vector<bool> acc(queue.size());
  std::vector<State> delta(queue.size() * sigma);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    State r = rep[queue[i]];
    acc[i] = a.is_accepting(r);
    for (Letter l = 0; l < sigma; ++l)
      delta[i * sigma + l] = static_cast<State>(number[cls[a.next(r, l)]]);
  }
  return Dfa(a.labels(), queue.size(), 0, std::move(acc), std::move(delta));
}

Dfa restrict_to_canonical(const Dfa& a) {
  return minimize(product(a, Dfa::canonical(a.labels()), BoolOp::conjunction));
}

Dfa combine(const Dfa& a, const Dfa& b, BoolOp op) {
  // Both operands are canonical languages, so the result is one too.
  return minimize(product(a, b, op));
}

Dfa intersect(const Dfa& a, const Dfa& b) { return combine(a, b, BoolOp::conjunction); }
Dfa unite(const Dfa& a, const Dfa& b) { return combine(a, b, BoolOp::disjunction); }

Dfa complement(const Dfa& a) {
  std::vector<bool> flipped(a.state_count());
  for (std::size_t s = 0; s < a.state_count(); ++s) flipped[s] = !a.is_accepting(s);
  Dfa c(a.labels(), a.state_count(), a.initial(), std::move(flipped), a.transitions());
  return restrict_to_canonical(c);
}

Dfa cylindrify(const Dfa& a, const std::string& label) {
  auto labels = a.labels();
  if (std::find(labels.begin(), labels.end(), label) != labels.end())
    throw AutomatonError("track " + label + " already present");
  auto pos = static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), label) -
                                      labels.begin());
  labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(pos), label);
  check_labels(labels);
  const std::size_t sigma = std::size_t{1} << labels.size();
  // State (q, t): q reads the old tracks, t records membership in L(a)·0*.
  TableBuilder t{sigma, {}, {}};
  std::unordered_map<std::uint64_t, State> index;
  std::deque<std::pair<State, bool>> work;
  auto visit = [&](State q, bool in_closure) {
    std::uint64_t k = (std::uint64_t{q} << 1) | (in_closure ? 1 : 0);
    auto [it, fresh] = index.emplace(k, 0);
    if (fresh) {
      it->second = t.add(in_closure);
      work.emplace_back(q, in_closure);
    }
    return it->second;
  };
  visit(a.initial(), a.is_accepting(a.initial()));
  while (!work.empty()) {
    auto [q, flag] = work.front();
    work.pop_front();
    State from = index.at((std::uint64_t{q} << 1) | (flag ? 1 : 0));
    for (Letter l = 0; l < sigma; ++l) {
      Letter old = erase_bit(l, pos);
      State q2 = a.next(q, old);
      bool flag2 = a.is_accepting(q2) || (old == 0 && flag);
      t.delta[from * sigma + l] = visit(q2, flag2);
    }
  }
  std::size_t n = t.accepting.size();
  return restrict_to_canonical(Dfa(labels, n, 0, std::move(t.accepting), std::move(t.delta)));
}

Dfa align(const Dfa& a, const std::vector<std::string>& labels) {
  Dfa out = a;
  for (const auto& l : a.labels())
    if (std::find(labels.begin(), labels.end(), l) == labels.end())
      throw AutomatonError("cannot align: track " + l + " not in target");
  for (const auto& l : labels)
    if (out.track_of(l) == out.tracks()) out = cylindrify(out, l);
  if (out.labels() != labels) throw AutomatonError("target labels must be sorted and distinct");
  return out;
}

Dfa project(const Dfa& a, const std::string& label) {
  const std::size_t pos = a.track_of(label);
  if (pos == a.tracks()) throw AutomatonError("no track named " + label);
  auto labels = a.labels();
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(pos));
  const std::size_t sigma = std::size_t{1} << labels.size();
  const Letter erased_only = Letter{1} << pos;

  // Saturation: states reaching acceptance on letters zero off the erased track.
  std::vector<bool> saturated(a.state_count(), false);
  for (State s = 0; s < a.state_count(); ++s) saturated[s] = a.is_accepting(s);
  for (bool changed = true; changed;) {
    changed = false;
    for (State s = 0; s < a.state_count(); ++s) {
      if (saturated[s]) continue;
      if (saturated[a.next(s, 0)] || saturated[a.next(s, erased_only)]) {
        saturated[s] = true;
        changed = true;
      }
    }
  }

  TableBuilder t{sigma, {}, {}};
  std::map<std::vector<State>, State> index;
  std::deque<std::vector<State>> work;
  auto visit = [&](std::vector<State> set) {
    auto it = index.find(set);
    if (it != index.end()) return it->second;
    bool acc = std::any_of(set.begin(), set.end(), [&](State s) { return saturated[s]; });
    State id = t.add(acc);
    index.emplace(set, id);
    work.push_back(std::move(set));
    return id;
  };
  visit({a.initial()});
  while (!work.empty()) {
    std::vector<State> set = std::move(work.front());
    work.pop_front();
    State from = index.at(set);
    for (Letter l = 0; l < sigma; ++l) {
      std::vector<State> succ;
      for (State s : set) {
        succ.push_back(a.next(s, insert_bit(l, pos, false)));
        succ.push_back(a.next(s, insert_bit(l, pos, true)));
      }
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      t.delta[from * sigma + l] = visit(std::move(succ));
    }
  }
  std::size_t n = t.accepting.size();
  return restrict_to_canonical(Dfa(labels, n, 0, std::move(t.accepting), std::move(t.delta)));
}

Dfa remap_tracks(const Dfa& a, std::vector<std::string> labels,
                 const std::vector<std::size_t>& source) {
  check_labels(labels);
  if (source.size() != a.tracks()) throw AutomatonError("remap needs one source per track");
  std::vector<bool> used(labels.size(), false);
  for (auto s : source) {
    if (s >= labels.size()) throw AutomatonError("remap source out of range");
    used[s] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw AutomatonError("remap leaves a track unread");
  const std::size_t sigma = std::size_t{1} << labels.size();
  std::vector<State> delta(a.state_count() * sigma);
  for (State s = 0; s < a.state_count(); ++s) {
    for (Letter l = 0; l < sigma; ++l) {
      Letter old = 0;
      for (std::size_t i = 0; i < source.size(); ++i)
        if ((l >> source[i]) & 1U) old |= Letter{1} << i;
      delta[s * sigma + l] = a.next(s, old);
    }
  }
  return restrict_to_canonical(
      Dfa(std::move(labels), a.state_count(), a.initial(), a.accepting(), std::move(delta)));
}

bool is_empty(const Dfa& a) {
  Word w;
  return !shortest_accepted(a, w);
}

bool shortest_accepted(const Dfa& a, Word& out) {
  const std::size_t sigma = a.alphabet_size();
  std::vector<std::int64_t> parent(a.state_count(), -1);
  std::vector<Letter> via(a.state_count(), 0);
  std::vector<bool> seen(a.state_count(), false);
  std::vector<State> queue{a.initial()};
  seen[a.initial()] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    State s = queue[i];
    if (a.is_accepting(s)) {
      out.clear();
      for (State c = s; parent[c] >= 0; c = static_cast<State>(parent[c])) out.push_back(via[c]);
      std::reverse(out.begin(), out.end());
      return true;
    }
    for (Letter l = 0; l < sigma; ++l) {
      State t = a.next(s, l);
      if (!seen[t]) {
        seen[t] = true;
        parent[t] = s;
        via[t] = l;
        queue.push_back(t);
      }
    }
  }
  return false;
}

bool equivalent(const Dfa& a, const Dfa& b) {
  require_aligned(a, b);
  return minimize(a) == minimize(b);
}

bool accepts_only_canonical(const Dfa& a) {
  std::vector<bool> seen(a.state_count(), false);
  std::vector<State> queue{a.initial()};
  seen[a.initial()] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (a.is_accepting(a.next(queue[i], 0))) return false;
    for (Letter l = 0; l < a.alphabet_size(); ++l) {
      State t = a.next(queue[i], l);
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
    }
  }
  return true;
}

bool is_canonical_word(const Word& w) { return w.empty() || w.back() != 0; }

std::vector<Word> canonical_words(std::size_t n, std::size_t max_length) {
  const Letter sigma = Letter{1} << n;
  std::vector<Word> out{Word{}};
  std::vector<Word> layer{Word{}};
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<Word> grown;
    grown.reserve(layer.size() * sigma);
    for (const auto& w : layer) {
      for (Letter l = 0; l < sigma; ++l) {
        Word v = w;
        v.push_back(l);
        grown.push_back(std::move(v));
      }
    }
    layer.swap(grown);
    for (const auto& w : layer)
      if (w.back() != 0) out.push_back(w);
  }
  return out;
}

std::string letter_to_string(Letter a, std::size_t tracks) {
  if (tracks == 0) return "-";
  std::string s(tracks, '0');
  for (std::size_t j = 0; j < tracks; ++j)
    if ((a >> j) & 1U) s[j] = '1';
  return s;
}

std::string word_to_string(const Word& w, std::size_t tracks) {
  if (w.empty()) return "ε";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0 && tracks != 1) s += ' ';
    s += letter_to_string(w[i], tracks);
  }
  return s;
}

namespace {

Letter parse_letter(const std::string& tok, std::size_t tracks) {
  if (tracks == 0) {
    if (tok != "-") throw AutomatonError("0-track letters are written '-'");
    return 0;
  }
  if (tok.size() != tracks) throw AutomatonError("letter '" + tok + "' has the wrong width");
  Letter a = 0;
  for (std::size_t j = 0; j < tracks; ++j) {
    if (tok[j] == '1')
      a |= Letter{1} << j;
    else if (tok[j] != '0')
      throw AutomatonError("letter '" + tok + "' is not a bit string");
  }
  return a;
}

}  // namespace

Word word_from_string(const std::string& text, std::size_t tracks) {
  std::istringstream in(text);
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  Word w;
  if (toks.empty() || (toks.size() == 1 && toks[0] == "ε")) return w;
  if (tracks == 1 && toks.size() == 1) {
    for (char c : toks[0]) w.push_back(parse_letter(std::string(1, c), 1));
    return w;
  }
  for (const auto& t : toks) w.push_back(parse_letter(t, tracks));
  return w;
}

void write_dfa(std::ostream& out, const Dfa& a) {
  out << "dfa tracks=" << a.tracks() << " labels=";
  for (std::size_t i = 0; i < a.tracks(); ++i) out << (i ? "," : "") << a.labels()[i];
  out << " states=" << a.state_count() << " initial=" << a.initial() << '\n';
  out << "accepting:";
  for (State s = 0; s < a.state_count(); ++s)
    if (a.is_accepting(s)) out << ' ' << s;
  out << '\n';
  for (State s = 0; s < a.state_count(); ++s)
    for (Letter l = 0; l < a.alphabet_size(); ++l)
      out << s << ' ' << letter_to_string(l, a.tracks()) << ' ' << a.next(s, l) << '\n';
}

std::string dfa_to_text(const Dfa& a) {
  std::ostringstream out;
  write_dfa(out, a);
  return out.str();
}

Dfa read_dfa(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw AutomatonError("missing dfa header");
  std::istringstream header(line);
  std::string word;
  header >> word;
  if (word != "dfa") throw AutomatonError("header must start with 'dfa'");
  std::map<std::string, std::string> fields;
  while (header >> word) {
    auto eq = word.find('=');
    if (eq == std::string::npos) throw AutomatonError("malformed header field '" + word + "'");
    fields[word.substr(0, eq)] = word.substr(eq + 1);
  }
  for (const char* k : {"tracks", "labels", "states", "initial"})
    if (fields.count(k) == 0) throw AutomatonError(std::string("header lacks ") + k);
  auto to_num = [](const std::string& s, const char* what) {
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw AutomatonError(std::string("bad ") + what + " '" + s + "'");
    }
  };
  std::size_t tracks = to_num(fields["tracks"], "track count");
  std::size_t states = to_num(fields["states"], "state count");
  auto initial = static_cast<State>(to_num(fields["initial"], "initial state"));
  std::vector<std::string> labels;
  if (!fields["labels"].empty()) {
    std::istringstream ls(fields["labels"]);
    for (std::string l; std::getline(ls, l, ',');) labels.push_back(l);
  }
  if (labels.size() != tracks) throw AutomatonError("label count differs from tracks");
  check_labels(labels);
  if (states == 0) throw AutomatonError("a DFA needs at least one state");
  if (!next_line() || line.rfind("accepting:", 0) != 0)
    throw AutomatonError("missing 'accepting:' line");
  std::vector<bool> acc(states, false);
  {
    std::istringstream as(line.substr(10));
    for (std::string s; as >> s;) {
      auto v = to_num(s, "accepting state");
      if (v >= states) throw AutomatonError("accepting state out of range");
      acc[v] = true;
    }
  }
  const std::size_t sigma = std::size_t{1} << tracks;
  std::vector<State> delta(states * sigma, 0);
  std::vector<bool> defined(states * sigma, false);
  while (next_line()) {
    std::istringstream ts(line);
    std::string src, bits, dst, extra;
    if (!(ts >> src >> bits >> dst) || (ts >> extra))
      throw AutomatonError("malformed transition line '" + line + "'");
    auto s = to_num(src, "source state");
    auto d = to_num(dst, "target state");
    if (s >= states || d >= states) throw AutomatonError("transition state out of range");
    Letter l = parse_letter(bits, tracks);
    if (defined[s * sigma + l]) throw AutomatonError("duplicate transition in '" + line + "'");
    defined[s * sigma + l] = true;
    delta[s * sigma + l] = static_cast<State>(d);
  }
  if (std::find(defined.begin(), defined.end(), false) != defined.end())
    throw AutomatonError("transition table is not total");
  return Dfa(std::move(labels), states, initial, std::move(acc), std::move(delta));
}

Dfa dfa_from_text(const std::string& text) {
  std::istringstream in(text);
  return read_dfa(in);
}

}  // namespace msocard
