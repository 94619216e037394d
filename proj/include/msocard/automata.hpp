#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace msocard {

/// A letter of Σₙ: bit j is the entry of track j.
using Letter = std::uint32_t;
using Word = std::vector<Letter>;
using State = std::uint32_t;

inline constexpr std::size_t kMaxTracks = 20;

/// Complete DFA over Σₙ whose tracks carry sorted, distinct labels.
class Dfa {
 public:
  Dfa(std::vector<std::string> labels, std::size_t states, State initial,
      std::vector<bool> accepting, std::vector<State> transitions);

  /// ∅ over the given tracks.
  static Dfa empty(std::vector<std::string> labels);
  /// Canonₙ = {ε} ∪ Σₙ*·(Σₙ \ {0ⁿ}).
  static Dfa canonical(std::vector<std::string> labels);

  std::size_t tracks() const { return labels_.size(); }
  std::size_t alphabet_size() const { return std::size_t{1} << tracks(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t state_count() const { return accepting_.size(); }
  State initial() const { return initial_; }
  bool is_accepting(State s) const { return accepting_[s]; }
  State next(State s, Letter a) const { return delta_[s * alphabet_size() + a]; }
  const std::vector<State>& transitions() const { return delta_; }
  const std::vector<bool>& accepting() const { return accepting_; }

  State run(const Word& w) const;
  bool accepts(const Word& w) const;
  /// Index of a track label, or tracks() if absent.
  std::size_t track_of(const std::string& label) const;

  friend bool operator==(const Dfa&, const Dfa&) = default;

 private:
  std::vector<std::string> labels_;
  State initial_;
  std::vector<bool> accepting_;
  std::vector<State> delta_;
};

enum class BoolOp { conjunction, disjunction };

Dfa combine(const Dfa& a, const Dfa& b, BoolOp op);
Dfa intersect(const Dfa& a, const Dfa& b);
Dfa unite(const Dfa& a, const Dfa& b);
/// Canonₙ \ L(a).
Dfa complement(const Dfa& a);
/// Adds a track at its sorted position. The result accepts the canonical
/// words whose deletion of the new track lies in L(a)·0*.
Dfa cylindrify(const Dfa& a, const std::string& label);
/// Cylindrifies by every missing label until the tracks equal `labels`.
Dfa align(const Dfa& a, const std::vector<std::string>& labels);
/// Existential erasure of a track, with trailing-zero saturation.
Dfa project(const Dfa& a, const std::string& label);
/// Minimal complete DFA; states numbered in BFS order from the initial
/// state, letters visited in increasing order.
Dfa minimize(const Dfa& a);
/// L(a) ∩ Canonₙ, minimized.
Dfa restrict_to_canonical(const Dfa& a);

/// Reads a over new tracks: the letter of old track i is taken from new
/// track `source[i]`. Every new track must be a source of some old track.
Dfa remap_tracks(const Dfa& a, std::vector<std::string> labels,
                 const std::vector<std::size_t>& source);

bool is_empty(const Dfa& a);
bool equivalent(const Dfa& a, const Dfa& b);
/// True when every accepted word is ε or ends in a nonzero letter.
bool accepts_only_canonical(const Dfa& a);
/// Length-lexicographically least accepted word, if any.
bool shortest_accepted(const Dfa& a, Word& out);

bool is_canonical_word(const Word& w);
/// Canonical words over n tracks of length ≤ max_length, shortest first.
std::vector<Word> canonical_words(std::size_t n, std::size_t max_length);

/// Letter as a bit string in label order; "-" for the 0-track letter.
std::string letter_to_string(Letter a, std::size_t tracks);
std::string word_to_string(const Word& w, std::size_t tracks);
/// Accepts the letter_to_string form, or for one track, the digits "0101".
Word word_from_string(const std::string& text, std::size_t tracks);

void write_dfa(std::ostream& out, const Dfa& a);
std::string dfa_to_text(const Dfa& a);
Dfa read_dfa(std::istream& in);
Dfa dfa_from_text(const std::string& text);

}  // namespace msocard
