#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace droca {

using StateId = std::uint32_t;
using Letter = std::uint32_t;
using Symbol = std::uint32_t;
using Counter = std::int64_t;
using Word = std::vector<Letter>;

inline int sgn(Counter n) { return n == 0 ? 0 : 1; }

struct WordHash {
  std::size_t operator()(const std::vector<std::uint32_t>& w) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ w.size();
    for (auto x : w) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

Word concat(const Word& u, const Word& v);
Word append(const Word& u, Letter a);

/// Ordered, duplicate-free set of input symbols. The order drives
/// ActionsVector component order and every BFS tie-break.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> letters);

  std::size_t size() const noexcept { return letters_.size(); }
  const std::vector<std::string>& letters() const noexcept { return letters_; }
  const std::string& name(Letter a) const;
  std::optional<Letter> find(std::string_view name) const;
  bool contains(Letter a) const noexcept { return a < letters_.size(); }

  /// Reads "aab" letter-by-letter when every letter is one character,
  /// otherwise expects whitespace-separated tokens. "" and "ε" give ε.
  Word parse_word(std::string_view text) const;
  std::string format(const Word& w) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> letters_;
  bool single_char_ = true;
};

struct Transition {
  StateId target = 0;
  int action = 0;  // -1, 0 or +1

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Configuration {
  StateId state = 0;
  Counter counter = 0;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct RunTrace {
  Word word;
  std::vector<Configuration> configs;
  bool accepted = false;

  Counter counter_effect() const { return configs.back().counter; }
  Counter height() const;
  const Configuration& last() const { return configs.back(); }
};

/// Mutable, possibly-invalid description of a machine, as read from disk.
/// Turned into a Droca by build_droca() once validate() is clean.
struct DrocaDraft {
  using Key = std::pair<std::string, std::string>;  // (state, letter)
  using Entry = std::pair<std::string, int>;        // (target, action)

  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  std::string initial;
  std::vector<std::string> finals;
  std::map<Key, Entry> delta0;
  std::map<Key, Entry> delta1;
};

/// Complete deterministic real-time one-counter automaton. Immutable.
class Droca {
 public:
  Droca(Alphabet alphabet, std::vector<std::string> state_names, StateId initial,
        std::vector<bool> finals, std::vector<Transition> delta0, std::vector<Transition> delta1);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t num_states() const noexcept { return names_.size(); }
  std::size_t size() const noexcept { return names_.size(); }
  StateId initial() const noexcept { return initial_; }
  bool is_final(StateId q) const { return finals_.at(q); }
  const std::vector<bool>& finals() const noexcept { return finals_; }
  const std::string& state_name(StateId q) const { return names_.at(q); }
  const std::vector<std::string>& state_names() const noexcept { return names_; }
  std::optional<StateId> find_state(std::string_view name) const;

  /// sign 0 reads delta0 (counter zero), sign 1 reads delta1.
  const Transition& delta(int sign, StateId q, Letter a) const {
    return (sign == 0 ? delta0_ : delta1_)[q * alphabet_.size() + a];
  }
  const std::vector<Transition>& delta0() const noexcept { return delta0_; }
  const std::vector<Transition>& delta1() const noexcept { return delta1_; }

  Configuration initial_config() const noexcept { return {initial_, 0}; }

  friend bool operator==(const Droca&, const Droca&) = default;

 private:
  Alphabet alphabet_;
  std::vector<std::string> names_;
  StateId initial_;
  std::vector<bool> finals_;
  std::vector<Transition> delta0_;
  std::vector<Transition> delta1_;
};

Configuration step(const Droca& a, Configuration c, Letter letter);
RunTrace run(const Droca& a, const Word& w);
Counter counter_effect(const Droca& a, const Word& w);
Counter height(const Droca& a, const Word& w);
bool accepts(const Droca& a, const Word& w);

std::vector<std::string> validate(const DrocaDraft& draft);
inline std::vector<std::string> validate(const Droca&) { return {}; }
Droca build_droca(const DrocaDraft& draft);
DrocaDraft to_draft(const Droca& a);

/// Adds a fresh non-final sink for every missing transition.
DrocaDraft complete_with_sink(DrocaDraft draft);

/// True when the counter action is a function of (letter, counter sign).
bool is_voca(const Droca& a);

/// action_map[sign][letter] for a VOCA; nullopt when a is not one.
using ActionMap = std::array<std::vector<int>, 2>;
std::optional<ActionMap> voca_action_map(const Droca& a);

// --- doubled alphabet -------------------------------------------------------

/// a^s is encoded as 2*a + s.
constexpr Symbol tilde(Letter a, int sign) { return 2 * a + static_cast<Symbol>(sign); }
constexpr Letter tilde_letter(Symbol s) { return s / 2; }
constexpr int tilde_sign(Symbol s) { return static_cast<int>(s % 2); }

struct EncodedWord {
  std::vector<Symbol> symbols;

  Word strip() const;
  friend bool operator==(const EncodedWord&, const EncodedWord&) = default;
};

EncodedWord encode(const Droca& a, const Word& w);
std::string format_encoded(const Alphabet& sigma, const EncodedWord& e);
std::vector<std::string> tilde_names(const Alphabet& sigma);

/// Complete DFA over an arbitrary dense symbol set 0..num_symbols-1.
class Dfa {
 public:
  Dfa(std::size_t num_states, std::size_t num_symbols, StateId initial, std::vector<bool> finals,
      std::vector<StateId> transitions);

  std::size_t num_states() const noexcept { return finals_.size(); }
  std::size_t size() const noexcept { return finals_.size(); }
  std::size_t num_symbols() const noexcept { return num_symbols_; }
  StateId initial() const noexcept { return initial_; }
  bool is_final(StateId q) const { return finals_.at(q); }
  const std::vector<bool>& finals() const noexcept { return finals_; }
  StateId next(StateId q, Symbol s) const { return trans_[q * num_symbols_ + s]; }
  const std::vector<StateId>& transitions() const noexcept { return trans_; }

  StateId run(std::span<const Symbol> w) const;
  bool accepts(std::span<const Symbol> w) const { return finals_[run(w)]; }

  friend bool operator==(const Dfa&, const Dfa&) = default;

 private:
  std::size_t num_symbols_;
  StateId initial_;
  std::vector<bool> finals_;
  std::vector<StateId> trans_;
};

Dfa characteristic_dfa(const Droca& a);

}  // namespace droca
