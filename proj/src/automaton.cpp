#include "droca/automaton.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "droca/error.hpp"

namespace droca {

Word concat(const Word& u, const Word& v) {
  Word w;
  w.reserve(u.size() + v.size());
  w.insert(w.end(), u.begin(), u.end());
  w.insert(w.end(), v.begin(), v.end());
  return w;
}

Word append(const Word& u, Letter a) {
  Word w(u);
  w.push_back(a);
  return w;
}

// --- Alphabet ---------------------------------------------------------------

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw InvalidInput("alphabet must contain at least one letter");
  std::set<std::string> seen;
  for (const auto& l : letters_) {
    if (l.empty()) throw InvalidInput("alphabet letters must be non-empty");
    if (!seen.insert(l).second) throw InvalidInput("duplicate alphabet letter '" + l + "'");
    if (l.size() != 1) single_char_ = false;
  }
}

const std::string& Alphabet::name(Letter a) const {
  if (a >= letters_.size()) throw InvalidInput("letter index " + std::to_string(a) + " outside alphabet");
  return letters_[a];
}

std::optional<Letter> Alphabet::find(std::string_view name) const {
  for (Letter i = 0; i < letters_.size(); ++i) {
    if (letters_[i] == name) return i;
  }
  return std::nullopt;
}

Word Alphabet::parse_word(std::string_view text) const {
  Word w;
  if (text.empty() || text == "ε" || text == "eps") return w;
  auto lookup = [&](std::string_view tok) {
    auto l = find(tok);
    if (!l) throw InvalidInput("letter '" + std::string(tok) + "' is not in the alphabet");
    w.push_back(*l);
  };
  if (single_char_ && text.find_first_of(" \t,") == std::string_view::npos) {
    for (std::size_t i = 0; i < text.size(); ++i) lookup(text.substr(i, 1));
    return w;
  }
  std::string tok;
  std::istringstream in{std::string(text)};
  while (in >> tok) {
    if (!tok.empty() && tok.back() == ',') tok.pop_back();
    if (!tok.empty()) lookup(tok);
  }
  return w;
}

std::string Alphabet::format(const Word& w) const {
  if (w.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single_char_ && i > 0) out += ' ';
    out += name(w[i]);
  }
  return out;
}

// --- Droca ------------------------------------------------------------------

Droca::Droca(Alphabet alphabet, std::vector<std::string> state_names, StateId initial,
             std::vector<bool> finals, std::vector<Transition> delta0, std::vector<Transition> delta1)
    : alphabet_(std::move(alphabet)),
      names_(std::move(state_names)),
      initial_(initial),
      finals_(std::move(finals)),
      delta0_(std::move(delta0)),
      delta1_(std::move(delta1)) {
  const std::size_t n = names_.size();
  const std::size_t k = alphabet_.size();
  if (n == 0) throw InvalidInput("a DROCA needs at least one state");
  if (k == 0) throw InvalidInput("a DROCA needs a non-empty alphabet");
  if (initial_ >= n) throw InvalidInput("initial state out of range");
  if (finals_.size() != n) throw InvalidInput("final-state mask has wrong length");
  if (delta0_.size() != n * k || delta1_.size() != n * k) {
    throw InvalidInput("incomplete transition table");
  }
  for (const auto& t : delta0_) {
    if (t.target >= n) throw InvalidInput("delta0 target out of range");
    if (t.action == -1) throw InvalidInput("decrement at zero");
    if (t.action < -1 || t.action > 1) throw InvalidInput("delta0 action out of range");
  }
  for (const auto& t : delta1_) {
    if (t.target >= n) throw InvalidInput("delta1 target out of range");
    if (t.action < -1 || t.action > 1) throw InvalidInput("delta1 action out of range");
  }
  std::set<std::string> seen;
  for (const auto& s : names_) {
    if (!seen.insert(s).second) throw InvalidInput("duplicate state name '" + s + "'");
  }
}

std::optional<StateId> Droca::find_state(std::string_view name) const {
  for (StateId i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

Configuration step(const Droca& a, Configuration c, Letter letter) {
  if (c.state >= a.num_states()) throw InvalidInput("unknown state " + std::to_string(c.state));
  if (!a.alphabet().contains(letter)) throw InvalidInput("letter outside alphabet");
  if (c.counter < 0) throw InvalidInput("negative counter");
  const Transition& t = a.delta(sgn(c.counter), c.state, letter);
  return {t.target, c.counter + t.action};
}

Counter RunTrace::height() const {
  Counter h = 0;
  for (const auto& c : configs) h = std::max(h, c.counter);
  return h;
}

RunTrace run(const Droca& a, const Word& w) {
  RunTrace trace;
  trace.word = w;
  trace.configs.reserve(w.size() + 1);
  Configuration c = a.initial_config();
  trace.configs.push_back(c);
  for (Letter l : w) {
    c = step(a, c, l);
    trace.configs.push_back(c);
  }
  trace.accepted = a.is_final(c.state);
  return trace;
}

Counter counter_effect(const Droca& a, const Word& w) { return run(a, w).counter_effect(); }
Counter height(const Droca& a, const Word& w) { return run(a, w).height(); }
bool accepts(const Droca& a, const Word& w) { return run(a, w).accepted; }

// --- drafts -----------------------------------------------------------------

std::vector<std::string> validate(const DrocaDraft& d) {
  std::vector<std::string> out;
  std::set<std::string> states(d.states.begin(), d.states.end());
  std::set<std::string> letters(d.alphabet.begin(), d.alphabet.end());
  if (d.alphabet.empty()) out.push_back("empty alphabet");
  if (letters.size() != d.alphabet.size()) out.push_back("duplicate alphabet letter");
  if (d.states.empty()) out.push_back("no states");
  if (states.size() != d.states.size()) out.push_back("duplicate state name");
  if (!states.count(d.initial)) out.push_back("initial state '" + d.initial + "' not among states");
  for (const auto& f : d.finals) {
    if (!states.count(f)) out.push_back("final state '" + f + "' not among states");
  }
  auto check_map = [&](const std::map<DrocaDraft::Key, DrocaDraft::Entry>& m, int mode) {
    const std::string name = mode == 0 ? "delta0" : "delta1";
    for (const auto& [key, val] : m) {
      const std::string where = name + "(" + key.first + "," + key.second + ")";
      if (!states.count(key.first)) out.push_back(where + ": unknown source state");
      if (!letters.count(key.second)) out.push_back(where + ": unknown letter");
      if (!states.count(val.first)) out.push_back(where + ": unknown target state '" + val.first + "'");
      if (mode == 0 && val.second == -1) {
        out.push_back("decrement at zero: " + where);
      } else if (val.second < -1 || val.second > 1) {
        out.push_back(where + ": action " + std::to_string(val.second) + " out of range");
      }
    }
    for (const auto& q : d.states) {
      for (const auto& a : d.alphabet) {
        if (!m.count({q, a})) out.push_back("incomplete transition table: " + name + "(" + q + "," + a + ") missing");
      }
    }
  };
  check_map(d.delta0, 0);
  check_map(d.delta1, 1);
  return out;
}

Droca build_droca(const DrocaDraft& d) {
  auto violations = validate(d);
  if (!violations.empty()) {
    std::string msg = "invalid DROCA:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw InvalidInput(msg);
  }
  Alphabet sigma(d.alphabet);
  std::map<std::string, StateId> index;
  for (StateId i = 0; i < d.states.size(); ++i) index[d.states[i]] = i;
  const std::size_t n = d.states.size();
  const std::size_t k = d.alphabet.size();
  std::vector<bool> finals(n, false);
  for (const auto& f : d.finals) finals[index.at(f)] = true;
  std::vector<Transition> t0(n * k), t1(n * k);
  for (StateId q = 0; q < n; ++q) {
    for (Letter a = 0; a < k; ++a) {
      const auto& e0 = d.delta0.at({d.states[q], d.alphabet[a]});
      const auto& e1 = d.delta1.at({d.states[q], d.alphabet[a]});
      t0[q * k + a] = {index.at(e0.first), e0.second};
      t1[q * k + a] = {index.at(e1.first), e1.second};
    }
  }
  return Droca(std::move(sigma), d.states, index.at(d.initial), std::move(finals), std::move(t0),
               std::move(t1));
}

DrocaDraft to_draft(const Droca& a) {
  DrocaDraft d;
  d.alphabet = a.alphabet().letters();
  d.states = a.state_names();
  d.initial = a.state_name(a.initial());
  for (StateId q = 0; q < a.num_states(); ++q) {
    if (a.is_final(q)) d.finals.push_back(a.state_name(q));
    for (Letter l = 0; l < a.alphabet().size(); ++l) {
      const auto& t0 = a.delta(0, q, l);
      const auto& t1 = a.delta(1, q, l);
      d.delta0[{a.state_name(q), a.alphabet().name(l)}] = {a.state_name(t0.target), t0.action};
      d.delta1[{a.state_name(q), a.alphabet().name(l)}] = {a.state_name(t1.target), t1.action};
    }
  }
  return d;
}

DrocaDraft complete_with_sink(DrocaDraft d) {
  bool missing = false;
  for (const auto& q : d.states) {
    for (const auto& a : d.alphabet) {
      if (!d.delta0.count({q, a}) || !d.delta1.count({q, a})) missing = true;
    }
  }
  if (!missing) return d;
  std::string sink = "sink";
  while (std::find(d.states.begin(), d.states.end(), sink) != d.states.end()) sink += "_";
  d.states.push_back(sink);
  for (const auto& q : d.states) {
    for (const auto& a : d.alphabet) {
      d.delta0.try_emplace({q, a}, sink, 0);
      d.delta1.try_emplace({q, a}, sink, 0);
    }
  }
  return d;
}

std::optional<ActionMap> voca_action_map(const Droca& a) {
  const std::size_t k = a.alphabet().size();
  ActionMap map;
  for (int sign = 0; sign < 2; ++sign) {
    map[sign].resize(k);
    for (Letter l = 0; l < k; ++l) {
      const int first = a.delta(sign, 0, l).action;
      for (StateId q = 1; q < a.num_states(); ++q) {
        if (a.delta(sign, q, l).action != first) return std::nullopt;
      }
      map[sign][l] = first;
    }
  }
  return map;
}

bool is_voca(const Droca& a) { return voca_action_map(a).has_value(); }

// --- encoding ---------------------------------------------------------------

Word EncodedWord::strip() const {
  Word w;
  w.reserve(symbols.size());
  for (Symbol s : symbols) w.push_back(tilde_letter(s));
  return w;
}

EncodedWord encode(const Droca& a, const Word& w) {
  EncodedWord e;
  e.symbols.reserve(w.size());
  Configuration c = a.initial_config();
  for (Letter l : w) {
    e.symbols.push_back(tilde(l, sgn(c.counter)));
    c = step(a, c, l);
  }
  return e;
}

std::vector<std::string> tilde_names(const Alphabet& sigma) {
  std::vector<std::string> names;
  for (const auto& l : sigma.letters()) {
    names.push_back(l + "^0");
    names.push_back(l + "^1");
  }
  return names;
}

std::string format_encoded(const Alphabet& sigma, const EncodedWord& e) {
  if (e.symbols.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < e.symbols.size(); ++i) {
    if (i > 0) out += ' ';
    out += sigma.name(tilde_letter(e.symbols[i])) + "^" + std::to_string(tilde_sign(e.symbols[i]));
  }
  return out;
}

// --- DFA --------------------------------------------------------------------

Dfa::Dfa(std::size_t num_states, std::size_t num_symbols, StateId initial, std::vector<bool> finals,
         std::vector<StateId> transitions)
    : num_symbols_(num_symbols), initial_(initial), finals_(std::move(finals)), trans_(std::move(transitions)) {
  if (num_states == 0) throw InvalidInput("a DFA needs at least one state");
  if (finals_.size() != num_states) throw InvalidInput("final-state mask has wrong length");
  if (initial_ >= num_states) throw InvalidInput("initial state out of range");
  if (trans_.size() != num_states * num_symbols_) throw InvalidInput("incomplete DFA transition table");
  for (StateId t : trans_) {
    if (t >= num_states) throw InvalidInput("DFA transition target out of range");
  }
}

StateId Dfa::run(std::span<const Symbol> w) const {
  StateId q = initial_;
  for (Symbol s : w) {
    if (s >= num_symbols_) throw InvalidInput("symbol outside DFA alphabet");
    q = next(q, s);
  }
  return q;
}

Dfa characteristic_dfa(const Droca& a) {
  const std::size_t n = a.num_states();
  const std::size_t k = a.alphabet().size();
  std::vector<StateId> trans(n * 2 * k);
  for (StateId q = 0; q < n; ++q) {
    for (Letter l = 0; l < k; ++l) {
      trans[q * 2 * k + tilde(l, 0)] = a.delta(0, q, l).target;
      trans[q * 2 * k + tilde(l, 1)] = a.delta(1, q, l).target;
    }
  }
  return Dfa(n, 2 * k, a.initial(), a.finals(), std::move(trans));
}

}  // namespace droca
