#pragma once

// Shared machines and test-side oracles. The oracles deliberately avoid the
// library's algorithms: they simulate through Droca::delta only and search
// by plain enumeration or backtracking.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "droca/automaton.hpp"
#include "droca/equivalence.hpp"
#include "droca/json_io.hpp"

namespace fx {

using namespace droca;

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(DROCA_DATA_DIR) / name; }

// {aⁿbⁿa | n > 0}; q0..q3, q2 final.
inline Droca m_ex() { return load_file(data_path("anbna.json")); }
// 5-state machine with one redundant state, and a 4-state equivalent.
inline Droca a_plus() { return load_file(data_path("a_plus.json")); }
inline Droca a_plus_min() { return load_file(data_path("a_plus_min.json")); }

inline Word w(const Droca& a, const std::string& text) { return a.alphabet().parse_word(text); }

struct Sim {
  std::vector<Configuration> configs;  // one per prefix
  bool accepted = false;
};

inline Sim simulate(const Droca& a, const Word& word) {
  Sim s;
  Configuration c{a.initial(), 0};
  s.configs.push_back(c);
  for (Letter l : word) {
    const Transition& t = a.delta(c.counter == 0 ? 0 : 1, c.state, l);
    c = {t.target, c.counter + t.action};
    s.configs.push_back(c);
  }
  s.accepted = a.is_final(c.state);
  return s;
}

// All words over k letters up to max_len, length-lex order.
inline std::vector<Word> all_words(std::size_t k, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (Letter a = 0; a < k; ++a) {
        Word v = out[i];
        v.push_back(a);
        out.push_back(std::move(v));
      }
    }
    begin = end;
  }
  return out;
}

// First word (length-lex) where counter effect or acceptance differ.
inline std::optional<Counterexample> naive_disagreement(const Droca& a, const Droca& b, std::size_t max_len) {
  for (const Word& v : all_words(a.alphabet().size(), max_len)) {
    const Sim sa = simulate(a, v), sb = simulate(b, v);
    if (sa.configs.back().counter != sb.configs.back().counter) return Counterexample{v, CounterexampleKind::CounterDesync};
    if (sa.accepted != sb.accepted) return Counterexample{v, CounterexampleKind::AcceptMismatch};
  }
  return std::nullopt;
}

inline Counter sim_height(const Droca& a, const Word& v) {
  Counter h = 0;
  for (const auto& c : simulate(a, v).configs) h = std::max(h, c.counter);
  return h;
}

inline Alphabet letters(std::size_t k) {
  std::vector<std::string> l;
  for (std::size_t i = 0; i < k; ++i) l.emplace_back(1, static_cast<char>('a' + i));
  return Alphabet(l);
}

inline std::vector<std::string> names(std::size_t n, const char* prefix = "q") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Arbitrary machine, no reachability filter.
inline Droca random_droca(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  auto pick = [&](std::size_t m) { return static_cast<std::size_t>(rng() % m); };
  std::vector<bool> fin(n);
  for (std::size_t q = 0; q < n; ++q) fin[q] = pick(2) == 1;
  std::vector<Transition> d0(n * k), d1(n * k);
  for (auto& t : d0) t = {static_cast<StateId>(pick(n)), static_cast<int>(pick(2))};
  for (auto& t : d1) t = {static_cast<StateId>(pick(n)), static_cast<int>(pick(3)) - 1};
  return Droca(letters(k), names(n), 0, fin, d0, d1);
}

inline ActionMap random_action_map(std::mt19937_64& rng, std::size_t k) {
  ActionMap m;
  for (std::size_t a = 0; a < k; ++a) {
    m[0].push_back(static_cast<int>(rng() % 2));
    m[1].push_back(static_cast<int>(rng() % 3) - 1);
  }
  return m;
}

inline Droca random_voca(std::mt19937_64& rng, std::size_t n, const ActionMap& m) {
  const std::size_t k = m[0].size();
  std::vector<bool> fin(n);
  for (std::size_t q = 0; q < n; ++q) fin[q] = rng() % 2 == 1;
  std::vector<Transition> d0(n * k), d1(n * k);
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t a = 0; a < k; ++a) {
      d0[q * k + a] = {static_cast<StateId>(rng() % n), m[0][a]};
      d1[q * k + a] = {static_cast<StateId>(rng() % n), m[1][a]};
    }
  }
  return Droca(letters(k), names(n), 0, fin, d0, d1);
}

// Same machine plus a duplicate of one state that takes over some of its
// in-edges: equivalent, counter-synchronous, one state larger.
inline Droca split_state(std::mt19937_64& rng, const Droca& a) {
  const std::size_t n = a.num_states(), k = a.alphabet().size();
  const StateId twin_of = static_cast<StateId>(rng() % n);
  const StateId twin = static_cast<StateId>(n);
  std::vector<bool> fin = a.finals();
  fin.push_back(a.is_final(twin_of));
  std::vector<Transition> d0 = a.delta0(), d1 = a.delta1();
  for (std::size_t x = 0; x < k; ++x) {
    d0.push_back(a.delta(0, twin_of, x));
    d1.push_back(a.delta(1, twin_of, x));
  }
  // Redirect some edges into twin_of to the twin.
  for (auto* table : {&d0, &d1}) {
    for (auto& t : *table) {
      if (t.target == twin_of && rng() % 2 == 0) t.target = twin;
    }
  }
  return Droca(a.alphabet(), names(n + 1), a.initial(), fin, d0, d1);
}

// One transition or finality bit changed.
inline Droca mutate(std::mt19937_64& rng, const Droca& a) {
  const std::size_t n = a.num_states();
  std::vector<bool> fin = a.finals();
  std::vector<Transition> d0 = a.delta0(), d1 = a.delta1();
  switch (rng() % 3) {
    case 0: {
      const std::size_t q = rng() % n;
      fin[q] = !fin[q];
      break;
    }
    case 1: {
      auto& t = d0[rng() % d0.size()];
      if (rng() % 2) t.target = static_cast<StateId>(rng() % n);
      else t.action = static_cast<int>(rng() % 2);
      break;
    }
    default: {
      auto& t = d1[rng() % d1.size()];
      if (rng() % 2) t.target = static_cast<StateId>(rng() % n);
      else t.action = static_cast<int>(rng() % 3) - 1;
      break;
    }
  }
  return Droca(a.alphabet(), a.state_names(), a.initial(), fin, d0, d1);
}

// Keeps every transition's target but replaces actions with the map's.
inline Droca with_actions(const Droca& a, const ActionMap& m) {
  const std::size_t k = a.alphabet().size();
  std::vector<Transition> d0 = a.delta0(), d1 = a.delta1();
  for (std::size_t i = 0; i < d0.size(); ++i) {
    d0[i].action = m[0][i % k];
    d1[i].action = m[1][i % k];
  }
  return Droca(a.alphabet(), a.state_names(), a.initial(), a.finals(), d0, d1);
}

// Isomorphism of the reachable parts, matched from the initial states.
inline bool dfa_isomorphic(const Dfa& x, const Dfa& y) {
  if (x.num_symbols() != y.num_symbols() || x.num_states() != y.num_states()) return false;
  std::map<StateId, StateId> fwd, back;
  std::vector<std::pair<StateId, StateId>> todo{{x.initial(), y.initial()}};
  fwd[x.initial()] = y.initial();
  back[y.initial()] = x.initial();
  while (!todo.empty()) {
    auto [p, q] = todo.back();
    todo.pop_back();
    if (x.is_final(p) != y.is_final(q)) return false;
    for (Symbol s = 0; s < x.num_symbols(); ++s) {
      const StateId p2 = x.next(p, s), q2 = y.next(q, s);
      auto f = fwd.find(p2);
      auto b = back.find(q2);
      if (f == fwd.end() && b == back.end()) {
        fwd[p2] = q2;
        back[q2] = p2;
        todo.emplace_back(p2, q2);
      } else if (f == fwd.end() || b == back.end() || f->second != q2) {
        return false;
      }
    }
  }
  return fwd.size() == x.num_states();
}

// Up to 30 distinct words of length <= 6; half the time labelled by a small
// random DFA, otherwise by coin flips.
inline std::pair<std::vector<std::vector<Symbol>>, std::vector<std::vector<Symbol>>> random_samples(
    std::mt19937_64& rng, std::size_t symbols) {
  const std::size_t count = 1 + rng() % 30;
  const bool from_dfa = rng() % 2 == 0;
  const std::size_t dn = 1 + rng() % 4;
  std::vector<StateId> trans(dn * symbols);
  for (auto& t : trans) t = static_cast<StateId>(rng() % dn);
  std::vector<bool> fin(dn);
  for (std::size_t i = 0; i < dn; ++i) fin[i] = rng() % 2;
  const Dfa d(dn, symbols, 0, fin, trans);
  std::set<std::vector<Symbol>> seen;
  std::vector<std::vector<Symbol>> pos, neg;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Symbol> v(rng() % 7);
    for (auto& s : v) s = static_cast<Symbol>(rng() % symbols);
    if (!seen.insert(v).second) continue;
    const bool label = from_dfa ? d.accepts(v) : rng() % 2 == 0;
    (label ? pos : neg).push_back(v);
  }
  return {pos, neg};
}

// Exact minimal separating DFA size by backtracking over partial transition
// functions: a complete n-state DFA consistent with the samples exists iff
// the samples can be traced through some partial one.
class MinDfaOracle {
 public:
  MinDfaOracle(std::size_t num_symbols, const std::vector<std::vector<Symbol>>& pos,
               const std::vector<std::vector<Symbol>>& neg)
      : m_(num_symbols) {
    nodes_.push_back({});
    for (const auto& v : pos) label(v, 1);
    for (const auto& v : neg) label(v, 2);
    // Breadth-first order over the prefix tree.
    order_.push_back(0);
    for (std::size_t i = 0; i < order_.size(); ++i) {
      for (const auto& [s, c] : nodes_[order_[i]].kids) order_.push_back(c);
    }
  }

  bool conflict() const { return conflict_; }

  std::size_t min_size(std::size_t limit) {
    for (std::size_t n = 1; n <= limit; ++n) {
      if (feasible(n)) return n;
    }
    return 0;
  }

  bool feasible(std::size_t n) {
    n_ = n;
    trans_.assign(n * m_, -1);
    lab_.assign(n, 0);
    color_.assign(nodes_.size(), -1);
    color_[0] = 0;
    lab_[0] = nodes_[0].label;
    return dfs(1);
  }

 private:
  struct Node {
    int label = 0;  // 0 none, 1 accept, 2 reject
    int parent = -1;
    Symbol sym = 0;
    std::map<Symbol, int> kids;
  };

  void label(const std::vector<Symbol>& v, int l) {
    int cur = 0;
    for (Symbol s : v) {
      auto it = nodes_[cur].kids.find(s);
      if (it == nodes_[cur].kids.end()) {
        nodes_.push_back({0, cur, s, {}});
        const int id = static_cast<int>(nodes_.size()) - 1;
        nodes_[cur].kids[s] = id;
        cur = id;
      } else {
        cur = it->second;
      }
    }
    if (nodes_[cur].label != 0 && nodes_[cur].label != l) conflict_ = true;
    nodes_[cur].label = l;
  }

  bool set_label(int state, int l) {
    if (l == 0) return true;
    if (lab_[state] != 0 && lab_[state] != l) return false;
    return true;
  }

  bool dfs(std::size_t i) {
    if (i == order_.size()) return true;
    const int v = order_[i];
    const Node& node = nodes_[v];
    const int pc = color_[node.parent];
    int& t = trans_[pc * m_ + node.sym];
    if (t >= 0) return place(i, v, t);
    // Symmetry: a fresh state may only be the lowest unused one.
    int used = 0;
    for (int c : color_) used = std::max(used, c + 1);
    for (int c = 0; c < static_cast<int>(n_) && c <= used; ++c) {
      t = c;
      if (place(i, v, c)) return true;
    }
    t = -1;
    return false;
  }

  bool place(std::size_t i, int v, int c) {
    const int l = nodes_[v].label;
    if (!set_label(c, l)) return false;
    const int saved = lab_[c];
    if (l != 0) lab_[c] = l;
    color_[v] = c;
    if (dfs(i + 1)) return true;
    color_[v] = -1;
    lab_[c] = saved;
    return false;
  }

  std::size_t m_, n_ = 0;
  std::vector<Node> nodes_;
  std::vector<int> order_;
  std::vector<int> trans_, lab_, color_;
  bool conflict_ = false;
};

}  // namespace fx
