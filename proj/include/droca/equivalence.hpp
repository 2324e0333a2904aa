#pragma once

#include <cstddef>
#include <optional>

#include "droca/automaton.hpp"

namespace droca {

enum class CounterexampleKind { CounterDesync, AcceptMismatch };

const char* to_string(CounterexampleKind kind);

/// CounterDesync: the counter effects differ on word but agree on every
/// proper prefix. AcceptMismatch: counters agree on word and all its
/// prefixes, and exactly one machine accepts.
struct Counterexample {
  Word word;
  CounterexampleKind kind;

  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct Verdict {
  std::optional<Counterexample> counterexample;

  bool equivalent() const noexcept { return !counterexample.has_value(); }
  static Verdict yes() { return {}; }
  static Verdict no(Counterexample ce) { return {std::move(ce)}; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct SearchBounds {
  Counter counter_cap = 0;
  std::size_t length_cap = 0;
};

/// Caps used by check_sync_equiv: counter (|A|*|B|)^2 + 1, length 2K^5.
SearchBounds sync_bounds(std::size_t size_a, std::size_t size_b);
/// Caps used by voca_check_equiv: counter 2(K+K^2) + 1, length 4K(K+K^2).
SearchBounds voca_bounds(std::size_t size_a, std::size_t size_b);

/// Length-lex-minimal word on which A and B disagree in counter effect or
/// acceptance, found by FIFO BFS over the synchronised product (p, q, n)
/// restricted to counters <= bounds.counter_cap and lengths <= bounds.length_cap.
std::optional<Counterexample> minimal_disagreement(const Droca& a, const Droca& b, SearchBounds bounds);

/// Decides "counter-synchronous and language-equivalent".
Verdict check_sync_equiv(const Droca& a, const Droca& b);

/// Equivalence of two VOCAs. Throws InvalidInput for non-VOCA input. When the
/// per-(letter, sign) action maps differ it falls back to check_sync_equiv.
Verdict voca_check_equiv(const Droca& a, const Droca& b);

/// Test oracle: every word of length <= max_len in length-lex order, each
/// machine simulated on its own counter. Words reaching an already-seen pair
/// of configurations are pruned since an earlier word dominates them.
Verdict brute_force_equiv(const Droca& a, const Droca& b, std::size_t max_len);

struct ReachWitness {
  Word word;
  Counter counter = 0;
};

/// Shortest word reaching p with the smallest possible counter, searching
/// configurations of height < |A|^2.
std::optional<ReachWitness> reach_witness(const Droca& a, StateId p);

}  // namespace droca
