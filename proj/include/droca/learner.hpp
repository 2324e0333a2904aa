#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "droca/automaton.hpp"
#include "droca/error.hpp"
#include "droca/mindfa.hpp"
#include "droca/sat.hpp"
#include "droca/table.hpp"
#include "droca/teacher.hpp"

namespace droca {

/// Asks cv(w) and cv(w·a) for every letter, straight from the teacher.
/// ObservationTable::actions is the cached equivalent.
ActionsVector actions_vector(Teacher& teacher, const Word& w);

/// Extends P and S until the table is d-closed and d-consistent.
/// Throws DeadlineExceeded if the deadline passes between refills.
void repair(ObservationTable& table, Counter d, Teacher& teacher, Deadline deadline = std::nullopt);

struct ConstructOptions {
  MinDfaOptions mindfa;
  // Counter action for transitions no table word exercises; indexed
  // [sign][letter]. Empty means 0 everywhere.
  std::optional<ActionMap> default_actions;
};

struct ConstructResult {
  Droca droca;
  std::size_t dfa_states = 0;      // before trimming unreachable states
  std::size_t sat_calls = 0;
  std::size_t endpoint_transitions = 0;
  std::size_t prefix_transitions = 0;   // set from a prefix inside a cell word
  std::size_t prefix_disagreements = 0;  // such a prefix wanting another action
  std::size_t default_transitions = 0;
};

/// Minimal separating DFA of the table's samples, with counter actions read
/// off the table: first from each cell word's end state, then from the
/// prefixes along its path; the rest get the default. Unreachable states are
/// dropped. Throws InternalConsistencyError if two cell words ending in one
/// state with one sign carry different Actions.
ConstructResult construct_droca(const ObservationTable& table, const ConstructOptions& options = {});

struct LearnConfig {
  bool voca = false;
  // Required in VOCA mode: counter values are computed from it, never queried.
  std::optional<ActionMap> voca_actions;
  bool increment_d = true;
  Deadline deadline;
  SatBackendConfig sat;
  EncodeOptions encode;
};

struct CounterexampleRecord {
  Word word;
  CounterexampleKind kind = CounterexampleKind::AcceptMismatch;
  Counter height = 0;           // in the hidden machine, from cv queries
  Counter d_before = 0;
  std::size_t hypothesis_states = 0;
  Counter level = 0;            // max(d_before, height)
  std::size_t rows_before = 0;  // distinct rows with cv <= level
  std::size_t rows_after = 0;   // same count once the table is repaired again
  bool rows_after_known = false;
};

struct Stats {
  std::size_t n_mq = 0, n_cv = 0, n_seq = 0, n_sat = 0;
  std::size_t max_ce_len = 0;
  Counter final_d = 0;
  double wall_ms = 0;
  std::size_t learnt_states = 0;
  std::vector<std::size_t> hypothesis_sizes;
  std::vector<CounterexampleRecord> counterexamples;
  std::size_t prefix_disagreements = 0;
  std::size_t table_replay_failures = 0;  // hypotheses disagreeing with their own table
};

class LearnTimeout : public Error {
 public:
  explicit LearnTimeout(Stats stats) : Error("learning timed out"), stats_(std::move(stats)) {}
  const Stats& stats() const noexcept { return stats_; }

 private:
  Stats stats_;
};

struct LearnResult {
  Droca hypothesis;
  Stats stats;
};

LearnResult learn(Teacher& teacher, const LearnConfig& config = {});

/// One JSON object with the fixed session keys.
struct SessionSummary {
  std::uint64_t seed = 0;
  std::size_t target_states = 0;
  std::size_t alphabet = 0;
  bool success = false;
  Stats stats;
};
std::string to_json(const SessionSummary& s);

}  // namespace droca
