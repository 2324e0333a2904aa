#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "droca/automaton.hpp"
#include "droca/learner.hpp"
#include "droca/sat.hpp"

namespace droca {

/// SplitMix64; portable, 64-bit state, cheap to derive per-sample streams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, bound), bound > 0 (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return (next() >> 63) != 0; }

  /// Independent seed for a sub-stream, e.g. one benchmark sample.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_;
};

struct GenConfig {
  std::size_t n_states = 2;
  std::size_t alphabet_size = 2;
  std::uint64_t seed = 0;
  bool restricted = false;
  std::size_t max_attempts = 1'000'000;
};

/// Random machine with exactly n_states states reachable within counter n².
/// States are q0..q(n-1), q0 initial; letters a, b, c, ...
/// Throws GenerationFailure after max_attempts rejected draws.
Droca generate_droca(const GenConfig& g);

/// Restricted shape: no delta1 entry enters a final state and every delta0
/// entry into a final state has action 0.
bool final_states_entered_at_zero(const Droca& a);

/// States visited by BFS from (initial, 0) over configurations with counter <= |A|².
std::size_t reachable_count(const Droca& a);

struct BenchConfig {
  std::size_t min_states = 2, max_states = 2;
  std::size_t min_alphabet = 2, max_alphabet = 2;
  std::size_t samples = 1;
  std::uint64_t seed = 0;
  double timeout_s = 300;
  bool restricted = false;
  std::size_t jobs = 1;
  SatBackendConfig sat;
};

struct BenchRow {
  std::uint64_t seed = 0;  // per-sample seed, reusable with generate_droca
  std::size_t target_states = 0;
  std::size_t alphabet = 0;
  bool success = false;
  Stats stats;
  std::string reason;
};

inline constexpr const char* kBenchCsvHeader =
    "seed,target_states,alphabet,success,wall_ms,learnt_states,n_seq,n_mq,n_cv,n_sat,max_ce_len,final_d,reason";

std::string csv_line(const BenchRow& row);

/// Validates the configuration; throws InvalidInput.
void check(const BenchConfig& b);

/// Runs every (states, alphabet, sample) cell, up to b.jobs at a time. Rows are
/// written to csv (header first) in cell order as soon as they are final.
/// on_row, if set, is called from the writer in the same order.
std::vector<BenchRow> run_benchmark(const BenchConfig& b, std::ostream& csv,
                                    const std::function<void(const BenchRow&)>& on_row = {});

}  // namespace droca
