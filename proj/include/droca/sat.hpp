#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace droca {

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

inline bool expired(const Deadline& d) { return d && Clock::now() >= *d; }

/// What a variable stands for in the DFA-identification encoding.
/// Color: node a has color b. Accept: color a is accepting.
/// Trans: symbol a takes color b to color c. Free: anything else.
enum class VarKind : std::uint8_t { Free, Color, Accept, Trans };

struct VarMeaning {
  VarKind kind = VarKind::Free;
  std::uint32_t a = 0, b = 0, c = 0;

  friend bool operator==(const VarMeaning&, const VarMeaning&) = default;
};

/// Variables are 1-based; a negative literal is a negated variable.
struct CnfInstance {
  std::vector<std::vector<int>> clauses;
  std::vector<VarMeaning> decode;  // decode[v - 1]

  std::size_t num_vars() const noexcept { return decode.size(); }
  int new_var(VarMeaning m = {});
  void add(std::vector<int> clause);
};

/// "p cnf V C" header, one zero-terminated clause per line.
std::string to_dimacs(const CnfInstance& cnf);
/// Comment lines are skipped; decode entries come back as Free.
CnfInstance parse_dimacs(std::string_view text);

/// model[v] for v in 1..num_vars; model[0] unused.
using Assignment = std::vector<bool>;

bool satisfies(const CnfInstance& cnf, const Assignment& model);

struct SatBackendConfig {
  enum class Kind { Builtin, External } kind = Kind::Builtin;
  std::filesystem::path executable;
  double time_limit_s = 0;  // 0: no per-call limit

  /// "builtin" or "external:<path>".
  static SatBackendConfig parse(std::string_view spec);
  /// The explicit spec if given, else $DROCA_SAT_BACKEND, else builtin.
  static SatBackendConfig resolve(const std::optional<std::string>& explicit_spec);
  std::string describe() const;
};

inline constexpr const char* kSatBackendEnv = "DROCA_SAT_BACKEND";

/// Satisfying assignment or nullopt. Every returned model has been checked
/// against the clauses. Throws BackendError (DeadlineExceeded on time-out).
std::optional<Assignment> sat_solve(const CnfInstance& cnf, const SatBackendConfig& config = {},
                                    Deadline deadline = std::nullopt);

/// The in-process CDCL solver on its own.
std::optional<Assignment> solve_builtin(const CnfInstance& cnf, Deadline deadline = std::nullopt);

/// Runs `executable <file.cnf>` and reads the SAT-competition style reply.
std::optional<Assignment> solve_external(const CnfInstance& cnf, const std::filesystem::path& executable,
                                         Deadline deadline = std::nullopt);

/// Parses "s SATISFIABLE" / "s UNSATISFIABLE" and "v ..." lines.
std::optional<Assignment> parse_solver_output(std::string_view text, std::size_t num_vars);

}  // namespace droca
