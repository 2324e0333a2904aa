#include "droca/sat.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "droca/error.hpp"

namespace droca {

int CnfInstance::new_var(VarMeaning m) {
  decode.push_back(m);
  return static_cast<int>(decode.size());
}

void CnfInstance::add(std::vector<int> clause) {
  for (int l : clause) {
    if (l == 0 || static_cast<std::size_t>(std::abs(l)) > decode.size()) {
      throw InvalidInput("literal " + std::to_string(l) + " references an undeclared variable");
    }
  }
  clauses.push_back(std::move(clause));
}

std::string to_dimacs(const CnfInstance& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.num_vars()) + " " + std::to_string(cnf.clauses.size()) + "\n";
  for (const auto& c : cnf.clauses) {
    for (int l : c) {
      out += std::to_string(l);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

CnfInstance parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  CnfInstance cnf;
  bool header = false;
  std::size_t declared = 0;
  std::vector<int> cur;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      std::size_t vars = 0;
      ls >> p >> fmt >> vars >> declared;
      if (fmt != "cnf" || ls.fail()) throw InvalidInput("bad DIMACS header: " + line);
      cnf.decode.assign(vars, VarMeaning{});
      header = true;
      continue;
    }
    if (!header) throw InvalidInput("DIMACS clause before header");
    long long l;
    while (ls >> l) {
      if (l == 0) {
        cnf.add(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(static_cast<int>(l));
      }
    }
  }
  if (!cur.empty()) cnf.add(std::move(cur));
  if (header && cnf.clauses.size() != declared) {
    throw InvalidInput("DIMACS header declares " + std::to_string(declared) + " clauses, found " +
                       std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

bool satisfies(const CnfInstance& cnf, const Assignment& model) {
  if (model.size() != cnf.num_vars() + 1) return false;
  for (const auto& c : cnf.clauses) {
    bool sat = false;
    for (int l : c) {
      if (model[static_cast<std::size_t>(std::abs(l))] == (l > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

namespace {

// --- CDCL ------------------------------------------------------------------
// Two watched literals, first-UIP learning, VSIDS, phase saving, Luby restarts.

using Lit = std::uint32_t;  // 2*var + negated
constexpr Lit kNoLit = ~Lit{0};
constexpr std::int8_t kFalse = 0, kTrue = 1, kUndef = 2;
constexpr int kNoReason = -1;

inline Lit mk_lit(int dimacs) {
  return static_cast<Lit>(2 * (std::abs(dimacs) - 1) + (dimacs < 0 ? 1 : 0));
}
inline std::uint32_t var(Lit l) { return l >> 1; }
inline Lit neg(Lit l) { return l ^ 1u; }

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x %= size;
  }
  return std::pow(y, seq);
}

class Cdcl {
 public:
  enum class Result { Sat, Unsat, Unknown };

  explicit Cdcl(std::size_t n)
      : n_(n), watches_(2 * n), assign_(n, kUndef), level_(n, 0), reason_(n, kNoReason), activity_(n, 0.0),
        polarity_(n, 1), seen_(n, 0), heap_pos_(n, -1) {
    for (std::uint32_t v = 0; v < n; ++v) heap_insert(v);
  }

  void add_clause(const std::vector<int>& dimacs) {
    if (!ok_) return;
    std::vector<Lit> c;
    for (int l : dimacs) c.push_back(mk_lit(l));
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::vector<Lit> kept;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i + 1 < c.size() && c[i + 1] == neg(c[i])) return;  // tautology
      const auto v = value(c[i]);
      if (v == kTrue) return;
      if (v == kUndef) kept.push_back(c[i]);
    }
    if (kept.empty()) {
      ok_ = false;
    } else if (kept.size() == 1) {
      enqueue(kept[0], kNoReason);
      if (propagate() != kNoReason) ok_ = false;
    } else {
      attach(new_clause(std::move(kept), false));
    }
  }

  Result solve(const Deadline& deadline) {
    if (!ok_) return Result::Unsat;
    max_learnts_ = std::max<double>(clauses_.size() / 3.0, 2000.0);
    for (int restart = 0;; ++restart) {
      const auto budget = static_cast<std::uint64_t>(luby(2.0, restart) * 100);
      Result r = search(budget, deadline);
      if (r != Result::Unknown) return r;
      if (timed_out_) return Result::Unknown;
    }
  }

  bool model_value(std::uint32_t v) const { return assign_[v] == kTrue; }

 private:
  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0;
  };
  struct Watcher {
    int cref;
    Lit blocker;
  };

  std::int8_t value(Lit l) const {
    const auto a = assign_[var(l)];
    return a == kUndef ? kUndef : static_cast<std::int8_t>(a ^ static_cast<std::int8_t>(l & 1u));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int new_clause(std::vector<Lit> lits, bool learnt) {
    clauses_.push_back({std::move(lits), learnt, false, 0});
    return static_cast<int>(clauses_.size() - 1);
  }
  // Watched on lits[0] and lits[1]; watches_[l] fires when l becomes false.
  void attach(int cref) {
    const auto& c = clauses_[cref].lits;
    watches_[c[0]].push_back({cref, c[1]});
    watches_[c[1]].push_back({cref, c[0]});
  }

  void enqueue(Lit l, int reason) {
    const auto v = var(l);
    assign_[v] = static_cast<std::int8_t>((l & 1u) ? kFalse : kTrue);
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  int propagate() {
    int confl = kNoReason;
    while (qhead_ < trail_.size()) {
      const Lit p = trail_[qhead_++];
      const Lit false_lit = neg(p);
      auto& ws = watches_[false_lit];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        const Watcher w = ws[i++];
        if (value(w.blocker) == kTrue) {
          ws[j++] = w;
          continue;
        }
        Clause& c = clauses_[w.cref];
        if (c.deleted) continue;
        auto& lits = c.lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        const Lit first = lits[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value(lits[k]) != kFalse) {
            std::swap(lits[1], lits[k]);
            watches_[lits[1]].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          confl = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (confl != kNoReason) break;
    }
    return confl;
  }

  void analyze(int confl, std::vector<Lit>& learnt, int& bt_level) {
    learnt.assign(1, kNoLit);
    int path = 0;
    Lit p = kNoLit;
    std::size_t idx = trail_.size();
    do {
      Clause& c = clauses_[confl];
      if (c.learnt) bump_clause(c);
      for (std::size_t j = (p == kNoLit ? 0 : 1); j < c.lits.size(); ++j) {
        const Lit q = c.lits[j];
        const auto v = var(q);
        if (seen_[v] || level_[v] == 0) continue;
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level()) {
          ++path;
        } else {
          learnt.push_back(q);
        }
      }
      while (!seen_[var(trail_[--idx])]) {
      }
      p = trail_[idx];
      confl = reason_[var(p)];
      seen_[var(p)] = 0;
      --path;
    } while (path > 0);
    learnt[0] = neg(p);

    // Drop literals implied by the rest of the clause (local minimisation).
    const std::vector<Lit> full = learnt;
    std::size_t keep = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      const int r = reason_[var(learnt[i])];
      bool redundant = r != kNoReason;
      if (redundant) {
        const auto& rl = clauses_[r].lits;
        for (std::size_t k = 1; k < rl.size(); ++k) {
          const auto v = var(rl[k]);
          if (!seen_[v] && level_[v] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) learnt[keep++] = learnt[i];
    }
    learnt.resize(keep);
    for (Lit l : full) seen_[var(l)] = 0;

    bt_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i) {
        if (level_[var(learnt[i])] > level_[var(learnt[max_i])]) max_i = i;
      }
      std::swap(learnt[1], learnt[max_i]);
      bt_level = level_[var(learnt[1])];
    }
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
      const auto v = var(trail_[i]);
      polarity_[v] = static_cast<std::int8_t>(trail_[i] & 1u);
      assign_[v] = kUndef;
      reason_[v] = kNoReason;
      if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    qhead_ = trail_.size();
    trail_lim_.resize(lvl);
  }

  Lit pick_branch() {
    while (!heap_.empty()) {
      const auto v = heap_pop();
      if (assign_[v] == kUndef) return 2 * v + static_cast<Lit>(polarity_[v]);
    }
    return kNoLit;
  }

  Result search(std::uint64_t budget, const Deadline& deadline) {
    std::uint64_t conflicts = 0;
    std::vector<Lit> learnt;
    for (std::uint64_t iter = 0;; ++iter) {
      if ((iter & 1023u) == 0 && expired(deadline)) {
        timed_out_ = true;
        return Result::Unknown;
      }
      const int confl = propagate();
      if (confl != kNoReason) {
        ++conflicts;
        if (decision_level() == 0) return Result::Unsat;
        int bt = 0;
        analyze(confl, learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          const int cref = new_clause(learnt, true);
          attach(cref);
          bump_clause(clauses_[cref]);
          ++num_learnts_;
          enqueue(learnt[0], cref);
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        continue;
      }
      if (conflicts >= budget) {
        cancel_until(0);
        return Result::Unknown;
      }
      if (static_cast<double>(num_learnts_) >= max_learnts_) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      const Lit next = pick_branch();
      if (next == kNoLit) return Result::Sat;
      trail_lim_.push_back(trail_.size());
      enqueue(next, kNoReason);
    }
  }

  bool locked(int cref) const {
    const Lit l = clauses_[cref].lits[0];
    return value(l) == kTrue && reason_[var(l)] == cref;
  }

  void reduce_db() {
    std::vector<int> cand;
    for (int i = 0; i < static_cast<int>(clauses_.size()); ++i) {
      const auto& c = clauses_[i];
      if (c.learnt && !c.deleted && c.lits.size() > 2 && !locked(i)) cand.push_back(i);
    }
    std::sort(cand.begin(), cand.end(),
              [&](int a, int b) { return clauses_[a].activity < clauses_[b].activity; });
    for (std::size_t i = 0; i < cand.size() / 2; ++i) {
      auto& c = clauses_[cand[i]];
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
      --num_learnts_;
    }
    // Purge watchers of deleted clauses so blocker checks cannot resurrect them.
    for (auto& ws : watches_) {
      ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher& w) { return clauses_[w.cref].deleted; }),
               ws.end());
    }
  }

  void bump_var(std::uint32_t v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
  }

  void bump_clause(Clause& c) {
    if ((c.activity += cla_inc_) > 1e20) {
      for (auto& x : clauses_) {
        if (x.learnt) x.activity *= 1e-20;
      }
      cla_inc_ *= 1e-20;
    }
  }

  // Binary max-heap on activity.
  bool before(std::uint32_t a, std::uint32_t b) const { return activity_[a] > activity_[b]; }
  void heap_insert(std::uint32_t v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_pos_[v]);
  }
  std::uint32_t heap_pop() {
    const auto top = heap_[0];
    heap_[0] = heap_.back();
    heap_pos_[heap_[0]] = 0;
    heap_.pop_back();
    heap_pos_[top] = -1;
    if (!heap_.empty()) heap_down(0);
    return top;
  }
  void heap_up(int i) {
    const auto v = heap_[i];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }
  void heap_down(int i) {
    const auto v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  std::size_t n_;
  std::vector<Clause> clauses_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  std::vector<std::int8_t> polarity_;  // 1: try negative first
  std::vector<char> seen_;
  std::vector<std::uint32_t> heap_;
  std::vector<int> heap_pos_;
  double var_inc_ = 1, cla_inc_ = 1;
  double max_learnts_ = 0;
  std::size_t num_learnts_ = 0;
  bool ok_ = true;
  bool timed_out_ = false;
};

Deadline earliest(Deadline a, const SatBackendConfig& config) {
  if (config.time_limit_s <= 0) return a;
  auto limit = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(config.time_limit_s));
  return a ? std::min(*a, limit) : limit;
}

}  // namespace

std::optional<Assignment> solve_builtin(const CnfInstance& cnf, Deadline deadline) {
  Cdcl solver(cnf.num_vars());
  for (const auto& c : cnf.clauses) solver.add_clause(c);
  switch (solver.solve(deadline)) {
    case Cdcl::Result::Unsat:
      return std::nullopt;
    case Cdcl::Result::Unknown:
      throw DeadlineExceeded("builtin SAT solver ran out of time");
    case Cdcl::Result::Sat:
      break;
  }
  Assignment model(cnf.num_vars() + 1, false);
  for (std::size_t v = 0; v < cnf.num_vars(); ++v) model[v + 1] = solver.model_value(static_cast<std::uint32_t>(v));
  return model;
}

std::optional<Assignment> parse_solver_output(std::string_view text, std::size_t num_vars) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<bool> sat;
  Assignment model(num_vars + 1, false);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("s ", 0) == 0) {
      if (line == "s SATISFIABLE") {
        sat = true;
      } else if (line == "s UNSATISFIABLE") {
        sat = false;
      } else {
        throw BackendError("solver gave up: " + line);
      }
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream vs(line.substr(2));
      long long l;
      while (vs >> l) {
        const auto v = static_cast<std::size_t>(std::llabs(l));
        if (v > num_vars) throw BackendError("solver reported unknown variable " + std::to_string(v));
        if (l != 0) model[v] = l > 0;
      }
    }
  }
  if (!sat) throw BackendError("solver output has no status line");
  if (!*sat) return std::nullopt;
  return model;
}

std::optional<Assignment> solve_external(const CnfInstance& cnf, const std::filesystem::path& executable,
                                         Deadline deadline) {
  namespace fs = std::filesystem;
  if (!fs::exists(executable)) throw BackendError("SAT solver not found: " + executable.string());

  std::string cnf_tmpl = (fs::temp_directory_path() / "droca-XXXXXX.cnf").string();
  std::string out_tmpl = (fs::temp_directory_path() / "droca-XXXXXX.out").string();
  const int cnf_fd = mkstemps(cnf_tmpl.data(), 4);
  if (cnf_fd < 0) throw BackendError("cannot create temporary CNF file");
  const int out_fd = mkstemps(out_tmpl.data(), 4);
  if (out_fd < 0) {
    close(cnf_fd);
    fs::remove(cnf_tmpl);
    throw BackendError("cannot create temporary output file");
  }
  struct Cleanup {
    std::string a, b;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove(a, ec);
      std::filesystem::remove(b, ec);
    }
  } cleanup{cnf_tmpl, out_tmpl};

  const std::string text = to_dimacs(cnf);
  for (std::size_t off = 0; off < text.size();) {
    const auto w = write(cnf_fd, text.data() + off, text.size() - off);
    if (w <= 0) {
      close(cnf_fd);
      close(out_fd);
      throw BackendError("cannot write CNF file");
    }
    off += static_cast<std::size_t>(w);
  }
  close(cnf_fd);

  const std::string exe = executable.string();
  const pid_t pid = fork();
  if (pid < 0) {
    close(out_fd);
    throw BackendError("fork failed");
  }
  if (pid == 0) {
    dup2(out_fd, STDOUT_FILENO);
    const int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, STDERR_FILENO);
    char* argv[] = {const_cast<char*>(exe.c_str()), const_cast<char*>(cnf_tmpl.c_str()), nullptr};
    execv(exe.c_str(), argv);
    _exit(127);
  }
  close(out_fd);

  int status = 0;
  auto pause = std::chrono::microseconds(200);
  for (;;) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) throw BackendError("waitpid failed");
    if (expired(deadline)) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      throw DeadlineExceeded("external SAT solver exceeded its time limit");
    }
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::microseconds(20000));
  }
  if (WIFSIGNALED(status)) throw BackendError("SAT solver killed by signal " + std::to_string(WTERMSIG(status)));
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127) throw BackendError("cannot execute " + exe);

  std::ifstream in(out_tmpl);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_solver_output(buf.str(), cnf.num_vars());
}

std::optional<Assignment> sat_solve(const CnfInstance& cnf, const SatBackendConfig& config, Deadline deadline) {
  deadline = earliest(deadline, config);
  std::optional<Assignment> model = config.kind == SatBackendConfig::Kind::Builtin
                                        ? solve_builtin(cnf, deadline)
                                        : solve_external(cnf, config.executable, deadline);
  if (model && !satisfies(cnf, *model)) {
    if (config.kind == SatBackendConfig::Kind::Builtin) {
      throw InternalConsistencyError("builtin solver returned a non-model");
    }
    throw BackendError("external solver returned an assignment that violates the formula");
  }
  return model;
}

SatBackendConfig SatBackendConfig::parse(std::string_view spec) {
  SatBackendConfig c;
  if (spec == "builtin") return c;
  constexpr std::string_view prefix = "external:";
  if (spec.substr(0, prefix.size()) == prefix && spec.size() > prefix.size()) {
    c.kind = Kind::External;
    c.executable = std::string(spec.substr(prefix.size()));
    return c;
  }
  throw InvalidInput("SAT backend must be 'builtin' or 'external:<path>', got '" + std::string(spec) + "'");
}

SatBackendConfig SatBackendConfig::resolve(const std::optional<std::string>& explicit_spec) {
  if (explicit_spec) return parse(*explicit_spec);
  if (const char* env = std::getenv(kSatBackendEnv); env && *env) return parse(env);
  return {};
}

std::string SatBackendConfig::describe() const {
  return kind == Kind::Builtin ? "builtin" : "external:" + executable.string();
}

}  // namespace droca
