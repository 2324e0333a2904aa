// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "droca/learner.hpp"
#include "droca/workbench.hpp"
#include "fixtures.hpp"

using namespace droca;

namespace {

// Time limits and sample counts.
constexpr double kGoldenBudgetS = 1.0;
constexpr double kCharDfaBudgetS = 1.0;
constexpr double kLearnBudgetS = 60.0;
constexpr std::size_t kBenchSamples = 20;
constexpr double kBenchTimeoutS = 300.0;
constexpr double kBenchBudgetS = 2 * 3600.0;
constexpr std::size_t kSessions = 100;
constexpr std::size_t kSyncPairs = 500;
constexpr std::size_t kSyncMaxLen = 12;
constexpr std::size_t kVocaPairs = 200;
constexpr double kVocaBudgetS = 600.0;
constexpr std::size_t kSampleSets = 100;
constexpr double kMinDfaBudgetS = 900.0;
constexpr std::uint64_t kSeed = 20240601;

int failures = 0;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

void report(int id, bool ok, const std::string& what) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << std::endl;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// The example table as printed: word, CV, then Memb/Actions for suffixes ε, a.
struct PrintedRow {
  const char* word;
  Counter cv;
  bool memb_e;
  const char* act_e;
  bool memb_a;
  const char* act_a;
};
const PrintedRow kPrintedTable[] = {
    {"", 0, 0, "(0,+1,+1)", 0, "(1,+1,-1)"},     {"a", 1, 0, "(1,+1,-1)", 0, "(1,+1,-1)"},
    {"ab", 0, 0, "(0,0,+1)", 1, "(0,+1,+1)"},    {"aba", 0, 1, "(0,+1,+1)", 0, "(1,+1,+1)"},
    {"b", 1, 0, "(1,+1,+1)", 0, "(1,+1,+1)"},    {"aa", 2, 0, "(1,+1,-1)", 0, "(1,+1,-1)"},
    {"abb", 1, 0, "(1,+1,+1)", 0, "(1,+1,+1)"},  {"abaa", 1, 0, "(1,+1,+1)", 0, "(1,+1,+1)"},
    {"abab", 1, 0, "(1,+1,+1)", 0, "(1,+1,+1)"}, {"ba", 2, 0, "(1,+1,+1)", 0, "(1,+1,+1)"},
    {"bb", 1, 0, "(1,+1,+1)", 0, "(1,+1,+1)"},
};

void golden_table() {
  const auto start = Clock::now();
  const Droca m = fx::m_ex();
  SimulatedTeacher t(m);
  ObservationTable table(m.alphabet());
  table.add_prefix(fx::w(m, "aba"));
  table.add_prefix(fx::w(m, "b"));
  table.add_suffix(fx::w(m, "a"));
  table.fill(t);

  std::size_t cells = 0;
  std::vector<std::string> diffs;
  auto expect = [&](const std::string& where, const std::string& got, const std::string& want) {
    ++cells;
    if (got != want) diffs.push_back(where + " got " + got + " want " + want);
  };
  const std::vector<Word> rows = table.row_words();
  bool same_rows = rows.size() == std::size(kPrintedTable);
  for (std::size_t i = 0; i < std::size(kPrintedTable); ++i) {
    const PrintedRow& p = kPrintedTable[i];
    const Word u = fx::w(m, p.word);
    const std::string name = *p.word ? p.word : "ε";
    if (same_rows && rows[i] != u) same_rows = false;
    expect(name + " CV", std::to_string(table.cv(u)), std::to_string(p.cv));
    const Word ua = concat(u, fx::w(m, "a"));
    expect(name + "·ε Memb", std::to_string(table.memb(u)), std::to_string(p.memb_e));
    expect(name + "·ε Actions", table.actions(u).format(), p.act_e);
    expect(name + "·a Memb", std::to_string(table.memb(ua)), std::to_string(p.memb_a));
    expect(name + "·a Actions", table.actions(ua).format(), p.act_a);
  }
  const double s = seconds_since(start);
  std::string what = std::to_string(cells - diffs.size()) + "/" + std::to_string(cells) + " values match, rows " +
                     (same_rows ? "in printed order" : "out of order") + ", " + fmt(s) + " s";
  for (const auto& d : diffs) what += "; " + d;
  report(1, diffs.empty() && same_rows && s < kGoldenBudgetS, what);
}

void characteristic() {
  const auto start = Clock::now();
  // a0 a1 b0 b1 per state, q2 final.
  const Dfa expected(4, 4, 0, {false, false, true, false}, {0, 0, 3, 1, 2, 3, 3, 1, 3, 3, 3, 3, 3, 3, 3, 3});
  const Dfa d = characteristic_dfa(fx::m_ex());
  const bool iso = fx::dfa_isomorphic(d, expected);
  const double s = seconds_since(start);
  report(2, iso && s < kCharDfaBudgetS,
         std::to_string(d.num_states()) + " states, " + (iso ? "isomorphic" : "not isomorphic") + ", " + fmt(s) + " s");
}

void learn_instance(int id, const Droca& target, std::size_t want_states) {
  const auto start = Clock::now();
  SimulatedTeacher t(target);
  const LearnResult r = learn(t);
  const double s = seconds_since(start);
  const bool eq = check_sync_equiv(r.hypothesis, target).equivalent();
  report(id, eq && r.hypothesis.num_states() == want_states && s < kLearnBudgetS,
         std::to_string(target.num_states()) + "-state target learnt as " + std::to_string(r.hypothesis.num_states()) +
             " states (want " + std::to_string(want_states) + "), " + (eq ? "equivalent" : "NOT equivalent") + ", " +
             std::to_string(r.stats.n_seq) + " seq, " + fmt(s) + " s");
}

void benchmark() {
  const auto start = Clock::now();
  BenchConfig b;
  b.min_states = 2;
  b.max_states = 6;
  b.min_alphabet = b.max_alphabet = 2;
  b.samples = kBenchSamples;
  b.seed = kSeed;
  b.timeout_s = kBenchTimeoutS;
  b.restricted = true;
  b.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::ostringstream csv;
  const auto rows = run_benchmark(b, csv);
  std::size_t ok = 0, small = 0;
  double slowest = 0;
  for (const auto& r : rows) {
    ok += r.success ? 1 : 0;
    small += r.success && r.stats.learnt_states <= r.target_states ? 1 : 0;
    slowest = std::max(slowest, r.stats.wall_ms);
  }
  const double s = seconds_since(start);
  report(5, ok == rows.size() && small == rows.size() && rows.size() == 5 * kBenchSamples && s < kBenchBudgetS,
         std::to_string(ok) + "/" + std::to_string(rows.size()) + " learnt, " + std::to_string(small) +
             " with learnt <= target, slowest " + fmt(slowest / 1000) + " s, total " + fmt(s) + " s");
}

struct Session {
  std::size_t target_states = 0;
  Droca target;
  Stats stats;
};

std::vector<Session> sessions() {
  std::vector<Session> out;
  for (std::size_t i = 0; i < kSessions; ++i) {
    const std::size_t n = 2 + i % 5;
    const Droca target = generate_droca({n, 2, SplitMix64::derive(kSeed + 1, i), true});
    SimulatedTeacher t(target);
    LearnResult r = learn(t);
    out.push_back({n, target, std::move(r.stats)});
  }
  return out;
}

std::size_t pow_n(std::size_t k, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= k;
  return r;
}

void query_bounds(const std::vector<Session>& all) {
  std::size_t ces = 0, a_bad = 0, b_bad = 0, b1_bad = 0, c_bad = 0;
  std::string a_example;
  for (const Session& s : all) {
    const std::size_t k = s.target_states;
    for (const auto& ce : s.stats.counterexamples) {
      ++ces;
      if (!ce.rows_after_known || ce.rows_after <= ce.rows_before) {
        ++a_bad;
        if (a_example.empty()) {
          a_example = "e.g. |Q|=" + std::to_string(k) + " z=" + s.target.alphabet().format(ce.word) +
                      " level " + std::to_string(ce.level) + " rows " + std::to_string(ce.rows_before) + "->" +
                      std::to_string(ce.rows_after);
        }
      }
    }
    Counter top = 0;
    for (const auto& ce : s.stats.counterexamples) top = std::max(top, ce.height);
    bool lit = false, shifted = false;
    for (Counter d = 0; d <= top; ++d) {
      std::size_t count = 0;
      for (const auto& ce : s.stats.counterexamples) count += ce.height <= d ? 1 : 0;
      lit |= count > static_cast<std::size_t>(d) * k;
      shifted |= count > static_cast<std::size_t>(d + 1) * k;
    }
    b_bad += lit ? 1 : 0;
    b1_bad += shifted ? 1 : 0;
    c_bad += s.stats.n_seq > pow_n(k, 5) + 1 ? 1 : 0;
  }
  const std::string n = std::to_string(all.size()) + " sessions, " + std::to_string(ces) + " counterexamples";
  report(6, a_bad == 0 && b_bad == 0 && c_bad == 0,
         n + "; (a) " + std::to_string(a_bad) + " counterexamples without row growth" +
             (a_example.empty() ? "" : " (" + a_example + ")") + "; (b) " + std::to_string(b_bad) +
             " sessions over d*|Q|; (c) " + std::to_string(c_bad) + " sessions over |Q|^5+1");
  std::cout << "INFO criterion 6(b) with (d+1)*|Q| in place of d*|Q|: " << b1_bad << " sessions over" << std::endl;
}

void counterexample_bounds(const std::vector<Session>& all) {
  std::size_t ces = 0, bad = 0;
  for (const Session& s : all) {
    const std::size_t k = s.target_states;
    for (const auto& ce : s.stats.counterexamples) {
      ++ces;
      if (ce.word.size() > 2 * pow_n(k, 5) || fx::sim_height(s.target, ce.word) > static_cast<Counter>(pow_n(k, 4))) {
        ++bad;
      }
    }
  }
  std::mt19937_64 rng(kSeed + 2);
  std::size_t disagree = 0, witnesses = 0;
  for (std::size_t i = 0; i < kSyncPairs; ++i) {
    const std::size_t k = 1 + rng() % 2;
    const Droca a = fx::random_droca(rng, 1 + rng() % 5, k);
    Droca b = a;
    switch (rng() % 3) {
      case 0: b = a.num_states() < 5 ? fx::split_state(rng, a) : a; break;
      case 1: b = fx::mutate(rng, a); break;
      default: b = fx::random_droca(rng, 1 + rng() % 5, k); break;
    }
    const Verdict v = check_sync_equiv(a, b);
    const auto naive = fx::naive_disagreement(a, b, kSyncMaxLen);
    if (v.equivalent() || v.counterexample->word.size() > kSyncMaxLen) {
      disagree += naive ? 1 : 0;
    } else {
      ++witnesses;
      disagree += naive != v.counterexample ? 1 : 0;
    }
  }
  report(7, bad == 0 && disagree == 0,
         std::to_string(bad) + "/" + std::to_string(ces) + " learner counterexamples out of bounds; " +
             std::to_string(disagree) + "/" + std::to_string(kSyncPairs) + " pairs disagree with enumeration to length " +
             std::to_string(kSyncMaxLen) + " (" + std::to_string(witnesses) + " with witnesses)");
}

void voca_suite() {
  const auto start = Clock::now();
  std::mt19937_64 rng(kSeed + 3);
  std::size_t disagree = 0, out_of_bounds = 0, witnesses = 0;
  for (std::size_t i = 0; i < kVocaPairs; ++i) {
    const ActionMap m = fx::random_action_map(rng, 1 + rng() % 2);
    const Droca a = fx::random_voca(rng, 1 + rng() % 5, m);
    Droca b = a;
    switch (rng() % 3) {
      case 0: b = a.num_states() < 5 ? fx::with_actions(fx::split_state(rng, a), m) : a; break;
      case 1: b = fx::with_actions(fx::mutate(rng, a), m); break;
      default: b = fx::random_voca(rng, 1 + rng() % 5, m); break;
    }
    const Verdict v = voca_check_equiv(a, b);
    const std::size_t k = std::max(a.num_states(), b.num_states());
    const std::size_t max_len = 4 * k * (k + k * k);
    const Verdict bf = brute_force_equiv(a, b, max_len);
    if (v.equivalent() != bf.equivalent()) {
      ++disagree;
      continue;
    }
    if (v.equivalent()) continue;
    ++witnesses;
    const Word& z = v.counterexample->word;
    if (z.size() != bf.counterexample->word.size()) ++disagree;
    const Counter h = static_cast<Counter>(2 * (k + k * k));
    if (z.size() > max_len || fx::sim_height(a, z) > h || fx::sim_height(b, z) > h) ++out_of_bounds;
  }
  const double s = seconds_since(start);
  report(8, disagree == 0 && out_of_bounds == 0 && s < kVocaBudgetS,
         std::to_string(disagree) + "/" + std::to_string(kVocaPairs) + " pairs disagree, " +
             std::to_string(out_of_bounds) + "/" + std::to_string(witnesses) + " witnesses out of bounds, " + fmt(s) +
             " s");
}

void min_dfa() {
  const auto start = Clock::now();
  std::mt19937_64 rng(kSeed + 4);
  std::size_t wrong = 0, largest = 0;
  for (std::size_t i = 0; i < kSampleSets; ++i) {
    const std::size_t m = 1 + rng() % 6;
    auto [pos, neg] = fx::random_samples(rng, m);
    const std::size_t got = find_min_sep_dfa(m, pos, neg).dfa.num_states();
    fx::MinDfaOracle oracle(m, pos, neg);
    if (oracle.min_size(got) != got) ++wrong;
    largest = std::max(largest, got);
  }
  const double s = seconds_since(start);
  report(9, wrong == 0 && s < kMinDfaBudgetS,
         std::to_string(wrong) + "/" + std::to_string(kSampleSets) + " sizes differ from exhaustive search, largest " +
             std::to_string(largest) + " states, " + fmt(s) + " s");
}

}  // namespace

int main() {
  std::cout << std::unitbuf;
  golden_table();
  characteristic();
  learn_instance(3, fx::m_ex(), 4);
  learn_instance(4, fx::a_plus(), 4);
  benchmark();
  const auto all = sessions();
  query_bounds(all);
  counterexample_bounds(all);
  voca_suite();
  min_dfa();
  std::cout << "INFO criterion 10: timing comparisons against other tools are not reproduced; "
               "see the property suites above and the benchmark CSV"
            << std::endl;
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
