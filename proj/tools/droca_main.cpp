// Command-line front end: learn, equiv, generate, bench, encode.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "droca/automaton.hpp"
#include "droca/equivalence.hpp"
#include "droca/error.hpp"
#include "droca/json_io.hpp"
#include "droca/learner.hpp"
#include "droca/workbench.hpp"

namespace {

using namespace droca;

Deadline deadline_after(double seconds) {
  if (seconds <= 0) return std::nullopt;
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

std::string describe(const Alphabet& sigma, const Counterexample& ce) {
  return std::string(to_string(ce.kind)) + " " + sigma.format(ce.word);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn and compare deterministic real-time one-counter automata"};
  app.require_subcommand(1);
  bool sink = false;
  app.add_flag("--complete-with-sink", sink, "Send missing transitions of input machines to a fresh non-final sink");

  auto* learn_cmd = app.add_subcommand("learn", "Learn a machine from a simulated teacher");
  std::string target, out_path, stats_path;
  bool voca = false;
  std::uint64_t seed = 0;
  double timeout_s = 0;
  std::optional<std::string> sat_spec;
  learn_cmd->add_option("--target", target, "Hidden machine (JSON)")->required();
  learn_cmd->add_flag("--voca", voca, "Visibly mode: counter values come from the action map");
  learn_cmd->add_option("--seed", seed, "Recorded in the stats");
  learn_cmd->add_option("--timeout-s", timeout_s, "Give up after this many seconds");
  learn_cmd->add_option("--sat", sat_spec, "builtin | external:<path>");
  learn_cmd->add_option("--out", out_path, "Write the hypothesis here");
  learn_cmd->add_option("--stats", stats_path, "Write session statistics here");

  auto* equiv_cmd = app.add_subcommand("equiv", "Counter-synchronous equivalence with a minimal counterexample");
  std::string path_a, path_b;
  bool equiv_voca = false;
  equiv_cmd->add_option("--a", path_a)->required();
  equiv_cmd->add_option("--b", path_b)->required();
  equiv_cmd->add_flag("--voca", equiv_voca, "Use the VOCA procedure");

  auto* gen_cmd = app.add_subcommand("generate", "Random machine");
  std::size_t states = 0, alphabet = 0;
  bool restricted = false;
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  gen_cmd->add_option("--states", states)->required()->check(CLI::Range(2, 1000));
  gen_cmd->add_option("--alphabet", alphabet)->required()->check(CLI::Range(1, 26));
  gen_cmd->add_option("--seed", gen_seed)->required();
  gen_cmd->add_flag("--restricted", restricted, "Final states only entered at counter zero with action 0");
  gen_cmd->add_option("--out", gen_out)->required();

  auto* bench_cmd = app.add_subcommand("bench", "Benchmark sweep written as CSV");
  BenchConfig bench;
  std::string bench_out;
  std::optional<std::string> bench_sat;
  bench_cmd->add_option("--min-states", bench.min_states)->required();
  bench_cmd->add_option("--max-states", bench.max_states)->required();
  bench_cmd->add_option("--min-alphabet", bench.min_alphabet)->required();
  bench_cmd->add_option("--max-alphabet", bench.max_alphabet)->required();
  bench_cmd->add_option("--samples", bench.samples)->required();
  bench_cmd->add_option("--seed", bench.seed)->required();
  bench_cmd->add_option("--timeout-s", bench.timeout_s)->required();
  bench_cmd->add_flag("--restricted", bench.restricted);
  bench_cmd->add_option("--jobs", bench.jobs);
  bench_cmd->add_option("--sat", bench_sat, "builtin | external:<path>");
  bench_cmd->add_option("--out", bench_out)->required();

  auto* enc_cmd = app.add_subcommand("encode", "Print Enc(w) and the counter trace");
  std::string enc_target, word;
  enc_cmd->add_option("--target", enc_target)->required();
  enc_cmd->add_option("--word", word)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const LoadOptions load_opts{sink};
  try {
    if (*learn_cmd) {
      const Droca hidden = load_file(target, load_opts);
      LearnConfig cfg;
      cfg.voca = voca;
      if (voca) {
        cfg.voca_actions = voca_action_map(hidden);
        if (!cfg.voca_actions) throw InvalidInput("--voca needs a target whose actions depend only on letter and sign");
      }
      cfg.sat = SatBackendConfig::resolve(sat_spec);
      cfg.deadline = deadline_after(timeout_s);
      SimulatedTeacher teacher(hidden, voca);
      SessionSummary summary{seed, hidden.num_states(), hidden.alphabet().size(), false, {}};
      int code = 0;
      std::optional<Droca> result;
      try {
        LearnResult r = learn(teacher, cfg);
        summary.success = true;
        summary.stats = std::move(r.stats);
        result = std::move(r.hypothesis);
      } catch (const LearnTimeout& e) {
        summary.stats = e.stats();
        std::cerr << "timed out after " << summary.stats.wall_ms << " ms\n";
        code = 1;
      }
      if (result) {
        std::cout << "learnt " << result->num_states() << " states with " << summary.stats.n_seq
                  << " equivalence queries\n";
        if (!out_path.empty()) store_file(*result, out_path);
      }
      if (!stats_path.empty()) write_text(stats_path, to_json(summary));
      return code;
    }
    if (*equiv_cmd) {
      const Droca a = load_file(path_a, load_opts);
      const Droca b = load_file(path_b, load_opts);
      const Verdict v = equiv_voca ? voca_check_equiv(a, b) : check_sync_equiv(a, b);
      if (v.equivalent()) {
        std::cout << "equivalent\n";
        return 0;
      }
      std::cout << "not equivalent: " << describe(a.alphabet(), *v.counterexample) << "\n";
      return 1;
    }
    if (*gen_cmd) {
      store_file(generate_droca({states, alphabet, gen_seed, restricted}), gen_out);
      return 0;
    }
    if (*bench_cmd) {
      bench.sat = SatBackendConfig::resolve(bench_sat);
      check(bench);
      std::ofstream csv(bench_out);
      if (!csv) throw InvalidInput("cannot write " + bench_out);
      std::size_t ok = 0, total = 0;
      run_benchmark(bench, csv, [&](const BenchRow& r) {
        ++total;
        ok += r.success ? 1 : 0;
        std::cerr << "[" << total << "] states=" << r.target_states << " alphabet=" << r.alphabet
                  << (r.success ? " ok" : " FAILED " + r.reason) << "\n";
      });
      std::cout << ok << "/" << total << " learnt\n";
      return ok == total ? 0 : 1;
    }
    if (*enc_cmd) {
      const Droca a = load_file(enc_target, load_opts);
      const Word w = a.alphabet().parse_word(word);
      const RunTrace t = run(a, w);
      std::cout << "Enc: " << format_encoded(a.alphabet(), encode(a, w)) << "\n";
      std::cout << "trace:";
      for (std::size_t i = 0; i < t.configs.size(); ++i) {
        if (i > 0) std::cout << " " << a.alphabet().name(w[i - 1]);
        std::cout << " (" << a.state_name(t.configs[i].state) << "," << t.configs[i].counter << ")";
      }
      std::cout << "\n" << (t.accepted ? "accepted" : "rejected") << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
