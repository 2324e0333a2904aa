#include "droca/workbench.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "droca/error.hpp"

namespace droca {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidInput("empty range");
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t SplitMix64::derive(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  g.next();
  return g.next();
}

std::size_t reachable_count(const Droca& a) {
  const std::size_t n = a.num_states();
  const Counter cap = static_cast<Counter>(n * n);
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(static_cast<std::size_t>(cap) + 1, false));
  std::vector<bool> state_seen(n, false);
  std::vector<Configuration> queue{a.initial_config()};
  seen[a.initial()][0] = true;
  std::size_t count = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const Configuration c = queue[h];
    if (!state_seen[c.state]) {
      state_seen[c.state] = true;
      ++count;
    }
    for (Letter l = 0; l < a.alphabet().size(); ++l) {
      const Configuration d = step(a, c, l);
      if (d.counter > cap || seen[d.state][static_cast<std::size_t>(d.counter)]) continue;
      seen[d.state][static_cast<std::size_t>(d.counter)] = true;
      queue.push_back(d);
    }
  }
  return count;
}

bool final_states_entered_at_zero(const Droca& a) {
  for (const auto& t : a.delta1()) {
    if (a.is_final(t.target)) return false;
  }
  for (const auto& t : a.delta0()) {
    if (a.is_final(t.target) && t.action != 0) return false;
  }
  return true;
}

Droca generate_droca(const GenConfig& g) {
  if (g.n_states < 2) throw InvalidInput("need at least 2 states");
  if (g.alphabet_size < 1 || g.alphabet_size > 26) throw InvalidInput("alphabet size must be in 1..26");
  const std::size_t n = g.n_states, k = g.alphabet_size;
  std::vector<std::string> names, letters;
  for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i) letters.emplace_back(1, static_cast<char>('a' + i));
  const Alphabet sigma(letters);

  SplitMix64 rng(g.seed);
  for (std::size_t attempt = 0; attempt < g.max_attempts; ++attempt) {
    std::vector<bool> finals(n);
    std::size_t nf = 0;
    for (std::size_t q = 0; q < n; ++q) nf += (finals[q] = rng.coin()) ? 1 : 0;
    if (nf == 0 || nf == n) continue;
    std::vector<Transition> d0(n * k), d1(n * k);
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t a = 0; a < k; ++a) {
        d0[q * k + a] = {static_cast<StateId>(rng.below(n)), static_cast<int>(rng.below(2))};
        static constexpr int kPositive[] = {0, 1, -1};
        d1[q * k + a] = {static_cast<StateId>(rng.below(n)), kPositive[rng.below(3)]};
      }
    }
    Droca m(sigma, names, 0, std::move(finals), std::move(d0), std::move(d1));
    if (g.restricted && !final_states_entered_at_zero(m)) continue;
    if (reachable_count(m) == n) return m;
  }
  throw GenerationFailure("no machine accepted after " + std::to_string(g.max_attempts) + " attempts");
}

std::string csv_line(const BenchRow& r) {
  std::string reason = r.reason;
  for (char& c : reason) {
    if (c == ',' || c == '\n' || c == '"') c = ';';
  }
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.1f", r.stats.wall_ms);
  return std::to_string(r.seed) + "," + std::to_string(r.target_states) + "," + std::to_string(r.alphabet) + "," +
         (r.success ? "1" : "0") + "," + wall + "," + std::to_string(r.stats.learnt_states) + "," +
         std::to_string(r.stats.n_seq) + "," + std::to_string(r.stats.n_mq) + "," + std::to_string(r.stats.n_cv) +
         "," + std::to_string(r.stats.n_sat) + "," + std::to_string(r.stats.max_ce_len) + "," +
         std::to_string(r.stats.final_d) + "," + reason;
}

void check(const BenchConfig& b) {
  if (b.min_states < 2 || b.min_states > b.max_states) throw InvalidInput("bad state range");
  if (b.min_alphabet < 1 || b.min_alphabet > b.max_alphabet) throw InvalidInput("bad alphabet range");
  if (b.samples == 0) throw InvalidInput("samples must be positive");
  if (!(b.timeout_s > 0)) throw InvalidInput("timeout must be positive");
}

namespace {

BenchRow run_sample(const BenchConfig& b, std::size_t states, std::size_t alphabet, std::uint64_t seed) {
  BenchRow row;
  row.seed = seed;
  row.target_states = states;
  row.alphabet = alphabet;
  try {
    const Droca target = generate_droca({states, alphabet, seed, b.restricted});
    SimulatedTeacher teacher(target);
    LearnConfig cfg;
    cfg.sat = b.sat;
    cfg.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(b.timeout_s));
    LearnResult r = learn(teacher, cfg);
    row.stats = std::move(r.stats);
    row.success = true;
  } catch (const LearnTimeout& e) {
    row.stats = e.stats();
    row.reason = "timeout";
  } catch (const std::exception& e) {
    row.reason = std::string("error: ") + e.what();
  }
  return row;
}

}  // namespace

std::vector<BenchRow> run_benchmark(const BenchConfig& b, std::ostream& csv,
                                    const std::function<void(const BenchRow&)>& on_row) {
  check(b);
  struct Task {
    std::size_t states, alphabet;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t s = b.min_states; s <= b.max_states; ++s) {
    for (std::size_t k = b.min_alphabet; k <= b.max_alphabet; ++k) {
      for (std::size_t i = 0; i < b.samples; ++i) {
        const std::uint64_t cell = (static_cast<std::uint64_t>(s) << 40) ^ (static_cast<std::uint64_t>(k) << 32) ^ i;
        tasks.push_back({s, k, SplitMix64::derive(b.seed, cell)});
      }
    }
  }

  std::vector<std::optional<BenchRow>> rows(tasks.size());
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      BenchRow r = run_sample(b, tasks[i].states, tasks[i].alphabet, tasks[i].seed);
      {
        std::lock_guard<std::mutex> lock(mu);
        rows[i] = std::move(r);
      }
      ready.notify_one();
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(b.jobs, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);

  // Single writer: emit rows strictly in task order.
  csv << kBenchCsvHeader << '\n' << std::flush;
  std::vector<BenchRow> out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::unique_lock<std::mutex> lock(mu);
    ready.wait(lock, [&] { return rows[i].has_value(); });
    BenchRow r = std::move(*rows[i]);
    lock.unlock();
    csv << csv_line(r) << '\n' << std::flush;
    if (on_row) on_row(r);
    out.push_back(std::move(r));
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace droca
