#include "droca/learner.hpp"

#include <algorithm>

#include "json.hpp"

namespace droca {

ActionsVector actions_vector(Teacher& teacher, const Word& w) {
  ActionsVector v;
  const Counter base = teacher.cv(w);
  v.sign = sgn(base);
  for (Letter a = 0; a < teacher.alphabet().size(); ++a) {
    v.deltas.push_back(static_cast<int>(teacher.cv(append(w, a)) - base));
  }
  return v;
}

void repair(ObservationTable& table, Counter d, Teacher& teacher, Deadline deadline) {
  table.fill(teacher);
  for (;;) {
    if (expired(deadline)) throw DeadlineExceeded("deadline reached while repairing the table");
    if (auto u = table.find_unclosed(d)) {
      table.add_prefix(append(u->first, u->second));
      table.fill(teacher);
      continue;
    }
    if (auto inc = table.find_inconsistent(d)) {
      table.add_suffix(concat(Word{inc->a}, inc->s));
      table.fill(teacher);
      continue;
    }
    return;
  }
}

ConstructResult construct_droca(const ObservationTable& table, const ConstructOptions& options) {
  const SampleSet samples = build_samples(table);
  MinDfaResult found = find_min_sep_dfa(samples, options.mindfa);
  const Dfa dc = strip_operations(found.dfa, samples.base_symbols);
  const std::size_t n = dc.num_states();
  const std::size_t k = table.alphabet().size();

  ConstructResult out{Droca(table.alphabet(), {"q0"}, 0, {false}, std::vector<Transition>(k), std::vector<Transition>(k))};
  out.dfa_states = n;
  out.sat_calls = found.sat_calls;

  std::array<std::vector<std::optional<int>>, 2> act{std::vector<std::optional<int>>(n * k),
                                                     std::vector<std::optional<int>>(n * k)};
  const auto cells = [&] {
    std::vector<Word> ws;
    for (const Word& r : table.row_words()) {
      for (const Word& s : table.suffixes()) ws.push_back(concat(r, s));
    }
    return ws;
  }();

  for (const Word& w : cells) {
    const StateId q = dc.run(table.encode(w).symbols);
    const ActionsVector v = table.actions(w);
    for (Letter a = 0; a < k; ++a) {
      auto& slot = act[v.sign][q * k + a];
      if (slot && *slot != v.deltas[a]) {
        throw InternalConsistencyError("table words reaching one state demand different counter actions");
      }
      if (!slot) ++out.endpoint_transitions;
      slot = v.deltas[a];
    }
  }
  // Replay: the prefixes inside a cell word also need the right
  // action, but nothing in the samples ties them to an end state.
  for (const Word& w : cells) {
    StateId q = dc.initial();
    Word u;
    for (Letter a : w) {
      const Counter c = table.cv(u);
      const int sign = sgn(c);
      const int delta = static_cast<int>(table.cv(append(u, a)) - c);
      auto& slot = act[sign][q * k + a];
      if (!slot) {
        slot = delta;
        ++out.prefix_transitions;
      } else if (*slot != delta) {
        ++out.prefix_disagreements;
      }
      q = dc.next(q, tilde(a, sign));
      u.push_back(a);
    }
  }

  // Renumber the states reachable in D_C in breadth-first order.
  std::vector<int> id(n, -1);
  std::vector<StateId> order{dc.initial()};
  id[dc.initial()] = 0;
  for (std::size_t h = 0; h < order.size(); ++h) {
    for (Symbol s = 0; s < dc.num_symbols(); ++s) {
      const StateId t = dc.next(order[h], s);
      if (id[t] < 0) {
        id[t] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  }
  const std::size_t m = order.size();
  std::vector<std::string> names;
  std::vector<bool> finals;
  std::vector<Transition> d0(m * k), d1(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    const StateId q = order[i];
    names.push_back("q" + std::to_string(i));
    finals.push_back(dc.is_final(q));
    for (Letter a = 0; a < k; ++a) {
      for (int sign = 0; sign < 2; ++sign) {
        const auto& slot = act[sign][q * k + a];
        int action = 0;
        if (slot) {
          action = *slot;
        } else {
          ++out.default_transitions;
          if (options.default_actions) action = (*options.default_actions)[sign][a];
        }
        (sign == 0 ? d0 : d1)[i * k + a] = {static_cast<StateId>(id[dc.next(q, tilde(a, sign))]), action};
      }
    }
  }
  out.droca = Droca(table.alphabet(), std::move(names), 0, std::move(finals), std::move(d0), std::move(d1));
  return out;
}

namespace {

// Counts every query it forwards; in VOCA mode counter values never reach
// the real teacher.
class SessionTeacher final : public Teacher {
 public:
  SessionTeacher(Teacher& inner, std::optional<ActionMap> actions) : inner_(inner), actions_(std::move(actions)) {}

  const Alphabet& alphabet() const override { return inner_.alphabet(); }
  bool mq(const Word& w) override {
    ++mq_;
    return inner_.mq(w);
  }
  Counter cv(const Word& w) override {
    if (!actions_) {
      ++cv_;
      return inner_.cv(w);
    }
    Counter n = 0;
    for (Letter a : w) n += (*actions_)[sgn(n)][a];
    return n;
  }
  std::optional<Counterexample> seq(const Droca& h) override {
    ++seq_;
    return inner_.seq(h);
  }

  std::size_t mq_ = 0, cv_ = 0, seq_ = 0;

 private:
  Teacher& inner_;
  std::optional<ActionMap> actions_;
};

bool replays(const ObservationTable& table, const Droca& h) {
  for (const Word& r : table.row_words()) {
    for (const Word& s : table.suffixes()) {
      const Word w = concat(r, s);
      const RunTrace t = run(h, w);
      if (t.accepted != table.memb(w) || t.counter_effect() != table.cv(w)) return false;
    }
  }
  return true;
}

}  // namespace

LearnResult learn(Teacher& teacher, const LearnConfig& config) {
  const auto start = Clock::now();
  if (config.voca && !config.voca_actions) throw InvalidInput("VOCA mode needs the action map");
  SessionTeacher t(teacher, config.voca ? config.voca_actions : std::nullopt);
  ObservationTable table(teacher.alphabet());
  Stats stats;
  Counter d = 0;
  auto sync = [&] {
    stats.n_mq = t.mq_;
    stats.n_cv = t.cv_;
    stats.n_seq = t.seq_;
    stats.final_d = d;
    stats.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };

  ConstructOptions copts;
  copts.mindfa.backend = config.sat;
  copts.mindfa.deadline = config.deadline;
  copts.mindfa.encode = config.encode;
  if (config.voca) copts.default_actions = config.voca_actions;

  try {
    for (;;) {
      repair(table, d, t, config.deadline);
      if (!stats.counterexamples.empty() && !stats.counterexamples.back().rows_after_known) {
        auto& rec = stats.counterexamples.back();
        rec.rows_after = table.distinct_rows(rec.level);
        rec.rows_after_known = true;
      }
      ConstructResult built = construct_droca(table, copts);
      stats.n_sat += built.sat_calls;
      stats.prefix_disagreements += built.prefix_disagreements;
      stats.hypothesis_sizes.push_back(built.droca.num_states());
      if (!replays(table, built.droca)) ++stats.table_replay_failures;

      if (expired(config.deadline)) throw DeadlineExceeded("deadline reached before equivalence query");
      std::optional<Counterexample> ce = t.seq(built.droca);
      if (!ce) {
        sync();
        stats.learnt_states = built.droca.num_states();
        return {std::move(built.droca), std::move(stats)};
      }

      CounterexampleRecord rec;
      rec.word = ce->word;
      rec.kind = ce->kind;
      rec.d_before = d;
      rec.hypothesis_states = built.droca.num_states();
      Word u;
      rec.height = table.query_cv(t, u);
      for (Letter a : ce->word) {
        u.push_back(a);
        rec.height = std::max(rec.height, table.query_cv(t, u));
      }
      rec.level = std::max(rec.d_before, rec.height);
      rec.rows_before = table.distinct_rows(rec.level);
      table.add_prefix(ce->word);
      table.fill(t);
      stats.max_ce_len = std::max(stats.max_ce_len, ce->word.size());
      stats.counterexamples.push_back(std::move(rec));
      d = std::max(d, stats.counterexamples.back().height);
      if (config.increment_d) ++d;
    }
  } catch (const DeadlineExceeded&) {
    sync();
    throw LearnTimeout(std::move(stats));
  }
}

std::string to_json(const SessionSummary& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.seed;
  j["target_states"] = s.target_states;
  j["alphabet"] = s.alphabet;
  j["success"] = s.success;
  j["wall_ms"] = s.stats.wall_ms;
  j["learnt_states"] = s.stats.learnt_states;
  j["n_seq"] = s.stats.n_seq;
  j["n_mq"] = s.stats.n_mq;
  j["n_cv"] = s.stats.n_cv;
  j["n_sat"] = s.stats.n_sat;
  j["max_ce_len"] = s.stats.max_ce_len;
  j["final_d"] = s.stats.final_d;
  return j.dump(2) + "\n";
}

}  // namespace droca
