#include "droca/mindfa.hpp"

#include <algorithm>
#include <set>

#include "droca/error.hpp"

namespace droca {

namespace {

std::string format_symbols(const SymbolWord& w) {
  if (w.empty()) return "ε";
  std::string out;
  for (Symbol s : w) {
    if (!out.empty()) out += ' ';
    out += std::to_string(s);
  }
  return out;
}

}  // namespace

SampleSet build_samples(const ObservationTable& table) {
  const std::size_t k = table.alphabet().size();
  SampleSet out;
  out.base_symbols = 2 * k;

  struct CellInfo {
    SymbolWord enc;
    bool memb;
    std::size_t op;
  };
  std::vector<CellInfo> cells;
  std::map<ActionsVector, std::size_t> op_index;
  for (const Word& r : table.row_words()) {
    for (const Word& s : table.suffixes()) {
      const Word w = concat(r, s);
      ActionsVector act = table.actions(w);
      auto [it, fresh] = op_index.try_emplace(act, out.ops.size());
      if (fresh) out.ops.push_back(act);
      cells.push_back({table.encode(w).symbols, table.memb(w), it->second});
    }
  }

  std::set<SymbolWord> seen_pos, seen_neg;
  auto add = [](std::vector<SymbolWord>& v, std::set<SymbolWord>& seen, SymbolWord w) {
    if (seen.insert(w).second) v.push_back(std::move(w));
  };
  for (const auto& c : cells) {
    add(c.memb ? out.pos : out.neg, c.memb ? seen_pos : seen_neg, c.enc);
    const ActionsVector& mine = out.ops[c.op];
    SymbolWord with_op = c.enc;
    with_op.push_back(out.op_symbol(c.op));
    add(out.pos, seen_pos, with_op);
    for (std::size_t i = 0; i < out.ops.size(); ++i) {
      if (similar(mine, out.ops[i])) continue;
      with_op.back() = out.op_symbol(i);
      add(out.neg, seen_neg, with_op);
    }
  }
  return out;
}

Apta build_apta(std::size_t num_symbols, const std::vector<SymbolWord>& pos, const std::vector<SymbolWord>& neg) {
  Apta t;
  t.num_symbols = num_symbols;
  t.labels.push_back(Apta::Label::None);
  t.children.emplace_back();
  auto insert = [&](const SymbolWord& w, Apta::Label label) {
    std::uint32_t node = 0;
    for (Symbol s : w) {
      if (s >= num_symbols) throw InvalidInput("sample symbol " + std::to_string(s) + " outside the alphabet");
      auto it = t.children[node].find(s);
      if (it == t.children[node].end()) {
        const auto child = static_cast<std::uint32_t>(t.labels.size());
        t.labels.push_back(Apta::Label::None);
        t.children.emplace_back();
        t.children[node].emplace(s, child);
        t.edges.push_back({node, s, child});
        node = child;
      } else {
        node = it->second;
      }
    }
    if (t.labels[node] != Apta::Label::None && t.labels[node] != label) {
      throw SampleConflict("word labelled both positive and negative: " + format_symbols(w));
    }
    t.labels[node] = label;
  };
  for (const auto& w : pos) insert(w, Apta::Label::Accept);
  for (const auto& w : neg) insert(w, Apta::Label::Reject);
  return t;
}

Apta build_apta(const SampleSet& samples) { return build_apta(samples.num_symbols(), samples.pos, samples.neg); }

CnfInstance encode_size_n(const Apta& apta, std::size_t n, EncodeOptions options) {
  if (n == 0) throw InvalidInput("DFA size must be at least 1");
  const std::size_t nodes = apta.size();
  const std::size_t syms = apta.num_symbols;
  CnfInstance cnf;
  std::vector<int> x(nodes * n), z(n), y(syms * n * n);
  for (std::size_t v = 0; v < nodes; ++v) {
    for (std::size_t i = 0; i < n; ++i) {
      x[v * n + i] = cnf.new_var({VarKind::Color, static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(i), 0});
    }
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = cnf.new_var({VarKind::Accept, static_cast<std::uint32_t>(i), 0, 0});
  for (std::size_t a = 0; a < syms; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        y[(a * n + i) * n + j] = cnf.new_var(
            {VarKind::Trans, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
      }
    }
  }
  auto exactly_one = [&](auto var_of) {
    std::vector<int> some;
    for (std::size_t i = 0; i < n; ++i) some.push_back(var_of(i));
    cnf.add(some);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) cnf.add({-var_of(i), -var_of(j)});
    }
  };

  cnf.add({x[0]});
  for (std::size_t v = 0; v < nodes; ++v) {
    exactly_one([&](std::size_t i) { return x[v * n + i]; });
    if (apta.labels[v] == Apta::Label::None) continue;
    const bool acc = apta.labels[v] == Apta::Label::Accept;
    for (std::size_t i = 0; i < n; ++i) cnf.add({-x[v * n + i], acc ? z[i] : -z[i]});
  }
  for (std::size_t a = 0; a < syms; ++a) {
    for (std::size_t i = 0; i < n; ++i) exactly_one([&](std::size_t j) { return y[(a * n + i) * n + j]; });
  }
  for (const auto& e : apta.edges) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const int xv = x[e.parent * n + i];
        const int xc = x[e.child * n + j];
        const int ya = y[(e.symbol * n + i) * n + j];
        cnf.add({-xv, -ya, xc});
        cnf.add({-xv, -xc, ya});
      }
    }
  }
  if (options.bfs_symmetry) {
    // Node ids are assigned in insertion order, which is not breadth-first,
    // so compute the breadth-first rank first.
    std::vector<std::size_t> order{0}, rank(nodes, 0);
    for (std::size_t h = 0; h < order.size(); ++h) {
      for (const auto& [s, c] : apta.children[order[h]]) order.push_back(c);
    }
    for (std::size_t t = 0; t < order.size(); ++t) rank[order[t]] = t;
    for (std::size_t v = 0; v < nodes; ++v) {
      for (std::size_t i = rank[v] + 1; i < n; ++i) cnf.add({-x[v * n + i]});
    }
  }
  return cnf;
}

Dfa decode_dfa(const CnfInstance& cnf, const Assignment& model, std::size_t n, std::size_t num_symbols) {
  std::vector<bool> finals(n, false);
  std::vector<StateId> trans(n * num_symbols, 0);
  std::vector<bool> set(n * num_symbols, false);
  for (std::size_t v = 1; v <= cnf.num_vars(); ++v) {
    if (!model[v]) continue;
    const VarMeaning& m = cnf.decode[v - 1];
    if (m.kind == VarKind::Accept) {
      finals.at(m.a) = true;
    } else if (m.kind == VarKind::Trans) {
      const std::size_t idx = m.b * num_symbols + m.a;
      if (set.at(idx)) throw InternalConsistencyError("model assigns two targets to one transition");
      set[idx] = true;
      trans[idx] = m.c;
    }
  }
  if (std::find(set.begin(), set.end(), false) != set.end()) {
    throw InternalConsistencyError("model leaves a transition undefined");
  }
  return Dfa(n, num_symbols, 0, std::move(finals), std::move(trans));
}

MinDfaResult find_min_sep_dfa(std::size_t num_symbols, const std::vector<SymbolWord>& pos,
                              const std::vector<SymbolWord>& neg, const MinDfaOptions& options) {
  const Apta apta = build_apta(num_symbols, pos, neg);
  std::size_t calls = 0;
  // The tree itself, with missing edges sent anywhere, separates the samples.
  for (std::size_t n = 1; n <= apta.size(); ++n) {
    if (expired(options.deadline)) throw DeadlineExceeded("deadline reached before SAT call");
    CnfInstance cnf = encode_size_n(apta, n, options.encode);
    ++calls;
    auto model = sat_solve(cnf, options.backend, options.deadline);
    if (!model) continue;
    Dfa dfa = decode_dfa(cnf, *model, n, num_symbols);
    for (const auto& w : pos) {
      if (!dfa.accepts(w)) throw InternalConsistencyError("decoded DFA rejects a positive sample");
    }
    for (const auto& w : neg) {
      if (dfa.accepts(w)) throw InternalConsistencyError("decoded DFA accepts a negative sample");
    }
    return {std::move(dfa), calls};
  }
  throw InternalConsistencyError("no separating DFA up to the prefix-tree size");
}

MinDfaResult find_min_sep_dfa(const SampleSet& samples, const MinDfaOptions& options) {
  return find_min_sep_dfa(samples.num_symbols(), samples.pos, samples.neg, options);
}

Dfa strip_operations(const Dfa& dfa, std::size_t base_symbols) {
  if (base_symbols > dfa.num_symbols()) throw InvalidInput("DFA has fewer symbols than the base alphabet");
  std::vector<StateId> trans;
  trans.reserve(dfa.num_states() * base_symbols);
  for (StateId q = 0; q < dfa.num_states(); ++q) {
    for (Symbol s = 0; s < base_symbols; ++s) trans.push_back(dfa.next(q, s));
  }
  return Dfa(dfa.num_states(), base_symbols, dfa.initial(), dfa.finals(), std::move(trans));
}

}  // namespace droca
