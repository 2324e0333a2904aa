#include "droca/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "droca/error.hpp"

namespace droca {

const char* to_string(CounterexampleKind kind) {
  return kind == CounterexampleKind::CounterDesync ? "counter-desync" : "accept-mismatch";
}

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

void require_same_alphabet(const Droca& a, const Droca& b) {
  if (!(a.alphabet() == b.alphabet())) throw InvalidInput("machines are over different alphabets");
}

// BFS node with a back pointer; words are rebuilt on demand.
struct Node {
  std::int64_t parent;
  Letter letter;
  std::size_t depth;
};

template <class Nodes>
Word rebuild(const Nodes& nodes, std::int64_t idx) {
  Word w;
  while (nodes[idx].parent >= 0) {
    w.push_back(nodes[idx].letter);
    idx = nodes[idx].parent;
  }
  std::reverse(w.begin(), w.end());
  return w;
}

}  // namespace

SearchBounds sync_bounds(std::size_t size_a, std::size_t size_b) {
  const std::size_t k = std::max(size_a, size_b);
  const std::size_t prod = size_a * size_b;
  return {static_cast<Counter>(prod * prod + 1), 2 * ipow(k, 5)};
}

SearchBounds voca_bounds(std::size_t size_a, std::size_t size_b) {
  const std::size_t k = std::max(size_a, size_b);
  return {static_cast<Counter>(2 * (k + k * k) + 1), 4 * k * (k + k * k)};
}

std::optional<Counterexample> minimal_disagreement(const Droca& a, const Droca& b, SearchBounds bounds) {
  require_same_alphabet(a, b);
  const std::size_t k = a.alphabet().size();
  const std::uint64_t nb = b.num_states();
  const std::uint64_t span = static_cast<std::uint64_t>(bounds.counter_cap) + 1;
  auto key = [&](StateId p, StateId q, Counter n) { return (p * nb + q) * span + static_cast<std::uint64_t>(n); };

  struct ProductNode : Node {
    StateId p, q;
    Counter n;
  };
  std::vector<ProductNode> nodes;
  std::unordered_set<std::uint64_t> seen;

  nodes.push_back({{-1, 0, 0}, a.initial(), b.initial(), 0});
  seen.insert(key(a.initial(), b.initial(), 0));
  if (a.is_final(a.initial()) != b.is_final(b.initial())) {
    return Counterexample{{}, CounterexampleKind::AcceptMismatch};
  }

  // Children are checked when discovered, so words are examined in exactly
  // length-lex order and the first disagreement is the minimal one.
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const ProductNode cur = nodes[head];
    if (cur.depth >= bounds.length_cap) continue;
    const int sign = sgn(cur.n);
    for (Letter l = 0; l < k; ++l) {
      const Transition& ta = a.delta(sign, cur.p, l);
      const Transition& tb = b.delta(sign, cur.q, l);
      if (ta.action != tb.action) {
        Word w = rebuild(nodes, static_cast<std::int64_t>(head));
        w.push_back(l);
        return Counterexample{std::move(w), CounterexampleKind::CounterDesync};
      }
      const Counter n = cur.n + ta.action;
      if (n > bounds.counter_cap) continue;
      if (!seen.insert(key(ta.target, tb.target, n)).second) continue;
      nodes.push_back({{static_cast<std::int64_t>(head), l, cur.depth + 1}, ta.target, tb.target, n});
      if (a.is_final(ta.target) != b.is_final(tb.target)) {
        return Counterexample{rebuild(nodes, static_cast<std::int64_t>(nodes.size() - 1)),
                              CounterexampleKind::AcceptMismatch};
      }
    }
  }
  return std::nullopt;
}

Verdict check_sync_equiv(const Droca& a, const Droca& b) {
  require_same_alphabet(a, b);
  auto ce = minimal_disagreement(a, b, sync_bounds(a.num_states(), b.num_states()));
  return ce ? Verdict::no(std::move(*ce)) : Verdict::yes();
}

namespace {

// Configuration graph of a VOCA truncated at counter `cap`; anything above
// falls into one non-final overflow sink.
class TruncatedConfigDfa {
 public:
  TruncatedConfigDfa(const Droca& m, Counter cap, std::size_t offset)
      : m_(m), span_(static_cast<std::size_t>(cap) + 1), offset_(offset) {}

  std::size_t size() const { return m_.num_states() * span_ + 1; }
  std::size_t sink() const { return offset_ + m_.num_states() * span_; }
  std::size_t initial() const { return offset_ + m_.initial() * span_; }

  bool is_final(std::size_t id) const {
    if (id == sink()) return false;
    return m_.is_final(static_cast<StateId>((id - offset_) / span_));
  }

  std::size_t next(std::size_t id, Letter l) const {
    if (id == sink()) return id;
    const auto local = id - offset_;
    const auto q = static_cast<StateId>(local / span_);
    const auto n = static_cast<Counter>(local % span_);
    const Transition& t = m_.delta(sgn(n), q, l);
    const Counter nn = n + t.action;
    if (nn >= static_cast<Counter>(span_)) return sink();
    return offset_ + t.target * span_ + static_cast<std::size_t>(nn);
  }

 private:
  const Droca& m_;
  std::size_t span_;
  std::size_t offset_;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (rank_[x] < rank_[y]) std::swap(x, y);
    parent_[y] = x;
    if (rank_[x] == rank_[y]) ++rank_[x];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

// Hopcroft-Karp: merge related classes, fail on a final/non-final merge.
bool hopcroft_karp_equivalent(const TruncatedConfigDfa& x, const TruncatedConfigDfa& y, std::size_t k) {
  UnionFind uf(x.size() + y.size());
  if (x.is_final(x.initial()) != y.is_final(y.initial())) return false;
  std::deque<std::pair<std::size_t, std::size_t>> work;
  uf.unite(x.initial(), y.initial());
  work.emplace_back(x.initial(), y.initial());
  while (!work.empty()) {
    auto [s, t] = work.front();
    work.pop_front();
    for (Letter l = 0; l < k; ++l) {
      const std::size_t s2 = x.next(s, l);
      const std::size_t t2 = y.next(t, l);
      if (uf.find(s2) == uf.find(t2)) continue;
      if (x.is_final(s2) != y.is_final(t2)) return false;
      uf.unite(s2, t2);
      work.emplace_back(s2, t2);
    }
  }
  return true;
}

}  // namespace

Verdict voca_check_equiv(const Droca& a, const Droca& b) {
  require_same_alphabet(a, b);
  auto map_a = voca_action_map(a);
  auto map_b = voca_action_map(b);
  if (!map_a || !map_b) throw InvalidInput("voca_check_equiv needs two VOCAs");
  if (*map_a != *map_b) return check_sync_equiv(a, b);

  const SearchBounds bounds = voca_bounds(a.num_states(), b.num_states());
  TruncatedConfigDfa da(a, bounds.counter_cap, 0);
  TruncatedConfigDfa db(b, bounds.counter_cap, da.size());
  if (hopcroft_karp_equivalent(da, db, a.alphabet().size())) return Verdict::yes();

  auto ce = minimal_disagreement(a, b, bounds);
  if (!ce) throw InternalConsistencyError("union-find found a difference the bounded search cannot reach");
  return Verdict::no(std::move(*ce));
}

Verdict brute_force_equiv(const Droca& a, const Droca& b, std::size_t max_len) {
  require_same_alphabet(a, b);
  const std::size_t k = a.alphabet().size();
  struct PairNode : Node {
    Configuration ca, cb;
  };
  struct PairKey {
    std::size_t operator()(const std::array<std::int64_t, 4>& v) const noexcept {
      std::size_t h = 0;
      for (auto x : v) h = h * 1000003u ^ std::hash<std::int64_t>{}(x);
      return h;
    }
  };
  std::vector<PairNode> nodes;
  std::unordered_set<std::array<std::int64_t, 4>, PairKey> seen;
  auto remember = [&](const Configuration& ca, const Configuration& cb) {
    return seen.insert({ca.state, ca.counter, cb.state, cb.counter}).second;
  };

  nodes.push_back({{-1, 0, 0}, a.initial_config(), b.initial_config()});
  remember(a.initial_config(), b.initial_config());
  if (a.is_final(a.initial()) != b.is_final(b.initial())) {
    return Verdict::no({{}, CounterexampleKind::AcceptMismatch});
  }
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t level_end = nodes.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (Letter l = 0; l < k; ++l) {
        const Configuration ca = step(a, nodes[i].ca, l);
        const Configuration cb = step(b, nodes[i].cb, l);
        const bool desync = ca.counter != cb.counter;
        const bool mismatch = a.is_final(ca.state) != b.is_final(cb.state);
        if (desync || mismatch) {
          Word w = rebuild(nodes, static_cast<std::int64_t>(i));
          w.push_back(l);
          return Verdict::no({std::move(w), desync ? CounterexampleKind::CounterDesync
                                                   : CounterexampleKind::AcceptMismatch});
        }
        if (remember(ca, cb)) nodes.push_back({{static_cast<std::int64_t>(i), l, len}, ca, cb});
      }
    }
    if (level_end == nodes.size()) break;  // nothing new: every longer word is dominated
    level_begin = level_end;
  }
  return Verdict::yes();
}

std::optional<ReachWitness> reach_witness(const Droca& a, StateId p) {
  if (p >= a.num_states()) throw InvalidInput("unknown state " + std::to_string(p));
  const std::size_t n = a.num_states();
  const Counter cap = static_cast<Counter>(n * n) - 1;  // height < |A|^2
  const std::size_t k = a.alphabet().size();
  struct ConfigNode : Node {
    Configuration c;
  };
  std::vector<ConfigNode> nodes;
  std::unordered_set<std::uint64_t> seen;
  auto key = [&](const Configuration& c) { return c.state * static_cast<std::uint64_t>(cap + 1) + c.counter; };

  nodes.push_back({{-1, 0, 0}, a.initial_config()});
  seen.insert(key(a.initial_config()));
  std::int64_t best = -1;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const Configuration c = nodes[head].c;
    if (c.state == p && (best < 0 || c.counter < nodes[best].c.counter)) {
      best = static_cast<std::int64_t>(head);
      if (c.counter == 0) break;
    }
    for (Letter l = 0; l < k; ++l) {
      const Configuration d = step(a, c, l);
      if (d.counter > cap || !seen.insert(key(d)).second) continue;
      nodes.push_back({{static_cast<std::int64_t>(head), l, nodes[head].depth + 1}, d});
    }
  }
  if (best < 0) return std::nullopt;
  return ReachWitness{rebuild(nodes, best), nodes[best].c.counter};
}

}  // namespace droca
