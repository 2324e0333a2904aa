#pragma once

#include <compare>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "droca/automaton.hpp"
#include "droca/teacher.hpp"

namespace droca {

/// (sgn ce(w), ce(w s1) - ce(w), ..., ce(w sk) - ce(w)).
struct ActionsVector {
  int sign = 0;
  std::vector<int> deltas;

  std::string format() const;  // "(0,+1,-1)"
  friend auto operator<=>(const ActionsVector&, const ActionsVector&) = default;
};

/// False exactly when the signs agree and the vectors differ.
bool similar(const ActionsVector& u, const ActionsVector& v);

/// Cell content for one suffix: (Memb, Actions).
struct Cell {
  bool memb = false;
  ActionsVector actions;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Row {
  Counter cv = 0;
  std::vector<Cell> cells;  // indexed like the suffix list

  friend auto operator<=>(const Row&, const Row&) = default;
};

struct Inconsistency {
  Word p, q;
  Letter a = 0;
  Word s;
};

struct TableCounts {
  std::size_t mq = 0;  // cache misses only
  std::size_t cv = 0;
};

/// P and S kept in insertion order; memberships and counter values cached by
/// word and only asked for when missing.
class ObservationTable {
 public:
  explicit ObservationTable(Alphabet sigma);

  const Alphabet& alphabet() const noexcept { return sigma_; }
  const std::vector<Word>& prefixes() const noexcept { return p_; }
  const std::vector<Word>& suffixes() const noexcept { return s_; }
  bool in_prefixes(const Word& w) const { return p_set_.count(w) != 0; }

  /// The PΣ rows not already in P, in (P order, letter order).
  std::vector<Word> extensions() const;
  /// P followed by extensions().
  std::vector<Word> row_words() const;

  /// Adds w and its prefixes (resp. suffixes); returns the number added.
  std::size_t add_prefix(const Word& w);
  std::size_t add_suffix(const Word& w);

  /// Asks for every missing Memb on (P ∪ PΣ)·S and every missing counter value
  /// on those words, their prefixes and their one-letter extensions.
  void fill(Teacher& teacher);
  bool filled() const;
  /// Cached counter value, asking the teacher on a miss. Rows are unaffected.
  Counter query_cv(Teacher& teacher, const Word& w);

  /// Cached lookups; throw InvalidInput naming the word when absent.
  bool memb(const Word& w) const;
  Counter cv(const Word& w) const;
  bool has_cv(const Word& w) const { return cv_.count(w) != 0; }
  ActionsVector actions(const Word& w) const;
  EncodedWord encode(const Word& w) const;
  Row row(const Word& p) const;

  /// First (p, a) in scan order with cv(pa) <= d and row(pa) outside rows(P).
  std::optional<std::pair<Word, Letter>> find_unclosed(Counter d) const;
  /// First (p, q, a, s), p before q in P, with cv(p) = cv(q) <= d,
  /// row(p) = row(q) and a disagreement in Memb or Actions at pas / qas.
  std::optional<Inconsistency> find_inconsistent(Counter d) const;

  /// Distinct rows over P ∪ PΣ whose counter value is at most max_cv.
  std::size_t distinct_rows(Counter max_cv) const;

  const TableCounts& counts() const noexcept { return counts_; }

  /// One line per row: "word | cv | memb actions | memb actions ...".
  std::string format() const;

 private:
  void require_filled() const;

  Alphabet sigma_;
  std::vector<Word> p_, s_;
  std::unordered_set<Word, WordHash> p_set_, s_set_;
  std::unordered_map<Word, bool, WordHash> memb_;
  std::unordered_map<Word, Counter, WordHash> cv_;
  std::unordered_set<Word, WordHash> done_;  // cells whose queries are complete
  TableCounts counts_;
};

}  // namespace droca
