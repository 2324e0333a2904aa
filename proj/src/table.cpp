#include "droca/table.hpp"

#include <set>
#include <sstream>

#include "droca/error.hpp"

namespace droca {

std::string ActionsVector::format() const {
  std::string out = "(" + std::to_string(sign);
  for (int d : deltas) {
    out += ',';
    out += d > 0 ? "+1" : d < 0 ? "-1" : "0";
  }
  return out + ")";
}

bool similar(const ActionsVector& u, const ActionsVector& v) {
  if (u.deltas.size() != v.deltas.size()) throw InvalidInput("actions vectors of different length");
  return u.sign != v.sign || u == v;
}

ObservationTable::ObservationTable(Alphabet sigma) : sigma_(std::move(sigma)) {
  add_prefix({});
  add_suffix({});
}

std::vector<Word> ObservationTable::extensions() const {
  std::vector<Word> out;
  std::unordered_set<Word, WordHash> seen;
  for (const Word& p : p_) {
    for (Letter a = 0; a < sigma_.size(); ++a) {
      Word pa = append(p, a);
      if (p_set_.count(pa) || !seen.insert(pa).second) continue;
      out.push_back(std::move(pa));
    }
  }
  return out;
}

std::vector<Word> ObservationTable::row_words() const {
  std::vector<Word> out = p_;
  for (auto& w : extensions()) out.push_back(std::move(w));
  return out;
}

std::size_t ObservationTable::add_prefix(const Word& w) {
  std::size_t added = 0;
  for (std::size_t i = 0; i <= w.size(); ++i) {
    Word u(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
    if (p_set_.insert(u).second) {
      p_.push_back(std::move(u));
      ++added;
    }
  }
  return added;
}

std::size_t ObservationTable::add_suffix(const Word& w) {
  std::size_t added = 0;
  for (std::size_t i = w.size() + 1; i-- > 0;) {
    Word u(w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
    if (s_set_.insert(u).second) {
      s_.push_back(std::move(u));
      ++added;
    }
  }
  return added;
}

void ObservationTable::fill(Teacher& teacher) {
  auto need_cv = [&](const Word& u) {
    if (cv_.count(u)) return;
    cv_.emplace(u, teacher.cv(u));
    ++counts_.cv;
  };
  for (const Word& r : row_words()) {
    for (const Word& s : s_) {
      Word w = concat(r, s);
      if (done_.count(w)) continue;
      if (!memb_.count(w)) {
        memb_.emplace(w, teacher.mq(w));
        ++counts_.mq;
      }
      for (std::size_t i = 0; i <= w.size(); ++i) need_cv(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i)));
      for (Letter a = 0; a < sigma_.size(); ++a) need_cv(append(w, a));
      done_.insert(std::move(w));
    }
  }
}

Counter ObservationTable::query_cv(Teacher& teacher, const Word& w) {
  auto it = cv_.find(w);
  if (it != cv_.end()) return it->second;
  ++counts_.cv;
  return cv_.emplace(w, teacher.cv(w)).first->second;
}

bool ObservationTable::filled() const {
  for (const Word& r : row_words()) {
    for (const Word& s : s_) {
      if (!done_.count(concat(r, s))) return false;
    }
  }
  return true;
}

void ObservationTable::require_filled() const {
  for (const Word& r : row_words()) {
    for (const Word& s : s_) {
      Word w = concat(r, s);
      if (!done_.count(w)) throw InvalidInput("observation table not filled: cell " + sigma_.format(w));
    }
  }
}

bool ObservationTable::memb(const Word& w) const {
  auto it = memb_.find(w);
  if (it == memb_.end()) throw InvalidInput("no membership recorded for " + sigma_.format(w));
  return it->second;
}

Counter ObservationTable::cv(const Word& w) const {
  auto it = cv_.find(w);
  if (it == cv_.end()) throw InvalidInput("no counter value recorded for " + sigma_.format(w));
  return it->second;
}

ActionsVector ObservationTable::actions(const Word& w) const {
  ActionsVector v;
  const Counter base = cv(w);
  v.sign = sgn(base);
  for (Letter a = 0; a < sigma_.size(); ++a) v.deltas.push_back(static_cast<int>(cv(append(w, a)) - base));
  return v;
}

EncodedWord ObservationTable::encode(const Word& w) const {
  EncodedWord e;
  Word prefix;
  for (Letter a : w) {
    e.symbols.push_back(tilde(a, sgn(cv(prefix))));
    prefix.push_back(a);
  }
  return e;
}

Row ObservationTable::row(const Word& p) const {
  Row r{cv(p), {}};
  for (const Word& s : s_) {
    Word w = concat(p, s);
    r.cells.push_back({memb(w), actions(w)});
  }
  return r;
}

std::optional<std::pair<Word, Letter>> ObservationTable::find_unclosed(Counter d) const {
  require_filled();
  std::set<Row> p_rows;
  for (const Word& p : p_) p_rows.insert(row(p));
  for (const Word& p : p_) {
    for (Letter a = 0; a < sigma_.size(); ++a) {
      Word pa = append(p, a);
      if (cv(pa) > d) continue;
      if (!p_rows.count(row(pa))) return std::make_pair(p, a);
    }
  }
  return std::nullopt;
}

std::optional<Inconsistency> ObservationTable::find_inconsistent(Counter d) const {
  require_filled();
  std::vector<Row> rows;
  rows.reserve(p_.size());
  for (const Word& p : p_) rows.push_back(row(p));
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (rows[i].cv > d) continue;
    for (std::size_t j = i + 1; j < p_.size(); ++j) {
      if (rows[j] != rows[i]) continue;
      // Equal rows already fix cv(pa) = cv(qa) through the ε cell's Actions,
      // so only Memb and Actions can disagree one letter later.
      for (Letter a = 0; a < sigma_.size(); ++a) {
        for (const Word& s : s_) {
          Word ps = concat(append(p_[i], a), s);
          Word qs = concat(append(p_[j], a), s);
          if (memb(ps) != memb(qs) || actions(ps) != actions(qs)) return Inconsistency{p_[i], p_[j], a, s};
        }
      }
    }
  }
  return std::nullopt;
}

std::size_t ObservationTable::distinct_rows(Counter max_cv) const {
  std::set<Row> rows;
  for (const Word& w : row_words()) {
    if (cv(w) <= max_cv) rows.insert(row(w));
  }
  return rows.size();
}

std::string ObservationTable::format() const {
  std::ostringstream out;
  for (const Word& w : row_words()) {
    out << sigma_.format(w) << " | " << cv(w);
    for (const Word& s : s_) {
      Word ws = concat(w, s);
      out << " | " << (memb(ws) ? 1 : 0) << ' ' << actions(ws).format();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace droca
