#pragma once

#include <optional>

#include "droca/automaton.hpp"
#include "droca/equivalence.hpp"

namespace droca {

/// The learner's only window onto the hidden machine.
class Teacher {
 public:
  virtual ~Teacher() = default;

  virtual const Alphabet& alphabet() const = 0;
  virtual bool mq(const Word& w) = 0;
  virtual Counter cv(const Word& w) = 0;
  /// nullopt means "yes"; otherwise a length-lex-minimal counterexample.
  virtual std::optional<Counterexample> seq(const Droca& hypothesis) = 0;
};

struct QueryCounts {
  std::size_t mq = 0;
  std::size_t cv = 0;
  std::size_t seq = 0;
};

/// Answers from a known machine. With voca set, seq uses voca_check_equiv
/// whenever the hypothesis is itself a VOCA.
class SimulatedTeacher final : public Teacher {
 public:
  explicit SimulatedTeacher(Droca hidden, bool voca = false);

  const Alphabet& alphabet() const override { return hidden_.alphabet(); }
  bool mq(const Word& w) override;
  Counter cv(const Word& w) override;
  std::optional<Counterexample> seq(const Droca& hypothesis) override;

  const Droca& hidden() const noexcept { return hidden_; }
  const QueryCounts& counts() const noexcept { return counts_; }

 private:
  Droca hidden_;
  bool voca_;
  QueryCounts counts_;
};

}  // namespace droca
