#include "droca/teacher.hpp"

namespace droca {

SimulatedTeacher::SimulatedTeacher(Droca hidden, bool voca) : hidden_(std::move(hidden)), voca_(voca) {}

bool SimulatedTeacher::mq(const Word& w) {
  ++counts_.mq;
  return accepts(hidden_, w);
}

Counter SimulatedTeacher::cv(const Word& w) {
  ++counts_.cv;
  return counter_effect(hidden_, w);
}

std::optional<Counterexample> SimulatedTeacher::seq(const Droca& hypothesis) {
  ++counts_.seq;
  if (voca_ && is_voca(hypothesis) && is_voca(hidden_)) return voca_check_equiv(hypothesis, hidden_).counterexample;
  return check_sync_equiv(hypothesis, hidden_).counterexample;
}

}  // namespace droca
