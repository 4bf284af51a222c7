#include "cva/automaton.hpp"

#include <algorithm>

namespace cva {

multi_action_automaton::multi_action_automaton(alphabet sigma,
                                               std::vector<std::string> state_names,
                                               std::string_view initial,
                                               std::vector<transition> transitions)
    : sigma_(std::move(sigma)),
      state_names_(std::move(state_names)),
      transitions_(std::move(transitions)) {
  if (state_names_.empty()) throw error("automaton needs at least one state");
  for (std::size_t i = 0; i < state_names_.size(); ++i)
    for (std::size_t j = i + 1; j < state_names_.size(); ++j)
      if (state_names_[i] == state_names_[j])
        throw error("duplicate state id '" + state_names_[i] + "'");
  initial_ = state(initial);
  const action_set uni = sigma_.universe();
  for (const auto& t : transitions_) {
    if (t.src >= state_names_.size() || t.dst >= state_names_.size())
      throw error("transition endpoint out of range");
    if (t.label & ~uni) throw error("transition label not a subset of the alphabet");
  }
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  first_out_.assign(state_names_.size() + 1, transitions_.size());
  for (std::size_t i = transitions_.size(); i-- > 0;) first_out_[transitions_[i].src] = i;
  // backfill so first_out_ is monotone even for states with no outgoing edges
  for (std::size_t q = state_names_.size(); q-- > 0;)
    if (first_out_[q] > first_out_[q + 1]) first_out_[q] = first_out_[q + 1];
}

const std::string& multi_action_automaton::state_name(state_id q) const {
  check_state(q);
  return state_names_[q];
}

state_id multi_action_automaton::state(std::string_view name) const {
  for (state_id q = 0; q < state_names_.size(); ++q)
    if (state_names_[q] == name) return q;
  throw error("unknown state id '" + std::string(name) + "'");
}

void multi_action_automaton::check_state(state_id q) const {
  if (q >= state_names_.size()) throw error("unknown state id");
}

std::vector<action_set> multi_action_automaton::acts_of(state_id q) const {
  check_state(q);
  std::vector<action_set> out;
  for (std::size_t i = first_out_[q]; i < transitions_.size() && transitions_[i].src == q; ++i)
    out.push_back(transitions_[i].label);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<action_set, state_id>> multi_action_automaton::next_of(state_id q) const {
  check_state(q);
  std::vector<std::pair<action_set, state_id>> out;
  for (std::size_t i = first_out_[q]; i < transitions_.size() && transitions_[i].src == q; ++i)
    out.emplace_back(transitions_[i].label, transitions_[i].dst);
  return out;
}

std::vector<transition> validate_mutex(const multi_action_automaton& aut,
                                       const mutex_relation& mutex) {
  std::vector<transition> offending;
  for (const auto& t : aut.transitions())
    if (!mutex.label_ok(t.label)) offending.push_back(t);
  return offending;
}

}  // namespace cva
