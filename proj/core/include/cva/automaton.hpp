#pragma once

#include "cva/alphabet.hpp"

#include <vector>

namespace cva {

using state_id = unsigned;

struct transition {
  state_id src = 0;
  action_set label = 0;
  state_id dst = 0;

  friend auto operator<=>(const transition&, const transition&) = default;
};

// A finite automaton whose transitions are labelled by *sets* of actions
// performed simultaneously. Immutable after construction; safe to share
// across threads.
class multi_action_automaton {
public:
  multi_action_automaton(alphabet sigma, std::vector<std::string> state_names,
                         std::string_view initial, std::vector<transition> transitions);

  const alphabet& sigma() const { return sigma_; }
  std::size_t state_count() const { return state_names_.size(); }
  const std::string& state_name(state_id q) const;
  state_id state(std::string_view name) const;  // throws on unknown name
  state_id initial() const { return initial_; }
  const std::vector<transition>& transitions() const { return transitions_; }

  // All action sets on outgoing transitions of q, deduplicated.
  std::vector<action_set> acts_of(state_id q) const;

  // All (action set, target) pairs of outgoing transitions of q.
  std::vector<std::pair<action_set, state_id>> next_of(state_id q) const;

  friend bool operator==(const multi_action_automaton&, const multi_action_automaton&) = default;

private:
  void check_state(state_id q) const;

  alphabet sigma_;
  std::vector<std::string> state_names_;
  state_id initial_ = 0;
  std::vector<transition> transitions_;            // sorted, deduplicated
  std::vector<std::size_t> first_out_;             // per state: index into transitions_
};

// Transitions whose label contains both members of some mutex pair.
// Empty result means the automaton respects the relation.
std::vector<transition> validate_mutex(const multi_action_automaton& aut,
                                       const mutex_relation& mutex);

}  // namespace cva
