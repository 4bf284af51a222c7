#pragma once

#include "cva/automaton.hpp"
#include "cva/contract.hpp"

#include <optional>

namespace cva {

// The synchronization set G: actions both parties must move on jointly.
// G^c = Sigma \ G are local (asynchronous) actions.
class sync_set {
public:
  sync_set() = default;
  sync_set(const alphabet& sigma, action_set members);

  action_set mask() const { return mask_; }
  action_set complement(const alphabet& sigma) const { return sigma.universe() & ~mask_; }
  bool synchronized(action_id a) const { return contains(mask_, a); }

  friend bool operator==(const sync_set&, const sync_set&) = default;

private:
  action_set mask_ = 0;
};

enum class participation : unsigned char { party1_only, party2_only, both };

// The composition rule a transition was derived by. party1_only/party2_only
// are asynchronous moves (label disjoint from G); both is a joint move.
constexpr bool is_async_move_of(participation who, party p) {
  return (p == party::p1 && who == participation::party1_only) ||
         (p == party::p2 && who == participation::party2_only);
}

struct composed_state {
  state_id q1 = 0;
  state_id q2 = 0;
  int qa = -1;  // contract component; -1 when the contract layer is absent

  friend auto operator<=>(const composed_state&, const composed_state&) = default;
};

struct composed_transition {
  state_id src = 0;
  action_set label = 0;
  state_id dst = 0;
  participation who = participation::both;

  friend auto operator<=>(const composed_transition&, const composed_transition&) = default;
};

// Explicit product automaton. Only states reachable from the initial pair are
// materialized; exploration is breadth-first in a deterministic order.
// Immutable after construction.
class composed_automaton {
public:
  composed_automaton(alphabet sigma, std::vector<composed_state> states,
                     std::vector<std::string> names, std::vector<composed_transition> transitions);

  const alphabet& sigma() const { return sigma_; }
  std::size_t state_count() const { return states_.size(); }
  const composed_state& state(state_id s) const;
  const std::string& state_name(state_id s) const;
  state_id initial() const { return 0; }
  const std::vector<composed_transition>& transitions() const { return transitions_; }

  std::vector<composed_transition> out_transitions(state_id s) const;
  std::vector<action_set> acts_of(state_id s) const;

  // Shortest label path from the initial state (BFS). Empty for the initial
  // state itself; nullopt if unreachable (cannot happen for built systems).
  std::optional<std::vector<action_set>> trace_to(state_id s) const;

private:
  alphabet sigma_;
  std::vector<composed_state> states_;
  std::vector<std::string> names_;
  std::vector<composed_transition> transitions_;
  std::vector<std::size_t> first_out_;
};

// Classical synchronous composition over G (both automata share Sigma).
// A label derivable by two different rules yields two distinct tagged
// transitions; the obligation exemption needs to know the mover.
composed_automaton sync_compose(const multi_action_automaton& s1,
                                const multi_action_automaton& s2, const sync_set& g);

// Reachable composed states with no outgoing transition. Empty result iff
// S1 ||_G S2 never deadlocks (the system is well-formed).
std::vector<state_id> check_well_formed_states(const composed_automaton& composed);
std::vector<std::string> check_well_formed(const multi_action_automaton& s1,
                                           const multi_action_automaton& s2, const sync_set& g);

// A regulated two-party system: (S1 ||_G S2) ||_Sigma A, with the contract
// automaton tagging every composed state. The contract layer never removes
// transitions (the CA is total); participation tags are inherited.
struct regulated_system {
  multi_action_automaton party1;
  multi_action_automaton party2;
  contract_automaton contract;
  sync_set g;
  mutex_relation mutex;
  composed_automaton behaviour;

  const alphabet& sigma() const { return behaviour.sigma(); }
  state_id contract_state(state_id composed) const {
    return static_cast<state_id>(behaviour.state(composed).qa);
  }
  state_id party_state(state_id composed, party p) const {
    const auto& cs = behaviour.state(composed);
    return p == party::p1 ? cs.q1 : cs.q2;
  }
  const multi_action_automaton& party_automaton(party p) const {
    return p == party::p1 ? party1 : party2;
  }
};

regulated_system build_regulated_system(const multi_action_automaton& s1,
                                        const multi_action_automaton& s2, const sync_set& g,
                                        const contract_automaton& ca,
                                        const mutex_relation& mutex = {});

}  // namespace cva
