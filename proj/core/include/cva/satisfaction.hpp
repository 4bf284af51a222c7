#pragma once

#include "cva/composition.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cva {

// Shared core of the state-side existentials: decide
//   exists A in menu, exists A' subset of G^c .
//     [a in A / a not in A]  and  viable(O,F over A u A')  and  A u A' mutex-free
// The only candidate worth checking per A is the minimal top-up A' = O \ A:
// any larger A' can only add forbidden or mutex-conflicting actions.
struct offer_query {
  action_set obliged = 0;    // O of the party the offer must be viable for
  action_set forbidden = 0;  // F of that party
  action_set gc_mask = 0;    // G^c, the pool the top-up may draw from
  int required_action = -1;  // permission constraint: action that must be in A...
  bool required_present = true;  // ...present (P_p(a)) or absent (P_p(!a))
};

bool viable_offer_exists(std::span<const action_set> menu, const offer_query& q,
                         const mutex_relation& mutex);

struct location {
  enum class kind : unsigned char { state, transition };
  kind k = kind::state;
  state_id state = 0;            // composed state (or transition source)
  std::size_t transition = 0;    // index into behaviour.transitions() when k == transition

  friend auto operator<=>(const location&, const location&) = default;
};

std::string location_to_string(const regulated_system& r, const location& loc);

// Permission satisfaction for one clause at a composed state. The subject is
// never blamed; permissions on local actions cannot be violated.
bool sat_perm_single(const regulated_system& r, state_id composed, party p, const clause& perm);

// Conjunction of sat_perm_single over the permissions of the other party.
bool sat_perm_state(const regulated_system& r, state_id composed, party p);

// Combined-obligation viability on a transition; exempt when the transition
// is an asynchronous move of the other party.
bool sat_obl_transition(const regulated_system& r, std::size_t transition_index, party p);

// p must offer a menu item that, topped up with local actions, is viable for
// the other party; vacuously true when the other party has no obligations.
bool sat_obl_state(const regulated_system& r, state_id composed, party p);

bool sat(const regulated_system& r, const location& loc, party p);

struct violation_report {
  party who = party::p1;
  location where;
  std::optional<clause> violated;  // nullopt: the combined obligation set
  std::string reason;
  std::vector<action_set> witness_trace;  // shortest path from the initial state

  friend bool operator==(const violation_report&, const violation_report&) = default;
};

// One report per (party, reachable location, permission clause or combined
// obligation set) with sat false, in deterministic order.
std::vector<violation_report> find_violations(const regulated_system& r);

struct breach_result {
  bool incapable = true;
  std::optional<violation_report> witness;  // first violation on a shortest trace
};

// bi(p, R): no reachable state or transition violates the contract for p.
breach_result breach_incapable(party p, const regulated_system& r);

}  // namespace cva
