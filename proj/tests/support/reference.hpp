#pragma once

// Independent brute-force semantics used as the test oracle. Everything here
// is written directly from the satisfaction formulas and composition rules,
// with exhaustive enumeration instead of the library's search shortcuts:
// composition applies each inference rule to every state/label pair and
// closes reachability by naive iteration; the state existentials enumerate
// every A' subset of G^c. Must stay independent of the library paths it
// checks.

#include "cva/composition.hpp"
#include "cva/satisfaction.hpp"

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace cva::ref {

struct rstate {
  state_id q1, q2;
  state_id qa;

  friend auto operator<=>(const rstate&, const rstate&) = default;
};

struct rtransition {
  rstate src;
  action_set label;
  rstate dst;
  participation who;

  friend auto operator<=>(const rtransition&, const rtransition&) = default;
};

struct rsystem {
  std::set<rstate> reachable;
  std::set<rtransition> transitions;  // reachable sources only
};

// Product by direct rule application over all state pairs, then reachability
// as an iterate-until-stable closure.
rsystem compose(const multi_action_automaton& s1, const multi_action_automaton& s2,
                const sync_set& g, const contract_automaton& ca);

// Deadlocked reachable states of S1 ||_G S2 (no contract layer).
std::vector<std::pair<state_id, state_id>> deadlocked_states(const multi_action_automaton& s1,
                                                             const multi_action_automaton& s2,
                                                             const sync_set& g);

bool sat_state(const regulated_system& r, const rstate& s, party p);
bool sat_transition(const regulated_system& r, const rtransition& t, party p);

// Violation keys in a representation shared with the adapter below.
struct violation_key {
  unsigned party_idx;
  bool is_transition;
  rstate state;
  action_set label;      // transitions only
  rstate dst;            // transitions only
  participation who;     // transitions only
  std::string clause;    // permission clause text, or "combined-obligations"

  friend auto operator<=>(const violation_key&, const violation_key&) = default;
};

std::set<violation_key> find_violations(const regulated_system& r);

// The library's reports mapped onto the same key space.
std::set<violation_key> keys_of(const regulated_system& r,
                                const std::vector<violation_report>& reports);

}  // namespace cva::ref
