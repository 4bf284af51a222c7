#pragma once

#include "cva/composition.hpp"
#include "cva/strictness.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cva {

enum class strictness_source : unsigned char { syntactic, semantic };

// Least symmetric relation on clauses closed under the conflict axioms:
// opposite permissions, mutually exclusive obligations, symmetry, and closure
// under increased strictness. Each member carries a replayable derivation.
class conflict_relation {
public:
  using pair_t = std::pair<clause, clause>;  // canonical: first <= second

  static pair_t canonical(clause a, clause b);

  bool contains(const clause& a, const clause& b) const;
  std::optional<std::vector<std::string>> derivation(const clause& a, const clause& b) const;
  const std::map<pair_t, std::vector<std::string>>& members() const { return members_; }

  void add(clause a, clause b, std::vector<std::string> why);

private:
  std::map<pair_t, std::vector<std::string>> members_;
};

// Fixpoint of the axiom seeds under symmetry and strictness closure; the
// strictness generator is the syntactic theorem relation or the bounded
// semantic oracle. Terminates: the clause universe is finite and the closure
// is monotone.
conflict_relation conflict_closure(const alphabet& sigma, const sync_set& g,
                                   const mutex_relation& mutex,
                                   strictness_source source = strictness_source::syntactic,
                                   const oracle_bounds& bounds = {});

// Derivation if (c1, c2) conflict, absent otherwise.
std::optional<std::vector<std::string>> conflicts(const clause& c1, const clause& c2,
                                                  const conflict_relation& rel);

// With c1 # c2, c1 <= c1p and c2 <= c2p given, confirms (c1p, c2p) is still a
// conflict. Must always hold; a false result signals an implementation bug.
// Throws when the preconditions do not hold.
bool strictness_preserves_conflict(const clause& c1, const clause& c2, const clause& c1p,
                                   const clause& c2p, const conflict_relation& rel,
                                   const alphabet& sigma, const std::optional<sync_set>& g,
                                   const mutex_relation& mutex);

struct conflicting_state {
  std::string state;                        // state id (composed id for systems)
  std::pair<clause, clause> pair;           // canonical order
  std::vector<std::string> derivation;
  std::vector<action_set> trace;            // shortest label path from the initial state
};

// Every unordered clause pair of a state label that is in the relation. Bare
// contract automata are scanned whole; regulated systems over reachable
// states only.
std::vector<conflicting_state> find_conflicting_states(const contract_automaton& ca,
                                                       const conflict_relation& rel);
std::vector<conflicting_state> find_conflicting_states(const regulated_system& r,
                                                       const conflict_relation& rel);

}  // namespace cva
