#pragma once

#include "cva/contract.hpp"
#include "cva/composition.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cva {

// Bijection between reachable state sets preserving the initial state and the
// guarded transition function. Unreachable states are ignored (they never
// influence satisfaction).
struct iso_witness {
  std::vector<state_id> map1to2;  // indexed by reachable states of the first CA
  std::vector<state_id> reachable1;
};

std::optional<iso_witness> structurally_isomorphic(const contract_automaton& a1,
                                                   const contract_automaton& a2);

// True iff a2's labelling is a1's with zero or more occurrences of c swapped
// for cp and nothing else changed, across an isomorphism witness.
bool clause_replace_related(const contract_automaton& a1, const contract_automaton& a2,
                            const clause& c, const clause& cp);

// Derivation chain if c <= cp follows from reflexivity, transitivity and the
// theorem rules. Absence is NOT a disproof. Rules with a side condition on G
// fire only when g is provided and the condition holds.
std::optional<std::vector<std::string>> clause_stricter_syntactic(
    const clause& c, const clause& cp, const alphabet& sigma,
    const std::optional<sync_set>& g, const mutex_relation& mutex);

struct oracle_bounds {
  std::size_t max_sigma = 3;
  std::size_t max_menu = 4;
  std::size_t max_label_clauses = 3;  // context clauses per state incl. the compared one
};

enum class strict_rel : unsigned char {
  stricter_for_party1,
  stricter_for_party2,
  stricter_global,
  equivalent,
  incomparable,
};

std::string to_string(strict_rel r);

// A refuting configuration: a single contract state with the given clause
// context, party menus, and the location/party where satisfaction under the
// weaker context fails while both parties satisfy the stricter one.
struct oracle_counterexample {
  std::vector<clause> context;  // without the compared clauses
  std::vector<action_set> menu1, menu2;
  party blamed = party::p1;
  std::string location;  // "state" or the failing derived transition
  std::string detail;
};

struct directed_result {
  bool holds[2] = {true, true};  // per party (index 0 = party 1)
  std::optional<oracle_counterexample> cex[2];
  bool holds_global() const { return holds[0] && holds[1]; }
};

struct strictness_verdict {
  strict_rel relation = strict_rel::incomparable;
  enum class method_t : unsigned char { syntactic, semantic } method = method_t::semantic;
  directed_result forward;   // c <= cp
  directed_result backward;  // cp <= c
  std::vector<std::string> evidence;  // rule chain (syntactic) or notes
  oracle_bounds bounds;
};

// Exhaustive bounded decision of c <= cp by configuration enumeration.
//
// A configuration is one contract state (a clause context drawn from the full
// clause pool over Sigma, containing the compared clause) plus two non-empty
// menus of mutex-valid, composable labels. The implication checked per
// configuration: if both parties satisfy everywhere (state and every derived
// transition) under the stricter context, party p still satisfies everywhere
// under the weaker one. This is the implication shape the isomorphic proof
// principle is used with; confirmations therefore quantify over systems in
// which both parties always have at least one enabled move per menu entry,
// while refutations are real single-state systems and hold unconditionally.
//
// Throws when |Sigma| exceeds the bound: refusal, never approximation.
strictness_verdict clause_stricter_semantic(const clause& c, const clause& cp,
                                            const alphabet& sigma, const sync_set& g,
                                            const mutex_relation& mutex,
                                            const oracle_bounds& bounds = {});

// Direct check of one configuration; lets callers verify a specific witness.
struct configuration_check {
  bool premise = false;        // both parties satisfied under the strict label set
  bool conclusion[2] = {true, true};  // per party under the weak label set
  bool valid = true;           // menus non-empty, labels mutex-valid and composable
  std::string note;
  bool refutes(party p) const { return valid && premise && !conclusion[static_cast<unsigned>(p)]; }
};

configuration_check check_configuration(const std::vector<clause>& weak_label,
                                        const std::vector<clause>& strict_label,
                                        const std::vector<action_set>& menu1,
                                        const std::vector<action_set>& menu2,
                                        const alphabet& sigma, const sync_set& g,
                                        const mutex_relation& mutex);

// Strictness of whole contract automata via the pointwise principle over an
// isomorphism witness. Subset labelling is accepted immediately by
// monotonicity. Throws for non-isomorphic automata (out of implemented scope).
strictness_verdict ca_stricter(const contract_automaton& a1, const contract_automaton& a2,
                               const sync_set& g, const mutex_relation& mutex,
                               const oracle_bounds& bounds = {},
                               std::optional<party> focus = std::nullopt);

}  // namespace cva
