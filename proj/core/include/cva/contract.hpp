#pragma once

#include "cva/alphabet.hpp"
#include "cva/automaton.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cva {

enum class party : unsigned char { p1 = 0, p2 = 1 };

constexpr party other(party p) { return p == party::p1 ? party::p2 : party::p1; }
constexpr unsigned index_of(party p) { return p == party::p1 ? 1u : 2u; }
party party_from_index(unsigned idx);  // 1 or 2

enum class modality : unsigned char { obligation, permission };

// O_p(x) or P_p(x). Prohibition never appears here; it is desugared on entry.
struct clause {
  modality mod = modality::obligation;
  party who = party::p1;
  action_literal lit;

  friend auto operator<=>(const clause&, const clause&) = default;
};

// !P_p(a)=O_p(!a), !P_p(!a)=O_p(a), !O_p(a)=P_p(!a), !O_p(!a)=P_p(a).
clause negate_clause(clause c);

// F_p(x) = !P_p(x) = O_p(!x).
clause desugar_prohibition(party p, action_literal x);

// "O<1>(a)", "P<2>(!b)"
std::string clause_to_string(const clause& c, const alphabet& sigma);

// Boolean guard over atoms contains(a), closed under and/or/not.
// Total over every action set by construction.
class guard {
public:
  enum class kind : unsigned char { contains, neg, conj, disj };

  static guard contains(action_id a);
  static guard neg(guard g);
  static guard conj(guard lhs, guard rhs);
  static guard disj(guard lhs, guard rhs);

  bool eval(action_set a) const;
  std::string to_string(const alphabet& sigma) const;

  friend bool operator==(const guard& lhs, const guard& rhs);

private:
  guard() = default;
  kind kind_ = kind::contains;
  action_id action_ = 0;
  std::shared_ptr<const guard> lhs_, rhs_;  // immutable subtrees, sharing is safe
};

// One transition arm of a contract-automaton state. An arm without a guard is
// the explicit `else`. First matching arm wins; a state with no matching arm
// self-loops (the implicit else).
struct guard_arm {
  std::optional<guard> when;  // nullopt = else
  state_id target = 0;
};

// Total, deterministic multi-action automaton with a clause set per state.
class contract_automaton {
public:
  contract_automaton(alphabet sigma, std::vector<std::string> state_names,
                     std::string_view initial, std::vector<std::vector<guard_arm>> arms,
                     std::vector<std::vector<clause>> labels);

  const alphabet& sigma() const { return sigma_; }
  std::size_t state_count() const { return state_names_.size(); }
  const std::string& state_name(state_id q) const;
  state_id state(std::string_view name) const;
  state_id initial() const { return initial_; }
  const std::vector<guard_arm>& arms_of(state_id q) const;

  const std::vector<clause>& contract_of(state_id q) const;

  // The unique successor under label a: first matching arm, implicit
  // else self-loop when nothing matches.
  state_id step(state_id q, action_set a) const;

  // O_p(q): actions p is obliged to perform; F_p(q): obliged not to perform.
  action_set obliged_set(state_id q, party p) const;
  action_set forbidden_set(state_id q, party p) const;

  // O_p(q) subset of a, and F_p(q) disjoint from a.
  bool viable(party p, state_id q, action_set a) const;

private:
  void check_state(state_id q) const;

  alphabet sigma_;
  std::vector<std::string> state_names_;
  state_id initial_ = 0;
  std::vector<std::vector<guard_arm>> arms_;
  std::vector<std::vector<clause>> labels_;     // sorted, deduplicated
  std::vector<action_set> obliged_, forbidden_; // per state x party, precomputed
};

// Product automaton: steps componentwise, labels are unions. Reachable part
// from the paired initial states. Alphabets must match.
contract_automaton ca_conjoin(const contract_automaton& a1, const contract_automaton& a2);

struct ca_issue {
  enum class severity : unsigned char { error, warning };
  severity level = severity::warning;
  std::string state;  // offending state name, empty for automaton-wide issues
  std::string message;
};

struct ca_validation {
  std::vector<ca_issue> issues;
  bool ok() const {
    for (const auto& i : issues)
      if (i.level == ca_issue::severity::error) return false;
    return true;
  }
};

// Checks totality per state (enumerating 2^Sigma up to max_enum_actions) and
// flags unreachable states. With strict_totality the implicit else is not
// counted, so uncovered labels become errors.
ca_validation validate_ca(const contract_automaton& ca, bool strict_totality = false,
                          std::size_t max_enum_actions = 12);

}  // namespace cva
