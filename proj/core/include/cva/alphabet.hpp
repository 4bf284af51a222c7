#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cva {

// Thrown on configuration/lookup errors (mismatched alphabets, unknown ids,
// violated preconditions). Validators that *report* use result types instead.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using action_id = unsigned;

// A set of actions performed simultaneously, as a bitmask over the alphabet.
// Alphabets are capped at 24 actions; everything here is desk scale.
using action_set = std::uint32_t;

inline bool contains(action_set s, action_id a) { return (s >> a) & 1u; }
inline action_set with(action_set s, action_id a) { return s | (1u << a); }
inline int popcount(action_set s) { return __builtin_popcount(s); }

// Finite ordered set of action names (Sigma).
class alphabet {
public:
  static constexpr std::size_t max_actions = 24;

  explicit alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(action_id a) const;
  const std::vector<std::string>& names() const { return names_; }

  std::optional<action_id> find(std::string_view name) const;
  action_id id(std::string_view name) const;  // throws on unknown name

  // Mask with every action present.
  action_set universe() const { return (size() == 32) ? ~0u : ((1u << size()) - 1u); }

  // "{a,b}" in alphabet order; "{}" for the empty set.
  std::string set_to_string(action_set s) const;
  action_set set_from_names(const std::vector<std::string>& members) const;

  friend bool operator==(const alphabet&, const alphabet&) = default;

private:
  std::vector<std::string> names_;
  std::map<std::string, action_id, std::less<>> index_;
};

// An action a or its inversion !a (the extended alphabet Sigma!).
struct action_literal {
  action_id action = 0;
  bool negated = false;

  friend auto operator<=>(const action_literal&, const action_literal&) = default;
};

// !(!x) = x
constexpr action_literal negate(action_literal x) { return {x.action, !x.negated}; }

// Symmetric irreflexive relation of actions that can never share a transition
// label. Declared once per system; applies to every automaton in it.
class mutex_relation {
public:
  mutex_relation() = default;
  mutex_relation(const alphabet& sigma, std::vector<std::pair<action_id, action_id>> pairs);

  bool empty() const { return pairs_.empty(); }
  const std::vector<std::pair<action_id, action_id>>& pairs() const { return pairs_; }

  bool mutually_exclusive(action_id a, action_id b) const;

  // True iff the label contains no mutex pair in full.
  bool label_ok(action_set label) const;

  // Union of the mutex partners of every action in s.
  action_set partners_of(action_set s) const;

  friend bool operator==(const mutex_relation&, const mutex_relation&) = default;

private:
  std::vector<std::pair<action_id, action_id>> pairs_;  // normalized a<b, sorted
  std::vector<action_set> partner_mask_;                // indexed by action
};

}  // namespace cva
