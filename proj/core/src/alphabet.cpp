#include "cva/alphabet.hpp"

#include <algorithm>

namespace cva {

alphabet::alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw error("alphabet must contain at least one action");
  if (names_.size() > max_actions)
    throw error("alphabet exceeds the supported maximum of " + std::to_string(max_actions) +
                " actions");
  for (action_id i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw error("action names must be non-empty");
    if (!index_.emplace(names_[i], i).second)
      throw error("duplicate action name '" + names_[i] + "'");
  }
}

const std::string& alphabet::name(action_id a) const {
  if (a >= names_.size()) throw error("action id out of range");
  return names_[a];
}

std::optional<action_id> alphabet::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

action_id alphabet::id(std::string_view name) const {
  auto found = find(name);
  if (!found) throw error("unknown action '" + std::string(name) + "'");
  return *found;
}

std::string alphabet::set_to_string(action_set s) const {
  std::string out = "{";
  bool first = true;
  for (action_id a = 0; a < names_.size(); ++a) {
    if (!contains(s, a)) continue;
    if (!first) out += ",";
    out += names_[a];
    first = false;
  }
  out += "}";
  return out;
}

action_set alphabet::set_from_names(const std::vector<std::string>& members) const {
  action_set s = 0;
  for (const auto& m : members) s = with(s, id(m));
  return s;
}

mutex_relation::mutex_relation(const alphabet& sigma,
                               std::vector<std::pair<action_id, action_id>> pairs) {
  partner_mask_.assign(sigma.size(), 0);
  for (auto [a, b] : pairs) {
    if (a >= sigma.size() || b >= sigma.size()) throw error("mutex pair action out of range");
    if (a == b) throw error("mutex relation must be irreflexive: " + sigma.name(a) + "#" +
                            sigma.name(a));
    if (a > b) std::swap(a, b);
    pairs_.emplace_back(a, b);
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  for (auto [a, b] : pairs_) {
    partner_mask_[a] |= (1u << b);
    partner_mask_[b] |= (1u << a);
  }
}

bool mutex_relation::mutually_exclusive(action_id a, action_id b) const {
  if (a >= partner_mask_.size()) return false;
  return contains(partner_mask_[a], b);
}

bool mutex_relation::label_ok(action_set label) const {
  for (auto [a, b] : pairs_)
    if (contains(label, a) && contains(label, b)) return false;
  return true;
}

action_set mutex_relation::partners_of(action_set s) const {
  action_set out = 0;
  for (action_id a = 0; a < partner_mask_.size(); ++a)
    if (contains(s, a)) out |= partner_mask_[a];
  return out;
}

}  // namespace cva
