#include "cva/contract.hpp"

#include <algorithm>
#include <map>

namespace cva {

party party_from_index(unsigned idx) {
  if (idx == 1) return party::p1;
  if (idx == 2) return party::p2;
  throw error("party index must be 1 or 2");
}

clause negate_clause(clause c) {
  c.mod = (c.mod == modality::obligation) ? modality::permission : modality::obligation;
  c.lit = negate(c.lit);
  return c;
}

clause desugar_prohibition(party p, action_literal x) {
  return negate_clause(clause{modality::permission, p, x});
}

std::string clause_to_string(const clause& c, const alphabet& sigma) {
  std::string out = c.mod == modality::obligation ? "O" : "P";
  out += "<" + std::to_string(index_of(c.who)) + ">(";
  if (c.lit.negated) out += "!";
  out += sigma.name(c.lit.action) + ")";
  return out;
}

guard guard::contains(action_id a) {
  guard g;
  g.kind_ = kind::contains;
  g.action_ = a;
  return g;
}

guard guard::neg(guard inner) {
  guard g;
  g.kind_ = kind::neg;
  g.lhs_ = std::make_shared<const guard>(std::move(inner));
  return g;
}

guard guard::conj(guard lhs, guard rhs) {
  guard g;
  g.kind_ = kind::conj;
  g.lhs_ = std::make_shared<const guard>(std::move(lhs));
  g.rhs_ = std::make_shared<const guard>(std::move(rhs));
  return g;
}

guard guard::disj(guard lhs, guard rhs) {
  guard g;
  g.kind_ = kind::disj;
  g.lhs_ = std::make_shared<const guard>(std::move(lhs));
  g.rhs_ = std::make_shared<const guard>(std::move(rhs));
  return g;
}

bool guard::eval(action_set a) const {
  switch (kind_) {
    case kind::contains: return cva::contains(a, action_);
    case kind::neg: return !lhs_->eval(a);
    case kind::conj: return lhs_->eval(a) && rhs_->eval(a);
    case kind::disj: return lhs_->eval(a) || rhs_->eval(a);
  }
  return false;
}

std::string guard::to_string(const alphabet& sigma) const {
  switch (kind_) {
    case kind::contains: return "contains(" + sigma.name(action_) + ")";
    case kind::neg:
      if (lhs_->kind_ == kind::conj || lhs_->kind_ == kind::disj)
        return "not (" + lhs_->to_string(sigma) + ")";
      return "not " + lhs_->to_string(sigma);
    case kind::conj: {
      auto wrap = [&](const guard& g) {
        std::string s = g.to_string(sigma);
        return g.kind_ == kind::disj ? "(" + s + ")" : s;
      };
      return wrap(*lhs_) + " and " + wrap(*rhs_);
    }
    case kind::disj: return lhs_->to_string(sigma) + " or " + rhs_->to_string(sigma);
  }
  return "";
}

bool operator==(const guard& lhs, const guard& rhs) {
  if (lhs.kind_ != rhs.kind_) return false;
  switch (lhs.kind_) {
    case guard::kind::contains: return lhs.action_ == rhs.action_;
    case guard::kind::neg: return *lhs.lhs_ == *rhs.lhs_;
    default: return *lhs.lhs_ == *rhs.lhs_ && *lhs.rhs_ == *rhs.rhs_;
  }
}

contract_automaton::contract_automaton(alphabet sigma, std::vector<std::string> state_names,
                                       std::string_view initial,
                                       std::vector<std::vector<guard_arm>> arms,
                                       std::vector<std::vector<clause>> labels)
    : sigma_(std::move(sigma)),
      state_names_(std::move(state_names)),
      arms_(std::move(arms)),
      labels_(std::move(labels)) {
  if (state_names_.empty()) throw error("contract automaton needs at least one state");
  for (std::size_t i = 0; i < state_names_.size(); ++i)
    for (std::size_t j = i + 1; j < state_names_.size(); ++j)
      if (state_names_[i] == state_names_[j])
        throw error("duplicate contract state id '" + state_names_[i] + "'");
  initial_ = state(initial);
  arms_.resize(state_names_.size());
  labels_.resize(state_names_.size());
  for (auto& arms : arms_)
    for (const auto& arm : arms)
      if (arm.target >= state_names_.size()) throw error("guard arm target out of range");
  for (auto& label : labels_) {
    for (const auto& c : label)
      if (c.lit.action >= sigma_.size()) throw error("clause action out of range");
    std::sort(label.begin(), label.end());
    label.erase(std::unique(label.begin(), label.end()), label.end());
  }
  obliged_.assign(state_names_.size() * 2, 0);
  forbidden_.assign(state_names_.size() * 2, 0);
  for (state_id q = 0; q < state_names_.size(); ++q)
    for (const auto& c : labels_[q]) {
      if (c.mod != modality::obligation) continue;
      auto& dest = c.lit.negated ? forbidden_ : obliged_;
      dest[q * 2 + static_cast<unsigned>(c.who)] = with(
          dest[q * 2 + static_cast<unsigned>(c.who)], c.lit.action);
    }
}

const std::string& contract_automaton::state_name(state_id q) const {
  check_state(q);
  return state_names_[q];
}

state_id contract_automaton::state(std::string_view name) const {
  for (state_id q = 0; q < state_names_.size(); ++q)
    if (state_names_[q] == name) return q;
  throw error("unknown contract state id '" + std::string(name) + "'");
}

void contract_automaton::check_state(state_id q) const {
  if (q >= state_names_.size()) throw error("unknown contract state id");
}

const std::vector<guard_arm>& contract_automaton::arms_of(state_id q) const {
  check_state(q);
  return arms_[q];
}

const std::vector<clause>& contract_automaton::contract_of(state_id q) const {
  check_state(q);
  return labels_[q];
}

state_id contract_automaton::step(state_id q, action_set a) const {
  check_state(q);
  for (const auto& arm : arms_[q])
    if (!arm.when || arm.when->eval(a)) return arm.target;
  return q;  // implicit else
}

action_set contract_automaton::obliged_set(state_id q, party p) const {
  check_state(q);
  return obliged_[q * 2 + static_cast<unsigned>(p)];
}

action_set contract_automaton::forbidden_set(state_id q, party p) const {
  check_state(q);
  return forbidden_[q * 2 + static_cast<unsigned>(p)];
}

bool contract_automaton::viable(party p, state_id q, action_set a) const {
  return (obliged_set(q, p) & ~a) == 0 && (forbidden_set(q, p) & a) == 0;
}

contract_automaton ca_conjoin(const contract_automaton& a1, const contract_automaton& a2) {
  if (a1.sigma() != a2.sigma()) throw error("ca_conjoin: alphabets differ");
  if (a1.sigma().size() > 16) throw error("ca_conjoin enumerates 2^Sigma; alphabet too large");

  // Reachable product, explored breadth-first in deterministic order.
  std::map<std::pair<state_id, state_id>, state_id> seen;
  std::vector<std::pair<state_id, state_id>> order;
  std::vector<std::pair<state_id, state_id>> frontier{{a1.initial(), a2.initial()}};
  seen[frontier[0]] = 0;
  order.push_back(frontier[0]);
  const action_set uni = a1.sigma().universe();
  while (!frontier.empty()) {
    std::vector<std::pair<state_id, state_id>> next;
    for (auto [q1, q2] : frontier) {
      for (action_set a = 0; a <= uni; ++a) {
        auto dest = std::make_pair(a1.step(q1, a), a2.step(q2, a));
        if (seen.emplace(dest, static_cast<state_id>(order.size())).second) {
          order.push_back(dest);
          next.push_back(dest);
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<std::string> names;
  std::vector<std::vector<guard_arm>> arms(order.size());
  std::vector<std::vector<clause>> labels;
  names.reserve(order.size());
  for (auto [q1, q2] : order) {
    names.push_back("(" + a1.state_name(q1) + "," + a2.state_name(q2) + ")");
    std::vector<clause> merged = a1.contract_of(q1);
    const auto& extra = a2.contract_of(q2);
    merged.insert(merged.end(), extra.begin(), extra.end());
    labels.push_back(std::move(merged));
  }

  // Arm lists pair the components' arms in first-component-major order with an
  // explicit else materialized for each side, which reproduces the
  // componentwise step under first-match semantics.
  auto with_else = [](const std::vector<guard_arm>& in, state_id self) {
    std::vector<guard_arm> out = in;
    bool has_else = false;
    for (const auto& arm : out)
      if (!arm.when) has_else = true;
    if (!has_else) out.push_back(guard_arm{std::nullopt, self});
    return out;
  };
  for (state_id idx = 0; idx < order.size(); ++idx) {
    auto [q1, q2] = order[idx];
    auto arms1 = with_else(a1.arms_of(q1), q1);
    auto arms2 = with_else(a2.arms_of(q2), q2);
    for (const auto& x : arms1)
      for (const auto& y : arms2) {
        auto it = seen.find({x.target, y.target});
        if (it == seen.end()) continue;  // unreachable under any label, skip
        std::optional<guard> when;
        if (x.when && y.when)
          when = guard::conj(*x.when, *y.when);
        else if (x.when)
          when = *x.when;
        else if (y.when)
          when = *y.when;
        arms[idx].push_back(guard_arm{std::move(when), it->second});
      }
  }

  return contract_automaton(a1.sigma(), std::move(names), names.empty() ? "" : names[0],
                            std::move(arms), std::move(labels));
}

ca_validation validate_ca(const contract_automaton& ca, bool strict_totality,
                          std::size_t max_enum_actions) {
  ca_validation report;
  const auto& sigma = ca.sigma();
  if (sigma.size() > max_enum_actions) {
    report.issues.push_back({ca_issue::severity::warning, "",
                             "alphabet too large to enumerate 2^Sigma; totality checked "
                             "structurally only"});
  } else {
    const action_set uni = sigma.universe();
    for (state_id q = 0; q < ca.state_count(); ++q) {
      bool relies_on_implicit = false;
      std::vector<action_set> uncovered;
      for (action_set a = 0; a <= uni; ++a) {
        bool matched = false;
        for (const auto& arm : ca.arms_of(q))
          if (!arm.when || arm.when->eval(a)) {
            matched = true;
            break;
          }
        if (!matched) {
          relies_on_implicit = true;
          uncovered.push_back(a);
        }
      }
      if (relies_on_implicit) {
        if (strict_totality)
          report.issues.push_back({ca_issue::severity::error, ca.state_name(q),
                                   "not total without the implicit else: no arm matches " +
                                       sigma.set_to_string(uncovered.front())});
        else
          report.issues.push_back({ca_issue::severity::warning, ca.state_name(q),
                                   "relies on the implicit else self-loop (first uncovered "
                                   "label " +
                                       sigma.set_to_string(uncovered.front()) + ")"});
      }
    }
  }

  // Reachability from the initial state.
  if (sigma.size() <= max_enum_actions) {
    std::vector<bool> reached(ca.state_count(), false);
    std::vector<state_id> stack{ca.initial()};
    reached[ca.initial()] = true;
    const action_set uni = sigma.universe();
    while (!stack.empty()) {
      state_id q = stack.back();
      stack.pop_back();
      for (action_set a = 0; a <= uni; ++a) {
        state_id dest = ca.step(q, a);
        if (!reached[dest]) {
          reached[dest] = true;
          stack.push_back(dest);
        }
      }
    }
    for (state_id q = 0; q < ca.state_count(); ++q)
      if (!reached[q])
        report.issues.push_back(
            {ca_issue::severity::warning, ca.state_name(q), "state is unreachable"});
  }
  return report;
}

}  // namespace cva
