#include "cva/conflicts.hpp"

#include <algorithm>
#include <set>

namespace cva {

conflict_relation::pair_t conflict_relation::canonical(clause a, clause b) {
  if (b < a) std::swap(a, b);
  return {a, b};
}

bool conflict_relation::contains(const clause& a, const clause& b) const {
  return members_.count(canonical(a, b)) > 0;
}

std::optional<std::vector<std::string>> conflict_relation::derivation(const clause& a,
                                                                      const clause& b) const {
  auto it = members_.find(canonical(a, b));
  if (it == members_.end()) return std::nullopt;
  return it->second;
}

void conflict_relation::add(clause a, clause b, std::vector<std::string> why) {
  members_.emplace(canonical(a, b), std::move(why));
}

namespace {

std::vector<clause> clause_universe(const alphabet& sigma) {
  std::vector<clause> out;
  for (party p : {party::p1, party::p2})
    for (modality m : {modality::obligation, modality::permission})
      for (action_id a = 0; a < sigma.size(); ++a)
        for (bool neg : {false, true}) out.push_back({m, p, {a, neg}});
  std::sort(out.begin(), out.end());
  return out;
}

// Strict successors of every clause in the universe under the selected
// strictness source, with human-readable justifications.
std::vector<std::vector<std::pair<std::size_t, std::string>>> successor_table(
    const std::vector<clause>& universe, const alphabet& sigma, const sync_set& g,
    const mutex_relation& mutex, strictness_source source, const oracle_bounds& bounds) {
  std::vector<std::vector<std::pair<std::size_t, std::string>>> table(universe.size());
  for (std::size_t i = 0; i < universe.size(); ++i)
    for (std::size_t j = 0; j < universe.size(); ++j) {
      if (i == j) continue;
      std::string why;
      bool related = false;
      if (source == strictness_source::syntactic) {
        auto chain = clause_stricter_syntactic(universe[i], universe[j], sigma, g, mutex);
        if (chain) {
          related = true;
          for (const auto& step : *chain) why += (why.empty() ? "" : "; ") + step;
        }
      } else {
        auto verdict = clause_stricter_semantic(universe[i], universe[j], sigma, g, mutex, bounds);
        if (verdict.forward.holds_global()) {
          related = true;
          why = "semantic oracle: " + clause_to_string(universe[i], sigma) +
                " <= " + clause_to_string(universe[j], sigma);
        }
      }
      if (related) table[i].emplace_back(j, std::move(why));
    }
  return table;
}

}  // namespace

conflict_relation conflict_closure(const alphabet& sigma, const sync_set& g,
                                   const mutex_relation& mutex, strictness_source source,
                                   const oracle_bounds& bounds) {
  const auto universe = clause_universe(sigma);
  auto index_of_clause = [&](const clause& c) {
    return static_cast<std::size_t>(
        std::lower_bound(universe.begin(), universe.end(), c) - universe.begin());
  };
  const auto successors = successor_table(universe, sigma, g, mutex, source, bounds);

  conflict_relation rel;
  std::vector<conflict_relation::pair_t> queue;
  auto add = [&](clause a, clause b, std::vector<std::string> why) {
    auto key = conflict_relation::canonical(a, b);
    if (rel.contains(a, b)) return;
    rel.add(a, b, std::move(why));
    queue.push_back(key);
  };

  // Axiom 1: opposite permissions conflict.
  for (party p : {party::p1, party::p2})
    for (action_id a = 0; a < sigma.size(); ++a)
      for (bool neg : {false, true}) {
        clause perm{modality::permission, p, {a, neg}};
        clause opposite = negate_clause(perm);
        add(perm, opposite,
            {"axiom1: " + clause_to_string(perm, sigma) + " # !" +
             clause_to_string(perm, sigma) + " = " + clause_to_string(opposite, sigma)});
      }

  // Axiom 2: obligations over mutually exclusive actions conflict.
  for (auto [a, b] : mutex.pairs())
    for (party p : {party::p1, party::p2}) {
      clause oa{modality::obligation, p, {a, false}};
      clause ob{modality::obligation, p, {b, false}};
      add(oa, ob,
          {"axiom2: " + sigma.name(a) + "#" + sigma.name(b) + " mutually exclusive"});
    }

  // Axioms 3 and 4: close under symmetry and increased strictness.
  while (!queue.empty()) {
    auto key = queue.back();
    queue.pop_back();
    const auto base = *rel.derivation(key.first, key.second);
    for (int orient = 0; orient < 2; ++orient) {
      const clause& keep = orient == 0 ? key.first : key.second;
      const clause& grow = orient == 0 ? key.second : key.first;
      for (const auto& [succ_idx, why] : successors[index_of_clause(grow)]) {
        const clause& grown = universe[succ_idx];
        if (rel.contains(keep, grown)) continue;
        std::vector<std::string> deriv = base;
        if (orient == 1) deriv.emplace_back("axiom3: symmetry");
        deriv.push_back("axiom4: " + clause_to_string(grow, sigma) + " <= " +
                        clause_to_string(grown, sigma) + " [" + why + "]");
        add(keep, grown, std::move(deriv));
      }
    }
  }
  return rel;
}

std::optional<std::vector<std::string>> conflicts(const clause& c1, const clause& c2,
                                                  const conflict_relation& rel) {
  return rel.derivation(c1, c2);
}

bool strictness_preserves_conflict(const clause& c1, const clause& c2, const clause& c1p,
                                   const clause& c2p, const conflict_relation& rel,
                                   const alphabet& sigma, const std::optional<sync_set>& g,
                                   const mutex_relation& mutex) {
  if (!rel.contains(c1, c2))
    throw error("precondition: " + clause_to_string(c1, sigma) + " # " +
                clause_to_string(c2, sigma) + " is not in the relation");
  if (!clause_stricter_syntactic(c1, c1p, sigma, g, mutex))
    throw error("precondition: " + clause_to_string(c1, sigma) +
                " <= " + clause_to_string(c1p, sigma) + " is not derivable");
  if (!clause_stricter_syntactic(c2, c2p, sigma, g, mutex))
    throw error("precondition: " + clause_to_string(c2, sigma) +
                " <= " + clause_to_string(c2p, sigma) + " is not derivable");
  return rel.contains(c1p, c2p);
}

namespace {

std::vector<conflicting_state> scan_labels(
    const conflict_relation& rel,
    const std::vector<std::pair<std::string, const std::vector<clause>*>>& states,
    const std::vector<std::vector<action_set>>& traces) {
  std::vector<conflicting_state> out;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto& label = *states[s].second;
    for (std::size_t i = 0; i < label.size(); ++i)
      for (std::size_t j = i + 1; j < label.size(); ++j)
        if (auto deriv = rel.derivation(label[i], label[j])) {
          out.push_back({states[s].first, conflict_relation::canonical(label[i], label[j]),
                         *deriv, traces[s]});
        }
  }
  return out;
}

}  // namespace

std::vector<conflicting_state> find_conflicting_states(const contract_automaton& ca,
                                                       const conflict_relation& rel) {
  if (ca.sigma().size() > 16) throw error("alphabet too large to enumerate traces");
  const action_set uni = ca.sigma().universe();

  // Shortest traces by BFS; neighbour labels in (size, mask) order so minimal
  // action sets win.
  std::vector<action_set> by_size;
  for (action_set a = 0; a <= uni; ++a) by_size.push_back(a);
  std::sort(by_size.begin(), by_size.end(), [](action_set x, action_set y) {
    if (popcount(x) != popcount(y)) return popcount(x) < popcount(y);
    return x < y;
  });

  std::vector<std::optional<std::vector<action_set>>> trace(ca.state_count());
  trace[ca.initial()] = std::vector<action_set>{};
  std::vector<state_id> queue{ca.initial()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    state_id q = queue[head];
    for (action_set a : by_size) {
      state_id dest = ca.step(q, a);
      if (trace[dest]) continue;
      auto t = *trace[q];
      t.push_back(a);
      trace[dest] = std::move(t);
      queue.push_back(dest);
    }
  }

  std::vector<std::pair<std::string, const std::vector<clause>*>> states;
  std::vector<std::vector<action_set>> traces;
  for (state_id q = 0; q < ca.state_count(); ++q) {
    states.emplace_back(ca.state_name(q), &ca.contract_of(q));
    traces.push_back(trace[q].value_or(std::vector<action_set>{}));
  }
  return scan_labels(rel, states, traces);
}

std::vector<conflicting_state> find_conflicting_states(const regulated_system& r,
                                                       const conflict_relation& rel) {
  std::vector<std::pair<std::string, const std::vector<clause>*>> states;
  std::vector<std::vector<action_set>> traces;
  for (state_id s = 0; s < r.behaviour.state_count(); ++s) {
    states.emplace_back(r.behaviour.state_name(s), &r.contract.contract_of(r.contract_state(s)));
    traces.push_back(r.behaviour.trace_to(s).value_or(std::vector<action_set>{}));
  }
  return scan_labels(rel, states, traces);
}

}  // namespace cva
