#include "cva/composition.hpp"

#include <algorithm>
#include <map>

namespace cva {

sync_set::sync_set(const alphabet& sigma, action_set members) : mask_(members) {
  if (members & ~sigma.universe()) throw error("sync set is not a subset of the alphabet");
}

composed_automaton::composed_automaton(alphabet sigma, std::vector<composed_state> states,
                                       std::vector<std::string> names,
                                       std::vector<composed_transition> transitions)
    : sigma_(std::move(sigma)),
      states_(std::move(states)),
      names_(std::move(names)),
      transitions_(std::move(transitions)) {
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  first_out_.assign(states_.size() + 1, transitions_.size());
  for (std::size_t i = transitions_.size(); i-- > 0;) first_out_[transitions_[i].src] = i;
  for (std::size_t q = states_.size(); q-- > 0;)
    if (first_out_[q] > first_out_[q + 1]) first_out_[q] = first_out_[q + 1];
}

const composed_state& composed_automaton::state(state_id s) const {
  if (s >= states_.size()) throw error("unknown composed state");
  return states_[s];
}

const std::string& composed_automaton::state_name(state_id s) const {
  if (s >= names_.size()) throw error("unknown composed state");
  return names_[s];
}

std::vector<composed_transition> composed_automaton::out_transitions(state_id s) const {
  if (s >= states_.size()) throw error("unknown composed state");
  std::vector<composed_transition> out;
  for (std::size_t i = first_out_[s]; i < transitions_.size() && transitions_[i].src == s; ++i)
    out.push_back(transitions_[i]);
  return out;
}

std::vector<action_set> composed_automaton::acts_of(state_id s) const {
  std::vector<action_set> out;
  for (const auto& t : out_transitions(s)) out.push_back(t.label);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::vector<action_set>> composed_automaton::trace_to(state_id s) const {
  if (s >= states_.size()) throw error("unknown composed state");
  std::vector<int> pred(states_.size(), -1);
  std::vector<action_set> via(states_.size(), 0);
  std::vector<bool> seen(states_.size(), false);
  std::vector<state_id> queue{initial()};
  seen[initial()] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    state_id q = queue[head];
    if (q == s) break;
    for (const auto& t : out_transitions(q)) {
      if (seen[t.dst]) continue;
      seen[t.dst] = true;
      pred[t.dst] = static_cast<int>(q);
      via[t.dst] = t.label;
      queue.push_back(t.dst);
    }
  }
  if (!seen[s]) return std::nullopt;
  std::vector<action_set> trace;
  for (state_id q = s; q != initial(); q = static_cast<state_id>(pred[q]))
    trace.push_back(via[q]);
  std::reverse(trace.begin(), trace.end());
  return trace;
}

namespace {

// Shared product exploration. When ca != nullptr the contract automaton
// co-moves on every transition (synchronization over the full alphabet).
composed_automaton compose_impl(const multi_action_automaton& s1,
                                const multi_action_automaton& s2, const sync_set& g,
                                const contract_automaton* ca) {
  if (s1.sigma() != s2.sigma()) throw error("sync_compose: party alphabets differ");
  if (ca && ca->sigma() != s1.sigma())
    throw error("contract automaton alphabet differs from the parties'");

  const action_set gmask = g.mask();
  std::map<composed_state, state_id> seen;
  std::vector<composed_state> order;
  std::vector<composed_transition> transitions;

  composed_state init{s1.initial(), s2.initial(), ca ? static_cast<int>(ca->initial()) : -1};
  seen[init] = 0;
  order.push_back(init);

  auto intern = [&](composed_state cs) {
    auto [it, fresh] = seen.emplace(cs, static_cast<state_id>(order.size()));
    if (fresh) order.push_back(cs);
    return it->second;
  };

  for (std::size_t head = 0; head < order.size(); ++head) {
    const composed_state cur = order[head];
    const state_id src = static_cast<state_id>(head);
    auto emit = [&](action_set label, state_id q1, state_id q2, participation who) {
      composed_state dst{q1, q2, cur.qa};
      if (ca) dst.qa = static_cast<int>(ca->step(static_cast<state_id>(cur.qa), label));
      transitions.push_back({src, label, intern(dst), who});
    };
    for (auto [a, q1p] : s1.next_of(cur.q1))
      if ((a & gmask) == 0) emit(a, q1p, cur.q2, participation::party1_only);
    for (auto [b, q2p] : s2.next_of(cur.q2))
      if ((b & gmask) == 0) emit(b, cur.q1, q2p, participation::party2_only);
    for (auto [a, q1p] : s1.next_of(cur.q1)) {
      if ((a & gmask) == 0) continue;
      for (auto [b, q2p] : s2.next_of(cur.q2))
        if ((a & gmask) == (b & gmask)) emit(a | b, q1p, q2p, participation::both);
    }
  }

  std::vector<std::string> names;
  names.reserve(order.size());
  for (const auto& cs : order) {
    std::string n = "(" + s1.state_name(cs.q1) + "," + s2.state_name(cs.q2) + ")";
    if (ca) n += "_{" + ca->state_name(static_cast<state_id>(cs.qa)) + "}";
    names.push_back(std::move(n));
  }
  return composed_automaton(s1.sigma(), std::move(order), std::move(names),
                            std::move(transitions));
}

}  // namespace

composed_automaton sync_compose(const multi_action_automaton& s1,
                                const multi_action_automaton& s2, const sync_set& g) {
  return compose_impl(s1, s2, g, nullptr);
}

std::vector<state_id> check_well_formed_states(const composed_automaton& composed) {
  std::vector<state_id> deadlocked;
  for (state_id s = 0; s < composed.state_count(); ++s)
    if (composed.out_transitions(s).empty()) deadlocked.push_back(s);
  return deadlocked;
}

std::vector<std::string> check_well_formed(const multi_action_automaton& s1,
                                           const multi_action_automaton& s2, const sync_set& g) {
  auto composed = sync_compose(s1, s2, g);
  std::vector<std::string> out;
  for (state_id s : check_well_formed_states(composed)) out.push_back(composed.state_name(s));
  return out;
}

regulated_system build_regulated_system(const multi_action_automaton& s1,
                                        const multi_action_automaton& s2, const sync_set& g,
                                        const contract_automaton& ca,
                                        const mutex_relation& mutex) {
  auto deadlocked = check_well_formed(s1, s2, g);
  if (!deadlocked.empty())
    throw error("party composition is not well-formed; deadlocked state " + deadlocked.front());
  return regulated_system{s1, s2, ca, g, mutex, compose_impl(s1, s2, g, &ca)};
}

}  // namespace cva
