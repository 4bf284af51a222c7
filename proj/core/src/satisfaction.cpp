#include "cva/satisfaction.hpp"

#include <algorithm>

namespace cva {

bool viable_offer_exists(std::span<const action_set> menu, const offer_query& q,
                         const mutex_relation& mutex) {
  for (action_set a : menu) {
    if (q.required_action >= 0 &&
        contains(a, static_cast<action_id>(q.required_action)) != q.required_present)
      continue;
    action_set topup = q.obliged & ~a;
    if (topup & ~q.gc_mask) continue;  // obligations not satisfiable with local actions
    action_set offered = a | topup;
    if (q.forbidden & offered) continue;
    if (!mutex.label_ok(offered)) continue;
    return true;
  }
  return false;
}

std::string location_to_string(const regulated_system& r, const location& loc) {
  if (loc.k == location::kind::state) return r.behaviour.state_name(loc.state);
  const auto& t = r.behaviour.transitions()[loc.transition];
  std::string who = t.who == participation::party1_only   ? "[1]"
                    : t.who == participation::party2_only ? "[2]"
                                                          : "[1+2]";
  return r.behaviour.state_name(t.src) + " -" + r.sigma().set_to_string(t.label) + who + "-> " +
         r.behaviour.state_name(t.dst);
}

namespace {

// acts(q_p) of the party automaton component at a composed state.
std::vector<action_set> party_menu(const regulated_system& r, state_id composed, party p) {
  return r.party_automaton(p).acts_of(r.party_state(composed, p));
}

}  // namespace

bool sat_perm_single(const regulated_system& r, state_id composed, party p, const clause& perm) {
  if (perm.mod != modality::permission) throw error("sat_perm_single expects a permission");
  if (perm.who == p) return true;  // the subject is never blamed
  if (!r.g.synchronized(perm.lit.action)) return true;  // local actions: unviolable
  const state_id qa = r.contract_state(composed);
  offer_query q;
  q.obliged = r.contract.obliged_set(qa, perm.who);
  q.forbidden = r.contract.forbidden_set(qa, perm.who);
  q.gc_mask = r.g.complement(r.sigma());
  q.required_action = static_cast<int>(perm.lit.action);
  q.required_present = !perm.lit.negated;
  auto menu = party_menu(r, composed, p);
  return viable_offer_exists(menu, q, r.mutex);
}

bool sat_perm_state(const regulated_system& r, state_id composed, party p) {
  const state_id qa = r.contract_state(composed);
  for (const auto& c : r.contract.contract_of(qa)) {
    if (c.mod != modality::permission || c.who != other(p)) continue;
    if (!sat_perm_single(r, composed, p, c)) return false;
  }
  return true;
}

bool sat_obl_transition(const regulated_system& r, std::size_t transition_index, party p) {
  const auto& t = r.behaviour.transitions()[transition_index];
  if (is_async_move_of(t.who, other(p))) return true;  // exemption: the other party moved alone
  const state_id qa = r.contract_state(t.src);
  return r.contract.viable(p, qa, t.label);
}

bool sat_obl_state(const regulated_system& r, state_id composed, party p) {
  const state_id qa = r.contract_state(composed);
  const party pbar = other(p);
  offer_query q;
  q.obliged = r.contract.obliged_set(qa, pbar);
  q.forbidden = r.contract.forbidden_set(qa, pbar);
  if (q.obliged == 0 && q.forbidden == 0) return true;  // nothing to enable
  q.gc_mask = r.g.complement(r.sigma());
  auto menu = party_menu(r, composed, p);
  return viable_offer_exists(menu, q, r.mutex);
}

bool sat(const regulated_system& r, const location& loc, party p) {
  if (loc.k == location::kind::state)
    return sat_perm_state(r, loc.state, p) && sat_obl_state(r, loc.state, p);
  return sat_obl_transition(r, loc.transition, p);  // transitions satisfy permissions
}

namespace {

std::string menu_to_string(const regulated_system& r, const std::vector<action_set>& menu) {
  std::string out = "{";
  for (std::size_t i = 0; i < menu.size(); ++i) {
    if (i) out += ", ";
    out += r.sigma().set_to_string(menu[i]);
  }
  return out + "}";
}

std::string of_to_string(const regulated_system& r, party p, state_id qa) {
  return "O=" + r.sigma().set_to_string(r.contract.obliged_set(qa, p)) +
         ", F=" + r.sigma().set_to_string(r.contract.forbidden_set(qa, p));
}

}  // namespace

std::vector<violation_report> find_violations(const regulated_system& r) {
  std::vector<violation_report> out;
  const auto& beh = r.behaviour;

  for (state_id s = 0; s < beh.state_count(); ++s) {
    const state_id qa = r.contract_state(s);
    auto trace = beh.trace_to(s).value_or(std::vector<action_set>{});
    for (party p : {party::p1, party::p2}) {
      for (const auto& c : r.contract.contract_of(qa)) {
        if (c.mod != modality::permission || c.who != other(p)) continue;
        if (sat_perm_single(r, s, p, c)) continue;
        violation_report v;
        v.who = p;
        v.where = {location::kind::state, s, 0};
        v.violated = c;
        v.reason = "no A in acts(q_" + std::to_string(index_of(p)) + ")=" +
                   menu_to_string(r, r.party_automaton(p).acts_of(r.party_state(s, p))) +
                   " with " + (c.lit.negated ? "absent " : "") + r.sigma().name(c.lit.action) +
                   " and A u A' viable for party " + std::to_string(index_of(c.who)) + " (" +
                   of_to_string(r, c.who, qa) + "), A' in G^c=" +
                   r.sigma().set_to_string(r.g.complement(r.sigma()));
        v.witness_trace = trace;
        out.push_back(std::move(v));
      }
      if (!sat_obl_state(r, s, p)) {
        violation_report v;
        v.who = p;
        v.where = {location::kind::state, s, 0};
        v.reason = "no A in acts(q_" + std::to_string(index_of(p)) + ")=" +
                   menu_to_string(r, r.party_automaton(p).acts_of(r.party_state(s, p))) +
                   " with A u A' viable for party " + std::to_string(index_of(other(p))) + " (" +
                   of_to_string(r, other(p), qa) + "), A' in G^c=" +
                   r.sigma().set_to_string(r.g.complement(r.sigma()));
        v.witness_trace = trace;
        out.push_back(std::move(v));
      }
    }
  }

  for (std::size_t i = 0; i < beh.transitions().size(); ++i) {
    const auto& t = beh.transitions()[i];
    for (party p : {party::p1, party::p2}) {
      if (sat_obl_transition(r, i, p)) continue;
      violation_report v;
      v.who = p;
      v.where = {location::kind::transition, t.src, i};
      v.reason = "label " + r.sigma().set_to_string(t.label) + " is not viable for party " +
                 std::to_string(index_of(p)) + " (" +
                 of_to_string(r, p, r.contract_state(t.src)) + ")";
      v.witness_trace = beh.trace_to(t.src).value_or(std::vector<action_set>{});
      v.witness_trace.push_back(t.label);
      out.push_back(std::move(v));
    }
  }

  std::sort(out.begin(), out.end(), [](const violation_report& a, const violation_report& b) {
    if (a.where != b.where) return a.where < b.where;
    if (a.who != b.who) return a.who < b.who;
    return a.violated < b.violated;
  });
  return out;
}

breach_result breach_incapable(party p, const regulated_system& r) {
  std::optional<violation_report> best;
  for (const auto& v : find_violations(r)) {
    if (v.who != p) continue;
    if (!best || v.witness_trace.size() < best->witness_trace.size()) best = v;
  }
  if (best) return {false, best};
  return {true, std::nullopt};
}

}  // namespace cva
