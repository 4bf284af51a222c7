#include "cva/render.hpp"

#include <sstream>

namespace cva {

namespace {

std::string trace_step(const alphabet& sigma, action_set a) { return sigma.set_to_string(a); }

json trace_to_json(const alphabet& sigma, const std::vector<action_set>& trace) {
  json out = json::array();
  for (action_set a : trace) out.push_back(trace_step(sigma, a));
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

json violation_to_json(const regulated_system& r, const violation_report& v) {
  json loc;
  if (v.where.k == location::kind::state) {
    loc = {{"kind", "state"}, {"state", r.behaviour.state_name(v.where.state)}};
  } else {
    const auto& t = r.behaviour.transitions()[v.where.transition];
    loc = {{"kind", "transition"},
           {"from", r.behaviour.state_name(t.src)},
           {"label", r.sigma().set_to_string(t.label)},
           {"to", r.behaviour.state_name(t.dst)},
           {"participation", t.who == participation::party1_only   ? "party1-only"
                             : t.who == participation::party2_only ? "party2-only"
                                                                   : "both"}};
  }
  return {{"party", index_of(v.who)},
          {"location", loc},
          {"clause", v.violated ? clause_to_string(*v.violated, r.sigma())
                                : std::string("combined-obligations")},
          {"reason", v.reason},
          {"witness_trace", trace_to_json(r.sigma(), v.witness_trace)}};
}

std::string violation_to_text(const regulated_system& r, const violation_report& v) {
  std::ostringstream os;
  os << "party " << index_of(v.who) << " violates "
     << (v.violated ? clause_to_string(*v.violated, r.sigma()) : std::string("its obligations"))
     << " at " << location_to_string(r, v.where) << "\n    reason: " << v.reason
     << "\n    trace:";
  if (v.witness_trace.empty()) os << " (initial state)";
  for (action_set a : v.witness_trace) os << " " << trace_step(r.sigma(), a);
  return os.str();
}

json conflict_to_json(const alphabet& sigma, const conflicting_state& c) {
  return {{"state", c.state},
          {"clauses", {clause_to_string(c.pair.first, sigma),
                       clause_to_string(c.pair.second, sigma)}},
          {"derivation", c.derivation},
          {"trace", trace_to_json(sigma, c.trace)}};
}

std::string conflict_to_text(const alphabet& sigma, const conflicting_state& c) {
  std::ostringstream os;
  os << "state " << c.state << ": " << clause_to_string(c.pair.first, sigma) << " # "
     << clause_to_string(c.pair.second, sigma) << "\n    trace:";
  if (c.trace.empty()) os << " (initial state)";
  for (action_set a : c.trace) os << " " << trace_step(sigma, a);
  os << "\n    derivation:";
  for (const auto& step : c.derivation) os << "\n      " << step;
  return os.str();
}

namespace {

json counterexample_to_json(const oracle_counterexample& cex, const alphabet& sigma) {
  json ctx = json::array();
  for (const auto& c : cex.context) ctx.push_back(clause_to_string(c, sigma));
  json m1 = json::array(), m2 = json::array();
  for (action_set a : cex.menu1) m1.push_back(sigma.set_to_string(a));
  for (action_set a : cex.menu2) m2.push_back(sigma.set_to_string(a));
  return {{"context", ctx},       {"menu1", m1},
          {"menu2", m2},          {"blamed_party", index_of(cex.blamed)},
          {"location", cex.location}, {"detail", cex.detail}};
}

json directed_to_json(const directed_result& d, const alphabet& sigma) {
  json out = {{"holds_party1", d.holds[0]}, {"holds_party2", d.holds[1]}};
  if (d.cex[0]) out["counterexample_party1"] = counterexample_to_json(*d.cex[0], sigma);
  if (d.cex[1]) out["counterexample_party2"] = counterexample_to_json(*d.cex[1], sigma);
  return out;
}

}  // namespace

json verdict_to_json(const strictness_verdict& v, const alphabet& sigma) {
  return {{"relation", to_string(v.relation)},
          {"method",
           v.method == strictness_verdict::method_t::syntactic ? "syntactic" : "semantic"},
          {"forward", directed_to_json(v.forward, sigma)},
          {"backward", directed_to_json(v.backward, sigma)},
          {"evidence", v.evidence},
          {"bounds",
           {{"max_sigma", v.bounds.max_sigma},
            {"max_menu", v.bounds.max_menu},
            {"max_label_clauses", v.bounds.max_label_clauses}}}};
}

json diagnostic_to_json(const diagnostic& d) {
  return {{"severity", d.level == diagnostic::severity::error ? "error" : "warning"},
          {"line", d.line},
          {"col", d.col},
          {"code", d.code},
          {"message", d.message}};
}

namespace {

std::string participation_suffix(participation who) {
  switch (who) {
    case participation::party1_only: return " [1]";
    case participation::party2_only: return " [2]";
    case participation::both: return " [1+2]";
  }
  return "";
}

}  // namespace

std::string dot_parties(const composed_automaton& composed) {
  std::ostringstream os;
  os << "digraph parties {\n  rankdir=LR;\n  node [shape=box, style=rounded];\n";
  os << "  __init [shape=point];\n";
  os << "  __init -> " << quote(composed.state_name(composed.initial())) << ";\n";
  for (state_id s = 0; s < composed.state_count(); ++s)
    os << "  " << quote(composed.state_name(s)) << ";\n";
  for (const auto& t : composed.transitions())
    os << "  " << quote(composed.state_name(t.src)) << " -> " << quote(composed.state_name(t.dst))
       << " [label=" << quote(composed.sigma().set_to_string(t.label) +
                              participation_suffix(t.who))
       << "];\n";
  os << "}\n";
  return os.str();
}

std::string dot_contract(const contract_automaton& ca) {
  std::ostringstream os;
  os << "digraph contract {\n  rankdir=LR;\n  node [shape=box, style=rounded];\n";
  os << "  __init [shape=point];\n";
  os << "  __init -> " << quote(ca.state_name(ca.initial())) << ";\n";
  for (state_id q = 0; q < ca.state_count(); ++q) {
    std::string label = ca.state_name(q);
    const auto& clauses = ca.contract_of(q);
    if (!clauses.empty()) {
      label += "\\n";
      for (std::size_t i = 0; i < clauses.size(); ++i)
        label += (i ? ", " : "") + clause_to_string(clauses[i], ca.sigma());
    }
    os << "  " << quote(ca.state_name(q)) << " [label=" << quote(label) << "];\n";
  }
  for (state_id q = 0; q < ca.state_count(); ++q)
    for (const auto& arm : ca.arms_of(q))
      os << "  " << quote(ca.state_name(q)) << " -> " << quote(ca.state_name(arm.target))
         << " [label=" << quote(arm.when ? arm.when->to_string(ca.sigma()) : std::string("else"))
         << "];\n";
  os << "}\n";
  return os.str();
}

std::string dot_regulated(const regulated_system& r, const conflict_relation* conflicts) {
  std::ostringstream os;
  os << "digraph regulated {\n  rankdir=LR;\n  node [shape=box, style=rounded];\n";
  os << "  __init [shape=point];\n";
  os << "  __init -> " << quote(r.behaviour.state_name(r.behaviour.initial())) << ";\n";
  for (state_id s = 0; s < r.behaviour.state_count(); ++s) {
    const auto& clauses = r.contract.contract_of(r.contract_state(s));
    bool conflicted = false;
    if (conflicts)
      for (std::size_t i = 0; i < clauses.size() && !conflicted; ++i)
        for (std::size_t j = i + 1; j < clauses.size() && !conflicted; ++j)
          conflicted = conflicts->contains(clauses[i], clauses[j]);
    std::string label = r.behaviour.state_name(s);
    if (!clauses.empty()) {
      label += "\\n";
      for (std::size_t i = 0; i < clauses.size(); ++i)
        label += (i ? ", " : "") + clause_to_string(clauses[i], r.sigma());
    }
    os << "  " << quote(r.behaviour.state_name(s)) << " [label=" << quote(label);
    if (conflicted) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& t : r.behaviour.transitions())
    os << "  " << quote(r.behaviour.state_name(t.src)) << " -> "
       << quote(r.behaviour.state_name(t.dst))
       << " [label=" << quote(r.sigma().set_to_string(t.label) + participation_suffix(t.who))
       << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace cva
