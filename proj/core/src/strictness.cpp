#include "cva/strictness.hpp"

#include "cva/satisfaction.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cva {

std::string to_string(strict_rel r) {
  switch (r) {
    case strict_rel::stricter_for_party1: return "stricter-for-party-1";
    case strict_rel::stricter_for_party2: return "stricter-for-party-2";
    case strict_rel::stricter_global: return "stricter-global";
    case strict_rel::equivalent: return "equivalent";
    case strict_rel::incomparable: return "incomparable";
  }
  return "?";
}

std::optional<iso_witness> structurally_isomorphic(const contract_automaton& a1,
                                                   const contract_automaton& a2) {
  if (a1.sigma() != a2.sigma()) throw error("structurally_isomorphic: alphabets differ");
  if (a1.sigma().size() > 16) throw error("alphabet too large to enumerate 2^Sigma");
  const action_set uni = a1.sigma().universe();

  std::vector<int> fwd(a1.state_count(), -1), back(a2.state_count(), -1);
  std::vector<state_id> order{a1.initial()};
  fwd[a1.initial()] = static_cast<int>(a2.initial());
  back[a2.initial()] = static_cast<int>(a1.initial());
  for (std::size_t head = 0; head < order.size(); ++head) {
    state_id q1 = order[head];
    state_id q2 = static_cast<state_id>(fwd[q1]);
    for (action_set a = 0; a <= uni; ++a) {
      state_id d1 = a1.step(q1, a);
      state_id d2 = a2.step(q2, a);
      if (fwd[d1] == -1 && back[d2] == -1) {
        fwd[d1] = static_cast<int>(d2);
        back[d2] = static_cast<int>(d1);
        order.push_back(d1);
      } else if (fwd[d1] != static_cast<int>(d2)) {
        return std::nullopt;  // transition functions disagree under the pairing
      }
    }
  }

  iso_witness w;
  w.reachable1 = order;
  w.map1to2.assign(a1.state_count(), 0);
  for (state_id q : order) w.map1to2[q] = static_cast<state_id>(fwd[q]);
  return w;
}

bool clause_replace_related(const contract_automaton& a1, const contract_automaton& a2,
                            const clause& c, const clause& cp) {
  auto iso = structurally_isomorphic(a1, a2);
  if (!iso) return false;
  for (state_id q : iso->reachable1) {
    const auto& l1 = a1.contract_of(q);
    const auto& l2 = a2.contract_of(iso->map1to2[q]);
    if (l1 == l2) continue;
    if (std::find(l1.begin(), l1.end(), c) == l1.end()) return false;
    std::vector<clause> swapped;
    for (const auto& x : l1)
      if (!(x == c)) swapped.push_back(x);
    swapped.push_back(cp);
    std::sort(swapped.begin(), swapped.end());
    swapped.erase(std::unique(swapped.begin(), swapped.end()), swapped.end());
    if (swapped != l2) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Syntactic relation: BFS over the finite clause universe along theorem rules.
// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<clause, std::string>> rule_successors(const clause& x,
                                                            const alphabet& sigma,
                                                            const std::optional<sync_set>& g,
                                                            const mutex_relation& mutex) {
  std::vector<std::pair<clause, std::string>> out;
  auto name = [&](const clause& c) { return clause_to_string(c, sigma); };

  if (x.mod == modality::permission) {
    clause o{modality::obligation, x.who, x.lit};
    out.emplace_back(o, "obligation-over-permission: " + name(x) + " <= " + name(o));
    if (g && g->synchronized(x.lit.action)) {
      clause oc{modality::obligation, other(x.who), x.lit};
      out.emplace_back(oc, "cross-party-obligation[" + sigma.name(x.lit.action) +
                               " in G]: " + name(x) + " <= " + name(oc));
    }
    if (x.lit.negated) {
      for (action_id b = 0; b < sigma.size(); ++b)
        if (mutex.mutually_exclusive(x.lit.action, b)) {
          clause pb{modality::permission, x.who, {b, false}};
          out.emplace_back(pb, "mutex-absence-permission[" + sigma.name(x.lit.action) + "#" +
                                   sigma.name(b) + "]: " + name(x) + " <= " + name(pb));
        }
    }
  } else {
    if (x.lit.negated) {
      for (action_id b = 0; b < sigma.size(); ++b)
        if (mutex.mutually_exclusive(x.lit.action, b)) {
          clause ob{modality::obligation, x.who, {b, false}};
          out.emplace_back(ob, "mutex-absence-obligation[" + sigma.name(x.lit.action) + "#" +
                                   sigma.name(b) + "]: " + name(x) + " <= " + name(ob));
          // The cross-party form needs the avoided action synchronized;
          // without that the avoiding party can perform it asynchronously
          // and the relation fails.
          if (g && g->synchronized(x.lit.action)) {
            clause oa{modality::obligation, other(x.who), {b, false}};
            out.emplace_back(oa, "cross-party-mutex-obligation[" + sigma.name(x.lit.action) +
                                     "#" + sigma.name(b) + ", " + sigma.name(x.lit.action) +
                                     " in G]: " + name(x) + " <= " + name(oa));
          }
        }
    }
  }
  return out;
}

}  // namespace

std::optional<std::vector<std::string>> clause_stricter_syntactic(
    const clause& c, const clause& cp, const alphabet& sigma, const std::optional<sync_set>& g,
    const mutex_relation& mutex) {
  if (c == cp) return std::vector<std::string>{"reflexivity"};

  std::map<clause, std::pair<clause, std::string>> pred;
  std::vector<clause> queue{c};
  pred.emplace(c, std::make_pair(c, std::string{}));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    clause cur = queue[head];
    for (auto& [next, rule] : rule_successors(cur, sigma, g, mutex)) {
      if (pred.count(next)) continue;
      pred.emplace(next, std::make_pair(cur, rule));
      if (next == cp) {
        std::vector<std::string> chain;
        for (clause at = cp; !(at == c); at = pred.at(at).first)
          chain.push_back(pred.at(at).second);
        std::reverse(chain.begin(), chain.end());
        if (chain.size() > 1) chain.emplace_back("transitivity");
        return chain;
      }
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Semantic oracle.
// ---------------------------------------------------------------------------

namespace {

struct live_perm {
  party subject = party::p1;
  action_id act = 0;
  bool positive = true;

  friend auto operator<=>(const live_perm&, const live_perm&) = default;
};

// What a clause set means for satisfaction at one state under fixed G:
// obligation masks per party plus the violable (synchronized) permissions.
struct side_sem {
  action_set obliged[2] = {0, 0};
  action_set forbidden[2] = {0, 0};
  std::vector<live_perm> perms;

  friend auto operator<=>(const side_sem&, const side_sem&) = default;
};

side_sem make_sem(const std::vector<clause>& label, const sync_set& g) {
  side_sem s;
  for (const auto& c : label) {
    const unsigned w = static_cast<unsigned>(c.who);
    if (c.mod == modality::obligation) {
      if (c.lit.negated)
        s.forbidden[w] = with(s.forbidden[w], c.lit.action);
      else
        s.obliged[w] = with(s.obliged[w], c.lit.action);
    } else if (g.synchronized(c.lit.action)) {
      s.perms.push_back({c.who, c.lit.action, !c.lit.negated});
    }
  }
  std::sort(s.perms.begin(), s.perms.end());
  s.perms.erase(std::unique(s.perms.begin(), s.perms.end()), s.perms.end());
  return s;
}

struct move {
  action_set label = 0;
  participation who = participation::both;

  friend auto operator<=>(const move&, const move&) = default;
};

bool state_sat(const side_sem& s, std::span<const action_set> menu_r, party r, action_set gc,
               const mutex_relation& mx) {
  const party rb = other(r);
  const unsigned rbi = static_cast<unsigned>(rb);
  if (s.obliged[rbi] | s.forbidden[rbi]) {
    offer_query q{s.obliged[rbi], s.forbidden[rbi], gc, -1, true};
    if (!viable_offer_exists(menu_r, q, mx)) return false;
  }
  for (const auto& p : s.perms) {
    if (p.subject != rb) continue;
    const unsigned si = static_cast<unsigned>(p.subject);
    offer_query q{s.obliged[si], s.forbidden[si], gc, static_cast<int>(p.act), p.positive};
    if (!viable_offer_exists(menu_r, q, mx)) return false;
  }
  return true;
}

bool trans_sat(const side_sem& s, const move& m, party r) {
  if (is_async_move_of(m.who, other(r))) return true;
  const unsigned ri = static_cast<unsigned>(r);
  return (s.obliged[ri] & ~m.label) == 0 && (s.forbidden[ri] & m.label) == 0;
}

bool party_sat_everywhere(const side_sem& s, party r, std::span<const action_set> menu_r,
                          std::span<const move> moves, action_set gc, const mutex_relation& mx) {
  for (const auto& m : moves)
    if (!trans_sat(s, m, r)) return false;
  return state_sat(s, menu_r, r, gc, mx);
}

// Derived transitions of the one-state world spanned by two menus. Joint
// moves whose union label would violate mutual exclusion cannot happen and
// are dropped. Returns false if some menu label yields no move at all.
bool derive_moves(std::span<const action_set> m1, std::span<const action_set> m2,
                  action_set gmask, const mutex_relation& mx, std::vector<move>& out) {
  out.clear();
  std::uint32_t ok1 = 0, ok2 = 0;
  for (std::size_t i = 0; i < m1.size(); ++i)
    if ((m1[i] & gmask) == 0) {
      out.push_back({m1[i], participation::party1_only});
      ok1 |= 1u << i;
    }
  for (std::size_t j = 0; j < m2.size(); ++j)
    if ((m2[j] & gmask) == 0) {
      out.push_back({m2[j], participation::party2_only});
      ok2 |= 1u << j;
    }
  for (std::size_t i = 0; i < m1.size(); ++i) {
    const action_set gi = m1[i] & gmask;
    if (gi == 0) continue;
    for (std::size_t j = 0; j < m2.size(); ++j) {
      if ((m2[j] & gmask) != gi) continue;
      const action_set label = m1[i] | m2[j];
      if (!mx.label_ok(label)) continue;
      out.push_back({label, participation::both});
      ok1 |= 1u << i;
      ok2 |= 1u << j;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return ok1 == (1u << m1.size()) - 1u && ok2 == (1u << m2.size()) - 1u;
}

struct world {
  action_set gmask = 0, gc = 0;
  std::vector<action_set> labels;                 // mutex-valid subsets of Sigma
  std::vector<std::vector<action_set>> menus;     // non-empty, |menu| <= max_menu
};

world build_world(const alphabet& sigma, const sync_set& g, const mutex_relation& mx,
                  const oracle_bounds& bounds) {
  world w;
  w.gmask = g.mask();
  w.gc = g.complement(sigma);
  const action_set uni = sigma.universe();
  for (action_set l = 0; l <= uni; ++l)
    if (mx.label_ok(l)) w.labels.push_back(l);

  const std::size_t n = w.labels.size();
  if (n > 20) throw error("label space too large for menu enumeration");
  for (std::uint32_t pick = 1; pick < (1u << n); ++pick) {
    if (static_cast<std::size_t>(popcount(pick)) > bounds.max_menu) continue;
    std::vector<action_set> menu;
    for (std::size_t i = 0; i < n; ++i)
      if ((pick >> i) & 1u) menu.push_back(w.labels[i]);
    w.menus.push_back(std::move(menu));
  }
  std::sort(w.menus.begin(), w.menus.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return w;
}

struct sem_job {
  side_sem weak, strict;
  std::vector<clause> ctx;
};

std::pair<std::string, std::string> describe_failure(const side_sem& s, party r,
                                                     std::span<const action_set> menu_r,
                                                     std::span<const move> moves, action_set gc,
                                                     const mutex_relation& mx,
                                                     const alphabet& sigma) {
  for (const auto& m : moves)
    if (!trans_sat(s, m, r)) {
      std::string who = m.who == participation::party1_only   ? "[1]"
                        : m.who == participation::party2_only ? "[2]"
                                                              : "[1+2]";
      return {"transition " + sigma.set_to_string(m.label) + " " + who,
              "transition " + sigma.set_to_string(m.label) + " " + who +
                  " is not viable for party " + std::to_string(index_of(r))};
    }
  (void)menu_r;
  (void)gc;
  (void)mx;
  return {"state", "state: party " + std::to_string(index_of(r)) +
                       " has no viable offer for the other party's clauses"};
}

directed_result run_directed(const alphabet& sigma, const sync_set& g, const mutex_relation& mx,
                             const oracle_bounds& bounds, std::vector<sem_job> jobs) {
  // Deduplicate semantically identical jobs; drop jobs whose two sides mean
  // the same thing (the implication is then trivial).
  {
    std::set<std::pair<side_sem, side_sem>> seen;
    std::vector<sem_job> unique_jobs;
    for (auto& j : jobs) {
      if (j.weak == j.strict) continue;
      if (seen.emplace(j.weak, j.strict).second) unique_jobs.push_back(std::move(j));
    }
    jobs = std::move(unique_jobs);
  }

  directed_result res;
  if (jobs.empty()) return res;

  const world w = build_world(sigma, g, mx, bounds);
  std::vector<move> moves;
  for (const auto& m1 : w.menus) {
    for (const auto& m2 : w.menus) {
      if (!derive_moves(m1, m2, w.gmask, mx, moves)) continue;
      for (const auto& job : jobs) {
        bool conc1 = res.holds[0] ? party_sat_everywhere(job.weak, party::p1, m1, moves, w.gc, mx)
                                  : true;
        bool conc2 = res.holds[1] ? party_sat_everywhere(job.weak, party::p2, m2, moves, w.gc, mx)
                                  : true;
        if (conc1 && conc2) continue;
        if (!party_sat_everywhere(job.strict, party::p1, m1, moves, w.gc, mx)) continue;
        if (!party_sat_everywhere(job.strict, party::p2, m2, moves, w.gc, mx)) continue;
        for (party p : {party::p1, party::p2}) {
          const unsigned pi = static_cast<unsigned>(p);
          const bool conc = pi == 0 ? conc1 : conc2;
          if (conc || !res.holds[pi]) continue;
          res.holds[pi] = false;
          oracle_counterexample cex;
          cex.context = job.ctx;
          cex.menu1 = m1;
          cex.menu2 = m2;
          cex.blamed = p;
          auto [loc, detail] = describe_failure(
              job.weak, p,
              pi == 0 ? std::span<const action_set>(m1) : std::span<const action_set>(m2), moves,
              w.gc, mx, sigma);
          cex.location = std::move(loc);
          cex.detail = std::move(detail);
          res.cex[pi] = std::move(cex);
        }
        if (!res.holds[0] && !res.holds[1]) return res;
      }
    }
  }
  return res;
}

std::vector<clause> clause_pool(const alphabet& sigma) {
  std::vector<clause> pool;
  for (party p : {party::p1, party::p2})
    for (modality m : {modality::obligation, modality::permission})
      for (action_id a = 0; a < sigma.size(); ++a)
        for (bool neg : {false, true}) pool.push_back({m, p, {a, neg}});
  return pool;
}

void contexts_of_size(const std::vector<clause>& pool, std::size_t k, std::size_t first,
                      std::vector<clause>& cur, std::vector<std::vector<clause>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = first; i < pool.size(); ++i) {
    cur.push_back(pool[i]);
    contexts_of_size(pool, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

strictness_verdict clause_stricter_semantic(const clause& c, const clause& cp,
                                            const alphabet& sigma, const sync_set& g,
                                            const mutex_relation& mutex,
                                            const oracle_bounds& bounds) {
  if (sigma.size() > bounds.max_sigma)
    throw error("alphabet size " + std::to_string(sigma.size()) +
                " exceeds the oracle bound max_sigma=" + std::to_string(bounds.max_sigma) +
                "; refusing rather than approximating");
  if (c.lit.action >= sigma.size() || cp.lit.action >= sigma.size())
    throw error("clause action outside the alphabet");

  strictness_verdict v;
  v.method = strictness_verdict::method_t::semantic;
  v.bounds = bounds;

  if (c == cp) {
    v.relation = strict_rel::equivalent;
    v.evidence.emplace_back("reflexivity");
    return v;
  }

  // The context pool is the whole clause universe: with set-valued labels a
  // replaced state may already carry the replacing clause, and identical
  // context spaces across calls make the relation transitive by construction.
  std::vector<clause> pool = clause_pool(sigma);

  std::vector<std::vector<clause>> contexts;
  const std::size_t max_ctx =
      bounds.max_label_clauses == 0 ? 0 : bounds.max_label_clauses - 1;
  for (std::size_t k = 0; k <= max_ctx; ++k) {
    std::vector<clause> cur;
    contexts_of_size(pool, k, 0, cur, contexts);
  }

  auto jobs_for = [&](const clause& weak, const clause& strict) {
    std::vector<sem_job> jobs;
    jobs.reserve(contexts.size());
    for (const auto& ctx : contexts) {
      std::vector<clause> wl = ctx, sl = ctx;
      wl.push_back(weak);
      sl.push_back(strict);
      jobs.push_back({make_sem(wl, g), make_sem(sl, g), ctx});
    }
    return jobs;
  };

  v.forward = run_directed(sigma, g, mutex, bounds, jobs_for(c, cp));
  v.backward = run_directed(sigma, g, mutex, bounds, jobs_for(cp, c));

  if (v.forward.holds_global() && v.backward.holds_global())
    v.relation = strict_rel::equivalent;
  else if (v.forward.holds_global())
    v.relation = strict_rel::stricter_global;
  else
    v.relation = strict_rel::incomparable;
  for (unsigned pi = 0; pi < 2; ++pi)
    if (!v.forward.holds_global() && v.forward.holds[pi])
      v.evidence.push_back("forward holds for party " + std::to_string(pi + 1) + " only");
  if (!v.forward.holds_global() && v.backward.holds_global())
    v.evidence.emplace_back("note: the reverse direction holds globally");
  return v;
}

configuration_check check_configuration(const std::vector<clause>& weak_label,
                                        const std::vector<clause>& strict_label,
                                        const std::vector<action_set>& menu1,
                                        const std::vector<action_set>& menu2,
                                        const alphabet& sigma, const sync_set& g,
                                        const mutex_relation& mutex) {
  configuration_check out;
  if (menu1.empty() || menu2.empty()) {
    out.valid = false;
    out.note = "menus must be non-empty";
    return out;
  }
  for (const auto& menu : {menu1, menu2})
    for (action_set l : menu)
      if ((l & ~sigma.universe()) || !mutex.label_ok(l)) {
        out.valid = false;
        out.note = "menu label invalid: " + sigma.set_to_string(l);
        return out;
      }
  std::vector<move> moves;
  if (!derive_moves(menu1, menu2, g.mask(), mutex, moves)) {
    out.valid = false;
    out.note = "a menu label yields no derived transition";
    return out;
  }
  const action_set gc = g.complement(sigma);
  const side_sem weak = make_sem(weak_label, g);
  const side_sem strict = make_sem(strict_label, g);
  out.premise = party_sat_everywhere(strict, party::p1, menu1, moves, gc, mutex) &&
                party_sat_everywhere(strict, party::p2, menu2, moves, gc, mutex);
  out.conclusion[0] = party_sat_everywhere(weak, party::p1, menu1, moves, gc, mutex);
  out.conclusion[1] = party_sat_everywhere(weak, party::p2, menu2, moves, gc, mutex);
  return out;
}

strictness_verdict ca_stricter(const contract_automaton& a1, const contract_automaton& a2,
                               const sync_set& g, const mutex_relation& mutex,
                               const oracle_bounds& bounds, std::optional<party> focus) {
  auto iso = structurally_isomorphic(a1, a2);
  if (!iso)
    throw error(
        "contract automata are not structurally isomorphic; strictness between "
        "non-isomorphic automata is not decided");
  if (a1.sigma().size() > bounds.max_sigma)
    throw error("alphabet size exceeds the oracle bound; refusing rather than approximating");

  strictness_verdict v;
  v.method = strictness_verdict::method_t::semantic;
  v.bounds = bounds;

  auto subset = [](const std::vector<clause>& a, const std::vector<clause>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  bool sub_fwd = true, sub_bwd = true;
  for (state_id q : iso->reachable1) {
    const auto& l1 = a1.contract_of(q);
    const auto& l2 = a2.contract_of(iso->map1to2[q]);
    sub_fwd = sub_fwd && subset(l1, l2);
    sub_bwd = sub_bwd && subset(l2, l1);
  }

  auto run_dir = [&](bool second_is_strict) {
    std::vector<sem_job> jobs;
    for (state_id q : iso->reachable1) {
      const auto& l1 = a1.contract_of(q);
      const auto& l2 = a2.contract_of(iso->map1to2[q]);
      sem_job job;
      job.weak = make_sem(second_is_strict ? l1 : l2, g);
      job.strict = make_sem(second_is_strict ? l2 : l1, g);
      job.ctx = second_is_strict ? l1 : l2;  // report the weaker state label
      jobs.push_back(std::move(job));
    }
    return run_directed(a1.sigma(), g, mutex, bounds, std::move(jobs));
  };

  if (sub_fwd)
    v.evidence.emplace_back("forward: monotonic labelling (contract1(q) subset of contract2(q))");
  v.forward = sub_fwd ? directed_result{} : run_dir(true);
  if (sub_bwd)
    v.evidence.emplace_back("backward: monotonic labelling (contract2(q) subset of contract1(q))");
  v.backward = sub_bwd ? directed_result{} : run_dir(false);

  const unsigned f = focus ? static_cast<unsigned>(*focus) : 0;
  if (v.forward.holds_global() && v.backward.holds_global())
    v.relation = strict_rel::equivalent;
  else if (v.forward.holds_global())
    v.relation = strict_rel::stricter_global;
  else if (focus && v.forward.holds[f])
    v.relation = f == 0 ? strict_rel::stricter_for_party1 : strict_rel::stricter_for_party2;
  else
    v.relation = strict_rel::incomparable;
  return v;
}

}  // namespace cva
