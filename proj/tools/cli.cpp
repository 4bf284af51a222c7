#include "cli.hpp"

#include "cva/render.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cva::cli {

namespace {

constexpr int exit_clean = 0;
constexpr int exit_findings = 1;
constexpr int exit_usage = 2;

bool color_enabled() {
  const char* v = std::getenv("CVA_COLOR");
  return v && std::string(v) == "1";
}

std::string red(const std::string& s) { return color_enabled() ? "\033[31m" + s + "\033[0m" : s; }
std::string green(const std::string& s) {
  return color_enabled() ? "\033[32m" + s + "\033[0m" : s;
}

std::optional<std::string> read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "cannot open '" << path << "'\n";
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse and report diagnostics; nullopt when the file has errors.
std::optional<system_file> load_system(const std::string& path, bool as_json, std::ostream& out,
                                       std::ostream& err) {
  auto text = read_file(path, err);
  if (!text) return std::nullopt;
  auto result = parse_system(*text);
  if (!result.ok()) {
    if (as_json) {
      json diags = json::array();
      for (const auto& d : result.diagnostics) diags.push_back(diagnostic_to_json(d));
      out << json{{"ok", false}, {"diagnostics", diags}}.dump(2) << "\n";
    } else {
      for (const auto& d : result.diagnostics) err << path << ":" << to_string(d) << "\n";
    }
    return std::nullopt;
  }
  for (const auto& d : result.diagnostics)
    if (!as_json) err << path << ":" << to_string(d) << "\n";
  return std::move(result.file);
}

action_set parse_step(const std::string& step, const alphabet& sigma) {
  std::string s = step;
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw error("trace step must look like {a,b}: '" + step + "'");
  s = s.substr(1, s.size() - 2);
  action_set out = 0;
  std::string name;
  std::istringstream ss(s);
  while (std::getline(ss, name, ',')) {
    name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
    if (name.empty()) continue;
    out = with(out, sigma.id(name));
  }
  return out;
}

std::vector<action_set> parse_trace(const std::string& trace, const alphabet& sigma) {
  std::vector<action_set> out;
  if (trace.empty()) return out;
  std::istringstream ss(trace);
  std::string step;
  while (std::getline(ss, step, ';')) {
    step.erase(0, step.find_first_not_of(" \t"));
    step.erase(step.find_last_not_of(" \t") + 1);
    if (step.empty()) continue;
    out.push_back(parse_step(step, sigma));
  }
  return out;
}

// --------------------------------------------------------------------------

struct validate_opts {
  std::string file;
  bool json_out = false;
  bool strict_totality = false;
  std::size_t max_sigma = 12;
};

int cmd_validate(const validate_opts& o, std::ostream& out, std::ostream& err) {
  auto text = read_file(o.file, err);
  if (!text) return exit_usage;
  auto result = parse_system(*text);
  std::vector<diagnostic> diags = result.diagnostics;

  if (result.file) {
    const auto& f = *result.file;
    for (const auto& c : f.contracts) {
      auto report = validate_ca(c.automaton, o.strict_totality, o.max_sigma);
      for (const auto& i : report.issues)
        diags.push_back({i.level == ca_issue::severity::error ? diagnostic::severity::error
                                                              : diagnostic::severity::warning,
                         0, 0, "V001", "contract " + c.name +
                             (i.state.empty() ? "" : " state " + i.state) + ": " + i.message});
    }
    auto deadlocked = check_well_formed(f.parties[0].automaton, f.parties[1].automaton, f.g);
    for (const auto& s : deadlocked)
      diags.push_back({diagnostic::severity::error, 0, 0, "V002",
                       "party composition deadlocks in state " + s});
    auto composed = sync_compose(f.parties[0].automaton, f.parties[1].automaton, f.g);
    for (state_id s = 0; s < composed.state_count(); ++s)
      for (const auto& t : composed.out_transitions(s))
        if (!f.mutex.label_ok(t.label)) {
          diags.push_back({diagnostic::severity::warning, 0, 0, "V003",
                           "composed transition from " + composed.state_name(s) + " with label " +
                               f.sigma.set_to_string(t.label) +
                               " combines mutually exclusive asynchronous actions"});
        }
  }

  bool ok = result.file.has_value();
  for (const auto& d : diags) ok = ok && d.level != diagnostic::severity::error;

  if (o.json_out) {
    json jd = json::array();
    for (const auto& d : diags) jd.push_back(diagnostic_to_json(d));
    out << json{{"ok", ok}, {"diagnostics", jd}}.dump(2) << "\n";
  } else {
    for (const auto& d : diags) out << o.file << ":" << to_string(d) << "\n";
    out << (ok ? green("ok") : red("invalid")) << "\n";
  }
  return ok ? exit_clean : exit_findings;
}

// --------------------------------------------------------------------------

struct check_opts {
  std::string file;
  std::string party = "both";
  bool json_out = false;
};

int cmd_check(const check_opts& o, std::ostream& out, std::ostream& err) {
  auto f = load_system(o.file, o.json_out, out, err);
  if (!f) return exit_usage;
  regulated_system r = build_regulated_system(f->parties[0].automaton, f->parties[1].automaton,
                                              f->g, f->effective_contract(), f->mutex);
  auto violations = find_violations(r);

  std::vector<party> requested;
  if (o.party == "1")
    requested = {party::p1};
  else if (o.party == "2")
    requested = {party::p2};
  else
    requested = {party::p1, party::p2};

  bool incapable = true;
  std::vector<violation_report> shown;
  for (const auto& v : violations)
    for (party p : requested)
      if (v.who == p) {
        incapable = false;
        shown.push_back(v);
      }

  if (o.json_out) {
    json jv = json::array();
    for (const auto& v : shown) jv.push_back(violation_to_json(r, v));
    json bi;
    for (party p : requested)
      bi["party" + std::to_string(index_of(p))] = breach_incapable(p, r).incapable;
    out << json{{"breach_incapable", bi}, {"violations", jv}}.dump(2) << "\n";
  } else {
    for (const auto& v : shown) out << red("violation: ") << violation_to_text(r, v) << "\n";
    out << (incapable ? green("breach-incapable") : red("breach possible")) << " (party "
        << o.party << ")\n";
  }
  return incapable ? exit_clean : exit_findings;
}

// --------------------------------------------------------------------------

struct conflicts_opts {
  std::string file;
  std::string ca;
  std::vector<std::string> conjoin;
  bool semantic = false;
  bool json_out = false;
};

int cmd_conflicts(const conflicts_opts& o, std::ostream& out, std::ostream& err) {
  auto f = load_system(o.file, o.json_out, out, err);
  if (!f) return exit_usage;
  auto rel = conflict_closure(f->sigma, f->g, f->mutex,
                              o.semantic ? strictness_source::semantic
                                         : strictness_source::syntactic);

  std::vector<conflicting_state> found;
  std::string target;
  if (!o.ca.empty()) {
    const auto* c = f->find_contract(o.ca);
    if (!c) {
      err << "unknown contract '" << o.ca << "'\n";
      return exit_usage;
    }
    target = "contract " + o.ca;
    found = find_conflicting_states(c->automaton, rel);
  } else if (o.conjoin.size() == 2) {
    const auto* a = f->find_contract(o.conjoin[0]);
    const auto* b = f->find_contract(o.conjoin[1]);
    if (!a || !b) {
      err << "unknown contract in --conjoin\n";
      return exit_usage;
    }
    target = "conjoined " + o.conjoin[0] + " (x) " + o.conjoin[1];
    found = find_conflicting_states(ca_conjoin(a->automaton, b->automaton), rel);
  } else {
    target = "regulated system";
    regulated_system r = build_regulated_system(f->parties[0].automaton, f->parties[1].automaton,
                                                f->g, f->effective_contract(), f->mutex);
    found = find_conflicting_states(r, rel);
  }

  if (o.json_out) {
    json jc = json::array();
    for (const auto& c : found) jc.push_back(conflict_to_json(f->sigma, c));
    out << json{{"target", target}, {"conflicts", jc}}.dump(2) << "\n";
  } else {
    out << "target: " << target << "\n";
    for (const auto& c : found) out << red("conflict: ") << conflict_to_text(f->sigma, c) << "\n";
    out << (found.empty() ? green("no conflicts") : red(std::to_string(found.size()) +
                                                        " conflicting state(s)"))
        << "\n";
  }
  return found.empty() ? exit_clean : exit_findings;
}

// --------------------------------------------------------------------------

struct stricter_opts {
  std::string c1, c2;
  std::vector<std::string> sigma_names;
  std::vector<std::string> sync_names;
  bool sync_given = false;
  std::vector<std::string> mutex_pairs;
  bool semantic = false;
  bool json_out = false;
  std::size_t max_sigma = 3, max_menu = 4, max_clauses = 3;
};

std::vector<std::string> actions_in_clause_text(const std::string& text) {
  // the identifier inside (...), stripped of '!'
  std::vector<std::string> out;
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close <= open) return out;
  std::string inner = text.substr(open + 1, close - open - 1);
  std::string name;
  for (char c : inner)
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') name += c;
  if (!name.empty()) out.push_back(name);
  return out;
}

int cmd_stricter(const stricter_opts& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names = o.sigma_names;
  if (names.empty()) {
    for (const auto& text : {o.c1, o.c2})
      for (const auto& n : actions_in_clause_text(text))
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  }
  // "--sync none" pins the empty synchronization set.
  std::vector<std::string> sync_names = o.sync_names;
  std::erase_if(sync_names, [](const std::string& s) { return s.empty() || s == "none"; });
  if (names.empty()) {
    err << "could not infer an alphabet; pass --sigma\n";
    return exit_usage;
  }
  alphabet sigma(names);
  clause c1 = parse_clause(o.c1, sigma);
  clause c2 = parse_clause(o.c2, sigma);

  std::vector<std::pair<action_id, action_id>> mpairs;
  for (const auto& mp : o.mutex_pairs) {
    auto hash = mp.find('#');
    if (hash == std::string::npos) {
      err << "mutex pair must look like a#b: '" << mp << "'\n";
      return exit_usage;
    }
    mpairs.emplace_back(sigma.id(mp.substr(0, hash)), sigma.id(mp.substr(hash + 1)));
  }
  mutex_relation mutex(sigma, mpairs);

  oracle_bounds bounds{o.max_sigma, o.max_menu, o.max_clauses};

  json jout;
  jout["c1"] = clause_to_string(c1, sigma);
  jout["c2"] = clause_to_string(c2, sigma);
  jout["sigma"] = names;

  if (!o.semantic) {
    std::optional<sync_set> g;
    if (o.sync_given) g = sync_set(sigma, sigma.set_from_names(sync_names));
    auto chain = clause_stricter_syntactic(c1, c2, sigma, g, mutex);
    if (o.json_out) {
      jout["method"] = "syntactic";
      jout["derivable"] = chain.has_value();
      if (chain) jout["derivation"] = *chain;
      out << jout.dump(2) << "\n";
    } else {
      if (chain) {
        out << green("stricter") << ": " << clause_to_string(c2, sigma) << " is stricter than "
            << clause_to_string(c1, sigma) << "\n";
        for (const auto& step : *chain) out << "  " << step << "\n";
      } else {
        out << "not derivable syntactically (not a disproof; try --semantic)\n";
      }
    }
    return exit_clean;
  }

  if (o.sync_given) {
    sync_set g(sigma, sigma.set_from_names(sync_names));
    auto v = clause_stricter_semantic(c1, c2, sigma, g, mutex, bounds);
    if (o.json_out) {
      jout["sync"] = sync_names;
      jout["verdict"] = verdict_to_json(v, sigma);
      out << jout.dump(2) << "\n";
    } else {
      out << to_string(v.relation) << " (semantic, sync " << sigma.set_to_string(g.mask())
          << ")\n";
      for (unsigned pi = 0; pi < 2; ++pi)
        if (v.forward.cex[pi])
          out << "  counterexample (party " << pi + 1 << "): menus "
              << "1:" << [&] {
                   std::string s;
                   for (auto m : v.forward.cex[pi]->menu1) s += sigma.set_to_string(m);
                   return s;
                 }()
              << " 2:" << [&] {
                   std::string s;
                   for (auto m : v.forward.cex[pi]->menu2) s += sigma.set_to_string(m);
                   return s;
                 }()
              << " -- " << v.forward.cex[pi]->detail << "\n";
    }
    return exit_clean;
  }

  // No sync given: sweep every G and aggregate. The claim holds only if it
  // holds at every synchronization regime.
  directed_result fwd, bwd;
  json per_g = json::array();
  std::string first_fail_g;
  for (action_set gm = 0; gm <= sigma.universe(); ++gm) {
    sync_set g(sigma, gm);
    auto v = clause_stricter_semantic(c1, c2, sigma, g, mutex, bounds);
    per_g.push_back({{"sync", sigma.set_to_string(gm)},
                     {"relation", to_string(v.relation)}});
    for (unsigned pi = 0; pi < 2; ++pi) {
      if (!v.forward.holds[pi] && fwd.holds[pi]) {
        fwd.holds[pi] = false;
        fwd.cex[pi] = v.forward.cex[pi];
        if (first_fail_g.empty()) first_fail_g = sigma.set_to_string(gm);
      }
      if (!v.backward.holds[pi] && bwd.holds[pi]) {
        bwd.holds[pi] = false;
        bwd.cex[pi] = v.backward.cex[pi];
      }
    }
  }
  strict_rel rel;
  if (fwd.holds_global() && bwd.holds_global())
    rel = strict_rel::equivalent;
  else if (fwd.holds_global())
    rel = strict_rel::stricter_global;
  else
    rel = strict_rel::incomparable;

  if (o.json_out) {
    strictness_verdict v;
    v.relation = rel;
    v.forward = fwd;
    v.backward = bwd;
    v.bounds = bounds;
    jout["sync"] = "swept";
    jout["per_g"] = per_g;
    jout["verdict"] = verdict_to_json(v, sigma);
    out << jout.dump(2) << "\n";
  } else {
    out << to_string(rel) << " (semantic, all sync sets swept)\n";
    for (unsigned pi = 0; pi < 2; ++pi)
      if (fwd.cex[pi]) {
        const auto& cex = *fwd.cex[pi];
        out << "  refuted at sync " << first_fail_g << " for party " << pi + 1 << ": menus 1:[";
        for (std::size_t i = 0; i < cex.menu1.size(); ++i)
          out << (i ? " " : "") << sigma.set_to_string(cex.menu1[i]);
        out << "] 2:[";
        for (std::size_t i = 0; i < cex.menu2.size(); ++i)
          out << (i ? " " : "") << sigma.set_to_string(cex.menu2[i]);
        out << "] -- " << cex.detail << "\n";
      }
  }
  return exit_clean;
}

// --------------------------------------------------------------------------

struct export_opts {
  std::string file;
  std::string dot_path;
  std::string layer = "regulated";
  std::string ca;
};

int cmd_export(const export_opts& o, std::ostream& out, std::ostream& err) {
  auto f = load_system(o.file, false, out, err);
  if (!f) return exit_usage;
  std::string dot;
  if (o.layer == "parties") {
    dot = dot_parties(sync_compose(f->parties[0].automaton, f->parties[1].automaton, f->g));
  } else if (o.layer == "contract") {
    if (!o.ca.empty()) {
      const auto* c = f->find_contract(o.ca);
      if (!c) {
        err << "unknown contract '" << o.ca << "'\n";
        return exit_usage;
      }
      dot = dot_contract(c->automaton);
    } else {
      dot = dot_contract(f->effective_contract());
    }
  } else if (o.layer == "regulated") {
    regulated_system r = build_regulated_system(f->parties[0].automaton, f->parties[1].automaton,
                                                f->g, f->effective_contract(), f->mutex);
    auto rel = conflict_closure(f->sigma, f->g, f->mutex);
    dot = dot_regulated(r, &rel);
  } else {
    err << "unknown layer '" << o.layer << "' (parties|contract|regulated)\n";
    return exit_usage;
  }
  std::ofstream os(o.dot_path);
  if (!os) {
    err << "cannot write '" << o.dot_path << "'\n";
    return exit_usage;
  }
  os << dot;
  out << "wrote " << o.dot_path << "\n";
  return exit_clean;
}

// --------------------------------------------------------------------------

struct simulate_opts {
  std::string file;
  std::string trace;
  bool json_out = false;
};

int cmd_simulate(const simulate_opts& o, std::ostream& out, std::ostream& err) {
  auto f = load_system(o.file, o.json_out, out, err);
  if (!f) return exit_usage;
  regulated_system r = build_regulated_system(f->parties[0].automaton, f->parties[1].automaton,
                                              f->g, f->effective_contract(), f->mutex);
  std::vector<action_set> steps;
  try {
    steps = parse_trace(o.trace, f->sigma);
  } catch (const error& e) {
    err << e.what() << "\n";
    return exit_usage;
  }

  json jsteps = json::array();
  auto report_state = [&](state_id s, std::size_t idx) {
    const auto& clauses = r.contract.contract_of(r.contract_state(s));
    bool sat1 = sat(r, {location::kind::state, s, 0}, party::p1);
    bool sat2 = sat(r, {location::kind::state, s, 0}, party::p2);
    if (o.json_out) {
      json jc = json::array();
      for (const auto& c : clauses) jc.push_back(clause_to_string(c, f->sigma));
      jsteps.push_back({{"step", idx},
                        {"state", r.behaviour.state_name(s)},
                        {"clauses", jc},
                        {"sat_party1", sat1},
                        {"sat_party2", sat2}});
    } else {
      out << "[" << idx << "] " << r.behaviour.state_name(s) << "  clauses: {";
      for (std::size_t i = 0; i < clauses.size(); ++i)
        out << (i ? ", " : "") << clause_to_string(clauses[i], f->sigma);
      out << "}  sat: party1=" << (sat1 ? green("yes") : red("NO"))
          << " party2=" << (sat2 ? green("yes") : red("NO")) << "\n";
    }
  };

  state_id cur = r.behaviour.initial();
  report_state(cur, 0);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto outs = r.behaviour.out_transitions(cur);
    const composed_transition* taken = nullptr;
    std::size_t taken_index = 0;
    for (const auto& t : outs)
      if (t.label == steps[i]) {
        taken = &t;
        break;
      }
    if (!taken) {
      std::ostringstream avail;
      for (auto a : r.behaviour.acts_of(cur)) avail << " " << f->sigma.set_to_string(a);
      err << "step " << i + 1 << " " << f->sigma.set_to_string(steps[i])
          << " is not enabled at " << r.behaviour.state_name(cur) << "; available:" << avail.str()
          << "\n";
      return exit_findings;
    }
    for (std::size_t k = 0; k < r.behaviour.transitions().size(); ++k)
      if (r.behaviour.transitions()[k] == *taken) taken_index = k;
    bool t1 = sat_obl_transition(r, taken_index, party::p1);
    bool t2 = sat_obl_transition(r, taken_index, party::p2);
    if (o.json_out) {
      jsteps.push_back({{"step", i + 1},
                        {"label", f->sigma.set_to_string(steps[i])},
                        {"transition_sat_party1", t1},
                        {"transition_sat_party2", t2}});
    } else {
      out << "  -- " << f->sigma.set_to_string(steps[i])
          << "  transition sat: party1=" << (t1 ? green("yes") : red("NO"))
          << " party2=" << (t2 ? green("yes") : red("NO")) << "\n";
    }
    cur = taken->dst;
    report_state(cur, i + 1);
  }
  if (o.json_out) out << json{{"steps", jsteps}}.dump(2) << "\n";
  return exit_clean;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cva - contract verification and analysis for two-party systems"};
  app.require_subcommand(1);

  validate_opts vo;
  auto* validate = app.add_subcommand("validate", "parse and validate a .cva system file");
  validate->add_option("file", vo.file, "system file")->required();
  validate->add_flag("--json", vo.json_out, "JSON output");
  validate->add_flag("--strict-totality", vo.strict_totality,
                     "require explicit totality (no implicit else)");
  validate->add_option("--max-sigma", vo.max_sigma, "totality enumeration bound");

  check_opts co;
  auto* check = app.add_subcommand("check", "detect contract violations and blame");
  check->add_option("file", co.file, "system file")->required();
  check->add_option("--party", co.party, "1, 2 or both")
      ->check(CLI::IsMember({"1", "2", "both"}));
  check->add_flag("--json", co.json_out, "JSON output");

  conflicts_opts fo;
  auto* conflicts = app.add_subcommand("conflicts", "detect conflicting clauses in states");
  conflicts->add_option("file", fo.file, "system file")->required();
  conflicts->add_option("--ca", fo.ca, "analyze one named contract standalone");
  conflicts->add_option("--conjoin", fo.conjoin, "conjoin two named contracts")->expected(2);
  conflicts->add_flag("--semantic", fo.semantic, "semantic strictness source for axiom 4");
  conflicts->add_flag("--json", fo.json_out, "JSON output");

  stricter_opts so;
  auto* stricter = app.add_subcommand("stricter", "compare clause strictness");
  stricter->add_option("--c1", so.c1, "weaker candidate, e.g. \"P<1>(a)\"")->required();
  stricter->add_option("--c2", so.c2, "stricter candidate, e.g. \"O<1>(a)\"")->required();
  stricter->add_option("--sigma", so.sigma_names, "alphabet actions")->delimiter(',');
  stricter->add_option("--sync", so.sync_names, "synchronization set")->delimiter(',');
  stricter->add_option("--mutex", so.mutex_pairs, "mutex pairs a#b")->delimiter(',');
  stricter->add_flag("--semantic", so.semantic, "exhaustive bounded semantic oracle");
  stricter->add_flag("--json", so.json_out, "JSON output");
  stricter->add_option("--max-sigma", so.max_sigma, "oracle alphabet bound");
  stricter->add_option("--max-menu", so.max_menu, "oracle menu cardinality bound");
  stricter->add_option("--max-clauses", so.max_clauses, "oracle per-state clause bound");

  export_opts eo;
  auto* exp = app.add_subcommand("export", "export automata to Graphviz DOT");
  exp->add_option("file", eo.file, "system file")->required();
  exp->add_option("--dot", eo.dot_path, "output path")->required();
  exp->add_option("--layer", eo.layer, "parties|contract|regulated");
  exp->add_option("--ca", eo.ca, "contract name for --layer contract");

  simulate_opts mo;
  auto* simulate = app.add_subcommand("simulate", "replay a trace and report satisfaction");
  simulate->add_option("file", mo.file, "system file")->required();
  simulate->add_option("--trace", mo.trace, "semicolon-separated action sets: \"{a,b};{c}\"");
  simulate->add_flag("--json", mo.json_out, "JSON output");

  std::vector<std::string> args = argv;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_clean : exit_usage;
  }

  so.sync_given = stricter->count("--sync") > 0;

  try {
    if (*validate) return cmd_validate(vo, out, err);
    if (*check) return cmd_check(co, out, err);
    if (*conflicts) return cmd_conflicts(fo, out, err);
    if (*stricter) return cmd_stricter(so, out, err);
    if (*exp) return cmd_export(eo, out, err);
    if (*simulate) return cmd_simulate(mo, out, err);
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace cva::cli
