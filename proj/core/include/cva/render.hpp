#pragma once

#include "cva/conflicts.hpp"
#include "cva/dsl.hpp"
#include "cva/satisfaction.hpp"
#include "cva/strictness.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cva {

using json = nlohmann::json;

json violation_to_json(const regulated_system& r, const violation_report& v);
std::string violation_to_text(const regulated_system& r, const violation_report& v);

json conflict_to_json(const alphabet& sigma, const conflicting_state& c);
std::string conflict_to_text(const alphabet& sigma, const conflicting_state& c);

json verdict_to_json(const strictness_verdict& v, const alphabet& sigma);

json diagnostic_to_json(const diagnostic& d);

// Graphviz exports. Regulated systems flag conflicting states with
// peripheries=2 when a conflict relation is supplied.
std::string dot_parties(const composed_automaton& composed);
std::string dot_contract(const contract_automaton& ca);
std::string dot_regulated(const regulated_system& r, const conflict_relation* conflicts);

}  // namespace cva
