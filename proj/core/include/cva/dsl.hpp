#pragma once

#include "cva/composition.hpp"
#include "cva/contract.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cva {

struct diagnostic {
  enum class severity : unsigned char { error, warning };
  severity level = severity::error;
  unsigned line = 0, col = 0;  // 1-based
  std::string code;
  std::string message;
};

std::string to_string(const diagnostic& d);

// A whole system: alphabet, sync set, mutex declarations, exactly two party
// automata, one or more contract automata, optional conjoin directive.
struct system_file {
  std::string name;
  alphabet sigma;
  sync_set g;
  mutex_relation mutex;

  struct named_party {
    std::string name;
    multi_action_automaton automaton;
  };
  struct named_contract {
    std::string name;
    contract_automaton automaton;
  };
  std::vector<named_party> parties;
  std::vector<named_contract> contracts;
  std::optional<std::pair<std::string, std::string>> conjoin;

  const named_contract* find_contract(std::string_view n) const;

  // The contract the system is checked against: the conjoin directive's
  // product when present, the sole contract otherwise.
  contract_automaton effective_contract() const;
};

struct parse_result {
  std::optional<system_file> file;
  std::vector<diagnostic> diagnostics;

  bool ok() const {
    for (const auto& d : diagnostics)
      if (d.level == diagnostic::severity::error) return false;
    return file.has_value();
  }
};

// Every rejected input yields at least one error diagnostic with a span.
parse_result parse_system(std::string_view text);

// Canonical concrete syntax; parse(pretty_print(f)) is structurally f.
std::string pretty_print(const system_file& f);

// Concrete clause syntax used on CLI flags: O<1>(a), P<2>(!b), F<1>(c).
// F is desugared on the spot. Throws cva::error on malformed input.
clause parse_clause(std::string_view text, const alphabet& sigma);

}  // namespace cva
