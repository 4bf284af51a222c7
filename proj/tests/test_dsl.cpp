#include "cva/dsl.hpp"

#include "build_helpers.hpp"
#include "random_systems.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace cva;

namespace {

std::string read_whole(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* minimal = R"(
system tiny {
  alphabet { a, b }
  sync { a }
  mutex { }
  party one { init s; state s { on {} -> s; on {a} -> s; } }
  party two { init t; state t { on {} -> t; on {a,b} -> t; } }
  contract c { init k; state k { clauses { P<1>(a) } on contains(a) -> k; } }
}
)";

bool has_error_code(const parse_result& r, const std::string& code) {
  for (const auto& d : r.diagnostics)
    if (d.level == diagnostic::severity::error && d.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("a minimal system parses") {
  auto r = parse_system(minimal);
  REQUIRE(r.ok());
  const auto& f = *r.file;
  CHECK(f.name == "tiny");
  CHECK(f.sigma.size() == 2);
  CHECK(f.g.mask() == f.sigma.set_from_names({"a"}));
  CHECK(f.parties.size() == 2);
  CHECK(f.contracts.size() == 1);
  CHECK(f.contracts[0].automaton.contract_of(0) ==
        std::vector<clause>{parse_clause("P<1>(a)", f.sigma)});
}

TEST_CASE("the banking sample parses and round-trips") {
  auto text = read_whole(std::string(CVA_SOURCE_DIR) + "/samples/banking.cva");
  auto first = parse_system(text);
  REQUIRE(first.ok());
  auto printed = pretty_print(*first.file);
  auto second = parse_system(printed);
  REQUIRE(second.ok());
  CHECK(pretty_print(*second.file) == printed);  // printing is a fixpoint
  CHECK(second.file->conjoin ==
        std::make_optional(std::make_pair(std::string("left"), std::string("right"))));
  CHECK(second.file->contracts.size() == 2);
  // prohibitions were desugared on load
  const auto& left = second.file->find_contract("left")->automaton;
  CHECK(left.contract_of(left.state("out")) ==
        std::vector<clause>{parse_clause("O<1>(!transfer)", second.file->sigma)});
}

TEST_CASE("parse diagnostics carry spans and codes") {
  SUBCASE("empty alphabet") {
    auto r = parse_system("system x { alphabet { } party a { init s; state s { on {} -> s; } } "
                          "party b { init t; state t { on {} -> t; } } "
                          "contract c { init k; state k { } } }");
    CHECK(!r.ok());
    CHECK(has_error_code(r, "S001"));
  }
  SUBCASE("undeclared action") {
    auto r = parse_system("system x { alphabet { a } "
                          "party p1 { init s; state s { on {zz} -> s; } } "
                          "party p2 { init t; state t { on {} -> t; } } "
                          "contract c { init k; state k { } } }");
    CHECK(!r.ok());
    CHECK(has_error_code(r, "S002"));
    bool spanned = false;
    for (const auto& d : r.diagnostics) spanned |= d.line > 0 && d.col > 0;
    CHECK(spanned);
  }
  SUBCASE("mutex-violating party label") {
    auto r = parse_system("system x { alphabet { openDoor, closeDoor } mutex { openDoor#closeDoor } "
                          "party p1 { init s; state s { on {openDoor, closeDoor} -> s; } } "
                          "party p2 { init t; state t { on {} -> t; } } "
                          "contract c { init k; state k { } } }");
    CHECK(!r.ok());
    CHECK(has_error_code(r, "S011"));
  }
  SUBCASE("duplicate state id") {
    auto r = parse_system("system x { alphabet { a } "
                          "party p1 { init s; state s { on {} -> s; } state s { } } "
                          "party p2 { init t; state t { on {} -> t; } } "
                          "contract c { init k; state k { } } }");
    CHECK(!r.ok());
    CHECK(has_error_code(r, "S008"));
  }
  SUBCASE("more than one initial state") {
    auto r = parse_system("system x { alphabet { a } "
                          "party p1 { init s; init s; state s { on {} -> s; } } "
                          "party p2 { init t; state t { on {} -> t; } } "
                          "contract c { init k; state k { } } }");
    CHECK(!r.ok());
    CHECK(has_error_code(r, "P002"));
  }
  SUBCASE("wrong party count") {
    auto r = parse_system("system x { alphabet { a } "
                          "party p1 { init s; state s { on {} -> s; } } "
                          "contract c { init k; state k { } } }");
    CHECK(!r.ok());
    CHECK(has_error_code(r, "S005"));
  }
  SUBCASE("mutex actions may not be synchronized") {
    auto r = parse_system("system x { alphabet { a, b } sync { a } mutex { a#b } "
                          "party p1 { init s; state s { on {} -> s; } } "
                          "party p2 { init t; state t { on {} -> t; } } "
                          "contract c { init k; state k { } } }");
    CHECK(!r.ok());
    CHECK(has_error_code(r, "S004"));
  }
  SUBCASE("unknown contract in conjoin") {
    auto r = parse_system("system x { alphabet { a } "
                          "party p1 { init s; state s { on {} -> s; } } "
                          "party p2 { init t; state t { on {} -> t; } } "
                          "contract c { init k; state k { } } conjoin c d }");
    CHECK(!r.ok());
    CHECK(has_error_code(r, "S007"));
  }
  SUBCASE("plain syntax error") {
    auto r = parse_system("system x { alphabet { a } %%% }");
    CHECK(!r.ok());
    REQUIRE(!r.diagnostics.empty());
    CHECK(r.diagnostics[0].line >= 1);
  }
}

TEST_CASE("guard expressions parse with the usual precedence") {
  auto r = parse_system(
      "system x { alphabet { a, b, c } "
      "party p1 { init s; state s { on {} -> s; } } "
      "party p2 { init t; state t { on {} -> t; } } "
      "contract c { init k; "
      "state k { on contains(a) and not contains(b) or contains(c) -> k; } } }");
  REQUIRE(r.ok());
  const auto& ca = r.file->contracts[0].automaton;
  // or binds loosest: (a and !b) or c
  CHECK(ca.step(0, r.file->sigma.set_from_names({"a"})) == 0);
  auto printed = pretty_print(*r.file);
  auto again = parse_system(printed);
  REQUIRE(again.ok());
  CHECK(pretty_print(*again.file) == printed);
}

TEST_CASE("negation over grouped guards keeps its parentheses") {
  auto r = parse_system(
      "system x { alphabet { a, b } "
      "party p1 { init s; state s { on {} -> s; } } "
      "party p2 { init t; state t { on {} -> t; } } "
      "contract c { init k; state k { clauses { O<1>(a) } } "
      "state k2 { on not (contains(a) or contains(b)) -> k; } } }");
  REQUIRE(r.ok());
  const auto& sigma = r.file->sigma;
  const auto& ca = r.file->contracts[0].automaton;
  CHECK(ca.step(ca.state("k2"), 0) == ca.state("k"));
  CHECK(ca.step(ca.state("k2"), sigma.set_from_names({"a"})) == ca.state("k2"));
  auto printed = pretty_print(*r.file);
  auto again = parse_system(printed);
  REQUIRE(again.ok());
  CHECK(pretty_print(*again.file) == printed);
  // semantics preserved through the round trip
  const auto& ca2 = again.file->contracts[0].automaton;
  for (action_set l = 0; l <= sigma.universe(); ++l)
    CHECK(ca2.step(ca2.state("k2"), l) == ca.step(ca.state("k2"), l));
}

TEST_CASE("clause concrete syntax") {
  alphabet sigma({"a", "b"});
  CHECK(parse_clause("O<1>(a)", sigma) ==
        clause{modality::obligation, party::p1, {0, false}});
  CHECK(parse_clause("P<2>(!b)", sigma) ==
        clause{modality::permission, party::p2, {1, true}});
  CHECK(parse_clause("F<1>(a)", sigma) == parse_clause("O<1>(!a)", sigma));
  CHECK(parse_clause(" P<1> ( !a ) ", sigma) ==
        clause{modality::permission, party::p1, {0, true}});
  CHECK_THROWS_AS(parse_clause("Q<1>(a)", sigma), error);
  CHECK_THROWS_AS(parse_clause("O<3>(a)", sigma), error);
  CHECK_THROWS_AS(parse_clause("O<1>(zz)", sigma), error);
  CHECK_THROWS_AS(parse_clause("O<1>(a) extra", sigma), error);
}

TEST_CASE("printing random systems is a parseable fixpoint") {
  std::mt19937 rng(67);
  for (int i = 0; i < 40; ++i) {
    auto sys = cva::testgen::make_system(rng, {.want_well_formed = false});
    system_file f{"random" + std::to_string(i),
                  sys.sigma,
                  sys.g,
                  sys.mutex,
                  {{"first", sys.party1}, {"second", sys.party2}},
                  {{"only", sys.contract}},
                  std::nullopt};
    auto printed = pretty_print(f);
    auto parsed = parse_system(printed);
    REQUIRE(parsed.ok());
    CHECK(pretty_print(*parsed.file) == printed);
  }
}

TEST_CASE("arms after an else are flagged as dead") {
  auto r = parse_system(
      "system x { alphabet { a } "
      "party p1 { init s; state s { on {} -> s; } } "
      "party p2 { init t; state t { on {} -> t; } } "
      "contract c { init k; state k { else -> k; on contains(a) -> k; } } }");
  REQUIRE(r.ok());  // a warning, not an error
  bool warned = false;
  for (const auto& d : r.diagnostics)
    warned |= d.level == diagnostic::severity::warning && d.code == "W001";
  CHECK(warned);
}

TEST_CASE("the parser survives arbitrary input") {
  std::mt19937 rng(59);
  const std::string pieces[] = {"system", "{", "}", "(", ")", "party", "contract", "on",
                                "clauses", "O<1>(a)", "->", ";", "#", "!", "alphabet",
                                "a", ",", "init", "state", "else", "\n", "1", "<", ">"};
  for (int i = 0; i < 300; ++i) {
    std::string text;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int k = 0; k < n; ++k) {
      text += pieces[rng() % std::size(pieces)];
      text += ' ';
    }
    auto r = parse_system(text);  // must terminate without crashing
    if (!r.ok()) {
      REQUIRE(!r.diagnostics.empty());
      CHECK(r.diagnostics[0].line >= 1);
    }
  }
}

TEST_CASE("effective contract selection") {
  auto r = parse_system(minimal);
  REQUIRE(r.ok());
  CHECK(r.file->effective_contract().state_count() == 1);
  auto two = parse_system(
      "system x { alphabet { a } "
      "party p1 { init s; state s { on {} -> s; } } "
      "party p2 { init t; state t { on {} -> t; } } "
      "contract c1 { init k; state k { } } contract c2 { init k; state k { } } }");
  REQUIRE(two.ok());
  CHECK_THROWS_AS(two.file->effective_contract(), error);  // ambiguous without conjoin
}
