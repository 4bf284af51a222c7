#include "cva/satisfaction.hpp"

#include "build_helpers.hpp"
#include "random_systems.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <future>

using namespace cva;
using namespace cva::testbuild;

namespace {

// The fee/steal running example of the satisfaction section: party 1 is
// permitted to withdraw, permitted not to deposit, obliged to pay the fee and
// obliged not to steal. Everything is synchronized.
struct fee_fixture {
  alphabet sigma = ab({"w", "d", "f", "s"});
  action_set all = sigma.universe();
  std::vector<std::string> clauses = {"P<1>(w)", "P<1>(!d)", "O<1>(f)", "O<1>(!s)"};
};

}  // namespace

TEST_CASE("permission satisfaction at states") {
  fee_fixture fx;

  SUBCASE("an offer with w and f and no d or s satisfies both permissions") {
    auto r = one_state_system(fx.sigma, {mask(fx.sigma, {"w", "f"})},
                              {mask(fx.sigma, {"w", "f"})}, fx.all, {}, fx.clauses);
    CHECK(sat_perm_single(r, 0, party::p2, C(fx.sigma, "P<1>(w)")));
    CHECK(sat_perm_single(r, 0, party::p2, C(fx.sigma, "P<1>(!d)")));
    CHECK(sat_perm_state(r, 0, party::p2));
  }
  SUBCASE("the subject of a permission is never blamed") {
    auto r = one_state_system(fx.sigma, {0}, {0}, fx.all, {}, fx.clauses);
    CHECK(sat_perm_single(r, 0, party::p1, C(fx.sigma, "P<1>(w)")));
    CHECK(sat_perm_single(r, 0, party::p1, C(fx.sigma, "P<1>(!d)")));
  }
  SUBCASE("permissions on local actions cannot be violated") {
    auto sigma = ab({"a", "b"});
    // a is not synchronized; party 2 offers nothing containing a
    auto r = one_state_system(sigma, {0}, {0}, mask(sigma, {"b"}), {}, {"P<1>(a)"});
    CHECK(sat_perm_single(r, 0, party::p2, C(sigma, "P<1>(a)")));
    CHECK(sat(r, {location::kind::state, 0, 0}, party::p2));
  }
  SUBCASE("a menu without the permitted action violates") {
    auto sigma = ab({"a", "b"});
    auto r = one_state_system(sigma, {mask(sigma, {"b"})}, {mask(sigma, {"b"})},
                              mask(sigma, {"a", "b"}), {}, {"P<1>(a)"});
    CHECK(!sat_perm_single(r, 0, party::p2, C(sigma, "P<1>(a)")));
    CHECK(sat_perm_single(r, 0, party::p1, C(sigma, "P<1>(a)")));
  }
  SUBCASE("the offer must also be viable: forbidden actions poison it") {
    // party 2's only w-offer carries the forbidden s
    auto r = one_state_system(fx.sigma, {0, mask(fx.sigma, {"f"})},
                              {0, mask(fx.sigma, {"w", "s", "f"})}, fx.all, {}, fx.clauses);
    CHECK(!sat_perm_single(r, 0, party::p2, C(fx.sigma, "P<1>(w)")));
  }
  SUBCASE("no permissions: the empty conjunction holds") {
    auto r = one_state_system(fx.sigma, {0}, {0}, fx.all, {}, {});
    CHECK(sat_perm_state(r, 0, party::p1));
    CHECK(sat_perm_state(r, 0, party::p2));
  }
}

TEST_CASE("obligation satisfaction on transitions") {
  fee_fixture fx;
  // party 1 can move with {f,w}, {w}, or stay put; party 2 idles
  // fully synchronized: both parties co-sign each label
  auto r = one_state_system(fx.sigma,
                            {mask(fx.sigma, {"f", "w"}), mask(fx.sigma, {"w"}), 0},
                            {mask(fx.sigma, {"f", "w"}), mask(fx.sigma, {"w"}), 0}, fx.all, {},
                            fx.clauses);

  auto find_transition = [&](action_set label, participation who) -> std::size_t {
    const auto& ts = r.behaviour.transitions();
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (ts[i].label == label && ts[i].who == who) return i;
    FAIL("transition not found");
    return 0;
  };

  SUBCASE("a viable joint label satisfies") {
    std::size_t i = find_transition(mask(fx.sigma, {"f", "w"}), participation::both);
    CHECK(sat_obl_transition(r, i, party::p1));
  }
  SUBCASE("a label missing the obliged action violates") {
    std::size_t i = find_transition(mask(fx.sigma, {"w"}), participation::both);
    CHECK(!sat_obl_transition(r, i, party::p1));
  }
  SUBCASE("asynchronous moves of the other party are exempt") {
    auto sigma = ab({"f", "l"});
    // l is local to party 2; party 1 obliged to f
    auto r2 = one_state_system(sigma, {0}, {mask(sigma, {"l"}), 0}, mask(sigma, {"f"}), {},
                               {"O<1>(f)"});
    const auto& ts = r2.behaviour.transitions();
    bool checked = false;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (ts[i].who == participation::party2_only && ts[i].label == mask(sigma, {"l"})) {
        CHECK(sat_obl_transition(r2, i, party::p1));  // exemption
        CHECK(sat_obl_transition(r2, i, party::p2));  // nothing obliges party 2
        checked = true;
      }
    CHECK(checked);
  }
}

TEST_CASE("obligation satisfaction at states") {
  auto sigma = ab({"w", "d", "f", "s"});
  const action_set all = sigma.universe();
  std::initializer_list<std::string> clauses = {"O<1>(f)", "O<1>(!s)"};

  SUBCASE("a menu of only {f,s} forces the forbidden action") {
    auto r = one_state_system(sigma, {0}, {mask(sigma, {"f", "s"})}, all, {}, clauses);
    CHECK(!sat_obl_state(r, 0, party::p2));
  }
  SUBCASE("an {f} offer next to {f,s} satisfies") {
    auto r = one_state_system(sigma, {0}, {mask(sigma, {"f"}), mask(sigma, {"f", "s"})}, all, {},
                              clauses);
    CHECK(sat_obl_state(r, 0, party::p2));
  }
  SUBCASE("no obligations for the other party: vacuously satisfied") {
    auto r = one_state_system(sigma, {0}, {0}, all, {}, {});
    CHECK(sat_obl_state(r, 0, party::p1));
    CHECK(sat_obl_state(r, 0, party::p2));
  }
  SUBCASE("local obligations can be topped up from G^c") {
    auto sigma2 = ab({"f", "x"});
    // f is local: party 2's empty offer plus the A' = {f} top-up is viable
    auto r = one_state_system(sigma2, {0}, {0}, mask(sigma2, {"x"}), {}, {"O<1>(f)"});
    CHECK(sat_obl_state(r, 0, party::p2));
  }
  SUBCASE("the top-up must not create a mutex pair") {
    auto sigma2 = ab({"a", "b"});
    mutex_relation mx(sigma2, {{0, 1}});
    // party 1 obliged to a (local); party 2 only offers {b}: {b} u {a} clashes
    auto r = one_state_system(sigma2, {0}, {mask(sigma2, {"b"})}, 0, mx, {"O<1>(a)"});
    CHECK(!sat_obl_state(r, 0, party::p2));
    // an empty offer lets the top-up work
    auto r2 = one_state_system(sigma2, {0}, {0, mask(sigma2, {"b"})}, 0, mx, {"O<1>(a)"});
    CHECK(sat_obl_state(r2, 0, party::p2));
  }
}

TEST_CASE("general satisfaction and violation enumeration") {
  SUBCASE("empty contract: no violations anywhere") {
    auto sigma = ab({"a", "b"});
    auto r = one_state_system(sigma, {0, mask(sigma, {"a"})}, {0, mask(sigma, {"b"})},
                              mask(sigma, {"a"}), {}, {});
    CHECK(find_violations(r).empty());
    CHECK(breach_incapable(party::p1, r).incapable);
    CHECK(breach_incapable(party::p2, r).incapable);
  }
  SUBCASE("every transition omitting an obliged action is reported") {
    auto sigma = ab({"f", "w"});
    // w is local, so party 1's {w} move fires alone and violates O<1>(f)
    auto r = one_state_system(sigma, {mask(sigma, {"w"}), mask(sigma, {"f", "w"})}, {0},
                              mask(sigma, {"f"}), {}, {"O<1>(f)"});
    int blamed = 0;
    for (const auto& v : find_violations(r))
      if (v.who == party::p1 && v.where.k == location::kind::transition) ++blamed;
    CHECK(blamed == 1);  // exactly the {w} move
  }
  SUBCASE("deterministic report order") {
    auto sigma = ab({"a"});
    auto r = one_state_system(sigma, {0}, {0}, mask(sigma, {"a"}), {},
                              {"P<1>(a)", "P<2>(a)"});
    auto v1 = find_violations(r);
    auto v2 = find_violations(r);
    CHECK(v1 == v2);
    REQUIRE(v1.size() == 2);
    CHECK(index_of(v1[0].who) == 1);
    CHECK(index_of(v1[1].who) == 2);
  }
}

TEST_CASE("breach incapability") {
  SUBCASE("permission for one party, none for the menu-poor other") {
    // Party 1 can only do {b}; party 2 can do {a} or {b}; everything
    // synchronized on b, a local. Under P<1>(a) everyone is safe; under
    // P<2>(!b) party 1 has no b-free offer and violates at the initial state.
    auto sigma = ab({"a", "b"});
    mutex_relation mx(sigma, {{0, 1}});
    const action_set gb = mask(sigma, {"b"});
    auto menus1 = std::vector<action_set>{mask(sigma, {"b"})};
    auto menus2 = std::vector<action_set>{mask(sigma, {"a"}), mask(sigma, {"b"})};

    auto safe = one_state_system(sigma, menus1, menus2, gb, mx, {"P<1>(a)"});
    CHECK(breach_incapable(party::p1, safe).incapable);
    CHECK(breach_incapable(party::p2, safe).incapable);

    auto tight = one_state_system(sigma, menus1, menus2, gb, mx, {"P<2>(!b)"});
    auto res = breach_incapable(party::p1, tight);
    CHECK(!res.incapable);
    REQUIRE(res.witness);
    CHECK(res.witness->where.k == location::kind::state);
    CHECK(res.witness->witness_trace.empty());  // at the initial state
  }
  SUBCASE("violations behind unreachable contract states do not count") {
    auto sigma = ab({"a", "b"});
    // contract jumps to a demanding state only on b; the parties never do b
    std::vector<std::vector<guard_arm>> arms(2);
    arms[0].push_back({guard::contains(sigma.id("b")), 1});
    contract_automaton ca(sigma, {"mild", "harsh"}, "mild", std::move(arms),
                          {{}, {C(sigma, "P<1>(a)"), C(sigma, "O<2>(a)")}});
    auto p1 = menu_party(sigma, {0, mask(sigma, {"a"})});
    auto p2 = menu_party(sigma, {0});
    auto r = build_regulated_system(p1, p2, sync_set(sigma, mask(sigma, {"a"})), ca);
    CHECK(find_violations(r).empty());
    CHECK(breach_incapable(party::p1, r).incapable);
    CHECK(breach_incapable(party::p2, r).incapable);
  }
  SUBCASE("witness is a shortest trace") {
    auto sigma = ab({"go", "x"});
    // two steps of 'go' reach a state obliging party 1 to the impossible
    std::vector<std::vector<guard_arm>> arms(3);
    arms[0].push_back({guard::contains(sigma.id("go")), 1});
    arms[1].push_back({guard::contains(sigma.id("go")), 2});
    contract_automaton ca(sigma, {"c0", "c1", "c2"}, "c0", std::move(arms),
                          {{}, {}, {C(sigma, "O<1>(x)")}});
    auto p1 = menu_party(sigma, {0, mask(sigma, {"go"})});
    auto p2 = menu_party(sigma, {0, mask(sigma, {"go"})});
    auto r =
        build_regulated_system(p1, p2, sync_set(sigma, mask(sigma, {"go"})), ca);
    auto res = breach_incapable(party::p1, r);
    REQUIRE(!res.incapable);
    REQUIRE(res.witness);
    CHECK(res.witness->witness_trace.size() >= 2);
  }
}

TEST_CASE("monotonicity of blame: extra clauses never repair satisfaction") {
  std::mt19937 rng(37);
  for (int i = 0; i < 60; ++i) {
    auto sys = testgen::make_system(rng, {});
    // a second contract with the same structure and extra clauses
    std::vector<std::vector<guard_arm>> arms;
    std::vector<std::vector<clause>> labels, labels_plus;
    std::vector<std::string> names;
    for (state_id q = 0; q < sys.contract.state_count(); ++q) {
      arms.push_back(sys.contract.arms_of(q));
      names.push_back(sys.contract.state_name(q));
      labels.push_back(sys.contract.contract_of(q));
      auto plus = sys.contract.contract_of(q);
      plus.push_back(testgen::make_clause(rng, sys.sigma));
      labels_plus.push_back(plus);
    }
    contract_automaton bigger(sys.sigma, names, names[sys.contract.initial()], arms,
                              labels_plus);
    auto r1 = build_regulated_system(sys.party1, sys.party2, sys.g, sys.contract, sys.mutex);
    auto r2 = build_regulated_system(sys.party1, sys.party2, sys.g, bigger, sys.mutex);
    REQUIRE(r1.behaviour.state_count() == r2.behaviour.state_count());
    for (state_id s = 0; s < r1.behaviour.state_count(); ++s)
      for (party p : {party::p1, party::p2})
        if (sat(r2, {location::kind::state, s, 0}, p))
          CHECK(sat(r1, {location::kind::state, s, 0}, p));
    REQUIRE(r1.behaviour.transitions().size() == r2.behaviour.transitions().size());
    for (std::size_t t = 0; t < r1.behaviour.transitions().size(); ++t)
      for (party p : {party::p1, party::p2})
        if (sat(r2, {location::kind::transition, 0, t}, p))
          CHECK(sat(r1, {location::kind::transition, 0, t}, p));
  }
}

TEST_CASE("transition blame respects the asynchronous exemption") {
  // an obligation violation on a party1-only move never blames party 2 and
  // vice versa
  std::mt19937 rng(53);
  for (int i = 0; i < 80; ++i) {
    auto sys = testgen::make_system(rng, {});
    auto r = build_regulated_system(sys.party1, sys.party2, sys.g, sys.contract, sys.mutex);
    for (const auto& v : find_violations(r)) {
      if (v.where.k != location::kind::transition) continue;
      const auto& t = r.behaviour.transitions()[v.where.transition];
      if (t.who == participation::party1_only) CHECK(v.who == party::p1);
      if (t.who == participation::party2_only) CHECK(v.who == party::p2);
    }
  }
}

TEST_CASE("agreement with the direct-from-formula evaluator") {
  std::mt19937 rng(41);
  for (int i = 0; i < 150; ++i) {
    auto sys = testgen::make_system(rng, {});
    auto r = build_regulated_system(sys.party1, sys.party2, sys.g, sys.contract, sys.mutex);
    auto impl = ref::keys_of(r, find_violations(r));
    auto oracle = ref::find_violations(r);
    CHECK(impl == oracle);
  }
}

TEST_CASE("independent analyses share one immutable system across threads") {
  auto text = [] {
    std::mt19937 rng(61);
    return testgen::make_system(rng, {});
  }();
  const regulated_system r =
      build_regulated_system(text.party1, text.party2, text.g, text.contract, text.mutex);
  const auto expected = find_violations(r);
  std::vector<std::future<std::vector<violation_report>>> jobs;
  for (int i = 0; i < 8; ++i)
    jobs.push_back(std::async(std::launch::async, [&r] { return find_violations(r); }));
  for (auto& j : jobs) CHECK(j.get() == expected);
  auto bi1 = std::async(std::launch::async, [&r] { return breach_incapable(party::p1, r); });
  auto bi2 = std::async(std::launch::async, [&r] { return breach_incapable(party::p2, r); });
  CHECK(bi1.get().incapable == breach_incapable(party::p1, r).incapable);
  CHECK(bi2.get().incapable == breach_incapable(party::p2, r).incapable);
}
