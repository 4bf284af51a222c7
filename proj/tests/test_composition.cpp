#include "cva/composition.hpp"

#include "build_helpers.hpp"
#include "random_systems.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace cva;
using namespace cva::testbuild;

TEST_CASE("synchronous composition rules") {
  auto sigma = ab({"a", "c", "l"});
  sync_set g(sigma, mask(sigma, {"a"}));

  SUBCASE("a synchronized action with no partner never fires") {
    auto s1 = automaton(sigma, {"q", "qp"}, "q", {{"q", {"a"}, "qp"}, {"q", {}, "q"}});
    auto s2 = automaton(sigma, {"r"}, "r", {{"r", {}, "r"}});
    auto composed = sync_compose(s1, s2, g);
    for (const auto& t : composed.transitions()) CHECK(!contains(t.label, sigma.id("a")));
  }
  SUBCASE("joint move unions the labels") {
    auto s1 = automaton(sigma, {"q1", "q1p"}, "q1", {{"q1", {"a"}, "q1p"}});
    auto s2 = automaton(sigma, {"q2", "q2p"}, "q2", {{"q2", {"a", "c"}, "q2p"}});
    auto composed = sync_compose(s1, s2, g);
    REQUIRE(composed.transitions().size() == 1);
    const auto& t = composed.transitions()[0];
    CHECK(t.label == mask(sigma, {"a", "c"}));
    CHECK(t.who == participation::both);
    CHECK(composed.state_name(t.dst) == "(q1p,q2p)");
  }
  SUBCASE("local actions move one party for any co-state") {
    auto s1 = automaton(sigma, {"q1", "q1p"}, "q1", {{"q1", {"l"}, "q1p"}});
    auto s2 = automaton(sigma, {"q2", "q2b"}, "q2", {{"q2", {}, "q2b"}, {"q2b", {}, "q2"}});
    auto composed = sync_compose(s1, s2, g);
    int party1_moves = 0;
    for (const auto& t : composed.transitions())
      if (t.who == participation::party1_only) {
        ++party1_moves;
        CHECK(t.label == mask(sigma, {"l"}));
      }
    CHECK(party1_moves == 2);  // from (q1,q2) and (q1,q2b)
  }
  SUBCASE("identical asynchronous self-loops stay distinct per mover") {
    auto s1 = automaton(sigma, {"q"}, "q", {{"q", {"l"}, "q"}});
    auto s2 = automaton(sigma, {"r"}, "r", {{"r", {"l"}, "r"}});
    auto composed = sync_compose(s1, s2, g);
    REQUIRE(composed.transitions().size() == 2);
    CHECK(composed.transitions()[0].who != composed.transitions()[1].who);
    CHECK(composed.transitions()[0].label == composed.transitions()[1].label);
  }
  SUBCASE("alphabet mismatch is rejected") {
    auto s1 = automaton(sigma, {"q"}, "q", {});
    auto other = ab({"x"});
    auto s2 = automaton(other, {"r"}, "r", {});
    CHECK_THROWS_AS(sync_compose(s1, s2, g), error);
  }
}

TEST_CASE("well-formedness") {
  auto sigma = ab({"a", "b"});
  sync_set g(sigma, mask(sigma, {"a", "b"}));

  SUBCASE("empty-set self-loops keep every state alive") {
    auto s1 = automaton(sigma, {"q"}, "q", {{"q", {}, "q"}});
    auto s2 = automaton(sigma, {"r"}, "r", {{"r", {}, "r"}});
    CHECK(check_well_formed(s1, s2, g).empty());
  }
  SUBCASE("mismatched synchronization menus deadlock") {
    auto s1 = automaton(sigma, {"q"}, "q", {{"q", {"a"}, "q"}});
    auto s2 = automaton(sigma, {"r"}, "r", {{"r", {"b"}, "r"}});
    auto dead = check_well_formed(s1, s2, g);
    REQUIRE(dead.size() == 1);
    CHECK(dead[0] == "(q,r)");
  }
  SUBCASE("no transitions at all deadlocks the initial state") {
    auto s1 = automaton(sigma, {"q"}, "q", {});
    auto s2 = automaton(sigma, {"r"}, "r", {});
    auto dead = check_well_formed(s1, s2, g);
    REQUIRE(dead.size() == 1);
    CHECK(dead[0] == "(q,r)");
  }
}

TEST_CASE("composition symmetry under party swap") {
  std::mt19937 rng(23);
  for (int i = 0; i < 60; ++i) {
    auto sys = testgen::make_system(rng, {.want_well_formed = false});
    auto ab_ = sync_compose(sys.party1, sys.party2, sys.g);
    auto ba = sync_compose(sys.party2, sys.party1, sys.g);
    auto swap_tag = [](participation who) {
      if (who == participation::party1_only) return participation::party2_only;
      if (who == participation::party2_only) return participation::party1_only;
      return participation::both;
    };
    std::set<std::tuple<state_id, state_id, action_set, state_id, state_id, participation>> lhs,
        rhs;
    for (const auto& t : ab_.transitions()) {
      const auto& s = ab_.state(t.src);
      const auto& d = ab_.state(t.dst);
      lhs.insert({s.q1, s.q2, t.label, d.q1, d.q2, t.who});
    }
    for (const auto& t : ba.transitions()) {
      const auto& s = ba.state(t.src);
      const auto& d = ba.state(t.dst);
      rhs.insert({s.q2, s.q1, t.label, d.q2, d.q1, swap_tag(t.who)});
    }
    CHECK(lhs == rhs);
  }
}

TEST_CASE("rule soundness and completeness against direct rule application") {
  std::mt19937 rng(29);
  for (int i = 0; i < 60; ++i) {
    auto sys = testgen::make_system(rng, {.want_well_formed = false});
    auto composed = sync_compose(sys.party1, sys.party2, sys.g);
    auto deadlocked_ref = ref::deadlocked_states(sys.party1, sys.party2, sys.g);

    std::set<std::pair<state_id, state_id>> dead_impl;
    for (state_id s : check_well_formed_states(composed))
      dead_impl.insert({composed.state(s).q1, composed.state(s).q2});
    std::set<std::pair<state_id, state_id>> dead_ref(deadlocked_ref.begin(),
                                                     deadlocked_ref.end());
    CHECK(dead_impl == dead_ref);
  }
}

TEST_CASE("regulated system construction") {
  auto sigma = ab({"login", "logout", "transfer", "malicious", "cleared"});
  sync_set g(sigma, mask(sigma, {"login", "logout", "transfer"}));
  auto john = automaton(sigma, {"j0"}, "j0",
                    {{"j0", {}, "j0"},
                     {"j0", {"login"}, "j0"},
                     {"j0", {"logout"}, "j0"},
                     {"j0", {"transfer"}, "j0"}});
  auto bank = automaton(sigma, {"b0"}, "b0",
                    {{"b0", {}, "b0"},
                     {"b0", {"login"}, "b0"},
                     {"b0", {"login", "malicious"}, "b0"},
                     {"b0", {"logout"}, "b0"},
                     {"b0", {"transfer"}, "b0"},
                     {"b0", {"cleared"}, "b0"}});

  SUBCASE("a trivial contract leaves the behaviour unchanged") {
    auto unit = constant_ca(sigma, {});
    auto parties_only = sync_compose(john, bank, g);
    auto reg = build_regulated_system(john, bank, g, unit);
    CHECK(reg.behaviour.state_count() == parties_only.state_count());
    CHECK(reg.behaviour.transitions().size() == parties_only.transitions().size());
  }
  SUBCASE("the joint {login,malicious} step moves both contract components") {
    // left: out --login--> in, in --logout--> out
    std::vector<std::vector<guard_arm>> larms(2);
    larms[0].push_back({guard::contains(sigma.id("login")), 1});
    larms[1].push_back({guard::contains(sigma.id("logout")), 0});
    contract_automaton left(sigma, {"out", "in"}, "out", std::move(larms),
                            {{C(sigma, "F<1>(transfer)")}, {C(sigma, "P<1>(transfer)")}});
    std::vector<std::vector<guard_arm>> rarms(2);
    rarms[0].push_back({guard::contains(sigma.id("malicious")), 1});
    rarms[1].push_back({guard::contains(sigma.id("cleared")), 0});
    contract_automaton right(sigma, {"calm", "alert"}, "calm", std::move(rarms),
                             {{C(sigma, "P<1>(login)")},
                              {C(sigma, "F<1>(login)"), C(sigma, "F<1>(transfer)")}});
    auto reg = build_regulated_system(john, bank, g, ca_conjoin(left, right));
    bool found = false;
    for (const auto& t : reg.behaviour.out_transitions(reg.behaviour.initial()))
      if (t.label == mask(sigma, {"login", "malicious"})) {
        found = true;
        auto label = reg.contract.contract_of(reg.contract_state(t.dst));
        CHECK(std::find(label.begin(), label.end(), C(sigma, "P<1>(transfer)")) != label.end());
        CHECK(std::find(label.begin(), label.end(), C(sigma, "O<1>(!transfer)")) != label.end());
      }
    CHECK(found);
  }
  SUBCASE("state count is bounded by the product") {
    auto unit = constant_ca(sigma, {});
    auto reg = build_regulated_system(john, bank, g, unit);
    CHECK(reg.behaviour.state_count() <=
          john.state_count() * bank.state_count() * unit.state_count());
  }
  SUBCASE("ill-formed party composition is rejected") {
    auto stuck1 = automaton(sigma, {"x"}, "x", {});
    auto stuck2 = automaton(sigma, {"y"}, "y", {});
    CHECK_THROWS_AS(build_regulated_system(stuck1, stuck2, g, constant_ca(sigma, {})), error);
  }
}

TEST_CASE("the contract layer never removes transitions") {
  std::mt19937 rng(31);
  for (int i = 0; i < 40; ++i) {
    auto sys = testgen::make_system(rng, {});
    auto parties_only = sync_compose(sys.party1, sys.party2, sys.g);
    auto reg = build_regulated_system(sys.party1, sys.party2, sys.g, sys.contract, sys.mutex);
    // per composed state, the out-degree under the contract equals the
    // parties-only out-degree at its (q1,q2) projection
    for (state_id s = 0; s < reg.behaviour.state_count(); ++s) {
      const auto& cs = reg.behaviour.state(s);
      state_id plain = 0;
      bool found = false;
      for (state_id t = 0; t < parties_only.state_count(); ++t)
        if (parties_only.state(t).q1 == cs.q1 && parties_only.state(t).q2 == cs.q2) {
          plain = t;
          found = true;
        }
      REQUIRE(found);
      CHECK(reg.behaviour.out_transitions(s).size() ==
            parties_only.out_transitions(plain).size());
    }
  }
}

TEST_CASE("sync set excludes non-alphabet actions") {
  auto sigma = ab({"a"});
  CHECK_THROWS_AS(sync_set(sigma, 0b110), error);
  CHECK(sync_set(sigma, 0b1).complement(sigma) == 0);
}
