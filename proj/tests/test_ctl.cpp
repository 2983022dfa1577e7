// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "support/oracles.hpp"
#include "support/systems.hpp"

using namespace rrc;
using namespace rrc::testing;
using namespace rrc::ctl;

TEST_CASE("EF over a chain") {
  auto ts = chain3();
  auto k = make_kripke(ts, set_of(ts, {"a"}));
  CHECK(sat(k, ef(lit(set_of(ts, {"c"})))) == set_of(ts, {"a", "b", "c"}));
  CHECK(sat(k, ef(lit({}))).empty());
}

TEST_CASE("AG on a self loop") {
  auto ts = loop();
  auto k = make_kripke(ts, set_of(ts, {"a"}));
  CHECK(sat(k, ag(lit(set_of(ts, {"a"})))) == set_of(ts, {"a"}));
}

TEST_CASE("models quantifies over all initial states") {
  auto ts = chain3();
  auto from_a = make_kripke(ts, set_of(ts, {"a"}));
  auto r = models(from_a, ef(lit(set_of(ts, {"c"}))));
  CHECK(r.holds);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses.at(id(ts, "a")) == path_of(ts, {"a", "b", "c"}));

  auto from_c = make_kripke(ts, set_of(ts, {"c"}));
  CHECK_FALSE(models(from_c, ef(lit(set_of(ts, {"a"})))).holds);

  auto nothing = make_kripke(ts, {});
  CHECK(models(nothing, Formula::falsity()).holds);

  // One initial state reaching the target is not enough.
  auto both = make_kripke(ts, set_of(ts, {"a", "c"}));
  auto partial = models(both, ef(lit(set_of(ts, {"b"}))));
  CHECK_FALSE(partial.holds);
  CHECK(partial.witnesses.at(id(ts, "a")).has_value());
  CHECK_FALSE(partial.witnesses.at(id(ts, "c")).has_value());
}

TEST_CASE("ef_witness") {
  auto ts = chain3();
  auto k = make_kripke(ts, set_of(ts, {"a"}));
  auto w = ef_witness(k, set_of(ts, {"c"}));
  CHECK(w.at(id(ts, "a")) == path_of(ts, {"a", "b", "c"}));
  CHECK(ef_witness(k, set_of(ts, {"a"})).at(id(ts, "a")) == path_of(ts, {"a"}));

  auto d = diamond();
  auto kd = make_kripke(d, set_of(d, {"a"}));
  CHECK(ef_witness(kd, set_of(d, {"d"})).at(id(d, "a")) == path_of(d, {"a", "b", "d"}));
}

TEST_CASE("deadlocks") {
  auto ts = chain3();
  auto k = make_kripke(ts, set_of(ts, {"a"}));
  StateId c = id(ts, "c");
  CHECK_FALSE(sat(k, ex(Formula::truth())).contains(c));
  CHECK(sat(k, ax(Formula::falsity())).contains(c));
  CHECK_FALSE(sat(k, eg(Formula::truth())).contains(c));
}

TEST_CASE("evaluation is confined to the reachable states") {
  auto ts = chain3();
  auto k = make_kripke(ts, set_of(ts, {"b"}));
  CHECK(sat(k, Formula::truth()) == set_of(ts, {"b", "c"}));
  CHECK(sat(k, neg(lit(set_of(ts, {"b"})))) == set_of(ts, {"c"}));
}

TEST_CASE("named atoms resolve through labels or a resolver") {
  auto ts = chain3();
  ts.declare_label("goal");
  ts.add_label(id(ts, "c"), "goal");
  auto k = make_kripke(ts, set_of(ts, {"a"}));
  CHECK(sat(k, ef(Formula::atom("goal"))) == set_of(ts, {"a", "b", "c"}));
  CHECK_THROWS_WITH(sat(k, Formula::atom("nowhere")), doctest::Contains("nowhere"));

  AtomResolver only_b = [&](const NamedAtom& a) {
    if (a.name == "here" && a.args == std::vector<std::string>{"b"})
      return set_of(ts, {"b"});
    throw Error("unresolvable atom " + a.text());
  };
  CHECK(sat(k, Formula::atom("here", {"b"}), only_b) == set_of(ts, {"b"}));
  CHECK(Formula::atom("here", {"x", "y"}).named().text() == "here(x, y)");
}

TEST_CASE("formula structure") {
  auto p = Formula::atom("p");
  auto f = eu(p, ax(neg(p)));
  CHECK(f.op() == Op::EU);
  CHECK(f.is_binary());
  CHECK(f.rhs().op() == Op::AX);
  CHECK(f.depth() == 3);
  CHECK(p.depth() == 0);
  CHECK(f == eu(Formula::atom("p"), ax(neg(Formula::atom("p")))));
  CHECK_FALSE(f == au(p, ax(neg(p))));
}

TEST_CASE("set-level laws and fixpoint bounds on random systems") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    auto k = random_kripke(rng, 8, 0.1, 0.5);
    for (int j = 0; j < 20; ++j) {
      auto f = random_formula(rng, 2);
      StateSet s = sat(k, f);
      CHECK(s.is_subset_of(k.reach()));
      CHECK(sat(k, neg(f)) == set_difference(k.reach(), s));
      CHECK(s.is_subset_of(sat(k, ef(f))));
      CHECK(sat(k, ag(f)).is_subset_of(s));

      SatStats stats;
      sat(k, ef(f), {}, &stats);
      sat(k, eg(f), {}, &stats);
      sat(k, au(f, Formula::atom("q")), {}, &stats);
      CHECK(stats.max_iterations <= k.reach().size());

      auto r = models(k, ef(f));
      bool all_witnessed = std::all_of(r.witnesses.begin(), r.witnesses.end(),
                                       [](const auto& w) { return w.second.has_value(); });
      CHECK(r.holds == all_witnessed);
      CHECK(r.witnesses.size() == k.init().size());
      for (const auto& [init, path] : r.witnesses)
        if (path)
          CHECK(s.contains(path->back()));
    }
  }
}

TEST_CASE("agrees with the path oracle on sampled formulas") {
  Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    auto k = random_kripke(rng, 6, 0.1, 0.6);
    PathOracle oracle(k);
    for (int j = 0; j < 50; ++j) {
      auto f = random_formula(rng, 3);
      CHECK(sat(k, f) == oracle.sat(f));
    }
  }
}
