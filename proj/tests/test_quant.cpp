// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "rrcheck/rational.hpp"
#include "support/oracles.hpp"
#include "support/systems.hpp"

using namespace rrc;
using namespace rrc::testing;
using namespace rrc::quant;

namespace {

Rational q(const char* text) { return parse_rational(text); }

struct Steps {
  TransitionSystem ts = chain3();
  AttackSignature ab{set_of(ts, {"a"}), set_of(ts, {"b"})};
  AttackSignature bc{set_of(ts, {"b"}), set_of(ts, {"c"})};
  AttackSignature ac{set_of(ts, {"a"}), set_of(ts, {"c"})};
  AttackTree two_step = AttackTree::and_of({AttackTree::base(ab), AttackTree::base(bc)}, ac);
};

} // namespace

TEST_CASE("rationals parse and render exactly") {
  CHECK(q("12") == 12);
  CHECK(q("0.25") == Rational(1, 4));
  CHECK(q("-3.5") == Rational(-7, 2));
  CHECK(q("1/3") == Rational(1, 3));
  CHECK_THROWS(q("1/0"));
  CHECK_THROWS(q("1.2.3"));
  CHECK_THROWS(q(""));
  CHECK(to_decimal_string(Rational(1, 4)) == "0.25");
  CHECK(to_decimal_string(Rational(5)) == "5");
  CHECK(to_decimal_string(Rational(-7, 2)) == "-3.5");
  CHECK(to_decimal_string(Rational(1, 3)) == "1/3");
  CHECK(to_decimal_string(Rational(3, 40)) == "0.075");
}

TEST_CASE("cost arithmetic with infinity") {
  Cost inf = Cost::infinity();
  CHECK(inf.is_infinite());
  CHECK((inf + Cost(3)).is_infinite());
  CHECK(Cost(3) < inf);
  CHECK_FALSE(inf < Cost(3));
  CHECK(inf.text() == "inf");
  CHECK(Cost(Rational(1, 2)).text() == "0.5");
}

TEST_CASE("worked examples") {
  Steps s;
  Attribution attr;
  attr.set_cost(s.ab, 2);
  attr.set_cost(s.bc, 3);
  attr.set_prob(s.ab, q("0.5"));
  attr.set_prob(s.bc, q("0.5"));
  auto e = evaluate(s.two_step, attr);
  CHECK(e.cost == Cost(5));
  CHECK(e.prob == q("0.25"));

  Attribution or_attr;
  or_attr.set_cost(s.ab, 7);
  or_attr.set_cost(s.bc, 4);
  or_attr.set_default_prob(1);
  auto either = AttackTree::or_of({AttackTree::base(s.ab), AttackTree::base(s.bc)}, s.ac);
  CHECK(evaluate(either, or_attr).cost == Cost(4));
  auto cheapest = cheapest_attack_path(either, or_attr);
  CHECK(cheapest.total == 4);
  CHECK(cheapest.path == AttackPath{s.bc});
}

TEST_CASE("combination laws") {
  Steps s;
  Attribution attr;
  attr.set_cost(s.ab, 2);
  attr.set_cost(s.bc, 3);
  attr.set_prob(s.ab, q("0.5"));
  attr.set_prob(s.bc, q("0.25"));
  auto either = AttackTree::or_of({AttackTree::base(s.ab), AttackTree::base(s.bc)}, s.ac);

  AttrLaws laws;
  laws.and_cost = AndCostLaw::Max;
  laws.and_prob = AndProbLaw::Min;
  auto e = evaluate(s.two_step, attr, laws);
  CHECK(e.cost == Cost(3));
  CHECK(e.prob == q("0.25"));

  CHECK(evaluate(either, attr).prob == q("0.5"));
  laws = {};
  laws.or_prob = OrProbLaw::NoisyOr;
  // 1 - (1 - 1/2)(1 - 1/4) = 5/8
  CHECK(evaluate(either, attr, laws).prob == Rational(5, 8));

  auto empty_or = evaluate(AttackTree::or_of({}, s.ac), attr);
  CHECK(empty_or.cost.is_infinite());
  CHECK(empty_or.prob == 0);
  auto empty_and = evaluate(AttackTree::and_of({}, s.ac), attr);
  CHECK(empty_and.cost == Cost(0));
  CHECK(empty_and.prob == 1);
}

TEST_CASE("cheapest attack path") {
  Steps s;
  Attribution attr;
  attr.set_cost(s.ab, 2);
  attr.set_cost(s.bc, 3);
  attr.set_cost(s.ac, 9);
  auto five = s.two_step;
  auto nine = AttackTree::and_of({AttackTree::base(s.ac)}, s.ac);
  auto c = cheapest_attack_path(AttackTree::or_of({nine, five}, s.ac), attr);
  CHECK(c.total == 5);
  CHECK(c.path == AttackPath{s.ab, s.bc});

  auto single = cheapest_attack_path(AttackTree::base(s.ab), attr);
  CHECK(single.path == AttackPath{s.ab});

  attr.set_cost(s.ac, 5);
  auto tie = cheapest_attack_path(AttackTree::or_of({nine, five}, s.ac), attr);
  CHECK(tie.path == AttackPath{s.ac});

  CHECK_THROWS(cheapest_attack_path(AttackTree::or_of({}, s.ac), attr));
}

TEST_CASE("attribution checks") {
  Steps s;
  Attribution attr;
  CHECK_THROWS(attr.set_cost(s.ab, -1));
  CHECK_THROWS(attr.set_prob(s.ab, q("1.5")));
  CHECK_THROWS(attr.set_default_prob(-1));
  attr.set_cost(s.ab, 1);
  attr.set_prob(s.ab, 1);
  attr.set_prob(s.bc, 1);
  try {
    evaluate(s.two_step, attr);
    FAIL("expected a missing attribution");
  } catch (const MissingAttribution& m) {
    CHECK(m.leaf() == s.bc);
    CHECK(m.kind() == "cost");
  }
  attr.set_default_cost(10);
  CHECK(evaluate(s.two_step, attr).cost == Cost(11));
}

TEST_CASE("path probability") {
  auto ts = chain3();
  std::vector<WeightedTransition> w{{id(ts, "a"), id(ts, "b"), q("0.5")},
                                    {id(ts, "b"), id(ts, "c"), q("0.5")}};
  validate_weights(ts, w);
  CHECK(path_probability(w, path_of(ts, {"a", "b", "c"})) == q("0.25"));
  CHECK(path_probability(w, path_of(ts, {"a"})) == 1);
  w[1].weight = 0;
  CHECK(path_probability(w, path_of(ts, {"a", "b", "c"})) == 0);
  CHECK_THROWS_WITH(path_probability(w, path_of(ts, {"b", "a"})), doctest::Contains("#1 -> #0"));

  std::vector<WeightedTransition> bad{{id(ts, "a"), id(ts, "c"), q("0.5")}};
  CHECK_THROWS(validate_weights(ts, bad));
  std::vector<WeightedTransition> heavy{{id(ts, "a"), id(ts, "b"), q("3/2")}};
  CHECK_THROWS(validate_weights(ts, heavy));
}

TEST_CASE("goal distance") {
  auto ts = chain3();
  auto k = make_kripke(ts, set_of(ts, {"a"}));
  auto d = goal_distance(k, set_of(ts, {"c"}));
  CHECK(d.at(id(ts, "a")) == 2u);
  CHECK(d.at(id(ts, "b")) == 1u);
  CHECK(d.at(id(ts, "c")) == 0u);
  for (const auto& [s, dist] : goal_distance(k, ts.states()))
    CHECK(dist == 0u);

  auto lonely = make_ts({"x", "y"}, {});
  auto kl = make_kripke(lonely, set_of(lonely, {"x"}));
  CHECK_FALSE(goal_distance(kl, set_of(lonely, {"y"})).at(id(lonely, "x")).has_value());
}

TEST_CASE("goal distance properties") {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    auto k = random_kripke(rng, 10, 0.1, 0.5);
    StateSet target = random_subset(rng, k.ts().size(), 0.2);
    auto d = goal_distance(k, target);
    for (StateId s : k.reach()) {
      auto ds = d.at(s);
      CHECK((ds == 0u) == target.contains(s));
      if (ds && *ds > 0) {
        bool steps_down = false;
        for (StateId t : k.ts().out(s))
          steps_down |= d.at(t) == *ds - 1;
        CHECK(steps_down);
      }
    }
  }
}

TEST_CASE("probabilities stay in range") {
  Rng rng(42);
  for (int i = 0; i < 500; ++i) {
    AttackTree tree = random_shape(rng, 12);
    Attribution attr;
    for (const auto& leaf : leaves_of(tree))
      attr.set_prob(leaf, Rational(static_cast<long>(uniform(rng, 0, 10)), 10));
    attr.set_default_cost(1);
    for (auto law : {OrProbLaw::Max, OrProbLaw::NoisyOr}) {
      AttrLaws laws;
      laws.or_prob = law;
      auto p = evaluate(tree, attr, laws).prob;
      CHECK(p >= 0);
      CHECK(p <= 1);
    }
  }
}
