// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <deque>
#include <fstream>
#include <sstream>

#include "rrcheck/dsl/model_text.hpp"
#include "rrcheck/infra_model.hpp"
#include "support/infra_gen.hpp"
#include "support/oracles.hpp"

using namespace rrc;
using namespace rrc::infra;
using rrc::testing::Rng;
using rrc::testing::coin;
using rrc::testing::uniform;
using rrc::testing::random_model;

namespace {

InfraModel model(std::string_view text) { return dsl::parse_model(text); }

const char* kOffice = R"(
credential key
location lobby physical
location office physical data{memo}
location vault physical
edge lobby office
edge office lobby
edge office vault
actor alice creds{key} role{staff}
actor bob role{guest}
actor eve role{guest}
tipped eve impersonates{staff}
policy office: role(staff) or role(guest) -> {move, get}
policy lobby: true -> {move}
policy vault: has(key) -> {move}
init alice@lobby
init bob@lobby
init eve@lobby
)";

ActionInstance move(std::string who, std::string from, std::string to) {
  return {ActionKind::Move, std::move(who), std::move(from), std::move(to), std::nullopt};
}

} // namespace

TEST_CASE("enables") {
  auto m = model(kOffice);
  auto s = initial_state(m);
  CHECK(enables(m, s, "alice", "vault", ActionKind::Move));
  CHECK_FALSE(enables(m, s, "bob", "vault", ActionKind::Move));
  CHECK_FALSE(enables(m, s, "alice", "vault", ActionKind::Get));
  CHECK(enables(m, s, "bob", "office", ActionKind::Get));
  CHECK_FALSE(enables(m, s, "bob", "office", ActionKind::Put));
  CHECK_THROWS(enables(m, s, "mallory", "office", ActionKind::Move));

  auto empty = model("location here physical\nactor solo\ninit solo@here\n");
  auto es = initial_state(empty);
  for (auto k : {ActionKind::Move, ActionKind::Get, ActionKind::Put})
    CHECK_FALSE(enables(empty, es, "solo", "here", k));
}

TEST_CASE("impersonation widens what a tipped actor may do") {
  auto m = model(R"(
credential key
location hall physical
location vault physical
edge hall vault
actor keeper creds{key} role{warden}
actor mole role{clerk}
tipped mole impersonates{warden}
policy vault: role(warden) -> {move}
policy hall: is(keeper) -> {move}
init keeper@hall
init mole@hall
)");
  auto s = initial_state(m);
  CHECK(enables(m, s, "mole", "vault", ActionKind::Move));
  // Impersonating a role does not confer another actor's identity.
  CHECK_FALSE(enables(m, s, "mole", "hall", ActionKind::Move));

  auto as_keeper = dsl::apply_patch(m, "tipped mole impersonates{keeper}\n");
  CHECK(enables(as_keeper, s, "mole", "hall", ActionKind::Move));
  CHECK(enables(as_keeper, s, "mole", "vault", ActionKind::Move));

  auto honest = dsl::apply_patch(m, "remove tipped mole\n");
  CHECK_FALSE(enables(honest, s, "mole", "vault", ActionKind::Move));
}

TEST_CASE("apply_action") {
  auto m = model(kOffice);
  auto s = initial_state(m);
  auto t = apply_action(m, s, move("alice", "lobby", "office"));
  CHECK(t.position[*m.actor_index("alice")] == *m.location_index("office"));
  CHECK(t.position[*m.actor_index("bob")] == s.position[*m.actor_index("bob")]);

  CHECK_THROWS_WITH(apply_action(m, s, move("alice", "lobby", "vault")),
                    doctest::Contains("no edge lobby -> vault"));
  CHECK_THROWS_WITH(apply_action(m, s, move("bob", "office", "lobby")),
                    doctest::Contains("not at office"));

  ActionInstance grab{ActionKind::Get, "alice", "office", "office", "memo"};
  auto u = apply_action(m, t, grab);
  CHECK(u.holdings[*m.actor_index("alice")].contains("memo"));
  ActionInstance missing{ActionKind::Get, "alice", "office", "office", "plans"};
  CHECK_THROWS(apply_action(m, t, missing));

  // Equal inputs give equal outputs.
  CHECK(apply_action(m, s, move("alice", "lobby", "office")) == t);
}

TEST_CASE("refresh-on-move draws from the pool") {
  auto m = model(R"(
location home physical
location shop physical
location park physical
edge home shop
edge shop park
actor alice
policy shop: true -> {move}
policy park: true -> {move}
observe shop eph
observe park eph
hook on-move alice refresh eph pool{e1, e2}
init alice@home
init alice.eph = e1
)");
  auto s0 = initial_state(m);
  auto s1 = apply_action(m, s0, move("alice", "home", "shop"));
  CHECK(s1.kv[0].at("eph") == "e1");
  auto s2 = apply_action(m, s1, move("alice", "shop", "park"));
  CHECK(s2.kv[0].at("eph") == "e2");
  CHECK(state_key(m, s2) == "alice@park, alice.eph=e2, shop saw{alice.eph=e1}, "
                            "park saw{alice.eph=e2}");
}

TEST_CASE("enumerate_actions") {
  auto lone = model("location here physical\nactor solo\ninit solo@here\n");
  CHECK(enumerate_actions(lone, initial_state(lone)).empty());

  auto two = model(R"(
location l1 physical
location l2 physical
edge l1 l2
actor a
policy l2: true -> {move}
init a@l1
)");
  auto acts = enumerate_actions(two, initial_state(two));
  REQUIRE(acts.size() == 1);
  CHECK(acts[0] == move("a", "l1", "l2"));

  auto pair = model(R"(
location l1 physical
location l2 physical
edge l1 l2
actor first
actor second
policy l2: true -> {move}
init first@l1
init second@l1
)");
  auto both = enumerate_actions(pair, initial_state(pair));
  REQUIRE(both.size() == 2);
  CHECK(both[0].actor == "first");
  CHECK(both[1].actor == "second");
}

TEST_CASE("explore") {
  auto lone = model("location here physical\nactor solo\ninit solo@here\n");
  auto x = explore(lone, 10);
  CHECK(x.table.size() == 1);
  CHECK(x.kripke.ts().edge_count() == 0);
  CHECK_FALSE(x.truncated);

  auto free = model(R"(
location l1 physical
location l2 physical
edge l1 l2
edge l2 l1
actor a
policy l1: true -> {move}
policy l2: true -> {move}
init a@l1
)");
  auto fx = explore(free, 10);
  CHECK(fx.table.size() == 2);
  CHECK(fx.kripke.ts().edge_count() == 2);
  for (const auto& [edge, acts] : fx.edge_labels)
    CHECK(acts.front().kind == ActionKind::Move);

  auto cut = explore(free, 1);
  CHECK(cut.truncated);
  CHECK(cut.table.size() == 1);

  StateSet at_l2 = predicate_states(free, fx.table, {StatePredicate::Kind::ActorAt, {"a", "l2"}});
  CHECK(at_l2.size() == 1);
  CHECK(predicate_states(free, fx.table, {}).size() == 2);
}

namespace {

// Hand-rolled simulation of the patched ephemeral-id model: alice cycles
// home -> shop -> park -> home; shop and park record her id on arrival; the
// hook picks the first of e1, e2 not recorded at the other observer.
struct CwaState {
  int pos;              // 0 home, 1 shop, 2 park
  int eph;              // 1 or 2
  int shop_rec, park_rec; // 0 = nothing recorded
  auto operator<=>(const CwaState&) const = default;
};

std::set<CwaState> cwa_states(bool refresh) {
  std::set<CwaState> seen;
  std::deque<CwaState> todo{{0, 1, 0, 0}};
  seen.insert(todo.front());
  while (!todo.empty()) {
    CwaState s = todo.front();
    todo.pop_front();
    CwaState t = s;
    t.pos = (s.pos + 1) % 3;
    if (refresh) {
      for (int v : {1, 2}) {
        bool used = (t.pos != 1 && s.shop_rec == v) || (t.pos != 2 && s.park_rec == v);
        if (!used) {
          t.eph = v;
          break;
        }
      }
    }
    if (t.pos == 1)
      t.shop_rec = t.eph;
    if (t.pos == 2)
      t.park_rec = t.eph;
    if (seen.insert(t).second)
      todo.push_back(t);
  }
  return seen;
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(RRCHECK_FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("ephemeral-id exploration matches a hand enumeration") {
  auto base = dsl::parse_model(read_fixture("cwa.infra"));
  auto patched = dsl::apply_patch(base, read_fixture("cwa-refresh.patch"));
  StatePredicate linkable{StatePredicate::Kind::Linkable, {"alice"}};

  for (bool refresh : {false, true}) {
    const auto& m = refresh ? patched : base;
    auto x = explore(m, 1000);
    auto expect = cwa_states(refresh);
    CHECK(x.table.size() == expect.size());
    std::size_t linked = 0;
    for (const auto& s : expect)
      linked += s.shop_rec != 0 && s.shop_rec == s.park_rec;
    CHECK(predicate_states(m, x.table, linkable).size() == linked);
    if (refresh)
      CHECK(linked == 0);
    else
      CHECK(linked > 0);
  }
}

TEST_CASE("atoms resolve against the model") {
  auto m = model(kOffice);
  CHECK(resolve_atom(m, {"actor-at", {"alice", "vault"}}).kind == StatePredicate::Kind::ActorAt);
  CHECK_THROWS_WITH(resolve_atom(m, {"actor-at", {"alice"}}), doctest::Contains("actor-at"));
  CHECK_THROWS(resolve_atom(m, {"actor-at", {"zed", "vault"}}));
  CHECK_THROWS(resolve_atom(m, {"teleported", {}}));
  CHECK(resolve_atom(m, {"true", {}}).kind == StatePredicate::Kind::True);
}

TEST_CASE("semantic invariants on random models") {
  Rng rng(51);
  for (int i = 0; i < 150; ++i) {
    InfraModel plain = random_model(rng);
    InfraModel tipped = plain;
    tipped.actors[1].tipped = true;
    tipped.actors[1].impersonates = {coin(rng, 0.5) ? "r1" : "x"};

    auto x = explore(plain, 5000);
    REQUIRE_FALSE(x.truncated);
    auto again = explore(plain, 5000);
    CHECK(again.table == x.table);
    CHECK(again.kripke.ts().edges() == x.kripke.ts().edges());

    for (const auto& [edge, acts] : x.edge_labels)
      for (const auto& act : acts) {
        const auto& from = x.table[edge.first.index];
        CHECK(enables(plain, from, act.actor, act.target, act.kind));
        CHECK(apply_action(plain, from, act) == x.table[edge.second.index]);
      }

    for (const auto& s : x.table)
      for (const auto& actor : plain.actors)
        for (const auto& loc : plain.locations)
          for (auto k : {ActionKind::Move, ActionKind::Get, ActionKind::Put}) {
            bool on = enables(plain, s, actor.id, loc.id, k);
            if (on)
              CHECK(enables(tipped, s, actor.id, loc.id, k));
            InfraState richer = s;
            richer.holdings[*plain.actor_index(actor.id)].insert("k1");
            if (on)
              CHECK(enables(plain, richer, actor.id, loc.id, k));
          }
  }
}
