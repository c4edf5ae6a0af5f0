#include <random>

#include "doctest.h"

#include "cak/automata.hpp"
#include "cak/samples.hpp"

using namespace cak;

namespace {

Automaton from_text(const std::string& s) { return automaton_from_json(Json::parse(s)); }

const LiftingSet& P() {
    static LiftingSet s = builtin_liftings(powerset_functor());
    return s;
}

// q reachable along successors: least fixpoint, one state
Automaton reach_q() {
    return from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": 1}, "chromatic": ["q"],
        "flavor": "ml1", "liftings": ["dia"], "delta": {"a": {"q": "top", "": "lift dia(a)"}}})J");
}

bool reachable(const TModel& m, std::uint32_t s, const std::string& q) {
    std::vector<char> seen(m.size(), 0);
    std::vector<std::uint32_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        if (m.holds(q, x)) return true;
        for (auto t : m.sigma[x].set)
            if (!seen[t]) seen[t] = 1, stack.push_back(t);
    }
    return false;
}

}  // namespace

TEST_CASE("automata: JSON round trip and validation") {
    auto a = reach_q();
    CHECK(a.size() == 1);
    CHECK(a.colors() == 2);
    auto b = automaton_from_json(automaton_to_json(a));
    CHECK(automaton_to_json(b) == automaton_to_json(a));
    auto so = from_text(R"J({"states": ["a", "b"], "initial": "b", "priority": {"a": 0, "b": 1},
        "chromatic": ["q", "p"], "delta": {"a": {"*": "top"}, "b": {"p,q": "exists z . z sub a", "*": "bot"}}})J");
    CHECK(so.chromatic == std::vector<std::string>{"p", "q"});
    CHECK(so.delta_text(1, 3) == "exists z . z sub a");
    CHECK(so.delta_text(1, 1) == "bot");
    CHECK_THROWS_AS(from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": 0}, "delta": {"a": {}}})J"),
                    Error);
    CHECK_THROWS_AS(from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": 0},
        "delta": {"a": {"": "lift box(zz)"}}})J"), Error);
    CHECK_THROWS_AS(from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": 0},
        "delta": {"a": {"r": "top"}}})J"), Error);
    CHECK_THROWS_AS(from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": 0},
        "delta": {"a": {"": "top and"}}})J"), Error);
    CHECK(automaton_to_dot(a).find("a0 -> a0 [label=\"{}\"]") != std::string::npos);
}

TEST_CASE("automata: trivial transitions") {
    auto yes = from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": 1}, "flavor": "ml1",
        "delta": {"a": {"": "top"}}})J");
    auto no = from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": 0}, "flavor": "ml1",
        "delta": {"a": {"": "bot"}}})J");
    for_each_model(powerset_functor(), 2, {}, [&](const TModel& m) {
        for (std::uint32_t s = 0; s < 2; ++s) {
            auto g = build_acceptance_game(yes, m, s, GameMode::Full, P());
            // the only move is the empty valuation, after which ∀ is stuck
            REQUIRE(g.game.moves[g.game.start].size() == 1);
            CHECK(g.game.moves[g.game.moves[g.game.start][0]].empty());
            CHECK(accepts(yes, m, s, GameMode::Full, P()));
            CHECK(accepts(yes, m, s, GameMode::Tree, P()));
            CHECK_FALSE(accepts(no, m, s, GameMode::Full, P()));
        }
        return true;
    });
}

TEST_CASE("automata: single state on a reflexive point") {
    auto loop = kripke_model({{0}});
    for (int prio : {1, 2}) {
        auto a = from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": )J" + std::to_string(prio) +
                           R"J(}, "flavor": "ml1", "delta": {"a": {"": "lift dia(a)"}}})J");
        auto g = build_acceptance_game(a, loop, 0, GameMode::Full, P());
        CHECK(g.game.size() == 2);
        CHECK(accepts(a, loop, 0, GameMode::Full, P()) == (prio == 2));
    }
}

TEST_CASE("automata: reachability automaton vs graph search") {
    auto a = reach_q();
    for (std::size_t n = 1; n <= 3; ++n)
        for_each_model(powerset_functor(), n, {"q"}, [&](const TModel& m) {
            for (std::uint32_t s = 0; s < n; ++s) {
                CHECK(accepts(a, m, s, GameMode::Full, P()) == reachable(m, s, "q"));
                CHECK(accepts(a, m, s, GameMode::Tree, P()) == reachable(m, s, "q"));
            }
            return true;
        });
}

TEST_CASE("automata: games are sound, parallel equals serial, pruning preserves winners") {
    std::mt19937_64 rng(5);
    auto mon = builtin_liftings(mon_functor());
    const char* texts[] = {
        R"J({"states": ["a", "b"], "initial": "a", "priority": {"a": 1, "b": 2}, "chromatic": ["p"], "flavor": "ml1",
            "delta": {"a": {"p": "lift box(b) or lift dia(a)", "": "lift dia(a and b)"}, "b": {"*": "lift box(a or b)"}}})J",
        R"J({"states": ["a", "b"], "initial": "b", "priority": {"a": 3, "b": 0}, "chromatic": ["p"], "flavor": "ml1",
            "delta": {"a": {"p": "top", "": "lift box(a) and lift dia(b)"}, "b": {"p": "lift dia(a)", "": "lift box(b)"}}})J"};
    for (auto t : texts) {
        auto aut = from_text(t);
        for (int i = 0; i < 40; ++i) {
            auto m = random_model(rng, mon_functor(), 1 + rng() % 3, {"p"});
            for (std::uint32_t s = 0; s < m.size(); ++s) {
                GameOptions serial, par, full;
                par.parallel = true;
                full.minimal = false;
                auto g1 = build_acceptance_game(aut, m, s, GameMode::Full, mon, serial);
                auto g2 = build_acceptance_game(aut, m, s, GameMode::Full, mon, par);
                CHECK(g1.game == g2.game);
                auto r = solve_parity(g1.game);
                CHECK(strategy_sound(g1.game, r));
                CHECK(r.eloise_wins(g1.game.start) == accepts(aut, m, s, GameMode::Full, mon, full));
                // canonical frame: monotonicity lets ∃ shrink into supports
                CHECK(r.eloise_wins(g1.game.start) == accepts(aut, m, s, GameMode::Tree, mon));
            }
        }
    }
}

TEST_CASE("automata: tree mode with SO1 transitions") {
    // a: every successor carries p, forever
    auto all_p = from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": 0}, "chromatic": ["p"],
        "delta": {"a": {"p": "forall z . z sub a", "": "bot"}}})J");
    CHECK_THROWS_AS(accepts(all_p, kripke_model({{}}), 0, GameMode::Full, P()), Error);
    for (auto& shape : tree_shapes(4))
        for (auto& v : all_valuations(shape.size(), {"p"})) {
            auto m = pset_tree(shape, v);
            CHECK(accepts(all_p, m, 0, GameMode::Tree, P()) == (v.at("p").size() == shape.size()));
        }
    // a frame that does not support σ is rejected
    auto m = pset_tree({-1, 0}, {});
    m.frame = std::vector<ElemSet>{{}, {}};
    CHECK_THROWS_AS(accepts(all_p, m, 0, GameMode::Tree, P()), Error);
}

TEST_CASE("automata: caps and labels") {
    auto a = reach_q();
    auto m = kripke_model({{1}, {0}}, {});
    GameOptions opt;
    opt.labels = true;
    auto g = build_acceptance_game(a, m, 0, GameMode::Full, P(), opt);
    CHECK(g.game.labels[g.game.start] == "(a, s0)");
    CHECK(game_to_dot(g.game).find("(s0, {a:{s1}})") != std::string::npos);
    opt.caps.game_positions = 2;
    CHECK_THROWS_AS(build_acceptance_game(a, m, 0, GameMode::Full, P(), opt), CapError);
}
