#include <random>

#include "doctest.h"

#include "cak/constructions.hpp"
#include "cak/samples.hpp"
#include "gen_models.hpp"

using namespace cak;

namespace {

const LiftingSet& P() {
    static LiftingSet s = builtin_liftings(powerset_functor());
    return s;
}

Automaton from_text(const std::string& s) { return automaton_from_json(Json::parse(s)); }

bool tree_accepts(const Automaton& a, const TModel& m) { return accepts(a, m, 0, GameMode::Tree, P()); }

// Two-state monotone SO1 automata over {p}.
std::vector<Automaton> two_state_automata() {
    std::vector<std::string> texts{
        // some path visits p infinitely often
        R"J({"states": ["a", "b"], "initial": "a", "priority": {"a": 1, "b": 2}, "chromatic": ["p"],
            "delta": {"a": {"p": "lift dia(b)", "": "lift dia(a)"}, "b": {"p": "lift dia(b)", "": "lift dia(a)"}}})J",
        // every path eventually avoids p forever
        R"J({"states": ["a", "b"], "initial": "a", "priority": {"a": 1, "b": 2}, "chromatic": ["p"],
            "delta": {"a": {"p": "forall V . V sub a", "": "forall V . V sub b"},
                      "b": {"p": "forall V . V sub a", "": "forall V . V sub b"}}})J",
        // p at the root and then a successor branching to both states
        R"J({"states": ["a", "b"], "initial": "a", "priority": {"a": 2, "b": 3}, "chromatic": ["p"],
            "delta": {"a": {"p": "lift dia(a) and lift box(b)", "": "top"},
                      "b": {"p": "bot", "": "lift box(b)"}}})J",
        // some child set in a covering the children in b
        R"J({"states": ["a", "b"], "initial": "a", "priority": {"a": 0, "b": 1}, "chromatic": ["p"],
            "delta": {"a": {"p": "exists Z . Z sub a and lift dia(Z)", "": "lift box(b)"},
                      "b": {"p": "top", "": "lift dia(b) or lift box(a)"}}})J",
        // mixed priorities 1/4, stuck on ¬p
        R"J({"states": ["a", "b"], "initial": "b", "priority": {"a": 1, "b": 4}, "chromatic": ["p"],
            "delta": {"a": {"p": "lift box(a)", "": "lift dia(b)"}, "b": {"p": "lift dia(a)", "": "bot"}}})J",
    };
    std::vector<Automaton> out;
    for (auto& t : texts) out.push_back(from_text(t));
    return out;
}

}  // namespace

TEST_CASE("compile_mu agrees with eval_mu in full mode") {
    std::mt19937_64 rng(5);
    for (auto& F : {powerset_functor(), mon_functor()}) {
        auto L = builtin_liftings(F);
        std::vector<std::string> lifts{"box", "dia"};
        for (int i = 0; i < 60; ++i) {
            auto f = gen::mu_formula(rng, 2 + static_cast<int>(rng() % 6), {"p"}, lifts);
            auto a = compile_mu(f, L);
            for (int j = 0; j < 6; ++j) {
                auto m = gen::random_model(rng, F, 1 + rng() % 3, {"p"});
                auto truth = mu::eval_set(f, m, L);
                auto acc = accepting_points(a, m, GameMode::Full, L);
                for (std::uint32_t s = 0; s < m.size(); ++s)
                    REQUIRE_MESSAGE(acc[s] == truth[s], mu::print(f) << " at " << s);
            }
        }
    }
}

TEST_CASE("compile_mu handles unguarded variables") {
    auto L = builtin_liftings(powerset_functor());
    for (auto text : {"mu x . x or lift dia(x)", "nu x . (p and x) or lift box(x)", "mu x . nu y . x or (p and lift dia(y))",
                      "nu x . mu y . (lift dia(x) and p) or y or lift dia(y)"}) {
        auto f = mu::parse(text);
        auto a = compile_mu(f, L);
        std::mt19937_64 rng(1);
        for (int j = 0; j < 30; ++j) {
            auto m = gen::random_model(rng, powerset_functor(), 1 + rng() % 3, {"p"});
            auto truth = mu::eval_set(f, m, L);
            auto acc = accepting_points(a, m, GameMode::Full, L);
            for (std::uint32_t s = 0; s < m.size(); ++s) REQUIRE_MESSAGE(acc[s] == truth[s], std::string(text));
        }
    }
}

TEST_CASE("union, intersection and complement on trees") {
    auto as = two_state_automata();
    std::mt19937_64 rng(9);
    for (std::size_t i = 0; i < as.size(); ++i) {
        auto& x = as[i];
        auto& y = as[(i + 1) % as.size()];
        auto u = union_aut(x, y), n = intersect_aut(x, y), c = complement_aut(x, P());
        auto uu = union_aut(x, x);
        CHECK(is_monotone_automaton(c, P()));
        for (int t = 0; t < 30; ++t) {
            auto m = random_tree_model(rng, powerset_functor(), 5, {"p"});
            bool ax = tree_accepts(x, m), ay = tree_accepts(y, m);
            REQUIRE(tree_accepts(u, m) == (ax || ay));
            REQUIRE(tree_accepts(n, m) == (ax && ay));
            REQUIRE(tree_accepts(c, m) == !ax);
            REQUIRE(tree_accepts(uu, m) == ax);
        }
        auto cc = complement_aut(c, P());
        for (int t = 0; t < 10; ++t) {
            auto m = random_tree_model(rng, powerset_functor(), 5, {"p"});
            REQUIRE(tree_accepts(cc, m) == tree_accepts(x, m));
        }
    }
}

TEST_CASE("complement refuses non-monotone transitions and monotonize fixes them") {
    auto a = from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": 0}, "chromatic": [],
        "delta": {"a": {"": "not (forall V . V sub a)"}}})J");
    CHECK_FALSE(is_monotone_automaton(a, P()));
    CHECK_THROWS_AS(complement_aut(a, P()), Error);
    auto m = monotonize(a, P());
    CHECK(is_monotone_automaton(m, P()));
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        auto tm = random_tree_model(rng, powerset_functor(), 5, {});
        CHECK(tree_accepts(complement_aut(m, P()), tm) == !tree_accepts(m, tm));
    }
}

TEST_CASE("simulate preserves acceptance and yields special-basic transitions") {
    auto as = two_state_automata();
    std::mt19937_64 rng(21);
    for (auto& a : as) {
        SimulationInfo info;
        auto s = simulate(a, P(), &info);
        CHECK(s.size() == info.relation.size());
        for (std::uint32_t q = 0; q < s.size(); ++q)
            for (std::size_t c = 0; c < s.colors(); ++c) REQUIRE(so1::syntactically_special_basic(s.so[q][c]));
        for (int t = 0; t < 30; ++t) {
            auto m = random_tree_model(rng, powerset_functor(), 6, {"p"});
            REQUIRE(tree_accepts(s, m) == tree_accepts(a, m));
        }
    }
}

TEST_CASE("projection of a simulated automaton matches q-expansions") {
    auto a = from_text(R"J({"states": ["a", "b"], "initial": "a", "priority": {"a": 1, "b": 2}, "chromatic": ["p", "q"],
        "delta": {"a": {"p,q": "lift dia(b)", "q": "lift box(a)", "p": "lift dia(a)", "": "top"},
                  "b": {"p,q": "bot", "q": "lift dia(b)", "p": "lift box(a)", "": "lift dia(a)"}}})J");
    auto pr = project_aut(simulate(a, P()), "q");
    CHECK(pr.chromatic == std::vector<std::string>{"p"});
    std::mt19937_64 rng(4);
    for (int t = 0; t < 30; ++t) {
        auto m = random_tree_model(rng, powerset_functor(), 5, {"p"});
        bool some = false;
        for (auto& v : all_valuations(m.size(), {"q"})) {
            auto mq = m;
            mq.valuation["q"] = v.at("q");
            if (tree_accepts(a, mq)) {
                some = true;
                break;
            }
        }
        REQUIRE(tree_accepts(pr, m) == some);
    }
    CHECK_THROWS_AS(project_aut(a, "r"), Error);
}

TEST_CASE("compile_mso agrees with eval_mso on small trees") {
    std::vector<std::string> texts{"sr(p)",
                                   "em(p)",
                                   "sing(p)",
                                   "p sub p",
                                   "lift dia(p, p)",
                                   "not lift box(p, p)",
                                   "sr(p) or em(p)",
                                   "exists q . sr(q) and lift dia(q, p)",
                                   "not (exists q . sing(q) and q sub p)",
                                   "exists q . q sub p and lift box(q, q) and not em(q)",
                                   "forall q . not sr(q) or lift box(q, p)",
                                   "eq(p, p) and not sing(p)"};
    auto shapes = tree_shapes(4, 2);
    for (auto& t : texts) {
        auto f = mso::parse(t);
        auto a = compile_mso(f, P());
        for (auto& sh : shapes)
            for (auto& v : all_valuations(sh.size(), {"p"})) {
                auto m = pset_tree(sh, v);
                REQUIRE_MESSAGE(tree_accepts(a, m) == mso::eval_mso(f, m, 0, P()), t);
            }
    }
}
