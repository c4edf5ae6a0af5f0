#include <random>

#include "doctest.h"

#include "cak/samples.hpp"
#include "cak/uniform.hpp"
#include "gen_models.hpp"

using namespace cak;

namespace {

Automaton from_text(const std::string& s) { return automaton_from_json(Json::parse(s)); }

std::vector<Functor> polynomial_functors() {
    return {product_functor(id_functor(), const_functor({"c", "d"})),
            coproduct_functor({id_functor(), product_functor(id_functor(), id_functor())}),
            exp_functor(id_functor(), {"l", "r"})};
}

// Bag model on a DAG: σ(i) only uses states above i, so every unravelling is finite.
TModel bag_dag(std::mt19937_64& rng, std::size_t n) {
    std::vector<TValue> sigma;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<std::uint32_t, std::uint64_t>> c;
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng() % 2) c.emplace_back(static_cast<std::uint32_t>(j), 1 + rng() % 2);
        sigma.push_back(bag_value(c));
    }
    return gen::model_from(bag_functor(), sigma, {{"p", to_elems(rng() & full_mask(n))}});
}

std::vector<Automaton> bag_automata() {
    std::vector<std::string> texts{
        R"J({"states": ["a", "b"], "initial": "a", "priority": {"a": 1, "b": 2}, "chromatic": ["p"],
            "delta": {"a": {"p": "lift ge2(a)", "": "lift box(b)"}, "b": {"p": "top", "": "lift dia(a) or lift box(b)"}}})J",
        R"J({"states": ["a", "b"], "initial": "a", "priority": {"a": 0, "b": 1}, "chromatic": ["p"],
            "delta": {"a": {"p": "exists Z . Z sub a and lift ge2(Z)", "": "forall V . V sub b"},
                      "b": {"p": "lift covers(a)", "": "lift dia(b)"}}})J",
        R"J({"states": ["a"], "initial": "a", "priority": {"a": 2}, "chromatic": ["p"],
            "delta": {"a": {"p": "lift box(a)", "": "lift ge2d(a) and lift dia(a)"}}})J",
        R"J({"states": ["a", "b"], "initial": "b", "priority": {"a": 3, "b": 2}, "chromatic": ["p"],
            "delta": {"a": {"p": "exists Z . Z sub b and lift ge3(Z) and lift dia(a)", "": "lift ge2(b)"},
                      "b": {"p": "lift box(a)", "": "lift dia(b) or lift covers(a)"}}})J",
    };
    std::vector<Automaton> out;
    for (auto& t : texts) out.push_back(from_text(t));
    return out;
}

}  // namespace

TEST_CASE("bag construction on a two-element bag") {
    auto c = make_carrier({"x"});
    auto s = construct_star(bag_functor(), 1, bag_value({{0, 2}}), {ConstructionKind::Bag, 0, 1}, c.get());
    CHECK(s.n == 2);
    CHECK(s.labels == std::vector<std::string>{"(x,0)", "(x,1)"});
    CHECK(s.h == Map{0, 0});
    CHECK(s.alpha == bag_value({{0, 1}, {1, 1}}));
}

TEST_CASE("powerset construction with two copies") {
    auto c = make_carrier({"a", "b"});
    auto s = construct_star(powerset_functor(), 2, pset_value({0, 1}), {ConstructionKind::Powerset, 0, 2}, c.get());
    CHECK(s.n == 4);
    CHECK(s.alpha == pset_value({0, 1, 2, 3}));
    CHECK(s.h == Map{0, 0, 1, 1});
    CHECK(apply_map(*powerset_functor(), s.h, s.alpha) == pset_value({0, 1}));
}

TEST_CASE("monstar construction on one point") {
    auto c = make_carrier({"u"});
    auto alpha = monstar_value({{0}}, {0});
    auto s = construct_star(monstar_functor(), 1, alpha, {ConstructionKind::MonStar, 1, 1}, c.get());
    CHECK(s.n == 2);
    CHECK(s.labels == std::vector<std::string>{"(u,0,{u},0)", "(u,1,{u},0)"});
    CHECK(s.alpha.set == ElemSet{0, 1});
    REQUIRE(s.basic.size() == 1);
    CHECK(s.basic[0] == ElemSet{0, 1});
    CHECK(s.alpha.family == std::vector<ElemSet>{{0, 1}});
}

TEST_CASE("construction law holds on every value over small carriers") {
    std::vector<std::pair<Functor, ConstructionKind>> cases{
        {powerset_functor(), ConstructionKind::Powerset}, {bag_functor(), ConstructionKind::Bag},
        {monstar_functor(), ConstructionKind::MonStar}, {mon_functor(), ConstructionKind::NaiveMon}};
    for (auto& f : polynomial_functors()) cases.emplace_back(f, ConstructionKind::Polynomial);
    std::size_t before = construction_law_checks(), calls = 0;
    for (auto& [f, kind] : cases)
        for (std::size_t n = 0; n <= 3; ++n)
            for (auto& v : enumerate_values(*f, n, 3))
                for (int k : {0, 1})
                    for (std::size_t m : {1, 2}) {
                        auto s = construct_star(f, n, v, {kind, k, m});
                        ++calls;
                        CHECK(apply_map(*f, s.h, s.alpha) == v);
                        check_value(*f, s.alpha, s.n);
                        if (kind == ConstructionKind::MonStar) CHECK(s.alpha.set.size() == s.n);
                    }
    CHECK(construction_law_checks() - before == calls);
}

TEST_CASE("plain neighbourhood functor has no default construction") {
    CHECK_THROWS_AS(default_construction(*mon_functor()), Error);
    CHECK_THROWS_AS(construct_star(mon_functor(), 1, mon_value({{0}}), {ConstructionKind::MonStar, 0, 1}), Error);
}

TEST_CASE("phi* of top is constantly true") {
    auto F = powerset_functor();
    auto L = builtin_liftings(F);
    auto l = so_to_ml_lifting("t", so1::top(), {}, F, L, {{ConstructionKind::Powerset, 0, 1}, {}, true});
    for (std::size_t n = 0; n <= 3; ++n)
        for (auto& v : enumerate_values(*F, n)) CHECK(l->eval(make_dense(*F, v, n), {}));
}

TEST_CASE("phi* for a covering formula over bags") {
    auto F = bag_functor();
    auto L = builtin_liftings(F);
    auto phi = so1::parse("exists Z . lift covers(Z) and Z sub a");
    auto l = so_to_ml_lifting("c", phi, {"a"}, F, L, {{ConstructionKind::Bag, 1, 1}, {}, true});
    for (std::size_t n = 1; n <= 3; ++n)
        for (auto& v : enumerate_values(*F, n, 2)) {
            auto d = make_dense(*F, v, n);
            for (Mask a = 0; a <= full_mask(n); ++a) {
                Mask arg[1] = {a};
                CHECK(l->eval(d, arg) == subset(d.set, a));
            }
        }
}

TEST_CASE("phi* for box over monstar is membership of the support part") {
    auto F = monstar_functor();
    auto L = builtin_liftings(F);
    auto l = so_to_ml_lifting("b", so1::parse("lift box(a)"), {"a"}, F, L, {{ConstructionKind::MonStar, 0, 1}, {}, true});
    for (std::size_t n = 1; n <= 3; ++n)
        for (auto& v : enumerate_values(*F, n)) {
            auto d = make_dense(*F, v, n);
            for (Mask a = 0; a <= full_mask(n); ++a) {
                Mask arg[1] = {a};
                CHECK(l->eval(d, arg) == nbhd_contains(v, to_elems(a & d.set)));
            }
        }
}

TEST_CASE("phi* rejects non-monotone formulas and excess depth") {
    auto F = powerset_functor();
    auto L = builtin_liftings(F);
    CHECK_THROWS_AS(so_to_ml_lifting("n", so1::parse("not lift dia(a)"), {"a"}, F, L,
                                     {{ConstructionKind::Powerset, 0, 1}, {}, true}),
                    Error);
    CHECK_THROWS_AS(so_to_ml_lifting("d", so1::parse("exists Z . Z sub a and lift dia(Z)"), {"a"}, F, L,
                                     {{ConstructionKind::Powerset, 0, 1}, {}, true}),
                    Error);
}

TEST_CASE("powerset phi* agrees with the modal reading") {
    auto F = powerset_functor();
    auto L = builtin_liftings(F);
    // two distinct successors in a
    auto phi = so1::parse("exists Z . Z sub a and lift dia(Z) and not (a sub Z)");
    Caps caps;
    caps.quantifier = 12;
    auto l = so_to_ml_lifting("two", phi, {"a"}, F, L, {{ConstructionKind::Powerset, 1, 2}, caps, true});
    for (std::size_t n = 1; n <= 3; ++n)
        for (auto& v : enumerate_values(*F, n)) {
            auto d = make_dense(*F, v, n);
            for (Mask a = 0; a <= full_mask(n); ++a) {
                Mask arg[1] = {a};
                // copies make a single successor in a count as two
                CHECK(l->eval(d, arg) == ((d.set & a) != 0));
            }
        }
    caps.quantifier = 8;
    auto capped = so_to_ml_lifting("two", phi, {"a"}, F, L, {{ConstructionKind::Powerset, 1, 2}, caps, true});
    Mask arg[1] = {7};
    CHECK_THROWS_AS(capped->eval(make_dense(*F, pset_value({0, 1, 2}), 3), arg), CapError);
}

TEST_CASE("translated automaton keeps states and priorities") {
    auto F = bag_functor();
    auto L = builtin_liftings(F);
    auto top = from_text(R"J({"states": ["a"], "initial": "a", "priority": {"a": 0}, "chromatic": [],
                               "delta": {"a": {"": "top"}}})J");
    auto t = translate_automaton(top, F, L, {{ConstructionKind::Bag, 0, 1}, {}, true});
    CHECK(t.automaton.states == top.states);
    CHECK(t.automaton.priority == top.priority);
    CHECK(t.automaton.initial == top.initial);
    CHECK(t.automaton.flavor == Flavor::ML1);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        auto m = gen::random_model(rng, F, 1 + rng() % 3, {});
        for (bool b : accepting_points(t.automaton, m, GameMode::Full, t.lifts)) CHECK(b);
    }
    for (auto& a : bag_automata()) {
        auto ta = translate_automaton(a, F, L, {{ConstructionKind::Bag, 1, 1}, {}, true});
        CHECK(ta.automaton.states == a.states);
        CHECK(ta.automaton.priority == a.priority);
        CHECK(ta.automaton.initial == a.initial);
        CHECK(ta.automaton.chromatic == a.chromatic);
    }
}

TEST_CASE("unravelling a point without successors") {
    auto m = kripke_model({{}}, {{"p", {0}}});
    auto u = unravel(m, 0, {ConstructionKind::Powerset, 0, 2}, 3);
    CHECK(u.tree.size() == 1);
    CHECK(u.gamma == Map{0});
    CHECK(u.total);
    CHECK(u.tree.valuation.at("p") == ElemSet{0});
}

TEST_CASE("bag unravelling has one child per unit of multiplicity") {
    auto m = gen::model_from(bag_functor(), {bag_value({{0, 1}, {1, 2}}), bag_value({{0, 1}})}, {{"p", {1}}});
    auto u = unravel(m, 1, {ConstructionKind::Bag, 0, 1}, 3);
    CHECK(u.gamma[0] == 1);
    CHECK(is_tree(u.tree));
    validate_frame(u.tree);
    const auto& frame = *u.tree.frame;
    for (std::size_t v = 0; v < u.tree.size(); ++v) {
        std::uint64_t total = 0;
        for (auto [x, c] : m.sigma[u.gamma[v]].counts) total += c;
        if (u.frontier[v]) {
            CHECK(frame[v].empty());
            continue;
        }
        CHECK(frame[v].size() == total);
        CHECK(apply_map(*m.functor, u.gamma, u.tree.sigma[v]) == m.sigma[u.gamma[v]]);
        CHECK(u.tree.holds("p", static_cast<std::uint32_t>(v)) == m.holds("p", u.gamma[v]));
    }
    CHECK_FALSE(u.total);
}

TEST_CASE("bag acceptance transfers along the unravelling") {
    auto F = bag_functor();
    auto L = builtin_liftings(F);
    std::mt19937_64 rng(11);
    auto automata = bag_automata();
    std::vector<TranslatedAutomaton> stars;
    for (auto& a : automata) stars.push_back(translate_automaton(a, F, L, {{ConstructionKind::Bag, 1, 1}, {}, true}));
    int models = 0;
    while (models < 12) {
        auto m = bag_dag(rng, 2 + rng() % 3);
        auto u = unravel(m, 0, {ConstructionKind::Bag, 1, 1}, 6);
        REQUIRE(u.total);
        ++models;
        for (std::size_t i = 0; i < automata.size(); ++i) {
            bool tree = accepts(automata[i], u.tree, 0, GameMode::Tree, L);
            bool star = accepts(stars[i].automaton, m, 0, GameMode::Full, stars[i].lifts);
            CHECK_MESSAGE(tree == star, "automaton " << i << " model " << models);
        }
    }
}

TEST_CASE("unravelling is onto when the point's star map is") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        std::size_t n = 1 + rng() % 3;
        std::vector<TValue> sigma;
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::pair<std::uint32_t, std::uint64_t>> c;
            for (std::uint32_t t = 0; t < n; ++t)
                if (s == 0 || rng() % 2) c.emplace_back(t, 1 + rng() % 2);
            sigma.push_back(bag_value(c));
        }
        auto m = gen::model_from(bag_functor(), sigma, {});
        auto u = unravel(m, 0, {ConstructionKind::Bag, 0, 1}, 2);
        std::set<std::uint32_t> image(u.gamma.begin(), u.gamma.end());
        CHECK(image.size() == n);
    }
}

TEST_CASE("bag construction is strongly adequate") {
    auto F = bag_functor();
    auto L = builtin_liftings(F);
    AdequacyOptions opt;
    opt.params = {ConstructionKind::Bag, 1, 1};
    opt.k = 1;
    opt.samples = 60;
    auto rep = check_adequacy(F, L, opt);
    CHECK(rep.samples == 60);
    CHECK(rep.strong_missing == 0);
    CHECK(rep.strong_found == 60);
    CHECK(rep.violations.empty());
    CHECK(rep.formulas_checked > 0);
}

TEST_CASE("polynomial constructions are strongly adequate") {
    for (auto& F : polynomial_functors()) {
        auto L = builtin_liftings(F);
        AdequacyOptions opt;
        opt.params = {ConstructionKind::Polynomial, 1, 1};
        opt.samples = 40;
        auto rep = check_adequacy(F, L, opt);
        CHECK(rep.strong_missing == 0);
        CHECK(rep.violations.empty());
    }
}

TEST_CASE("powerset construction shows no adequacy violation") {
    auto F = powerset_functor();
    auto L = builtin_liftings(F);
    AdequacyOptions opt;
    opt.params = {ConstructionKind::Powerset, 1, 2};
    opt.samples = 60;
    opt.strong = false;
    auto rep = check_adequacy(F, L, opt);
    CHECK(rep.violations.empty());
    CHECK(rep.formulas_checked > 100);
}

TEST_CASE("monotone corpus is monotone and depth bounded") {
    for (auto& F : {powerset_functor(), bag_functor(), monstar_functor()}) {
        auto L = builtin_liftings(F);
        auto c = monotone_corpus(F, L, 1, 12, 7);
        CHECK(c.size() == 12);
        for (auto& phi : c) {
            CHECK(phi->depth <= 1);
            CHECK(is_monotone_bruteforce(phi, F, L, 2).holds);
        }
    }
}
