#include <random>

#include "cak/moves.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace cak;

namespace {

std::vector<Valuation> exhaustive_minimal(const Program& p, const DenseObject& d) {
    std::vector<Valuation> adm = one_step_moves(p, d, MoveOptions{false, false});
    std::vector<Valuation> out;
    for (auto& v : adm) {
        bool minimal = true;
        for (auto& w : adm) {
            if (w == v) continue;
            bool le = true;
            for (std::size_t i = 0; i < v.size(); ++i) le = le && subset(w[i], v[i]);
            if (le) minimal = false;
        }
        if (minimal) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void check_formula(const so1::Formula& f, const std::vector<std::string>& vars, const Functor& F,
                   const LiftingSet& ls, std::size_t max_n) {
    Program p = compile(f, vars, ls);
    for (std::size_t n = 1; n <= max_n; ++n)
        for (auto& t : enumerate_values(*F, n, 2, 60)) {
            auto d = make_dense(*F, t, n);
            auto moves = one_step_moves(p, d);
            INFO(so1::print(f), " n=", n);
            REQUIRE(moves == exhaustive_minimal(p, d));
        }
}

}  // namespace

TEST_CASE("minimal move families match exhaustive enumeration on random formulas") {
    std::mt19937_64 rng(31);
    std::vector<std::string> vars{"a", "b"};
    for (auto& F : {powerset_functor(), mon_functor(), bag_functor()}) {
        auto ls = builtin_liftings(F);
        for (int i = 0; i < 120; ++i) check_formula(gen::so1(rng, 10, 2, vars, {"box", "dia"}), vars, F, ls, 2);
    }
}

TEST_CASE("structured patterns: monotonized chains, unions and duals") {
    auto P = powerset_functor();
    auto ls = builtin_liftings(P);
    std::vector<std::string> vars{"a", "b", "c"};
    for (auto text : {
             "exists Z . Z sub a and exists W . W sub b and (not Z sub W and lift dia(W))",
             "exists Z . Z sub a and exists W . W sub b and dual(exists X . X sub Z and lift box(X) and not W sub X)",
             "disjoint(a, b) and (exists Z . unioneq(Z; a, b) and lift box(Z)) and (exists Y . unioneq(Y; c) and lift dia(Y))",
             "disjoint(a, b, c) and (exists Z . unioneq(Z; a, b) and (exists Y . unioneq(Y; c, a) and lift box(Z) and lift dia(Y)))",
             "dual(lift box(a) and lift dia(b)) or disjoint(a, c)",
             "dual(exists Z . Z sub a and lift dia(Z)) and lift dia(c)",
             "lift box(a) and (a sub b or lift dia(c))",
             "forall Z . Z sub a",
             "exists Z . unioneq(Z; ) and lift box(Z)",
         })
        check_formula(so1::parse(text), vars, P, ls, 3);
}

TEST_CASE("lattice-term liftings") {
    auto P = powerset_functor();
    auto ls = builtin_liftings(P);
    std::mt19937_64 rng(37);
    std::vector<std::string> vars{"a", "b"};
    for (int i = 0; i < 60; ++i) {
        auto f = gen::ml1(rng, 6, vars, {"box", "dia"});
        Program p = compile(f, vars, ls);
        for (std::size_t n = 1; n <= 3; ++n)
            for (auto& t : enumerate_values(*P, n)) {
                auto d = make_dense(*P, t, n);
                REQUIRE(one_step_moves(p, d) == exhaustive_minimal(p, d));
            }
    }
}

TEST_CASE("move caps") {
    auto P = powerset_functor();
    auto ls = builtin_liftings(P);
    Program p = compile(so1::parse("not a sub b"), {"a", "b"}, ls);
    Caps caps;
    caps.valuation_bits = 3;
    auto d = make_dense(*P, pset_value({}), 2);
    CHECK_THROWS_AS(one_step_moves(p, d, {}, caps), CapError);
    caps = Caps{};
    caps.moves = 1;
    CHECK_THROWS_AS(one_step_moves(p, d, {}, caps), CapError);
    CHECK_NOTHROW(one_step_moves(p, d, MoveOptions{true, true}));
}
