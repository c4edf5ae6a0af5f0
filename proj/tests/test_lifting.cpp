#include <random>

#include "cak/lifting.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace cak;

namespace {

// Reference semantics for the built-in unary liftings, read off the value directly.
bool reference(const std::string& name, const FunctorSpec& f, const TValue& t, std::size_t n, Mask z) {
    auto base = to_mask(base_elements(f, t));
    switch (f.kind) {
        case FunctorKind::MonNbhd:
        case FunctorKind::MonNbhdStar: {
            auto up = oracle::up_closure(t.family, n);
            Mask full = full_mask(n);
            if (name == "box") return up[z];
            if (name == "dia") return !up[full & ~z];
            if (name == "E") return (to_mask(t.set) & z) != 0;
            if (name == "Ed") return subset(to_mask(t.set), z);
            break;
        }
        case FunctorKind::Bag: {
            std::uint64_t in = 0, out = 0;
            for (auto [x, k] : t.counts) (has(z, x) ? in : out) += k;
            if (name == "box" || name == "covers") return out == 0;
            if (name == "dia") return in > 0;
            for (int k = 2; k <= 4; ++k) {
                if (name == "ge" + std::to_string(k)) return in >= static_cast<std::uint64_t>(k);
                if (name == "ge" + std::to_string(k) + "d") return out < static_cast<std::uint64_t>(k);
            }
            break;
        }
        default:
            if (name == "box") return subset(base, z);
            if (name == "dia") return (base & z) != 0;
    }
    throw Error("no reference for " + name);
}

}  // namespace

TEST_CASE("built-in liftings match their reference semantics") {
    for (auto& F : oracle::sample_functors()) {
        auto lifts = builtin_liftings(F);
        REQUIRE_FALSE(lifts.empty());
        for (auto& name : lifts.names()) {
            auto l = lifts.get(name);
            for (std::size_t n = 1; n <= 3; ++n)
                for (auto& t : enumerate_values(*F, n, 3, 2000)) {
                    auto d = make_dense(*F, t, n);
                    for (Mask z = 0; z <= full_mask(n); ++z) {
                        Mask a[1] = {z};
                        INFO(to_string(*F), " ", name);
                        REQUIRE(lifting_member(*l, d, a) == reference(name, *F, t, n, z));
                    }
                }
        }
    }
}

TEST_CASE("lifting_member examples") {
    auto star = monstar_functor();
    auto ls = builtin_liftings(star);
    TObject alpha{star, make_carrier({"u", "v"}), monstar_value({{0}}, {0, 1})};
    CHECK(lifting_member(*ls.get("box"), alpha, {{0, 1}}));
    CHECK_FALSE(lifting_member(*ls.get("E"), alpha, {{}}));
    auto ps = builtin_liftings(powerset_functor());
    TObject beta{powerset_functor(), make_carrier({"a", "b"}), pset_value({0, 1})};
    CHECK(lifting_member(*ps.get("dia"), beta, {{1}}));
    CHECK_THROWS_AS(lifting_member(*ps.get("dia"), beta, {{1}, {0}}), Error);
}

TEST_CASE("built-in liftings are monotone and have involutive duals") {
    for (auto& F : oracle::sample_functors()) {
        auto lifts = builtin_liftings(F);
        for (auto& name : lifts.names()) {
            auto l = lifts.get(name);
            auto dd = dual_lifting(dual_lifting(l));
            auto registered = lifts.find(l->dual_name);
            auto d = dual_lifting(l);
            for (std::size_t n = 1; n <= 3; ++n)
                for (auto& t : enumerate_values(*F, n, 2, 2000)) {
                    auto obj = make_dense(*F, t, n);
                    for (Mask z = 0; z <= full_mask(n); ++z) {
                        Mask a[1] = {z};
                        bool v = l->eval(obj, a);
                        REQUIRE(dd->eval(obj, a) == v);
                        if (registered) REQUIRE(registered->eval(obj, a) == d->eval(obj, a));
                        for (std::size_t x = 0; x < n; ++x) {
                            Mask b[1] = {z | bit(x)};
                            if (v) REQUIRE(l->eval(obj, b));
                        }
                    }
                }
        }
    }
}

TEST_CASE("built-in liftings are natural") {
    for (auto& F : {powerset_functor(), mon_functor(), monstar_functor(), bag_functor()}) {
        auto lifts = builtin_liftings(F);
        for (auto& name : lifts.names()) {
            auto rep = check_naturality(*lifts.get(name), 200000, 3);
            INFO(rep.square);
            CHECK_FALSE(rep.violated);
        }
    }
}

TEST_CASE("constant liftings are natural") {
    auto t = yoneda_lifting(powerset_functor(), 1, enumerate_values(*powerset_functor(), 2));
    CHECK_FALSE(check_naturality(*t.lifting, 5000).violated);
}

TEST_CASE("an unnatural evaluator is caught") {
    auto l = std::make_shared<Lifting>();
    l->name = "small";
    l->functor = powerset_functor();
    l->eval = [](const DenseObject& d, std::span<const Mask>) { return d.n <= 1; };
    auto rep = check_naturality(*l, 100000);
    CHECK(rep.violated);
    CHECK_FALSE(rep.square.empty());
}

TEST_CASE("yoneda representation of the diamond") {
    auto P = powerset_functor();
    // T(2) for the powerset: subsets of {0,1}; 1 encodes membership in Z
    auto rep = yoneda_lifting(P, 1, {pset_value({1}), pset_value({0, 1})}, "ydia");
    CHECK(rep.monotone);
    auto dia = builtin_liftings(P).get("dia");
    for (std::size_t n = 1; n <= 3; ++n)
        for (auto& t : enumerate_values(*P, n)) {
            auto d = make_dense(*P, t, n);
            for (Mask z = 0; z <= full_mask(n); ++z) {
                Mask a[1] = {z};
                REQUIRE(rep.lifting->eval(d, a) == dia->eval(d, a));
            }
        }
}

TEST_CASE("yoneda tables: empty, full, non-monotone, and rejected functors") {
    auto P = powerset_functor();
    auto none = yoneda_lifting(P, 1, {});
    auto all = yoneda_lifting(P, 1, enumerate_values(*P, 2));
    for (auto& t : enumerate_values(*P, 2)) {
        auto d = make_dense(*P, t, 2);
        for (Mask z = 0; z < 4; ++z) {
            Mask a[1] = {z};
            CHECK_FALSE(none.lifting->eval(d, a));
            CHECK(all.lifting->eval(d, a));
        }
    }
    auto neg = yoneda_lifting(P, 1, {pset_value({0})});  // "every successor lies outside Z, and there is one"
    CHECK_FALSE(neg.monotone);
    CHECK_FALSE(neg.witness.empty());
    CHECK_THROWS_AS(yoneda_lifting(bag_functor(), 1, {}), Error);
    std::vector<TValue> has_one;
    for (auto& t : enumerate_values(*mon_functor(), 2))
        if (nbhd_contains(t, {1})) has_one.push_back(t);
    CHECK(has_one.size() == 3);
    auto mon = yoneda_lifting(mon_functor(), 1, has_one, "mbox");
    CHECK(mon.monotone);
    auto box = builtin_liftings(mon_functor()).get("box");
    for (std::size_t n = 1; n <= 3; ++n)
        for (auto& t : enumerate_values(*mon_functor(), n)) {
            auto d = make_dense(*mon_functor(), t, n);
            for (Mask z = 0; z <= full_mask(n); ++z) {
                Mask a[1] = {z};
                REQUIRE(mon.lifting->eval(d, a) == box->eval(d, a));
            }
        }
}
