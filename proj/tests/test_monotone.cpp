#include <random>

#include "doctest.h"

#include "cak/monotone.hpp"
#include "gen_models.hpp"

using namespace cak;

namespace {

TModel mon_model(std::vector<std::vector<ElemSet>> gens, std::map<std::string, ElemSet> val) {
    std::vector<TValue> sigma;
    for (auto& g : gens) sigma.push_back(mon_value(g));
    return gen::model_from(mon_functor(), sigma, std::move(val));
}

const std::vector<std::string> kModal{"box", "dia"};

// Counts of basic members per signature, recounted without m_signature.
std::map<std::vector<std::size_t>, std::size_t> recount(const StarObject& s, const std::vector<Mask>& V, std::size_t m) {
    std::map<std::vector<std::size_t>, std::size_t> out;
    for (auto& b : s.basic) {
        std::vector<std::size_t> sig(std::size_t{1} << V.size(), 0);
        for (auto e : b) {
            std::size_t t = 0;
            for (std::size_t i = 0; i < V.size(); ++i)
                if (V[i] >> e & 1U) t += std::size_t{1} << i;
            if (sig[t] < m) ++sig[t];
        }
        ++out[sig];
    }
    return out;
}

bool recount_match(const StarObject& x, const std::vector<Mask>& vx, const StarObject& y, const std::vector<Mask>& vy,
                   std::size_t n) {
    const std::size_t m = x.params.m;
    auto a = recount(x, vx, n), b = recount(y, vy, n);
    for (auto& [sig, c] : a)
        if (std::min(c, m) != std::min(b.count(sig) ? b.at(sig) : 0, m)) return false;
    for (auto& [sig, c] : b)
        if (!a.count(sig)) return false;
    return true;
}

mmso::Formula random_mmso(std::mt19937_64& rng, int size, std::vector<std::string> vars, int quant) {
    using namespace mmso;
    auto pick = [&] { return vars[rng() % vars.size()]; };
    if (size <= 1) {
        switch (rng() % 5) {
            case 0: return sr(pick());
            case 1: return box(pick(), pick());
            case 2: return rng() % 2 ? top() : bot();
            default: return sub(pick(), pick());
        }
    }
    switch (rng() % 4) {
        case 0: return make_not(random_mmso(rng, size - 1, vars, quant));
        case 1: {
            auto a = random_mmso(rng, size / 2, vars, quant), b = random_mmso(rng, size - size / 2, vars, quant);
            return rng() % 2 ? make_or(a, b) : make_and(a, b);
        }
        default: {
            if (quant == 0) return box(pick(), pick());
            std::string z = "z" + std::to_string(vars.size());
            vars.push_back(z);
            auto body = random_mmso(rng, size - 1, vars, quant - 1);
            return rng() % 2 ? make_exists(z, body) : make_forall(z, body);
        }
    }
}

}  // namespace

TEST_CASE("bisimulation merges two neighbourhoods onto one") {
    auto m1 = mon_model({{{1}}, {}}, {{"p", {1}}});
    auto m2 = mon_model({{{1}, {2}}, {}, {}}, {{"p", {1, 2}}});
    auto r = largest_nbhd_bisim(m1, m2, false);
    REQUIRE(r);
    CHECK((*r)[0][0]);
    CHECK((*r)[1][1]);
    CHECK((*r)[1][2]);
    CHECK_FALSE((*r)[0][1]);
    std::string why;
    CHECK(is_nbhd_bisim(m1, m2, *r, &why));
    CHECK(relation_text(m1, m2, *r) == "{(s0,s0), (s1,s1), (s1,s2)}");
}

TEST_CASE("bisimulation separates a larger neighbourhood") {
    auto m1 = mon_model({{{1}}, {}}, {{"p", {1}}});
    auto m3 = mon_model({{{1, 2}}, {}, {}}, {{"p", {1}}});
    auto r = largest_nbhd_bisim(m1, m3, false);
    REQUIRE(r);
    CHECK_FALSE((*r)[0][0]);
    auto boxp = mu::parse("lift box(p)");
    auto L = builtin_liftings(mon_functor());
    CHECK(mu::eval_mu(boxp, m1, 0, L));
    CHECK_FALSE(mu::eval_mu(boxp, m3, 0, L));
    CHECK_FALSE(largest_nbhd_bisim(m1, m3, true));
}

TEST_CASE("bisimulation clause checker rejects a bad pair") {
    auto m1 = mon_model({{{1}}, {}}, {{"p", {1}}});
    auto m3 = mon_model({{{1, 2}}, {}, {}}, {{"p", {1}}});
    Relation r(2, std::vector<bool>(3, false));
    r[0][0] = r[1][1] = true;
    std::string why;
    CHECK_FALSE(is_nbhd_bisim(m1, m3, r, &why));
    CHECK(why.find("(s0,s0)") != std::string::npos);
    r[0][0] = false;
    r[1][0] = true;
    CHECK_FALSE(is_nbhd_bisim(m1, m3, r, &why));
    CHECK(why.find("colours") != std::string::npos);
}

TEST_CASE("largest bisimulation is a maximal bisimulation and preserves mu formulas") {
    std::mt19937_64 rng(17);
    auto L = builtin_liftings(mon_functor());
    for (int it = 0; it < 40; ++it) {
        auto a = gen::random_model(rng, mon_functor(), 1 + rng() % 3, {"p"});
        auto b = gen::random_model(rng, mon_functor(), 1 + rng() % 3, {"p"});
        auto r = largest_nbhd_bisim(a, b, false);
        REQUIRE(r);
        std::string why;
        REQUIRE_MESSAGE(is_nbhd_bisim(a, b, *r, &why), why);
        for (std::size_t x = 0; x < a.size(); ++x)
            for (std::size_t y = 0; y < b.size(); ++y) {
                if ((*r)[x][y]) continue;
                auto bigger = *r;
                bigger[x][y] = true;
                CHECK_FALSE(is_nbhd_bisim(a, b, bigger));
            }
        std::vector<mu::Formula> fs;
        for (int k = 0; k < 10; ++k) fs.push_back(gen::mu_formula(rng, 2 + rng() % 5, {"p"}, kModal));
        for (std::uint32_t x = 0; x < a.size(); ++x)
            for (std::uint32_t y = 0; y < b.size(); ++y)
                if ((*r)[x][y])
                    for (auto& f : fs)
                        CHECK_MESSAGE(mu::eval_mu(f, a, x, L) == mu::eval_mu(f, b, y, L), mu::print(f));
    }
}

TEST_CASE("global bisimulation preserves global modalities") {
    std::mt19937_64 rng(23);
    auto L = builtin_liftings(mon_functor());
    int total = 0, partial = 0;
    for (int it = 0; it < 60; ++it) {
        auto a = gen::random_model(rng, mon_functor(), 1 + rng() % 3, {"p"});
        auto b = gen::random_model(rng, mon_functor(), 1 + rng() % 3, {"p"});
        auto plain = largest_nbhd_bisim(a, b, false);
        auto g = largest_nbhd_bisim(a, b, true);
        CHECK(g.has_value() == is_total_both_ways(*plain));
        if (!g) {
            ++partial;
            continue;
        }
        ++total;
        for (int k = 0; k < 8; ++k) {
            auto f = gen::mu_formula(rng, 2 + rng() % 4, {"p"}, kModal);
            f = rng() % 2 ? mu::global_all(f) : mu::make_and(mu::global_some(f), gen::mu_formula(rng, 3, {"p"}, kModal));
            for (std::uint32_t x = 0; x < a.size(); ++x)
                for (std::uint32_t y = 0; y < b.size(); ++y)
                    if ((*g)[x][y]) CHECK_MESSAGE(eval_mu_global(f, a, x) == eval_mu_global(f, b, y), mu::print(f));
        }
    }
    CHECK(total > 0);
    CHECK(partial > 0);
}

TEST_CASE("global modalities through the monstar model with the whole carrier") {
    std::mt19937_64 rng(29);
    auto Lstar = builtin_liftings(monstar_functor());
    for (int it = 0; it < 30; ++it) {
        auto m = gen::random_model(rng, mon_functor(), 1 + rng() % 3, {"p"});
        auto g = to_global_mstar(m);
        CHECK(g.functor->kind == FunctorKind::MonNbhdStar);
        auto back = underlying_m(g);
        CHECK(back.sigma == m.sigma);
        for (int k = 0; k < 6; ++k) {
            auto f = gen::mu_formula(rng, 2 + rng() % 4, {"p"}, kModal);
            f = rng() % 2 ? mu::make_or(mu::global_all(f), f) : mu::global_some(mu::make_and(f, mu::prop("p")));
            auto gf = globalize(f);
            CHECK(mu::print(deglobalize(gf)) == mu::print(f));
            for (std::uint32_t s = 0; s < m.size(); ++s)
                CHECK_MESSAGE(eval_mu_global(f, m, s) == mu::eval_mu(gf, g, s, Lstar), mu::print(f));
        }
    }
    CHECK_THROWS_AS(to_global_mstar(to_global_mstar(mon_model({{}}, {}))), Error);
}

TEST_CASE("signatures of basic members") {
    auto c = make_carrier({"u", "v"});
    auto alpha = monstar_value({{0}}, {0, 1});
    auto s = construct_star(monstar_functor(), 2, alpha, {ConstructionKind::MonStar, 1, 1}, c.get());
    CHECK(s.n == 8);
    REQUIRE(s.basic.size() == 2);
    Mask va[1] = {bit(1)};
    auto V = pull_back(s.h, va);
    std::map<std::size_t, Signature> by_size;
    for (auto& b : s.basic) by_size[b.size()] = m_signature(s, b, V, 2);
    CHECK(by_size[2] == Signature{2, 0});
    CHECK(by_size[4] == Signature{2, 2});
    CHECK(signature_text(by_size[4], {"a"}) == "{{}:2, {a}:2}");
    CHECK(m_signature(s, s.basic[0], V, 1) != Signature{2, 0});
    CHECK_THROWS_AS(m_signature(s, ElemSet{0}, V, 2), Error);
}

TEST_CASE("pullback pairs match and agree on atoms") {
    std::mt19937_64 rng(31);
    auto F = monstar_functor();
    std::vector<std::vector<TValue>> values(4);
    for (std::size_t n = 1; n <= 3; ++n) values[n] = enumerate_values(*F, n, 2, 20000);
    int checked = 0;
    for (int it = 0; it < 40; ++it) {
        std::size_t nx = 1 + rng() % 3, ny = 1 + rng() % 3;
        Map f(nx);
        for (auto& x : f) x = static_cast<std::uint32_t>(rng() % ny);
        const TValue& alpha = values[nx][rng() % values[nx].size()];
        TValue beta = apply_map(*F, f, alpha);
        ConstructionParams p{ConstructionKind::MonStar, 1, 2};
        StarObject xs = construct_star(F, nx, alpha, p), ys = construct_star(F, ny, beta, p);
        std::vector<Mask> V{rng() & full_mask(ny), rng() & full_mask(ny)};
        Map fh(xs.n);
        for (std::size_t i = 0; i < xs.n; ++i) fh[i] = f[xs.h[i]];
        auto vx = pull_back(fh, V), vy = pull_back(ys.h, V);
        CHECK(models_match(xs, vx, ys, vy, 2));
        CHECK(recount_match(xs, vx, ys, vy, 2));
        CHECK(star_atoms(xs, vx) == star_atoms(ys, vy));
        ++checked;
    }
    CHECK(checked == 40);
}

TEST_CASE("matching agrees with an independent recount on perturbed valuations") {
    std::mt19937_64 rng(37);
    auto F = monstar_functor();
    auto values = enumerate_values(*F, 2, 2, 20000);
    int mismatched = 0;
    for (int it = 0; it < 60; ++it) {
        ConstructionParams p{ConstructionKind::MonStar, 1, 2};
        StarObject xs = construct_star(F, 2, values[rng() % values.size()], p);
        StarObject ys = construct_star(F, 2, values[rng() % values.size()], p);
        std::vector<Mask> vx{rng() & full_mask(xs.n)}, vy{rng() & full_mask(ys.n)};
        bool got = models_match(xs, vx, ys, vy, 1);
        CHECK(got == recount_match(xs, vx, ys, vy, 1));
        mismatched += !got;
    }
    CHECK(mismatched > 0);
}

TEST_CASE("matching ignores elements outside every basic member") {
    auto c = make_carrier({"u", "v"});
    auto alpha = monstar_value({{0}}, {0, 1});
    auto s = construct_star(monstar_functor(), 2, alpha, {ConstructionKind::MonStar, 1, 1}, c.get());
    Mask covered = 0;
    for (auto& b : s.basic) covered |= to_mask(b);
    Mask outside = full_mask(s.n) & ~covered;
    REQUIRE(outside != 0);
    std::vector<Mask> marked{outside & (~outside + 1)}, empty{0};
    CHECK(models_match(s, marked, s, empty, 2));
    auto names = star_atom_names({"a"});
    auto a1 = star_atoms(s, marked), a0 = star_atoms(s, empty);
    REQUIRE(names == std::vector<std::string>{"box(a)", "E(a)"});
    CHECK(a1[1]);
    CHECK_FALSE(a0[1]);
}

TEST_CASE("matching rejects mixed parameters") {
    auto F = monstar_functor();
    auto alpha = monstar_value({{0}}, {0});
    auto a = construct_star(F, 1, alpha, {ConstructionKind::MonStar, 1, 2});
    auto b = construct_star(F, 1, alpha, {ConstructionKind::MonStar, 1, 1});
    CHECK_THROWS_AS(models_match(a, {0}, b, {0}, 1), Error);
    auto bag = construct_star(bag_functor(), 1, bag_value({{0, 1}}), {ConstructionKind::Bag, 0, 2});
    CHECK_THROWS_AS(models_match(a, {0}, bag, {0}, 1), Error);
}

TEST_CASE("counterexample replay") {
    auto rep = counterexample_demo();
    CHECK(rep.image_ok);
    CHECK(rep.u_supports_beta);
    CHECK(rep.minimal_supports == std::vector<std::string>{"{u*,v*,w*}"});
    CHECK(rep.all_contain_v);
    CHECK(rep.restricted_side);
    CHECK(rep.y_side);
    CHECK_FALSE(rep.x_side);
    CHECK(rep.violation);
    auto j = rep.to_json();
    CHECK(j["step4_candidate"]["violation"] == true);
    CHECK(j["step1_image"]["holds"] == true);
}

TEST_CASE("MMSO parse and print") {
    for (std::string s : {"box(p, q)", "sr(p) and p sub q", "exists z . sr(z) and box(z, p)",
                          "forall z . not z sub p or box(p, z)", "not (top or bot)"}) {
        auto f = mmso::parse(s);
        CHECK(mmso::print(f) == s);
        CHECK(mmso::print(mmso::parse(mmso::print(f))) == s);
    }
    CHECK_THROWS_AS(mmso::parse("box(p)"), SyntaxError);
    CHECK_THROWS_AS(mmso::parse("exists sub . top"), SyntaxError);
    CHECK(mmso::parse("exists z . forall w . z sub w")->depth == 2);
}

TEST_CASE("MMSO examples") {
    // s0 has neighbourhood {s1}; p holds at s1
    auto m = mon_model({{{1}}, {}, {{0, 2}}}, {{"p", {1}}, {"q", {0, 1}}});
    CHECK(mmso::eval(mmso::parse("exists z . sr(z) and box(z, p)"), m, 0));
    CHECK_FALSE(mmso::eval(mmso::parse("exists z . sr(z) and box(z, p)"), m, 2));
    CHECK(mmso::eval(mmso::parse("box(q, q) or top"), m, 0));
    CHECK_FALSE(mmso::eval(mmso::parse("box(q, p)"), m, 0));
    CHECK_FALSE(mmso::eval(mmso::parse("forall z . box(z, z)"), m, 0));
    CHECK(mmso::eval(mmso::parse("forall z . box(z, z) or not z sub q"), m, 0) == false);
    auto big = mon_model(std::vector<std::vector<ElemSet>>(9), {{"p", {0}}});
    CHECK_THROWS_AS(mmso::eval(mmso::parse("exists z . z sub p"), big, 0), CapError);
    CHECK(mmso::eval(mmso::parse("p sub p"), big, 0));
}

TEST_CASE("MMSO agrees with its MSO reading") {
    std::mt19937_64 rng(41);
    auto L = builtin_liftings(mon_functor());
    for (int it = 0; it < 50; ++it) {
        auto m = gen::random_model(rng, mon_functor(), 1 + rng() % 3, {"p", "q"});
        for (int k = 0; k < 6; ++k) {
            auto f = random_mmso(rng, 2 + rng() % 5, {"p", "q"}, 2);
            auto g = mmso::to_mso(f);
            for (std::uint32_t s = 0; s < m.size(); ++s)
                CHECK_MESSAGE(mmso::eval(f, m, s) == mso::eval_mso(g, m, s, L), mmso::print(f));
        }
    }
}

TEST_CASE("counterexample data lifted to monstar matches at depth two") {
    auto F = monstar_functor();
    auto X = make_carrier({"u*", "v*", "w*"});
    auto Y = make_carrier({"u", "v"});
    const TValue alpha = monstar_value({{0, 1}, {0, 2}}, {0, 1, 2});
    const Map f{0, 1, 0};
    const TValue beta = apply_map(*F, f, alpha);
    CHECK(beta == monstar_value({{0}}, {0, 1}));
    ConstructionParams p{ConstructionKind::MonStar, 1, 2};
    auto xs = construct_star(F, 3, alpha, p, X.get()), ys = construct_star(F, 2, beta, p, Y.get());
    Map fh(xs.n);
    for (std::size_t i = 0; i < xs.n; ++i) fh[i] = f[xs.h[i]];
    for (Mask a = 0; a < 4; ++a)
        for (Mask b = 0; b < 4; ++b) {
            Mask v[2] = {a, b};
            auto vx = pull_back(fh, v), vy = pull_back(ys.h, v);
            CHECK(models_match(xs, vx, ys, vy, 2));
            CHECK(star_atoms(xs, vx) == star_atoms(ys, vy));
        }
}

TEST_CASE("bisimulation corner cases") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 10; ++i) {
        auto m = gen::random_model(rng, mon_functor(), 1 + rng() % 3, {"p"});
        auto r = largest_nbhd_bisim(m, m, true);
        REQUIRE(r);
        for (std::size_t s = 0; s < m.size(); ++s) CHECK((*r)[s][s]);
    }
    auto a = mon_model({{}}, {{"p", {0}}}), b = mon_model({{}}, {});
    auto r = largest_nbhd_bisim(a, b, false);
    REQUIRE(r);
    CHECK_FALSE((*r)[0][0]);
    CHECK(relation_text(a, b, *r) == "{}");
    // the duplicated successor of a three-point model is related to the single one
    auto two = mon_model({{{1}}, {{1}}}, {{"p", {1}}});
    auto three = mon_model({{{1}, {2}}, {{1}}, {{2}}}, {{"p", {1, 2}}});
    auto r2 = largest_nbhd_bisim(two, three, true);
    REQUIRE(r2);
    CHECK((*r2)[1][1]);
    CHECK((*r2)[1][2]);
    CHECK((*r2)[0][0]);
}

TEST_CASE("global monstar model keeps the whole carrier as support") {
    auto one = to_global_mstar(mon_model({{}}, {}));
    CHECK(one.sigma[0].set == ElemSet{0});
    TModel y;
    y.functor = mon_functor();
    y.carrier = make_carrier({"u", "v"});
    y.sigma = {mon_value({{0}}), mon_value({})};
    auto g = to_global_mstar(y);
    CHECK(g.sigma[0] == monstar_value({{0}}, {0, 1}));
    CHECK(underlying_m(g).sigma == y.sigma);
}

TEST_CASE("signature counting") {
    auto F = monstar_functor();
    auto s = construct_star(F, 2, monstar_value({{0, 1}}, {0, 1}), {ConstructionKind::MonStar, 1, 1});
    REQUIRE(s.basic.size() == 1);
    REQUIRE(s.basic[0].size() == 4);
    CHECK(m_signature(s, s.basic[0], {0}, 2) == Signature{2, 0});
    CHECK(m_signature(s, s.basic[0], {bit(s.basic[0][0])}, 2) == Signature{2, 1});
    std::mt19937_64 rng(47);
    for (int i = 0; i < 10; ++i) {
        std::vector<Mask> v{rng() & full_mask(s.n), rng() & full_mask(s.n)};
        CHECK(models_match(s, v, s, v, 1));
        CHECK(models_match(s, v, s, v, 2));
    }
}

TEST_CASE("star atoms are the one-step atoms") {
    auto F = monstar_functor();
    auto L = builtin_liftings(F);
    auto values = enumerate_values(*F, 2, 2, 20000);
    std::vector<so1::Formula> atoms{so1::sub("a", "b"), so1::sub("b", "a"), so1::lift("box", {"a"}), so1::lift("E", {"a"}),
                                    so1::lift("box", {"b"}), so1::lift("E", {"b"})};
    std::mt19937_64 rng(53);
    for (auto& v : values) {
        auto s = construct_star(F, 2, v, {ConstructionKind::MonStar, 1, 1});
        for (int i = 0; i < 4; ++i) {
            std::vector<Mask> V{rng() & full_mask(s.n), rng() & full_mask(s.n)};
            OneStepModel om{F, s.n, s.alpha, {{"a", V[0]}, {"b", V[1]}}};
            std::vector<bool> expect;
            for (auto& a : atoms) expect.push_back(so1::eval(a, om, L));
            CHECK(star_atoms(s, V) == expect);
        }
    }
}

TEST_CASE("globalize on small cases") {
    auto f = mu::global_some(mu::prop("p"));
    CHECK(mu::print(globalize(f)) == "lift E(p)");
    auto plain = mu::parse("mu x . p or lift dia(x)");
    CHECK(mu::print(globalize(plain)) == mu::print(plain));
    auto all_top = globalize(mu::global_all(mu::top()));
    auto Lstar = builtin_liftings(monstar_functor());
    gen::for_each_model(mon_functor(), 2, {"p"}, [&](const TModel& m) {
        auto g = to_global_mstar(m);
        for (std::uint32_t s = 0; s < 2; ++s) {
            CHECK(mu::eval_mu(globalize(f), g, s, Lstar) == eval_mu_global(f, m, s));
            CHECK(mu::eval_mu(all_top, g, s, Lstar));
        }
        return true;
    });
}

TEST_CASE("MMSO box clause on the counterexample model") {
    TModel y;
    y.functor = mon_functor();
    y.carrier = make_carrier({"u", "v"});
    y.sigma = {mon_value({{0}}), mon_value({})};
    y.valuation = {{"p", {0}}, {"q", {0}}};
    CHECK(mmso::eval(mmso::parse("box(p, q)"), y, 0));
    CHECK(mmso::eval(mmso::parse("box(r, q)"), y, 0));
    y.valuation["p"] = {1};
    CHECK_FALSE(mmso::eval(mmso::parse("box(p, q)"), y, 0));
}
