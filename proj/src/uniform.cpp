#include "cak/uniform.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <random>
#include <set>
#include <tuple>

namespace cak {

namespace {

std::atomic<std::size_t> law_checks{0};

std::string set_label(const ElemSet& s, const std::vector<std::string>& names) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + names[s[i]];
    return out + "}";
}

std::vector<std::string> carrier_names(std::size_t n, const Carrier* c) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(c ? c->atoms.at(i) : "x" + std::to_string(i));
    return out;
}

// Replaces every Id leaf of t by a fresh position; h records the element each position came from.
TValue positions(const FunctorSpec& f, const TValue& t, Map& h) {
    TValue out = t;
    switch (f.kind) {
        case FunctorKind::Const: break;
        case FunctorKind::Id:
            out.index = static_cast<std::uint32_t>(h.size());
            h.push_back(t.index);
            break;
        case FunctorKind::Product:
            out.parts = {positions(*f.parts[0], t.parts[0], h), positions(*f.parts[1], t.parts[1], h)};
            break;
        case FunctorKind::Coproduct: out.parts = {positions(*f.parts[t.index], t.parts[0], h)}; break;
        case FunctorKind::Exp:
            for (std::size_t i = 0; i < t.parts.size(); ++i) out.parts[i] = positions(*f.parts[0], t.parts[i], h);
            break;
        default: throw Error("polynomial construction applied to " + to_string(f));
    }
    return out;
}

}  // namespace

std::string to_string(ConstructionKind k) {
    switch (k) {
        case ConstructionKind::Powerset: return "powerset";
        case ConstructionKind::Bag: return "bag";
        case ConstructionKind::Polynomial: return "polynomial";
        case ConstructionKind::MonStar: return "monstar";
        case ConstructionKind::NaiveMon: return "naive-mon";
    }
    return "?";
}

ConstructionKind construction_from_string(const std::string& s) {
    for (auto k : {ConstructionKind::Powerset, ConstructionKind::Bag, ConstructionKind::Polynomial,
                   ConstructionKind::MonStar, ConstructionKind::NaiveMon})
        if (to_string(k) == s) return k;
    throw Error("unknown construction '" + s + "' (powerset|bag|polynomial|monstar|naive-mon)");
}

bool construction_applies(ConstructionKind k, const FunctorSpec& f) {
    switch (k) {
        case ConstructionKind::Powerset: return f.kind == FunctorKind::Powerset;
        case ConstructionKind::Bag: return f.kind == FunctorKind::Bag;
        case ConstructionKind::Polynomial: return is_polynomial(f);
        case ConstructionKind::MonStar: return f.kind == FunctorKind::MonNbhdStar;
        case ConstructionKind::NaiveMon: return f.kind == FunctorKind::MonNbhd;
    }
    return false;
}

ConstructionKind default_construction(const FunctorSpec& f) {
    switch (f.kind) {
        case FunctorKind::Powerset: return ConstructionKind::Powerset;
        case FunctorKind::Bag: return ConstructionKind::Bag;
        case FunctorKind::MonNbhdStar: return ConstructionKind::MonStar;
        case FunctorKind::MonNbhd:
            throw Error("the monotone neighbourhood functor has no adequate uniform construction; use monstar");
        default: return ConstructionKind::Polynomial;
    }
}

bool is_truncated(ConstructionKind k) {
    return k == ConstructionKind::Powerset || k == ConstructionKind::MonStar || k == ConstructionKind::NaiveMon;
}

StarObject construct_star(const Functor& f, std::size_t n, const TValue& alpha, const ConstructionParams& p,
                          const Carrier* names) {
    if (!construction_applies(p.kind, *f))
        throw Error("construction " + to_string(p.kind) + " does not apply to functor " + to_string(*f));
    if (p.m < 1) throw Error("construction needs m >= 1");
    if (p.k < 0 || p.k > 6) throw Error("construction depth k must be in 0..6");
    auto nm = carrier_names(n, names);
    StarObject s;
    s.params = p;
    switch (p.kind) {
        case ConstructionKind::Powerset: {
            ElemSet all;
            for (auto u : alpha.set)
                for (std::size_t j = 0; j < p.m; ++j) {
                    all.push_back(static_cast<std::uint32_t>(s.h.size()));
                    s.h.push_back(u);
                    s.labels.push_back("(" + nm[u] + "," + std::to_string(j) + ")");
                }
            s.alpha = pset_value(all);
            break;
        }
        case ConstructionKind::Bag: {
            std::vector<std::pair<std::uint32_t, std::uint64_t>> ones;
            for (auto [u, c] : alpha.counts) {
                if (c > 64) throw CapError("bag count " + std::to_string(c) + " too large for the star carrier");
                for (std::uint64_t i = 0; i < c; ++i) {
                    ones.emplace_back(static_cast<std::uint32_t>(s.h.size()), 1);
                    s.h.push_back(u);
                    s.labels.push_back("(" + nm[u] + "," + std::to_string(i) + ")");
                }
            }
            s.alpha = bag_value(ones);
            break;
        }
        case ConstructionKind::Polynomial: {
            s.alpha = positions(*f, alpha, s.h);
            for (std::size_t i = 0; i < s.h.size(); ++i) s.labels.push_back(nm[s.h[i]] + "@" + std::to_string(i));
            break;
        }
        case ConstructionKind::MonStar: {
            const ElemSet& support = alpha.set;
            if (support.size() > 16) throw CapError("support too large for the monstar construction");
            const std::size_t copies = std::size_t{1} << p.k;
            for (Mask z = 1; z < (Mask{1} << support.size()); ++z) {
                ElemSet zs;
                for (auto i : elements(z)) zs.push_back(support[i]);
                const bool member = nbhd_contains(alpha, zs);
                for (std::size_t j = 0; j < p.m; ++j) {
                    ElemSet block;
                    for (auto u : zs)
                        for (std::size_t i = 0; i < copies; ++i) {
                            block.push_back(static_cast<std::uint32_t>(s.h.size()));
                            s.h.push_back(u);
                            s.labels.push_back("(" + nm[u] + "," + std::to_string(i) + "," + set_label(zs, nm) + "," +
                                               std::to_string(j) + ")");
                        }
                    if (member) {
                        s.basic.push_back(block);
                        s.basic_keys.emplace_back(zs, j);
                    }
                }
            }
            // ∅ ∈ N_α gives the empty basic member.
            if (nbhd_contains(alpha, {}))
                for (std::size_t j = 0; j < p.m; ++j) {
                    s.basic.push_back({});
                    s.basic_keys.emplace_back(ElemSet{}, j);
                }
            ElemSet all(s.h.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
            s.alpha = monstar_value(s.basic, all);
            break;
        }
        case ConstructionKind::NaiveMon: {
            ElemSet base = base_elements(*f, alpha);
            std::vector<std::vector<std::uint32_t>> copies(n);
            for (auto u : base)
                for (std::size_t j = 0; j < p.m; ++j) {
                    copies[u].push_back(static_cast<std::uint32_t>(s.h.size()));
                    s.h.push_back(u);
                    s.labels.push_back("(" + nm[u] + "," + std::to_string(j) + ")");
                }
            std::vector<ElemSet> gens;
            for (auto& g : alpha.family) {
                ElemSet pre;
                for (auto u : g) pre.insert(pre.end(), copies[u].begin(), copies[u].end());
                std::sort(pre.begin(), pre.end());
                gens.push_back(pre);
            }
            s.alpha = mon_value(gens);
            break;
        }
    }
    s.n = s.h.size();
    if (apply_map(*f, s.h, s.alpha) != alpha)
        throw Error("internal: construction " + to_string(p.kind) + " violates T(h)(alpha_*) = alpha");
    ++law_checks;
    return s;
}

std::size_t construction_law_checks() { return law_checks.load(); }

std::vector<Mask> pull_back(const Map& h, std::span<const Mask> args) {
    if (h.size() > 64) throw CapError("star carrier has more than 64 elements");
    std::vector<Mask> out(args.size(), 0);
    for (std::size_t w = 0; w < h.size(); ++w)
        for (std::size_t i = 0; i < args.size(); ++i)
            if (has(args[i], h[w])) out[i] |= bit(w);
    return out;
}

// ---------------------------------------------------------------- φ*

namespace {

struct DenseStar {
    StarObject star;
    DenseObject dense;
};

struct StarSession {
    std::mutex mu;
    std::map<std::tuple<std::size_t, TValue, std::size_t>, std::shared_ptr<const DenseStar>> stars;
    std::map<std::tuple<std::size_t, TValue, std::vector<Mask>>, bool> verdicts;
};

}  // namespace

LiftingPtr so_to_ml_lifting(const std::string& name, const so1::Formula& phi, const std::vector<std::string>& vars,
                            const Functor& f, const LiftingSet& lifts, const StarLiftingOptions& opt) {
    for (auto& v : phi->free)
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) throw Error("unbound variable '" + v + "'");
    if (phi->depth > opt.params.k)
        throw Error("formula of quantifier depth " + std::to_string(phi->depth) + " exceeds construction depth " +
                    std::to_string(opt.params.k));
    if (!construction_applies(opt.params.kind, *f))
        throw Error("construction " + to_string(opt.params.kind) + " does not apply to functor " + to_string(*f));
    auto prog = std::make_shared<const Program>(compile(phi, vars, lifts));
    if (!prog->nodes[prog->root].monotone) throw Error("phi* needs a monotone formula: " + so1::print(phi));

    auto session = std::make_shared<StarSession>();
    const ConstructionParams params = opt.params;
    const Caps caps = opt.caps;
    const bool stabilize = opt.stabilize && is_truncated(params.kind);

    auto star_at = [session, f, params](const DenseObject& d, std::size_t m) {
        auto key = std::make_tuple(d.n, *d.source, m);
        {
            std::lock_guard<std::mutex> g(session->mu);
            auto it = session->stars.find(key);
            if (it != session->stars.end()) return it->second;
        }
        auto ds = std::make_shared<DenseStar>();
        ConstructionParams p = params;
        p.m = m;
        ds->star = construct_star(f, d.n, *d.source, p);
        if (ds->star.n > 64) throw CapError("star carrier of " + std::to_string(ds->star.n) + " elements exceeds 64");
        ds->dense = make_dense(*f, ds->star.alpha, ds->star.n);
        std::lock_guard<std::mutex> g(session->mu);
        return session->stars.emplace(key, std::move(ds)).first->second;
    };
    auto eval_at = [prog, caps, star_at](const DenseObject& d, std::span<const Mask> a, std::size_t m) {
        auto ds = star_at(d, m);
        check_quantifier_cap(*prog, ds->star.n, caps);
        std::vector<Mask> env(prog->num_slots, 0);
        auto pulled = pull_back(ds->star.h, a);
        std::copy(pulled.begin(), pulled.end(), env.begin());
        return run(*prog, ds->dense, env);
    };

    auto l = std::make_shared<Lifting>();
    l->name = name;
    l->arity = vars.size();
    l->functor = f;
    l->monotone = true;
    l->eval = [session, eval_at, params, stabilize, name](const DenseObject& d, std::span<const Mask> a) {
        if (!d.source) throw Error("internal: dense object without its value");
        std::vector<Mask> args(a.begin(), a.end());
        for (auto& x : args) x &= d.full;
        auto key = std::make_tuple(d.n, *d.source, args);
        {
            std::lock_guard<std::mutex> g(session->mu);
            auto it = session->verdicts.find(key);
            if (it != session->verdicts.end()) return it->second;
        }
        bool verdict = eval_at(d, args, params.m);
        if (stabilize) {
            const std::size_t cap = std::max<std::size_t>(params.m, (std::size_t{1} << params.k) * 4);
            bool stable = false;
            for (std::size_t m = params.m * 2; m <= cap; m *= 2) {
                bool next = eval_at(d, args, m);
                if (next == verdict) {
                    stable = true;
                    break;
                }
                verdict = next;
            }
            if (!stable)
                throw CapError("lifting " + name + " did not stabilize by m = " + std::to_string(cap));
        }
        std::lock_guard<std::mutex> g(session->mu);
        session->verdicts.emplace(key, verdict);
        return verdict;
    };
    l->relevant = [star_at, params](const DenseObject& d) {
        Mask img = 0;
        for (auto u : star_at(d, params.m)->star.h) img |= bit(u);
        return img;
    };
    return l;
}

TranslatedAutomaton translate_automaton(const Automaton& a, const Functor& f, const LiftingSet& lifts,
                                        const StarLiftingOptions& opt) {
    if (a.flavor != Flavor::SO1) throw Error("translate_automaton expects an SO1 automaton");
    TranslatedAutomaton out;
    out.lifts = lifts;
    Automaton& r = out.automaton;
    r.states = a.states;
    r.initial = a.initial;
    r.priority = a.priority;
    r.chromatic = a.chromatic;
    r.flavor = Flavor::ML1;
    r.ml.assign(a.size(), std::vector<ml1::Formula>(a.colors()));
    std::map<std::string, std::string> by_text;
    for (std::size_t s = 0; s < a.size(); ++s)
        for (std::size_t c = 0; c < a.colors(); ++c) {
            const so1::Formula& phi = a.so[s][c];
            std::string text = so1::print(phi);
            auto it = by_text.find(text);
            if (it == by_text.end()) {
                std::string name = "star" + std::to_string(by_text.size());
                out.lifts.add(so_to_ml_lifting(name, phi, phi->free, f, lifts, opt));
                out.sources[name] = text;
                r.liftings.push_back(name);
                it = by_text.emplace(text, name).first;
            }
            std::vector<ml1::Term> args;
            for (auto& v : phi->free) args.push_back(ml1::var(v));
            r.ml[s][c] = ml1::lift(it->second, args);
        }
    validate_automaton(r);
    return out;
}

// ---------------------------------------------------------------- unravelling

Unravelling unravel(const TModel& m, std::uint32_t point, const ConstructionParams& p, int depth,
                    std::size_t max_nodes) {
    if (depth < 1) throw Error("unravelling depth must be at least 1");
    if (point >= m.size()) throw Error("point outside the model");
    std::vector<StarObject> stars;
    for (std::uint32_t u = 0; u < m.size(); ++u)
        stars.push_back(construct_star(m.functor, m.size(), m.sigma[u], p, m.carrier.get()));

    Unravelling out;
    std::vector<std::uint32_t> parent{~0U};
    std::vector<std::string> names{m.carrier->atoms[point]};
    out.gamma = {point};
    out.depth = {0};
    std::vector<ElemSet> children(1);
    std::vector<Map> inj(1);  // i_v⃗ : X_{γ(v⃗)} -> children
    for (std::size_t v = 0; v < out.gamma.size(); ++v) {
        const StarObject& st = stars[out.gamma[v]];
        if (out.depth[v] >= depth) {
            out.frontier.push_back(st.n > 0);
            if (st.n > 0) out.total = false;
            continue;
        }
        out.frontier.push_back(false);
        for (std::size_t w = 0; w < st.n; ++w) {
            auto id = static_cast<std::uint32_t>(out.gamma.size());
            if (id >= max_nodes) throw CapError("unravelling exceeds " + std::to_string(max_nodes) + " nodes");
            out.gamma.push_back(st.h[w]);
            out.depth.push_back(out.depth[v] + 1);
            parent.push_back(static_cast<std::uint32_t>(v));
            names.push_back(names[v] + "." + std::to_string(w));
            children.emplace_back();
            inj.emplace_back();
            children[v].push_back(id);
            inj[v].push_back(id);
        }
    }

    TModel& t = out.tree;
    t.functor = m.functor;
    t.carrier = make_carrier(names);
    t.root = 0;
    for (std::size_t v = 0; v < out.gamma.size(); ++v) {
        if (out.frontier[v]) {
            auto leaf = empty_value(*m.functor);
            if (!leaf) throw Error("functor " + to_string(*m.functor) + " has no leaf value for the frontier");
            t.sigma.push_back(*leaf);
            children[v].clear();
        } else {
            t.sigma.push_back(apply_map(*m.functor, inj[v], stars[out.gamma[v]].alpha));
        }
    }
    t.frame = children;
    for (auto& [p, states] : m.valuation) {
        ElemSet s;
        for (std::size_t v = 0; v < out.gamma.size(); ++v)
            if (std::binary_search(states.begin(), states.end(), out.gamma[v])) s.push_back(static_cast<std::uint32_t>(v));
        t.valuation[p] = s;
    }
    for (std::size_t v = 0; v < out.gamma.size(); ++v)
        if (!out.frontier[v] && apply_map(*m.functor, out.gamma, t.sigma[v]) != m.sigma[out.gamma[v]])
            throw Error("internal: unravelling map is not a homomorphism at node " + names[v]);
    return out;
}

// ---------------------------------------------------------------- adequacy

namespace {

so1::Formula random_so1(std::mt19937_64& rng, int size, int quant, std::vector<std::string> vars,
                        const std::vector<std::string>& lifts, int* counter) {
    using namespace so1;
    auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
    int roll = static_cast<int>(rng() % 10);
    if (size <= 0 || roll < 3) {
        switch (rng() % 4) {
            case 0: return sub(pick(vars), pick(vars));
            default: return lift(pick(lifts), {pick(vars)});
        }
    }
    switch (roll) {
        case 3: return make_not(random_so1(rng, size - 1, quant, vars, lifts, counter));
        case 4:
        case 5: return make_or(random_so1(rng, size / 2, quant, vars, lifts, counter),
                               random_so1(rng, size / 2, quant, vars, lifts, counter));
        case 6:
        case 7: return make_and(random_so1(rng, size / 2, quant, vars, lifts, counter),
                                random_so1(rng, size / 2, quant, vars, lifts, counter));
        default: {
            if (quant <= 0) return lift(pick(lifts), {pick(vars)});
            std::string z = "Z" + std::to_string((*counter)++);
            vars.push_back(z);
            auto body = random_so1(rng, size - 1, quant - 1, vars, lifts, counter);
            return rng() % 2 ? make_exists(z, body) : make_forall(z, body);
        }
    }
}

}  // namespace

std::vector<so1::Formula> monotone_corpus(const Functor& f, const LiftingSet& lifts, int k, std::size_t count,
                                          std::uint64_t seed) {
    using namespace so1;
    std::vector<std::string> unary;
    for (auto& n : lifts.names()) {
        auto l = lifts.get(n);
        if (l->arity == 1 && (!l->functor || same_functor(*l->functor, *f))) unary.push_back(n);
    }
    if (unary.empty()) throw Error("no unary liftings for " + to_string(*f));
    const std::vector<std::string> ab{"a", "b"};
    std::vector<Formula> out;
    std::set<std::string> seen;
    auto offer = [&](const Formula& phi) {
        if (out.size() >= count || phi->depth > k) return;
        Program p = compile(phi, ab, lifts);
        if (!p.nodes[p.root].monotone) return;
        if (seen.insert(print(phi)).second) out.push_back(phi);
    };
    offer(top());
    for (auto& l : unary) offer(lift(l, {"a"}));
    if (k >= 1)
        for (auto& l : unary) {
            offer(make_exists("Z", make_and(sub("Z", "a"), lift(l, {"Z"}))));
            offer(make_exists("Z", make_and(make_and(sub("Z", "a"), sub("Z", "b")), make_not(lift(l, {"Z"})))));
            offer(make_forall("Z", make_or(sub("a", "Z"), lift(l, {"Z"}))));
        }
    std::mt19937_64 rng(seed);
    for (std::size_t attempt = 0; out.size() < count && attempt < 400 * count; ++attempt) {
        int counter = 0;
        offer(random_so1(rng, 2 + static_cast<int>(rng() % 6), k, ab, unary, &counter));
    }
    return out;
}

std::optional<Map> strong_witness(const FunctorSpec& f, const StarObject& xs, const StarObject& ys, const Map& fmap,
                                  std::size_t node_cap) {
    if (xs.n != ys.n) return std::nullopt;
    // target fiber per X_* element
    std::vector<std::uint32_t> want(xs.n);
    std::map<std::uint32_t, std::size_t> need, have;
    for (std::size_t x = 0; x < xs.n; ++x) ++need[want[x] = fmap.at(xs.h[x])];
    for (std::size_t y = 0; y < ys.n; ++y) ++have[ys.h[y]];
    if (need != have) return std::nullopt;
    Map g(xs.n);
    std::vector<bool> used(ys.n, false);
    std::size_t nodes = 0;
    std::function<bool(std::size_t)> go = [&](std::size_t x) -> bool {
        if (++nodes > node_cap) throw CapError("bijection search exceeds " + std::to_string(node_cap) + " nodes");
        if (x == xs.n) return apply_map(f, g, xs.alpha) == ys.alpha;
        for (std::uint32_t y = 0; y < ys.n; ++y) {
            if (used[y] || ys.h[y] != want[x]) continue;
            used[y] = true;
            g[x] = y;
            if (go(x + 1)) return true;
            used[y] = false;
        }
        return false;
    };
    if (go(0)) return g;
    return std::nullopt;
}

AdequacyReport check_adequacy(const Functor& f, const LiftingSet& lifts, const AdequacyOptions& opt) {
    AdequacyReport rep;
    auto corpus = monotone_corpus(f, lifts, opt.k, 12, opt.seed);
    const std::vector<std::string> ab{"a", "b"};
    std::vector<Program> progs;
    for (auto& phi : corpus) {
        rep.corpus.push_back(so1::print(phi));
        progs.push_back(compile(phi, ab, lifts));
    }
    std::map<std::size_t, std::vector<TValue>> values;
    std::mt19937_64 rng(opt.seed);
    for (std::size_t sample = 0; sample < opt.samples; ++sample) {
        std::size_t nx = 1 + rng() % opt.max_carrier, ny = 1 + rng() % opt.max_carrier;
        auto& vs = values[nx];
        if (vs.empty()) vs = enumerate_values(*f, nx, opt.bag_cap);
        if (vs.empty()) continue;
        const TValue& alpha = vs[rng() % vs.size()];
        Map fmap(nx);
        for (auto& y : fmap) y = static_cast<std::uint32_t>(rng() % ny);
        TValue beta = apply_map(*f, fmap, alpha);
        std::vector<Mask> V{rng() & full_mask(ny), rng() & full_mask(ny)};
        StarObject xs = construct_star(f, nx, alpha, opt.params);
        StarObject ys = construct_star(f, ny, beta, opt.params);
        ++rep.samples;
        if (opt.strong) {
            if (strong_witness(*f, xs, ys, fmap)) ++rep.strong_found;
            else ++rep.strong_missing;
        }
        if (xs.n > 64 || ys.n > 64) {
            rep.skipped += progs.size();
            continue;
        }
        Map fh(xs.n);
        for (std::size_t x = 0; x < xs.n; ++x) fh[x] = fmap[xs.h[x]];
        auto vx = pull_back(fh, V), vy = pull_back(ys.h, V);
        auto dx = make_dense(*f, xs.alpha, xs.n), dy = make_dense(*f, ys.alpha, ys.n);
        for (std::size_t i = 0; i < progs.size(); ++i) {
            const Program& p = progs[i];
            if (p.depth > 0 && std::max(xs.n, ys.n) > static_cast<std::size_t>(opt.caps.quantifier)) {
                ++rep.skipped;
                continue;
            }
            std::vector<Mask> ex(p.num_slots, 0), ey(p.num_slots, 0);
            std::copy(vx.begin(), vx.end(), ex.begin());
            std::copy(vy.begin(), vy.end(), ey.begin());
            ++rep.formulas_checked;
            bool lx = run(p, dx, ex), ly = run(p, dy, ey);
            if (lx != ly)
                rep.violations.push_back("phi=" + rep.corpus[i] + " alpha=" +
                                         to_string(*f, alpha, *numbered_carrier(nx)) + " beta=" +
                                         to_string(*f, beta, *numbered_carrier(ny, "y")) + ": " +
                                         (lx ? "X side holds, Y side fails" : "X side fails, Y side holds"));
        }
    }
    return rep;
}

}  // namespace cak
