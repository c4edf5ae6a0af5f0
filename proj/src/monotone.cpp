#include "cak/monotone.hpp"

#include <algorithm>
#include <set>

#include "lexer.hpp"

namespace cak {

namespace {

void require_nbhd(const TModel& m) {
    if (m.functor->kind != FunctorKind::MonNbhd && m.functor->kind != FunctorKind::MonNbhdStar)
        throw Error("neighbourhood bisimulation needs mon or monstar models, got " + to_string(*m.functor));
}

std::set<std::string> props_of(const TModel& a, const TModel& b) {
    std::set<std::string> out;
    for (auto& [p, s] : a.valuation) out.insert(p);
    for (auto& [p, s] : b.valuation) out.insert(p);
    return out;
}

bool same_color(const TModel& m1, std::uint32_t s1, const TModel& m2, std::uint32_t s2,
                const std::set<std::string>& props) {
    for (auto& p : props)
        if (m1.holds(p, s1) != m2.holds(p, s2)) return false;
    return true;
}

// R[Z] for Z ⊆ S₁, or R⁻¹[Z] for Z ⊆ S₂ when backward.
ElemSet image(const Relation& r, const ElemSet& z, bool backward, std::size_t other) {
    ElemSet out;
    for (std::uint32_t t = 0; t < other; ++t)
        for (auto x : z)
            if (backward ? r[t][x] : r[x][t]) {
                out.push_back(t);
                break;
            }
    return out;
}

}  // namespace

std::optional<Relation> largest_nbhd_bisim(const TModel& m1, const TModel& m2, bool global) {
    require_nbhd(m1);
    require_nbhd(m2);
    const std::size_t n1 = m1.size(), n2 = m2.size();
    auto props = props_of(m1, m2);
    Relation r(n1, std::vector<bool>(n2, false));
    for (std::uint32_t a = 0; a < n1; ++a)
        for (std::uint32_t b = 0; b < n2; ++b) r[a][b] = same_color(m1, a, m2, b, props);
    // Up-closure reduces both clauses to the generators: R[G₁] ∈ σ₂(s₂) and R⁻¹[G₂] ∈ σ₁(s₁).
    for (bool changed = true; changed;) {
        changed = false;
        for (std::uint32_t a = 0; a < n1; ++a)
            for (std::uint32_t b = 0; b < n2; ++b) {
                if (!r[a][b]) continue;
                bool ok = true;
                for (auto& g : m1.sigma[a].family)
                    if (!nbhd_contains(m2.sigma[b], image(r, g, false, n2))) ok = false;
                for (auto& g : m2.sigma[b].family)
                    if (ok && !nbhd_contains(m1.sigma[a], image(r, g, true, n1))) ok = false;
                if (!ok) {
                    r[a][b] = false;
                    changed = true;
                }
            }
    }
    if (global && !is_total_both_ways(r)) return std::nullopt;
    return r;
}

bool is_total_both_ways(const Relation& r) {
    if (r.empty()) return true;
    std::vector<bool> col(r[0].size(), false);
    for (auto& row : r) {
        if (std::find(row.begin(), row.end(), true) == row.end()) return false;
        for (std::size_t b = 0; b < row.size(); ++b) col[b] = col[b] || row[b];
    }
    return std::find(col.begin(), col.end(), false) == col.end();
}

bool is_nbhd_bisim(const TModel& m1, const TModel& m2, const Relation& r, std::string* why) {
    require_nbhd(m1);
    require_nbhd(m2);
    if (m1.size() > 12 || m2.size() > 12) throw CapError("bisimulation check enumerates neighbourhoods; limit 12 states");
    auto props = props_of(m1, m2);
    auto members = [](const TValue& t, std::size_t n) {
        std::vector<Mask> out;
        for (Mask z = 0; z <= full_mask(n); ++z)
            if (nbhd_contains(t, to_elems(z))) out.push_back(z);
        return out;
    };
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (std::uint32_t a = 0; a < m1.size(); ++a)
        for (std::uint32_t b = 0; b < m2.size(); ++b) {
            if (!r[a][b]) continue;
            std::string pair = "(" + m1.carrier->atoms[a] + "," + m2.carrier->atoms[b] + ")";
            if (!same_color(m1, a, m2, b, props)) return fail("colours differ at " + pair);
            auto n1 = members(m1.sigma[a], m1.size()), n2 = members(m2.sigma[b], m2.size());
            // for all Z₁ there is Z₂ such that every t₂ ∈ Z₂ has some t₁ ∈ Z₁ with t₁ R t₂
            for (Mask z1 : n1) {
                bool found = std::any_of(n2.begin(), n2.end(), [&](Mask z2) {
                    for (auto t2 : elements(z2)) {
                        bool hit = false;
                        for (auto t1 : elements(z1)) hit = hit || r[t1][t2];
                        if (!hit) return false;
                    }
                    return true;
                });
                if (!found) return fail("forth clause fails at " + pair);
            }
            for (Mask z2 : n2) {
                bool found = std::any_of(n1.begin(), n1.end(), [&](Mask z1) {
                    for (auto t1 : elements(z1)) {
                        bool hit = false;
                        for (auto t2 : elements(z2)) hit = hit || r[t1][t2];
                        if (!hit) return false;
                    }
                    return true;
                });
                if (!found) return fail("back clause fails at " + pair);
            }
        }
    return true;
}

std::string relation_text(const TModel& m1, const TModel& m2, const Relation& r) {
    std::string out = "{";
    bool first = true;
    for (std::size_t a = 0; a < r.size(); ++a)
        for (std::size_t b = 0; b < r[a].size(); ++b)
            if (r[a][b]) {
                out += (first ? "(" : ", (") + m1.carrier->atoms[a] + "," + m2.carrier->atoms[b] + ")";
                first = false;
            }
    return out + "}";
}

TModel to_global_mstar(const TModel& m) {
    if (m.functor->kind != FunctorKind::MonNbhd) throw Error("S^G needs a mon model");
    TModel g = m;
    g.functor = monstar_functor();
    ElemSet all(m.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
    for (auto& t : g.sigma) t = monstar_value(t.family, all);
    g.frame.reset();
    g.root.reset();
    return g;
}

TModel underlying_m(const TModel& m) {
    if (m.functor->kind != FunctorKind::MonNbhdStar) throw Error("underlying mon model needs a monstar model");
    TModel u = m;
    u.functor = mon_functor();
    for (auto& t : u.sigma) t = mon_value(t.family);
    u.frame.reset();
    u.root.reset();
    return u;
}

// ---------------------------------------------------------------- signatures and matching

Signature m_signature(const StarObject& s, const ElemSet& basic, const std::vector<Mask>& V, std::size_t m) {
    if (std::find(s.basic.begin(), s.basic.end(), basic) == s.basic.end())
        throw Error("not a basic member of the star model");
    if (V.size() > 8) throw CapError("signatures over more than 8 variables");
    Signature sig(std::size_t{1} << V.size(), 0);
    for (auto e : basic) {
        std::size_t type = 0;
        for (std::size_t i = 0; i < V.size(); ++i)
            if (has(V[i], e)) type |= std::size_t{1} << i;
        sig[type] = std::min(sig[type] + 1, m);
    }
    return sig;
}

std::string signature_text(const Signature& sig, const std::vector<std::string>& vars) {
    std::string out = "{";
    bool first = true;
    for (std::size_t t = 0; t < sig.size(); ++t) {
        if (!sig[t]) continue;
        std::string type = "{";
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (t >> i & 1U) type += (type.size() > 1 ? "," : "") + vars[i];
        out += (first ? "" : ", ") + type + "}:" + std::to_string(sig[t]);
        first = false;
    }
    return out + "}";
}

bool models_match(const StarObject& x, const std::vector<Mask>& vx, const StarObject& y, const std::vector<Mask>& vy,
                  std::size_t n, std::size_t cap) {
    if (x.params.kind != ConstructionKind::MonStar || y.params.kind != ConstructionKind::MonStar)
        throw Error("matching is defined for monstar constructions");
    if (x.params.k != y.params.k || x.params.m != y.params.m)
        throw Error("matching star models built with different truncation parameters");
    if (vx.size() != vy.size()) throw Error("matching valuations over different variables");
    if (cap == 0) cap = x.params.m;
    auto counts = [&](const StarObject& s, const std::vector<Mask>& v) {
        std::map<Signature, std::size_t> c;
        for (auto& b : s.basic) ++c[m_signature(s, b, v, n)];
        return c;
    };
    auto cx = counts(x, vx), cy = counts(y, vy);
    auto bucket = [cap](std::size_t c) { return std::min(c, cap); };
    for (auto& [sig, c] : cx) {
        auto it = cy.find(sig);
        if (bucket(c) != bucket(it == cy.end() ? 0 : it->second)) return false;
    }
    for (auto& [sig, c] : cy)
        if (!cx.count(sig)) return false;
    return true;
}

std::vector<bool> star_atoms(const StarObject& s, const std::vector<Mask>& V) {
    std::vector<bool> out;
    const Mask all = full_mask(s.n);
    for (std::size_t i = 0; i < V.size(); ++i)
        for (std::size_t j = 0; j < V.size(); ++j)
            if (i != j) out.push_back(subset(V[i], V[j]));
    for (auto v : V) {
        bool box = false;
        for (auto& b : s.basic) box = box || subset(to_mask(b), v);
        out.push_back(box);
        out.push_back((v & all) != 0);
    }
    return out;
}

std::vector<std::string> star_atom_names(const std::vector<std::string>& vars) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = 0; j < vars.size(); ++j)
            if (i != j) out.push_back(vars[i] + " sub " + vars[j]);
    for (auto& v : vars) {
        out.push_back("box(" + v + ")");
        out.push_back("E(" + v + ")");
    }
    return out;
}

// ---------------------------------------------------------------- counterexample

Json DemoReport::to_json() const {
    Json j;
    j["step1_image"] = {{"beta", beta}, {"holds", image_ok}};
    j["step2_u_supports_beta"] = u_supports_beta;
    j["step3_minimal_supports"] = {{"supports", minimal_supports}, {"all_contain_v*", all_contain_v}};
    j["step4_candidate"] = {{"construction", construction},
                            {"restricted_side", restricted_side},
                            {"y_side", y_side},
                            {"x_side", x_side},
                            {"violation", violation},
                            {"where", where}};
    return j;
}

DemoReport counterexample_demo(ConstructionKind candidate, std::size_t m) {
    DemoReport rep;
    auto F = mon_functor();
    auto L = builtin_liftings(F);
    auto Y = make_carrier({"u", "v"});
    auto X = make_carrier({"u*", "v*", "w*"});
    const TValue beta = mon_value({{0}});
    const TValue alpha = mon_value({{0, 1}, {0, 2}, {0, 1, 2}});
    const Map f{0, 1, 0};

    TValue image = apply_map(*F, f, alpha);
    rep.beta = to_string(*F, image, *Y);
    rep.image_ok = image == beta;

    auto beta_u = restrict_to_support(*F, beta, {0});
    rep.u_supports_beta = beta_u.has_value();

    auto supports = minimal_supports(*F, alpha, 3);
    rep.all_contain_v = !supports.empty();
    for (auto& s : supports) {
        std::string t = "{";
        for (std::size_t i = 0; i < s.size(); ++i) t += (i ? "," : "") + X->atoms[s[i]];
        rep.minimal_supports.push_back(t + "}");
        rep.all_contain_v = rep.all_contain_v && std::binary_search(s.begin(), s.end(), 1U);
    }

    // φ = ∀Z (a ⊆ Z), V(a) = {v}
    auto phi = so1::make_forall("Z", so1::sub("a", "Z"));
    ConstructionParams p{candidate, 1, m};
    rep.construction = to_string(candidate) + " (m=" + std::to_string(m) + ")";
    auto holds = [&](const StarObject& s, Mask a) {
        OneStepModel om{F, s.n, s.alpha, {{"a", a}}};
        return so1::eval(phi, om, L);
    };
    const Mask va = bit(1);
    StarObject ys = construct_star(F, 2, beta, p, Y.get());
    StarObject xs = construct_star(F, 3, alpha, p, X.get());
    auto yr = make_carrier({"u"});
    StarObject rs = construct_star(F, 1, *beta_u, p, yr.get());
    Mask one[1] = {va & bit(0)};  // V restricted to Y' = {u}
    rep.restricted_side = holds(rs, pull_back(rs.h, one)[0]);
    Mask vy[1] = {va};
    rep.y_side = holds(ys, pull_back(ys.h, vy)[0]);
    Map fh(xs.n);
    for (std::size_t i = 0; i < xs.n; ++i) fh[i] = f[xs.h[i]];
    rep.x_side = holds(xs, pull_back(fh, vy)[0]);
    rep.violation = rep.x_side != rep.y_side;
    if (rep.violation) {
        bool v_hit = std::find(xs.h.begin(), xs.h.end(), 1U) != xs.h.end();
        rep.where = std::string("(Y_*, beta_*, V[h_beta]) ") + (rep.y_side ? "satisfies" : "refutes") +
                    " forall Z (a sub Z) but (X_*, alpha_*, V[f h_alpha]) " + (rep.x_side ? "satisfies" : "refutes") +
                    " it" + (v_hit ? "; v* lies in h_alpha[X_*]" : "");
    } else {
        rep.where = "no violation on this data";
    }
    return rep;
}

// ---------------------------------------------------------------- global modalities

namespace {

mu::Formula rebuild(const mu::Formula& f, bool forward) {
    using namespace mu;
    auto kid = [&](std::size_t i) { return rebuild(f->kids[i], forward); };
    switch (f->op) {
        case Op::Prop: return prop(f->var);
        case Op::NegProp: return neg_prop(f->var);
        case Op::Bot: return bot();
        case Op::Top: return top();
        case Op::Lift: {
            std::vector<Formula> args;
            for (std::size_t i = 0; i < f->kids.size(); ++i) args.push_back(kid(i));
            if (!forward && args.size() == 1 && f->lifting == "E") return global_some(args[0]);
            if (!forward && args.size() == 1 && f->lifting == "Ed") return global_all(args[0]);
            return lift(f->lifting, args);
        }
        case Op::Or: return make_or(kid(0), kid(1));
        case Op::And: return make_and(kid(0), kid(1));
        case Op::Mu: return mu::mu(f->var, kid(0));
        case Op::Nu: return nu(f->var, kid(0));
        case Op::GAll: return forward ? lift("Ed", {kid(0)}) : global_all(kid(0));
        case Op::GSome: return forward ? lift("E", {kid(0)}) : global_some(kid(0));
    }
    throw Error("internal: unknown mu operator");
}

}  // namespace

mu::Formula globalize(const mu::Formula& f) { return rebuild(f, true); }
mu::Formula deglobalize(const mu::Formula& f) { return rebuild(f, false); }

bool eval_mu_global(const mu::Formula& f, const TModel& m, std::uint32_t s) {
    if (m.functor->kind != FunctorKind::MonNbhd) throw Error("global mu semantics is read on mon models");
    return mu::eval_mu(f, m, s, builtin_liftings(m.functor));
}

// ---------------------------------------------------------------- MMSO

namespace mmso {

namespace {

Formula mk(Op op, std::string a, std::string b, std::vector<Formula> kids) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->kids = std::move(kids);
    for (auto& k : n->kids) n->depth = std::max(n->depth, k->depth);
    if (op == Op::Exists) ++n->depth;
    return n;
}

const std::vector<std::string> kReserved{"bot", "top", "sr", "sub", "box", "not", "or", "and", "exists", "forall"};

Formula parse_or(detail::Lexer& lx);

Formula parse_unary(detail::Lexer& lx) {
    if (lx.accept("not")) return make_not(parse_unary(lx));
    if (lx.at("exists") || lx.at("forall")) {
        bool ex = !lx.accept("forall");
        if (ex) lx.expect("exists");
        std::string p = lx.ident(kReserved);
        lx.expect(".");
        Formula body = parse_or(lx);
        return ex ? make_exists(p, body) : make_forall(p, body);
    }
    if (lx.accept("bot")) return bot();
    if (lx.accept("top")) return top();
    if (lx.accept("sr")) {
        lx.expect("(");
        std::string p = lx.ident(kReserved);
        lx.expect(")");
        return sr(p);
    }
    if (lx.accept("box")) {
        lx.expect("(");
        std::string p = lx.ident(kReserved);
        lx.expect(",");
        std::string q = lx.ident(kReserved);
        lx.expect(")");
        return box(p, q);
    }
    if (lx.accept("(")) {
        Formula f = parse_or(lx);
        lx.expect(")");
        return f;
    }
    std::string p = lx.ident(kReserved);
    lx.expect("sub");
    return sub(p, lx.ident(kReserved));
}

Formula parse_and(detail::Lexer& lx) {
    Formula f = parse_unary(lx);
    while (lx.accept("and")) f = make_and(f, parse_unary(lx));
    return f;
}

Formula parse_or(detail::Lexer& lx) {
    Formula f = parse_and(lx);
    while (lx.accept("or")) f = make_or(f, parse_and(lx));
    return f;
}

std::string wrap(const std::string& s) { return "(" + s + ")"; }

// ctx: 0 top, 1 operand of or, 2 operand of and, 3 under not
std::string print_rec(const Formula& f, int ctx) {
    switch (f->op) {
        case Op::Bot: return "bot";
        case Op::Top: return "top";
        case Op::Sr: return "sr(" + f->a + ")";
        case Op::Sub: return f->a + " sub " + f->b;
        case Op::Box: return "box(" + f->a + ", " + f->b + ")";
        case Op::Not: {
            const Formula& k = f->kids[0];
            if (k->op == Op::Exists && k->kids[0]->op == Op::Not) {
                std::string s = "forall " + k->a + " . " + print_rec(k->kids[0]->kids[0], 0);
                return ctx > 0 ? wrap(s) : s;
            }
            return "not " + print_rec(k, 3);
        }
        case Op::Or: {
            std::string s = print_rec(f->kids[0], 1) + " or " + print_rec(f->kids[1], 1);
            return ctx > 1 ? wrap(s) : s;
        }
        case Op::And: {
            std::string s = print_rec(f->kids[0], 2) + " and " + print_rec(f->kids[1], 2);
            return ctx > 2 ? wrap(s) : s;
        }
        case Op::Exists: {
            std::string s = "exists " + f->a + " . " + print_rec(f->kids[0], 0);
            return ctx > 0 ? wrap(s) : s;
        }
    }
    return "?";
}

struct Evaluator {
    const TModel& m;
    std::uint32_t point;
    Mask full;
    std::map<std::string, Mask> env;

    Mask val(const std::string& p) const {
        auto it = env.find(p);
        return it == env.end() ? 0 : it->second;
    }

    bool eval(const Formula& f) {
        switch (f->op) {
            case Op::Bot: return false;
            case Op::Top: return true;
            case Op::Sr: return val(f->a) == bit(point);
            case Op::Sub: return subset(val(f->a), val(f->b));
            case Op::Box: {
                // every v ∈ V(p) has some Z ∈ σ(v) inside V(q)
                ElemSet q = to_elems(val(f->b));
                for (auto v : elements(val(f->a)))
                    if (!nbhd_contains(m.sigma[v], q)) return false;
                return true;
            }
            case Op::Not: return !eval(f->kids[0]);
            case Op::Or: return eval(f->kids[0]) || eval(f->kids[1]);
            case Op::And: return eval(f->kids[0]) && eval(f->kids[1]);
            case Op::Exists: {
                auto it = env.find(f->a);
                std::optional<Mask> saved = it == env.end() ? std::nullopt : std::optional<Mask>(it->second);
                bool found = false;
                for (Mask z = 0; z <= full && !found; ++z) {
                    env[f->a] = z;
                    found = eval(f->kids[0]);
                }
                if (saved) env[f->a] = *saved;
                else env.erase(f->a);
                return found;
            }
        }
        return false;
    }
};

}  // namespace

Formula bot() { return mk(Op::Bot, "", "", {}); }
Formula top() { return mk(Op::Top, "", "", {}); }
Formula sr(std::string p) { return mk(Op::Sr, std::move(p), "", {}); }
Formula sub(std::string p, std::string q) { return mk(Op::Sub, std::move(p), std::move(q), {}); }
Formula box(std::string p, std::string q) { return mk(Op::Box, std::move(p), std::move(q), {}); }
Formula make_not(Formula f) { return mk(Op::Not, "", "", {std::move(f)}); }
Formula make_or(Formula a, Formula b) { return mk(Op::Or, "", "", {std::move(a), std::move(b)}); }
Formula make_and(Formula a, Formula b) { return mk(Op::And, "", "", {std::move(a), std::move(b)}); }
Formula make_exists(std::string p, Formula body) { return mk(Op::Exists, std::move(p), "", {std::move(body)}); }
Formula make_forall(std::string p, Formula body) {
    return make_not(make_exists(std::move(p), make_not(std::move(body))));
}

std::string print(const Formula& f) { return print_rec(f, 0); }

Formula parse(const std::string& text) {
    detail::Lexer lx(text);
    Formula f = parse_or(lx);
    if (!lx.done()) lx.fail("trailing input");
    return f;
}

bool eval(const Formula& f, const TModel& m, std::uint32_t s, const Caps& caps) {
    if (m.functor->kind != FunctorKind::MonNbhd && m.functor->kind != FunctorKind::MonNbhdStar)
        throw Error("MMSO is read on neighbourhood models");
    if (s >= m.size()) throw Error("point outside the model");
    if (m.size() > 64) throw CapError("MMSO evaluation is limited to 64 states");
    if (f->depth > 0 && m.size() > static_cast<std::size_t>(caps.quantifier))
        throw CapError("quantifier enumeration over " + std::to_string(m.size()) + " states exceeds cap " +
                       std::to_string(caps.quantifier));
    Evaluator e{m, s, full_mask(m.size()), {}};
    for (auto& [p, set] : m.valuation) e.env[p] = to_mask(set);
    return e.eval(f);
}

mso::Formula to_mso(const Formula& f) {
    switch (f->op) {
        case Op::Bot: return mso::bot();
        case Op::Top: return mso::top();
        case Op::Sr: return mso::sr(f->a);
        case Op::Sub: return mso::sub(f->a, f->b);
        case Op::Box: return mso::lift("box", f->a, {f->b});
        case Op::Not: return mso::make_not(to_mso(f->kids[0]));
        case Op::Or: return mso::make_or(to_mso(f->kids[0]), to_mso(f->kids[1]));
        case Op::And: return mso::make_and(to_mso(f->kids[0]), to_mso(f->kids[1]));
        case Op::Exists: return mso::make_exists(f->a, to_mso(f->kids[0]));
    }
    throw Error("internal: unknown MMSO operator");
}

}  // namespace mmso

}  // namespace cak
