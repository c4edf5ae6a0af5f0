#include "cak/logic.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "lexer.hpp"

namespace cak {

// ---------------------------------------------------------------- lifting evaluation on models

LiftEvaluator::LiftEvaluator(const TModel& m, const LiftingSet& lifts) : m_(m), lifts_(lifts) {
    large_ = m.size() > 64;
    if (!large_) {
        for (auto& t : m.sigma) dense_.push_back(make_dense(*m.functor, t, m.size()));
        return;
    }
    for (auto& t : m.sigma) {
        ElemSet b = base_elements(*m.functor, t);
        if (b.size() > 64) throw CapError("a state has more than 64 successors");
        restricted_.push_back(*restrict_to_support(*m.functor, t, b));
        base_.push_back(std::move(b));
    }
    for (std::size_t s = 0; s < restricted_.size(); ++s)
        dense_.push_back(make_dense(*m.functor, restricted_[s], base_[s].size()));
}

const Lifting& LiftEvaluator::get(const std::string& name, std::size_t arity) const {
    auto l = lifts_.get(name);
    if (l->functor && !same_functor(*l->functor, *m_.functor))
        throw Error("lifting '" + name + "' is for functor " + to_string(*l->functor) + ", model has " +
                    to_string(*m_.functor));
    if (l->arity != arity)
        throw Error("lifting '" + name + "' expects " + std::to_string(l->arity) + " arguments, got " +
                    std::to_string(arity));
    return *l;
}

bool LiftEvaluator::holds(const std::string& lifting, std::uint32_t s, const std::vector<const StateSet*>& args) {
    const Lifting& l = get(lifting, args.size());
    std::vector<Mask> masks(args.size(), 0);
    for (std::size_t i = 0; i < args.size(); ++i) {
        const StateSet& z = *args[i];
        if (!large_) {
            for (std::size_t x = 0; x < z.size(); ++x)
                if (z[x]) masks[i] |= bit(x);
        } else {
            for (std::size_t k = 0; k < base_[s].size(); ++k)
                if (z[base_[s][k]]) masks[i] |= bit(k);
        }
    }
    return l.eval(dense_[s], masks);
}

// ---------------------------------------------------------------- μML

namespace mu {

namespace {

Formula mk(Op op, std::string var, std::string lifting, std::vector<Formula> kids) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->var = std::move(var);
    n->lifting = std::move(lifting);
    n->kids = std::move(kids);
    std::vector<std::string> fv;
    if (op == Op::Prop || op == Op::NegProp) fv.push_back(n->var);
    for (auto& k : n->kids)
        for (auto& v : k->free)
            if (!((op == Op::Mu || op == Op::Nu) && v == n->var)) fv.push_back(v);
    std::sort(fv.begin(), fv.end());
    fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
    n->free = std::move(fv);
    return n;
}

const std::vector<std::string> kReserved{"bot", "top", "not", "or", "and", "mu", "nu", "lift", "global_all",
                                         "global_some"};

std::string print_rec(const Formula& f, int ctx) {
    auto wrap = [](const std::string& s) { return "(" + s + ")"; };
    switch (f->op) {
        case Op::Prop: return f->var;
        case Op::NegProp: return "not " + f->var;
        case Op::Bot: return "bot";
        case Op::Top: return "top";
        case Op::Lift: {
            std::string s = "lift " + f->lifting + "(";
            for (std::size_t i = 0; i < f->kids.size(); ++i) s += (i ? ", " : "") + print_rec(f->kids[i], 0);
            return s + ")";
        }
        case Op::GAll: return "global_all(" + print_rec(f->kids[0], 0) + ")";
        case Op::GSome: return "global_some(" + print_rec(f->kids[0], 0) + ")";
        case Op::Or: {
            std::string s = print_rec(f->kids[0], 1) + " or " + print_rec(f->kids[1], 2);
            return ctx > 1 ? wrap(s) : s;
        }
        case Op::And: {
            std::string s = print_rec(f->kids[0], 2) + " and " + print_rec(f->kids[1], 3);
            return ctx > 2 ? wrap(s) : s;
        }
        case Op::Mu:
        case Op::Nu: {
            std::string s = std::string(f->op == Op::Mu ? "mu " : "nu ") + f->var + " . " + print_rec(f->kids[0], 0);
            return ctx > 0 ? wrap(s) : s;
        }
    }
    return "";
}

Formula parse_or(detail::Lexer& lx);

Formula parse_unary(detail::Lexer& lx) {
    if (lx.accept("not")) {
        if (lx.at("(")) lx.fail("negation applies to propositions only");
        return neg_prop(lx.ident(kReserved));
    }
    if (lx.accept("mu") || lx.at("nu")) {
        bool is_mu = !lx.accept("nu");
        std::string v = lx.ident(kReserved);
        lx.expect(".");
        Formula body = parse_or(lx);
        return is_mu ? mu(v, body) : nu(v, body);
    }
    if (lx.accept("bot")) return bot();
    if (lx.accept("top")) return top();
    if (lx.accept("lift")) {
        std::string name = lx.ident(kReserved);
        lx.expect("(");
        std::vector<Formula> args;
        if (!lx.at(")")) {
            args.push_back(parse_or(lx));
            while (lx.accept(",")) args.push_back(parse_or(lx));
        }
        lx.expect(")");
        return lift(name, std::move(args));
    }
    if (lx.accept("global_all") || lx.at("global_some")) {
        bool all = !lx.accept("global_some");
        lx.expect("(");
        Formula body = parse_or(lx);
        lx.expect(")");
        return all ? global_all(body) : global_some(body);
    }
    if (lx.accept("(")) {
        Formula f = parse_or(lx);
        lx.expect(")");
        return f;
    }
    return prop(lx.ident(kReserved));
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

void validate_rec(const Formula& f, std::set<std::string>& bound) {
    if (f->op == Op::NegProp && bound.count(f->var))
        throw Error("fixpoint variable '" + f->var + "' occurs under a negation");
    if (f->op == Op::Mu || f->op == Op::Nu) {
        bool had = bound.count(f->var);
        bound.insert(f->var);
        validate_rec(f->kids[0], bound);
        if (!had) bound.erase(f->var);
        return;
    }
    for (auto& k : f->kids) validate_rec(k, bound);
}

Formula negate_rec(const Formula& f, const LiftingSet& lifts, std::set<std::string>& bound) {
    switch (f->op) {
        case Op::Prop: return bound.count(f->var) ? f : neg_prop(f->var);
        case Op::NegProp: return prop(f->var);
        case Op::Bot: return top();
        case Op::Top: return bot();
        case Op::Or: return make_and(negate_rec(f->kids[0], lifts, bound), negate_rec(f->kids[1], lifts, bound));
        case Op::And: return make_or(negate_rec(f->kids[0], lifts, bound), negate_rec(f->kids[1], lifts, bound));
        case Op::GAll: return global_some(negate_rec(f->kids[0], lifts, bound));
        case Op::GSome: return global_all(negate_rec(f->kids[0], lifts, bound));
        case Op::Lift: {
            auto l = lifts.get(f->lifting);
            if (l->dual_name.empty() || !lifts.find(l->dual_name))
                throw Error("lifting '" + f->lifting + "' has no registered dual");
            std::vector<Formula> args;
            for (auto& k : f->kids) args.push_back(negate_rec(k, lifts, bound));
            return lift(l->dual_name, std::move(args));
        }
        case Op::Mu:
        case Op::Nu: {
            bool had = bound.count(f->var);
            bound.insert(f->var);
            Formula body = negate_rec(f->kids[0], lifts, bound);
            if (!had) bound.erase(f->var);
            return f->op == Op::Mu ? nu(f->var, body) : mu(f->var, body);
        }
    }
    return f;
}

struct Evaluator {
    const TModel& m;
    LiftEvaluator lifts;
    std::map<std::string, StateSet> env;

    Evaluator(const TModel& model, const LiftingSet& ls) : m(model), lifts(model, ls) {}

    StateSet prop(const std::string& p) const {
        auto it = env.find(p);
        if (it != env.end()) return it->second;
        StateSet out(m.size(), false);
        auto v = m.valuation.find(p);
        if (v != m.valuation.end())
            for (auto s : v->second) out[s] = true;
        return out;
    }

    StateSet eval(const Formula& f) {
        const std::size_t n = m.size();
        switch (f->op) {
            case Op::Prop: return prop(f->var);
            case Op::NegProp: {
                StateSet s = prop(f->var);
                s.flip();
                return s;
            }
            case Op::Bot: return StateSet(n, false);
            case Op::Top: return StateSet(n, true);
            case Op::Or:
            case Op::And: {
                StateSet a = eval(f->kids[0]), b = eval(f->kids[1]);
                for (std::size_t i = 0; i < n; ++i) a[i] = f->op == Op::Or ? (a[i] || b[i]) : (a[i] && b[i]);
                return a;
            }
            case Op::GAll:
            case Op::GSome: {
                StateSet a = eval(f->kids[0]);
                bool all = std::all_of(a.begin(), a.end(), [](bool b) { return b; });
                bool some = std::any_of(a.begin(), a.end(), [](bool b) { return b; });
                return StateSet(n, f->op == Op::GAll ? all : some);
            }
            case Op::Lift: {
                std::vector<StateSet> args;
                for (auto& k : f->kids) args.push_back(eval(k));
                std::vector<const StateSet*> ptrs;
                for (auto& a : args) ptrs.push_back(&a);
                StateSet out(n, false);
                for (std::uint32_t s = 0; s < n; ++s) out[s] = lifts.holds(f->lifting, s, ptrs);
                return out;
            }
            case Op::Mu:
            case Op::Nu: {
                auto saved = env.find(f->var) != env.end() ? std::optional<StateSet>(env[f->var]) : std::nullopt;
                StateSet x(n, f->op == Op::Nu);
                for (std::size_t round = 0; round <= n + 1; ++round) {
                    env[f->var] = x;
                    StateSet next = eval(f->kids[0]);
                    if (next == x) break;
                    x = std::move(next);
                }
                if (saved) env[f->var] = *saved;
                else env.erase(f->var);
                return x;
            }
        }
        return StateSet(n, false);
    }
};

}  // namespace

Formula prop(std::string p) { return mk(Op::Prop, std::move(p), "", {}); }
Formula neg_prop(std::string p) { return mk(Op::NegProp, std::move(p), "", {}); }
Formula bot() { return mk(Op::Bot, "", "", {}); }
Formula top() { return mk(Op::Top, "", "", {}); }
Formula lift(std::string name, std::vector<Formula> args) { return mk(Op::Lift, "", std::move(name), std::move(args)); }
Formula make_or(Formula a, Formula b) { return mk(Op::Or, "", "", {std::move(a), std::move(b)}); }
Formula make_and(Formula a, Formula b) { return mk(Op::And, "", "", {std::move(a), std::move(b)}); }
Formula make_or(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula f = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) f = make_or(f, fs[i]);
    return f;
}
Formula make_and(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula f = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) f = make_and(f, fs[i]);
    return f;
}
Formula mu(std::string var, Formula body) { return mk(Op::Mu, std::move(var), "", {std::move(body)}); }
Formula nu(std::string var, Formula body) { return mk(Op::Nu, std::move(var), "", {std::move(body)}); }
Formula global_all(Formula body) { return mk(Op::GAll, "", "", {std::move(body)}); }
Formula global_some(Formula body) { return mk(Op::GSome, "", "", {std::move(body)}); }

bool equal(const Formula& a, const Formula& b) {
    if (a->op != b->op || a->var != b->var || a->lifting != b->lifting || a->kids.size() != b->kids.size())
        return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!equal(a->kids[i], b->kids[i])) return false;
    return true;
}

std::string print(const Formula& f) { return print_rec(f, 0); }

Formula parse(const std::string& text) {
    detail::Lexer lx(text);
    Formula f = parse_or(lx);
    if (!lx.done()) lx.fail("trailing input");
    validate(f);
    return f;
}

void validate(const Formula& f) {
    std::set<std::string> bound;
    validate_rec(f, bound);
}

Formula negate(const Formula& f, const LiftingSet& lifts) {
    std::set<std::string> bound;
    return negate_rec(f, lifts, bound);
}

Formula substitute(const Formula& f, const std::string& p, const Formula& g) {
    switch (f->op) {
        case Op::Prop: return f->var == p ? g : f;
        case Op::Mu:
        case Op::Nu:
            if (f->var == p) return f;
            return mk(f->op, f->var, "", {substitute(f->kids[0], p, g)});
        default: {
            if (f->kids.empty()) return f;
            std::vector<Formula> kids;
            for (auto& k : f->kids) kids.push_back(substitute(k, p, g));
            return mk(f->op, f->var, f->lifting, std::move(kids));
        }
    }
}

bool has_global(const Formula& f) {
    if (f->op == Op::GAll || f->op == Op::GSome) return true;
    return std::any_of(f->kids.begin(), f->kids.end(), [](const Formula& k) { return has_global(k); });
}

std::size_t size(const Formula& f) {
    std::size_t s = 1;
    for (auto& k : f->kids) s += size(k);
    return s;
}

StateSet eval_set(const Formula& f, const TModel& m, const LiftingSet& lifts) {
    validate(f);
    Evaluator e(m, lifts);
    return e.eval(f);
}

bool eval_mu(const Formula& f, const TModel& m, std::uint32_t s, const LiftingSet& lifts) {
    if (s >= m.size()) throw Error("point outside the model");
    return eval_set(f, m, lifts)[s];
}

}  // namespace mu

// ---------------------------------------------------------------- MSO

namespace mso {

namespace {

Formula mk(Op op, std::string a, std::string b, std::string lifting, std::vector<std::string> args,
           std::vector<Formula> kids) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->lifting = std::move(lifting);
    n->args = std::move(args);
    n->kids = std::move(kids);
    std::vector<std::string> fv;
    switch (op) {
        case Op::Sr:
        case Op::Em:
        case Op::Sing: fv = {n->a}; break;
        case Op::Sub:
        case Op::Eq: fv = {n->a, n->b}; break;
        case Op::Lift:
            fv = n->args;
            fv.push_back(n->a);
            break;
        case Op::Exists:
            for (auto& v : n->kids[0]->free)
                if (v != n->a) fv.push_back(v);
            break;
        default:
            for (auto& k : n->kids) fv.insert(fv.end(), k->free.begin(), k->free.end());
    }
    std::sort(fv.begin(), fv.end());
    fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
    n->free = std::move(fv);
    int d = 0;
    for (auto& k : n->kids) d = std::max(d, k->depth);
    n->depth = d + (op == Op::Exists ? 1 : 0);
    return n;
}

const std::vector<std::string> kReserved{"bot", "top", "sr", "sub", "lift", "not", "or", "and",
                                         "exists", "forall", "em", "sing", "eq"};

bool is_forall(const Formula& f) {
    return f->op == Op::Not && f->kids[0]->op == Op::Exists && f->kids[0]->kids[0]->op == Op::Not;
}

std::string print_rec(const Formula& f, int ctx) {
    auto wrap = [](const std::string& s) { return "(" + s + ")"; };
    if (is_forall(f)) {
        std::string s = "forall " + f->kids[0]->a + " . " + print_rec(f->kids[0]->kids[0]->kids[0], 0);
        return ctx > 0 ? wrap(s) : s;
    }
    switch (f->op) {
        case Op::Bot: return "bot";
        case Op::Top: return "top";
        case Op::Sr: return "sr(" + f->a + ")";
        case Op::Em: return "em(" + f->a + ")";
        case Op::Sing: return "sing(" + f->a + ")";
        case Op::Eq: return "eq(" + f->a + ", " + f->b + ")";
        case Op::Sub: return f->a + " sub " + f->b;
        case Op::Lift: {
            std::string s = "lift " + f->lifting + "(" + f->a;
            for (auto& q : f->args) s += ", " + q;
            return s + ")";
        }
        case Op::Not: return "not " + print_rec(f->kids[0], 4);
        case Op::Or: {
            std::string s = print_rec(f->kids[0], 1) + " or " + print_rec(f->kids[1], 2);
            return ctx > 1 ? wrap(s) : s;
        }
        case Op::And: {
            std::string s = print_rec(f->kids[0], 2) + " and " + print_rec(f->kids[1], 3);
            return ctx > 2 ? wrap(s) : s;
        }
        case Op::Exists: {
            std::string s = "exists " + f->a + " . " + print_rec(f->kids[0], 0);
            return ctx > 0 ? wrap(s) : s;
        }
    }
    return "";
}

Formula parse_or(detail::Lexer& lx);

std::string paren_ident(detail::Lexer& lx) {
    lx.expect("(");
    std::string p = lx.ident(kReserved);
    lx.expect(")");
    return p;
}

Formula parse_unary(detail::Lexer& lx) {
    if (lx.accept("not")) return make_not(parse_unary(lx));
    if (lx.accept("exists") || lx.at("forall")) {
        bool ex = !lx.accept("forall");
        std::string p = lx.ident(kReserved);
        lx.expect(".");
        Formula body = parse_or(lx);
        return ex ? make_exists(p, body) : make_forall(p, body);
    }
    if (lx.accept("bot")) return bot();
    if (lx.accept("top")) return top();
    if (lx.accept("sr")) return sr(paren_ident(lx));
    if (lx.accept("em")) return em(paren_ident(lx));
    if (lx.accept("sing")) return sing(paren_ident(lx));
    if (lx.accept("eq")) {
        lx.expect("(");
        std::string p = lx.ident(kReserved);
        lx.expect(",");
        std::string q = lx.ident(kReserved);
        lx.expect(")");
        return eq(p, q);
    }
    if (lx.accept("lift")) {
        std::string name = lx.ident(kReserved);
        lx.expect("(");
        std::string p = lx.ident(kReserved);
        std::vector<std::string> qs;
        while (lx.accept(",")) qs.push_back(lx.ident(kReserved));
        lx.expect(")");
        return lift(name, p, std::move(qs));
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

void names(const Formula& f, std::set<std::string>& out) {
    out.insert(f->free.begin(), f->free.end());
    if (f->op == Op::Exists) out.insert(f->a);
    for (auto& k : f->kids) names(k, out);
}

std::string fresh(const std::string& base, std::set<std::string>& used) {
    std::string s = base;
    for (int i = 0; used.count(s); ++i) s = base + std::to_string(i);
    used.insert(s);
    return s;
}

Formula expand_rec(const Formula& f, std::set<std::string>& used) {
    switch (f->op) {
        case Op::Eq: return make_and(sub(f->a, f->b), sub(f->b, f->a));
        case Op::Em: {
            std::string q = fresh("q", used);
            return make_forall(q, implies(sub(q, f->a), expand_rec(eq(q, f->a), used)));
        }
        case Op::Sing: {
            std::string q = fresh("q", used);
            Formula inner = make_or(expand_rec(em(q), used), expand_rec(eq(q, f->a), used));
            return make_and(make_not(expand_rec(em(f->a), used)), make_forall(q, implies(sub(q, f->a), inner)));
        }
        case Op::Not:
        case Op::Or:
        case Op::And:
        case Op::Exists: {
            std::vector<Formula> kids;
            for (auto& k : f->kids) kids.push_back(expand_rec(k, used));
            return mk(f->op, f->a, f->b, f->lifting, f->args, std::move(kids));
        }
        default: return f;
    }
}

struct Evaluator {
    const TModel& m;
    LiftEvaluator lifts;
    std::uint32_t point;
    Mask full;
    std::map<std::string, Mask> env;

    Evaluator(const TModel& model, const LiftingSet& ls, std::uint32_t s)
        : m(model), lifts(model, ls), point(s), full(full_mask(model.size())) {
        for (auto& [p, set] : model.valuation) env[p] = to_mask(set);
    }

    Mask val(const std::string& p) const {
        auto it = env.find(p);
        return it == env.end() ? 0 : it->second;
    }

    static StateSet as_set(Mask m, std::size_t n) {
        StateSet s(n, false);
        for (std::size_t i = 0; i < n; ++i) s[i] = has(m, i);
        return s;
    }

    bool eval(const Formula& f) {
        switch (f->op) {
            case Op::Bot: return false;
            case Op::Top: return true;
            case Op::Sr: return val(f->a) == bit(point);
            case Op::Sub: return subset(val(f->a), val(f->b));
            case Op::Eq: return val(f->a) == val(f->b);
            case Op::Em: return val(f->a) == 0;
            case Op::Sing: return popcount(val(f->a)) == 1;
            case Op::Lift: {
                std::vector<StateSet> args;
                for (auto& q : f->args) args.push_back(as_set(val(q), m.size()));
                std::vector<const StateSet*> ptrs;
                for (auto& a : args) ptrs.push_back(&a);
                lifts.get(f->lifting, ptrs.size());
                for (auto v : elements(val(f->a)))
                    if (!lifts.holds(f->lifting, static_cast<std::uint32_t>(v), ptrs)) return false;
                return true;
            }
            case Op::Not: return !eval(f->kids[0]);
            case Op::Or: return eval(f->kids[0]) || eval(f->kids[1]);
            case Op::And: return eval(f->kids[0]) && eval(f->kids[1]);
            case Op::Exists: {
                auto it = env.find(f->a);
                std::optional<Mask> saved = it == env.end() ? std::nullopt : std::optional<Mask>(it->second);
                bool found = !for_each_submask(full, [&](Mask z) {
                    env[f->a] = z;
                    return !eval(f->kids[0]);
                });
                if (saved) env[f->a] = *saved;
                else env.erase(f->a);
                return found;
            }
        }
        return false;
    }
};

}  // namespace

Formula bot() { return mk(Op::Bot, "", "", "", {}, {}); }
Formula top() { return mk(Op::Top, "", "", "", {}, {}); }
Formula sr(std::string p) { return mk(Op::Sr, std::move(p), "", "", {}, {}); }
Formula sub(std::string p, std::string q) { return mk(Op::Sub, std::move(p), std::move(q), "", {}, {}); }
Formula lift(std::string name, std::string p, std::vector<std::string> qs) {
    return mk(Op::Lift, std::move(p), "", std::move(name), std::move(qs), {});
}
Formula make_not(Formula f) { return mk(Op::Not, "", "", "", {}, {std::move(f)}); }
Formula make_or(Formula a, Formula b) { return mk(Op::Or, "", "", "", {}, {std::move(a), std::move(b)}); }
Formula make_and(Formula a, Formula b) { return mk(Op::And, "", "", "", {}, {std::move(a), std::move(b)}); }
Formula make_or(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula f = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) f = make_or(f, fs[i]);
    return f;
}
Formula make_and(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula f = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) f = make_and(f, fs[i]);
    return f;
}
Formula implies(Formula a, Formula b) { return make_or(make_not(std::move(a)), std::move(b)); }
Formula make_exists(std::string p, Formula body) { return mk(Op::Exists, std::move(p), "", "", {}, {std::move(body)}); }
Formula make_forall(std::string p, Formula body) {
    return make_not(make_exists(std::move(p), make_not(std::move(body))));
}
Formula em(std::string p) { return mk(Op::Em, std::move(p), "", "", {}, {}); }
Formula sing(std::string p) { return mk(Op::Sing, std::move(p), "", "", {}, {}); }
Formula eq(std::string p, std::string q) { return mk(Op::Eq, std::move(p), std::move(q), "", {}, {}); }

bool equal(const Formula& a, const Formula& b) {
    if (a->op != b->op || a->a != b->a || a->b != b->b || a->lifting != b->lifting || a->args != b->args ||
        a->kids.size() != b->kids.size())
        return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!equal(a->kids[i], b->kids[i])) return false;
    return true;
}

std::string print(const Formula& f) { return print_rec(f, 0); }

Formula parse(const std::string& text) {
    detail::Lexer lx(text);
    Formula f = parse_or(lx);
    if (!lx.done()) lx.fail("trailing input");
    return f;
}

Formula expand_macros(const Formula& f) {
    std::set<std::string> used;
    names(f, used);
    return expand_rec(f, used);
}

bool eval_mso(const Formula& f, const TModel& m, std::uint32_t s, const LiftingSet& lifts, const Caps& caps) {
    if (s >= m.size()) throw Error("point outside the model");
    if (m.size() > 64) throw CapError("MSO evaluation is limited to 64 states");
    if (f->depth > 0 && m.size() > static_cast<std::size_t>(caps.quantifier))
        throw CapError("quantifier enumeration over " + std::to_string(m.size()) + " states exceeds cap " +
                       std::to_string(caps.quantifier));
    Evaluator e(m, lifts, s);
    return e.eval(f);
}

}  // namespace mso

// ---------------------------------------------------------------- (·)^⋄

namespace {

struct Translator {
    std::set<std::string> used;

    std::string fresh(const std::string& base) {
        std::string s = base;
        for (int i = 0; used.count(s); ++i) s = base + std::to_string(i);
        used.insert(s);
        return s;
    }

    void collect(const mu::Formula& f) {
        used.insert(f->free.begin(), f->free.end());
        if (f->op == mu::Op::Mu || f->op == mu::Op::Nu) used.insert(f->var);
        for (auto& k : f->kids) collect(k);
    }

    // Points y with sing(y) satisfying body(y).
    mso::Formula all_points(const std::function<mso::Formula(const std::string&)>& body) {
        std::string y = fresh("y");
        return mso::make_forall(y, mso::implies(mso::sing(y), body(y)));
    }

    mso::Formula tr(const mu::Formula& f, const std::string& x) {
        using mu::Op;
        switch (f->op) {
            case Op::Prop: return mso::sub(x, f->var);
            case Op::NegProp: return mso::make_not(mso::sub(x, f->var));
            case Op::Bot: return mso::bot();
            case Op::Top: return mso::top();
            case Op::Or: return mso::make_or(tr(f->kids[0], x), tr(f->kids[1], x));
            case Op::And: return mso::make_and(tr(f->kids[0], x), tr(f->kids[1], x));
            case Op::Lift: {
                std::vector<std::string> qs;
                std::vector<mso::Formula> parts;
                for (auto& k : f->kids) {
                    std::string q = fresh("q");
                    qs.push_back(q);
                    parts.push_back(
                        all_points([&](const std::string& y) { return mso::implies(mso::sub(y, q), tr(k, y)); }));
                }
                parts.push_back(mso::lift(f->lifting, x, qs));
                mso::Formula body = mso::make_and(parts);
                for (auto it = qs.rbegin(); it != qs.rend(); ++it) body = mso::make_exists(*it, body);
                return body;
            }
            case Op::Mu: {
                // x lies in every prefixed point of the body
                const std::string& p = f->var;
                mso::Formula closed = all_points(
                    [&](const std::string& y) { return mso::implies(tr(f->kids[0], y), mso::sub(y, p)); });
                return mso::make_forall(p, mso::implies(closed, mso::sub(x, p)));
            }
            case Op::Nu: {
                // x lies in some postfixed point of the body
                const std::string& p = f->var;
                mso::Formula post = all_points(
                    [&](const std::string& y) { return mso::implies(mso::sub(y, p), tr(f->kids[0], y)); });
                return mso::make_exists(p, mso::make_and(mso::sub(x, p), post));
            }
            case Op::GAll: return all_points([&](const std::string& y) { return tr(f->kids[0], y); });
            case Op::GSome: {
                std::string y = fresh("y");
                return mso::make_exists(y, mso::make_and(mso::sing(y), tr(f->kids[0], y)));
            }
        }
        return mso::bot();
    }
};

}  // namespace

mso::Formula mu_to_mso(const mu::Formula& f) {
    mu::validate(f);
    Translator t;
    t.collect(f);
    std::string x = t.fresh("x");
    return mso::make_exists(x, mso::make_and(mso::sr(x), t.tr(f, x)));
}

}  // namespace cak
