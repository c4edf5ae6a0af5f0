#include "cak/onestep.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "lexer.hpp"

namespace cak {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

// ---------------------------------------------------------------- ML¹

namespace ml1 {

Term var(std::string v) { return Term{TermOp::Var, std::move(v), {}}; }
Term term_or(Term a, Term b) { return Term{TermOp::Or, "", {std::move(a), std::move(b)}}; }
Term term_and(Term a, Term b) { return Term{TermOp::And, "", {std::move(a), std::move(b)}}; }

namespace {

void term_vars(const Term& t, std::vector<std::string>& out) {
    if (t.op == TermOp::Var) out.push_back(t.var);
    for (auto& k : t.kids) term_vars(k, out);
}

Formula mk(Op op, std::string lifting, std::vector<Term> args, std::vector<Formula> kids) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lifting = std::move(lifting);
    n->args = std::move(args);
    n->kids = std::move(kids);
    std::vector<std::string> fv;
    for (auto& t : n->args) term_vars(t, fv);
    for (auto& k : n->kids) fv.insert(fv.end(), k->free.begin(), k->free.end());
    n->free = sorted_unique(std::move(fv));
    return n;
}

std::string print_term(const Term& t, int ctx) {
    switch (t.op) {
        case TermOp::Var: return t.var;
        case TermOp::Or: {
            std::string s = print_term(t.kids[0], 1) + " or " + print_term(t.kids[1], 2);
            return ctx > 1 ? "(" + s + ")" : s;
        }
        case TermOp::And: {
            std::string s = print_term(t.kids[0], 2) + " and " + print_term(t.kids[1], 3);
            return ctx > 2 ? "(" + s + ")" : s;
        }
    }
    return "";
}

std::string print_rec(const Formula& f, int ctx) {
    switch (f->op) {
        case Op::Bot: return "bot";
        case Op::Top: return "top";
        case Op::Lift: {
            std::string s = "lift " + f->lifting + "(";
            for (std::size_t i = 0; i < f->args.size(); ++i) s += (i ? ", " : "") + print_term(f->args[i], 0);
            return s + ")";
        }
        case Op::Or: {
            std::string s = print_rec(f->kids[0], 1) + " or " + print_rec(f->kids[1], 2);
            return ctx > 1 ? "(" + s + ")" : s;
        }
        case Op::And: {
            std::string s = print_rec(f->kids[0], 2) + " and " + print_rec(f->kids[1], 3);
            return ctx > 2 ? "(" + s + ")" : s;
        }
    }
    return "";
}

const std::vector<std::string> kReserved{"bot", "top", "lift", "or", "and", "not", "exists", "forall", "dual",
                                         "sub", "disjoint", "unioneq"};

Term parse_term(detail::Lexer& lx);
Term parse_term_atom(detail::Lexer& lx) {
    if (lx.accept("(")) {
        Term t = parse_term(lx);
        lx.expect(")");
        return t;
    }
    return var(lx.ident(kReserved));
}
Term parse_term_and(detail::Lexer& lx) {
    Term t = parse_term_atom(lx);
    while (lx.accept("and")) t = term_and(std::move(t), parse_term_atom(lx));
    return t;
}
Term parse_term(detail::Lexer& lx) {
    Term t = parse_term_and(lx);
    while (lx.accept("or")) t = term_or(std::move(t), parse_term_and(lx));
    return t;
}

Formula parse_or(detail::Lexer& lx);
Formula parse_atom(detail::Lexer& lx) {
    if (lx.accept("bot")) return bot();
    if (lx.accept("top")) return top();
    if (lx.accept("lift")) {
        std::string name = lx.ident(kReserved);
        lx.expect("(");
        std::vector<Term> args;
        if (!lx.at(")")) {
            args.push_back(parse_term(lx));
            while (lx.accept(",")) args.push_back(parse_term(lx));
        }
        lx.expect(")");
        return lift(name, std::move(args));
    }
    if (lx.accept("(")) {
        Formula f = parse_or(lx);
        lx.expect(")");
        return f;
    }
    lx.fail("expected a modal one-step formula");
}
Formula parse_and(detail::Lexer& lx) {
    Formula f = parse_atom(lx);
    while (lx.accept("and")) f = make_and(f, parse_atom(lx));
    return f;
}
Formula parse_or(detail::Lexer& lx) {
    Formula f = parse_and(lx);
    while (lx.accept("or")) f = make_or(f, parse_and(lx));
    return f;
}

Term dual_term(const Term& t) {
    Term out = t;
    if (t.op == TermOp::Or) out.op = TermOp::And;
    if (t.op == TermOp::And) out.op = TermOp::Or;
    for (auto& k : out.kids) k = dual_term(k);
    return out;
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& ren) {
    Term out = t;
    if (t.op == TermOp::Var) {
        auto it = ren.find(t.var);
        if (it != ren.end()) out.var = it->second;
    }
    for (auto& k : out.kids) k = rename_term(k, ren);
    return out;
}

}  // namespace

Formula bot() { return mk(Op::Bot, "", {}, {}); }
Formula top() { return mk(Op::Top, "", {}, {}); }
Formula lift(std::string name, std::vector<Term> args) { return mk(Op::Lift, std::move(name), std::move(args), {}); }
Formula make_or(Formula a, Formula b) { return mk(Op::Or, "", {}, {std::move(a), std::move(b)}); }
Formula make_and(Formula a, Formula b) { return mk(Op::And, "", {}, {std::move(a), std::move(b)}); }
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

bool equal(const Formula& a, const Formula& b) {
    if (a->op != b->op || a->lifting != b->lifting || !(a->args == b->args) || a->kids.size() != b->kids.size())
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

bool eval(const Formula& f, const OneStepModel& m, const LiftingSet& lifts) {
    std::vector<std::string> order(f->free.begin(), f->free.end());
    for (auto& v : order)
        if (!m.V.count(v)) throw Error("unbound variable '" + v + "'");
    Program p = compile(f, order, lifts);
    std::vector<Mask> env(p.num_slots, 0);
    for (std::size_t i = 0; i < order.size(); ++i) env[i] = m.V.at(order[i]);
    auto d = make_dense(*m.functor, m.alpha, m.n);
    return run(p, d, env);
}

Formula dual(const Formula& f, const LiftingSet& lifts) {
    switch (f->op) {
        case Op::Bot: return top();
        case Op::Top: return bot();
        case Op::Or: return make_and(dual(f->kids[0], lifts), dual(f->kids[1], lifts));
        case Op::And: return make_or(dual(f->kids[0], lifts), dual(f->kids[1], lifts));
        case Op::Lift: {
            auto l = lifts.get(f->lifting);
            if (l->dual_name.empty() || !lifts.find(l->dual_name))
                throw Error("lifting '" + f->lifting + "' has no registered dual");
            std::vector<Term> args;
            for (auto& t : f->args) args.push_back(dual_term(t));
            return lift(l->dual_name, std::move(args));
        }
    }
    return f;
}

Formula rename(const Formula& f, const std::map<std::string, std::string>& ren) {
    std::vector<Term> args;
    for (auto& t : f->args) args.push_back(rename_term(t, ren));
    std::vector<Formula> kids;
    for (auto& k : f->kids) kids.push_back(rename(k, ren));
    return mk(f->op, f->lifting, std::move(args), std::move(kids));
}

}  // namespace ml1

// ---------------------------------------------------------------- SO¹

namespace so1 {

namespace {

Formula mk(Op op, std::string a, std::string b, std::string lifting, std::vector<std::string> vars,
           std::vector<Formula> kids) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->lifting = std::move(lifting);
    n->vars = std::move(vars);
    n->kids = std::move(kids);
    std::vector<std::string> fv;
    switch (op) {
        case Op::Sub: fv = {n->a, n->b}; break;
        case Op::Lift:
        case Op::Disjoint: fv = n->vars; break;
        case Op::UnionEq:
            fv = n->vars;
            fv.push_back(n->a);
            break;
        case Op::Exists:
            for (auto& v : n->kids[0]->free)
                if (v != n->a) fv.push_back(v);
            break;
        default:
            for (auto& k : n->kids) fv.insert(fv.end(), k->free.begin(), k->free.end());
    }
    n->free = sorted_unique(std::move(fv));
    int d = 0;
    for (auto& k : n->kids) d = std::max(d, k->depth);
    n->depth = d + (op == Op::Exists ? 1 : 0);
    return n;
}

const std::vector<std::string> kReserved{"bot", "top", "lift", "or", "and", "not", "exists", "forall", "dual",
                                         "sub", "disjoint", "unioneq"};

bool is_forall(const Formula& f) {
    return f->op == Op::Not && f->kids[0]->op == Op::Exists && f->kids[0]->kids[0]->op == Op::Not;
}

std::string list(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
}

// ctx: 0 top / quantifier body, 1 left of or, 2 right of or / left of and, 3 right of and, 4 under not
std::string print_rec(const Formula& f, int ctx) {
    auto wrap = [](const std::string& s) { return "(" + s + ")"; };
    if (is_forall(f)) {
        std::string s = "forall " + f->kids[0]->a + " . " + print_rec(f->kids[0]->kids[0]->kids[0], 0);
        return ctx > 0 ? wrap(s) : s;
    }
    switch (f->op) {
        case Op::Bot: return "bot";
        case Op::Top: return "top";
        case Op::Sub: return f->a + " sub " + f->b;
        case Op::Lift: return "lift " + f->lifting + "(" + list(f->vars) + ")";
        case Op::Disjoint: return "disjoint(" + list(f->vars) + ")";
        case Op::UnionEq: return "unioneq(" + f->a + "; " + list(f->vars) + ")";
        case Op::Dual: return "dual(" + print_rec(f->kids[0], 0) + ")";
        case Op::Not: {
            std::string s = "not " + print_rec(f->kids[0], 4);
            return ctx > 3 ? s : s;  // "not" binds tighter than and/or
        }
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

std::vector<std::string> parse_idlist(detail::Lexer& lx) {
    std::vector<std::string> v;
    if (lx.at(")") || lx.at(";")) return v;
    v.push_back(lx.ident(kReserved));
    while (lx.accept(",")) v.push_back(lx.ident(kReserved));
    return v;
}

Formula parse_unary(detail::Lexer& lx) {
    if (lx.accept("not")) return make_not(parse_unary(lx));
    if (lx.accept("exists")) {
        std::string x = lx.ident(kReserved);
        lx.expect(".");
        return make_exists(x, parse_or(lx));
    }
    if (lx.accept("forall")) {
        std::string x = lx.ident(kReserved);
        lx.expect(".");
        return make_forall(x, parse_or(lx));
    }
    if (lx.accept("bot")) return bot();
    if (lx.accept("top")) return top();
    if (lx.accept("lift")) {
        std::string name = lx.ident(kReserved);
        lx.expect("(");
        auto args = parse_idlist(lx);
        lx.expect(")");
        return lift(name, std::move(args));
    }
    if (lx.accept("dual")) {
        lx.expect("(");
        Formula f = parse_or(lx);
        lx.expect(")");
        return make_dual(f);
    }
    if (lx.accept("disjoint")) {
        lx.expect("(");
        auto v = parse_idlist(lx);
        lx.expect(")");
        return make_disjoint(std::move(v));
    }
    if (lx.accept("unioneq")) {
        lx.expect("(");
        std::string z = lx.ident(kReserved);
        lx.expect(";");
        auto v = parse_idlist(lx);
        lx.expect(")");
        return make_union_eq(z, std::move(v));
    }
    if (lx.accept("(")) {
        Formula f = parse_or(lx);
        lx.expect(")");
        return f;
    }
    std::string a = lx.ident(kReserved);
    lx.expect("sub");
    std::string b = lx.ident(kReserved);
    return sub(a, b);
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

std::string fresh(const std::string& base, const std::set<std::string>& avoid) {
    std::string s = base;
    int i = 0;
    while (avoid.count(s)) s = base + std::to_string(i++);
    return s;
}

void collect_names(const Formula& f, std::set<std::string>& out) {
    out.insert(f->free.begin(), f->free.end());
    if (f->op == Op::Exists) out.insert(f->a);
    for (auto& k : f->kids) collect_names(k, out);
}

}  // namespace

Formula bot() { return mk(Op::Bot, "", "", "", {}, {}); }
Formula top() { return mk(Op::Top, "", "", "", {}, {}); }
Formula sub(std::string a, std::string b) { return mk(Op::Sub, std::move(a), std::move(b), "", {}, {}); }
Formula lift(std::string name, std::vector<std::string> args) {
    return mk(Op::Lift, "", "", std::move(name), std::move(args), {});
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
Formula make_exists(std::string var, Formula body) { return mk(Op::Exists, std::move(var), "", "", {}, {std::move(body)}); }
Formula make_forall(std::string var, Formula body) {
    return make_not(make_exists(std::move(var), make_not(std::move(body))));
}
Formula make_dual(Formula f) { return mk(Op::Dual, "", "", "", {}, {std::move(f)}); }
Formula make_disjoint(std::vector<std::string> vars) { return mk(Op::Disjoint, "", "", "", std::move(vars), {}); }
Formula make_union_eq(std::string z, std::vector<std::string> vars) {
    return mk(Op::UnionEq, std::move(z), "", "", std::move(vars), {});
}

bool equal(const Formula& a, const Formula& b) {
    if (a->op != b->op || a->a != b->a || a->b != b->b || a->lifting != b->lifting || a->vars != b->vars ||
        a->kids.size() != b->kids.size())
        return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!equal(a->kids[i], b->kids[i])) return false;
    return true;
}

int recompute_depth(const Formula& f) {
    int d = 0;
    for (auto& k : f->kids) d = std::max(d, recompute_depth(k));
    return d + (f->op == Op::Exists ? 1 : 0);
}

std::string print(const Formula& f) { return print_rec(f, 0); }

Formula parse(const std::string& text) {
    detail::Lexer lx(text);
    Formula f = parse_or(lx);
    if (!lx.done()) lx.fail("trailing input");
    return f;
}

bool eval(const Formula& f, const OneStepModel& m, const LiftingSet& lifts, const Caps& caps) {
    std::vector<std::string> order(f->free.begin(), f->free.end());
    for (auto& v : order)
        if (!m.V.count(v)) throw Error("unbound variable '" + v + "'");
    Program p = compile(f, order, lifts);
    check_quantifier_cap(p, m.n, caps);
    std::vector<Mask> env(p.num_slots, 0);
    for (std::size_t i = 0; i < order.size(); ++i) env[i] = m.V.at(order[i]);
    auto d = make_dense(*m.functor, m.alpha, m.n);
    return run(p, d, env);
}

Formula dual(const Formula& f) { return make_dual(f); }

Formula rename(const Formula& f, const std::map<std::string, std::string>& ren) {
    auto r = [&](const std::string& v) {
        auto it = ren.find(v);
        return it == ren.end() ? v : it->second;
    };
    switch (f->op) {
        case Op::Bot:
        case Op::Top: return f;
        case Op::Sub: return sub(r(f->a), r(f->b));
        case Op::Lift:
        case Op::Disjoint: {
            std::vector<std::string> v;
            for (auto& x : f->vars) v.push_back(r(x));
            return f->op == Op::Lift ? lift(f->lifting, std::move(v)) : make_disjoint(std::move(v));
        }
        case Op::UnionEq: {
            std::vector<std::string> v;
            for (auto& x : f->vars) v.push_back(r(x));
            return make_union_eq(r(f->a), std::move(v));
        }
        case Op::Exists: {
            std::map<std::string, std::string> inner;
            std::set<std::string> targets;
            for (auto& [k, v] : ren)
                if (k != f->a && std::binary_search(f->kids[0]->free.begin(), f->kids[0]->free.end(), k)) {
                    inner[k] = v;
                    targets.insert(v);
                }
            std::string x = f->a;
            if (targets.count(x)) {
                std::set<std::string> avoid;
                collect_names(f->kids[0], avoid);
                avoid.insert(targets.begin(), targets.end());
                std::string y = fresh(x + "'", avoid);
                inner[x] = y;
                x = y;
            }
            return make_exists(x, rename(f->kids[0], inner));
        }
        default: {
            std::vector<Formula> kids;
            for (auto& k : f->kids) kids.push_back(rename(k, ren));
            return mk(f->op, f->a, f->b, f->lifting, f->vars, std::move(kids));
        }
    }
}

Formula expand_abbreviations(const Formula& f) {
    std::set<std::string> avoid;
    collect_names(f, avoid);
    switch (f->op) {
        case Op::Disjoint: {
            // ∀X((X ⊆ v ∧ X ⊆ w) → ∀Y(X ⊆ Y)) for each pair v ≠ w
            std::string x = fresh("_dx", avoid), y = fresh("_dy", avoid);
            std::vector<Formula> parts;
            for (std::size_t i = 0; i < f->vars.size(); ++i)
                for (std::size_t j = i + 1; j < f->vars.size(); ++j) {
                    Formula both = make_and(sub(x, f->vars[i]), sub(x, f->vars[j]));
                    Formula empty = make_forall(y, sub(x, y));
                    parts.push_back(make_forall(x, make_or(make_not(both), empty)));
                }
            return make_and(parts);
        }
        case Op::UnionEq: {
            // ⋀ v ⊆ Z  ∧  ∀W((⋀ v ⊆ W) → Z ⊆ W)
            std::string w = fresh("_uw", avoid);
            std::vector<Formula> lower, upper;
            for (auto& v : f->vars) {
                lower.push_back(sub(v, f->a));
                upper.push_back(sub(v, w));
            }
            Formula least = make_forall(w, make_or(make_not(make_and(upper)), sub(f->a, w)));
            lower.push_back(least);
            return make_and(lower);
        }
        case Op::Bot:
        case Op::Top:
        case Op::Sub:
        case Op::Lift: return f;
        default: {
            std::vector<Formula> kids;
            for (auto& k : f->kids) kids.push_back(expand_abbreviations(k));
            return mk(f->op, f->a, f->b, f->lifting, f->vars, std::move(kids));
        }
    }
}

std::vector<std::string> bound_vars(const Formula& f) {
    std::vector<std::string> out;
    std::function<void(const Formula&)> rec = [&](const Formula& g) {
        if (g->op == Op::Exists) out.push_back(g->a);
        for (auto& k : g->kids) rec(k);
    };
    rec(f);
    return out;
}

bool is_modal(const Formula& f) {
    switch (f->op) {
        case Op::Bot:
        case Op::Top:
        case Op::Lift: return true;
        case Op::Or:
        case Op::And: return is_modal(f->kids[0]) && is_modal(f->kids[1]);
        default: return false;
    }
}

bool syntactically_special_basic(const Formula& f) {
    if (f->free.empty()) return true;
    if (f->op == Op::Or) return syntactically_special_basic(f->kids[0]) && syntactically_special_basic(f->kids[1]);
    if (f->op == Op::And) {
        for (int side = 0; side < 2; ++side) {
            const Formula& d = f->kids[side];
            if (d->op != Op::Disjoint) continue;
            std::vector<std::string> w = sorted_unique(d->vars);
            const auto& rest = f->kids[1 - side]->free;
            if (std::includes(w.begin(), w.end(), rest.begin(), rest.end())) return true;
        }
    }
    return false;
}

}  // namespace so1

// ---------------------------------------------------------------- compiled programs

namespace {

struct Compiler {
    Program p;
    const LiftingSet& lifts;
    std::vector<std::pair<std::string, int>> scope;  // innermost last

    explicit Compiler(const LiftingSet& l) : lifts(l) {}

    int lookup(const std::string& v) const {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == v) return it->second;
        throw Error("unbound variable '" + v + "'");
    }

    const Lifting* lifting(const std::string& name, std::size_t arity) {
        auto l = lifts.get(name);
        if (l->arity != arity)
            throw Error("lifting '" + name + "' expects " + std::to_string(l->arity) + " arguments, got " +
                        std::to_string(arity));
        p.lifts.push_back(l);
        return l.get();
    }

    int add(PNode n) {
        p.nodes.push_back(std::move(n));
        return static_cast<int>(p.nodes.size()) - 1;
    }

    int term(const ml1::Term& t) {
        PNode n;
        if (t.op == ml1::TermOp::Var) {
            n.op = POp::TVar;
            n.x = lookup(t.var);
        } else {
            n.op = t.op == ml1::TermOp::Or ? POp::TOr : POp::TAnd;
            for (auto& k : t.kids) n.kids.push_back(term(k));
        }
        return add(std::move(n));
    }

    int ml(const ml1::Formula& f) {
        PNode n;
        switch (f->op) {
            case ml1::Op::Bot: n.op = POp::Bot; break;
            case ml1::Op::Top: n.op = POp::Top; break;
            case ml1::Op::Or:
            case ml1::Op::And:
                n.op = f->op == ml1::Op::Or ? POp::Or : POp::And;
                for (auto& k : f->kids) n.kids.push_back(ml(k));
                break;
            case ml1::Op::Lift:
                n.op = POp::LiftTerms;
                n.lift = lifting(f->lifting, f->args.size());
                for (auto& t : f->args) n.kids.push_back(term(t));
                break;
        }
        return add(std::move(n));
    }

    int so(const so1::Formula& f) {
        using so1::Op;
        PNode n;
        switch (f->op) {
            case Op::Bot: n.op = POp::Bot; break;
            case Op::Top: n.op = POp::Top; break;
            case Op::Sub:
                n.op = POp::Sub;
                n.x = lookup(f->a);
                n.y = lookup(f->b);
                break;
            case Op::Lift:
                n.op = POp::LiftVars;
                n.lift = lifting(f->lifting, f->vars.size());
                for (auto& v : f->vars) n.slots.push_back(lookup(v));
                break;
            case Op::Disjoint:
                n.op = POp::Disjoint;
                for (auto& v : f->vars) n.slots.push_back(lookup(v));
                break;
            case Op::UnionEq:
                n.op = POp::UnionEq;
                n.x = lookup(f->a);
                for (auto& v : f->vars) n.slots.push_back(lookup(v));
                break;
            case Op::Not:
            case Op::Dual:
                n.op = f->op == Op::Not ? POp::Not : POp::Dual;
                n.kids.push_back(so(f->kids[0]));
                break;
            case Op::Or:
            case Op::And:
                n.op = f->op == Op::Or ? POp::Or : POp::And;
                for (auto& k : f->kids) n.kids.push_back(so(k));
                break;
            case Op::Exists: {
                n.op = POp::Exists;
                n.x = static_cast<int>(p.num_slots++);
                p.slot_names.push_back(f->a);
                scope.emplace_back(f->a, n.x);
                n.kids.push_back(so(f->kids[0]));
                scope.pop_back();
                break;
            }
        }
        return add(std::move(n));
    }
};

using PolMap = std::vector<std::pair<int, std::uint8_t>>;  // sorted by slot

PolMap get_pol(const PNode& n) {
    PolMap m;
    for (std::size_t i = 0; i < n.free.size(); ++i) m.emplace_back(n.free[i], n.polarity[i]);
    return m;
}

void put(PolMap& m, int slot, std::uint8_t pol) {
    for (auto& [s, p] : m)
        if (s == slot) {
            p |= pol;
            return;
        }
    m.emplace_back(slot, pol);
}

std::uint8_t flip(std::uint8_t p) {
    return static_cast<std::uint8_t>(((p & PolPos) ? PolNeg : 0) | ((p & PolNeg) ? PolPos : 0));
}

void set_pol(PNode& n, PolMap m) {
    std::sort(m.begin(), m.end());
    n.free.clear();
    n.polarity.clear();
    n.monotone = n.antitone = true;
    for (auto [s, p] : m) {
        n.free.push_back(s);
        n.polarity.push_back(p);
        if (p & PolNeg) n.monotone = false;
        if (p & PolPos) n.antitone = false;
    }
}

// Children are compiled before parents, so a single forward pass suffices.
void analyse(Program& p) {
    for (auto& n : p.nodes) {
        PolMap m;
        switch (n.op) {
            case POp::Bot:
            case POp::Top: break;
            case POp::Sub:
                if (n.x == n.y) {
                    put(m, n.x, PolNone);
                } else {
                    put(m, n.x, PolNeg);
                    put(m, n.y, PolPos);
                }
                break;
            case POp::LiftVars:
                for (int s : n.slots) put(m, s, n.lift->monotone ? std::uint8_t{PolPos} : std::uint8_t{PolMixed});
                break;
            case POp::LiftTerms:
                for (int k : n.kids)
                    for (auto [s, pol] : get_pol(p.nodes[k])) put(m, s, n.lift->monotone ? pol : std::uint8_t{PolMixed});
                break;
            case POp::TVar: put(m, n.x, PolPos); break;
            case POp::TOr:
            case POp::TAnd:
            case POp::Or:
            case POp::And:
                for (int k : n.kids)
                    for (auto [s, pol] : get_pol(p.nodes[k])) put(m, s, pol);
                break;
            case POp::Not:
                for (auto [s, pol] : get_pol(p.nodes[n.kids[0]])) put(m, s, flip(pol));
                break;
            case POp::Dual:
                for (auto [s, pol] : get_pol(p.nodes[n.kids[0]])) put(m, s, pol);
                break;
            case POp::Disjoint:
                for (int s : n.slots) put(m, s, PolNeg);
                break;
            case POp::UnionEq:
                put(m, n.x, PolMixed);
                for (int s : n.slots) put(m, s, PolMixed);
                break;
            case POp::Exists: {
                const PNode& body = p.nodes[n.kids[0]];
                // ∃Z.(unioneq(Z; S) ∧ ψ) with ψ monotone in Z behaves as ψ[⋃S/Z]: S upward.
                bool pattern = false;
                if (body.op == POp::And) {
                    for (int side = 0; side < 2 && !pattern; ++side) {
                        const PNode& u = p.nodes[body.kids[side]];
                        const PNode& rest = p.nodes[body.kids[1 - side]];
                        if (u.op != POp::UnionEq || u.x != n.x) continue;
                        if (std::find(u.slots.begin(), u.slots.end(), n.x) != u.slots.end()) continue;
                        std::uint8_t zpol = PolNone;
                        for (auto [s, pol] : get_pol(rest))
                            if (s == n.x) zpol = pol;
                        if (zpol & PolNeg) continue;
                        pattern = true;
                        for (auto [s, pol] : get_pol(rest))
                            if (s != n.x) put(m, s, pol);
                        for (int s : u.slots) put(m, s, PolPos);
                    }
                }
                if (!pattern)
                    for (auto [s, pol] : get_pol(body))
                        if (s != n.x) put(m, s, pol);
                break;
            }
        }
        set_pol(n, std::move(m));
    }
}

}  // namespace

Program compile(const so1::Formula& f, const std::vector<std::string>& free_order, const LiftingSet& lifts) {
    Compiler c(lifts);
    c.p.num_free = c.p.num_slots = free_order.size();
    c.p.slot_names = free_order;
    for (std::size_t i = 0; i < free_order.size(); ++i) c.scope.emplace_back(free_order[i], static_cast<int>(i));
    c.p.root = c.so(f);
    c.p.depth = f->depth;
    analyse(c.p);
    return std::move(c.p);
}

Program compile(const ml1::Formula& f, const std::vector<std::string>& free_order, const LiftingSet& lifts) {
    Compiler c(lifts);
    c.p.num_free = c.p.num_slots = free_order.size();
    c.p.slot_names = free_order;
    for (std::size_t i = 0; i < free_order.size(); ++i) c.scope.emplace_back(free_order[i], static_cast<int>(i));
    c.p.root = c.ml(f);
    analyse(c.p);
    return std::move(c.p);
}

void check_quantifier_cap(const Program& p, std::size_t n, const Caps& caps) {
    if (p.depth > 0 && n > static_cast<std::size_t>(caps.quantifier))
        throw CapError("quantifier enumeration over a carrier of size " + std::to_string(n) + " exceeds cap " +
                       std::to_string(caps.quantifier));
}

Mask run_term(const Program& p, int node, const std::vector<Mask>& env) {
    const PNode& n = p.nodes[node];
    switch (n.op) {
        case POp::TVar: return env[n.x];
        case POp::TOr: return run_term(p, n.kids[0], env) | run_term(p, n.kids[1], env);
        case POp::TAnd: return run_term(p, n.kids[0], env) & run_term(p, n.kids[1], env);
        default: throw Error("internal: not a lattice term");
    }
}

bool run(const Program& p, int node, const DenseObject& alpha, std::vector<Mask>& env) {
    const PNode& n = p.nodes[node];
    switch (n.op) {
        case POp::Bot: return false;
        case POp::Top: return true;
        case POp::Sub: return subset(env[n.x], env[n.y]);
        case POp::LiftVars: {
            Mask args[8];
            std::vector<Mask> big;
            Mask* a = args;
            if (n.slots.size() > 8) {
                big.resize(n.slots.size());
                a = big.data();
            }
            for (std::size_t i = 0; i < n.slots.size(); ++i) a[i] = env[n.slots[i]];
            return n.lift->eval(alpha, std::span<const Mask>(a, n.slots.size()));
        }
        case POp::LiftTerms: {
            std::vector<Mask> a;
            a.reserve(n.kids.size());
            for (int k : n.kids) a.push_back(run_term(p, k, env) & alpha.full);
            return n.lift->eval(alpha, a);
        }
        case POp::Not: return !run(p, n.kids[0], alpha, env);
        case POp::Or: return run(p, n.kids[0], alpha, env) || run(p, n.kids[1], alpha, env);
        case POp::And: return run(p, n.kids[0], alpha, env) && run(p, n.kids[1], alpha, env);
        case POp::Exists: {
            Mask saved = env[n.x];
            bool found = !for_each_submask(alpha.full, [&](Mask s) {
                env[n.x] = s;
                return !run(p, n.kids[0], alpha, env);
            });
            env[n.x] = saved;
            return found;
        }
        case POp::Dual: {
            const PNode& k = p.nodes[n.kids[0]];
            for (int s : k.free) env[s] = alpha.full & ~env[s];
            bool r = run(p, n.kids[0], alpha, env);
            for (int s : k.free) env[s] = alpha.full & ~env[s];
            return !r;
        }
        case POp::Disjoint: {
            Mask seen = 0;
            for (int s : n.slots) {
                if (seen & env[s]) return false;
                seen |= env[s];
            }
            return true;
        }
        case POp::UnionEq: {
            Mask u = 0;
            for (int s : n.slots) u |= env[s];
            return u == env[n.x];
        }
        default: throw Error("internal: lattice term in formula position");
    }
}

LiftingPtr generalized_lifting(const std::string& name, const so1::Formula& phi, const std::vector<std::string>& vars,
                               const Functor& f, const LiftingSet& lifts, const Caps& caps) {
    for (auto& v : phi->free)
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) throw Error("unbound variable '" + v + "'");
    auto prog = std::make_shared<const Program>(compile(phi, vars, lifts));
    auto l = std::make_shared<Lifting>();
    l->name = name;
    l->arity = vars.size();
    l->functor = f;
    l->monotone = prog->nodes[prog->root].monotone;
    l->eval = [prog, caps](const DenseObject& d, std::span<const Mask> a) {
        check_quantifier_cap(*prog, d.n, caps);
        std::vector<Mask> env(prog->num_slots, 0);
        for (std::size_t i = 0; i < a.size(); ++i) env[i] = a[i];
        return run(*prog, d, env);
    };
    return l;
}

// ---------------------------------------------------------------- brute-force checks

namespace {

struct Table {
    std::size_t k, n;
    std::vector<bool> sat;
};

Table sat_table(const Program& p, std::size_t k, std::size_t n, const DenseObject& d) {
    Table t{k, n, {}};
    std::size_t bits = k * n;
    t.sat.resize(std::size_t{1} << bits);
    std::vector<Mask> env(p.num_slots, 0);
    for (std::size_t code = 0; code < t.sat.size(); ++code) {
        for (std::size_t i = 0; i < k; ++i) env[i] = (code >> (i * n)) & full_mask(n);
        t.sat[code] = run(p, d, env);
    }
    return t;
}

std::map<std::string, Mask> decode(const std::vector<std::string>& vars, std::size_t code, std::size_t n) {
    std::map<std::string, Mask> v;
    for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = (code >> (i * n)) & full_mask(n);
    return v;
}

}  // namespace

BruteForceResult is_monotone_bruteforce(const so1::Formula& f, const Functor& functor, const LiftingSet& lifts,
                                        int carrier_cap, const Caps& caps) {
    std::vector<std::string> vars(f->free.begin(), f->free.end());
    Program p = compile(f, vars, lifts);
    BruteForceResult res;
    for (std::size_t n = 1; n <= static_cast<std::size_t>(carrier_cap); ++n) {
        if (vars.size() * n > static_cast<std::size_t>(caps.valuation_bits))
            throw CapError("is_monotone_bruteforce: valuation space too large");
        check_quantifier_cap(p, n, caps);
        for (auto& alpha : enumerate_values(*functor, n, 2, 20000)) {
            auto d = make_dense(*functor, alpha, n);
            Table t = sat_table(p, vars.size(), n, d);
            for (std::size_t code = 0; code < t.sat.size(); ++code) {
                if (!t.sat[code]) continue;
                for (std::size_t b = 0; b < vars.size() * n; ++b) {
                    std::size_t up = code | (std::size_t{1} << b);
                    if (up != code && !t.sat[up]) {
                        res.holds = false;
                        res.witness = OneStepWitness{n, alpha, decode(vars, code, n),
                                                     "adding element " + std::to_string(b % n) + " to '" +
                                                         vars[b / n] + "' falsifies the formula"};
                        return res;
                    }
                }
            }
        }
    }
    return res;
}

BruteForceResult is_special_basic_bruteforce(const so1::Formula& f, const Functor& functor,
                                             const LiftingSet& lifts, int carrier_cap, const Caps& caps) {
    std::vector<std::string> vars(f->free.begin(), f->free.end());
    Program p = compile(f, vars, lifts);
    BruteForceResult res;
    const std::size_t k = vars.size();
    for (std::size_t n = 1; n <= static_cast<std::size_t>(carrier_cap); ++n) {
        if (k * n > static_cast<std::size_t>(caps.valuation_bits))
            throw CapError("is_special_basic_bruteforce: valuation space too large");
        check_quantifier_cap(p, n, caps);
        for (auto& alpha : enumerate_values(*functor, n, 2, 20000)) {
            auto d = make_dense(*functor, alpha, n);
            Table t = sat_table(p, k, n, d);
            for (std::size_t code = 0; code < t.sat.size(); ++code) {
                if (!t.sat[code]) continue;
                // choose for every element at most one variable already containing it
                bool ok = false;
                auto rec = [&](auto&& self, std::size_t x, std::size_t star) -> void {
                    if (ok) return;
                    if (x == n) {
                        ok = t.sat[star];
                        return;
                    }
                    self(self, x + 1, star);
                    for (std::size_t i = 0; i < k && !ok; ++i) {
                        std::size_t b = std::size_t{1} << (i * n + x);
                        if (code & b) self(self, x + 1, star | b);
                    }
                };
                rec(rec, 0, 0);
                if (!ok) {
                    res.holds = false;
                    res.witness = OneStepWitness{n, alpha, decode(vars, code, n),
                                                 "no disjoint satisfying valuation below this one"};
                    return res;
                }
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------- EF equivalence

namespace {

struct TypeInterner {
    std::map<std::vector<std::uint64_t>, std::uint64_t> ids;
    std::uint64_t get(std::vector<std::uint64_t> key) {
        auto [it, fresh] = ids.emplace(std::move(key), ids.size());
        return it->second;
    }
};

std::uint64_t ef_type(const OneStepModel& m, const DenseObject& d, std::vector<Mask>& vals, int k,
                      const std::vector<LiftingPtr>& lifts, TypeInterner& in) {
    if (k == 0) {
        std::vector<std::uint64_t> atoms{0};  // level marker
        for (Mask a : vals)
            for (Mask b : vals) atoms.push_back(subset(a, b));
        for (auto& l : lifts) {
            std::size_t tuples = 1;
            for (std::size_t i = 0; i < l->arity; ++i) tuples *= vals.size();
            std::vector<Mask> args(l->arity);
            for (std::size_t code = 0; code < tuples; ++code) {
                std::size_t c = code;
                for (auto& a : args) {
                    a = vals[c % vals.size()];
                    c /= vals.size();
                }
                atoms.push_back(l->eval(d, args));
            }
        }
        return in.get(std::move(atoms));
    }
    std::vector<std::uint64_t> kids;
    for_each_submask(full_mask(m.n), [&](Mask s) {
        vals.push_back(s);
        kids.push_back(ef_type(m, d, vals, k - 1, lifts, in));
        vals.pop_back();
        return true;
    });
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    kids.push_back(static_cast<std::uint64_t>(k) << 32);  // level marker
    return in.get(std::move(kids));
}

}  // namespace

bool ef_equiv(const OneStepModel& m1, const OneStepModel& m2, int k, const LiftingSet& lifts, const Caps& caps) {
    if (m1.n > static_cast<std::size_t>(caps.ef_carrier) || m2.n > static_cast<std::size_t>(caps.ef_carrier))
        throw CapError("ef_equiv: carrier above cap");
    if (k > caps.ef_depth) throw CapError("ef_equiv: depth above cap");
    std::vector<std::string> vars1, vars2;
    for (auto& [v, s] : m1.V) vars1.push_back(v);
    for (auto& [v, s] : m2.V) vars2.push_back(v);
    if (vars1 != vars2) throw Error("ef_equiv: models interpret different variables");
    std::vector<LiftingPtr> ls;
    for (auto& name : lifts.names()) ls.push_back(lifts.get(name));
    auto d1 = make_dense(*m1.functor, m1.alpha, m1.n);
    auto d2 = make_dense(*m2.functor, m2.alpha, m2.n);
    TypeInterner in;
    std::vector<Mask> v1, v2;
    for (auto& [v, s] : m1.V) v1.push_back(s);
    for (auto& [v, s] : m2.V) v2.push_back(s);
    return ef_type(m1, d1, v1, k, ls, in) == ef_type(m2, d2, v2, k, ls, in);
}

}  // namespace cak
