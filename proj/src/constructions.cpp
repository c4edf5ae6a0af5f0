#include "cak/constructions.hpp"

#include <algorithm>
#include <set>

namespace cak {

namespace {

std::string fresh_name(std::string base, const std::set<std::string>& avoid) {
    if (!avoid.count(base)) return base;
    for (int i = 1;; ++i) {
        auto c = base + "_" + std::to_string(i);
        if (!avoid.count(c)) return c;
    }
}

// Color over `to` holding the same variables as color c over `from` (absent ones dropped).
std::size_t recolor(std::size_t c, const std::vector<std::string>& from, const std::vector<std::string>& to) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < from.size(); ++i) {
        if (!(c >> i & 1)) continue;
        auto it = std::lower_bound(to.begin(), to.end(), from[i]);
        if (it != to.end() && *it == from[i]) out |= std::size_t{1} << (it - to.begin());
    }
    return out;
}

Program program_of(const Automaton& a, std::uint32_t s, std::size_t c, const LiftingSet& lifts) {
    return a.flavor == Flavor::SO1 ? compile(a.so[s][c], a.states, lifts) : compile(a.ml[s][c], a.states, lifts);
}

bool transition_monotone(const Automaton& a, std::uint32_t s, std::size_t c, const LiftingSet& lifts) {
    auto p = program_of(a, s, c, lifts);
    return p.nodes[p.root].monotone;
}

void resize_table(Automaton& a) {
    if (a.flavor == Flavor::SO1)
        a.so.assign(a.size(), std::vector<so1::Formula>(a.colors()));
    else
        a.ml.assign(a.size(), std::vector<ml1::Formula>(a.colors()));
}

std::vector<std::string> merged(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

Automaton combine(const Automaton& x, const Automaton& y, bool conj) {
    validate_automaton(x);
    validate_automaton(y);
    if (x.flavor != y.flavor) throw Error("cannot combine ML1 and SO1 automata");
    Automaton out;
    out.flavor = x.flavor;
    out.chromatic = merged(x.chromatic, y.chromatic);
    out.liftings = merged(x.liftings, y.liftings);
    std::set<std::string> used(x.states.begin(), x.states.end());
    std::map<std::string, std::string> ren_y;
    for (auto& s : y.states) {
        auto n = fresh_name(s, used);
        used.insert(n);
        ren_y[s] = n;
    }
    std::string init = fresh_name("i", used);
    out.states = x.states;
    for (auto& s : y.states) out.states.push_back(ren_y[s]);
    out.states.push_back(init);
    out.priority = x.priority;
    out.priority.insert(out.priority.end(), y.priority.begin(), y.priority.end());
    out.priority.push_back(0);
    out.initial = static_cast<std::uint32_t>(out.size() - 1);
    resize_table(out);
    const auto nx = static_cast<std::uint32_t>(x.size());
    for (std::size_t c = 0; c < out.colors(); ++c) {
        auto cx = recolor(c, out.chromatic, x.chromatic);
        auto cy = recolor(c, out.chromatic, y.chromatic);
        if (out.flavor == Flavor::SO1) {
            for (std::uint32_t s = 0; s < nx; ++s) out.so[s][c] = x.so[s][cx];
            for (std::uint32_t s = 0; s < y.size(); ++s) out.so[nx + s][c] = so1::rename(y.so[s][cy], ren_y);
            auto l = x.so[x.initial][cx];
            auto r = so1::rename(y.so[y.initial][cy], ren_y);
            out.so[out.initial][c] = conj ? so1::make_and(l, r) : so1::make_or(l, r);
        } else {
            for (std::uint32_t s = 0; s < nx; ++s) out.ml[s][c] = x.ml[s][cx];
            for (std::uint32_t s = 0; s < y.size(); ++s) out.ml[nx + s][c] = ml1::rename(y.ml[s][cy], ren_y);
            auto l = x.ml[x.initial][cx];
            auto r = ml1::rename(y.ml[y.initial][cy], ren_y);
            out.ml[out.initial][c] = conj ? ml1::make_and(l, r) : ml1::make_or(l, r);
        }
    }
    return out;
}

}  // namespace

bool is_monotone_automaton(const Automaton& a, const LiftingSet& lifts) {
    for (std::uint32_t s = 0; s < a.size(); ++s)
        for (std::size_t c = 0; c < a.colors(); ++c)
            if (!transition_monotone(a, s, c, lifts)) return false;
    return true;
}

Automaton union_aut(const Automaton& a, const Automaton& b) { return combine(a, b, false); }
Automaton intersect_aut(const Automaton& a, const Automaton& b) { return combine(a, b, true); }

Automaton monotonize(const Automaton& a, const LiftingSet& lifts) {
    validate_automaton(a);
    if (a.flavor == Flavor::ML1) return a;  // liftings are monotone
    Automaton out = a;
    std::set<std::string> avoid(a.states.begin(), a.states.end());
    for (std::uint32_t s = 0; s < a.size(); ++s)
        for (std::size_t c = 0; c < a.colors(); ++c) {
            if (transition_monotone(a, s, c, lifts)) continue;
            const auto& f = a.so[s][c];
            std::map<std::string, std::string> ren;
            std::set<std::string> taken = avoid;
            for (auto& v : f->free) {
                auto z = fresh_name("Z_" + v, taken);
                taken.insert(z);
                ren[v] = z;
            }
            auto body = so1::rename(f, ren);
            for (auto it = ren.rbegin(); it != ren.rend(); ++it)
                body = so1::make_exists(it->second, so1::make_and(so1::sub(it->second, it->first), body));
            out.so[s][c] = body;
        }
    return out;
}

Automaton complement_aut(const Automaton& a, const LiftingSet& lifts) {
    validate_automaton(a);
    Automaton out = a;
    for (auto& p : out.priority) p += 1;
    for (std::uint32_t s = 0; s < a.size(); ++s)
        for (std::size_t c = 0; c < a.colors(); ++c) {
            if (!transition_monotone(a, s, c, lifts))
                throw Error("complement needs monotone transitions; Δ(" + a.states[s] + ", " + std::to_string(c) +
                            ") is not (monotonize first)");
            if (a.flavor == Flavor::SO1)
                out.so[s][c] = so1::dual(a.so[s][c]);
            else
                out.ml[s][c] = ml1::dual(a.ml[s][c], lifts);
        }
    if (a.flavor == Flavor::ML1)
        for (auto& name : out.liftings) name = lifts.get(name)->dual_name;
    std::sort(out.liftings.begin(), out.liftings.end());
    out.liftings.erase(std::unique(out.liftings.begin(), out.liftings.end()), out.liftings.end());
    return out;
}

Automaton project_aut(const Automaton& a, const std::string& q) {
    validate_automaton(a);
    auto it = std::find(a.chromatic.begin(), a.chromatic.end(), q);
    if (it == a.chromatic.end()) throw Error("'" + q + "' is not a chromatic variable");
    const std::size_t qbit = std::size_t{1} << (it - a.chromatic.begin());
    Automaton out = a;
    out.chromatic.erase(out.chromatic.begin() + (it - a.chromatic.begin()));
    resize_table(out);
    for (std::uint32_t s = 0; s < a.size(); ++s)
        for (std::size_t c = 0; c < out.colors(); ++c) {
            // widen c back to the old chromatic set, with q absent
            std::size_t low = recolor(c, out.chromatic, a.chromatic);
            if (a.flavor == Flavor::SO1)
                out.so[s][c] = so1::make_or(a.so[s][low], a.so[s][low | qbit]);
            else
                out.ml[s][c] = ml1::make_or(a.ml[s][low], a.ml[s][low | qbit]);
        }
    return out;
}

std::string relation_text(const Automaton& a, Mask rel) {
    const std::size_t k = a.size();
    std::string out = "{";
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (rel & pair_bit(i, j, k)) out += (out.size() > 1 ? "," : "") + ("(" + a.states[i] + "," + a.states[j] + ")");
    return out + "}";
}

Automaton simulate(const Automaton& a, const LiftingSet& lifts, SimulationInfo* info, const SimulateOptions& opt) {
    validate_automaton(a);
    if (a.flavor != Flavor::SO1) throw Error("simulate expects an SO1 automaton");
    if (!is_monotone_automaton(a, lifts)) throw Error("simulate needs monotone transitions (monotonize first)");
    const std::size_t k = a.size();
    BadTraceAutomaton det(a.priority);

    Automaton out;
    out.flavor = Flavor::SO1;
    out.chromatic = a.chromatic;
    out.liftings = a.liftings;
    std::vector<Mask> rel;
    std::vector<std::uint32_t> zs;
    std::map<std::pair<Mask, std::uint32_t>, std::uint32_t> index;
    auto state = [&](Mask b, std::uint32_t z) {
        auto [it, fresh] = index.emplace(std::make_pair(b, z), static_cast<std::uint32_t>(rel.size()));
        if (fresh) {
            if (rel.size() >= opt.max_states)
                throw CapError("simulation exceeds " + std::to_string(opt.max_states) + " states");
            rel.push_back(b);
            zs.push_back(z);
        }
        return it->second;
    };
    auto name = [](std::uint32_t id) { return "m" + std::to_string(id); };
    // per source state and color: free states of Δ(b, c)
    std::vector<std::vector<std::vector<std::uint32_t>>> succ(k, std::vector<std::vector<std::uint32_t>>(a.colors()));
    for (std::uint32_t b = 0; b < k; ++b)
        for (std::size_t c = 0; c < a.colors(); ++c)
            for (auto& v : a.so[b][c]->free) succ[b][c].push_back(a.state(v));

    state(pair_bit(a.initial, a.initial, k), det.initial());
    std::vector<std::vector<so1::Formula>> table;
    for (std::uint32_t id = 0; id < rel.size(); ++id) {
        const Mask b_rel = rel[id];
        const std::uint32_t z_next = det.step(zs[id], b_rel);
        const Mask range = letter_range(b_rel, k);
        std::vector<so1::Formula> row(a.colors());
        for (std::size_t c = 0; c < a.colors(); ++c) {
            std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
            for (auto b : elements(range))
                for (auto t : succ[b][c]) pairs.emplace_back(static_cast<std::uint32_t>(b), t);
            if (pairs.size() > opt.max_pairs)
                throw CapError("simulation step with " + std::to_string(pairs.size()) + " pairs exceeds the cap of " +
                               std::to_string(opt.max_pairs));
            // variable for every nonempty B' ⊆ Pairs(B, c)
            std::vector<std::string> vars;
            std::vector<Mask> var_rel;
            for (std::size_t sub = 1; sub < (std::size_t{1} << pairs.size()); ++sub) {
                Mask r = 0;
                for (std::size_t i = 0; i < pairs.size(); ++i)
                    if (sub >> i & 1) r |= pair_bit(pairs[i].first, pairs[i].second, k);
                vars.push_back(name(state(r, z_next)));
                var_rel.push_back(r);
            }
            std::vector<so1::Formula> parts;
            for (auto b : elements(range)) {
                std::map<std::string, std::string> ren;
                for (auto t : succ[b][c]) ren[a.states[t]] = "z_" + a.states[t];
                auto g = so1::rename(a.so[b][c], ren);
                for (auto it = succ[b][c].rbegin(); it != succ[b][c].rend(); ++it) {
                    std::vector<std::string> members;
                    for (std::size_t i = 0; i < vars.size(); ++i)
                        if (var_rel[i] & pair_bit(b, *it, k)) members.push_back(vars[i]);
                    auto z = ren[a.states[*it]];
                    g = so1::make_exists(z, so1::make_and(so1::make_union_eq(z, members), g));
                }
                parts.push_back(g);
            }
            row[c] = so1::make_and(so1::make_disjoint(vars), so1::make_and(parts));
        }
        table.push_back(std::move(row));
    }
    for (std::uint32_t id = 0; id < rel.size(); ++id) {
        out.states.push_back(name(id));
        out.priority.push_back(det.priority(zs[id]));
    }
    out.initial = 0;
    out.so = std::move(table);
    if (info) {
        info->relation = rel;
        info->det = zs;
        info->detector_states = det.size();
    }
    return out;
}

// ---------------------------------------------------------------- μ-formulas

namespace {

using mu::Op;

mu::Formula clean(const mu::Formula& f, std::map<std::string, std::string>& env, const std::set<std::string>& avoid,
                  int& counter) {
    switch (f->op) {
        case Op::Prop:
        case Op::NegProp: {
            auto it = env.find(f->var);
            if (it == env.end()) return f;
            return f->op == Op::Prop ? mu::prop(it->second) : mu::neg_prop(it->second);
        }
        case Op::Bot:
        case Op::Top: return f;
        case Op::Lift: {
            std::vector<mu::Formula> kids;
            for (auto& k : f->kids) kids.push_back(clean(k, env, avoid, counter));
            return mu::lift(f->lifting, std::move(kids));
        }
        case Op::Or: return mu::make_or(clean(f->kids[0], env, avoid, counter), clean(f->kids[1], env, avoid, counter));
        case Op::And: return mu::make_and(clean(f->kids[0], env, avoid, counter), clean(f->kids[1], env, avoid, counter));
        case Op::Mu:
        case Op::Nu: {
            std::string x;
            do x = "x" + std::to_string(counter++);
            while (avoid.count(x));
            auto saved = env;
            env[f->var] = x;
            auto body = clean(f->kids[0], env, avoid, counter);
            env = saved;
            return f->op == Op::Mu ? mu::mu(x, body) : mu::nu(x, body);
        }
        case Op::GAll:
        case Op::GSome: throw Error("compile_mu does not handle global modalities");
    }
    return f;
}

// Replaces binders at unguarded positions by one unfolding.
mu::Formula unfold_top(const mu::Formula& f) {
    switch (f->op) {
        case Op::Or: return mu::make_or(unfold_top(f->kids[0]), unfold_top(f->kids[1]));
        case Op::And: return mu::make_and(unfold_top(f->kids[0]), unfold_top(f->kids[1]));
        case Op::Mu:
        case Op::Nu: return unfold_top(mu::substitute(f->kids[0], f->var, f));
        default: return f;
    }
}

mu::Formula replace_unguarded(const mu::Formula& f, const std::string& x, const mu::Formula& by) {
    switch (f->op) {
        case Op::Or: return mu::make_or(replace_unguarded(f->kids[0], x, by), replace_unguarded(f->kids[1], x, by));
        case Op::And: return mu::make_and(replace_unguarded(f->kids[0], x, by), replace_unguarded(f->kids[1], x, by));
        case Op::Prop: return f->var == x ? by : f;
        default: return f;
    }
}

mu::Formula guard(const mu::Formula& f) {
    switch (f->op) {
        case Op::Lift: {
            std::vector<mu::Formula> kids;
            for (auto& k : f->kids) kids.push_back(guard(k));
            return mu::lift(f->lifting, std::move(kids));
        }
        case Op::Or: return mu::make_or(guard(f->kids[0]), guard(f->kids[1]));
        case Op::And: return mu::make_and(guard(f->kids[0]), guard(f->kids[1]));
        case Op::Mu:
        case Op::Nu: {
            auto body = unfold_top(guard(f->kids[0]));
            body = replace_unguarded(body, f->var, f->op == Op::Mu ? mu::bot() : mu::top());
            return f->op == Op::Mu ? mu::mu(f->var, body) : mu::nu(f->var, body);
        }
        default: return f;
    }
}

// Priority per binder: the least value of the right parity above every binder inside it.
int assign_priorities(const mu::Formula& f, std::map<const mu::Node*, int>& pr) {
    int inner = 0;
    for (auto& k : f->kids) inner = std::max(inner, assign_priorities(k, pr));
    if (f->op != Op::Mu && f->op != Op::Nu) return inner;
    int p = inner + 1;
    if ((p % 2 == 1) != (f->op == Op::Mu)) ++p;
    pr[f.get()] = p;
    return p;
}

class MuCompiler {
public:
    MuCompiler(const mu::Formula& f, const LiftingSet& lifts) : lifts_(lifts) {
        std::set<std::string> avoid(f->free.begin(), f->free.end());
        std::map<std::string, std::string> env;
        int counter = 0;
        root_ = guard(clean(f, env, avoid, counter));
        assign_priorities(root_, pr_);
        out_.flavor = Flavor::ML1;
        out_.chromatic = f->free;
        collect_lifts(root_);
        std::sort(out_.liftings.begin(), out_.liftings.end());
        out_.liftings.erase(std::unique(out_.liftings.begin(), out_.liftings.end()), out_.liftings.end());
    }

    Automaton run() {
        state(root_, {}, 0);
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            std::vector<ml1::Formula> row;
            for (std::size_t c = 0; c < out_.colors(); ++c) {
                auto [node, env, tag] = keys_[i];
                Env e(env.begin(), env.end());
                row.push_back(unfold(node, e, 0, c));
            }
            out_.ml.push_back(std::move(row));
        }
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            out_.states.push_back("q" + std::to_string(i));
            out_.priority.push_back(std::get<2>(keys_[i]));
        }
        out_.initial = 0;
        return std::move(out_);
    }

private:
    using Env = std::map<std::string, const mu::Node*>;
    using Key = std::tuple<const mu::Node*, std::vector<std::pair<std::string, const mu::Node*>>, int>;

    void collect_lifts(const mu::Formula& f) {
        if (f->op == Op::Lift) {
            lifts_.get(f->lifting);
            out_.liftings.push_back(f->lifting);
        }
        for (auto& k : f->kids) collect_lifts(k);
    }

    std::string state(const mu::Formula& f, const Env& env, int tag) {
        // bindings of the free names, closed under the free names of the binders themselves
        std::map<std::string, const mu::Node*> need;
        std::vector<std::string> todo(f->free.begin(), f->free.end());
        while (!todo.empty()) {
            auto v = todo.back();
            todo.pop_back();
            auto it = env.find(v);
            if (it == env.end() || need.count(v)) continue;
            need[v] = it->second;
            todo.insert(todo.end(), it->second->free.begin(), it->second->free.end());
        }
        std::vector<std::pair<std::string, const mu::Node*>> bound(need.begin(), need.end());
        Key key{f.get(), bound, tag};
        auto it = index_.find(key);
        if (it != index_.end()) return "q" + std::to_string(it->second);
        auto id = keys_.size();
        keys_.push_back(key);
        keep_.push_back(f);
        index_[key] = id;
        return "q" + std::to_string(id);
    }

    bool has(std::size_t c, const std::string& p) const {
        auto it = std::lower_bound(out_.chromatic.begin(), out_.chromatic.end(), p);
        return it != out_.chromatic.end() && *it == p && (c >> (it - out_.chromatic.begin()) & 1);
    }

    ml1::Formula unfold(const mu::Node* f, Env& env, int tag, std::size_t c) {
        switch (f->op) {
            case Op::Prop: {
                auto it = env.find(f->var);
                if (it == env.end()) return has(c, f->var) ? ml1::top() : ml1::bot();
                const mu::Node* binder = it->second;
                return unfold(binder->kids[0].get(), env, std::max(tag, pr_.at(binder)), c);
            }
            case Op::NegProp: return has(c, f->var) ? ml1::bot() : ml1::top();
            case Op::Bot: return ml1::bot();
            case Op::Top: return ml1::top();
            case Op::Or: return ml1::make_or(unfold(f->kids[0].get(), env, tag, c), unfold(f->kids[1].get(), env, tag, c));
            case Op::And: return ml1::make_and(unfold(f->kids[0].get(), env, tag, c), unfold(f->kids[1].get(), env, tag, c));
            case Op::Mu:
            case Op::Nu: {
                auto saved = env.find(f->var) == env.end() ? nullptr : env[f->var];
                env[f->var] = f;
                auto r = unfold(f->kids[0].get(), env, tag, c);
                if (saved)
                    env[f->var] = saved;
                else
                    env.erase(f->var);
                return r;
            }
            case Op::Lift: {
                std::vector<ml1::Term> args;
                for (auto& k : f->kids) args.push_back(ml1::var(state(k, env, tag)));
                return ml1::lift(f->lifting, std::move(args));
            }
            default: throw Error("compile_mu does not handle global modalities");
        }
    }

    const LiftingSet& lifts_;
    mu::Formula root_;
    std::map<const mu::Node*, int> pr_;
    std::vector<Key> keys_;
    std::vector<mu::Formula> keep_;
    std::map<Key, std::size_t> index_;
    Automaton out_;
};

// ---------------------------------------------------------------- MSO atoms

using so1::Formula;

Formula all_to(const std::string& a) { return so1::make_forall("V", so1::sub("V", a)); }

struct AtomBuilder {
    Automaton aut;
    AtomBuilder(std::vector<std::string> chromatic, std::vector<std::string> states) {
        std::sort(chromatic.begin(), chromatic.end());
        chromatic.erase(std::unique(chromatic.begin(), chromatic.end()), chromatic.end());
        aut.chromatic = std::move(chromatic);
        aut.states = std::move(states);
        aut.priority.assign(aut.states.size(), 0);
        aut.flavor = Flavor::SO1;
        aut.so.assign(aut.size(), std::vector<Formula>(aut.colors()));
    }
    bool in(std::size_t c, const std::string& p) const {
        auto it = std::lower_bound(aut.chromatic.begin(), aut.chromatic.end(), p);
        return c >> (it - aut.chromatic.begin()) & 1;
    }
    template <class F>
    Automaton fill(F delta) {
        for (std::uint32_t s = 0; s < aut.size(); ++s)
            for (std::size_t c = 0; c < aut.colors(); ++c) aut.so[s][c] = delta(s, c);
        return aut;
    }
};

Automaton atom(const mso::Formula& f, const LiftingSet& lifts) {
    using mso::Op;
    switch (f->op) {
        case Op::Top:
        case Op::Bot: {
            AtomBuilder b({}, {"k"});
            return b.fill([&](auto, auto) { return f->op == Op::Top ? so1::top() : so1::bot(); });
        }
        case Op::Sub:
        case Op::Eq: {
            AtomBuilder b({f->a, f->b}, {"k"});
            return b.fill([&](auto, std::size_t c) {
                bool pa = b.in(c, f->a), pb = b.in(c, f->b);
                bool ok = f->op == Op::Sub ? (!pa || pb) : pa == pb;
                return ok ? all_to("k") : so1::bot();
            });
        }
        case Op::Em: {
            AtomBuilder b({f->a}, {"k"});
            return b.fill([&](auto, std::size_t c) { return b.in(c, f->a) ? so1::bot() : all_to("k"); });
        }
        case Op::Sr: {
            AtomBuilder b({f->a}, {"r", "n"});
            return b.fill([&](std::uint32_t s, std::size_t c) {
                if (s == 0) return b.in(c, f->a) ? all_to("n") : so1::bot();
                return b.in(c, f->a) ? so1::bot() : all_to("n");
            });
        }
        case Op::Sing: {
            // o: exactly one p below (here or in one child); n: no p below
            AtomBuilder b({f->a}, {"o", "n"});
            auto empty = [](const std::string& x) { return so1::make_forall("U", so1::sub(x, "U")); };
            auto one_child = so1::make_exists(
                "X", so1::make_and({so1::sub("X", "o"), so1::make_not(empty("X")),
                                    so1::make_forall("Y", so1::make_or({so1::make_not(so1::sub("Y", "X")), empty("Y"),
                                                                        so1::sub("X", "Y")})),
                                    so1::make_forall("W", so1::make_or(so1::make_not(so1::make_and(so1::sub("X", "W"),
                                                                                                   so1::sub("n", "W"))),
                                                                       all_to("W")))}));
            return b.fill([&](std::uint32_t s, std::size_t c) {
                bool p = b.in(c, f->a);
                if (s == 1) return p ? so1::bot() : all_to("n");
                return p ? all_to("n") : one_child;
            });
        }
        case Op::Lift: {
            auto l = lifts.get(f->lifting);
            if (l->arity != f->args.size())
                throw Error("lifting '" + f->lifting + "' expects " + std::to_string(l->arity) + " arguments");
            std::vector<std::string> states{"k"};
            std::vector<std::string> bs;
            for (std::size_t i = 0; i < f->args.size(); ++i) bs.push_back("b" + std::to_string(i));
            states.insert(states.end(), bs.begin(), bs.end());
            auto chrom = f->args;
            chrom.push_back(f->a);
            AtomBuilder b(chrom, states);
            b.aut.liftings = {f->lifting};
            return b.fill([&](std::uint32_t s, std::size_t c) {
                if (s > 0) return b.in(c, f->args[s - 1]) ? so1::top() : so1::bot();
                if (!b.in(c, f->a)) return all_to("k");
                return so1::make_and(so1::lift(f->lifting, bs), all_to("k"));
            });
        }
        default: throw Error("not an atomic formula");
    }
}

}  // namespace

Automaton compile_mu(const mu::Formula& f, const LiftingSet& lifts) {
    mu::validate(f);
    MuCompiler c(f, lifts);
    auto a = c.run();
    validate_automaton(a);
    return a;
}

Automaton compile_mso(const mso::Formula& f, const LiftingSet& lifts, const SimulateOptions& opt) {
    using mso::Op;
    switch (f->op) {
        case Op::Or: return union_aut(compile_mso(f->kids[0], lifts, opt), compile_mso(f->kids[1], lifts, opt));
        case Op::And: return intersect_aut(compile_mso(f->kids[0], lifts, opt), compile_mso(f->kids[1], lifts, opt));
        case Op::Not: return complement_aut(monotonize(compile_mso(f->kids[0], lifts, opt), lifts), lifts);
        case Op::Exists: {
            auto body = compile_mso(f->kids[0], lifts, opt);
            if (!std::binary_search(body.chromatic.begin(), body.chromatic.end(), f->a)) return body;
            return project_aut(simulate(monotonize(body, lifts), lifts, nullptr, opt), f->a);
        }
        default: return atom(f, lifts);
    }
}

}  // namespace cak
