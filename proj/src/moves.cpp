#include "cak/moves.hpp"

#include <algorithm>
#include <set>

namespace cak {

namespace {

using Val = std::vector<Mask>;
using Family = std::vector<Val>;

int weight(const Val& v) {
    int w = 0;
    for (Mask m : v) w += popcount(m);
    return w;
}

bool leq(const Val& a, const Val& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!subset(a[i], b[i])) return false;
    return true;
}

Family minimize(Family fam) {
    std::sort(fam.begin(), fam.end(), [](const Val& a, const Val& b) {
        int wa = weight(a), wb = weight(b);
        return wa != wb ? wa < wb : a < b;
    });
    fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
    Family out;
    for (auto& v : fam) {
        bool dominated = false;
        for (auto& o : out)
            if (leq(o, v)) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint8_t polarity_of(const PNode& n, int slot) {
    for (std::size_t i = 0; i < n.free.size(); ++i)
        if (n.free[i] == slot) return n.polarity[i];
    return PolNone;
}

struct Engine {
    const Program& p;
    const DenseObject& alpha;
    const Caps& caps;
    std::vector<Mask> env;

    Engine(const Program& prog, const DenseObject& a, const Caps& c)
        : p(prog), alpha(a), caps(c), env(prog.num_slots, 0) {}

    Val zero() const { return Val(p.num_slots, 0); }

    void guard(const Family& f) const {
        if (f.size() > caps.moves)
            throw CapError("move family exceeds cap " + std::to_string(caps.moves));
    }

    bool holds(int node, const Val& v) {
        std::copy(v.begin(), v.end(), env.begin());
        return run(p, node, alpha, env);
    }

    bool pass(const Val& v, const std::vector<int>& filter) {
        for (int f : filter)
            if (!holds(f, v)) return false;
        return true;
    }

    std::vector<int> flatten(int node) const {
        const PNode& n = p.nodes[node];
        if (n.op != POp::And) return {node};
        auto a = flatten(n.kids[0]), b = flatten(n.kids[1]);
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }

    // Minimal valuations of `slots` over `universe` satisfying every node in `conj` and the filter.
    // When all is set, every satisfying valuation is returned instead.
    Family enumerate(const std::vector<int>& conj, std::vector<int> slots, Mask universe,
                     const std::vector<int>& filter, bool all = false) {
        std::sort(slots.begin(), slots.end());
        slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
        const std::size_t k = static_cast<std::size_t>(popcount(universe));
        const std::size_t bits = slots.size() * k;
        if (bits > static_cast<std::size_t>(caps.valuation_bits))
            throw CapError("valuation enumeration over " + std::to_string(bits) + " bits exceeds cap " +
                           std::to_string(caps.valuation_bits));
        const std::size_t total = std::size_t{1} << bits;
        std::vector<std::uint8_t> below(all ? 0 : total, 0);
        Family out;
        Val v = zero();
        for (std::size_t code = 0; code < total; ++code) {
            for (std::size_t i = 0; i < slots.size(); ++i)
                v[slots[i]] = expand((code >> (i * k)) & full_mask(k), universe);
            bool ok = pass(v, filter) && pass(v, conj);
            if (all) {
                if (ok) out.push_back(v);
                guard(out);
                continue;
            }
            bool lower = false;
            for (Mask c = code; c; c &= c - 1)
                if (below[code ^ (c & -c)]) {
                    lower = true;
                    break;
                }
            if (ok && !lower) {
                out.push_back(v);
                guard(out);
            }
            below[code] = ok || lower;
        }
        return out;
    }

    Family fallback(int node, const std::vector<int>& filter) {
        return enumerate({node}, p.nodes[node].free, alpha.full, filter);
    }

    Family constant(bool value, const std::vector<int>& filter) {
        Val z = zero();
        if (value && pass(z, filter)) return {z};
        return {};
    }

    Family df(int node, const std::vector<int>& filter) {
        const PNode& n = p.nodes[node];
        if (n.free.empty()) return constant(holds(node, zero()), filter);
        switch (n.op) {
            case POp::Top: return constant(true, filter);
            case POp::Bot: return {};
            case POp::Or: {
                Family a = df(n.kids[0], filter), b = df(n.kids[1], filter);
                a.insert(a.end(), b.begin(), b.end());
                return minimize(std::move(a));
            }
            case POp::And: return conj(flatten(node), filter);
            case POp::Exists: return exists(node, filter);
            case POp::Dual: {
                const PNode& k = p.nodes[n.kids[0]];
                if (!k.monotone) return fallback(node, filter);
                return transversals(df(n.kids[0], {}), k.free, filter);
            }
            case POp::LiftVars:
            case POp::LiftTerms: {
                Mask universe = n.lift->relevant ? (n.lift->relevant(alpha) & alpha.full) : alpha.full;
                return enumerate({node}, n.free, universe, filter);
            }
            default:
                if (n.antitone) return constant(holds(node, zero()), filter);
                return fallback(node, filter);
        }
    }

    Family conj(const std::vector<int>& parts, std::vector<int> filter) {
        std::vector<int> mono, other;
        for (int c : parts) {
            const PNode& n = p.nodes[c];
            if (n.free.empty()) {
                if (!holds(c, zero())) return {};
            } else if (n.monotone) {
                mono.push_back(c);
            } else if (n.antitone) {
                filter.push_back(c);
            } else {
                other.push_back(c);
            }
        }
        if (!other.empty()) {
            if (other.size() == 1 && mono.empty()) return df(other[0], filter);
            std::vector<int> all = mono, slots;
            all.insert(all.end(), other.begin(), other.end());
            for (int c : all) slots.insert(slots.end(), p.nodes[c].free.begin(), p.nodes[c].free.end());
            return enumerate(all, slots, alpha.full, filter);
        }
        Family acc = constant(true, filter);
        for (int c : mono) {
            Family d = df(c, filter);
            Family next;
            for (auto& x : acc)
                for (auto& y : d) {
                    Val u = x;
                    for (std::size_t i = 0; i < u.size(); ++i) u[i] |= y[i];
                    if (pass(u, filter)) next.push_back(std::move(u));
                }
            acc = minimize(std::move(next));
            guard(acc);
            if (acc.empty()) break;
        }
        return acc;
    }

    std::uint8_t polarity_in(const std::vector<int>& parts, int slot) const {
        std::uint8_t pol = PolNone;
        for (int c : parts) pol |= polarity_of(p.nodes[c], slot);
        return pol;
    }

    Family exists(int node, const std::vector<int>& filter) {
        const PNode& n = p.nodes[node];
        const int z = n.x;
        std::vector<int> parts = flatten(n.kids[0]);
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const PNode& c = p.nodes[parts[i]];
            std::vector<int> rest = parts;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            // ∃Z.(Z ⊆ a ∧ ψ) with ψ upward in a: move the witness for Z into a.
            if (c.op == POp::Sub && c.x == z && c.y != z && !(polarity_in(rest, c.y) & PolNeg)) {
                Family out;
                for (auto& d : conj(rest, filter)) {
                    Val u = d;
                    u[c.y] |= u[z];
                    u[z] = 0;
                    if (pass(u, filter)) out.push_back(std::move(u));
                }
                return minimize(std::move(out));
            }
            // ∃Z.(Z = ⋃S ∧ ψ) with ψ upward in Z and S: spread the witness for Z over S.
            if (c.op == POp::UnionEq && c.x == z && std::find(c.slots.begin(), c.slots.end(), z) == c.slots.end()) {
                bool up = !(polarity_in(rest, z) & PolNeg);
                for (int s : c.slots) up = up && !(polarity_in(rest, s) & PolNeg);
                if (!up) continue;
                Family out;
                for (auto& d : conj(rest, filter)) {
                    Mask covered = 0;
                    for (int s : c.slots) covered |= d[s];
                    Val u = d;
                    u[z] = 0;
                    spread(u, elements(d[z] & ~covered), 0, c.slots, filter, out);
                    guard(out);
                }
                return minimize(std::move(out));
            }
        }
        Family out;
        for (auto d : df(n.kids[0], filter)) {
            d[z] = 0;
            out.push_back(std::move(d));
        }
        return minimize(std::move(out));
    }

    void spread(Val& u, const std::vector<std::size_t>& need, std::size_t i, const std::vector<int>& targets,
                const std::vector<int>& filter, Family& out) {
        if (!pass(u, filter)) return;
        if (i == need.size()) {
            out.push_back(u);
            return;
        }
        for (int s : targets) {
            Mask saved = u[s];
            u[s] |= bit(need[i]);
            spread(u, need, i + 1, targets, filter, out);
            u[s] = saved;
        }
    }

    // Minimal hitting sets over (slot, element) atoms.
    Family transversals(const Family& sets, const std::vector<int>& slots, const std::vector<int>& filter) {
        Family acc = constant(true, filter);
        for (auto& m : sets) {
            Family next;
            for (auto& t : acc) {
                bool hit = false;
                for (int s : slots)
                    if (t[s] & m[s]) hit = true;
                if (hit) {
                    next.push_back(t);
                    continue;
                }
                for (int s : slots)
                    for (auto x : elements(m[s])) {
                        Val u = t;
                        u[s] |= bit(x);
                        if (pass(u, filter)) next.push_back(std::move(u));
                    }
            }
            acc = minimize(std::move(next));
            guard(acc);
            if (acc.empty()) break;
        }
        return acc;
    }
};

}  // namespace

std::vector<Valuation> one_step_moves(const Program& p, const DenseObject& alpha, const MoveOptions& opt,
                                      const Caps& caps) {
    Engine e(p, alpha, caps);
    Family fam;
    if (!opt.minimal) {
        fam = e.enumerate({p.root}, p.nodes[p.root].free, alpha.full, {}, true);
    } else {
        fam = e.df(p.root, {});
        if (opt.verify) {
            Family exact = e.fallback(p.root, {});
            std::sort(exact.begin(), exact.end());
            std::sort(fam.begin(), fam.end());
            if (exact != fam) throw Error("internal: pruned move family differs from exhaustive enumeration");
        }
    }
    for (auto& v : fam) v.resize(p.num_free);
    std::sort(fam.begin(), fam.end());
    return fam;
}

}  // namespace cak
