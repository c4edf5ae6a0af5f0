#include "cak/lifting.hpp"

#include <algorithm>
#include <set>

namespace cak {

void LiftingSet::add(LiftingPtr l) { by_name_[l->name] = std::move(l); }

LiftingPtr LiftingSet::find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
}

LiftingPtr LiftingSet::get(const std::string& name) const {
    auto l = find(name);
    if (!l) throw Error("unregistered lifting '" + name + "'");
    return l;
}

std::vector<std::string> LiftingSet::names() const {
    std::vector<std::string> out;
    for (auto& [k, v] : by_name_) out.push_back(k);
    return out;
}

namespace {

LiftingPtr unary(const Functor& f, std::string name, std::string dual, std::function<bool(const DenseObject&, Mask)> ev) {
    auto l = std::make_shared<Lifting>();
    l->name = std::move(name);
    l->arity = 1;
    l->functor = f;
    l->dual_name = std::move(dual);
    l->eval = [ev = std::move(ev)](const DenseObject& d, std::span<const Mask> a) { return ev(d, a[0]); };
    l->relevant = [](const DenseObject& d) { return d.set; };
    return l;
}

std::uint64_t weight(const DenseObject& d, Mask z) {
    std::uint64_t s = 0;
    for (auto x : elements(z & d.set)) s += d.counts[x];
    return s;
}

}  // namespace

LiftingSet builtin_liftings(const Functor& f) {
    LiftingSet s;
    switch (f->kind) {
        case FunctorKind::Powerset:
            s.add(unary(f, "box", "dia", [](const DenseObject& d, Mask z) { return subset(d.set, z); }));
            s.add(unary(f, "dia", "box", [](const DenseObject& d, Mask z) { return (d.set & z) != 0; }));
            break;
        case FunctorKind::Bag:
            s.add(unary(f, "box", "dia", [](const DenseObject& d, Mask z) { return subset(d.set, z); }));
            s.add(unary(f, "covers", "dia", [](const DenseObject& d, Mask z) { return subset(d.set, z); }));
            s.add(unary(f, "dia", "box", [](const DenseObject& d, Mask z) { return (d.set & z) != 0; }));
            for (std::uint64_t k = 2; k <= 4; ++k) {
                std::string n = "ge" + std::to_string(k);
                s.add(unary(f, n, n + "d", [k](const DenseObject& d, Mask z) { return weight(d, z) >= k; }));
                s.add(unary(f, n + "d", n, [k](const DenseObject& d, Mask z) { return weight(d, d.full & ~z) < k; }));
            }
            break;
        case FunctorKind::MonNbhd:
        case FunctorKind::MonNbhdStar:
            s.add(unary(f, "box", "dia", [](const DenseObject& d, Mask z) {
                return std::any_of(d.family.begin(), d.family.end(), [z](Mask g) { return subset(g, z); });
            }));
            s.add(unary(f, "dia", "box", [](const DenseObject& d, Mask z) {
                return std::all_of(d.family.begin(), d.family.end(), [z](Mask g) { return (g & z) != 0; });
            }));
            if (f->kind == FunctorKind::MonNbhdStar) {
                s.add(unary(f, "E", "Ed", [](const DenseObject& d, Mask z) { return (d.set & z) != 0; }));
                s.add(unary(f, "Ed", "E", [](const DenseObject& d, Mask z) { return subset(d.set, z); }));
            }
            break;
        default:
            // Exponential polynomial functors: constraints on the Id-leaves of α.
            s.add(unary(f, "box", "dia", [](const DenseObject& d, Mask z) { return subset(d.set, z); }));
            s.add(unary(f, "dia", "box", [](const DenseObject& d, Mask z) { return (d.set & z) != 0; }));
            break;
    }
    return s;
}

LiftingPtr dual_lifting(const LiftingPtr& l, const std::string& name) {
    auto d = std::make_shared<Lifting>();
    d->name = name.empty() ? (l->dual_name.empty() ? l->name + "_d" : l->dual_name) : name;
    d->arity = l->arity;
    d->functor = l->functor;
    d->dual_name = l->name;
    d->monotone = l->monotone;
    d->dual = true;
    d->relevant = l->relevant;
    d->eval = [l](const DenseObject& obj, std::span<const Mask> a) {
        std::vector<Mask> c(a.begin(), a.end());
        for (auto& m : c) m = obj.full & ~m;
        return !l->eval(obj, c);
    };
    return d;
}

bool lifting_member(const Lifting& l, const DenseObject& alpha, std::span<const Mask> args) {
    if (args.size() != l.arity)
        throw Error("lifting '" + l.name + "' expects " + std::to_string(l.arity) + " arguments, got " +
                    std::to_string(args.size()));
    for (Mask m : args)
        if (!subset(m, alpha.full)) throw Error("lifting argument outside carrier");
    return l.eval(alpha, args);
}

bool lifting_member(const Lifting& l, const TObject& alpha, const std::vector<ElemSet>& args) {
    if (l.functor && !same_functor(*l.functor, *alpha.functor))
        throw Error("lifting '" + l.name + "' is for functor " + to_string(*l.functor));
    auto d = make_dense(*alpha.functor, alpha.value, alpha.carrier->size());
    std::vector<Mask> m;
    for (auto& a : args) m.push_back(to_mask(a));
    return lifting_member(l, d, m);
}

YonedaReport yoneda_lifting(const Functor& f, std::size_t n, std::vector<TValue> table, const std::string& name) {
    if (f->kind == FunctorKind::Bag) throw Error("yoneda_lifting: T(2^n) is infinite for the bag functor");
    if (n > 3) throw CapError("yoneda_lifting: arity above 3");
    const std::size_t points = std::size_t{1} << n;
    for (auto& t : table) check_value(*f, t, points);
    auto tab = std::make_shared<const std::set<TValue>>(table.begin(), table.end());

    YonedaReport rep;
    // Monotone iff the table is closed under every pointwise-increasing map g: 2^n → 2^n.
    std::vector<Map> increasing{Map{}};
    for (std::uint32_t v = 0; v < points; ++v) {
        std::vector<Map> next;
        for (auto& g : increasing)
            for (std::uint32_t w = 0; w < points; ++w)
                if ((v & ~w) == 0) {
                    Map h = g;
                    h.push_back(w);
                    next.push_back(std::move(h));
                }
        increasing = std::move(next);
    }
    for (auto& t : table) {
        for (auto& g : increasing)
            if (!tab->count(apply_map(*f, g, t))) {
                rep.monotone = false;
                rep.witness = to_string(*f, t, *numbered_carrier(points, "v"));
                break;
            }
        if (!rep.monotone) break;
    }

    auto l = std::make_shared<Lifting>();
    l->name = name;
    l->arity = n;
    l->functor = f;
    l->monotone = rep.monotone;
    l->yoneda_table = std::move(table);
    l->eval = [f, tab, n](const DenseObject& d, std::span<const Mask> a) {
        Map chi(d.n, 0);
        for (std::size_t x = 0; x < d.n; ++x)
            for (std::size_t i = 0; i < n; ++i)
                if (has(a[i], x)) chi[x] |= 1U << i;
        return tab->count(apply_map(*f, chi, *d.source)) > 0;
    };
    rep.lifting = l;
    return rep;
}

bool natural_square(const Lifting& l, const FunctorSpec& f, const TValue& alpha, std::size_t nx, const Map& map,
                    std::size_t ny, std::span<const Mask> args) {
    std::vector<Mask> pre(args.size(), 0);
    for (std::size_t i = 0; i < args.size(); ++i)
        for (std::size_t x = 0; x < nx; ++x)
            if (has(args[i], map[x])) pre[i] |= bit(x);
    auto dx = make_dense(f, alpha, nx);
    TValue beta = apply_map(f, map, alpha);
    auto dy = make_dense(f, beta, ny);
    return l.eval(dx, pre) == l.eval(dy, args);
}

namespace {

std::string describe_square(const Lifting& l, const TValue& alpha, std::size_t nx, const Map& map, std::size_t ny,
                            std::span<const Mask> args) {
    auto cx = numbered_carrier(nx, "x");
    auto cy = numbered_carrier(ny, "y");
    std::string s = "lifting " + l.name + ": alpha=" + to_string(*l.functor, alpha, *cx) + " f=[";
    for (std::size_t x = 0; x < nx; ++x) s += (x ? "," : "") + cx->atoms[x] + "->" + cy->atoms[map[x]];
    s += "] args=(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        s += i ? ",{" : "{";
        bool first = true;
        for (auto y : elements(args[i])) {
            s += (first ? "" : ",") + cy->atoms[y];
            first = false;
        }
        s += "}";
    }
    return s + ")";
}

}  // namespace

NaturalityReport check_naturality(const Lifting& l, std::size_t sample_budget, std::uint64_t seed) {
    NaturalityReport rep;
    const FunctorSpec& f = *l.functor;
    auto run = [&](const TValue& alpha, std::size_t nx, const Map& map, std::size_t ny, std::span<const Mask> args) {
        ++rep.checked;
        if (!natural_square(l, f, alpha, nx, map, ny, args)) {
            rep.violated = true;
            rep.square = describe_square(l, alpha, nx, map, ny, args);
            return false;
        }
        return rep.checked < sample_budget;
    };
    // exhaustive part
    for (std::size_t nx = 1; nx <= 3; ++nx) {
        auto alphas = enumerate_values(f, nx, 2, 5000);
        for (std::size_t ny = 1; ny <= 3; ++ny) {
            std::size_t maps = 1;
            for (std::size_t i = 0; i < nx; ++i) maps *= ny;
            for (std::size_t code = 0; code < maps; ++code) {
                Map map(nx);
                std::size_t c = code;
                for (std::size_t i = 0; i < nx; ++i) {
                    map[i] = static_cast<std::uint32_t>(c % ny);
                    c /= ny;
                }
                std::size_t bits = ny * l.arity;
                for (Mask packed = 0; packed < (Mask{1} << bits); ++packed) {
                    std::vector<Mask> args(l.arity);
                    for (std::size_t i = 0; i < l.arity; ++i) args[i] = (packed >> (i * ny)) & full_mask(ny);
                    for (auto& a : alphas)
                        if (!run(a, nx, map, ny, args)) return rep;
                }
            }
        }
    }
    // random squares with a 4-element side
    std::mt19937_64 rng(seed);
    auto a4 = enumerate_values(f, 4, 2, 50000);
    while (rep.checked < sample_budget) {
        std::size_t nx = 4, ny = 1 + rng() % 4;
        Map map(nx);
        for (auto& y : map) y = static_cast<std::uint32_t>(rng() % ny);
        std::vector<Mask> args(l.arity);
        for (auto& m : args) m = rng() & full_mask(ny);
        if (!run(a4[rng() % a4.size()], nx, map, ny, args)) return rep;
    }
    return rep;
}

}  // namespace cak
