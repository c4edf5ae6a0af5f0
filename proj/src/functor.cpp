#include "cak/functor.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

namespace cak {

namespace {

Functor make(FunctorKind k, std::vector<std::string> c = {}, std::vector<Functor> p = {}) {
    return std::make_shared<const FunctorSpec>(FunctorSpec{k, std::move(c), std::move(p)});
}

void require_constants(const std::vector<std::string>& c) {
    if (c.empty()) throw Error("constant set must be nonempty");
    std::vector<std::string> s = c;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw Error("duplicate constant");
}

bool includes(const ElemSet& big, const ElemSet& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

ElemSet normalize(ElemSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

std::vector<ElemSet> minimize(std::vector<ElemSet> fam) {
    for (auto& s : fam) s = normalize(std::move(s));
    std::sort(fam.begin(), fam.end(), [](const ElemSet& a, const ElemSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
    std::vector<ElemSet> out;
    for (auto& s : fam) {
        bool dominated = false;
        for (auto& o : out)
            if (includes(s, o)) { dominated = true; break; }
        if (!dominated) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint32_t map_at(const Map& f, std::uint32_t x) {
    if (x >= f.size()) throw Error("map domain does not match the value's carrier");
    return f[x];
}

ElemSet image(const ElemSet& s, const Map& f) {
    ElemSet out;
    out.reserve(s.size());
    for (auto x : s) out.push_back(map_at(f, x));
    return normalize(std::move(out));
}

}  // namespace

Functor const_functor(std::vector<std::string> c) {
    require_constants(c);
    return make(FunctorKind::Const, std::move(c));
}
Functor id_functor() { return make(FunctorKind::Id); }
Functor product_functor(Functor a, Functor b) { return make(FunctorKind::Product, {}, {std::move(a), std::move(b)}); }
Functor coproduct_functor(std::vector<Functor> parts) {
    if (parts.empty()) throw Error("empty coproduct");
    return make(FunctorKind::Coproduct, {}, std::move(parts));
}
Functor exp_functor(Functor base, std::vector<std::string> c) {
    require_constants(c);
    return make(FunctorKind::Exp, std::move(c), {std::move(base)});
}
Functor powerset_functor() { return make(FunctorKind::Powerset); }
Functor bag_functor() { return make(FunctorKind::Bag); }
Functor mon_functor() { return make(FunctorKind::MonNbhd); }
Functor monstar_functor() { return make(FunctorKind::MonNbhdStar); }

bool is_polynomial(const FunctorSpec& f) {
    switch (f.kind) {
        case FunctorKind::Const:
        case FunctorKind::Id: return true;
        case FunctorKind::Product:
        case FunctorKind::Coproduct:
        case FunctorKind::Exp:
            return std::all_of(f.parts.begin(), f.parts.end(), [](const Functor& p) { return is_polynomial(*p); });
        default: return false;
    }
}

bool same_functor(const FunctorSpec& a, const FunctorSpec& b) {
    if (a.kind != b.kind || a.constants != b.constants || a.parts.size() != b.parts.size()) return false;
    for (std::size_t i = 0; i < a.parts.size(); ++i)
        if (!same_functor(*a.parts[i], *b.parts[i])) return false;
    return true;
}

std::string to_string(const FunctorSpec& f) {
    auto join = [](const std::vector<std::string>& c) {
        std::string s;
        for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + c[i];
        return s;
    };
    switch (f.kind) {
        case FunctorKind::Const: return "const{" + join(f.constants) + "}";
        case FunctorKind::Id: return "id";
        case FunctorKind::Product: return "(" + to_string(*f.parts[0]) + " x " + to_string(*f.parts[1]) + ")";
        case FunctorKind::Coproduct: {
            std::string s = "(";
            for (std::size_t i = 0; i < f.parts.size(); ++i) s += (i ? " + " : "") + to_string(*f.parts[i]);
            return s + ")";
        }
        case FunctorKind::Exp: return to_string(*f.parts[0]) + "^{" + join(f.constants) + "}";
        case FunctorKind::Powerset: return "powerset";
        case FunctorKind::Bag: return "bag";
        case FunctorKind::MonNbhd: return "mon";
        case FunctorKind::MonNbhdStar: return "monstar";
    }
    return "?";
}

std::optional<std::uint32_t> Carrier::find(const std::string& a) const {
    auto it = std::find(atoms.begin(), atoms.end(), a);
    if (it == atoms.end()) return std::nullopt;
    return static_cast<std::uint32_t>(it - atoms.begin());
}

std::uint32_t Carrier::index(const std::string& a) const {
    auto i = find(a);
    if (!i) throw Error("unknown carrier atom '" + a + "'");
    return *i;
}

CarrierPtr make_carrier(std::vector<std::string> atoms) {
    std::vector<std::string> s = atoms;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw Error("duplicate carrier atom");
    return std::make_shared<const Carrier>(Carrier{std::move(atoms)});
}

CarrierPtr numbered_carrier(std::size_t n, const std::string& prefix) {
    std::vector<std::string> a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(prefix + std::to_string(i));
    return make_carrier(std::move(a));
}

ElemSet to_elems(Mask m) {
    ElemSet out;
    for (auto i : elements(m)) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

Mask to_mask(const ElemSet& s) {
    Mask m = 0;
    for (auto x : s) {
        if (x >= 64) throw CapError("carrier too large for dense evaluation (more than 64 elements)");
        m |= bit(x);
    }
    return m;
}

bool TValue::operator==(const TValue& o) const {
    return kind == o.kind && index == o.index && set == o.set && family == o.family && counts == o.counts &&
           parts == o.parts;
}

bool TValue::operator<(const TValue& o) const {
    return std::tie(kind, index, set, family, counts, parts) <
           std::tie(o.kind, o.index, o.set, o.family, o.counts, o.parts);
}

TValue pset_value(ElemSet s) {
    TValue v;
    v.kind = FunctorKind::Powerset;
    v.set = normalize(std::move(s));
    return v;
}

TValue bag_value(std::vector<std::pair<std::uint32_t, std::uint64_t>> counts) {
    std::map<std::uint32_t, std::uint64_t> acc;
    for (auto [x, c] : counts) {
        if (c == 0) continue;
        auto& slot = acc[x];
        if (slot > std::numeric_limits<std::uint64_t>::max() - c) throw Error("bag count overflow");
        slot += c;
    }
    TValue v;
    v.kind = FunctorKind::Bag;
    v.counts.assign(acc.begin(), acc.end());
    return v;
}

TValue mon_value(std::vector<ElemSet> generators) {
    TValue v;
    v.kind = FunctorKind::MonNbhd;
    v.family = minimize(std::move(generators));
    return v;
}

TValue monstar_value(std::vector<ElemSet> generators, ElemSet support) {
    TValue v;
    v.kind = FunctorKind::MonNbhdStar;
    v.family = minimize(std::move(generators));
    v.set = normalize(std::move(support));
    for (auto& g : v.family)
        if (!includes(v.set, g)) throw Error("support does not support the neighbourhood family");
    return v;
}

void check_value(const FunctorSpec& f, const TValue& v, std::size_t n) {
    if (v.kind != f.kind) throw Error("value does not match functor " + to_string(f));
    auto in_range = [n](const ElemSet& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] >= n) throw Error("element outside carrier");
            if (i && s[i - 1] >= s[i]) throw Error("set not in canonical order");
        }
    };
    switch (f.kind) {
        case FunctorKind::Const:
            if (v.index >= f.constants.size()) throw Error("constant out of range");
            break;
        case FunctorKind::Id:
            if (v.index >= n) throw Error("element outside carrier");
            break;
        case FunctorKind::Product:
            if (v.parts.size() != 2) throw Error("product needs two components");
            check_value(*f.parts[0], v.parts[0], n);
            check_value(*f.parts[1], v.parts[1], n);
            break;
        case FunctorKind::Coproduct:
            if (v.index >= f.parts.size() || v.parts.size() != 1) throw Error("bad coproduct injection");
            check_value(*f.parts[v.index], v.parts[0], n);
            break;
        case FunctorKind::Exp:
            if (v.parts.size() != f.constants.size()) throw Error("exponential value must be total");
            for (auto& p : v.parts) check_value(*f.parts[0], p, n);
            break;
        case FunctorKind::Powerset: in_range(v.set); break;
        case FunctorKind::Bag:
            for (std::size_t i = 0; i < v.counts.size(); ++i) {
                if (v.counts[i].first >= n) throw Error("element outside carrier");
                if (v.counts[i].second == 0) throw Error("zero bag count stored");
                if (i && v.counts[i - 1].first >= v.counts[i].first) throw Error("bag not in canonical order");
            }
            break;
        case FunctorKind::MonNbhd:
        case FunctorKind::MonNbhdStar:
            for (auto& g : v.family) in_range(g);
            if (minimize(v.family) != v.family) throw Error("neighbourhood family is not a minimal antichain");
            if (f.kind == FunctorKind::MonNbhdStar) {
                in_range(v.set);
                for (auto& g : v.family)
                    if (!includes(v.set, g)) throw Error("support does not support the neighbourhood family");
            }
            break;
    }
}

TValue apply_map(const FunctorSpec& f, const Map& map, const TValue& t) {
    TValue out;
    out.kind = t.kind;
    switch (f.kind) {
        case FunctorKind::Const: out.index = t.index; break;
        case FunctorKind::Id: out.index = map_at(map, t.index); break;
        case FunctorKind::Product:
            out.parts = {apply_map(*f.parts[0], map, t.parts[0]), apply_map(*f.parts[1], map, t.parts[1])};
            break;
        case FunctorKind::Coproduct:
            out.index = t.index;
            out.parts = {apply_map(*f.parts[t.index], map, t.parts[0])};
            break;
        case FunctorKind::Exp:
            for (auto& p : t.parts) out.parts.push_back(apply_map(*f.parts[0], map, p));
            break;
        case FunctorKind::Powerset: out.set = image(t.set, map); break;
        case FunctorKind::Bag: {
            std::vector<std::pair<std::uint32_t, std::uint64_t>> c;
            for (auto [x, k] : t.counts) c.emplace_back(map_at(map, x), k);
            return bag_value(std::move(c));
        }
        case FunctorKind::MonNbhd:
        case FunctorKind::MonNbhdStar: {
            // Mf(N) is generated by the images of the generators of N.
            std::vector<ElemSet> g;
            for (auto& s : t.family) g.push_back(image(s, map));
            out.family = minimize(std::move(g));
            if (f.kind == FunctorKind::MonNbhdStar) out.set = image(t.set, map);
            break;
        }
    }
    return out;
}

TObject apply_map(const TObject& t, const Map& map, CarrierPtr target) {
    if (map.size() != t.carrier->size()) throw Error("map domain does not match the value's carrier");
    for (auto y : map)
        if (y >= target->size()) throw Error("map image outside target carrier");
    return TObject{t.functor, target, apply_map(*t.functor, map, t.value)};
}

namespace {

struct Reindex {
    std::vector<std::int64_t> pos;
    explicit Reindex(const ElemSet& keep) {
        std::uint32_t top = keep.empty() ? 0 : keep.back() + 1;
        pos.assign(top, -1);
        for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<std::int64_t>(i);
    }
    std::int64_t operator()(std::uint32_t x) const { return x < pos.size() ? pos[x] : -1; }
    bool set(const ElemSet& s, ElemSet& out) const {
        out.clear();
        for (auto x : s) {
            auto p = (*this)(x);
            if (p < 0) return false;
            out.push_back(static_cast<std::uint32_t>(p));
        }
        return true;
    }
};

bool restrict_rec(const FunctorSpec& f, const TValue& t, const Reindex& r, TValue& out) {
    out.kind = t.kind;
    out.index = t.index;
    switch (f.kind) {
        case FunctorKind::Const: return true;
        case FunctorKind::Id: {
            auto p = r(t.index);
            if (p < 0) return false;
            out.index = static_cast<std::uint32_t>(p);
            return true;
        }
        case FunctorKind::Product:
        case FunctorKind::Coproduct:
        case FunctorKind::Exp: {
            out.parts.resize(t.parts.size());
            for (std::size_t i = 0; i < t.parts.size(); ++i) {
                const FunctorSpec& pf = f.kind == FunctorKind::Product  ? *f.parts[i]
                                        : f.kind == FunctorKind::Exp   ? *f.parts[0]
                                                                       : *f.parts[t.index];
                if (!restrict_rec(pf, t.parts[i], r, out.parts[i])) return false;
            }
            return true;
        }
        case FunctorKind::Powerset: return r.set(t.set, out.set);
        case FunctorKind::Bag:
            for (auto [x, c] : t.counts) {
                auto p = r(x);
                if (p < 0) return false;
                out.counts.emplace_back(static_cast<std::uint32_t>(p), c);
            }
            return true;
        case FunctorKind::MonNbhd:
        case FunctorKind::MonNbhdStar:
            // N is supported by X' iff every minimal member lies inside X'.
            for (auto& g : t.family) {
                ElemSet s;
                if (!r.set(g, s)) return false;
                out.family.push_back(std::move(s));
            }
            if (f.kind == FunctorKind::MonNbhdStar && !r.set(t.set, out.set)) return false;
            return true;
    }
    return false;
}

}  // namespace

std::optional<TValue> restrict_to_support(const FunctorSpec& f, const TValue& t, const ElemSet& keep) {
    Reindex r(keep);
    TValue out;
    if (!restrict_rec(f, t, r, out)) return std::nullopt;
    return out;
}

std::optional<TObject> restrict_to_support(const TObject& t, const ElemSet& keep) {
    for (auto x : keep)
        if (x >= t.carrier->size()) throw Error("restriction set outside carrier");
    auto v = restrict_to_support(*t.functor, t.value, keep);
    if (!v) return std::nullopt;
    std::vector<std::string> atoms;
    for (auto x : keep) atoms.push_back(t.carrier->atoms[x]);
    return TObject{t.functor, make_carrier(std::move(atoms)), std::move(*v)};
}

bool supports(const FunctorSpec& f, const TValue& t, const ElemSet& keep) {
    return restrict_to_support(f, t, keep).has_value();
}

std::vector<ElemSet> minimal_supports(const FunctorSpec& f, const TValue& t, std::size_t n, const Caps& caps) {
    if (n > static_cast<std::size_t>(caps.support_enum))
        throw CapError("minimal_supports: carrier of size " + std::to_string(n) + " exceeds cap " +
                       std::to_string(caps.support_enum));
    std::vector<Mask> found;
    for_each_submask(full_mask(n), [&](Mask m) {
        if (supports(f, t, to_elems(m))) found.push_back(m);
        return true;
    });
    std::vector<ElemSet> out;
    for (Mask m : minimize_antichain(found)) out.push_back(to_elems(m));
    return out;
}

ElemSet base_elements(const FunctorSpec& f, const TValue& t) {
    ElemSet out;
    switch (f.kind) {
        case FunctorKind::Const: break;
        case FunctorKind::Id: out.push_back(t.index); break;
        case FunctorKind::Product:
        case FunctorKind::Coproduct:
        case FunctorKind::Exp:
            for (std::size_t i = 0; i < t.parts.size(); ++i) {
                const FunctorSpec& pf = f.kind == FunctorKind::Product  ? *f.parts[i]
                                        : f.kind == FunctorKind::Exp   ? *f.parts[0]
                                                                       : *f.parts[t.index];
                auto s = base_elements(pf, t.parts[i]);
                out.insert(out.end(), s.begin(), s.end());
            }
            break;
        case FunctorKind::Powerset: out = t.set; break;
        case FunctorKind::Bag:
            for (auto [x, c] : t.counts) out.push_back(x);
            break;
        case FunctorKind::MonNbhd:
            for (auto& g : t.family) out.insert(out.end(), g.begin(), g.end());
            break;
        case FunctorKind::MonNbhdStar: out = t.set; break;
    }
    return normalize(std::move(out));
}

std::vector<std::vector<Mask>> antichains(std::size_t n) {
    if (n > 5) throw CapError("antichain enumeration limited to carriers of size 5");
    std::vector<std::vector<Mask>> out;
    std::vector<Mask> cur;
    Mask top = full_mask(n);
    auto rec = [&](auto&& self, Mask next) -> void {
        if (next > top) {
            out.push_back(cur);
            return;
        }
        self(self, next + 1);
        for (Mask o : cur)
            if (subset(o, next) || subset(next, o)) return;
        cur.push_back(next);
        self(self, next + 1);
        cur.pop_back();
    };
    rec(rec, 0);
    return out;
}

namespace {

void enum_rec(const FunctorSpec& f, std::size_t n, std::uint64_t cap, std::size_t limit, std::vector<TValue>& out) {
    auto guard = [&] {
        if (out.size() > limit) throw CapError("value enumeration exceeded " + std::to_string(limit));
    };
    switch (f.kind) {
        case FunctorKind::Const:
            for (std::uint32_t i = 0; i < f.constants.size(); ++i) {
                TValue v;
                v.kind = f.kind;
                v.index = i;
                out.push_back(v);
            }
            break;
        case FunctorKind::Id:
            for (std::uint32_t i = 0; i < n; ++i) {
                TValue v;
                v.kind = f.kind;
                v.index = i;
                out.push_back(v);
            }
            break;
        case FunctorKind::Product: {
            std::vector<TValue> a, b;
            enum_rec(*f.parts[0], n, cap, limit, a);
            enum_rec(*f.parts[1], n, cap, limit, b);
            for (auto& x : a)
                for (auto& y : b) {
                    TValue v;
                    v.kind = f.kind;
                    v.parts = {x, y};
                    out.push_back(std::move(v));
                    guard();
                }
            break;
        }
        case FunctorKind::Coproduct:
            for (std::uint32_t i = 0; i < f.parts.size(); ++i) {
                std::vector<TValue> a;
                enum_rec(*f.parts[i], n, cap, limit, a);
                for (auto& x : a) {
                    TValue v;
                    v.kind = f.kind;
                    v.index = i;
                    v.parts = {x};
                    out.push_back(std::move(v));
                    guard();
                }
            }
            break;
        case FunctorKind::Exp: {
            std::vector<TValue> a;
            enum_rec(*f.parts[0], n, cap, limit, a);
            std::vector<TValue> acc{TValue{}};
            acc[0].kind = f.kind;
            for (std::size_t k = 0; k < f.constants.size(); ++k) {
                std::vector<TValue> next;
                for (auto& partial : acc)
                    for (auto& x : a) {
                        TValue v = partial;
                        v.parts.push_back(x);
                        next.push_back(std::move(v));
                        if (next.size() > limit) throw CapError("value enumeration exceeded limit");
                    }
                acc = std::move(next);
            }
            out.insert(out.end(), acc.begin(), acc.end());
            guard();
            break;
        }
        case FunctorKind::Powerset:
            if (n > 16) throw CapError("powerset enumeration too large");
            for_each_submask(full_mask(n), [&](Mask m) {
                out.push_back(pset_value(to_elems(m)));
                return true;
            });
            guard();
            break;
        case FunctorKind::Bag: {
            std::vector<std::uint64_t> c(n, 0);
            while (true) {
                std::vector<std::pair<std::uint32_t, std::uint64_t>> counts;
                for (std::uint32_t i = 0; i < n; ++i)
                    if (c[i]) counts.emplace_back(i, c[i]);
                out.push_back(bag_value(std::move(counts)));
                guard();
                std::size_t i = 0;
                while (i < n && c[i] == cap) c[i++] = 0;
                if (i == n) break;
                ++c[i];
            }
            break;
        }
        case FunctorKind::MonNbhd:
            for (auto& ac : antichains(n)) {
                std::vector<ElemSet> g;
                for (Mask m : ac) g.push_back(to_elems(m));
                out.push_back(mon_value(std::move(g)));
                guard();
            }
            break;
        case FunctorKind::MonNbhdStar: {
            auto all = antichains(n);
            for_each_submask(full_mask(n), [&](Mask s) {
                for (auto& ac : all) {
                    bool inside = std::all_of(ac.begin(), ac.end(), [s](Mask m) { return subset(m, s); });
                    if (!inside) continue;
                    std::vector<ElemSet> g;
                    for (Mask m : ac) g.push_back(to_elems(m));
                    out.push_back(monstar_value(std::move(g), to_elems(s)));
                    guard();
                }
                return true;
            });
            break;
        }
    }
}

}  // namespace

std::vector<TValue> enumerate_values(const FunctorSpec& f, std::size_t n, std::uint64_t bag_cap, std::size_t limit) {
    std::vector<TValue> out;
    enum_rec(f, n, bag_cap, limit, out);
    return out;
}

std::optional<TValue> empty_value(const FunctorSpec& f) {
    TValue v;
    v.kind = f.kind;
    switch (f.kind) {
        case FunctorKind::Const: return v;
        case FunctorKind::Id: return std::nullopt;
        case FunctorKind::Product:
        case FunctorKind::Exp:
            for (std::size_t i = 0; i < (f.kind == FunctorKind::Product ? 2 : f.constants.size()); ++i) {
                auto p = empty_value(*f.parts[f.kind == FunctorKind::Product ? i : 0]);
                if (!p) return std::nullopt;
                v.parts.push_back(*p);
            }
            return v;
        case FunctorKind::Coproduct:
            for (std::uint32_t i = 0; i < f.parts.size(); ++i)
                if (auto p = empty_value(*f.parts[i])) {
                    v.index = i;
                    v.parts = {*p};
                    return v;
                }
            return std::nullopt;
        case FunctorKind::Powerset:
        case FunctorKind::Bag:
        case FunctorKind::MonNbhd:
        case FunctorKind::MonNbhdStar: return v;
    }
    return std::nullopt;
}

bool nbhd_contains(const TValue& t, const ElemSet& z) {
    for (auto& g : t.family)
        if (includes(z, g)) return true;
    return false;
}

std::string to_string(const FunctorSpec& f, const TValue& t, const Carrier& c) {
    auto set = [&](const ElemSet& s) {
        std::string out = "{";
        for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + c.atoms.at(s[i]);
        return out + "}";
    };
    auto fam = [&](const std::vector<ElemSet>& g) {
        std::string out = "up{";
        for (std::size_t i = 0; i < g.size(); ++i) out += (i ? "," : "") + set(g[i]);
        return out + "}";
    };
    switch (f.kind) {
        case FunctorKind::Const: return f.constants.at(t.index);
        case FunctorKind::Id: return c.atoms.at(t.index);
        case FunctorKind::Product:
            return "(" + to_string(*f.parts[0], t.parts[0], c) + ", " + to_string(*f.parts[1], t.parts[1], c) + ")";
        case FunctorKind::Coproduct:
            return "in" + std::to_string(t.index) + "(" + to_string(*f.parts[t.index], t.parts[0], c) + ")";
        case FunctorKind::Exp: {
            std::string out = "[";
            for (std::size_t i = 0; i < t.parts.size(); ++i)
                out += (i ? ", " : "") + f.constants[i] + ": " + to_string(*f.parts[0], t.parts[i], c);
            return out + "]";
        }
        case FunctorKind::Powerset: return set(t.set);
        case FunctorKind::Bag: {
            std::string out = "{";
            for (std::size_t i = 0; i < t.counts.size(); ++i)
                out += (i ? "," : "") + c.atoms.at(t.counts[i].first) + ":" + std::to_string(t.counts[i].second);
            return out + "}";
        }
        case FunctorKind::MonNbhd: return fam(t.family);
        case FunctorKind::MonNbhdStar: return "(" + fam(t.family) + ", " + set(t.set) + ")";
    }
    return "?";
}

DenseObject make_dense(const FunctorSpec& f, const TValue& t, std::size_t n) {
    if (n > 64) throw CapError("one-step carrier larger than 64 elements");
    DenseObject d;
    d.source = &t;
    d.kind = f.kind;
    d.n = n;
    d.full = full_mask(n);
    switch (f.kind) {
        case FunctorKind::Powerset: d.set = to_mask(t.set); break;
        case FunctorKind::Bag:
            d.counts.assign(n, 0);
            for (auto [x, c] : t.counts) {
                d.set |= bit(x);
                d.counts[x] = c;
            }
            break;
        case FunctorKind::MonNbhd:
        case FunctorKind::MonNbhdStar:
            for (auto& g : t.family) d.family.push_back(to_mask(g));
            d.set = f.kind == FunctorKind::MonNbhdStar ? to_mask(t.set) : 0;
            if (f.kind == FunctorKind::MonNbhd)
                for (Mask m : d.family) d.set |= m;
            break;
        default: d.set = to_mask(base_elements(f, t)); break;
    }
    return d;
}

}  // namespace cak
