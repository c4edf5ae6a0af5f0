#include "cak/samples.hpp"

namespace cak {

std::vector<std::vector<int>> tree_shapes(std::size_t max_nodes, int max_depth) {
    std::vector<std::vector<int>> out;
    std::function<void(std::vector<int>&, std::vector<int>&)> grow = [&](std::vector<int>& parent,
                                                                          std::vector<int>& depth) {
        out.push_back(parent);
        if (parent.size() == max_nodes) return;
        // keep children of each node in creation order so shapes are sorted by parent
        int lo = parent.size() > 1 ? parent.back() : 0;
        for (int p = lo; p < static_cast<int>(parent.size()); ++p) {
            if (max_depth >= 0 && depth[p] + 1 > max_depth) continue;
            parent.push_back(p);
            depth.push_back(depth[p] + 1);
            grow(parent, depth);
            parent.pop_back();
            depth.pop_back();
        }
    };
    if (max_nodes == 0) return out;
    std::vector<int> parent{-1}, depth{0};
    grow(parent, depth);
    return out;
}

std::vector<ElemSet> children_of(const std::vector<int>& parent) {
    std::vector<ElemSet> ch(parent.size());
    for (std::size_t i = 1; i < parent.size(); ++i) ch[parent[i]].push_back(static_cast<std::uint32_t>(i));
    return ch;
}

TModel tree_model(const Functor& f, const std::vector<int>& parent, const std::vector<TValue>& local,
                  std::map<std::string, ElemSet> valuation) {
    TModel m;
    m.functor = f;
    m.carrier = numbered_carrier(parent.size(), "t");
    auto ch = children_of(parent);
    for (std::size_t s = 0; s < parent.size(); ++s) {
        Map inj(ch[s].begin(), ch[s].end());
        m.sigma.push_back(apply_map(*f, inj, local[s]));
    }
    m.frame = ch;
    m.root = 0;
    m.valuation = std::move(valuation);
    validate_model(m);
    return m;
}

TModel pset_tree(const std::vector<int>& parent, std::map<std::string, ElemSet> valuation) {
    std::vector<TValue> local;
    for (auto& c : children_of(parent)) {
        ElemSet all;
        for (std::uint32_t i = 0; i < c.size(); ++i) all.push_back(i);
        local.push_back(pset_value(all));
    }
    return tree_model(powerset_functor(), parent, local, std::move(valuation));
}

namespace {

std::map<std::string, ElemSet> random_valuation(std::mt19937_64& rng, std::size_t n,
                                                const std::vector<std::string>& props) {
    std::map<std::string, ElemSet> val;
    for (auto& p : props) {
        ElemSet s;
        for (std::uint32_t i = 0; i < n; ++i)
            if (rng() % 2) s.push_back(i);
        val[p] = s;
    }
    return val;
}

}  // namespace

TModel random_tree_model(std::mt19937_64& rng, const Functor& f, std::size_t max_nodes,
                         const std::vector<std::string>& props, int max_depth) {
    std::size_t n = 1 + rng() % max_nodes;
    std::vector<int> parent{-1}, depth{0};
    while (parent.size() < n) {
        int p = static_cast<int>(rng() % parent.size());
        if (max_depth >= 0 && depth[p] + 1 > max_depth) continue;
        parent.push_back(p);
        depth.push_back(depth[p] + 1);
    }
    std::vector<TValue> local;
    for (auto& c : children_of(parent)) {
        auto values = enumerate_values(*f, c.size(), 2, 20000);
        local.push_back(values[rng() % values.size()]);
    }
    return tree_model(f, parent, local, random_valuation(rng, n, props));
}

TModel random_model(std::mt19937_64& rng, const Functor& f, std::size_t n, const std::vector<std::string>& props) {
    auto values = enumerate_values(*f, n, 2, 20000);
    TModel m;
    m.functor = f;
    m.carrier = numbered_carrier(n, "s");
    for (std::size_t s = 0; s < n; ++s) m.sigma.push_back(values[rng() % values.size()]);
    m.valuation = random_valuation(rng, n, props);
    validate_model(m);
    return m;
}

std::vector<std::map<std::string, ElemSet>> all_valuations(std::size_t n, const std::vector<std::string>& props) {
    std::vector<std::map<std::string, ElemSet>> out;
    const std::size_t bits = n * props.size();
    if (bits > 20) throw CapError("too many valuations to enumerate");
    for (Mask v = 0; v < (Mask{1} << bits); ++v) {
        std::map<std::string, ElemSet> val;
        for (std::size_t k = 0; k < props.size(); ++k) val[props[k]] = to_elems((v >> (k * n)) & full_mask(n));
        out.push_back(std::move(val));
    }
    return out;
}

void for_each_model(const Functor& f, std::size_t n, const std::vector<std::string>& props,
                    const std::function<bool(const TModel&)>& fn) {
    auto values = enumerate_values(*f, n, 2, 20000);
    auto vals = all_valuations(n, props);
    std::vector<std::size_t> pick(n, 0);
    while (true) {
        TModel m;
        m.functor = f;
        m.carrier = numbered_carrier(n, "s");
        for (auto i : pick) m.sigma.push_back(values[i]);
        for (auto& v : vals) {
            m.valuation = v;
            if (!fn(m)) return;
        }
        std::size_t i = 0;
        while (i < n && ++pick[i] == values.size()) pick[i++] = 0;
        if (i == n) return;
    }
}

}  // namespace cak
