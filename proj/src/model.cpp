#include "cak/model.hpp"

#include <algorithm>

namespace cak {

const ElemSet& TModel::val(const std::string& p) const {
    static const ElemSet empty;
    auto it = valuation.find(p);
    return it == valuation.end() ? empty : it->second;
}

bool TModel::holds(const std::string& p, std::uint32_t s) const {
    const auto& v = val(p);
    return std::binary_search(v.begin(), v.end(), s);
}

std::set<std::string> TModel::color(std::uint32_t s) const {
    std::set<std::string> out;
    for (auto& [p, v] : valuation)
        if (std::binary_search(v.begin(), v.end(), s)) out.insert(p);
    return out;
}

void validate_model(const TModel& m) {
    if (!m.functor || !m.carrier) throw Error("model without functor or carrier");
    if (m.sigma.size() != m.size()) throw Error("structure map is not total on the carrier");
    for (auto& v : m.sigma) check_value(*m.functor, v, m.size());
    for (auto& [p, s] : m.valuation)
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] >= m.size()) throw Error("valuation of '" + p + "' leaves the carrier");
            if (i && s[i - 1] >= s[i]) throw Error("valuation of '" + p + "' not canonical");
        }
    if (m.root && *m.root >= m.size()) throw Error("root outside carrier");
    if (m.frame && m.frame->size() != m.size()) throw Error("frame is not total on the carrier");
}

void validate_frame(const TModel& m) {
    if (!m.frame) throw Error("model has no frame");
    for (std::uint32_t s = 0; s < m.size(); ++s)
        if (!supports(*m.functor, m.sigma[s], (*m.frame)[s]))
            throw Error("frame successors of '" + m.carrier->atoms[s] + "' do not support its structure");
}

bool is_tree(const TModel& m) {
    if (!m.frame || !m.root) return false;
    std::vector<int> indeg(m.size(), 0);
    for (auto& r : *m.frame)
        for (auto t : r) ++indeg[t];
    if (indeg[*m.root] != 0) return false;
    std::vector<bool> seen(m.size(), false);
    std::vector<std::uint32_t> stack{*m.root};
    seen[*m.root] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        for (auto t : (*m.frame)[s]) {
            if (indeg[t] != 1 || seen[t]) return false;
            seen[t] = true;
            ++count;
            stack.push_back(t);
        }
    }
    return count == m.size();
}

std::vector<ElemSet> canonical_frame(const TModel& m) {
    std::vector<ElemSet> r;
    for (auto& v : m.sigma) r.push_back(base_elements(*m.functor, v));
    return r;
}

TModel kripke_model(std::vector<ElemSet> succ, std::map<std::string, ElemSet> val) {
    TModel m;
    m.functor = powerset_functor();
    m.carrier = numbered_carrier(succ.size(), "s");
    for (auto& s : succ) m.sigma.push_back(pset_value(s));
    m.valuation = std::move(val);
    validate_model(m);
    return m;
}

}  // namespace cak
