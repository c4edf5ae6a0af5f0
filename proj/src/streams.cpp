#include "cak/streams.hpp"

#include <algorithm>
#include <tuple>

namespace cak {

Mask letter_range(Mask letter, std::size_t k) {
    Mask r = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (letter & pair_bit(i, j, k)) r |= bit(j);
    return r;
}

// The NBA guesses a trace and, at some point, the odd priority d that will be its maximum:
// state 0 is the start, 1 + a is "following a, no guess yet", and 1 + |A|·(1 + m) + a is
// "following a with guess odd_[m]" (accepting when Ω(a) = odd_[m]).
BadTraceAutomaton::BadTraceAutomaton(std::vector<int> omega) : omega_(std::move(omega)) {
    const std::size_t k = omega_.size();
    if (k == 0) throw Error("bad-trace automaton over an empty state set");
    if (k > 8) throw CapError("bad-trace automaton supports at most 8 automaton states");
    for (int p : omega_)
        if (p % 2 == 1 && std::find(odd_.begin(), odd_.end(), p) == odd_.end()) odd_.push_back(p);
    std::sort(odd_.begin(), odd_.end());
    nba_size_ = 1 + k * (1 + odd_.size());
    if (nba_size_ > 64) throw CapError("bad-trace automaton too large");
    for (std::size_t m = 0; m < odd_.size(); ++m)
        for (std::size_t a = 0; a < k; ++a)
            if (omega_[a] == odd_[m]) accepting_ |= bit(1 + k * (1 + m) + a);
    intern({Node{-1, bit(0), false}}, 0);
}

Mask BadTraceAutomaton::nba_post(Mask states, Mask letter) const {
    const std::size_t k = omega_.size();
    Mask out = 0;
    auto enter = [&](std::size_t to) {
        out |= bit(1 + to);
        for (std::size_t m = 0; m < odd_.size(); ++m)
            if (omega_[to] <= odd_[m]) out |= bit(1 + k * (1 + m) + to);
    };
    if (states & bit(0))
        for (auto j : elements(letter_range(letter, k))) enter(j);
    for (std::size_t a = 0; a < k; ++a) {
        bool free_mode = states & bit(1 + a);
        for (std::size_t b = 0; b < k; ++b) {
            if (!(letter & pair_bit(a, b, k))) continue;
            if (free_mode) enter(b);
            for (std::size_t m = 0; m < odd_.size(); ++m)
                if ((states & bit(1 + k * (1 + m) + a)) && omega_[b] <= odd_[m]) out |= bit(1 + k * (1 + m) + b);
        }
    }
    return out;
}

std::uint32_t BadTraceAutomaton::intern(std::vector<Node> tree, int priority) {
    auto key = std::make_pair(tree, priority);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(states_.size());
    states_.push_back({std::move(tree), priority});
    index_.emplace(std::move(key), id);
    return id;
}

// One Safra step with nodes ranked by age. The step's min-parity priority is
// min(2f−1, 2e) for f the best rank removed and e the best rank marked; it is turned into a
// max-parity priority of the complement (no bad trace) below.
std::uint32_t BadTraceAutomaton::step(std::uint32_t z, Mask letter) {
    auto memo = delta_.find({z, letter});
    if (memo != delta_.end()) return memo->second;
    std::vector<Node> t = states_[z].tree;
    const std::size_t old = t.size();
    for (auto& n : t) n.marked = false;
    // spawn children for accepting states, youngest last
    for (std::size_t v = 0; v < old; ++v)
        if (t[v].label & accepting_) t.push_back(Node{static_cast<int>(v), t[v].label & accepting_, false});
    for (auto& n : t) n.label = nba_post(n.label, letter);
    // horizontal merge: children inside the parent, older siblings take precedence
    for (std::size_t v = 0; v < t.size(); ++v) {
        if (t[v].parent < 0) continue;
        t[v].label &= t[static_cast<std::size_t>(t[v].parent)].label;
        for (std::size_t w = 0; w < v; ++w)
            if (t[w].parent == t[v].parent) t[v].label &= ~t[w].label;
    }
    std::vector<char> removed(t.size(), 0);
    for (std::size_t v = 0; v < t.size(); ++v) {
        if (t[v].parent >= 0 && removed[static_cast<std::size_t>(t[v].parent)]) removed[v] = 1;
        if (t[v].label == 0) removed[v] = 1;
    }
    // vertical merge: a node covered by its children absorbs them and is marked
    for (std::size_t v = 0; v < t.size(); ++v) {
        if (removed[v]) continue;
        bool below_removed = false;
        for (int p = t[v].parent; p >= 0; p = t[static_cast<std::size_t>(p)].parent)
            below_removed = below_removed || removed[static_cast<std::size_t>(p)];
        if (below_removed) {
            removed[v] = 1;
            continue;
        }
        Mask kids = 0;
        bool any = false;
        for (std::size_t w = v + 1; w < t.size(); ++w)
            if (!removed[w] && t[w].parent == static_cast<int>(v)) kids |= t[w].label, any = true;
        if (any && kids == t[v].label) {
            t[v].marked = true;
            for (std::size_t w = v + 1; w < t.size(); ++w) {
                for (int p = t[w].parent; p >= 0; p = t[static_cast<std::size_t>(p)].parent)
                    if (p == static_cast<int>(v)) {
                        removed[w] = 1;
                        break;
                    }
            }
        }
    }
    const std::size_t cap = nba_size_ + 1;
    std::size_t f = cap, e = cap;
    for (std::size_t v = 0; v < t.size(); ++v)
        if (removed[v]) f = std::min(f, v + 1);
    std::vector<int> rank(t.size(), -1);
    std::vector<Node> out;
    for (std::size_t v = 0; v < t.size(); ++v) {
        if (removed[v]) continue;
        rank[v] = static_cast<int>(out.size());
        Node n = t[v];
        n.parent = n.parent < 0 ? -1 : rank[static_cast<std::size_t>(n.parent)];
        if (n.marked) e = std::min(e, out.size() + 1);
        out.push_back(n);
    }
    // removing the root happens only when no trace survives; keep a root with an empty label
    if (out.empty()) out.push_back(Node{-1, 0, false});
    int min_parity = 2 * static_cast<int>(cap) + 1;
    if (f < cap) min_parity = std::min(min_parity, 2 * static_cast<int>(f) - 1);
    if (e < cap) min_parity = std::min(min_parity, 2 * static_cast<int>(e));
    // bad trace exists iff the least recurring min-parity priority is even; flip and reverse
    int priority = 2 * static_cast<int>(cap) + 1 - min_parity;
    auto id = intern(std::move(out), priority);
    delta_[{z, letter}] = id;
    return id;
}

bool BadTraceAutomaton::accepts_lasso(const std::vector<Mask>& prefix, const std::vector<Mask>& cycle) {
    if (cycle.empty()) throw Error("lasso cycle must be nonempty");
    std::uint32_t z = initial();
    for (auto l : prefix) z = step(z, l);
    // iterate the cycle until the state at the cycle start repeats
    std::map<std::uint32_t, std::size_t> seen;
    std::vector<int> prios;
    while (!seen.count(z)) {
        seen[z] = prios.size();
        for (auto l : cycle) {
            z = step(z, l);
            prios.push_back(priority(z));
        }
    }
    int top = -1;
    for (std::size_t i = seen[z] * 1; i < prios.size(); ++i) top = std::max(top, prios[i]);
    return top % 2 == 0;
}

std::size_t BadTraceAutomaton::explore(const std::vector<Mask>& letters, std::size_t cap) {
    for (std::size_t z = 0; z < states_.size(); ++z) {
        for (auto l : letters) step(static_cast<std::uint32_t>(z), l);
        if (states_.size() > cap) throw CapError("bad-trace automaton exceeds " + std::to_string(cap) + " states");
    }
    return states_.size();
}

bool lasso_has_bad_trace(const std::vector<Mask>& prefix, const std::vector<Mask>& cycle, const std::vector<int>& omega) {
    if (cycle.empty()) throw Error("lasso cycle must be nonempty");
    const std::size_t k = omega.size();
    const std::size_t len = prefix.size() + cycle.size();
    auto letter = [&](std::size_t i) { return i < prefix.size() ? prefix[i] : cycle[i - prefix.size()]; };
    auto next = [&](std::size_t i) { return i + 1 < len ? i + 1 : prefix.size(); };
    // node (i, a): the trace sits at a after reading letter i
    auto id = [&](std::size_t i, std::size_t a) { return i * k + a; };
    const std::size_t n = len * k;
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t i = 0; i < len; ++i) {
        std::size_t j = next(i);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                if (letter(j) & pair_bit(a, b, k)) succ[id(i, a)].push_back(id(j, b));
    }
    std::vector<char> reach(n, 0);
    std::vector<std::size_t> stack;
    for (auto a : elements(letter_range(letter(0), k))) {
        reach[id(0, a)] = 1;
        stack.push_back(id(0, a));
    }
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (auto y : succ[x])
            if (!reach[y]) reach[y] = 1, stack.push_back(y);
    }
    // a reachable cycle through priority d using only priorities ≤ d, for some odd d
    for (std::size_t v = 0; v < n; ++v) {
        const int d = omega[v % k];
        if (!reach[v] || d % 2 == 0) continue;
        std::vector<char> seen(n, 0);
        stack = {v};
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            for (auto y : succ[x]) {
                if (omega[y % k] > d) continue;
                if (y == v) return true;
                if (!seen[y]) seen[y] = 1, stack.push_back(y);
            }
        }
    }
    return false;
}

}  // namespace cak
