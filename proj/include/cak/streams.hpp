#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cak/bits.hpp"
#include "cak/error.hpp"

namespace cak {

// Letters over 𝒫(A×A) are masks with bit i·|A|+j for the pair (a_i, a_j).
inline Mask pair_bit(std::size_t i, std::size_t j, std::size_t k) { return bit(i * k + j); }
Mask letter_range(Mask letter, std::size_t k);  // π₂ as a mask over A

// Deterministic max-parity stream automaton over 𝒫(A×A) accepting the streams with no bad
// trace. States are built on demand, so δ is total but only materialized where visited.
class BadTraceAutomaton {
public:
    explicit BadTraceAutomaton(std::vector<int> omega);

    std::uint32_t initial() const { return 0; }
    std::uint32_t step(std::uint32_t z, Mask letter);
    int priority(std::uint32_t z) const { return states_[z].priority; }
    std::size_t size() const { return states_.size(); }
    std::size_t num_states_a() const { return omega_.size(); }
    // Runs prefix·cycle^ω; true iff accepted.
    bool accepts_lasso(const std::vector<Mask>& prefix, const std::vector<Mask>& cycle);
    // Materializes δ over the given letters until closed; returns the number of states.
    std::size_t explore(const std::vector<Mask>& letters, std::size_t cap = 100000);

private:
    struct Node {
        int parent;  // index into the age-ordered node list, -1 for the root
        Mask label;
        bool marked;
        bool operator<(const Node& o) const {
            return std::tie(parent, label, marked) < std::tie(o.parent, o.label, o.marked);
        }
        bool operator==(const Node& o) const = default;
    };
    struct State {
        std::vector<Node> tree;  // ordered by age
        int priority;
    };

    Mask nba_post(Mask states, Mask letter) const;
    std::uint32_t intern(std::vector<Node> tree, int priority);

    std::vector<int> omega_;
    std::vector<int> odd_;      // odd priorities, one NBA mode each
    std::size_t nba_size_ = 0;  // 1 + |A|·(1 + #odd)
    Mask accepting_ = 0;
    std::vector<State> states_;
    std::map<std::pair<std::vector<Node>, int>, std::uint32_t> index_;
    std::map<std::pair<std::uint32_t, Mask>, std::uint32_t> delta_;
};

// Exact decision by product-graph analysis: does prefix·cycle^ω carry a trace whose greatest
// infinitely recurring priority is odd?
bool lasso_has_bad_trace(const std::vector<Mask>& prefix, const std::vector<Mask>& cycle, const std::vector<int>& omega);

}  // namespace cak
