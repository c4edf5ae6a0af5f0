#pragma once

#include "cak/automata.hpp"
#include "cak/logic.hpp"
#include "cak/streams.hpp"

namespace cak {

// Whether every transition is upward closed in the states (polarity analysis).
bool is_monotone_automaton(const Automaton& a, const LiftingSet& lifts);

// Fresh initial state choosing between the two initial transitions; states are renamed apart.
Automaton union_aut(const Automaton& a, const Automaton& b);
// Same, with a conjunction at the fresh initial state.
Automaton intersect_aut(const Automaton& a, const Automaton& b);
// Rewrites each non-monotone transition Δ into ∃Z⃗(⋀ Zᵢ ⊆ aᵢ ∧ Δ[Z⃗/a⃗]).
Automaton monotonize(const Automaton& a, const LiftingSet& lifts);
// Dual transitions and priorities shifted by one; needs monotone transitions.
Automaton complement_aut(const Automaton& a, const LiftingSet& lifts);
// Δ*(a, c) = Δ(a, c) ∨ Δ(a, c ∪ {q}); q leaves the chromatic set.
Automaton project_aut(const Automaton& a, const std::string& q);

struct SimulationInfo {
    std::vector<Mask> relation;      // B per product state, over pair_bit(·,·,|A|)
    std::vector<std::uint32_t> det;  // detector state per product state
    std::size_t detector_states = 0;
};

struct SimulateOptions {
    std::size_t max_states = 20000;
    std::size_t max_pairs = 10;  // |Pairs(B, c)|; each transition has 2^pairs − 1 variables
};

// Product of macro-states B ⊆ A×A with the bad-trace detector; every transition has the shape
// disjoint(W) ∧ ψ. Only reachable product states are built.
Automaton simulate(const Automaton& a, const LiftingSet& lifts, SimulationInfo* info = nullptr,
                   const SimulateOptions& opt = {});
std::string relation_text(const Automaton& a, Mask rel);

// ML¹ automaton for a μ-formula: guarded form, then states (subformula, unfolded priority).
Automaton compile_mu(const mu::Formula& f, const LiftingSet& lifts);
// SO¹ automaton for an MSO formula, read on trees in tree mode.
Automaton compile_mso(const mso::Formula& f, const LiftingSet& lifts, const SimulateOptions& opt = {});

}  // namespace cak
