#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cak/automata.hpp"
#include "cak/onestep.hpp"

namespace cak {

// NaiveMon is the bag-style attempt for plain ℳ: copies of the base with preimages of the
// generators. It satisfies the construction law but is not adequate.
enum class ConstructionKind { Powerset, Bag, Polynomial, MonStar, NaiveMon };

std::string to_string(ConstructionKind k);
ConstructionKind construction_from_string(const std::string& s);
bool construction_applies(ConstructionKind k, const FunctorSpec& f);
// The construction used for a functor when none is named; plain ℳ has none.
ConstructionKind default_construction(const FunctorSpec& f);
// Whether the construction copies elements ω times (and is therefore truncated at m).
bool is_truncated(ConstructionKind k);

struct ConstructionParams {
    ConstructionKind kind = ConstructionKind::Powerset;
    int k = 0;          // quantifier depth (ℳ*: 2^k copies per element)
    std::size_t m = 2;  // copies of ω kept
};

// (X_*, α_*, h_α). Elements of X_* are labelled for printing.
struct StarObject {
    ConstructionParams params;
    std::size_t n = 0;
    TValue alpha;
    Map h;
    std::vector<std::string> labels;
    // ℳ*: the basic members ⌈Y,j⌉ with their keys (Y, j).
    std::vector<ElemSet> basic;
    std::vector<std::pair<ElemSet, std::size_t>> basic_keys;
};

// Throws unless T(h_α)(α_*) = α.
StarObject construct_star(const Functor& f, std::size_t n, const TValue& alpha, const ConstructionParams& p,
                          const Carrier* names = nullptr);
// Number of construct_star calls whose law check passed in this process.
std::size_t construction_law_checks();

// V_[h](a) = h⁻¹[V(a)] for each argument.
std::vector<Mask> pull_back(const Map& h, std::span<const Mask> args);

struct StarLiftingOptions {
    ConstructionParams params;
    Caps caps;
    // Truncated constructions double m until two consecutive values agree, up to 2^k·4.
    bool stabilize = true;
};

// φ*: α ∈ φ*_X(V) iff (X_*, α_*, V_[h_α]) ⊨₁ φ. φ must be monotone; arguments bind vars in order.
// Stars and verdicts are memoized inside the lifting (guarded by a mutex).
LiftingPtr so_to_ml_lifting(const std::string& name, const so1::Formula& phi, const std::vector<std::string>& vars,
                            const Functor& f, const LiftingSet& lifts, const StarLiftingOptions& opt);

struct TranslatedAutomaton {
    Automaton automaton;  // ML¹ flavour, one φ* atom per transition
    LiftingSet lifts;     // the base liftings plus every generated φ*
    std::map<std::string, std::string> sources;  // generated lifting name -> SO¹ formula text
};

// 𝔸* = (A, Δ*, a_I, Ω) with Δ*(a, c) = (Δ(a, c))*.
TranslatedAutomaton translate_automaton(const Automaton& a, const Functor& f, const LiftingSet& lifts,
                                        const StarLiftingOptions& opt);

struct Unravelling {
    TModel tree;                  // frame = children, root 0
    Map gamma;                    // tree node -> source state
    std::vector<bool> frontier;   // cut by the depth bound with successors left out
    std::vector<int> depth;
    bool total = true;            // no node was cut
};

// Tree of tuples (s, w₁, …, wₙ) with wᵢ ∈ X_{γ(prefix)}; σ₂(v⃗) = T(i_v⃗)(α_{γ(v⃗)}).
// Frontier nodes get the functor's empty leaf value; γ is checked to be a homomorphism off the frontier.
Unravelling unravel(const TModel& m, std::uint32_t point, const ConstructionParams& p, int depth,
                    std::size_t max_nodes = 200000);

struct AdequacyOptions {
    ConstructionParams params;
    int k = 1;
    std::size_t samples = 50;
    std::size_t max_carrier = 3;
    std::uint64_t bag_cap = 3;
    std::uint64_t seed = 1;
    bool strong = true;  // also search for the bijection g
    Caps caps;
};

struct AdequacyReport {
    std::size_t samples = 0;
    std::size_t formulas_checked = 0;
    std::size_t skipped = 0;  // cap hit while evaluating
    std::vector<std::string> violations;
    std::size_t strong_found = 0;
    std::size_t strong_missing = 0;
    std::vector<std::string> corpus;
};

// Monotone one-step formulas over {a, b} of quantifier depth ≤ k, built from the functor's liftings.
std::vector<so1::Formula> monotone_corpus(const Functor& f, const LiftingSet& lifts, int k, std::size_t count,
                                          std::uint64_t seed);

// The adequacy condition on sampled f: X → Y, α, V and corpus formulas; strong adequacy by bijection search.
AdequacyReport check_adequacy(const Functor& f, const LiftingSet& lifts, const AdequacyOptions& opt);

// A bijection g: X_* → Y_* with T g(α_*) = β_* and f ∘ h_α = h_β ∘ g, if one exists.
std::optional<Map> strong_witness(const FunctorSpec& f, const StarObject& xs, const StarObject& ys, const Map& fmap,
                                  std::size_t node_cap = 1000000);

}  // namespace cak
