#pragma once

#include <vector>

#include "cak/onestep.hpp"

namespace cak {

// A valuation of the program's free slots (automaton states), one mask per slot.
using Valuation = std::vector<Mask>;

struct MoveOptions {
    // Keep only ⊆-minimal admissible valuations. Larger ones only widen ∀'s choice.
    // Otherwise every admissible valuation of the formula's free slots is returned; slots the
    // formula does not mention stay empty.
    bool minimal = true;
    // Cross-check the minimal family against exhaustive enumeration (slow; for tests).
    bool verify = false;
};

// ∃'s moves in a one-step model: valuations U of slots 0..num_free-1 with (X, α, U) ⊨₁ root.
// With minimal = true the result is exactly the set of ⊆-minimal admissible valuations.
std::vector<Valuation> one_step_moves(const Program& p, const DenseObject& alpha, const MoveOptions& opt = {},
                                      const Caps& caps = {});

}  // namespace cak
