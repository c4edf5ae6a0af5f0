#pragma once

#include <map>
#include <string>
#include <vector>

#include "cak/model.hpp"
#include "cak/model_io.hpp"
#include "cak/onestep.hpp"
#include "cak/parity.hpp"

namespace cak {

enum class Flavor { ML1, SO1 };

// P-chromatic parity automaton. Colors are bitmasks over `chromatic` (bit i = chromatic[i]);
// transition formulas have their free variables among the states.
struct Automaton {
    std::vector<std::string> states;
    std::uint32_t initial = 0;
    std::vector<int> priority;
    std::vector<std::string> chromatic;  // sorted
    Flavor flavor = Flavor::SO1;
    std::vector<std::string> liftings;
    std::vector<std::vector<so1::Formula>> so;  // so[a][c], SO1 flavor
    std::vector<std::vector<ml1::Formula>> ml;  // ml[a][c], ML1 flavor

    std::size_t size() const { return states.size(); }
    std::size_t colors() const { return std::size_t{1} << chromatic.size(); }
    std::uint32_t state(const std::string& name) const;
    std::string delta_text(std::uint32_t a, std::size_t c) const;
    std::vector<std::string> color_vars(std::size_t c) const;
};

void validate_automaton(const Automaton& a);
// Checks every lifting used by a transition is in `lifts` with the right arity.
void check_liftings(const Automaton& a, const LiftingSet& lifts);

Automaton automaton_from_json(const Json& j);
Json automaton_to_json(const Automaton& a);
Automaton load_automaton(const std::string& path);
std::string automaton_to_dot(const Automaton& a);

// V†(s) ∩ P as a color of the automaton.
std::size_t color_of(const Automaton& a, const TModel& m, std::uint32_t s);

enum class GameMode { Full, Tree };

struct GameOptions {
    // Offer ∃ only ⊆-minimal admissible valuations; a smaller valuation only narrows ∀'s
    // choice, so the winner does not change.
    bool minimal = true;
    // Compute ∃'s move families of each BFS layer with OpenMP.
    bool parallel = false;
    bool labels = false;
    Caps caps;
};

// Positions (a, s) of ∃ and (s, U) of ∀, built from (a_I, start) by BFS.
struct AcceptanceGame {
    ParityGame game;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> eloise_pos;  // (a, s) per ∃ position, else (-1,-1)
};

AcceptanceGame build_acceptance_game(const Automaton& aut, const TModel& m, std::uint32_t start, GameMode mode,
                                     const LiftingSet& lifts, const GameOptions& opt = {});
bool accepts(const Automaton& aut, const TModel& m, std::uint32_t start, GameMode mode, const LiftingSet& lifts,
             const GameOptions& opt = {});
// Acceptance from every point, read off one game built from all (a_I, s).
std::vector<bool> accepting_points(const Automaton& aut, const TModel& m, GameMode mode, const LiftingSet& lifts,
                                   const GameOptions& opt = {});

}  // namespace cak
