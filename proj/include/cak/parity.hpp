#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cak/error.hpp"

namespace cak {

enum class Player : std::uint8_t { Eloise = 0, Abelard = 1 };  // ∃, ∀

inline Player opponent(Player p) { return p == Player::Eloise ? Player::Abelard : Player::Eloise; }

// Max-parity game: a play is won by ∃ iff the greatest priority seen infinitely often is even.
// A player with no move loses.
struct ParityGame {
    std::vector<Player> owner;
    std::vector<int> priority;
    std::vector<std::vector<std::uint32_t>> moves;
    std::vector<std::string> labels;  // optional, for DOT output
    std::uint32_t start = 0;

    std::size_t size() const { return owner.size(); }
    std::uint32_t add(Player p, int prio, std::string label = {});
    bool operator==(const ParityGame& o) const = default;
};

struct SolveResult {
    std::vector<Player> winner;
    // Positional strategy of the winner at positions it owns; -1 elsewhere and at dead ends.
    std::vector<std::int64_t> strategy;

    bool eloise_wins(std::uint32_t v) const { return winner[v] == Player::Eloise; }
};

void validate_game(const ParityGame& g);
SolveResult solve_parity(const ParityGame& g);
// Enumerates every pair of positional strategies; CapError above `max_pairs` pairs.
SolveResult solve_parity_bruteforce(const ParityGame& g, std::uint64_t max_pairs = 5000000);
// Every play consistent with the winner's strategy from its region stays in the region and is won.
bool strategy_sound(const ParityGame& g, const SolveResult& r);
std::string game_to_dot(const ParityGame& g);

// Random game with n positions, out-degree in [0, max_out], priorities in [0, max_priority].
ParityGame random_parity_game(std::mt19937_64& rng, std::size_t n, std::size_t max_out, int max_priority);

}  // namespace cak
