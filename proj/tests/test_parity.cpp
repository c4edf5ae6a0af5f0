#include <random>

#include "doctest.h"

#include "cak/parity.hpp"

using namespace cak;

TEST_CASE("parity: stuck player loses") {
    ParityGame g;
    g.add(Player::Eloise, 0);
    g.add(Player::Abelard, 1);
    auto r = solve_parity(g);
    CHECK(r.winner[0] == Player::Abelard);
    CHECK(r.winner[1] == Player::Eloise);
    CHECK(r.strategy[0] == -1);
    CHECK(strategy_sound(g, r));
}

TEST_CASE("parity: self loops decided by parity") {
    for (auto owner : {Player::Eloise, Player::Abelard})
        for (int p : {0, 1, 2, 3}) {
            ParityGame g;
            g.add(owner, p);
            g.moves[0] = {0};
            auto r = solve_parity(g);
            CHECK((r.winner[0] == Player::Eloise) == (p % 2 == 0));
        }
}

TEST_CASE("parity: hand-solved example") {
    // 0 (∃, 1) -> 1 | 2 ; 1 (∀, 2) -> 0 ; 2 (∀, 3) -> 2 | 0
    ParityGame g;
    g.add(Player::Eloise, 1);
    g.add(Player::Abelard, 2);
    g.add(Player::Abelard, 3);
    g.moves = {{1, 2}, {0}, {2, 0}};
    auto r = solve_parity(g);
    // ∃ cycles through 1 and sees 2 forever; entering 2 lets ∀ loop on 3
    CHECK(r.winner == std::vector<Player>{Player::Eloise, Player::Eloise, Player::Abelard});
    CHECK(r.strategy[0] == 1);
    CHECK(strategy_sound(g, r));
}

TEST_CASE("parity: Zielonka agrees with strategy enumeration") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 300; ++i) {
        auto g = random_parity_game(rng, 1 + rng() % 9, 3, 4);
        auto r = solve_parity(g);
        auto b = solve_parity_bruteforce(g);
        CHECK(r.winner == b.winner);
        CHECK(strategy_sound(g, r));
    }
}

TEST_CASE("parity: larger games stay consistent") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 40; ++i) {
        auto g = random_parity_game(rng, 200 + rng() % 300, 4, 7);
        auto r = solve_parity(g);
        CHECK(strategy_sound(g, r));
    }
}

TEST_CASE("parity: soundness checker rejects a bad strategy") {
    ParityGame g;
    g.add(Player::Eloise, 1);
    g.add(Player::Eloise, 2);
    g.moves = {{0, 1}, {1}};
    auto r = solve_parity(g);
    CHECK(r.winner[0] == Player::Eloise);
    CHECK(r.strategy[0] == 1);
    r.strategy[0] = 0;
    CHECK_FALSE(strategy_sound(g, r));
}

TEST_CASE("parity: validation and DOT") {
    ParityGame g;
    g.add(Player::Eloise, 0, "a");
    g.moves[0] = {3};
    CHECK_THROWS_AS(validate_game(g), Error);
    g.moves[0] = {0};
    auto dot = game_to_dot(g);
    CHECK(dot.find("v0 -> v0") != std::string::npos);
    CHECK(dot.find("label=\"a / 0\"") != std::string::npos);
}
