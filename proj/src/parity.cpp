#include "cak/parity.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace cak {

std::uint32_t ParityGame::add(Player p, int prio, std::string label) {
    owner.push_back(p);
    priority.push_back(prio);
    moves.emplace_back();
    if (!label.empty() || !labels.empty()) {
        labels.resize(owner.size() - 1);
        labels.push_back(std::move(label));
    }
    return static_cast<std::uint32_t>(owner.size() - 1);
}

void validate_game(const ParityGame& g) {
    if (g.priority.size() != g.size() || g.moves.size() != g.size()) throw Error("game arrays disagree in length");
    if (g.size() && g.start >= g.size()) throw Error("game start outside the arena");
    for (auto& m : g.moves)
        for (auto t : m)
            if (t >= g.size()) throw Error("game move leaves the arena");
    for (int p : g.priority)
        if (p < 0) throw Error("negative priority");
}

namespace {

using Set = std::vector<char>;

struct Zielonka {
    std::size_t n;
    std::vector<Player> owner;
    std::vector<int> prio;
    std::vector<std::vector<std::uint32_t>> succ, pred;
    std::vector<std::int64_t> strat;

    // Attractor of `target` for `pl` inside `in`; target is extended in place.
    void attract(const Set& in, Set& target, Player pl) {
        std::vector<int> count(n, 0);
        std::deque<std::uint32_t> queue;
        for (std::size_t v = 0; v < n; ++v) {
            if (!in[v]) continue;
            if (target[v]) queue.push_back(static_cast<std::uint32_t>(v));
            for (auto w : succ[v]) count[v] += in[w] ? 1 : 0;
        }
        while (!queue.empty()) {
            auto x = queue.front();
            queue.pop_front();
            for (auto v : pred[x]) {
                if (!in[v] || target[v]) continue;
                if (owner[v] == pl) {
                    target[v] = 1;
                    strat[v] = x;
                    queue.push_back(v);
                } else if (--count[v] == 0) {
                    target[v] = 1;
                    queue.push_back(v);
                }
            }
        }
    }

    // Returns ∃'s region; ∀'s is in \ result.
    Set solve(const Set& in) {
        int d = -1;
        for (std::size_t v = 0; v < n; ++v)
            if (in[v]) d = std::max(d, prio[v]);
        Set w0(n, 0);
        if (d < 0) return w0;
        const Player p = d % 2 == 0 ? Player::Eloise : Player::Abelard;
        Set a(n, 0);
        for (std::size_t v = 0; v < n; ++v)
            if (in[v] && prio[v] == d) a[v] = 1;
        Set top = a;
        attract(in, a, p);
        Set rest(n, 0);
        for (std::size_t v = 0; v < n; ++v) rest[v] = in[v] && !a[v];
        Set sub0 = solve(rest);
        Set sub_opp(n, 0);
        bool opp_empty = true;
        for (std::size_t v = 0; v < n; ++v) {
            bool opp = rest[v] && (p == Player::Eloise ? !sub0[v] : sub0[v]);
            sub_opp[v] = opp;
            opp_empty = opp_empty && !opp;
        }
        if (opp_empty) {
            for (std::size_t v = 0; v < n; ++v) {
                if (!in[v] || !top[v] || owner[v] != p) continue;
                for (auto w : succ[v])
                    if (in[w]) {
                        strat[v] = w;
                        break;
                    }
            }
            if (p == Player::Eloise) return in;
            return w0;
        }
        Set b = sub_opp;
        attract(in, b, opponent(p));
        Set rest2(n, 0);
        for (std::size_t v = 0; v < n; ++v) rest2[v] = in[v] && !b[v];
        Set sub2 = solve(rest2);
        for (std::size_t v = 0; v < n; ++v) {
            if (!in[v]) continue;
            w0[v] = b[v] ? (opponent(p) == Player::Eloise) : sub2[v];
        }
        return w0;
    }
};

}  // namespace

SolveResult solve_parity(const ParityGame& g) {
    validate_game(g);
    const std::size_t n = g.size();
    // Two sinks make the arena total: a dead end moves to the sink its owner loses in.
    Zielonka z;
    z.n = n + 2;
    z.owner = g.owner;
    z.prio = g.priority;
    z.succ = g.moves;
    const auto win_e = static_cast<std::uint32_t>(n), win_a = static_cast<std::uint32_t>(n + 1);
    z.owner.push_back(Player::Eloise);
    z.owner.push_back(Player::Eloise);
    z.prio.push_back(0);
    z.prio.push_back(1);
    z.succ.push_back({win_e});
    z.succ.push_back({win_a});
    for (std::size_t v = 0; v < n; ++v)
        if (z.succ[v].empty()) z.succ[v].push_back(g.owner[v] == Player::Eloise ? win_a : win_e);
    z.pred.assign(z.n, {});
    for (std::size_t v = 0; v < z.n; ++v)
        for (auto w : z.succ[v]) z.pred[w].push_back(static_cast<std::uint32_t>(v));
    z.strat.assign(z.n, -1);
    Set w0 = z.solve(Set(z.n, 1));
    SolveResult r;
    r.winner.resize(n);
    r.strategy.assign(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
        r.winner[v] = w0[v] ? Player::Eloise : Player::Abelard;
        if (g.owner[v] == r.winner[v] && !g.moves[v].empty()) r.strategy[v] = z.strat[v];
    }
    return r;
}

namespace {

// Winner of the unique play from v under a full strategy profile.
Player play_winner(const ParityGame& g, const std::vector<std::int64_t>& choice, std::uint32_t v) {
    std::vector<int> seen(g.size(), -1);
    std::vector<std::uint32_t> path;
    while (seen[v] < 0) {
        if (g.moves[v].empty()) return opponent(g.owner[v]);
        seen[v] = static_cast<int>(path.size());
        path.push_back(v);
        v = static_cast<std::uint32_t>(choice[v]);
    }
    int top = -1;
    for (std::size_t i = static_cast<std::size_t>(seen[v]); i < path.size(); ++i) top = std::max(top, g.priority[path[i]]);
    return top % 2 == 0 ? Player::Eloise : Player::Abelard;
}

}  // namespace

SolveResult solve_parity_bruteforce(const ParityGame& g, std::uint64_t max_pairs) {
    validate_game(g);
    const std::size_t n = g.size();
    std::vector<std::uint32_t> mine[2];
    std::uint64_t pairs = 1;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (g.moves[v].empty()) continue;
        mine[static_cast<int>(g.owner[v])].push_back(v);
        pairs *= g.moves[v].size();
        if (pairs > max_pairs) throw CapError("strategy-pair enumeration exceeds cap");
    }
    std::vector<std::int64_t> choice(n, -1);
    // Odometer over one player's strategies; fn returns false to stop.
    auto each = [&](const std::vector<std::uint32_t>& vs, const std::function<bool()>& fn) {
        std::vector<std::size_t> idx(vs.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < vs.size(); ++i) choice[vs[i]] = g.moves[vs[i]][idx[i]];
            if (!fn()) return;
            std::size_t i = 0;
            while (i < vs.size() && ++idx[i] == g.moves[vs[i]].size()) idx[i++] = 0;
            if (i == vs.size()) return;
        }
    };
    SolveResult r;
    r.winner.assign(n, Player::Abelard);
    r.strategy.assign(n, -1);
    std::vector<char> done(n, 0);
    each(mine[0], [&] {
        // positions from which this ∃ strategy beats every ∀ strategy
        std::vector<char> good(n, 1);
        each(mine[1], [&] {
            for (std::uint32_t v = 0; v < n; ++v)
                if (good[v] && play_winner(g, choice, v) != Player::Eloise) good[v] = 0;
            return true;
        });
        for (std::uint32_t v = 0; v < n; ++v)
            if (good[v] && !done[v]) {
                done[v] = 1;
                r.winner[v] = Player::Eloise;
            }
        return true;
    });
    // Strategies are not reconstructed; callers compare regions.
    return r;
}

bool strategy_sound(const ParityGame& g, const SolveResult& r) {
    const std::size_t n = g.size();
    for (Player pl : {Player::Eloise, Player::Abelard}) {
        // restricted successor relation on pl's region
        std::vector<std::vector<std::uint32_t>> succ(n);
        std::vector<char> in(n, 0);
        for (std::uint32_t v = 0; v < n; ++v) in[v] = r.winner[v] == pl;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (!in[v]) continue;
            if (g.owner[v] == pl) {
                if (g.moves[v].empty()) return false;
                if (r.strategy[v] < 0) return false;
                auto w = static_cast<std::uint32_t>(r.strategy[v]);
                if (std::find(g.moves[v].begin(), g.moves[v].end(), w) == g.moves[v].end()) return false;
                succ[v] = {w};
            } else {
                succ[v] = g.moves[v];
            }
            for (auto w : succ[v])
                if (!in[w]) return false;
        }
        // no cycle whose top priority favours the opponent
        for (std::uint32_t v = 0; v < n; ++v) {
            if (!in[v] || (g.priority[v] % 2 == 0) == (pl == Player::Eloise)) continue;
            const int d = g.priority[v];
            // v lies on a cycle through positions of priority ≤ d?
            std::vector<char> seen(n, 0);
            std::vector<std::uint32_t> stack{v};
            bool cycle = false;
            while (!stack.empty() && !cycle) {
                auto x = stack.back();
                stack.pop_back();
                for (auto w : succ[x]) {
                    if (g.priority[w] > d) continue;
                    if (w == v) {
                        cycle = true;
                        break;
                    }
                    if (!seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
            if (cycle) return false;
        }
    }
    return true;
}

std::string game_to_dot(const ParityGame& g) {
    std::ostringstream o;
    o << "digraph game {\n";
    for (std::size_t v = 0; v < g.size(); ++v) {
        std::string label = v < g.labels.size() && !g.labels[v].empty() ? g.labels[v] : std::to_string(v);
        std::string esc;
        for (char c : label) {
            if (c == '"' || c == '\\') esc += '\\';
            esc += c;
        }
        o << "  v" << v << " [label=\"" << esc << " / " << g.priority[v] << "\", shape="
          << (g.owner[v] == Player::Eloise ? "diamond" : "box") << (v == g.start ? ", peripheries=2" : "") << "];\n";
    }
    for (std::size_t v = 0; v < g.size(); ++v)
        for (auto w : g.moves[v]) o << "  v" << v << " -> v" << w << ";\n";
    o << "}\n";
    return o.str();
}

ParityGame random_parity_game(std::mt19937_64& rng, std::size_t n, std::size_t max_out, int max_priority) {
    ParityGame g;
    for (std::size_t v = 0; v < n; ++v)
        g.add(rng() % 2 ? Player::Eloise : Player::Abelard, static_cast<int>(rng() % (max_priority + 1)));
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t k = rng() % (max_out + 1);
        for (std::size_t i = 0; i < k; ++i) {
            auto w = static_cast<std::uint32_t>(rng() % n);
            if (std::find(g.moves[v].begin(), g.moves[v].end(), w) == g.moves[v].end()) g.moves[v].push_back(w);
        }
    }
    return g;
}

}  // namespace cak
