#include "cak/automata.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "cak/moves.hpp"

namespace cak {

std::uint32_t Automaton::state(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw Error("unknown automaton state '" + name + "'");
    return static_cast<std::uint32_t>(it - states.begin());
}

std::string Automaton::delta_text(std::uint32_t a, std::size_t c) const {
    return flavor == Flavor::SO1 ? so1::print(so[a][c]) : ml1::print(ml[a][c]);
}

std::vector<std::string> Automaton::color_vars(std::size_t c) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < chromatic.size(); ++i)
        if (has(c, i)) out.push_back(chromatic[i]);
    return out;
}

namespace {

const std::vector<std::string>& free_of(const Automaton& a, std::uint32_t s, std::size_t c) {
    return a.flavor == Flavor::SO1 ? a.so[s][c]->free : a.ml[s][c]->free;
}

void collect_lifts(const so1::Formula& f, std::map<std::string, std::size_t>& out) {
    if (f->op == so1::Op::Lift) out[f->lifting] = f->vars.size();
    for (auto& k : f->kids) collect_lifts(k, out);
}

void collect_lifts(const ml1::Formula& f, std::map<std::string, std::size_t>& out) {
    if (f->op == ml1::Op::Lift) out[f->lifting] = f->args.size();
    for (auto& k : f->kids) collect_lifts(k, out);
}

std::string color_key(const Automaton& a, std::size_t c) {
    std::string s;
    for (auto& v : a.color_vars(c)) s += (s.empty() ? "" : ",") + v;
    return s;
}

}  // namespace

void validate_automaton(const Automaton& a) {
    if (a.states.empty()) throw Error("automaton has no states");
    if (a.initial >= a.size()) throw Error("initial state out of range");
    if (a.priority.size() != a.size()) throw Error("priority is not total on the states");
    for (int p : a.priority)
        if (p < 0) throw Error("negative priority");
    if (!std::is_sorted(a.chromatic.begin(), a.chromatic.end()) ||
        std::adjacent_find(a.chromatic.begin(), a.chromatic.end()) != a.chromatic.end())
        throw Error("chromatic variables must be sorted and distinct");
    if (a.chromatic.size() > 16) throw CapError("more than 16 chromatic variables");
    std::vector<std::string> sorted_states = a.states;
    std::sort(sorted_states.begin(), sorted_states.end());
    if (std::adjacent_find(sorted_states.begin(), sorted_states.end()) != sorted_states.end())
        throw Error("duplicate automaton state");
    auto table = a.flavor == Flavor::SO1 ? a.so.size() : a.ml.size();
    if (table != a.size()) throw Error("transition table is not total on the states");
    for (std::uint32_t s = 0; s < a.size(); ++s) {
        std::size_t row = a.flavor == Flavor::SO1 ? a.so[s].size() : a.ml[s].size();
        if (row != a.colors()) throw Error("transition of '" + a.states[s] + "' is not total on colors");
        for (std::size_t c = 0; c < a.colors(); ++c)
            for (auto& v : free_of(a, s, c))
                if (!std::binary_search(sorted_states.begin(), sorted_states.end(), v))
                    throw Error("transition (" + a.states[s] + ", {" + color_key(a, c) + "}) mentions '" + v +
                                "', which is not a state");
    }
}

void check_liftings(const Automaton& a, const LiftingSet& lifts) {
    std::map<std::string, std::size_t> used;
    for (std::uint32_t s = 0; s < a.size(); ++s)
        for (std::size_t c = 0; c < a.colors(); ++c)
            a.flavor == Flavor::SO1 ? collect_lifts(a.so[s][c], used) : collect_lifts(a.ml[s][c], used);
    for (auto& [name, arity] : used) {
        auto l = lifts.find(name);
        if (!l) throw Error("automaton uses unregistered lifting '" + name + "'");
        if (l->arity != arity)
            throw Error("lifting '" + name + "' expects " + std::to_string(l->arity) + " arguments");
    }
}

Automaton automaton_from_json(const Json& j) {
    Automaton a;
    if (!j.is_object()) throw Error("automaton must be a JSON object");
    a.states = j.at("states").get<std::vector<std::string>>();
    a.initial = a.state(j.at("initial").get<std::string>());
    a.priority.assign(a.size(), 0);
    for (auto& [k, v] : j.at("priority").items()) a.priority[a.state(k)] = v.get<int>();
    if (j.at("priority").size() != a.size()) throw Error("priority is not total on the states");
    a.chromatic = j.value("chromatic", std::vector<std::string>{});
    std::sort(a.chromatic.begin(), a.chromatic.end());
    std::string flavor = j.value("flavor", std::string("so1"));
    if (flavor == "ml1") a.flavor = Flavor::ML1;
    else if (flavor == "so1") a.flavor = Flavor::SO1;
    else throw Error("unknown flavor '" + flavor + "'");
    a.liftings = j.value("liftings", std::vector<std::string>{});
    if (a.chromatic.size() > 16) throw CapError("more than 16 chromatic variables");
    const auto& delta = j.at("delta");
    std::vector<std::vector<std::optional<std::string>>> text(a.size(), std::vector<std::optional<std::string>>(a.colors()));
    for (auto& [sname, row] : delta.items()) {
        auto s = a.state(sname);
        std::optional<std::string> fallback;
        for (auto& [key, f] : row.items()) {
            if (key == "*") {
                fallback = f.get<std::string>();
                continue;
            }
            std::size_t c = 0;
            std::stringstream in(key);
            std::string v;
            while (std::getline(in, v, ',')) {
                v.erase(std::remove_if(v.begin(), v.end(), [](unsigned char ch) { return std::isspace(ch); }), v.end());
                if (v.empty()) continue;
                auto it = std::lower_bound(a.chromatic.begin(), a.chromatic.end(), v);
                if (it == a.chromatic.end() || *it != v)
                    throw Error("color key '" + key + "' of state '" + sname + "' uses a non-chromatic variable");
                c |= bit(static_cast<std::size_t>(it - a.chromatic.begin()));
            }
            if (text[s][c]) throw Error("duplicate color key '" + key + "' for state '" + sname + "'");
            text[s][c] = f.get<std::string>();
        }
        for (auto& t : text[s])
            if (!t) t = fallback;
    }
    (a.flavor == Flavor::SO1 ? a.so.resize(a.size()) : a.ml.resize(a.size()));
    for (std::uint32_t s = 0; s < a.size(); ++s)
        for (std::size_t c = 0; c < a.colors(); ++c) {
            if (!text[s][c])
                throw Error("no transition for state '" + a.states[s] + "' and color {" + color_key(a, c) + "}");
            try {
                if (a.flavor == Flavor::SO1) a.so[s].push_back(so1::parse(*text[s][c]));
                else a.ml[s].push_back(ml1::parse(*text[s][c]));
            } catch (const SyntaxError& e) {
                throw Error("transition (" + a.states[s] + ", {" + color_key(a, c) + "}): " + e.what());
            }
        }
    validate_automaton(a);
    return a;
}

Json automaton_to_json(const Automaton& a) {
    Json j;
    j["states"] = a.states;
    j["initial"] = a.states[a.initial];
    Json pr = Json::object();
    for (std::uint32_t s = 0; s < a.size(); ++s) pr[a.states[s]] = a.priority[s];
    j["priority"] = pr;
    j["chromatic"] = a.chromatic;
    j["flavor"] = a.flavor == Flavor::SO1 ? "so1" : "ml1";
    j["liftings"] = a.liftings;
    Json d = Json::object();
    for (std::uint32_t s = 0; s < a.size(); ++s) {
        Json row = Json::object();
        for (std::size_t c = 0; c < a.colors(); ++c) row[color_key(a, c)] = a.delta_text(s, c);
        d[a.states[s]] = row;
    }
    j["delta"] = d;
    return j;
}

Automaton load_automaton(const std::string& path) { return automaton_from_json(load_json(path)); }

std::string automaton_to_dot(const Automaton& a) {
    auto esc = [](const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '"' || c == '\\') o += '\\';
            o += c;
        }
        return o;
    };
    std::ostringstream o;
    o << "digraph automaton {\n";
    for (std::uint32_t s = 0; s < a.size(); ++s)
        o << "  a" << s << " [label=\"" << esc(a.states[s]) << " / " << a.priority[s] << "\""
          << (s == a.initial ? ", peripheries=2" : "") << "];\n";
    for (std::uint32_t s = 0; s < a.size(); ++s) {
        std::map<std::uint32_t, std::vector<std::string>> edges;
        for (std::size_t c = 0; c < a.colors(); ++c)
            for (auto& v : free_of(a, s, c)) edges[a.state(v)].push_back("{" + color_key(a, c) + "}");
        for (auto& [t, cs] : edges) {
            std::string label;
            if (cs.size() != a.colors())
                for (auto& c : cs) label += (label.empty() ? "" : " ") + c;
            o << "  a" << s << " -> a" << t << " [label=\"" << esc(label) << "\"];\n";
        }
    }
    o << "}\n";
    return o.str();
}

std::size_t color_of(const Automaton& a, const TModel& m, std::uint32_t s) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.chromatic.size(); ++i)
        if (m.holds(a.chromatic[i], s)) c |= bit(i);
    return c;
}

namespace {

struct Local {
    std::vector<std::uint32_t> to_global;  // local index -> state
    std::shared_ptr<const TValue> value;   // owns what dense.source points to in tree mode
    DenseObject dense;
};

class GameBuilder {
public:
    GameBuilder(const Automaton& aut, const TModel& m, GameMode mode, const LiftingSet& lifts, const GameOptions& opt)
        : aut_(aut), m_(m), mode_(mode), opt_(opt), local_(m.size()) {
        validate_automaton(aut);
        validate_model(m);
        check_liftings(aut, lifts);
        if (mode == GameMode::Full) {
            if (aut.flavor != Flavor::ML1)
                throw Error("full-carrier games are defined for ML1 automata only; use tree mode");
            if (m.size() > 64) throw CapError("full-carrier game needs at most 64 states");
        } else {
            frame_ = m.frame ? *m.frame : canonical_frame(m);
            if (frame_.size() != m.size()) throw Error("frame is not total on the carrier");
        }
        progs_.resize(aut.size());
        for (std::uint32_t a = 0; a < aut.size(); ++a)
            for (std::size_t c = 0; c < aut.colors(); ++c)
                progs_[a].push_back(aut.flavor == Flavor::SO1 ? compile(aut.so[a][c], aut.states, lifts)
                                                               : compile(aut.ml[a][c], aut.states, lifts));
        eid_.assign(aut.size() * m.size(), -1);
    }

    AcceptanceGame build(const std::vector<std::uint32_t>& starts) {
        std::vector<std::uint32_t> frontier;
        for (auto s : starts) {
            if (s >= m_.size()) throw Error("point outside the model");
            frontier.push_back(eloise(aut_.initial, s, &frontier));
        }
        if (frontier.empty()) throw Error("no start point");
        out_.game.start = frontier[0];
        std::sort(frontier.begin(), frontier.end());
        frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
        while (!frontier.empty()) {
            for (auto v : frontier) prepare(out_.eloise_pos[v].second);
            std::vector<std::vector<Valuation>> fams(frontier.size());
            std::vector<std::exception_ptr> errors(frontier.size());
            const auto count = static_cast<std::int64_t>(frontier.size());
#pragma omp parallel for schedule(dynamic) if (opt_.parallel && count > 1)
            for (std::int64_t i = 0; i < count; ++i) {
                try {
                    fams[i] = moves(frontier[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
            std::vector<std::uint32_t> next;
            for (std::size_t i = 0; i < frontier.size(); ++i) {
                auto v = frontier[i];
                auto s = out_.eloise_pos[v].second;
                for (auto& u : fams[i]) {
                    auto w = abelard(s, u, next);
                    out_.game.moves[v].push_back(w);
                }
            }
            frontier = std::move(next);
        }
        return std::move(out_);
    }

private:
    void check_cap() {
        if (out_.game.size() > opt_.caps.game_positions)
            throw CapError("acceptance game exceeds " + std::to_string(opt_.caps.game_positions) + " positions");
    }

    std::uint32_t eloise(std::uint32_t a, std::uint32_t s, std::vector<std::uint32_t>* fresh = nullptr) {
        auto& id = eid_[static_cast<std::size_t>(a) * m_.size() + s];
        if (id >= 0) return static_cast<std::uint32_t>(id);
        std::string label;
        if (opt_.labels) label = "(" + aut_.states[a] + ", " + m_.carrier->atoms[s] + ")";
        id = out_.game.add(Player::Eloise, aut_.priority[a], std::move(label));
        out_.eloise_pos.emplace_back(a, s);
        check_cap();
        if (fresh) fresh->push_back(static_cast<std::uint32_t>(id));
        return static_cast<std::uint32_t>(id);
    }

    std::uint32_t abelard(std::uint32_t s, const Valuation& u, std::vector<std::uint32_t>& fresh) {
        auto key = std::make_pair(s, u);
        auto it = aid_.find(key);
        if (it != aid_.end()) return it->second;
        const Local& loc = *local_[s];
        std::string label;
        if (opt_.labels) {
            label = "(" + m_.carrier->atoms[s] + ", {";
            bool first = true;
            for (std::uint32_t b = 0; b < u.size(); ++b) {
                if (!u[b]) continue;
                label += (first ? "" : ", ") + aut_.states[b] + ":";
                first = false;
                std::string members;
                for (auto k : elements(u[b])) members += (members.empty() ? "" : ",") + m_.carrier->atoms[loc.to_global[k]];
                label += "{" + members + "}";
            }
            label += "})";
        }
        auto id = out_.game.add(Player::Abelard, 0, std::move(label));
        out_.eloise_pos.emplace_back(~0U, ~0U);
        check_cap();
        aid_.emplace(key, id);
        std::vector<std::uint32_t> succ;
        for (std::uint32_t b = 0; b < u.size(); ++b)
            for (auto k : elements(u[b])) succ.push_back(eloise(b, loc.to_global[k], &fresh));
        out_.game.moves[id] = std::move(succ);
        return id;
    }

    void prepare(std::uint32_t s) {
        if (local_[s]) return;
        Local loc;
        if (mode_ == GameMode::Full) {
            for (std::uint32_t t = 0; t < m_.size(); ++t) loc.to_global.push_back(t);
            loc.dense = make_dense(*m_.functor, m_.sigma[s], m_.size());
        } else {
            const ElemSet& r = frame_[s];
            if (r.size() > 64) throw CapError("a node has more than 64 frame successors");
            auto restricted = restrict_to_support(*m_.functor, m_.sigma[s], r);
            if (!restricted)
                throw Error("frame successors of '" + m_.carrier->atoms[s] + "' do not support its structure");
            loc.to_global.assign(r.begin(), r.end());
            loc.value = std::make_shared<const TValue>(std::move(*restricted));
            loc.dense = make_dense(*m_.functor, *loc.value, r.size());
        }
        local_[s] = std::move(loc);
    }

    std::vector<Valuation> moves(std::uint32_t v) const {
        auto [a, s] = out_.eloise_pos[v];
        const Program& p = progs_[a][color_of(aut_, m_, s)];
        const DenseObject& d = local_[s]->dense;
        check_quantifier_cap(p, local_[s]->to_global.size(), opt_.caps);
        MoveOptions mo;
        mo.minimal = opt_.minimal;
        return one_step_moves(p, d, mo, opt_.caps);
    }

    const Automaton& aut_;
    const TModel& m_;
    GameMode mode_;
    GameOptions opt_;
    std::vector<ElemSet> frame_;
    std::vector<std::vector<Program>> progs_;
    std::vector<std::optional<Local>> local_;
    std::vector<std::int64_t> eid_;
    std::map<std::pair<std::uint32_t, Valuation>, std::uint32_t> aid_;
    AcceptanceGame out_;
};

}  // namespace

AcceptanceGame build_acceptance_game(const Automaton& aut, const TModel& m, std::uint32_t start, GameMode mode,
                                     const LiftingSet& lifts, const GameOptions& opt) {
    GameBuilder b(aut, m, mode, lifts, opt);
    return b.build({start});
}

std::vector<bool> accepting_points(const Automaton& aut, const TModel& m, GameMode mode, const LiftingSet& lifts,
                                   const GameOptions& opt) {
    std::vector<std::uint32_t> all(m.size());
    for (std::uint32_t s = 0; s < m.size(); ++s) all[s] = s;
    GameBuilder b(aut, m, mode, lifts, opt);
    auto g = b.build(all);
    auto sol = solve_parity(g.game);
    std::vector<bool> out(m.size(), false);
    for (std::uint32_t v = 0; v < g.eloise_pos.size(); ++v)
        if (g.eloise_pos[v].first == aut.initial) out[g.eloise_pos[v].second] = sol.eloise_wins(v);
    return out;
}

bool accepts(const Automaton& aut, const TModel& m, std::uint32_t start, GameMode mode, const LiftingSet& lifts,
             const GameOptions& opt) {
    auto g = build_acceptance_game(aut, m, start, mode, lifts, opt);
    return solve_parity(g.game).eloise_wins(g.game.start);
}

}  // namespace cak
