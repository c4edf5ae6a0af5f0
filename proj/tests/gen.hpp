#pragma once

// Random formula generators and a direct AST evaluator used as a second opinion.

#include <random>

#include "cak/onestep.hpp"

namespace gen {

inline std::string pick(std::mt19937_64& rng, const std::vector<std::string>& v) { return v[rng() % v.size()]; }

inline cak::so1::Formula so1(std::mt19937_64& rng, int size, int quant, const std::vector<std::string>& vars,
                             const std::vector<std::string>& lifts, int* counter) {
    using namespace cak::so1;
    int roll = static_cast<int>(rng() % 10);
    if (size <= 0 || roll < 2) {
        switch (rng() % 5) {
            case 0: return rng() % 2 ? top() : bot();
            case 1:
            case 2: return sub(pick(rng, vars), pick(rng, vars));
            default: return lift(pick(rng, lifts), {pick(rng, vars)});
        }
    }
    switch (roll) {
        case 2: return make_not(so1(rng, size - 1, quant, vars, lifts, counter));
        case 3:
        case 4: return make_or(so1(rng, size / 2, quant, vars, lifts, counter), so1(rng, size / 2, quant, vars, lifts, counter));
        case 5:
        case 6: return make_and(so1(rng, size / 2, quant, vars, lifts, counter), so1(rng, size / 2, quant, vars, lifts, counter));
        case 7:
            if (quant > 0) {
                std::string z = "Z" + std::to_string((*counter)++);
                auto v = vars;
                v.push_back(z);
                auto body = so1(rng, size - 1, quant - 1, v, lifts, counter);
                return rng() % 2 ? make_exists(z, body) : make_forall(z, body);
            }
            return sub(pick(rng, vars), pick(rng, vars));
        case 8: return make_dual(so1(rng, size - 1, quant, vars, lifts, counter));
        default: {
            std::vector<std::string> w{pick(rng, vars), pick(rng, vars)};
            if (rng() % 2) return make_disjoint(w);
            return make_union_eq(pick(rng, vars), w);
        }
    }
}

inline cak::so1::Formula so1(std::mt19937_64& rng, int size, int quant, const std::vector<std::string>& vars,
                             const std::vector<std::string>& lifts) {
    int counter = 0;
    return so1(rng, size, quant, vars, lifts, &counter);
}

inline cak::ml1::Term term(std::mt19937_64& rng, int size, const std::vector<std::string>& vars) {
    using namespace cak::ml1;
    if (size <= 0 || rng() % 3 == 0) return var(pick(rng, vars));
    return rng() % 2 ? term_or(term(rng, size / 2, vars), term(rng, size / 2, vars))
                     : term_and(term(rng, size / 2, vars), term(rng, size / 2, vars));
}

inline cak::ml1::Formula ml1(std::mt19937_64& rng, int size, const std::vector<std::string>& vars,
                             const std::vector<std::string>& lifts) {
    using namespace cak::ml1;
    int roll = static_cast<int>(rng() % 6);
    if (size <= 0 || roll < 2) {
        if (rng() % 5 == 0) return rng() % 2 ? top() : bot();
        return lift(pick(rng, lifts), {term(rng, 2, vars)});
    }
    if (roll < 4) return make_or(ml1(rng, size / 2, vars, lifts), ml1(rng, size / 2, vars, lifts));
    return make_and(ml1(rng, size / 2, vars, lifts), ml1(rng, size / 2, vars, lifts));
}

// Straight recursion over the AST with an explicit environment; shares only the lifting evaluators.
inline bool eval_so1(const cak::so1::Formula& f, const cak::DenseObject& d, std::map<std::string, cak::Mask> env,
                     const cak::LiftingSet& lifts) {
    using namespace cak;
    using so1::Op;
    switch (f->op) {
        case Op::Bot: return false;
        case Op::Top: return true;
        case Op::Sub: return subset(env.at(f->a), env.at(f->b));
        case Op::Lift: {
            std::vector<Mask> a;
            for (auto& v : f->vars) a.push_back(env.at(v));
            return lifts.get(f->lifting)->eval(d, a);
        }
        case Op::Not: return !eval_so1(f->kids[0], d, env, lifts);
        case Op::Or: return eval_so1(f->kids[0], d, env, lifts) || eval_so1(f->kids[1], d, env, lifts);
        case Op::And: return eval_so1(f->kids[0], d, env, lifts) && eval_so1(f->kids[1], d, env, lifts);
        case Op::Exists:
            for (Mask s = 0; s <= d.full; ++s) {
                if ((s & ~d.full) != 0) continue;
                env[f->a] = s;
                if (eval_so1(f->kids[0], d, env, lifts)) return true;
            }
            return false;
        case Op::Dual: {
            for (auto& v : f->kids[0]->free) env[v] = d.full & ~env.at(v);
            return !eval_so1(f->kids[0], d, env, lifts);
        }
        case Op::Disjoint:
            for (std::size_t i = 0; i < f->vars.size(); ++i)
                for (std::size_t j = i + 1; j < f->vars.size(); ++j)
                    if (f->vars[i] != f->vars[j] && (env.at(f->vars[i]) & env.at(f->vars[j]))) return false;
                    else if (f->vars[i] == f->vars[j] && env.at(f->vars[i])) return false;
            return true;
        case Op::UnionEq: {
            Mask u = 0;
            for (auto& v : f->vars) u |= env.at(v);
            return u == env.at(f->a);
        }
    }
    return false;
}

}  // namespace gen
