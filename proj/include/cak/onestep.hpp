#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cak/lifting.hpp"

namespace cak {

struct OneStepModel {
    Functor functor;
    std::size_t n = 0;
    TValue alpha;
    std::map<std::string, Mask> V;
};

namespace ml1 {

enum class TermOp { Var, Or, And };
struct Term {
    TermOp op = TermOp::Var;
    std::string var;
    std::vector<Term> kids;
    bool operator==(const Term& o) const { return op == o.op && var == o.var && kids == o.kids; }
};
Term var(std::string v);
Term term_or(Term a, Term b);
Term term_and(Term a, Term b);

enum class Op { Bot, Top, Lift, Or, And };
struct Node;
using Formula = std::shared_ptr<const Node>;
struct Node {
    Op op;
    std::string lifting;
    std::vector<Term> args;
    std::vector<Formula> kids;
    std::vector<std::string> free;  // sorted
};

Formula bot();
Formula top();
Formula lift(std::string name, std::vector<Term> args);
Formula make_or(Formula a, Formula b);
Formula make_and(Formula a, Formula b);
Formula make_or(const std::vector<Formula>& fs);   // bot when empty
Formula make_and(const std::vector<Formula>& fs);  // top when empty

bool equal(const Formula& a, const Formula& b);
std::string print(const Formula& f);
Formula parse(const std::string& text);
bool eval(const Formula& f, const OneStepModel& m, const LiftingSet& lifts);
// λ ↦ λ^d (registered dual name), ⊥↔⊤, ∨↔∧, lattice terms De Morgan-swapped.
Formula dual(const Formula& f, const LiftingSet& lifts);
Formula rename(const Formula& f, const std::map<std::string, std::string>& ren);

}  // namespace ml1

namespace so1 {

enum class Op { Bot, Top, Sub, Lift, Not, Or, And, Exists, Dual, Disjoint, UnionEq };
struct Node;
using Formula = std::shared_ptr<const Node>;
struct Node {
    Op op;
    std::string a, b;               // Sub: a ⊆ b; Exists: bound a; UnionEq: a = ⋃ vars
    std::string lifting;
    std::vector<std::string> vars;  // Lift arguments, Disjoint/UnionEq variables
    std::vector<Formula> kids;
    std::vector<std::string> free;  // sorted
    int depth = 0;                  // quantifier depth
};

Formula bot();
Formula top();
Formula sub(std::string a, std::string b);
Formula lift(std::string name, std::vector<std::string> args);
Formula make_not(Formula f);
Formula make_or(Formula a, Formula b);
Formula make_and(Formula a, Formula b);
Formula make_or(const std::vector<Formula>& fs);
Formula make_and(const std::vector<Formula>& fs);
Formula make_exists(std::string var, Formula body);
Formula make_forall(std::string var, Formula body);
Formula make_dual(Formula f);
// Abbreviations with fixed core expansions (see expand_abbreviations).
Formula make_disjoint(std::vector<std::string> vars);
Formula make_union_eq(std::string z, std::vector<std::string> vars);

bool equal(const Formula& a, const Formula& b);
int recompute_depth(const Formula& f);
std::string print(const Formula& f);
Formula parse(const std::string& text);
bool eval(const Formula& f, const OneStepModel& m, const LiftingSet& lifts, const Caps& caps = {});
Formula dual(const Formula& f);
// Capture-avoiding renaming of free variables.
Formula rename(const Formula& f, const std::map<std::string, std::string>& ren);
// Rewrites disjoint(...) and unioneq(...) into the core grammar.
Formula expand_abbreviations(const Formula& f);
// Every bound variable of f, in order of appearance.
std::vector<std::string> bound_vars(const Formula& f);
// Whether f is ML¹-expressible: quantifier-free, no ⊆, no negation, no dual.
bool is_modal(const Formula& f);
// Syntactic special-basic shape: ⊥/⊤/closed, a disjunction of such, or disjoint(W) ∧ ψ with free(ψ) ⊆ W.
bool syntactically_special_basic(const Formula& f);

}  // namespace so1

// Compiled form shared by both flavours. Variables live in slots; slot i < num_free is the
// i-th entry of the free-variable order handed to compile(); bound variables get private slots.
enum class POp { Bot, Top, Sub, LiftVars, LiftTerms, Not, Or, And, Exists, Dual, Disjoint, UnionEq, TVar, TOr, TAnd };

enum Polarity : std::uint8_t { PolNone = 0, PolPos = 1, PolNeg = 2, PolMixed = 3 };

struct PNode {
    POp op = POp::Bot;
    int x = -1;  // Sub left / Exists bound slot / UnionEq target / TVar slot
    int y = -1;  // Sub right
    const Lifting* lift = nullptr;
    std::vector<int> slots;  // lift args, disjoint/unioneq members
    std::vector<int> kids;
    std::vector<int> free;                 // free slots, sorted
    std::vector<std::uint8_t> polarity;    // per free slot (parallel to free)
    bool monotone = false;                 // upward closed in all free slots
    bool antitone = false;                 // downward closed in all free slots
};

struct Program {
    std::vector<PNode> nodes;
    int root = -1;
    std::size_t num_free = 0;
    std::size_t num_slots = 0;
    std::vector<std::string> slot_names;
    int depth = 0;
    std::vector<LiftingPtr> lifts;  // keeps evaluators alive
};

Program compile(const so1::Formula& f, const std::vector<std::string>& free_order, const LiftingSet& lifts);
Program compile(const ml1::Formula& f, const std::vector<std::string>& free_order, const LiftingSet& lifts);

// env must have num_slots entries; bound slots are scratch.
bool run(const Program& p, int node, const DenseObject& alpha, std::vector<Mask>& env);
Mask run_term(const Program& p, int node, const std::vector<Mask>& env);
inline bool run(const Program& p, const DenseObject& alpha, std::vector<Mask>& env) {
    return run(p, p.root, alpha, env);
}
void check_quantifier_cap(const Program& p, std::size_t n, const Caps& caps);

// Generalized lifting: α ∈ φ_X(V) iff (X, α, V) ⊨₁ φ, arguments bound to vars in order.
LiftingPtr generalized_lifting(const std::string& name, const so1::Formula& phi, const std::vector<std::string>& vars,
                               const Functor& f, const LiftingSet& lifts, const Caps& caps = {});

struct OneStepWitness {
    std::size_t n = 0;
    TValue alpha;
    std::map<std::string, Mask> V;
    std::string detail;
};

struct BruteForceResult {
    bool holds = true;
    std::optional<OneStepWitness> witness;
};

BruteForceResult is_monotone_bruteforce(const so1::Formula& f, const Functor& functor, const LiftingSet& lifts,
                                        int carrier_cap, const Caps& caps = {});
BruteForceResult is_special_basic_bruteforce(const so1::Formula& f, const Functor& functor,
                                             const LiftingSet& lifts, int carrier_cap, const Caps& caps = {});

// ≡^k between one-step models over the same variables; atoms are ⊆ between variables and every
// lifting in lifts applied to variables.
bool ef_equiv(const OneStepModel& m1, const OneStepModel& m2, int k, const LiftingSet& lifts, const Caps& caps = {});

}  // namespace cak
