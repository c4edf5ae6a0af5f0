#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cak/lifting.hpp"
#include "cak/model.hpp"

namespace cak {

using StateSet = std::vector<bool>;

// Membership σ(s) ∈ λ_S(args) for a state of a finite model. Carriers above 64 states are
// handled by restricting σ(s) to its base, which is exact for natural liftings.
class LiftEvaluator {
public:
    LiftEvaluator(const TModel& m, const LiftingSet& lifts);
    bool holds(const std::string& lifting, std::uint32_t s, const std::vector<const StateSet*>& args);
    const Lifting& get(const std::string& name, std::size_t arity) const;

private:
    const TModel& m_;
    const LiftingSet& lifts_;
    std::vector<DenseObject> dense_;
    std::vector<ElemSet> base_;
    std::vector<TValue> restricted_;
    bool large_;
};

namespace mu {

// Global and local modalities share one grammar; [∀] and [∃] are written global_all / global_some.
enum class Op { Prop, NegProp, Bot, Top, Lift, Or, And, Mu, Nu, GAll, GSome };
struct Node;
using Formula = std::shared_ptr<const Node>;
struct Node {
    Op op;
    std::string var;      // Prop/NegProp name or bound variable of Mu/Nu
    std::string lifting;  // Lift
    std::vector<Formula> kids;
    std::vector<std::string> free;  // sorted free propositions
};

Formula prop(std::string p);
Formula neg_prop(std::string p);
Formula bot();
Formula top();
Formula lift(std::string name, std::vector<Formula> args);
Formula make_or(Formula a, Formula b);
Formula make_and(Formula a, Formula b);
Formula make_or(const std::vector<Formula>& fs);
Formula make_and(const std::vector<Formula>& fs);
Formula mu(std::string var, Formula body);
Formula nu(std::string var, Formula body);
Formula global_all(Formula body);
Formula global_some(Formula body);

bool equal(const Formula& a, const Formula& b);
std::string print(const Formula& f);
Formula parse(const std::string& text);
// Throws if a fixpoint variable occurs negated inside its own scope.
void validate(const Formula& f);
// Negation normal form of ¬f; liftings are replaced by their registered duals.
Formula negate(const Formula& f, const LiftingSet& lifts);
// Replaces free occurrences of p by g (g must not capture).
Formula substitute(const Formula& f, const std::string& p, const Formula& g);
bool has_global(const Formula& f);
std::size_t size(const Formula& f);

StateSet eval_set(const Formula& f, const TModel& m, const LiftingSet& lifts);
bool eval_mu(const Formula& f, const TModel& m, std::uint32_t s, const LiftingSet& lifts);

}  // namespace mu

namespace mso {

enum class Op { Bot, Top, Sr, Sub, Lift, Not, Or, And, Exists, Em, Sing, Eq };
struct Node;
using Formula = std::shared_ptr<const Node>;
struct Node {
    Op op;
    std::string a, b;              // Sr/Em/Sing: a; Sub/Eq: a ⊆ b; Exists: bound a; Lift: point variable a
    std::string lifting;
    std::vector<std::string> args;  // Lift: q₁..qₙ
    std::vector<Formula> kids;
    std::vector<std::string> free;  // sorted
    int depth = 0;                  // quantifier depth
};

Formula bot();
Formula top();
Formula sr(std::string p);
Formula sub(std::string p, std::string q);
Formula lift(std::string name, std::string p, std::vector<std::string> qs);
Formula make_not(Formula f);
Formula make_or(Formula a, Formula b);
Formula make_and(Formula a, Formula b);
Formula make_or(const std::vector<Formula>& fs);
Formula make_and(const std::vector<Formula>& fs);
Formula implies(Formula a, Formula b);
Formula make_exists(std::string p, Formula body);
Formula make_forall(std::string p, Formula body);
Formula em(std::string p);
Formula sing(std::string p);
Formula eq(std::string p, std::string q);

bool equal(const Formula& a, const Formula& b);
std::string print(const Formula& f);
Formula parse(const std::string& text);
// Rewrites em/sing/eq into the core grammar with the standard abbreviations.
Formula expand_macros(const Formula& f);
bool eval_mso(const Formula& f, const TModel& m, std::uint32_t s, const LiftingSet& lifts, const Caps& caps = {});

}  // namespace mso

// The translation (·)^⋄ from μML_Λ to MSO_Λ.
mso::Formula mu_to_mso(const mu::Formula& f);

}  // namespace cak
