#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cak/functor.hpp"

namespace cak {

struct Lifting {
    std::string name;
    std::size_t arity = 1;
    Functor functor;  // the functor the evaluator is written for
    std::function<bool(const DenseObject&, std::span<const Mask>)> eval;
    // Elements of X whose membership in the arguments can matter; defaults to X.
    std::function<Mask(const DenseObject&)> relevant;
    std::string dual_name;
    bool monotone = true;
    bool dual = false;  // evaluates the Boolean dual of another lifting
    std::optional<std::vector<TValue>> yoneda_table;
};
using LiftingPtr = std::shared_ptr<const Lifting>;

class LiftingSet {
public:
    void add(LiftingPtr l);
    LiftingPtr find(const std::string& name) const;
    LiftingPtr get(const std::string& name) const;  // throws on unknown name
    std::vector<std::string> names() const;
    bool empty() const { return by_name_.empty(); }

private:
    std::map<std::string, LiftingPtr> by_name_;
};

// box/dia for every functor; E/Ed for monstar; covers and geK/geKd (K = 2..4) for bag.
LiftingSet builtin_liftings(const Functor& f);

// Boolean dual: λ^d_X(Z⃗) = T X \ λ_X(X∖Z⃗).
LiftingPtr dual_lifting(const LiftingPtr& l, const std::string& name = "");

bool lifting_member(const Lifting& l, const TObject& alpha, const std::vector<ElemSet>& args);
bool lifting_member(const Lifting& l, const DenseObject& alpha, std::span<const Mask> args);

struct YonedaReport {
    LiftingPtr lifting;
    bool monotone = true;
    std::string witness;  // a table entry whose enlargement leaves the table
};

// table: values of F over the carrier 2^n, element v encoding membership bits v_i = [x ∈ Z_i].
YonedaReport yoneda_lifting(const Functor& f, std::size_t n, std::vector<TValue> table,
                            const std::string& name = "yoneda");

struct NaturalityReport {
    bool violated = false;
    std::size_t checked = 0;
    std::string square;  // description of the first violated square
};

// Checks α ∈ λ_X(f⁻¹V⃗) ⟺ Tf(α) ∈ λ_Y(V⃗) for one square.
bool natural_square(const Lifting& l, const FunctorSpec& f, const TValue& alpha, std::size_t nx, const Map& map,
                    std::size_t ny, std::span<const Mask> args);

// Exhaustive over carriers of size ≤ 3, then random squares with carriers ≤ 4, up to the budget.
NaturalityReport check_naturality(const Lifting& l, std::size_t sample_budget, std::uint64_t seed = 1);

}  // namespace cak
