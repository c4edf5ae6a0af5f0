#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cak/logic.hpp"
#include "cak/uniform.hpp"

namespace cak {

// R ⊆ S₁ × S₂ as rel[s1][s2].
using Relation = std::vector<std::vector<bool>>;

// Greatest neighbourhood bisimulation between two ℳ-models (ℳ* models are read through their
// neighbourhood part). With global set, nullopt when the fixpoint fails Forth or Back.
std::optional<Relation> largest_nbhd_bisim(const TModel& m1, const TModel& m2, bool global);
// The three clauses at every pair of r; why receives the first failure.
bool is_nbhd_bisim(const TModel& m1, const TModel& m2, const Relation& r, std::string* why = nullptr);
bool is_total_both_ways(const Relation& r);
std::string relation_text(const TModel& m1, const TModel& m2, const Relation& r);

// S^G: σ^G(s) = (σ(s), S).
TModel to_global_mstar(const TModel& m);
// The ℳ-model underlying an ℳ* model.
TModel underlying_m(const TModel& m);

// Indexed by propositional type (bit i = vars[i]); values capped at m.
using Signature = std::vector<std::size_t>;

Signature m_signature(const StarObject& s, const ElemSet& basic, const std::vector<Mask>& V, std::size_t m);
std::string signature_text(const Signature& sig, const std::vector<std::string>& vars);

// ≈ⁿ: per n-signature, the numbers of basic members agree, counts ≥ cap being one "infinite" bucket.
// cap 0 means the copy truncation m of the constructions.
bool models_match(const StarObject& x, const std::vector<Mask>& vx, const StarObject& y, const std::vector<Mask>& vy,
                  std::size_t n, std::size_t cap = 0);

// The atoms a ⊆ b, box a and E a over the given variables, evaluated on a star model.
std::vector<bool> star_atoms(const StarObject& s, const std::vector<Mask>& V);
std::vector<std::string> star_atom_names(const std::vector<std::string>& vars);

struct DemoReport {
    std::string beta;               // ℳf(α)
    bool image_ok = false;          // ℳf(α) = β
    bool u_supports_beta = false;
    std::vector<std::string> minimal_supports;  // of α
    bool all_contain_v = false;
    std::string construction;
    bool y_side = false;             // (Y_*, β_*, V_[h_β]) ⊨ ∀Z(a ⊆ Z)
    bool x_side = false;             // (X_*, α_*, V_[f∘h_α]) ⊨ ∀Z(a ⊆ Z)
    bool restricted_side = false;    // (Y'_*, β'_*, V'_[h_β']) ⊨ ∀Z(a ⊆ Z)
    bool violation = false;          // the two sides disagree
    std::string where;
    Json to_json() const;
};

// Replays the counterexample data X = {u*, v*, w*}, Y = {u, v} for a candidate construction for ℳ.
DemoReport counterexample_demo(ConstructionKind candidate = ConstructionKind::NaiveMon, std::size_t m = 2);

// [∃] ↦ E, [∀] ↦ E^d, and back.
mu::Formula globalize(const mu::Formula& f);
mu::Formula deglobalize(const mu::Formula& f);
// μMML_g semantics on an ℳ-model, global modalities ranging over the whole carrier.
bool eval_mu_global(const mu::Formula& f, const TModel& m, std::uint32_t s);

namespace mmso {

enum class Op { Bot, Top, Sr, Sub, Box, Not, Or, And, Exists };
struct Node;
using Formula = std::shared_ptr<const Node>;
struct Node {
    Op op;
    std::string a, b;  // Sr: a; Sub: a ⊆ b; Box: □(a, b); Exists: bound a
    std::vector<Formula> kids;
    int depth = 0;
};

Formula bot();
Formula top();
Formula sr(std::string p);
Formula sub(std::string p, std::string q);
Formula box(std::string p, std::string q);
Formula make_not(Formula f);
Formula make_or(Formula a, Formula b);
Formula make_and(Formula a, Formula b);
Formula make_exists(std::string p, Formula body);
Formula make_forall(std::string p, Formula body);

std::string print(const Formula& f);
Formula parse(const std::string& text);
// Direct clause semantics on an ℳ-model with at most 8 states (raised by caps.quantifier).
bool eval(const Formula& f, const TModel& m, std::uint32_t s, const Caps& caps = {});
// The MSO_ℳ formula with □(p, q) read as lift box(p, q).
mso::Formula to_mso(const Formula& f);

}  // namespace mmso

}  // namespace cak
