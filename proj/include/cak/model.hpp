#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cak/functor.hpp"

namespace cak {

struct TModel {
    Functor functor;
    CarrierPtr carrier;
    std::vector<TValue> sigma;
    std::map<std::string, ElemSet> valuation;
    std::optional<std::vector<ElemSet>> frame;  // R(s) per state
    std::optional<std::uint32_t> root;

    std::size_t size() const { return carrier->size(); }
    const ElemSet& val(const std::string& p) const;
    bool holds(const std::string& p, std::uint32_t s) const;
    std::set<std::string> color(std::uint32_t s) const;  // V†(s)
    std::uint32_t state(const std::string& atom) const { return carrier->index(atom); }
};

// σ total and well formed, valuation inside the carrier.
void validate_model(const TModel& m);
// Every R(s) supports σ(s); throws otherwise.
void validate_frame(const TModel& m);
// (S,R) is a tree rooted at root: every node reachable by exactly one path.
bool is_tree(const TModel& m);

// Canonical frame: R(s) = base(σ(s)), the least support.
std::vector<ElemSet> canonical_frame(const TModel& m);

// Kripke helper: σ(s) = successors.
TModel kripke_model(std::vector<ElemSet> succ, std::map<std::string, ElemSet> val = {});

}  // namespace cak
