#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cak/bits.hpp"
#include "cak/error.hpp"

namespace cak {

enum class FunctorKind { Const, Id, Product, Coproduct, Exp, Powerset, Bag, MonNbhd, MonNbhdStar };

struct FunctorSpec;
using Functor = std::shared_ptr<const FunctorSpec>;

struct FunctorSpec {
    FunctorKind kind;
    std::vector<std::string> constants;  // Const: C; Exp: exponent C
    std::vector<Functor> parts;          // Product: 2; Coproduct: n; Exp: 1
};

Functor const_functor(std::vector<std::string> c);
Functor id_functor();
Functor product_functor(Functor a, Functor b);
Functor coproduct_functor(std::vector<Functor> parts);
Functor exp_functor(Functor base, std::vector<std::string> c);
Functor powerset_functor();
Functor bag_functor();
Functor mon_functor();
Functor monstar_functor();

bool is_polynomial(const FunctorSpec& f);
bool same_functor(const FunctorSpec& a, const FunctorSpec& b);
std::string to_string(const FunctorSpec& f);

struct Carrier {
    std::vector<std::string> atoms;

    std::size_t size() const { return atoms.size(); }
    std::optional<std::uint32_t> find(const std::string& a) const;
    std::uint32_t index(const std::string& a) const;  // throws on unknown atom
    bool operator==(const Carrier& o) const { return atoms == o.atoms; }
};
using CarrierPtr = std::shared_ptr<const Carrier>;

CarrierPtr make_carrier(std::vector<std::string> atoms);
CarrierPtr numbered_carrier(std::size_t n, const std::string& prefix = "x");

using ElemSet = std::vector<std::uint32_t>;  // sorted, duplicate-free

ElemSet to_elems(Mask m);
Mask to_mask(const ElemSet& s);  // requires all elements < 64

// A value of T X, stored without its carrier. Sets are sparse so that large
// tree carriers are fine; dense masks are produced on demand (see DenseObject).
struct TValue {
    FunctorKind kind = FunctorKind::Powerset;
    std::uint32_t index = 0;  // Const: position in C; Id: element; Coproduct: injection
    ElemSet set;              // Powerset: members; MonNbhdStar: support
    std::vector<ElemSet> family;  // MonNbhd / MonNbhdStar: minimal antichain, sorted
    std::vector<std::pair<std::uint32_t, std::uint64_t>> counts;  // Bag: sorted, nonzero
    std::vector<TValue> parts;  // Product: 2; Coproduct: 1; Exp: |C|

    bool operator==(const TValue& o) const;
    bool operator<(const TValue& o) const;
};

struct TObject {
    Functor functor;
    CarrierPtr carrier;
    TValue value;
};

using Map = std::vector<std::uint32_t>;  // f: X -> Y as image indices

TValue pset_value(ElemSet s);
TValue bag_value(std::vector<std::pair<std::uint32_t, std::uint64_t>> counts);
TValue mon_value(std::vector<ElemSet> generators);  // minimized
TValue monstar_value(std::vector<ElemSet> generators, ElemSet support);

// Checks that v is a well-formed value of F over a carrier of size n.
void check_value(const FunctorSpec& f, const TValue& v, std::size_t n);

TValue apply_map(const FunctorSpec& f, const Map& map, const TValue& t);
TObject apply_map(const TObject& t, const Map& map, CarrierPtr target);

// keep is a sorted subset of X; the result is over the carrier keep (re-indexed).
std::optional<TValue> restrict_to_support(const FunctorSpec& f, const TValue& t, const ElemSet& keep);
std::optional<TObject> restrict_to_support(const TObject& t, const ElemSet& keep);

bool supports(const FunctorSpec& f, const TValue& t, const ElemSet& keep);
std::vector<ElemSet> minimal_supports(const FunctorSpec& f, const TValue& t, std::size_t n,
                                      const Caps& caps = {});

// Elements occurring in t (the base of t): the least support for every implemented functor.
ElemSet base_elements(const FunctorSpec& f, const TValue& t);

// All values of F over a carrier of size n; bag counts range over 0..bag_cap.
std::vector<TValue> enumerate_values(const FunctorSpec& f, std::size_t n, std::uint64_t bag_cap = 2,
                                     std::size_t limit = 200000);

// A leaf value with empty base, if the functor has one.
std::optional<TValue> empty_value(const FunctorSpec& f);

std::string to_string(const FunctorSpec& f, const TValue& t, const Carrier& c);

// Membership helpers for neighbourhood values.
bool nbhd_contains(const TValue& t, const ElemSet& z);
std::vector<std::vector<Mask>> antichains(std::size_t n);

// Dense view of a top-level value for one-step evaluation (carrier ≤ 64).
struct DenseObject {
    const TValue* source = nullptr;
    FunctorKind kind = FunctorKind::Powerset;
    std::size_t n = 0;
    Mask full = 0;
    Mask set = 0;                 // powerset members / bag support / star support / polynomial leaves
    std::vector<Mask> family;     // minimal antichain
    std::vector<std::uint64_t> counts;  // bag, per element
};

DenseObject make_dense(const FunctorSpec& f, const TValue& t, std::size_t n);

}  // namespace cak
