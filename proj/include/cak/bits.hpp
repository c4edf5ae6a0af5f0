#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

namespace cak {

using Mask = std::uint64_t;

inline Mask full_mask(std::size_t n) { return n >= 64 ? ~Mask{0} : ((Mask{1} << n) - 1); }
inline bool has(Mask m, std::size_t i) { return (m >> i) & 1U; }
inline Mask bit(std::size_t i) { return Mask{1} << i; }
inline int popcount(Mask m) { return std::popcount(m); }
inline bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

inline std::vector<std::size_t> elements(Mask m) {
    std::vector<std::size_t> out;
    while (m) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

// Calls fn(s) for every s ⊆ m, starting from 0; stops early if fn returns false.
template <class Fn>
bool for_each_submask(Mask m, Fn&& fn) {
    Mask s = 0;
    while (true) {
        if (!fn(s)) return false;
        if (s == m) return true;
        s = (s - m) & m;
    }
}

// Packs the bits of m selected by sel into the low bits, in order.
inline Mask compress(Mask m, Mask sel) {
    Mask out = 0;
    std::size_t k = 0;
    while (sel) {
        Mask low = sel & -sel;
        if (m & low) out |= bit(k);
        ++k;
        sel &= sel - 1;
    }
    return out;
}

// Inverse of compress.
inline Mask expand(Mask m, Mask sel) {
    Mask out = 0;
    std::size_t k = 0;
    while (sel) {
        Mask low = sel & -sel;
        if (has(m, k)) out |= low;
        ++k;
        sel &= sel - 1;
    }
    return out;
}

// Keeps only the ⊆-minimal sets.
inline std::vector<Mask> minimize_antichain(std::vector<Mask> v) {
    std::vector<Mask> out;
    std::sort(v.begin(), v.end(), [](Mask a, Mask b) {
        int pa = popcount(a), pb = popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (Mask m : v) {
        bool dominated = false;
        for (Mask o : out)
            if (subset(o, m)) { dominated = true; break; }
        if (!dominated) out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cak
