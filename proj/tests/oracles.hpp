#pragma once

// Slow, independent reference implementations used only to cross-check the
// library.  Everything here is written in the most literal way possible.

#include <algorithm>
#include <numeric>

#include "serrescope/polynomial.hpp"
#include "serrescope/quiver.hpp"

namespace oracles {

using serrescope::Int;
using serrescope::IntMatrix;
using serrescope::IntPoly;

inline int permutation_sign(const std::vector<int>& p) {
    int inv = 0;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inv;
    return inv % 2 ? -1 : 1;
}

// Leibniz determinant: sum over all permutations.
inline Int leibniz_det(const IntMatrix& m) {
    int n = m.rows();
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    Int total = 0;
    do {
        Int term = permutation_sign(perm);
        for (int i = 0; i < n; ++i) term *= m(i, perm[size_t(i)]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// det(xI - A) via the Leibniz sum with polynomial entries.
inline IntPoly leibniz_char_poly(const IntMatrix& a) {
    int n = a.rows();
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    IntPoly total;
    do {
        IntPoly term = IntPoly::constant(permutation_sign(perm));
        for (int i = 0; i < n; ++i) {
            int j = perm[size_t(i)];
            IntPoly entry = i == j ? IntPoly({-a(i, j), 1}) : IntPoly::constant(-a(i, j));
            term = term * entry;
        }
        total = total + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Number of directed paths (all lengths, trivial one included when i == j)
// from i to j in an acyclic quiver, by depth-first enumeration.
inline long long count_paths(const serrescope::Quiver& q, int i, int j) {
    long long total = i == j ? 1 : 0;
    for (const auto& a : q.arrows)
        if (a.src == i) total += count_paths(q, a.tgt, j);
    return total;
}

}  // namespace oracles
