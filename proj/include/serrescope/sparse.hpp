#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "serrescope/matrix.hpp"

namespace serrescope {

// Sparse matrix over Q in triplet form; duplicate positions are additive.
struct SparseMat {
    int rows = 0, cols = 0;
    std::vector<std::tuple<int, int, Rat>> entries;

    SparseMat() = default;
    SparseMat(int r, int c) : rows(r), cols(c) {}

    void add(int r, int c, const Rat& v) {
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw ShapeError("sparse matrix: index out of range");
        if (!serrescope::is_zero(v)) entries.emplace_back(r, c, v);
    }
    size_t nnz() const { return entries.size(); }
};

inline RatMatrix to_dense(const SparseMat& m) {
    RatMatrix d(m.rows, m.cols);
    for (const auto& [r, c, v] : m.entries) d(r, c) += v;
    return d;
}

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t p) {
    return uint64_t((unsigned __int128)(a)*b % p);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

inline uint64_t invmod_u64(uint64_t a, uint64_t p) { return powmod_u64(a, p - 2, p); }

inline uint64_t int_mod(const Int& x, uint64_t p) {
    Int r = x % Int(p);
    if (r < 0) r += Int(p);
    return r.convert_to<uint64_t>();
}

// numerator * denominator^{-1} mod p; the denominator must stay a unit.
inline uint64_t rat_mod(const Rat& x, uint64_t p) {
    uint64_t den = int_mod(x.denominator(), p);
    if (den == 0) throw ShapeError("rat_mod: denominator vanishes at this prime");
    return mulmod_u64(int_mod(x.numerator(), p), invmod_u64(den, p), p);
}

}  // namespace detail

// Rank over F_p by sparse Gaussian elimination.  Pivots are chosen in the
// sparsest active column, then in its row touching the fewest columns, which
// keeps fill-in low on the block-structured differentials this is used for.
inline int sparse_rank_mod(const SparseMat& m, uint64_t p) {
    if (m.rows <= 0 || m.cols <= 0) return 0;
    std::vector<std::map<int, uint64_t>> col(size_t(m.cols));
    for (const auto& [r, c, v] : m.entries) {
        uint64_t x = detail::rat_mod(v, p);
        if (x == 0) continue;
        auto& cc = col[size_t(c)];
        auto [it, fresh] = cc.emplace(r, 0);
        it->second = (it->second + x) % p;
        if (it->second == 0) cc.erase(it);
    }
    std::vector<std::set<int>> rowcols(size_t(m.rows));
    for (int c = 0; c < m.cols; ++c)
        for (const auto& [r, v] : col[size_t(c)]) {
            (void)v;
            rowcols[size_t(r)].insert(c);
        }
    std::set<std::pair<size_t, int>> queue;  // (nnz, column)
    for (int c = 0; c < m.cols; ++c)
        if (!col[size_t(c)].empty()) queue.insert({col[size_t(c)].size(), c});
    int rank = 0;
    while (!queue.empty()) {
        auto [sz, c] = *queue.begin();
        (void)sz;
        queue.erase(queue.begin());
        if (col[size_t(c)].empty()) continue;
        int r = -1;
        size_t best = SIZE_MAX;
        for (const auto& [rr, vv] : col[size_t(c)]) {
            (void)vv;
            if (rowcols[size_t(rr)].size() < best) {
                best = rowcols[size_t(rr)].size();
                r = rr;
            }
        }
        ++rank;
        uint64_t pivinv = detail::invmod_u64(col[size_t(c)].at(r), p);
        std::vector<int> targets(rowcols[size_t(r)].begin(), rowcols[size_t(r)].end());
        for (int c2 : targets) {
            if (c2 == c) continue;
            queue.erase({col[size_t(c2)].size(), c2});
            uint64_t f = detail::mulmod_u64(col[size_t(c2)].at(r), pivinv, p);
            for (const auto& [rr, vv] : col[size_t(c)]) {
                auto [it, fresh] = col[size_t(c2)].emplace(rr, 0);
                it->second = (it->second + p - detail::mulmod_u64(f, vv, p)) % p;
                if (it->second == 0) {
                    col[size_t(c2)].erase(it);
                    if (!fresh) rowcols[size_t(rr)].erase(c2);
                } else if (fresh) {
                    rowcols[size_t(rr)].insert(c2);
                }
            }
            if (!col[size_t(c2)].empty()) queue.insert({col[size_t(c2)].size(), c2});
        }
        for (const auto& [rr, vv] : col[size_t(c)]) {
            (void)vv;
            rowcols[size_t(rr)].erase(c);
        }
        col[size_t(c)].clear();
    }
    return rank;
}

// Exact rank: dense rational elimination when small, otherwise modular ranks
// at fixed 61-bit primes until two consecutive ones agree.  A modular rank can
// only undercount, and it drops exactly when the prime divides some nonzero
// maximal minor, so two independent primes agreeing on these small-entry
// matrices is decisive; disagreement escalates and exhaustion refuses.
inline int sparse_rank(const SparseMat& m) {
    if (m.rows <= 0 || m.cols <= 0 || m.entries.empty()) return 0;
    if (Int(m.rows) * Int(m.cols) <= 90000) return rank(to_dense(m));
    static const uint64_t primes[] = {2305843009213693951ull, 2305843009213693967ull,
                                      2305843009213693973ull, 2305843009213694009ull,
                                      2305843009213694017ull};  // five 61-bit primes
    int prev = -1;
    for (uint64_t p : primes) {
        int r;
        try {
            r = sparse_rank_mod(m, p);
        } catch (const ShapeError&) {
            continue;  // a denominator hit this prime; try the next one
        }
        if (r == prev) return r;
        prev = r;
    }
    throw RefusalError("sparse rank did not stabilize across the prime ladder");
}

// Complex of plain vector spaces with sparse differentials d_k taking degree
// lo+k to lo+k+1.
struct VectComplex {
    int lo = 0;
    std::vector<int> dims;
    std::vector<SparseMat> diffs;

    int hi() const { return lo + int(dims.size()) - 1; }
    Int total_dim() const {
        Int t = 0;
        for (int d : dims) t += d;
        return t;
    }
    Int entry_count() const {
        Int n = 0;
        for (const auto& d : diffs) n += Int(d.nnz());
        return n;
    }
    // Euler characteristic with degree signs; equals the alternating sum of
    // cohomology dimensions without any rank work.
    Int superdimension() const {
        Int s = 0;
        for (size_t k = 0; k < dims.size(); ++k) {
            int n = lo + int(k);
            if (n % 2 == 0)
                s += dims[k];
            else
                s -= dims[k];
        }
        return s;
    }

    void check_shapes() const {
        if (!dims.empty() && diffs.size() + 1 != dims.size())
            throw ShapeError("vect complex: differential count");
        for (size_t k = 0; k < diffs.size(); ++k)
            if (diffs[k].rows != dims[k + 1] || diffs[k].cols != dims[k])
                throw ShapeError("vect complex: differential shape");
    }

    void check_d_squared() const {
        for (size_t k = 0; k + 1 < diffs.size(); ++k) {
            std::vector<std::vector<std::pair<int, Rat>>> bycol(size_t(diffs[k + 1].cols));
            for (const auto& [r, c, v] : diffs[k + 1].entries) bycol[size_t(c)].emplace_back(r, v);
            std::map<std::pair<int, int>, Rat> acc;
            for (const auto& [r, c, v] : diffs[k].entries)
                for (const auto& [r2, v2] : bycol[size_t(r)]) acc[{r2, c}] += v2 * v;
            for (const auto& [rc, v] : acc) {
                (void)rc;
                if (!serrescope::is_zero(v)) throw ShapeError("vect complex: d^2 != 0");
            }
        }
    }

    std::map<int, int> cohomology_dims() const {
        std::vector<int> rk(diffs.size(), 0);
        for (size_t k = 0; k < diffs.size(); ++k) rk[k] = sparse_rank(diffs[k]);
        std::map<int, int> h;
        for (size_t k = 0; k < dims.size(); ++k) {
            int d = dims[k];
            if (k < diffs.size()) d -= rk[k];
            if (k > 0) d -= rk[k - 1];
            if (d < 0) throw ShapeError("vect complex: negative cohomology dimension");
            if (d > 0) h[lo + int(k)] = d;
        }
        return h;
    }

    Int total_cohomology_dim() const {
        Int t = 0;
        for (const auto& [n, d] : cohomology_dims()) {
            (void)n;
            t += d;
        }
        return t;
    }
};

}  // namespace serrescope
