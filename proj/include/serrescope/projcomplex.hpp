#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <tuple>

#include "serrescope/algebra.hpp"

namespace serrescope {

// Map ⊕_j P_{u_j} -> ⊕_i P_{w_i} stored as elements a_{ij} in e_{w_i} A e_{u_j}
// (a acts by left multiplication on right ideals).
using ElemMatrix = std::vector<std::vector<AlgElem>>;

namespace detail {

// Inverse of a unit in the local ring e_v A e_v: invertible scalar part plus
// nilpotent radical tail, inverted by a finite geometric series.
inline AlgElem local_inverse(const Algebra& A, int v, const AlgElem& a) {
    Rat c = a.coeff(v);
    if (is_zero(c)) throw ShapeError("local_inverse: no unit part");
    AlgElem r = a + AlgElem::unit(v, -c);  // radical tail
    AlgElem acc = AlgElem::unit(v);
    AlgElem term = AlgElem::unit(v);
    for (int guard = 0; guard <= A.nilpotency_bound() && !term.is_zero(); ++guard) {
        term = A.mul(term, r) * (Rat(-1) / c);
        acc = acc + term;
    }
    return acc * (Rat(1) / c);
}

// Left multiplication by a in e_w A e_u as a matrix paths(u,i) -> paths(w,i).
inline RatMatrix lmul_matrix(const Algebra& A, const AlgElem& a, int u, int w, int i) {
    const auto& src = A.paths(u, i);
    const auto& tgt = A.paths(w, i);
    RatMatrix m(int(tgt.size()), int(src.size()));
    for (int j = 0; j < int(src.size()); ++j) {
        AlgElem prod = A.mul(a, AlgElem::unit(src[size_t(j)]));
        for (const auto& [b, c] : prod.c) {
            auto it = std::find(tgt.begin(), tgt.end(), b);
            if (it == tgt.end()) throw ShapeError("lmul_matrix: basis mismatch");
            m(int(it - tgt.begin()), j) += c;
        }
    }
    return m;
}

}  // namespace detail

// Cochain complex of projective right modules; terms[k] lives in degree lo+k,
// diffs[k] maps terms[k] to terms[k+1].
struct ProjComplex {
    const Algebra* A = nullptr;
    int lo = 0;
    std::vector<std::vector<int>> terms;
    std::vector<ElemMatrix> diffs;

    int hi() const { return lo + int(terms.size()) - 1; }
    bool in_range(int n) const { return n >= lo && n <= hi(); }
    const std::vector<int>& term(int n) const {
        static const std::vector<int> empty;
        return in_range(n) ? terms[size_t(n - lo)] : empty;
    }
    bool is_zero() const {
        for (const auto& t : terms)
            if (!t.empty()) return false;
        return true;
    }
    int summand_count() const {
        int c = 0;
        for (const auto& t : terms) c += int(t.size());
        return c;
    }
    // Total dimension of the materialized modules (for budget accounting).
    Int materialized_dim() const {
        Int total = 0;
        IntMatrix C = A->cartan_matrix();
        for (const auto& t : terms)
            for (int v : t)
                for (int i = 0; i < A->nvertices(); ++i) total += C(i, v);
        return total;
    }

    void check_shapes() const {
        if (terms.size() >= 2 && diffs.size() + 1 != terms.size())
            throw ShapeError("complex: differential count");
        for (size_t k = 0; k + 1 < terms.size(); ++k) {
            const ElemMatrix& d = diffs[k];
            if (d.size() != terms[k + 1].size()) throw ShapeError("complex: diff rows");
            for (size_t i = 0; i < d.size(); ++i) {
                if (d[i].size() != terms[k].size()) throw ShapeError("complex: diff cols");
                for (size_t j = 0; j < d[i].size(); ++j)
                    for (const auto& [b, c] : d[i][j].c) {
                        (void)c;
                        if (A->basis(b).src != terms[k + 1][i] || A->basis(b).tgt != terms[k][j])
                            throw ShapeError("complex: entry block mismatch");
                    }
            }
        }
    }

    void check_d_squared() const {
        for (size_t k = 0; k + 2 < terms.size(); ++k)
            for (size_t i = 0; i < terms[k + 2].size(); ++i)
                for (size_t j = 0; j < terms[k].size(); ++j) {
                    AlgElem s;
                    for (size_t m = 0; m < terms[k + 1].size(); ++m)
                        s = s + A->mul(diffs[k + 1][i][m], diffs[k][m][j]);
                    if (!s.is_zero()) throw ShapeError("complex: d^2 != 0");
                }
    }

    ProjComplex shifted(int s) const {  // X[s]^n = X^{n+s}, d -> (-1)^s d
        ProjComplex r = *this;
        r.lo -= s;
        if (s % 2 != 0)
            for (auto& d : r.diffs)
                for (auto& row : d)
                    for (auto& e : row) e = e * Rat(-1);
        return r;
    }

    // Drop empty degrees at both ends.
    void normalize() {
        while (!terms.empty() && terms.back().empty()) {
            terms.pop_back();
            if (!diffs.empty()) diffs.pop_back();
        }
        while (!terms.empty() && terms.front().empty()) {
            terms.erase(terms.begin());
            if (!diffs.empty()) diffs.erase(diffs.begin());
            ++lo;
        }
        if (terms.empty()) {
            lo = 0;
            diffs.clear();
        }
    }

    // Strip contractible summand pairs: any differential entry that is a unit
    // of the local ring at its vertex can be cancelled (Gaussian elimination
    // for complexes), leaving a homotopy-equivalent minimal complex with all
    // differential entries in the radical.  Dead summands are masked during
    // the sweep and compacted once; the worklist only revisits cells an
    // elimination actually changed.
    void minimize() {
        if (terms.size() < 2) {
            normalize();
            return;
        }
        std::vector<std::vector<char>> alive;
        for (const auto& t : terms) alive.emplace_back(t.size(), char(1));
        auto is_unit = [&](size_t k, size_t i, size_t j) {
            int u = terms[k][j];
            return u == terms[k + 1][i] && !serrescope::is_zero(diffs[k][i][j].coeff(u));
        };
        std::vector<std::tuple<size_t, size_t, size_t>> work;
        for (size_t k = 0; k + 1 < terms.size(); ++k)
            for (size_t i = 0; i < terms[k + 1].size(); ++i)
                for (size_t j = 0; j < terms[k].size(); ++j)
                    if (is_unit(k, i, j)) work.push_back({k, i, j});
        while (!work.empty()) {
            auto [k, i, j] = work.back();
            work.pop_back();
            if (!alive[k][j] || !alive[k + 1][i] || !is_unit(k, i, j)) continue;
            AlgElem a_inv = detail::local_inverse(*A, terms[k][j], diffs[k][i][j]);
            std::vector<size_t> col_nz, row_nz;
            for (size_t i2 = 0; i2 < terms[k + 1].size(); ++i2)
                if (i2 != i && alive[k + 1][i2] && !diffs[k][i2][j].is_zero())
                    col_nz.push_back(i2);
            for (size_t j2 = 0; j2 < terms[k].size(); ++j2)
                if (j2 != j && alive[k][j2] && !diffs[k][i][j2].is_zero()) row_nz.push_back(j2);
            for (size_t i2 : col_nz) {
                AlgElem pre = A->mul(diffs[k][i2][j], a_inv);
                for (size_t j2 : row_nz) {
                    AlgElem corr = A->mul(pre, diffs[k][i][j2]);
                    if (corr.is_zero()) continue;
                    AlgElem& cell = diffs[k][i2][j2];
                    for (const auto& [b, v] : corr.c) cell.add(b, -v);
                    if (is_unit(k, i2, j2)) work.push_back({k, i2, j2});
                }
            }
            alive[k][j] = 0;
            alive[k + 1][i] = 0;
        }
        // compact the masked summands away
        std::vector<ElemMatrix> nd;
        std::vector<std::vector<int>> nt;
        for (size_t k = 0; k < terms.size(); ++k) {
            std::vector<int> t;
            for (size_t j = 0; j < terms[k].size(); ++j)
                if (alive[k][j]) t.push_back(terms[k][j]);
            nt.push_back(std::move(t));
        }
        for (size_t k = 0; k + 1 < terms.size(); ++k) {
            ElemMatrix d;
            for (size_t i = 0; i < terms[k + 1].size(); ++i) {
                if (!alive[k + 1][i]) continue;
                std::vector<AlgElem> row;
                for (size_t j = 0; j < terms[k].size(); ++j)
                    if (alive[k][j]) row.push_back(std::move(diffs[k][i][j]));
                d.push_back(std::move(row));
            }
            nd.push_back(std::move(d));
        }
        terms = std::move(nt);
        diffs = std::move(nd);
        normalize();
    }

    // Block matrix of the differential restricted to the vertex-i component.
    RatMatrix diff_block(size_t k, int i) const {
        std::vector<int> roff{0}, coff{0};
        for (int v : terms[k + 1]) roff.push_back(roff.back() + int(A->paths(v, i).size()));
        for (int v : terms[k]) coff.push_back(coff.back() + int(A->paths(v, i).size()));
        RatMatrix m(roff.back(), coff.back());
        for (size_t r = 0; r < terms[k + 1].size(); ++r)
            for (size_t c = 0; c < terms[k].size(); ++c) {
                if (diffs[k][r][c].is_zero()) continue;
                RatMatrix b = detail::lmul_matrix(*A, diffs[k][r][c], terms[k][c],
                                                  terms[k + 1][r], i);
                for (int x = 0; x < b.rows(); ++x)
                    for (int y = 0; y < b.cols(); ++y)
                        m(roff[r] + x, coff[c] + y) = b(x, y);
            }
        return m;
    }

    // Dimension vector of H^n for every degree in range.
    std::map<int, std::vector<int>> cohomology_dims() const {
        std::map<int, std::vector<int>> h;
        int V = A->nvertices();
        for (int n = lo; n <= hi(); ++n) {
            std::vector<int> dv(size_t(V), 0);
            bool nonzero = false;
            for (int i = 0; i < V; ++i) {
                int dim_here = 0;
                for (int v : term(n)) dim_here += int(A->paths(v, i).size());
                int rk_out = 0, rk_in = 0;
                if (n < hi()) rk_out = rank(diff_block(size_t(n - lo), i));
                if (n > lo) rk_in = rank(diff_block(size_t(n - lo - 1), i));
                dv[size_t(i)] = dim_here - rk_out - rk_in;
                if (dv[size_t(i)] < 0) throw ShapeError("cohomology: negative dimension");
                if (dv[size_t(i)] > 0) nonzero = true;
            }
            if (nonzero) h[n] = std::move(dv);
        }
        return h;
    }

    // K-theory class: alternating sum of the projective classes, as the
    // coefficient vector over the P_v basis.
    std::vector<Int> ktheory_class() const {
        std::vector<Int> cls(size_t(A->nvertices()), 0);
        for (int n = lo; n <= hi(); ++n) {
            int sgn = (n % 2 == 0) ? 1 : -1;
            for (int v : term(n)) cls[size_t(v)] += sgn;
        }
        return cls;
    }

    // If the minimized complex is concentrated in one degree, return it with
    // the sorted summand list.
    std::optional<std::pair<int, std::vector<int>>> stalk_degree() const {
        std::optional<int> deg;
        for (int n = lo; n <= hi(); ++n) {
            if (term(n).empty()) continue;
            if (deg) return std::nullopt;
            deg = n;
        }
        if (!deg) return std::nullopt;
        std::vector<int> vs = term(*deg);
        std::sort(vs.begin(), vs.end());
        return std::make_pair(*deg, vs);
    }

};

inline ProjComplex stalk_complex(const Algebra& A, int degree, std::vector<int> vertices) {
    ProjComplex c;
    c.A = &A;
    c.lo = degree;
    c.terms.push_back(std::move(vertices));
    return c;
}

inline ProjComplex direct_sum(const ProjComplex& X, const ProjComplex& Y) {
    if (X.is_zero()) return Y;
    if (Y.is_zero()) return X;
    ProjComplex r;
    r.A = X.A;
    r.lo = std::min(X.lo, Y.lo);
    int hi = std::max(X.hi(), Y.hi());
    for (int n = r.lo; n <= hi; ++n) {
        std::vector<int> t = X.term(n);
        for (int v : Y.term(n)) t.push_back(v);
        r.terms.push_back(std::move(t));
    }
    for (int n = r.lo; n < hi; ++n) {
        size_t rows = r.terms[size_t(n - r.lo + 1)].size();
        size_t cols = r.terms[size_t(n - r.lo)].size();
        ElemMatrix d(rows, std::vector<AlgElem>(cols));
        size_t xr = X.term(n + 1).size(), xc = X.term(n).size();
        if (X.in_range(n) && X.in_range(n + 1) && xr && xc) {
            const ElemMatrix& dx = X.diffs[size_t(n - X.lo)];
            for (size_t i = 0; i < xr; ++i)
                for (size_t j = 0; j < xc; ++j) d[i][j] = dx[i][j];
        }
        size_t yr = Y.term(n + 1).size(), yc = Y.term(n).size();
        if (Y.in_range(n) && Y.in_range(n + 1) && yr && yc) {
            const ElemMatrix& dy = Y.diffs[size_t(n - Y.lo)];
            for (size_t i = 0; i < yr; ++i)
                for (size_t j = 0; j < yc; ++j) d[xr + i][xc + j] = dy[i][j];
        }
        r.diffs.push_back(std::move(d));
    }
    return r;
}

// Basis of the space of chain maps C -> D (degree-preserving, commuting with
// the differentials), each returned as per-degree element matrices indexed
// over the union degree range.
struct ChainMap {
    int lo = 0;
    std::vector<ElemMatrix> blocks;  // blocks[k]: C^{lo+k} -> D^{lo+k}
};

inline std::vector<ChainMap> chain_map_space(const ProjComplex& C, const ProjComplex& D) {
    const Algebra& A = *C.A;
    int lo = std::min(C.lo, D.lo), hi = std::max(C.hi(), D.hi());
    // unknown = coefficient of one path basis element in one entry of one f_n
    struct Slot {
        int n;
        size_t row, col;
        int path;
    };
    std::vector<Slot> slots;
    std::map<std::tuple<int, size_t, size_t, int>, int> slot_index;
    for (int n = lo; n <= hi; ++n)
        for (size_t r = 0; r < D.term(n).size(); ++r)
            for (size_t c = 0; c < C.term(n).size(); ++c)
                for (int p : A.paths(D.term(n)[r], C.term(n)[c])) {
                    slot_index[{n, r, c, p}] = int(slots.size());
                    slots.push_back({n, r, c, p});
                }
    std::vector<std::map<int, Rat>> rows;
    for (int n = lo; n < hi; ++n) {
        // equation entry (i over D^{n+1}, j over C^n):
        //   sum_m dD[i][m] f_n[m][j] - sum_m f_{n+1}[i][m] dC[m][j] = 0
        for (size_t i = 0; i < D.term(n + 1).size(); ++i)
            for (size_t j = 0; j < C.term(n).size(); ++j) {
                std::map<int, std::map<int, Rat>> eq;  // result basis idx -> row
                if (n >= D.lo && n < D.hi()) {
                    const ElemMatrix& dD = D.diffs[size_t(n - D.lo)];
                    for (size_t m = 0; m < D.term(n).size(); ++m) {
                        if (dD[i][m].is_zero()) continue;
                        for (int p : A.paths(D.term(n)[m], C.term(n)[j])) {
                            int idx = slot_index.at({n, m, j, p});
                            AlgElem prod = A.mul(dD[i][m], AlgElem::unit(p));
                            for (const auto& [b, v] : prod.c) eq[b][idx] += v;
                        }
                    }
                }
                if (n >= C.lo && n < C.hi()) {
                    const ElemMatrix& dC = C.diffs[size_t(n - C.lo)];
                    for (size_t m = 0; m < C.term(n + 1).size(); ++m) {
                        if (dC[m][j].is_zero()) continue;
                        for (int p : A.paths(D.term(n + 1)[i], C.term(n + 1)[m])) {
                            int idx = slot_index.at({n + 1, i, m, p});
                            AlgElem prod = A.mul(AlgElem::unit(p), dC[m][j]);
                            for (const auto& [b, v] : prod.c) eq[b][idx] -= v;
                        }
                    }
                }
                for (auto& [b, row] : eq) {
                    (void)b;
                    if (!row.empty()) rows.push_back(std::move(row));
                }
            }
    }
    RatMatrix sys(int(rows.size()), int(slots.size()));
    for (int r = 0; r < int(rows.size()); ++r)
        for (const auto& [c, v] : rows[size_t(r)]) sys(r, c) = v;
    std::vector<ChainMap> basis;
    for (const auto& vec : nullspace(sys)) {
        ChainMap f;
        f.lo = lo;
        for (int n = lo; n <= hi; ++n)
            f.blocks.emplace_back(D.term(n).size(),
                                  std::vector<AlgElem>(C.term(n).size()));
        for (size_t s = 0; s < slots.size(); ++s) {
            if (is_zero(vec[s])) continue;
            const Slot& sl = slots[s];
            f.blocks[size_t(sl.n - lo)][sl.row][sl.col].add(sl.path, vec[s]);
        }
        basis.push_back(std::move(f));
    }
    return basis;
}

// A chain map between minimal complexes is an isomorphism iff its scalar part
// (idempotent coefficients between equal-vertex summands) is invertible in
// every degree.
inline bool chain_map_is_iso(const ChainMap& f, const ProjComplex& C, const ProjComplex& D) {
    int lo = f.lo;
    for (size_t k = 0; k < f.blocks.size(); ++k) {
        int n = lo + int(k);
        const auto& ct = C.term(n);
        const auto& dt = D.term(n);
        if (ct.size() != dt.size()) return false;
        if (ct.empty()) continue;
        RatMatrix scalar(int(dt.size()), int(ct.size()));
        for (size_t r = 0; r < dt.size(); ++r)
            for (size_t c = 0; c < ct.size(); ++c)
                if (dt[r] == ct[c]) scalar(int(r), int(c)) = f.blocks[k][r][c].coeff(dt[r]);
        if (rank(scalar) != scalar.rows()) return false;
    }
    return true;
}

inline bool complexes_isomorphic(ProjComplex X, ProjComplex Y) {
    X.minimize();
    Y.minimize();
    if (X.is_zero() && Y.is_zero()) return true;
    if (X.lo != Y.lo || X.hi() != Y.hi()) return false;
    for (int n = X.lo; n <= X.hi(); ++n) {
        std::vector<int> a = X.term(n), b = Y.term(n);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return false;
    }
    auto maps = chain_map_space(X, Y);
    if (maps.empty()) return false;
    DetRng rng(0xc0ffeeULL);
    auto combine = [&](const std::vector<Rat>& coeffs) {
        ChainMap f;
        f.lo = maps[0].lo;
        f.blocks = maps[0].blocks;
        for (auto& blk : f.blocks)
            for (auto& row : blk)
                for (auto& e : row) e = AlgElem{};
        for (size_t m = 0; m < maps.size(); ++m)
            for (size_t k = 0; k < f.blocks.size(); ++k)
                for (size_t r = 0; r < f.blocks[k].size(); ++r)
                    for (size_t c = 0; c < f.blocks[k][r].size(); ++c)
                        f.blocks[k][r][c] =
                            f.blocks[k][r][c] + maps[m].blocks[k][r][c] * coeffs[m];
        return f;
    };
    for (int attempt = 0; attempt < 24; ++attempt) {
        std::vector<Rat> coeffs;
        for (size_t m = 0; m < maps.size(); ++m) coeffs.push_back(rat(rng.next_int(-7, 7)));
        if (chain_map_is_iso(combine(coeffs), X, Y)) return true;
    }
    if (maps.size() <= 6) {
        std::vector<Rat> coeffs(maps.size(), Rat(0));
        std::function<bool(size_t)> walk = [&](size_t k) {
            if (k == maps.size()) return chain_map_is_iso(combine(coeffs), X, Y);
            for (int c = -1; c <= 1; ++c) {
                coeffs[k] = rat(c);
                if (walk(k + 1)) return true;
            }
            return false;
        };
        return walk(0);
    }
    return false;
}

}  // namespace serrescope
