#pragma once

#include <deque>
#include <memory>

#include "serrescope/projcomplex.hpp"
#include "serrescope/representation.hpp"

namespace serrescope {

struct Cover {
    std::vector<int> summands;  // vertex of each projective summand
    Representation P;
    ModuleMap pi;  // P -> X, surjective, kernel inside rad P
};

// Projective cover: one summand P_v per generator of top(X) at v, the
// generator lifted to any preimage in X_v complementing the radical part.
inline Cover projective_cover(const Representation& X) {
    const Algebra& A = X.algebra();
    Cover cov;
    std::vector<std::pair<int, std::vector<Rat>>> gens;  // (vertex, vector in X_v)
    for (int v = 0; v < A.nvertices(); ++v) {
        std::vector<std::vector<Rat>> cols;
        for (int a = 0; a < A.quiver().narrows(); ++a) {
            if (A.quiver().arrows[size_t(a)].tgt != v) continue;
            const RatMatrix& M = X.arrow(a);
            for (int j = 0; j < M.cols(); ++j) cols.push_back(M.col(j));
        }
        int base_rank = cols.empty() ? 0 : rank(matrix_from_columns(X.dim(v), cols));
        // extend the radical image by standard basis vectors
        for (int k = 0; k < X.dim(v) && base_rank < X.dim(v); ++k) {
            std::vector<Rat> e(size_t(X.dim(v)), Rat(0));
            e[size_t(k)] = Rat(1);
            cols.push_back(e);
            int r = rank(matrix_from_columns(X.dim(v), cols));
            if (r > base_rank) {
                base_rank = r;
                cov.summands.push_back(v);
                gens.emplace_back(v, e);
            } else {
                cols.pop_back();
            }
        }
    }
    // assemble P = ⊕ P_{v_k} and the map sending the P_{v_k}-path basis
    // through the module action applied to the lifted generator
    Representation P(A, std::vector<int>(size_t(A.nvertices()), 0));
    {
        bool first = true;
        for (int v : cov.summands) {
            Representation Pv = projective_rep(A, v);
            P = first ? std::move(Pv) : direct_sum(P, Pv);
            first = false;
        }
    }
    cov.pi.blocks.clear();
    for (int i = 0; i < A.nvertices(); ++i) {
        std::vector<std::vector<Rat>> cols;
        for (size_t k = 0; k < cov.summands.size(); ++k) {
            int v = cov.summands[k];
            for (int p : A.paths(v, i)) {
                RatMatrix act = X.act_basis(p);  // X_v -> X_i
                std::vector<Rat> col(size_t(X.dim(i)), Rat(0));
                for (int r = 0; r < X.dim(i); ++r)
                    for (int c = 0; c < X.dim(v); ++c)
                        col[size_t(r)] += act(r, c) * gens[k].second[size_t(c)];
                cols.push_back(std::move(col));
            }
        }
        cov.pi.blocks.push_back(matrix_from_columns(X.dim(i), cols));
    }
    cov.P = std::move(P);
    return cov;
}

// Read the element matrix of a module map ⊕P_{u_j} -> ⊕P_{w_i} off the images
// of the summand generators (the idempotent paths).
inline ElemMatrix element_matrix(const Algebra& A, const std::vector<int>& src_summands,
                                 const std::vector<int>& tgt_summands,
                                 const std::vector<RatMatrix>& blocks) {
    ElemMatrix m(tgt_summands.size(), std::vector<AlgElem>(src_summands.size()));
    for (size_t j = 0; j < src_summands.size(); ++j) {
        int u = src_summands[j];
        // column of the generator e_u inside the vertex-u block of the source
        int col = 0;
        for (size_t k = 0; k < j; ++k)
            col += int(A.paths(src_summands[k], u).size());
        const auto& own = A.paths(u, u);
        auto self = std::find(own.begin(), own.end(), u);
        if (self == own.end()) throw ShapeError("element_matrix: missing idempotent path");
        col += int(self - own.begin());
        const RatMatrix& B = blocks[size_t(u)];
        int row = 0;
        for (size_t i = 0; i < tgt_summands.size(); ++i) {
            int w = tgt_summands[i];
            for (int p : A.paths(w, u)) {
                m[i][j].add(p, B(row, col));
                ++row;
            }
        }
        if (row != B.rows()) throw ShapeError("element_matrix: block height mismatch");
    }
    return m;
}

struct Resolution {
    std::vector<std::vector<int>> terms;  // terms[n] = projective summands of step n
    bool complete = false;                // kernel vanished within the bound

    int length() const { return int(terms.size()) - 1; }

    // As a cochain complex concentrated in degrees -len..0.
    ProjComplex complex(const Algebra& A) const {
        ProjComplex c;
        c.A = &A;
        c.lo = -(int(terms.size()) - 1);
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) c.terms.push_back(*it);
        for (size_t n = terms.size(); n-- > 1;) c.diffs.push_back(diff_elems[n - 1]);
        return c;
    }

    std::vector<ElemMatrix> diff_elems;  // diff_elems[n-1]: terms[n] -> terms[n-1]
};

// Minimal projective resolution ... -> P_1 -> P_0 -> X -> 0, computed by
// iterated projective covers of kernels; stops early once the kernel is zero.
inline Resolution minimal_projective_resolution(const Representation& X, int max_terms) {
    Resolution res;
    std::deque<Representation> store;  // stable addresses for kernels
    store.push_back(X);
    const Representation* cur = &store.back();
    std::optional<Cover> prev;
    while (int(res.terms.size()) < max_terms) {
        if (cur->is_zero()) {
            res.complete = true;
            break;
        }
        Cover cov = projective_cover(*cur);
        res.terms.push_back(cov.summands);
        if (prev) {
            // differential = (kernel inclusion) ∘ (new cover map)
            std::vector<RatMatrix> blocks;
            for (int v = 0; v < X.algebra().nvertices(); ++v)
                blocks.push_back(prev->pi.blocks[size_t(v)] * cov.pi.blocks[size_t(v)]);
            res.diff_elems.push_back(element_matrix(X.algebra(), cov.summands,
                                                    prev->summands, blocks));
        }
        cov.pi.src = &cov.P;
        auto [K, incl] = kernel(cov.pi);
        store.push_back(std::move(K));
        cur = &store.back();
        // fold the inclusion into the cover map so the next differential is a
        // map into the previous projective term
        Cover next_prev;
        next_prev.summands = cov.summands;
        next_prev.P = std::move(cov.P);
        next_prev.pi.blocks = std::move(incl.blocks);
        prev = std::move(next_prev);
    }
    return res;
}

// dim Ext^k(X, Y) for k = 0..max_k via Hom(P_•, Y); Hom(P_v, Y) = Y_v and a
// differential entry a in e_w A e_u acts by the module action of a.
inline std::vector<int> ext_dims(const Representation& X, const Representation& Y, int max_k) {
    Resolution res = minimal_projective_resolution(X, max_k + 2);
    auto hom_dim_at = [&](size_t n) {
        int d = 0;
        if (n < res.terms.size())
            for (int v : res.terms[n]) d += Y.dim(v);
        return d;
    };
    auto hom_matrix = [&](size_t n) {  // Hom(P_{n-1}, Y) -> Hom(P_n, Y)
        std::vector<int> roff{0}, coff{0};
        for (int v : res.terms[n]) roff.push_back(roff.back() + Y.dim(v));
        for (int v : res.terms[n - 1]) coff.push_back(coff.back() + Y.dim(v));
        RatMatrix m(roff.back(), coff.back());
        const ElemMatrix& d = res.diff_elems[n - 1];
        // d: terms[n] -> terms[n-1]; precomposition is contravariant
        for (size_t i = 0; i < res.terms[n].size(); ++i)
            for (size_t j = 0; j < res.terms[n - 1].size(); ++j) {
                const AlgElem& a = d[j][i];
                if (a.is_zero()) continue;
                // a in e_w A e_u with w = terms[n-1][j], u = terms[n][i];
                // phi -> phi∘a evaluates Y's action Y_w -> Y_u
                RatMatrix act(Y.dim(res.terms[n][i]), Y.dim(res.terms[n - 1][j]));
                for (const auto& [b, c] : a.c) act = act + Y.act_basis(b) * c;
                for (int r = 0; r < act.rows(); ++r)
                    for (int cidx = 0; cidx < act.cols(); ++cidx)
                        m(roff[i] + r, coff[j] + cidx) = act(r, cidx);
            }
        return m;
    };
    std::vector<int> out;
    std::vector<int> ranks;  // rank of Hom(P_{n-1},Y) -> Hom(P_n,Y)
    for (size_t n = 1; n < res.terms.size(); ++n) ranks.push_back(rank(hom_matrix(n)));
    for (int k = 0; k <= max_k; ++k) {
        int dim_k = hom_dim_at(size_t(k));
        int rk_in = (k >= 1 && k - 1 < int(ranks.size())) ? ranks[size_t(k - 1)] : 0;
        int rk_out = (k < int(ranks.size())) ? ranks[size_t(k)] : 0;
        out.push_back(dim_k - rk_in - rk_out);
    }
    return out;
}

// Projective dimension of X, or nullopt if it does not resolve within cap.
inline std::optional<int> projective_dimension(const Representation& X, int cap) {
    Resolution res = minimal_projective_resolution(X, cap + 2);
    if (!res.complete) return std::nullopt;
    return res.length();
}

inline std::optional<int> global_dimension(const Algebra& A, int cap = 24) {
    int g = 0;
    for (int v = 0; v < A.nvertices(); ++v) {
        auto pd = projective_dimension(simple_rep(A, v), cap);
        if (!pd) return std::nullopt;
        g = std::max(g, *pd);
    }
    return g;
}

}  // namespace serrescope
