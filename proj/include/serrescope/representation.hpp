#pragma once

#include <algorithm>
#include <functional>

#include "serrescope/algebra.hpp"

namespace serrescope {

inline RatMatrix matrix_from_columns(int rows, const std::vector<std::vector<Rat>>& cols) {
    RatMatrix m(rows, int(cols.size()));
    for (int j = 0; j < int(cols.size()); ++j) {
        if (int(cols[size_t(j)].size()) != rows) throw ShapeError("column length mismatch");
        for (int i = 0; i < rows; ++i) m(i, j) = cols[size_t(j)][size_t(i)];
    }
    return m;
}

// Right module over a quiver algebra: one space per vertex, one matrix per
// arrow mapping the source block to the target block (column convention, so a
// path acts by multiplying its arrow matrices right-to-left).
class Representation {
   public:
    Representation() = default;
    Representation(const Algebra& A, std::vector<int> dims)
        : A_(&A), dims_(std::move(dims)) {
        if (int(dims_.size()) != A.nvertices()) throw ShapeError("rep: dimension vector length");
        arrows_.reserve(size_t(A.quiver().narrows()));
        for (int a = 0; a < A.quiver().narrows(); ++a)
            arrows_.emplace_back(dims_[size_t(A.quiver().arrows[size_t(a)].tgt)],
                                 dims_[size_t(A.quiver().arrows[size_t(a)].src)]);
    }

    const Algebra& algebra() const { return *A_; }
    const std::vector<int>& dims() const { return dims_; }
    int dim(int v) const { return dims_[size_t(v)]; }
    int total_dim() const {
        int t = 0;
        for (int d : dims_) t += d;
        return t;
    }
    bool is_zero() const { return total_dim() == 0; }

    RatMatrix& arrow(int a) { return arrows_[size_t(a)]; }
    const RatMatrix& arrow(int a) const { return arrows_[size_t(a)]; }

    // Action of a composable arrow word (empty word at vertex v = identity).
    RatMatrix act_word(const std::vector<int>& word, int src_vertex) const {
        RatMatrix m = RatMatrix::identity(dim(src_vertex));
        for (int a : word) m = arrows_[size_t(a)] * m;
        return m;
    }
    // Action of a basis element (block src -> tgt); idempotents act as
    // identity on their own block.
    RatMatrix act_basis(int b) const {
        const auto& be = A_->basis(b);
        return act_word(be.word, be.src);
    }

    // The action respects every reduction of the algebra, hence the ideal.
    bool validate() const {
        for (int b = 0; b < A_->dim(); ++b) {
            const auto& be = A_->basis(b);
            for (int a = 0; a < A_->quiver().narrows(); ++a) {
                const Arrow& ar = A_->quiver().arrows[size_t(a)];
                if (be.tgt != ar.src) continue;
                RatMatrix lhs = arrows_[size_t(a)] * act_basis(b);
                RatMatrix rhs(dim(ar.tgt), dim(be.src));
                for (const auto& [i, v] : A_->mul(b, A_->arrow_basis(a)).c)
                    rhs = rhs + act_basis(i) * v;
                if (!(lhs == rhs)) return false;
            }
        }
        return true;
    }

   private:
    const Algebra* A_ = nullptr;
    std::vector<int> dims_;
    std::vector<RatMatrix> arrows_;
};

struct ModuleMap {
    const Representation* src = nullptr;
    const Representation* tgt = nullptr;
    std::vector<RatMatrix> blocks;  // per vertex, dim tgt_v x dim src_v

    bool is_zero() const {
        for (const auto& b : blocks)
            if (!b.is_zero()) return false;
        return true;
    }
    int rank() const {
        int r = 0;
        for (const auto& b : blocks) r += serrescope::rank(b);
        return r;
    }
    bool is_iso() const {
        for (size_t v = 0; v < blocks.size(); ++v) {
            if (blocks[v].rows() != blocks[v].cols()) return false;
            if (serrescope::rank(blocks[v]) != blocks[v].rows()) return false;
        }
        return true;
    }
};

inline ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
    // g after f
    if (f.tgt != g.src) throw ShapeError("module map composition mismatch");
    ModuleMap r;
    r.src = f.src;
    r.tgt = g.tgt;
    for (size_t v = 0; v < f.blocks.size(); ++v) r.blocks.push_back(g.blocks[v] * f.blocks[v]);
    return r;
}

// Basis of Hom_A(X, Y): block matrices commuting with every arrow action.
inline std::vector<ModuleMap> hom_space(const Representation& X, const Representation& Y) {
    const Algebra& A = X.algebra();
    int V = A.nvertices();
    // unknowns: entries of f_v stacked vertex by vertex
    std::vector<int> offset(size_t(V) + 1, 0);
    for (int v = 0; v < V; ++v)
        offset[size_t(v) + 1] = offset[size_t(v)] + X.dim(v) * Y.dim(v);
    int unknowns = offset[size_t(V)];
    std::vector<std::map<int, Rat>> rows;
    for (int a = 0; a < A.quiver().narrows(); ++a) {
        const Arrow& ar = A.quiver().arrows[size_t(a)];
        const RatMatrix& MX = X.arrow(a);
        const RatMatrix& MY = Y.arrow(a);
        // constraint: f_tgt * MX - MY * f_src = 0, one row per entry (i, j)
        for (int i = 0; i < Y.dim(ar.tgt); ++i)
            for (int j = 0; j < X.dim(ar.src); ++j) {
                std::map<int, Rat> row;
                for (int k = 0; k < X.dim(ar.tgt); ++k) {
                    if (is_zero(MX(k, j))) continue;
                    int idx = offset[size_t(ar.tgt)] + i * X.dim(ar.tgt) + k;
                    row[idx] += MX(k, j);
                }
                for (int k = 0; k < Y.dim(ar.src); ++k) {
                    if (is_zero(MY(i, k))) continue;
                    int idx = offset[size_t(ar.src)] + k * X.dim(ar.src) + j;
                    row[idx] -= MY(i, k);
                }
                if (!row.empty()) rows.push_back(std::move(row));
            }
    }
    RatMatrix sys(int(rows.size()), unknowns);
    for (int r = 0; r < int(rows.size()); ++r)
        for (const auto& [c, v] : rows[size_t(r)]) sys(r, c) = v;
    std::vector<ModuleMap> basis;
    for (const auto& vec : nullspace(sys)) {
        ModuleMap f;
        f.src = &X;
        f.tgt = &Y;
        for (int v = 0; v < V; ++v) {
            RatMatrix b(Y.dim(v), X.dim(v));
            for (int i = 0; i < Y.dim(v); ++i)
                for (int j = 0; j < X.dim(v); ++j)
                    b(i, j) = vec[size_t(offset[size_t(v)] + i * X.dim(v) + j)];
            f.blocks.push_back(std::move(b));
        }
        basis.push_back(std::move(f));
    }
    return basis;
}

inline int hom_dim(const Representation& X, const Representation& Y) {
    return int(hom_space(X, Y).size());
}

// Kernel with its inclusion; the arrow actions restrict because maps commute
// with them.
inline std::pair<Representation, ModuleMap> kernel(const ModuleMap& f) {
    const Representation& X = *f.src;
    const Algebra& A = X.algebra();
    std::vector<std::vector<std::vector<Rat>>> bases;  // per vertex kernel basis
    std::vector<int> kd;
    for (int v = 0; v < A.nvertices(); ++v) {
        auto ns = nullspace(f.blocks[size_t(v)]);
        kd.push_back(int(ns.size()));
        bases.push_back(std::move(ns));
    }
    Representation K(A, kd);
    for (int a = 0; a < A.quiver().narrows(); ++a) {
        const Arrow& ar = A.quiver().arrows[size_t(a)];
        RatMatrix incl_t = matrix_from_columns(X.dim(ar.tgt), bases[size_t(ar.tgt)]);
        RatMatrix mapped = X.arrow(a) * matrix_from_columns(X.dim(ar.src), bases[size_t(ar.src)]);
        // solve incl_t * N = mapped column by column
        RatMatrix N(kd[size_t(ar.tgt)], kd[size_t(ar.src)]);
        for (int j = 0; j < kd[size_t(ar.src)]; ++j) {
            auto col = solve(incl_t, mapped.col(j));
            if (!col) throw ShapeError("kernel: action does not restrict");
            for (int i = 0; i < kd[size_t(ar.tgt)]; ++i) N(i, j) = (*col)[size_t(i)];
        }
        K.arrow(a) = std::move(N);
    }
    ModuleMap incl;
    incl.src = nullptr;  // caller wires stable pointers
    incl.tgt = nullptr;
    for (int v = 0; v < A.nvertices(); ++v)
        incl.blocks.push_back(matrix_from_columns(X.dim(v), bases[size_t(v)]));
    return {std::move(K), std::move(incl)};
}

// Cokernel with its projection; the arrow actions descend because the image
// is a submodule.
inline std::pair<Representation, ModuleMap> cokernel(const ModuleMap& f) {
    const Representation& Y = *f.tgt;
    const Algebra& A = Y.algebra();
    int V = A.nvertices();
    std::vector<RatMatrix> proj;  // C_v <- Y_v
    std::vector<RatMatrix> sect;  // Y_v <- C_v, section along the image
    std::vector<int> cd;
    for (int v = 0; v < V; ++v) {
        const RatMatrix& B = f.blocks[size_t(v)];
        std::vector<std::vector<Rat>> cols;
        int r = 0;
        for (int j = 0; j < B.cols(); ++j) {
            cols.push_back(B.col(j));
            int r2 = rank(matrix_from_columns(Y.dim(v), cols));
            if (r2 > r)
                r = r2;
            else
                cols.pop_back();
        }
        int im = r;
        std::vector<int> comp;  // standard vectors completing the image basis
        for (int k = 0; k < Y.dim(v) && r < Y.dim(v); ++k) {
            std::vector<Rat> e(size_t(Y.dim(v)), Rat(0));
            e[size_t(k)] = Rat(1);
            cols.push_back(e);
            int r2 = rank(matrix_from_columns(Y.dim(v), cols));
            if (r2 > r) {
                r = r2;
                comp.push_back(k);
            } else {
                cols.pop_back();
            }
        }
        cd.push_back(int(comp.size()));
        RatMatrix P(int(comp.size()), Y.dim(v));
        RatMatrix S(Y.dim(v), int(comp.size()));
        if (!comp.empty()) {
            RatMatrix inv = inverse(matrix_from_columns(Y.dim(v), cols));
            for (int t = 0; t < int(comp.size()); ++t) {
                for (int j = 0; j < Y.dim(v); ++j) P(t, j) = inv(im + t, j);
                S(comp[size_t(t)], t) = Rat(1);
            }
        }
        proj.push_back(std::move(P));
        sect.push_back(std::move(S));
    }
    Representation C(A, cd);
    for (int a = 0; a < A.quiver().narrows(); ++a) {
        const Arrow& ar = A.quiver().arrows[size_t(a)];
        C.arrow(a) = proj[size_t(ar.tgt)] * (Y.arrow(a) * sect[size_t(ar.src)]);
    }
    ModuleMap pr;
    pr.src = nullptr;  // caller wires stable pointers
    pr.tgt = nullptr;
    pr.blocks = std::move(proj);
    return {std::move(C), std::move(pr)};
}

// P_v = e_v A, spanned at vertex i by the paths v -> i.
inline Representation projective_rep(const Algebra& A, int v) {
    std::vector<int> dims;
    for (int i = 0; i < A.nvertices(); ++i) dims.push_back(int(A.paths(v, i).size()));
    Representation P(A, dims);
    for (int a = 0; a < A.quiver().narrows(); ++a) {
        const Arrow& ar = A.quiver().arrows[size_t(a)];
        const auto& src_paths = A.paths(v, ar.src);
        const auto& tgt_paths = A.paths(v, ar.tgt);
        RatMatrix M(int(tgt_paths.size()), int(src_paths.size()));
        for (int j = 0; j < int(src_paths.size()); ++j) {
            AlgElem prod = A.mul(src_paths[size_t(j)], A.arrow_basis(a));
            for (const auto& [b, c] : prod.c) {
                auto it = std::find(tgt_paths.begin(), tgt_paths.end(), b);
                if (it == tgt_paths.end()) throw ShapeError("projective: basis mismatch");
                M(int(it - tgt_paths.begin()), j) = c;
            }
        }
        P.arrow(a) = std::move(M);
    }
    return P;
}

inline Representation simple_rep(const Algebra& A, int v) {
    std::vector<int> dims(size_t(A.nvertices()), 0);
    dims[size_t(v)] = 1;
    return Representation(A, dims);
}

// I_v = D(A e_v), spanned at vertex i by functionals on the paths i -> v; an
// arrow acts by precomposition with left multiplication.
inline Representation injective_rep(const Algebra& A, int v) {
    std::vector<int> dims;
    for (int i = 0; i < A.nvertices(); ++i) dims.push_back(int(A.paths(i, v).size()));
    Representation I(A, dims);
    for (int a = 0; a < A.quiver().narrows(); ++a) {
        const Arrow& ar = A.quiver().arrows[size_t(a)];
        const auto& src_paths = A.paths(ar.src, v);  // functionals live on these
        const auto& tgt_paths = A.paths(ar.tgt, v);
        // L: paths(tgt, v) -> paths(src, v), p -> alpha * p; act = L^T
        RatMatrix L(int(src_paths.size()), int(tgt_paths.size()));
        for (int j = 0; j < int(tgt_paths.size()); ++j) {
            AlgElem prod = A.mul(AlgElem::unit(A.arrow_basis(a)),
                                 AlgElem::unit(tgt_paths[size_t(j)]));
            for (const auto& [b, c] : prod.c) {
                auto it = std::find(src_paths.begin(), src_paths.end(), b);
                if (it == src_paths.end()) throw ShapeError("injective: basis mismatch");
                L(int(it - src_paths.begin()), j) = c;
            }
        }
        I.arrow(a) = L.transpose();
    }
    return I;
}

inline Representation direct_sum(const Representation& X, const Representation& Y) {
    const Algebra& A = X.algebra();
    std::vector<int> dims;
    for (int v = 0; v < A.nvertices(); ++v) dims.push_back(X.dim(v) + Y.dim(v));
    Representation S(A, dims);
    for (int a = 0; a < A.quiver().narrows(); ++a) {
        const Arrow& ar = A.quiver().arrows[size_t(a)];
        RatMatrix M(dims[size_t(ar.tgt)], dims[size_t(ar.src)]);
        for (int i = 0; i < X.dim(ar.tgt); ++i)
            for (int j = 0; j < X.dim(ar.src); ++j) M(i, j) = X.arrow(a)(i, j);
        for (int i = 0; i < Y.dim(ar.tgt); ++i)
            for (int j = 0; j < Y.dim(ar.src); ++j)
                M(X.dim(ar.tgt) + i, X.dim(ar.src) + j) = Y.arrow(a)(i, j);
        S.arrow(a) = std::move(M);
    }
    return S;
}

// Dimension vector of X / X.rad at each vertex: the radical image is the sum
// of all incoming arrow images.
inline std::vector<int> top_dims(const Representation& X) {
    const Algebra& A = X.algebra();
    std::vector<int> t;
    for (int v = 0; v < A.nvertices(); ++v) {
        std::vector<std::vector<Rat>> cols;
        for (int a = 0; a < A.quiver().narrows(); ++a) {
            if (A.quiver().arrows[size_t(a)].tgt != v) continue;
            const RatMatrix& M = X.arrow(a);
            for (int j = 0; j < M.cols(); ++j) cols.push_back(M.col(j));
        }
        int r = cols.empty() ? 0 : rank(matrix_from_columns(X.dim(v), cols));
        t.push_back(X.dim(v) - r);
    }
    return t;
}

// Two representations are isomorphic iff some linear combination of a hom
// basis is invertible; tried with deterministic pseudo-random coefficients,
// then exhaustively over a small box as a fallback.
inline bool isomorphic(const Representation& X, const Representation& Y) {
    if (X.dims() != Y.dims()) return false;
    if (X.total_dim() == 0) return true;
    auto basis = hom_space(X, Y);
    if (basis.empty()) return false;
    DetRng rng(0x5eed5eedULL);
    auto combine = [&](const std::vector<Rat>& coeffs) {
        ModuleMap f;
        f.src = &X;
        f.tgt = &Y;
        for (int v = 0; v < X.algebra().nvertices(); ++v) {
            RatMatrix b(Y.dim(v), X.dim(v));
            for (size_t k = 0; k < basis.size(); ++k)
                b = b + basis[k].blocks[size_t(v)] * coeffs[k];
            f.blocks.push_back(std::move(b));
        }
        return f;
    };
    for (int attempt = 0; attempt < 24; ++attempt) {
        std::vector<Rat> coeffs;
        for (size_t k = 0; k < basis.size(); ++k) coeffs.push_back(rat(rng.next_int(-7, 7)));
        if (combine(coeffs).is_iso()) return true;
    }
    // exhaustive over {-1,0,1}^k for small hom spaces
    if (basis.size() <= 6) {
        std::vector<Rat> coeffs(basis.size(), Rat(0));
        std::function<bool(size_t)> walk = [&](size_t k) {
            if (k == basis.size()) return combine(coeffs).is_iso();
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

// Deterministic pseudo-random module: the cokernel of a random map between
// small sums of projectives.  Every finite-dimensional module is such a
// cokernel, so sampling these covers dimension vectors broadly; the zero
// module can occur and is a legitimate sample.
inline Representation random_module(const Algebra& A, DetRng& rng) {
    int V = A.nvertices();
    auto proj_sum = [&](int count) {
        Representation P = projective_rep(A, int(rng.next_below(std::uint64_t(V))));
        for (int i = 1; i < count; ++i)
            P = direct_sum(P, projective_rep(A, int(rng.next_below(std::uint64_t(V)))));
        return P;
    };
    Representation src = proj_sum(int(rng.next_int(1, 2)));
    Representation tgt = proj_sum(int(rng.next_int(1, 3)));
    std::vector<ModuleMap> basis = hom_space(src, tgt);
    ModuleMap f;
    f.src = &src;
    f.tgt = &tgt;
    for (int v = 0; v < V; ++v) f.blocks.emplace_back(tgt.dim(v), src.dim(v));
    for (const auto& b : basis) {
        Rat c = rat(rng.next_int(-2, 2));
        if (serrescope::is_zero(c)) continue;
        for (int v = 0; v < V; ++v)
            f.blocks[size_t(v)] = f.blocks[size_t(v)] + b.blocks[size_t(v)] * c;
    }
    return cokernel(f).first;
}

}  // namespace serrescope
