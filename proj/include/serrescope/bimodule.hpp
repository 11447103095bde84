#pragma once

#include <tuple>

#include "serrescope/budget.hpp"
#include "serrescope/resolution.hpp"
#include "serrescope/sparse.hpp"

namespace serrescope {

// Bimodules over A are right modules over the enveloping algebra
// E = A^op (x) A.  The E-vertex (i, j) carries the component e_i M e_j; the
// E-basis element decoding to the pair (s, t) acts by m -> s m t.  For maps of
// projectives the same decoding reads Hom(P_(i,j), P_(i',j')) as pairs with
// s: i -> i' and t: j' -> j, composing by (s,t) after (s',t') =
// (s' s-first..) -- concretely E's own multiplication, so complexes of
// projective bimodules are ordinary ProjComplex values over E.  This context
// owns E and the pair decoding used by every functor below.
class BimodCtx {
  public:
    explicit BimodCtx(const Algebra& A) : A_(&A), E_(enveloping(A)) {
        const auto& pairs = E_.tensor_pairs();
        for (int k = 0; k < int(pairs.size()); ++k) index_.emplace(pairs[size_t(k)], k);
        path_pos_.resize(size_t(A.dim()));
        for (int i = 0; i < A.nvertices(); ++i)
            for (int j = 0; j < A.nvertices(); ++j) {
                const auto& ps = A.paths(i, j);
                for (size_t k = 0; k < ps.size(); ++k) path_pos_[size_t(ps[k])] = int(k);
            }
    }
    BimodCtx(const BimodCtx&) = delete;  // complexes hold pointers into E()
    BimodCtx& operator=(const BimodCtx&) = delete;

    const Algebra& A() const { return *A_; }
    const Algebra& E() const { return E_; }
    int V() const { return A_->nvertices(); }

    int evertex(int i, int j) const { return i * V() + j; }
    std::pair<int, int> vertex_pair(int ev) const { return {ev / V(), ev % V()}; }

    // E-basis index of the pair (s, t); both are A-basis indices (the op side
    // reuses A's indexing).
    int pair_basis(int s, int t) const {
        auto it = index_.find({s, t});
        if (it == index_.end()) throw ShapeError("bimodule: unknown tensor pair");
        return it->second;
    }
    const std::pair<int, int>& pair_of(int k) const { return E_.tensor_pairs()[size_t(k)]; }

    // Position of an A-basis path inside its paths(src, tgt) list.
    int path_pos(int b) const { return path_pos_[size_t(b)]; }

  private:
    const Algebra* A_;
    Algebra E_;
    std::map<std::pair<int, int>, int> index_;
    std::vector<int> path_pos_;
};

// A itself as a right E-module: component (i, j) = e_i A e_j with the
// paths(i, j) basis; the arrow decoding to (s, t) acts by x -> s x t.
inline Representation regular_bimodule_rep(const BimodCtx& ctx) {
    const Algebra& A = ctx.A();
    const Algebra& E = ctx.E();
    std::vector<int> dims(size_t(E.nvertices()), 0);
    for (int i = 0; i < ctx.V(); ++i)
        for (int j = 0; j < ctx.V(); ++j)
            dims[size_t(ctx.evertex(i, j))] = int(A.paths(i, j).size());
    Representation M(E, std::move(dims));
    for (int a = 0; a < E.quiver().narrows(); ++a) {
        const Arrow& ar = E.quiver().arrows[size_t(a)];
        auto [iu, ju] = ctx.vertex_pair(ar.src);
        auto [iw, jw] = ctx.vertex_pair(ar.tgt);
        auto [s, t] = ctx.pair_of(E.arrow_basis(a));
        const auto& src_b = A.paths(iu, ju);
        const auto& tgt_b = A.paths(iw, jw);
        RatMatrix m(int(tgt_b.size()), int(src_b.size()));
        for (size_t c = 0; c < src_b.size(); ++c) {
            AlgElem prod = A.mul(A.mul(s, src_b[c]), AlgElem::unit(t));
            for (size_t r = 0; r < tgt_b.size(); ++r) m(int(r), int(c)) = prod.coeff(tgt_b[r]);
        }
        M.arrow(a) = std::move(m);
    }
    return M;
}

// The dual bimodule DA as a right E-module: component (i, j) = D(e_j A e_i)
// with dual basis {p* : p in paths(j, i)}; the arrow decoding to (s, t) sends
// q* to the functional x -> q*(t x s), so the (p, q) entry is coeff_q(t p s).
inline Representation dual_bimodule_rep(const BimodCtx& ctx) {
    const Algebra& A = ctx.A();
    const Algebra& E = ctx.E();
    std::vector<int> dims(size_t(E.nvertices()), 0);
    for (int i = 0; i < ctx.V(); ++i)
        for (int j = 0; j < ctx.V(); ++j)
            dims[size_t(ctx.evertex(i, j))] = int(A.paths(j, i).size());
    Representation M(E, std::move(dims));
    for (int a = 0; a < E.quiver().narrows(); ++a) {
        const Arrow& ar = E.quiver().arrows[size_t(a)];
        auto [iu, ju] = ctx.vertex_pair(ar.src);
        auto [iw, jw] = ctx.vertex_pair(ar.tgt);
        auto [s, t] = ctx.pair_of(E.arrow_basis(a));
        const auto& src_b = A.paths(ju, iu);
        const auto& tgt_b = A.paths(jw, iw);
        RatMatrix m(int(tgt_b.size()), int(src_b.size()));
        for (size_t r = 0; r < tgt_b.size(); ++r) {
            AlgElem prod = A.mul(A.mul(t, tgt_b[r]), AlgElem::unit(s));
            for (size_t c = 0; c < src_b.size(); ++c) m(int(r), int(c)) = prod.coeff(src_b[c]);
        }
        M.arrow(a) = std::move(m);
    }
    return M;
}

// Minimal projective E-resolution of A, as a complex in degrees -len..0.
inline ProjComplex regular_bimodule_resolution(const BimodCtx& ctx, int max_terms = 64) {
    Resolution r = minimal_projective_resolution(regular_bimodule_rep(ctx), max_terms);
    if (!r.complete)
        throw RefusalError("regular bimodule has no finite projective resolution within the cap");
    return r.complex(ctx.E());
}

// Minimal projective E-resolution of DA: the complex of projective bimodules
// whose derived tensor is the Serre functor X -> X (x)^L_A DA.
inline ProjComplex dual_bimodule_resolution(const BimodCtx& ctx, int max_terms = 64) {
    Resolution r = minimal_projective_resolution(dual_bimodule_rep(ctx), max_terms);
    if (!r.complete)
        throw RefusalError("dual bimodule has no finite projective resolution within the cap");
    return r.complex(ctx.E());
}

// Hom_E(C, E) of a complex of projective bimodules, re-read as a complex of
// right E-modules through the side swap Hom(P_(i,j), E) = P_(j,i): summands
// reflect, degrees negate, and every entry pair (s, t) becomes (t, s) at the
// transposed position.  Applied to a resolution of A this gives the inverse
// dualizing complex, the kernel of the inverse Serre functor.
inline ProjComplex bimodule_dual(const BimodCtx& ctx, const ProjComplex& C) {
    ProjComplex D;
    D.A = &ctx.E();
    D.lo = -C.hi();
    size_t n = C.terms.size();
    D.terms.resize(n);
    for (size_t k = 0; k < n; ++k) {
        const auto& src = C.terms[n - 1 - k];
        auto& out = D.terms[k];
        out.reserve(src.size());
        for (int v : src) {
            auto [i, j] = ctx.vertex_pair(v);
            out.push_back(ctx.evertex(j, i));
        }
    }
    for (size_t k = C.diffs.size(); k-- > 0;) {
        const ElemMatrix& d = C.diffs[k];  // C^{lo+k} -> C^{lo+k+1}
        ElemMatrix m(C.terms[k].size(), std::vector<AlgElem>(C.terms[k + 1].size()));
        for (size_t i = 0; i < d.size(); ++i)
            for (size_t j = 0; j < d[i].size(); ++j)
                for (const auto& [b, v] : d[i][j].c) {
                    auto [s, t] = ctx.pair_of(b);
                    m[j][i].add(ctx.pair_basis(t, s), v);
                }
        D.diffs.push_back(std::move(m));
    }
    return D;
}

// Complex of projective E-modules with sparse differentials, for the tensor
// towers whose dense element matrices would not fit in memory.  Entries are
// (row, col, E-basis, coefficient) with the same Hom convention as ProjComplex.
struct SparseProjComplex {
    const Algebra* E = nullptr;
    int lo = 0;
    std::vector<std::vector<int>> terms;
    using Entry = std::tuple<int, int, int, Rat>;
    std::vector<std::vector<Entry>> diffs;  // diffs[k]: degree lo+k -> lo+k+1

    int hi() const { return lo + int(terms.size()) - 1; }
    bool in_range(int d) const { return d >= lo && d <= hi(); }
    const std::vector<int>& term(int d) const {
        static const std::vector<int> empty;
        return in_range(d) ? terms[size_t(d - lo)] : empty;
    }
    int summand_count() const {
        int c = 0;
        for (const auto& t : terms) c += int(t.size());
        return c;
    }
    Int materialized_dim() const {
        Int total = 0;
        IntMatrix C = E->cartan_matrix();
        std::vector<Int> colsum(size_t(C.cols()), 0);
        for (int j = 0; j < C.cols(); ++j)
            for (int i = 0; i < C.rows(); ++i) colsum[size_t(j)] += C(i, j);
        for (const auto& t : terms)
            for (int v : t) total += colsum[size_t(v)];
        return total;
    }
    Int cells() const { return Int(summand_count()) + materialized_dim(); }
    // rational entries actually stored: the quantity the resource budget meters
    Int entry_count() const {
        Int n = 0;
        for (const auto& d : diffs) n += Int(d.size());
        return n;
    }

    // X[s]: degree n of the shift is degree n+s of X; odd shifts negate d
    SparseProjComplex shifted(int s) const {
        SparseProjComplex out = *this;
        out.lo -= s;
        if (s % 2 != 0)
            for (auto& d : out.diffs)
                for (auto& e : d) std::get<3>(e) = -std::get<3>(e);
        return out;
    }

    void check_d_squared() const {
        for (size_t k = 0; k + 1 < diffs.size(); ++k) {
            std::vector<std::vector<std::pair<int, AlgElem>>> bycol(terms[k + 1].size());
            for (const auto& [r, c, b, v] : diffs[k + 1])
                bycol[size_t(c)].emplace_back(r, AlgElem::unit(b, v));
            std::map<std::pair<int, int>, AlgElem> acc;
            for (const auto& [r, c, b, v] : diffs[k])
                for (const auto& [r2, e2] : bycol[size_t(r)]) {
                    AlgElem prod = E->mul(e2, AlgElem::unit(b, v));
                    AlgElem& cell = acc[{r2, c}];
                    for (const auto& [pb, pv] : prod.c) cell.add(pb, pv);
                }
            for (const auto& [rc, e] : acc) {
                (void)rc;
                if (!e.is_zero()) throw ShapeError("sparse complex: d^2 != 0");
            }
        }
    }
};

inline SparseProjComplex sparse_from_dense(const ProjComplex& C) {
    SparseProjComplex S;
    S.E = C.A;
    S.lo = C.lo;
    S.terms = C.terms;
    S.diffs.resize(C.diffs.size());
    for (size_t k = 0; k < C.diffs.size(); ++k)
        for (size_t i = 0; i < C.diffs[k].size(); ++i)
            for (size_t j = 0; j < C.diffs[k][i].size(); ++j)
                for (const auto& [b, v] : C.diffs[k][i][j].c)
                    S.diffs[k].emplace_back(int(i), int(j), b, v);
    return S;
}

namespace detail {

// Offset bookkeeping for tensor summand blocks keyed by (degree of the left
// factor, left summand index, right summand index).
struct BlockIndex {
    std::vector<std::map<std::tuple<int, int, int>, int>> off;  // per output slot
    int base(size_t slot, int p, int a, int b) const {
        const auto& m = off[slot];
        auto it = m.find({p, a, b});
        if (it == m.end()) throw ShapeError("tensor: missing summand block");
        return it->second;
    }
};

}  // namespace detail

// M (x)_A N for complexes of projective bimodules: P_(i,j) (x)_A P_(k,l) =
// (e_j A e_k) copies of P_(i,l), each output summand tagged by (left degree p,
// left summand, right summand, connecting path m in paths(j, k)).  The
// differential is dM (x) id + (-1)^p id (x) dN with
//   dM entry (s, t):  m -> t m,  output pair (s, e_l),
//   dN entry (s', t'): m -> m s', output pair (e_i, t').
// Counts are checked against cell_cap (when positive) before any entry is
// materialized.
inline SparseProjComplex tensor_bimodule_bimodule(const BimodCtx& ctx, const SparseProjComplex& M,
                                                  const ProjComplex& N, const Int& cell_cap = 0) {
    const Algebra& A = ctx.A();
    SparseProjComplex out;
    out.E = &ctx.E();
    out.lo = M.lo + N.lo;
    int hi = M.hi() + N.hi();
    size_t nslots = M.terms.empty() || N.terms.empty() ? 0 : size_t(hi - out.lo + 1);
    out.terms.resize(nslots);
    detail::BlockIndex idx;
    idx.off.resize(nslots);
    for (int n = out.lo; n <= hi && nslots; ++n) {
        size_t slot = size_t(n - out.lo);
        for (int p = M.lo; p <= M.hi(); ++p) {
            int q = n - p;
            if (!N.in_range(q)) continue;
            const auto& mt = M.term(p);
            const auto& nt = N.term(q);
            for (int a = 0; a < int(mt.size()); ++a) {
                auto [i, j] = ctx.vertex_pair(mt[size_t(a)]);
                (void)i;
                for (int b = 0; b < int(nt.size()); ++b) {
                    auto [k, l] = ctx.vertex_pair(nt[size_t(b)]);
                    size_t npaths = A.paths(j, k).size();
                    if (npaths == 0) continue;
                    idx.off[slot].emplace(std::make_tuple(p, a, b), int(out.terms[slot].size()));
                    int ev = ctx.evertex(i, l);
                    for (size_t mm = 0; mm < npaths; ++mm) out.terms[slot].push_back(ev);
                }
            }
        }
    }
    if (cell_cap > 0 && out.cells() > cell_cap)
        throw BudgetError("tensor complex needs " + to_string(out.cells()) +
                          " cells, over the cap of " + to_string(cell_cap));
    if (nslots) out.diffs.resize(nslots - 1);
    // dM (x) id
    for (int p = M.lo; p < M.hi(); ++p) {
        size_t mslot = size_t(p - M.lo);
        for (const auto& [a2, a, eb, v] : M.diffs[mslot]) {
            auto [s, t] = ctx.pair_of(eb);
            int ja = ctx.vertex_pair(M.terms[mslot][size_t(a)]).second;
            for (int q = N.lo; q <= N.hi(); ++q) {
                const auto& nt = N.term(q);
                int n = p + q;
                size_t slot = size_t(n - out.lo);
                for (int b = 0; b < int(nt.size()); ++b) {
                    auto [k, l] = ctx.vertex_pair(nt[size_t(b)]);
                    const auto& ms = A.paths(ja, k);
                    if (ms.empty()) continue;
                    int src_base = idx.base(slot, p, a, b);
                    int pair_sl = ctx.pair_basis(s, A.idempotent(l));
                    for (size_t mpos = 0; mpos < ms.size(); ++mpos) {
                        const AlgElem& prod = A.mul(t, ms[mpos]);
                        for (const auto& [mb, cf] : prod.c) {
                            int tgt_base = idx.base(slot + 1, p + 1, a2, b);
                            out.diffs[slot].emplace_back(tgt_base + ctx.path_pos(mb),
                                                         src_base + int(mpos), pair_sl, v * cf);
                        }
                    }
                }
            }
        }
    }
    // (-1)^p id (x) dN
    for (int q = N.lo; q < N.hi(); ++q) {
        size_t nslot = size_t(q - N.lo);
        const ElemMatrix& dn = N.diffs[nslot];
        for (int p = M.lo; p <= M.hi(); ++p) {
            const auto& mt = M.term(p);
            if (mt.empty()) continue;
            int n = p + q;
            size_t slot = size_t(n - out.lo);
            Rat sign = (p % 2 == 0) ? Rat(1) : Rat(-1);
            for (int a = 0; a < int(mt.size()); ++a) {
                auto [i, j] = ctx.vertex_pair(mt[size_t(a)]);
                for (size_t b2 = 0; b2 < dn.size(); ++b2)
                    for (size_t b = 0; b < dn[b2].size(); ++b) {
                        const AlgElem& psi = dn[b2][b];
                        if (psi.is_zero()) continue;
                        auto [k, l] = ctx.vertex_pair(N.term(q)[b]);
                        (void)l;
                        const auto& ms = A.paths(j, k);
                        if (ms.empty()) continue;
                        int src_base = idx.base(slot, p, a, int(b));
                        for (const auto& [eb, v] : psi.c) {
                            auto [s2, t2] = ctx.pair_of(eb);
                            int pair_it = ctx.pair_basis(A.idempotent(i), t2);
                            for (size_t mpos = 0; mpos < ms.size(); ++mpos) {
                                const AlgElem& prod = A.mul(ms[mpos], s2);
                                for (const auto& [mb, cf] : prod.c) {
                                    int tgt_base = idx.base(slot + 1, p, a, int(b2));
                                    out.diffs[slot].emplace_back(tgt_base + ctx.path_pos(mb),
                                                                 src_base + int(mpos), pair_it,
                                                                 sign * v * cf);
                                }
                            }
                        }
                    }
            }
        }
    }
    return out;
}

inline ProjComplex dense_from_sparse(const SparseProjComplex& S) {
    ProjComplex C;
    C.A = S.E;
    C.lo = S.lo;
    C.terms = S.terms;
    for (size_t k = 0; k + 1 < S.terms.size(); ++k) {
        ElemMatrix d(S.terms[k + 1].size(), std::vector<AlgElem>(S.terms[k].size()));
        for (const auto& [r, c, b, v] : S.diffs[k]) d[size_t(r)][size_t(c)].add(b, v);
        C.diffs.push_back(std::move(d));
    }
    return C;
}

namespace detail {

// Streaming Gaussian reduction of a sparse complex of projectives, one
// differential at a time.  Cancelling an entry with an invertible component
// only rewrites the differential it lives in (the adjacent ones just lose the
// row/column, by d^2 = 0), so a single forward sweep over the slots produces a
// complex with no unit entries while holding at most one unreduced slot in
// memory.  Summands killed as targets of slot n are skipped as sources of slot
// n+1; rows killed retroactively are filtered in finish().
class TowerReducer {
  public:
    TowerReducer(const Algebra& B, int lo, std::vector<std::vector<int>> terms)
        : B_(&B), lo_(lo), terms_(std::move(terms)) {
        for (const auto& t : terms_) dead_.emplace_back(t.size(), char(0));
        done_.resize(terms_.size() ? terms_.size() - 1 : 0);
    }

    const std::vector<std::vector<int>>& terms() const { return terms_; }
    bool source_dead(size_t slot, int c) const { return dead_[slot][size_t(c)] != 0; }

    void process_slot(size_t n, std::vector<SparseProjComplex::Entry>&& raw) {
        const Algebra& E = *B_;
        size_t S = terms_[n].size(), T = terms_[n + 1].size();
        std::vector<std::map<int, AlgElem>> col(S);
        std::vector<std::set<int>> row(T);
        for (auto& [r, c, b, v] : raw) {
            if (dead_[n][size_t(c)] || dead_[n + 1][size_t(r)]) continue;
            col[size_t(c)][r].add(b, v);
        }
        raw.clear();
        raw.shrink_to_fit();
        for (size_t c = 0; c < S; ++c)
            for (auto it = col[c].begin(); it != col[c].end();)
                if (it->second.is_zero())
                    it = col[c].erase(it);
                else
                    row[size_t(it->first)].insert(int(c)), ++it;

        auto unit_part = [&](int r, int c, const AlgElem& e) -> bool {
            int v = terms_[n + 1][size_t(r)];
            return terms_[n][size_t(c)] == v && !serrescope::is_zero(e.coeff(v));
        };
        using QE = std::array<long long, 3>;  // {cost, row, col}
        std::set<QE> queue;
        auto cost_of = [&](int r, int c) {
            return (long long)(col[size_t(c)].size() - 1) * (long long)(row[size_t(r)].size() - 1);
        };
        for (size_t c = 0; c < S; ++c)
            for (const auto& [r, e] : col[c])
                if (unit_part(r, int(c), e)) queue.insert({cost_of(r, int(c)), r, (long long)c});

        while (!queue.empty()) {
            auto [cost, r0l, c0l] = *queue.begin();
            queue.erase(queue.begin());
            int r0 = int(r0l), c0 = int(c0l);
            auto it0 = col[size_t(c0)].find(r0);
            if (it0 == col[size_t(c0)].end() || !unit_part(r0, c0, it0->second)) continue;
            long long now = cost_of(r0, c0);
            if (now > cost) {
                queue.insert({now, r0, c0});
                continue;
            }
            AlgElem inv = local_inverse(E, terms_[n][size_t(c0)], it0->second);
            std::vector<std::pair<int, AlgElem>> col_rs;  // other entries of column c0
            for (const auto& [r, e] : col[size_t(c0)])
                if (r != r0) col_rs.emplace_back(r, e);
            std::vector<int> row_cs;  // other columns meeting row r0
            for (int c : row[size_t(r0)])
                if (c != c0) row_cs.push_back(c);
            for (const auto& [r, f] : col_rs) {
                AlgElem pre = E.mul(f, inv);
                for (int c : row_cs) {
                    AlgElem corr = E.mul(pre, col[size_t(c)].at(r0));
                    if (corr.is_zero()) continue;
                    AlgElem& cell = col[size_t(c)][r];
                    bool was_empty = cell.is_zero();
                    for (const auto& [b, v] : corr.c) cell.add(b, -v);
                    if (cell.is_zero()) {
                        col[size_t(c)].erase(r);
                        row[size_t(r)].erase(c);
                    } else {
                        if (was_empty) row[size_t(r)].insert(c);
                        if (unit_part(r, c, cell)) queue.insert({cost_of(r, c), r, c});
                    }
                }
            }
            for (int c : row[size_t(r0)]) col[size_t(c)].erase(r0);
            row[size_t(r0)].clear();
            for (const auto& [r, e] : col[size_t(c0)]) {
                (void)e;
                row[size_t(r)].erase(c0);
            }
            col[size_t(c0)].clear();
            dead_[n][size_t(c0)] = 1;
            dead_[n + 1][size_t(r0)] = 1;
        }

        auto& out = done_[n];
        for (size_t c = 0; c < S; ++c)
            for (const auto& [r, e] : col[c])
                for (const auto& [b, v] : e.c)
                    if (!serrescope::is_zero(v)) out.emplace_back(r, int(c), b, v);
    }

    SparseProjComplex finish() {
        SparseProjComplex out;
        out.E = B_;
        std::vector<std::vector<int>> remap;
        for (size_t k = 0; k < terms_.size(); ++k) {
            remap.emplace_back(terms_[k].size(), -1);
            std::vector<int> t;
            for (size_t j = 0; j < terms_[k].size(); ++j)
                if (!dead_[k][j]) {
                    remap[k][j] = int(t.size());
                    t.push_back(terms_[k][j]);
                }
            out.terms.push_back(std::move(t));
        }
        for (size_t k = 0; k < done_.size(); ++k) {
            std::vector<SparseProjComplex::Entry> d;
            for (const auto& [r, c, b, v] : done_[k])
                if (!dead_[k][size_t(c)] && !dead_[k + 1][size_t(r)])
                    d.emplace_back(remap[k + 1][size_t(r)], remap[k][size_t(c)], b, v);
            out.diffs.push_back(std::move(d));
        }
        // strip empty leading/trailing degrees
        out.lo = lo_;
        while (!out.terms.empty() && out.terms.front().empty()) {
            out.terms.erase(out.terms.begin());
            if (!out.diffs.empty()) out.diffs.erase(out.diffs.begin());
            ++out.lo;
        }
        while (!out.terms.empty() && out.terms.back().empty()) {
            out.terms.pop_back();
            if (!out.diffs.empty()) out.diffs.pop_back();
        }
        return out;
    }

  private:
    const Algebra* B_;
    int lo_;
    std::vector<std::vector<int>> terms_;
    std::vector<std::vector<char>> dead_;
    std::vector<std::vector<SparseProjComplex::Entry>> done_;
};

}  // namespace detail

// Gaussian-reduce an existing sparse complex to one with no unit entries (the
// minimal representative of its homotopy class).  Works over any algebra.
inline SparseProjComplex reduce_complex(const Algebra& B, const SparseProjComplex& T) {
    detail::TowerReducer red(B, T.lo, T.terms);
    for (size_t n = 0; n + 1 < T.terms.size(); ++n) {
        std::vector<SparseProjComplex::Entry> raw = T.diffs[n];
        red.process_slot(n, std::move(raw));
    }
    return red.finish();
}

inline SparseProjComplex reduce_complex(const BimodCtx& ctx, const SparseProjComplex& T) {
    return reduce_complex(ctx.E(), T);
}

// M (x)_A N reduced on the fly: the unreduced product is generated one
// differential at a time and each slot is Gaussian-reduced before the next is
// materialized, so the full unreduced complex never exists.  cell_cap bounds
// the rational entries kept by the reduced result; the unreduced summand
// skeleton (cheap to enumerate, but the transient high-water mark) is allowed
// 16x that.
inline SparseProjComplex tensor_bimodule_reduced(const BimodCtx& ctx, const SparseProjComplex& M,
                                                 const ProjComplex& N, const Int& cell_cap = 0) {
    const Algebra& A = ctx.A();
    if (M.terms.empty() || N.terms.empty()) {
        SparseProjComplex out;
        out.E = &ctx.E();
        out.lo = M.lo + N.lo;
        return out;
    }
    int lo = M.lo + N.lo;
    int hi = M.hi() + N.hi();
    size_t nslots = size_t(hi - lo + 1);
    std::vector<std::vector<int>> terms(nslots);
    detail::BlockIndex idx;
    idx.off.resize(nslots);
    for (int n = lo; n <= hi; ++n) {
        size_t slot = size_t(n - lo);
        for (int p = M.lo; p <= M.hi(); ++p) {
            int q = n - p;
            if (!N.in_range(q)) continue;
            const auto& mt = M.term(p);
            const auto& nt = N.term(q);
            for (int a = 0; a < int(mt.size()); ++a) {
                auto [i, j] = ctx.vertex_pair(mt[size_t(a)]);
                for (int b = 0; b < int(nt.size()); ++b) {
                    auto [k, l] = ctx.vertex_pair(nt[size_t(b)]);
                    size_t npaths = A.paths(j, k).size();
                    if (npaths == 0) continue;
                    idx.off[slot].emplace(std::make_tuple(p, a, b), int(terms[slot].size()));
                    int ev = ctx.evertex(i, l);
                    for (size_t mm = 0; mm < npaths; ++mm) terms[slot].push_back(ev);
                }
            }
        }
    }
    detail::TowerReducer red(ctx.E(), lo, terms);
    if (cell_cap > 0) {
        SparseProjComplex probe;
        probe.E = &ctx.E();
        probe.lo = lo;
        probe.terms = terms;
        Int allowance = cell_cap * 16;
        if (probe.cells() > allowance)
            throw BudgetError("tensor complex needs " + to_string(probe.cells()) +
                              " cells before reduction, over the transient allowance of " +
                              to_string(allowance));
    }

    for (size_t slot = 0; slot + 1 < nslots; ++slot) {
        int n = lo + int(slot);
        std::vector<SparseProjComplex::Entry> raw;
        // dM (x) id contributions to degree n -> n+1
        for (int p = M.lo; p < M.hi(); ++p) {
            int q = n - p;
            if (!N.in_range(q)) continue;
            size_t mslot = size_t(p - M.lo);
            const auto& nt = N.term(q);
            for (const auto& [a2, a, eb, v] : M.diffs[mslot]) {
                auto [s, t] = ctx.pair_of(eb);
                int ja = ctx.vertex_pair(M.terms[mslot][size_t(a)]).second;
                for (int b = 0; b < int(nt.size()); ++b) {
                    auto [k, l] = ctx.vertex_pair(nt[size_t(b)]);
                    const auto& ms = A.paths(ja, k);
                    if (ms.empty()) continue;
                    int src_base = idx.base(slot, p, a, b);
                    int pair_sl = ctx.pair_basis(s, A.idempotent(l));
                    for (size_t mpos = 0; mpos < ms.size(); ++mpos) {
                        int src = src_base + int(mpos);
                        if (red.source_dead(slot, src)) continue;
                        const AlgElem& prod = A.mul(t, ms[mpos]);
                        for (const auto& [mb, cf] : prod.c) {
                            int tgt_base = idx.base(slot + 1, p + 1, a2, b);
                            raw.emplace_back(tgt_base + ctx.path_pos(mb), src, pair_sl, v * cf);
                        }
                    }
                }
            }
        }
        // (-1)^p id (x) dN contributions
        for (int p = M.lo; p <= M.hi(); ++p) {
            int q = n - p;
            if (q < N.lo || q >= N.hi()) continue;
            const auto& mt = M.term(p);
            if (mt.empty()) continue;
            size_t nslot = size_t(q - N.lo);
            const ElemMatrix& dn = N.diffs[nslot];
            Rat sign = (p % 2 == 0) ? Rat(1) : Rat(-1);
            for (int a = 0; a < int(mt.size()); ++a) {
                auto [i, j] = ctx.vertex_pair(mt[size_t(a)]);
                for (size_t b2 = 0; b2 < dn.size(); ++b2)
                    for (size_t b = 0; b < dn[b2].size(); ++b) {
                        const AlgElem& psi = dn[b2][b];
                        if (psi.is_zero()) continue;
                        auto [k, l] = ctx.vertex_pair(N.term(q)[b]);
                        (void)l;
                        const auto& ms = A.paths(j, k);
                        if (ms.empty()) continue;
                        int src_base = idx.base(slot, p, a, int(b));
                        for (const auto& [eb, v] : psi.c) {
                            auto [s2, t2] = ctx.pair_of(eb);
                            int pair_it = ctx.pair_basis(A.idempotent(i), t2);
                            for (size_t mpos = 0; mpos < ms.size(); ++mpos) {
                                int src = src_base + int(mpos);
                                if (red.source_dead(slot, src)) continue;
                                const AlgElem& prod = A.mul(ms[mpos], s2);
                                for (const auto& [mb, cf] : prod.c) {
                                    int tgt_base = idx.base(slot + 1, p, a, int(b2));
                                    raw.emplace_back(tgt_base + ctx.path_pos(mb), src, pair_it,
                                                     sign * v * cf);
                                }
                            }
                        }
                    }
            }
        }
        red.process_slot(slot, std::move(raw));
    }
    SparseProjComplex out = red.finish();
    if (cell_cap > 0 && out.entry_count() > cell_cap)
        throw BudgetError("reduced tensor complex stores " + to_string(out.entry_count()) +
                          " entries, over the cap of " + to_string(cell_cap));
    return out;
}

// One-term complex P_{v0} (+) P_{v1} (+) ... sitting in a single degree.
inline SparseProjComplex sparse_stalk(const Algebra& A, int degree, std::vector<int> vertices) {
    SparseProjComplex out;
    out.E = &A;
    out.lo = degree;
    out.terms.push_back(std::move(vertices));
    return out;
}

// X (x)_A N for X a sparse complex of projective right A-modules, fused with
// Gaussian reduction exactly like tensor_bimodule_reduced.  Summand rule:
// P_u (x) P_(i,j) = (e_u A e_i) copies of P_j; differential rules as in
// tensor_complex_bimodule.
inline SparseProjComplex tensor_module_bimodule_reduced(const BimodCtx& ctx,
                                                        const SparseProjComplex& X,
                                                        const ProjComplex& N,
                                                        const Int& cell_cap = 0) {
    const Algebra& A = ctx.A();
    if (X.terms.empty() || N.terms.empty()) {
        SparseProjComplex out;
        out.E = &A;
        out.lo = X.lo + N.lo;
        return out;
    }
    int lo = X.lo + N.lo;
    int hi = X.hi() + N.hi();
    size_t nslots = size_t(hi - lo + 1);
    std::vector<std::vector<int>> terms(nslots);
    detail::BlockIndex idx;
    idx.off.resize(nslots);
    for (int n = lo; n <= hi; ++n) {
        size_t slot = size_t(n - lo);
        for (int p = X.lo; p <= X.hi(); ++p) {
            int q = n - p;
            if (!N.in_range(q)) continue;
            const auto& xt = X.term(p);
            const auto& nt = N.term(q);
            for (int a = 0; a < int(xt.size()); ++a) {
                int u = xt[size_t(a)];
                for (int b = 0; b < int(nt.size()); ++b) {
                    auto [i, j] = ctx.vertex_pair(nt[size_t(b)]);
                    size_t npaths = A.paths(u, i).size();
                    if (npaths == 0) continue;
                    idx.off[slot].emplace(std::make_tuple(p, a, b), int(terms[slot].size()));
                    for (size_t mm = 0; mm < npaths; ++mm) terms[slot].push_back(j);
                }
            }
        }
    }
    detail::TowerReducer red(A, lo, terms);
    if (cell_cap > 0) {
        SparseProjComplex probe;
        probe.E = &A;
        probe.lo = lo;
        probe.terms = terms;
        Int allowance = cell_cap * 16;
        if (probe.cells() > allowance)
            throw BudgetError("tensor complex needs " + to_string(probe.cells()) +
                              " cells before reduction, over the transient allowance of " +
                              to_string(allowance));
    }

    for (size_t slot = 0; slot + 1 < nslots; ++slot) {
        int n = lo + int(slot);
        std::vector<SparseProjComplex::Entry> raw;
        // dX (x) id contributions to degree n -> n+1
        for (int p = X.lo; p < X.hi(); ++p) {
            int q = n - p;
            if (!N.in_range(q)) continue;
            size_t xslot = size_t(p - X.lo);
            const auto& nt = N.term(q);
            for (const auto& [a2, a, xb, v] : X.diffs[xslot]) {
                int u = X.terms[xslot][size_t(a)];
                for (int b = 0; b < int(nt.size()); ++b) {
                    auto [i, j] = ctx.vertex_pair(nt[size_t(b)]);
                    const auto& ms = A.paths(u, i);
                    if (ms.empty()) continue;
                    int src_base = idx.base(slot, p, a, b);
                    int ej = A.idempotent(j);
                    for (size_t mpos = 0; mpos < ms.size(); ++mpos) {
                        int src = src_base + int(mpos);
                        if (red.source_dead(slot, src)) continue;
                        const AlgElem& prod = A.mul(xb, ms[mpos]);
                        for (const auto& [mb, cf] : prod.c) {
                            int tgt_base = idx.base(slot + 1, p + 1, a2, b);
                            raw.emplace_back(tgt_base + ctx.path_pos(mb), src, ej, v * cf);
                        }
                    }
                }
            }
        }
        // (-1)^p id (x) dN contributions
        for (int p = X.lo; p <= X.hi(); ++p) {
            int q = n - p;
            if (q < N.lo || q >= N.hi()) continue;
            const auto& xt = X.term(p);
            if (xt.empty()) continue;
            size_t nslot = size_t(q - N.lo);
            const ElemMatrix& dn = N.diffs[nslot];
            Rat sign = (p % 2 == 0) ? Rat(1) : Rat(-1);
            for (int a = 0; a < int(xt.size()); ++a) {
                int u = xt[size_t(a)];
                for (size_t b2 = 0; b2 < dn.size(); ++b2)
                    for (size_t b = 0; b < dn[b2].size(); ++b) {
                        const AlgElem& psi = dn[b2][b];
                        if (psi.is_zero()) continue;
                        auto [i, j] = ctx.vertex_pair(N.term(q)[b]);
                        (void)j;
                        const auto& ms = A.paths(u, i);
                        if (ms.empty()) continue;
                        int src_base = idx.base(slot, p, a, int(b));
                        for (const auto& [eb, v] : psi.c) {
                            auto [s2, t2] = ctx.pair_of(eb);
                            for (size_t mpos = 0; mpos < ms.size(); ++mpos) {
                                int src = src_base + int(mpos);
                                if (red.source_dead(slot, src)) continue;
                                const AlgElem& prod = A.mul(ms[mpos], s2);
                                for (const auto& [mb, cf] : prod.c) {
                                    int tgt_base = idx.base(slot + 1, p, a, int(b2));
                                    raw.emplace_back(tgt_base + ctx.path_pos(mb), src, t2,
                                                     sign * v * cf);
                                }
                            }
                        }
                    }
            }
        }
        red.process_slot(slot, std::move(raw));
    }
    SparseProjComplex out = red.finish();
    if (cell_cap > 0 && out.entry_count() > cell_cap)
        throw BudgetError("reduced tensor complex stores " + to_string(out.entry_count()) +
                          " entries, over the cap of " + to_string(cell_cap));
    return out;
}

// Per-vertex cohomology dimensions of a sparse complex of projectives over A,
// via sparse rank on the vertex-i component (P_u contributes paths(u, i), an
// entry b in Hom(P_u, P_w) acts by left multiplication).
inline std::map<int, std::vector<int>> sparse_complex_cohomology(const Algebra& A,
                                                                 const SparseProjComplex& X) {
    std::map<int, std::vector<int>> out;
    if (X.terms.empty()) return out;
    int V = A.nvertices();
    std::vector<int> path_pos(size_t(A.dim()), 0);
    for (int i = 0; i < V; ++i)
        for (int j = 0; j < V; ++j) {
            const auto& ps = A.paths(i, j);
            for (size_t k = 0; k < ps.size(); ++k) path_pos[size_t(ps[k])] = int(k);
        }
    for (int i = 0; i < V; ++i) {
        VectComplex vc;
        vc.lo = X.lo;
        std::vector<std::vector<int>> off(X.terms.size());
        for (size_t k = 0; k < X.terms.size(); ++k) {
            int d = 0;
            for (int u : X.terms[k]) {
                off[k].push_back(d);
                d += int(A.paths(u, i).size());
            }
            vc.dims.push_back(d);
        }
        for (size_t k = 0; k + 1 < X.terms.size(); ++k) {
            SparseMat m(vc.dims[k + 1], vc.dims[k]);
            for (const auto& [r, c, b, v] : X.diffs[k]) {
                int u = X.terms[k][size_t(c)];
                const auto& ms = A.paths(u, i);
                for (size_t mpos = 0; mpos < ms.size(); ++mpos) {
                    const AlgElem& prod = A.mul(b, ms[mpos]);
                    for (const auto& [mb, cf] : prod.c)
                        m.add(off[k + 1][size_t(r)] + path_pos[size_t(mb)],
                              off[k][size_t(c)] + int(mpos), v * cf);
                }
            }
            vc.diffs.push_back(std::move(m));
        }
        std::map<int, int> h = vc.cohomology_dims();
        for (const auto& [deg, dim] : h) {
            if (dim == 0) continue;
            auto& row = out[deg];
            row.resize(size_t(V), 0);
            row[size_t(i)] = dim;
        }
    }
    for (auto& [deg, row] : out) {
        (void)deg;
        row.resize(size_t(V), 0);
    }
    return out;
}

// X (x)_A N for X a complex of projective right A-modules and N a complex of
// projective bimodules: P_u (x)_A P_(i,j) = (e_u A e_i) copies of P_j.  Output
// is a dense complex over A; same differential rule as above with
//   dX entry x:  m -> x m,   output the idempotent e_j,
//   dN entry (s, t): m -> m s, output t.
inline ProjComplex tensor_complex_bimodule(const BimodCtx& ctx, const ProjComplex& X,
                                           const ProjComplex& N, const Int& cell_cap = 0) {
    const Algebra& A = ctx.A();
    ProjComplex out;
    out.A = &A;
    out.lo = X.lo + N.lo;
    int hi = X.hi() + N.hi();
    size_t nslots = X.terms.empty() || N.terms.empty() ? 0 : size_t(hi - out.lo + 1);
    out.terms.resize(nslots);
    detail::BlockIndex idx;
    idx.off.resize(nslots);
    for (int n = out.lo; int(nslots) && n <= hi; ++n) {
        size_t slot = size_t(n - out.lo);
        for (int p = X.lo; p <= X.hi(); ++p) {
            int q = n - p;
            if (!N.in_range(q)) continue;
            const auto& xt = X.term(p);
            const auto& nt = N.term(q);
            for (int a = 0; a < int(xt.size()); ++a) {
                int u = xt[size_t(a)];
                for (int b = 0; b < int(nt.size()); ++b) {
                    auto [i, j] = ctx.vertex_pair(nt[size_t(b)]);
                    size_t npaths = A.paths(u, i).size();
                    if (npaths == 0) continue;
                    idx.off[slot].emplace(std::make_tuple(p, a, b), int(out.terms[slot].size()));
                    for (size_t mm = 0; mm < npaths; ++mm) out.terms[slot].push_back(j);
                }
            }
        }
    }
    if (cell_cap > 0 && Int(out.summand_count()) + out.materialized_dim() > cell_cap)
        throw BudgetError("tensor complex needs " +
                          to_string(Int(out.summand_count()) + out.materialized_dim()) +
                          " cells, over the cap of " + to_string(cell_cap));
    for (size_t slot = 0; slot + 1 < nslots; ++slot)
        out.diffs.emplace_back(out.terms[slot + 1].size(),
                               std::vector<AlgElem>(out.terms[slot].size()));
    // dX (x) id
    for (int p = X.lo; p < X.hi(); ++p) {
        size_t xslot = size_t(p - X.lo);
        const ElemMatrix& dx = X.diffs[xslot];
        for (int q = N.lo; q <= N.hi(); ++q) {
            const auto& nt = N.term(q);
            if (nt.empty()) continue;
            size_t slot = size_t(p + q - out.lo);
            for (size_t a2 = 0; a2 < dx.size(); ++a2)
                for (size_t a = 0; a < dx[a2].size(); ++a) {
                    const AlgElem& phi = dx[a2][a];
                    if (phi.is_zero()) continue;
                    int u = X.term(p)[a];
                    for (int b = 0; b < int(nt.size()); ++b) {
                        auto [i, j] = ctx.vertex_pair(nt[size_t(b)]);
                        const auto& ms = A.paths(u, i);
                        if (ms.empty()) continue;
                        int src_base = idx.base(slot, p, int(a), b);
                        for (size_t mpos = 0; mpos < ms.size(); ++mpos) {
                            AlgElem prod = A.mul(phi, AlgElem::unit(ms[mpos]));
                            for (const auto& [mb, cf] : prod.c) {
                                int tgt_base = idx.base(slot + 1, p + 1, int(a2), b);
                                out.diffs[slot][size_t(tgt_base + ctx.path_pos(mb))]
                                         [size_t(src_base + int(mpos))]
                                             .add(A.idempotent(j), cf);
                            }
                        }
                    }
                }
        }
    }
    // (-1)^p id (x) dN
    for (int q = N.lo; q < N.hi(); ++q) {
        size_t nslot = size_t(q - N.lo);
        const ElemMatrix& dn = N.diffs[nslot];
        for (int p = X.lo; p <= X.hi(); ++p) {
            const auto& xt = X.term(p);
            if (xt.empty()) continue;
            size_t slot = size_t(p + q - out.lo);
            Rat sign = (p % 2 == 0) ? Rat(1) : Rat(-1);
            for (int a = 0; a < int(xt.size()); ++a) {
                int u = xt[size_t(a)];
                for (size_t b2 = 0; b2 < dn.size(); ++b2)
                    for (size_t b = 0; b < dn[b2].size(); ++b) {
                        const AlgElem& psi = dn[b2][b];
                        if (psi.is_zero()) continue;
                        auto [i, j] = ctx.vertex_pair(N.term(q)[b]);
                        (void)j;
                        const auto& ms = A.paths(u, i);
                        if (ms.empty()) continue;
                        int src_base = idx.base(slot, p, a, int(b));
                        for (const auto& [eb, v] : psi.c) {
                            auto [s2, t2] = ctx.pair_of(eb);
                            for (size_t mpos = 0; mpos < ms.size(); ++mpos) {
                                const AlgElem& prod = A.mul(ms[mpos], s2);
                                for (const auto& [mb, cf] : prod.c) {
                                    int tgt_base = idx.base(slot + 1, p, a, int(b2));
                                    out.diffs[slot][size_t(tgt_base + ctx.path_pos(mb))]
                                             [size_t(src_base + int(mpos))]
                                                 .add(t2, sign * v * cf);
                                }
                            }
                        }
                    }
            }
        }
    }
    return out;
}

// M (x)_A N for a plain module M (no resolution needed: the terms of N are
// projective, hence flat, on the left).  Output summands: for each N-summand
// P_(i,j), dim M_i copies of P_j; the dN entry (s, t) acts through the module
// action of s on M and outputs t.
inline ProjComplex tensor_rep_bimodule(const BimodCtx& ctx, const Representation& M,
                                       const ProjComplex& N) {
    const Algebra& A = ctx.A();
    ProjComplex out;
    out.A = &A;
    out.lo = N.lo;
    out.terms.resize(N.terms.size());
    std::vector<std::vector<int>> base(N.terms.size());
    for (size_t slot = 0; slot < N.terms.size(); ++slot) {
        for (int b = 0; b < int(N.terms[slot].size()); ++b) {
            auto [i, j] = ctx.vertex_pair(N.terms[slot][size_t(b)]);
            base[slot].push_back(int(out.terms[slot].size()));
            for (int c = 0; c < M.dim(i); ++c) out.terms[slot].push_back(j);
        }
    }
    for (size_t slot = 0; slot + 1 < N.terms.size(); ++slot) {
        ElemMatrix d(out.terms[slot + 1].size(), std::vector<AlgElem>(out.terms[slot].size()));
        const ElemMatrix& dn = N.diffs[slot];
        for (size_t b2 = 0; b2 < dn.size(); ++b2)
            for (size_t b = 0; b < dn[b2].size(); ++b) {
                const AlgElem& psi = dn[b2][b];
                if (psi.is_zero()) continue;
                auto [i, j] = ctx.vertex_pair(N.terms[slot][b]);
                (void)j;
                if (M.dim(i) == 0) continue;
                for (const auto& [eb, v] : psi.c) {
                    auto [s, t] = ctx.pair_of(eb);
                    RatMatrix act = M.act_basis(s);  // M_i -> M_{i'}
                    for (int r = 0; r < act.rows(); ++r)
                        for (int c = 0; c < act.cols(); ++c) {
                            if (is_zero(act(r, c))) continue;
                            d[size_t(base[slot + 1][b2] + r)][size_t(base[slot][b] + c)].add(
                                t, v * act(r, c));
                        }
                }
            }
        out.diffs.push_back(std::move(d));
    }
    return out;
}

// A (x)_E T for a complex of projective bimodules: the summand P_(i,j)
// contracts to the space e_j A e_i and the entry pair (s, t) acts by
// w -> t w s.
inline VectComplex contract_bimodule_complex(const BimodCtx& ctx, const SparseProjComplex& T) {
    const Algebra& A = ctx.A();
    VectComplex out;
    out.lo = T.lo;
    std::vector<std::vector<int>> base(T.terms.size());
    for (size_t slot = 0; slot < T.terms.size(); ++slot) {
        int d = 0;
        for (int v : T.terms[slot]) {
            auto [i, j] = ctx.vertex_pair(v);
            base[slot].push_back(d);
            d += int(A.paths(j, i).size());
        }
        out.dims.push_back(d);
    }
    for (size_t slot = 0; slot + 1 < T.terms.size(); ++slot) {
        SparseMat d(out.dims[slot + 1], out.dims[slot]);
        for (const auto& [row, col, eb, v] : T.diffs[slot]) {
            auto [i, j] = ctx.vertex_pair(T.terms[slot][size_t(col)]);
            auto [s, t] = ctx.pair_of(eb);
            const auto& ws = A.paths(j, i);
            for (size_t wpos = 0; wpos < ws.size(); ++wpos) {
                AlgElem prod = A.mul(A.mul(t, ws[wpos]), AlgElem::unit(s));
                for (const auto& [wb, cf] : prod.c)
                    d.add(base[slot + 1][size_t(row)] + ctx.path_pos(wb),
                          base[slot][size_t(col)] + int(wpos), v * cf);
            }
        }
        out.diffs.push_back(std::move(d));
    }
    return out;
}

// Total Hom complex Hom_E(Q, T), degree n part = prod_p Hom(Q^p, T^{p+n}) with
// basis (p, Q-summand (i,j), T-summand (k,l), s in paths(i,k), t in
// paths(l,j)) and differential d(f) = d_T о f - (-1)^n f о d_Q:
//   post-composing with (s', t') sends (s, t) to (s s', t' t),
//   pre-composing with (sigma, tau) sends (s, t) to (sigma s, t tau).
inline VectComplex hom_bimodule_complexes(const BimodCtx& ctx, const ProjComplex& Q,
                                          const SparseProjComplex& T) {
    const Algebra& A = ctx.A();
    VectComplex out;
    out.lo = T.lo - Q.hi();
    int hi = T.hi() - Q.lo;
    if (Q.terms.empty() || T.terms.empty()) return out;
    size_t nslots = size_t(hi - out.lo + 1);
    detail::BlockIndex idx;
    idx.off.resize(nslots);
    for (int n = out.lo; n <= hi; ++n) {
        size_t slot = size_t(n - out.lo);
        int d = 0;
        for (int p = Q.lo; p <= Q.hi(); ++p) {
            const auto& qt = Q.term(p);
            const auto& tt = T.term(p + n);
            for (int a = 0; a < int(qt.size()); ++a) {
                auto [i, j] = ctx.vertex_pair(qt[size_t(a)]);
                for (int b = 0; b < int(tt.size()); ++b) {
                    auto [k, l] = ctx.vertex_pair(tt[size_t(b)]);
                    int sz = int(A.paths(i, k).size() * A.paths(l, j).size());
                    if (sz == 0) continue;
                    idx.off[slot].emplace(std::make_tuple(p, a, b), d);
                    d += sz;
                }
            }
        }
        out.dims.push_back(d);
    }
    for (size_t slot = 0; slot + 1 < nslots; ++slot)
        out.diffs.emplace_back(out.dims[slot + 1], out.dims[slot]);
    int n0 = out.lo;
    // d_T о f
    for (int n = n0; n < hi; ++n) {
        size_t slot = size_t(n - n0);
        for (int p = Q.lo; p <= Q.hi(); ++p) {
            int q = p + n;
            if (q < T.lo || q >= T.hi()) continue;
            const auto& qt = Q.term(p);
            if (qt.empty()) continue;
            for (const auto& [brow, bcol, eb, v] : T.diffs[size_t(q - T.lo)]) {
                auto [k, l] = ctx.vertex_pair(T.term(q)[size_t(bcol)]);
                auto [s2, t2] = ctx.pair_of(eb);
                for (int a = 0; a < int(qt.size()); ++a) {
                    auto [i, j] = ctx.vertex_pair(qt[size_t(a)]);
                    const auto& ss = A.paths(i, k);
                    const auto& ts = A.paths(l, j);
                    if (ss.empty() || ts.empty()) continue;
                    int src_base = idx.base(slot, p, a, bcol);
                    auto [k2, l2] = ctx.vertex_pair(T.term(q + 1)[size_t(brow)]);
                    const auto& ts2 = A.paths(l2, j);
                    if (A.paths(i, k2).empty() || ts2.empty()) continue;
                    int tgt_base = idx.base(slot + 1, p, a, brow);
                    for (size_t sp = 0; sp < ss.size(); ++sp) {
                        const AlgElem& ps = A.mul(ss[sp], s2);
                        if (ps.is_zero()) continue;
                        for (size_t tp = 0; tp < ts.size(); ++tp) {
                            const AlgElem& pt = A.mul(t2, ts[tp]);
                            int src = src_base + int(sp * ts.size() + tp);
                            for (const auto& [sb, cf1] : ps.c)
                                for (const auto& [tb, cf2] : pt.c)
                                    out.diffs[slot].add(
                                        tgt_base +
                                            int(size_t(ctx.path_pos(sb)) * ts2.size()) +
                                            ctx.path_pos(tb),
                                        src, v * cf1 * cf2);
                        }
                    }
                }
            }
        }
    }
    // -(-1)^n f о d_Q
    for (int n = n0; n < hi; ++n) {
        size_t slot = size_t(n - n0);
        Rat sign = (n % 2 == 0) ? Rat(-1) : Rat(1);
        for (int p = Q.lo + 1; p <= Q.hi(); ++p) {
            int q = p + n;
            if (!T.in_range(q)) continue;
            const auto& tt = T.term(q);
            if (tt.empty()) continue;
            const ElemMatrix& dq = Q.diffs[size_t(p - 1 - Q.lo)];
            for (size_t a = 0; a < dq.size(); ++a)
                for (size_t a2 = 0; a2 < dq[a].size(); ++a2) {
                    const AlgElem& phi = dq[a][a2];
                    if (phi.is_zero()) continue;
                    auto [i, j] = ctx.vertex_pair(Q.term(p)[a]);
                    auto [i2, j2] = ctx.vertex_pair(Q.term(p - 1)[a2]);
                    for (int b = 0; b < int(tt.size()); ++b) {
                        auto [k, l] = ctx.vertex_pair(tt[size_t(b)]);
                        const auto& ss = A.paths(i, k);
                        const auto& ts = A.paths(l, j);
                        if (ss.empty() || ts.empty()) continue;
                        const auto& ts2 = A.paths(l, j2);
                        if (A.paths(i2, k).empty() || ts2.empty()) continue;
                        int src_base = idx.base(slot, p, int(a), b);
                        int tgt_base = idx.base(slot + 1, p - 1, int(a2), b);
                        for (const auto& [eb, v] : phi.c) {
                            auto [sg, tu] = ctx.pair_of(eb);  // sigma: i2 -> i, tau: j -> j2
                            for (size_t sp = 0; sp < ss.size(); ++sp) {
                                const AlgElem& ps = A.mul(sg, ss[sp]);
                                if (ps.is_zero()) continue;
                                for (size_t tp = 0; tp < ts.size(); ++tp) {
                                    const AlgElem& pt = A.mul(ts[tp], tu);
                                    int src = src_base + int(sp * ts.size() + tp);
                                    for (const auto& [sb, cf1] : ps.c)
                                        for (const auto& [tb, cf2] : pt.c)
                                            out.diffs[slot].add(
                                                tgt_base +
                                                    int(size_t(ctx.path_pos(sb)) * ts2.size()) +
                                                    ctx.path_pos(tb),
                                                src, sign * v * cf1 * cf2);
                                }
                            }
                        }
                    }
                }
        }
    }
    return out;
}

// Hom_E(Q, A) for a complex of projective bimodules: Hom(P_(i,j), A) = e_i A e_j
// in cohomological degree -p, with pre-composition by (sigma, tau) acting by
// w -> sigma w tau.
inline VectComplex hom_into_regular(const BimodCtx& ctx, const ProjComplex& Q) {
    const Algebra& A = ctx.A();
    VectComplex out;
    out.lo = -Q.hi();
    std::vector<std::vector<int>> base(Q.terms.size());
    for (size_t k = Q.terms.size(); k-- > 0;) {
        int d = 0;
        for (int v : Q.terms[k]) {
            auto [i, j] = ctx.vertex_pair(v);
            base[k].push_back(d);
            d += int(A.paths(i, j).size());
        }
        out.dims.push_back(d);
    }
    for (size_t k = Q.terms.size(); k-- > 1;) {
        // Hom(Q^{lo+k}, A) -> Hom(Q^{lo+k-1}, A), precompose with diffs[k-1]
        size_t oslot = Q.terms.size() - 1 - k;
        SparseMat d(out.dims[oslot + 1], out.dims[oslot]);
        const ElemMatrix& dq = Q.diffs[k - 1];
        for (size_t a = 0; a < dq.size(); ++a) {
            auto [i, j] = ctx.vertex_pair(Q.terms[k][a]);
            for (size_t a2 = 0; a2 < dq[a].size(); ++a2) {
                const AlgElem& phi = dq[a][a2];
                if (phi.is_zero()) continue;
                const auto& ws = A.paths(i, j);
                for (const auto& [eb, v] : phi.c) {
                    auto [sg, tu] = ctx.pair_of(eb);
                    for (size_t wpos = 0; wpos < ws.size(); ++wpos) {
                        AlgElem prod = A.mul(A.mul(sg, ws[wpos]), AlgElem::unit(tu));
                        for (const auto& [wb, cf] : prod.c)
                            d.add(base[k - 1][a2] + ctx.path_pos(wb), base[k][a] + int(wpos),
                                  v * cf);
                    }
                }
            }
        }
        out.diffs.push_back(std::move(d));
    }
    return out;
}

}  // namespace serrescope
