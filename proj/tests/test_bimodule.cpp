#include <catch2/catch_amalgamated.hpp>

#include "serrescope/bimodule.hpp"
#include "serrescope/dsl.hpp"
#include "serrescope/ktheory.hpp"
#include "serrescope/resolution.hpp"
#include "serrescope/sparse.hpp"

using namespace serrescope;

static Algebra corpus_algebra(const std::string& name) {
    return build_algebra(corpus_spec(name));
}

// Minimality of a complex of projectives: no differential entry touches an idempotent.
static bool diffs_in_radical(const Algebra& E, const ProjComplex& C) {
    for (const auto& d : C.diffs)
        for (const auto& row : d)
            for (const auto& e : row)
                for (const auto& [b, v] : e.c)
                    if (E.basis(b).len == 0 && !is_zero(v)) return false;
    return true;
}

TEST_CASE("enveloping algebra and the two canonical bimodule representations") {
    Algebra A = corpus_algebra("a2");
    BimodCtx ctx(A);
    REQUIRE(ctx.E().nvertices() == 4);
    REQUIRE(ctx.E().dim() == 9);  // dim(A)^2

    Representation reg = regular_bimodule_rep(ctx);
    reg.validate();
    // component at (i,j) is paths(i,j): a2 has e0, e1, and one arrow 0->1
    REQUIRE(reg.dim(ctx.evertex(0, 0)) == 1);
    REQUIRE(reg.dim(ctx.evertex(0, 1)) == 1);
    REQUIRE(reg.dim(ctx.evertex(1, 0)) == 0);
    REQUIRE(reg.dim(ctx.evertex(1, 1)) == 1);

    Representation dual = dual_bimodule_rep(ctx);
    dual.validate();
    // component at (i,j) is D(e_j A e_i) = paths(j,i)^*
    REQUIRE(dual.dim(ctx.evertex(0, 0)) == 1);
    REQUIRE(dual.dim(ctx.evertex(0, 1)) == 0);
    REQUIRE(dual.dim(ctx.evertex(1, 0)) == 1);
    REQUIRE(dual.dim(ctx.evertex(1, 1)) == 1);
}

TEST_CASE("bimodule resolutions of a2 pinned") {
    Algebra A = corpus_algebra("a2");
    BimodCtx ctx(A);

    ProjComplex Q = regular_bimodule_resolution(ctx);
    Q.check_shapes();
    Q.check_d_squared();
    REQUIRE(Q.lo == -1);
    REQUIRE(Q.term(0) == std::vector<int>{ctx.evertex(0, 0), ctx.evertex(1, 1)});
    REQUIRE(Q.term(-1) == std::vector<int>{ctx.evertex(0, 1)});
    REQUIRE(diffs_in_radical(ctx.E(), Q));

    ProjComplex N = dual_bimodule_resolution(ctx);
    N.check_shapes();
    N.check_d_squared();
    REQUIRE(N.lo == -1);
    REQUIRE(N.term(0) == std::vector<int>{ctx.evertex(1, 0)});
    REQUIRE(N.term(-1) == std::vector<int>{ctx.evertex(0, 1)});
    REQUIRE(diffs_in_radical(ctx.E(), N));
}

TEST_CASE("bimodule resolutions of the commutative square") {
    Algebra A = corpus_algebra("square");
    BimodCtx ctx(A);

    ProjComplex Q = regular_bimodule_resolution(ctx);
    Q.check_shapes();
    Q.check_d_squared();
    REQUIRE(Q.lo == -2);  // gldim over the enveloping algebra is 2
    std::vector<int> diag;
    for (int i = 0; i < A.nvertices(); ++i) diag.push_back(ctx.evertex(i, i));
    REQUIRE(Q.term(0) == diag);
    REQUIRE(diffs_in_radical(ctx.E(), Q));

    ProjComplex N = dual_bimodule_resolution(ctx);
    N.check_shapes();
    N.check_d_squared();
    REQUIRE(N.lo == -2);
    REQUIRE(diffs_in_radical(ctx.E(), N));
}

TEST_CASE("swap dual is an involution and dualizes shapes") {
    Algebra A = corpus_algebra("square");
    BimodCtx ctx(A);
    ProjComplex Q = regular_bimodule_resolution(ctx);

    ProjComplex T = bimodule_dual(ctx, Q);
    T.check_shapes();
    T.check_d_squared();
    REQUIRE(T.lo == 0);
    REQUIRE(T.hi() == -Q.lo);
    // degree 0 of the dual is the swap of degree 0 of Q (the diagonal is fixed)
    REQUIRE(T.term(0) == Q.term(0));

    ProjComplex QQ = bimodule_dual(ctx, T);
    REQUIRE(QQ.lo == Q.lo);
    REQUIRE(QQ.terms == Q.terms);
    for (size_t k = 0; k < Q.diffs.size(); ++k) {
        REQUIRE(QQ.diffs[k].size() == Q.diffs[k].size());
        for (size_t i = 0; i < Q.diffs[k].size(); ++i)
            for (size_t j = 0; j < Q.diffs[k][i].size(); ++j)
                REQUIRE(QQ.diffs[k][i][j] == Q.diffs[k][i][j]);
    }
}

TEST_CASE("serre functor sends projectives to injectives") {
    for (const char* name : {"a2", "kronecker3"}) {
        Algebra A = corpus_algebra(name);
        BimodCtx ctx(A);
        ProjComplex N = dual_bimodule_resolution(ctx);
        for (int v = 0; v < A.nvertices(); ++v) {
            ProjComplex X = stalk_complex(A, 0, {v});
            ProjComplex SX = tensor_complex_bimodule(ctx, X, N);
            SX.check_shapes();
            SX.check_d_squared();
            Resolution r = minimal_projective_resolution(injective_rep(A, v), 64);
            REQUIRE(complexes_isomorphic(SX, r.complex(A)));
        }
    }
}

TEST_CASE("serre functor on a simple a2 module") {
    Algebra A = corpus_algebra("a2");
    BimodCtx ctx(A);
    ProjComplex N = dual_bimodule_resolution(ctx);

    // nu(S_0) = S_1[1]: S_1 = P_1 so the target is a stalk in degree -1.
    Resolution r = minimal_projective_resolution(simple_rep(A, 0), 64);
    ProjComplex SX = tensor_complex_bimodule(ctx, r.complex(A), N);
    REQUIRE(complexes_isomorphic(SX, stalk_complex(A, -1, {1})));
}

TEST_CASE("inverse serre via the swapped dual of the regular resolution") {
    Algebra A = corpus_algebra("a2");
    BimodCtx ctx(A);
    ProjComplex Theta = bimodule_dual(ctx, regular_bimodule_resolution(ctx));

    // P_0 = I_1, so the inverse serre functor sends it to P_1 with no shift.
    ProjComplex X = stalk_complex(A, 0, {0});
    ProjComplex Y = tensor_complex_bimodule(ctx, X, Theta);
    Y.check_shapes();
    Y.check_d_squared();
    REQUIRE(complexes_isomorphic(Y, stalk_complex(A, 0, {1})));
}

TEST_CASE("serre then inverse serre is the identity") {
    for (const char* name : {"a2", "square"}) {
        Algebra A = corpus_algebra(name);
        BimodCtx ctx(A);
        ProjComplex N = dual_bimodule_resolution(ctx);
        ProjComplex Theta = bimodule_dual(ctx, regular_bimodule_resolution(ctx));
        for (int v = 0; v < A.nvertices(); ++v) {
            ProjComplex X = stalk_complex(A, 0, {v});
            ProjComplex Y = tensor_complex_bimodule(ctx, X, N);
            Y.minimize();
            ProjComplex Z = tensor_complex_bimodule(ctx, Y, Theta);
            REQUIRE(complexes_isomorphic(Z, X));
        }
    }
}

TEST_CASE("tensoring a representation with the serre kernel") {
    Algebra A = corpus_algebra("kronecker3");
    BimodCtx ctx(A);
    ProjComplex N = dual_bimodule_resolution(ctx);
    for (int v = 0; v < A.nvertices(); ++v) {
        ProjComplex SX = tensor_rep_bimodule(ctx, projective_rep(A, v), N);
        SX.check_shapes();
        SX.check_d_squared();
        Resolution r = minimal_projective_resolution(injective_rep(A, v), 64);
        REQUIRE(complexes_isomorphic(SX, r.complex(A)));
    }
}

TEST_CASE("contracting the regular resolution gives hochschild homology") {
    // For acyclic quivers (with or without commutativity relations) HH_0 has one
    // class per vertex and the higher homology vanishes.
    for (const char* name : {"a2", "kronecker2", "square"}) {
        Algebra A = corpus_algebra(name);
        BimodCtx ctx(A);
        SparseProjComplex Q = sparse_from_dense(regular_bimodule_resolution(ctx));
        Q.check_d_squared();
        VectComplex V = contract_bimodule_complex(ctx, Q);
        V.check_shapes();
        V.check_d_squared();
        auto h = V.cohomology_dims();
        std::map<int, int> expected{{0, A.nvertices()}};
        REQUIRE(h == expected);
    }
}

TEST_CASE("superdimension of dual tensor powers matches the trace formula") {
    for (const char* name : {"a2", "kronecker2", "square"}) {
        Algebra A = corpus_algebra(name);
        BimodCtx ctx(A);
        ProjComplex N = dual_bimodule_resolution(ctx);
        SparseProjComplex T = sparse_from_dense(N);
        for (int k = 1; k <= 4; ++k) {
            if (k > 1) T = tensor_bimodule_bimodule(ctx, T, N);
            if (k <= 2) T.check_d_squared();
            VectComplex V = contract_bimodule_complex(ctx, T);
            V.check_shapes();
            if (k <= 2) V.check_d_squared();
            REQUIRE(V.superdimension() == hh_sdim_trace(A, k));
        }
    }
}

static bool sparse_is_minimal(const BimodCtx& ctx, const SparseProjComplex& T) {
    for (const auto& d : T.diffs)
        for (const auto& [r, c, b, v] : d)
            if (ctx.E().basis(b).len == 0 && !is_zero(v)) return false;
    return true;
}

static std::vector<std::vector<int>> sorted_terms(std::vector<std::vector<int>> t) {
    for (auto& row : t) std::sort(row.begin(), row.end());
    return t;
}

TEST_CASE("gaussian reduction yields the minimal tensor tower") {
    Algebra A = corpus_algebra("kronecker2");
    BimodCtx ctx(A);
    ProjComplex N = dual_bimodule_resolution(ctx);
    SparseProjComplex T1 = sparse_from_dense(N);

    SparseProjComplex raw = tensor_bimodule_bimodule(ctx, T1, N);
    SparseProjComplex red = tensor_bimodule_reduced(ctx, T1, N);
    red.check_d_squared();
    REQUIRE(sparse_is_minimal(ctx, red));
    REQUIRE_FALSE(sparse_is_minimal(ctx, raw));
    REQUIRE(red.cells() < raw.cells());

    // the reduced product matches the dense minimizer summand for summand
    ProjComplex D = dense_from_sparse(raw);
    D.minimize();
    REQUIRE(D.lo == red.lo);
    REQUIRE(sorted_terms(D.terms) == sorted_terms(red.terms));

    // and reducing after the fact agrees with reducing on the fly
    SparseProjComplex late = reduce_complex(ctx, raw);
    late.check_d_squared();
    REQUIRE(sparse_is_minimal(ctx, late));
    REQUIRE(late.lo == red.lo);
    REQUIRE(sorted_terms(late.terms) == sorted_terms(red.terms));

    // homology is untouched by the reduction
    VectComplex hr = contract_bimodule_complex(ctx, raw);
    VectComplex hd = contract_bimodule_complex(ctx, red);
    REQUIRE(hr.cohomology_dims() == hd.cohomology_dims());

    // deeper powers keep the invariants
    SparseProjComplex T3 = tensor_bimodule_reduced(ctx, red, N);
    T3.check_d_squared();
    REQUIRE(sparse_is_minimal(ctx, T3));
    VectComplex c3 = contract_bimodule_complex(ctx, T3);
    REQUIRE(c3.superdimension() == hh_sdim_trace(A, 3));
}

TEST_CASE("reduced towers reproduce the trace superdimensions") {
    for (const char* name : {"a2", "square", "kronecker3"}) {
        Algebra A = corpus_algebra(name);
        BimodCtx ctx(A);
        ProjComplex N = dual_bimodule_resolution(ctx);
        SparseProjComplex T = sparse_from_dense(N);
        for (int k = 1; k <= 4; ++k) {
            if (k > 1) T = tensor_bimodule_reduced(ctx, T, N);
            REQUIRE(sparse_is_minimal(ctx, T));
            VectComplex V = contract_bimodule_complex(ctx, T);
            REQUIRE(V.superdimension() == hh_sdim_trace(A, k));
        }
    }
}

TEST_CASE("hom from the regular resolution computes hochschild cohomology") {
    Algebra A = corpus_algebra("a2");
    BimodCtx ctx(A);
    VectComplex V = hom_into_regular(ctx, regular_bimodule_resolution(ctx));
    V.check_shapes();
    V.check_d_squared();
    auto h = V.cohomology_dims();
    std::map<int, int> expected{{0, 1}};  // the center of a connected algebra
    REQUIRE(h == expected);

    Algebra K = corpus_algebra("kronecker2");
    BimodCtx kctx(K);
    VectComplex W = hom_into_regular(kctx, regular_bimodule_resolution(kctx));
    W.check_shapes();
    W.check_d_squared();
    auto hk = W.cohomology_dims();
    std::map<int, int> expected_k{{0, 1}, {1, 3}};  // outer derivations of the kronecker quiver
    REQUIRE(hk == expected_k);
}

TEST_CASE("hom complexes between bimodule resolutions") {
    // Total cohomology of Hom(Q, N^{tensor n}) agrees with the contraction of the
    // (n-1)-st tensor power: both compute the same derived invariant.
    for (const char* name : {"a2", "kronecker2"}) {
        Algebra A = corpus_algebra(name);
        BimodCtx ctx(A);
        ProjComplex Q = regular_bimodule_resolution(ctx);
        ProjComplex N = dual_bimodule_resolution(ctx);
        SparseProjComplex T = sparse_from_dense(N);
        for (int n = 2; n <= 3; ++n) {
            T = tensor_bimodule_bimodule(ctx, T, N);
            VectComplex H = hom_bimodule_complexes(ctx, Q, T);
            H.check_shapes();
            H.check_d_squared();
            SparseProjComplex P = sparse_from_dense(N);
            for (int k = 2; k <= n - 1; ++k) P = tensor_bimodule_bimodule(ctx, P, N);
            VectComplex C = contract_bimodule_complex(ctx, P);
            REQUIRE(H.total_cohomology_dim() == C.total_cohomology_dim());
        }
    }
}

TEST_CASE("budget cap aborts oversized tensor products") {
    Algebra A = corpus_algebra("kronecker3");
    BimodCtx ctx(A);
    ProjComplex N = dual_bimodule_resolution(ctx);
    SparseProjComplex T = sparse_from_dense(N);
    T = tensor_bimodule_bimodule(ctx, T, N);
    REQUIRE_THROWS_AS(tensor_bimodule_bimodule(ctx, T, N, Int(10)), BudgetError);
    // and a generous cap passes
    SparseProjComplex U = tensor_bimodule_bimodule(ctx, T, N, Int(1000000));
    REQUIRE(U.summand_count() > 0);
}

TEST_CASE("sparse rank agrees with the dense backend") {
    SparseMat m(4, 5);
    m.add(0, 0, rat(1));
    m.add(0, 3, Rat(Int(2), Int(3)));
    m.add(1, 1, rat(-5));
    m.add(2, 0, rat(2));
    m.add(2, 3, Rat(Int(4), Int(3)));  // row 2 = 2 * row 0
    m.add(3, 4, Rat(Int(7), Int(2)));
    REQUIRE(sparse_rank(m) == 3);
    REQUIRE(rank(to_dense(m)) == 3);
    REQUIRE(sparse_rank_mod(m, 2305843009213693951ULL) == 3);

    SparseMat z(3, 3);
    REQUIRE(sparse_rank(z) == 0);

    // duplicate entries accumulate: (0,0) gets 1 + (-1) = 0
    SparseMat acc(2, 2);
    acc.add(0, 0, rat(1));
    acc.add(0, 0, rat(-1));
    acc.add(1, 1, rat(1));
    REQUIRE(sparse_rank(acc) == 1);

    // pseudo-random dense-ish matrix, exercises the modular path consistency
    SparseMat big(30, 30);
    long long seed = 12345;
    for (int r = 0; r < 30; ++r)
        for (int c = 0; c < 30; ++c) {
            seed = (seed * 1103515245 + 12345) % 2147483648LL;
            if (seed % 3 == 0) big.add(r, c, Rat(Int(seed % 7 - 3), Int(1 + (seed % 4))));
        }
    REQUIRE(sparse_rank(big) == rank(to_dense(big)));
    REQUIRE(sparse_rank_mod(big, 2305843009213693951ULL) ==
            uint64_t(rank(to_dense(big))));
}

TEST_CASE("vector complexes report euler characteristics and homology") {
    // 0 -> k -> k^2 -> k -> 0 with d = (1 1)^T then (1 -1): exact in the middle
    VectComplex V;
    V.lo = 0;
    V.dims = {1, 2, 1};
    SparseMat d0(2, 1);
    d0.add(0, 0, rat(1));
    d0.add(1, 0, rat(1));
    SparseMat d1(1, 2);
    d1.add(0, 0, rat(1));
    d1.add(0, 1, rat(-1));
    V.diffs = {d0, d1};
    V.check_shapes();
    V.check_d_squared();
    REQUIRE(V.superdimension() == 0);
    REQUIRE(V.total_dim() == 4);
    auto h = V.cohomology_dims();
    REQUIRE(h.empty());  // the complex is exact

    SparseMat bad(1, 2);  // d^2 != 0 when composed with itself shape-wise
    VectComplex W;
    W.lo = -1;
    W.dims = {2, 2};
    SparseMat id2(2, 2);
    id2.add(0, 0, rat(1));
    id2.add(1, 1, rat(1));
    W.diffs = {id2};
    REQUIRE(W.cohomology_dims().empty());
}
