#include <catch2/catch_amalgamated.hpp>

#include "serrescope/dsl.hpp"
#include "serrescope/representation.hpp"
#include "serrescope/resolution.hpp"

using namespace serrescope;

static Algebra corpus_algebra(const std::string& name) {
    return build_algebra(corpus_spec(name));
}

TEST_CASE("projective and injective dimension vectors match the Cartan matrix") {
    for (const char* name : {"a2", "a3", "kronecker3", "square", "d4", "nakayama_x3"}) {
        Algebra A = corpus_algebra(name);
        IntMatrix C = A.cartan_matrix();
        for (int v = 0; v < A.nvertices(); ++v) {
            Representation P = projective_rep(A, v);
            REQUIRE(P.validate());
            Representation I = injective_rep(A, v);
            REQUIRE(I.validate());
            for (int i = 0; i < A.nvertices(); ++i) {
                // column v of C is the dimension vector of P_v, row v of I_v
                REQUIRE(Int(P.dim(i)) == C(i, v));
                REQUIRE(Int(I.dim(i)) == C(v, i));
            }
        }
    }
}

TEST_CASE("hom spaces between projectives count paths") {
    Algebra A = corpus_algebra("a2");
    Representation P0 = projective_rep(A, 0);
    Representation P1 = projective_rep(A, 1);
    REQUIRE(hom_dim(P0, P1) == 0);  // no paths 1 -> 0
    REQUIRE(hom_dim(P1, P0) == 1);  // the arrow
    REQUIRE(hom_dim(P0, P0) == 1);
    Representation PP = direct_sum(P0, P1);
    REQUIRE(hom_dim(PP, PP) == A.dim());  // End(A) = A for basic algebras

    Algebra K3 = corpus_algebra("kronecker3");
    Representation Q0 = projective_rep(K3, 0);
    Representation Q1 = projective_rep(K3, 1);
    REQUIRE(hom_dim(Q1, Q0) == 3);
    REQUIRE(hom_dim(Q0, Q1) == 0);
}

TEST_CASE("hom from a projective picks out the vertex component") {
    Algebra A = corpus_algebra("square");
    for (int v = 0; v < A.nvertices(); ++v) {
        Representation Pv = projective_rep(A, v);
        for (int w = 0; w < A.nvertices(); ++w) {
            Representation I = injective_rep(A, w);
            REQUIRE(hom_dim(Pv, I) == I.dim(v));
        }
    }
}

TEST_CASE("validation rejects a representation violating the relation") {
    Algebra A = corpus_algebra("square");  // a*b - c*d
    Representation X(A, {1, 1, 1, 1});
    for (int a = 0; a < 4; ++a) X.arrow(a) = RatMatrix{{rat(1)}};
    REQUIRE(X.validate());
    X.arrow(1) = RatMatrix{{rat(2)}};  // now a*b acts by 2, c*d by 1
    REQUIRE_FALSE(X.validate());
}

TEST_CASE("kernel and top") {
    Algebra A = corpus_algebra("a2");
    Representation P0 = projective_rep(A, 0);
    Representation P1 = projective_rep(A, 1);
    auto maps = hom_space(P1, P0);
    REQUIRE(maps.size() == 1);
    auto [K, incl] = kernel(maps[0]);
    REQUIRE(K.total_dim() == 0);  // P1 embeds into P0
    REQUIRE(incl.blocks.size() == 2);

    auto t = top_dims(P0);
    REQUIRE(t == std::vector<int>{1, 0});
    REQUIRE(top_dims(P1) == std::vector<int>{0, 1});
}

TEST_CASE("cokernel of a map between projectives") {
    Algebra A = corpus_algebra("a2");
    Representation P0 = projective_rep(A, 0);
    Representation P1 = projective_rep(A, 1);
    auto maps = hom_space(P1, P0);
    REQUIRE(maps.size() == 1);
    auto [C, pr] = cokernel(maps[0]);
    REQUIRE(isomorphic(C, simple_rep(A, 0)));  // P0 / rad P0
    REQUIRE(pr.blocks.size() == 2);
    // the projection is surjective on each vertex
    for (int v = 0; v < A.nvertices(); ++v)
        REQUIRE(rank(pr.blocks[v]) == C.dim(v));

    // cokernel of the zero map is the target itself
    ModuleMap z;
    z.src = &P1;
    z.tgt = &P0;
    z.blocks = {RatMatrix(1, 0), RatMatrix(1, 1)};
    auto [C2, pr2] = cokernel(z);
    REQUIRE(isomorphic(C2, P0));
}

TEST_CASE("isomorphism detection distinguishes projectives") {
    Algebra A = corpus_algebra("kronecker2");
    Representation P0 = projective_rep(A, 0);
    Representation P1 = projective_rep(A, 1);
    REQUIRE(isomorphic(P0, P0));
    REQUIRE_FALSE(isomorphic(P0, P1));
    REQUIRE(isomorphic(direct_sum(P0, P1), direct_sum(P1, P0)));
}

TEST_CASE("projective cover of a simple is the projective at its vertex") {
    Algebra A = corpus_algebra("d4");
    for (int v = 0; v < A.nvertices(); ++v) {
        Cover cov = projective_cover(simple_rep(A, v));
        REQUIRE(cov.summands == std::vector<int>{v});
        // cover map is surjective onto the simple
        REQUIRE(cov.pi.blocks[size_t(v)].rows() == 1);
        REQUIRE(!cov.pi.blocks[size_t(v)].is_zero());
    }
}

TEST_CASE("minimal resolutions over hereditary algebras have length at most 1") {
    for (const char* name : {"a3", "d4", "e6", "kronecker3"}) {
        Algebra A = corpus_algebra(name);
        for (int v = 0; v < A.nvertices(); ++v) {
            Resolution res = minimal_projective_resolution(simple_rep(A, v), 8);
            REQUIRE(res.complete);
            REQUIRE(res.length() <= 1);
        }
        REQUIRE(global_dimension(A) == std::optional<int>(1));
    }
}

TEST_CASE("global dimension across the corpus") {
    REQUIRE(global_dimension(corpus_algebra("a1")) == std::optional<int>(0));
    REQUIRE(global_dimension(corpus_algebra("square")) == std::optional<int>(2));
    REQUIRE(global_dimension(corpus_algebra("nakayama_x2")) == std::nullopt);
    REQUIRE(global_dimension(corpus_algebra("nakayama_cyclic3")) == std::nullopt);
}

TEST_CASE("resolution differentials compose to zero and live in the radical") {
    Algebra A = corpus_algebra("square");
    Resolution res = minimal_projective_resolution(simple_rep(A, 0), 8);
    REQUIRE(res.complete);
    REQUIRE(res.length() == 2);
    // S_0: 0 -> P_3 -> P_1 ⊕ P_2 -> P_0 -> S_0 -> 0
    REQUIRE(res.terms[0] == std::vector<int>{0});
    std::vector<int> mid = res.terms[1];
    std::sort(mid.begin(), mid.end());
    REQUIRE(mid == std::vector<int>{1, 2});
    REQUIRE(res.terms[2] == std::vector<int>{3});
    ProjComplex c = res.complex(A);
    c.check_shapes();
    c.check_d_squared();
    for (const auto& d : c.diffs)
        for (const auto& row : d)
            for (const auto& e : row)
                for (const auto& [b, coeff] : e.c) {
                    (void)coeff;
                    REQUIRE(A.basis(b).len >= 1);  // minimality: no unit entries
                }
}

TEST_CASE("ext dimensions agree with the Euler form on the square algebra") {
    Algebra A = corpus_algebra("square");
    // chi(S_i, S_j) = sum (-1)^k dim Ext^k = (C^-T)_{ij} up to convention;
    // verify via explicit alternating sums against the Cartan inverse
    RatMatrix Cinv = inverse(to_rat(A.cartan_matrix()));
    for (int i = 0; i < A.nvertices(); ++i)
        for (int j = 0; j < A.nvertices(); ++j) {
            auto e = ext_dims(simple_rep(A, i), simple_rep(A, j), 4);
            Rat chi(0);
            for (int k = 0; k <= 4; ++k) chi += rat((k % 2 == 0) ? e[size_t(k)] : -e[size_t(k)]);
            // Euler form on dimension vectors: e_i^T (C^{-1})^T e_j... pinned
            // via hom/ext counts instead: dim Hom - dim Ext^1 + dim Ext^2
            REQUIRE(chi == Cinv(j, i));
        }
}

TEST_CASE("ext of simples reads off quiver arrows and relations") {
    Algebra A = corpus_algebra("square");
    // Ext^1(S_i, S_j) = #arrows i -> j; Ext^2(S_0, S_3) = #relations
    auto e01 = ext_dims(simple_rep(A, 0), simple_rep(A, 1), 3);
    REQUIRE(e01 == std::vector<int>{0, 1, 0, 0});
    auto e03 = ext_dims(simple_rep(A, 0), simple_rep(A, 3), 3);
    REQUIRE(e03 == std::vector<int>{0, 0, 1, 0});
    auto e00 = ext_dims(simple_rep(A, 0), simple_rep(A, 0), 3);
    REQUIRE(e00 == std::vector<int>{1, 0, 0, 0});
}

TEST_CASE("complex minimization cancels unit entries") {
    Algebra A = corpus_algebra("a2");
    // build P_0 --id--> P_0 plus a surviving P_1 summand
    ProjComplex c;
    c.A = &A;
    c.lo = 0;
    c.terms = {{0, 1}, {0}};
    c.diffs = {ElemMatrix{{AlgElem::unit(0), AlgElem{}}}};
    c.minimize();
    REQUIRE(c.terms.size() == 1);
    REQUIRE(c.term(0) == std::vector<int>{1});
}

TEST_CASE("minimization uses the correction term") {
    Algebra A = corpus_algebra("nakayama_x3");  // loop x with x^3 = 0
    int x = A.nvertices();  // basis index of the arrow
    // d = [[1, x],[x, x^2 - x*1^{-1}*x ... ]]: after cancelling the unit the
    // surviving entry must pick up -x*1*x = -x^2
    ProjComplex c;
    c.A = &A;
    c.lo = 0;
    c.terms = {{0, 0}, {0, 0}};
    ElemMatrix d(2, std::vector<AlgElem>(2));
    d[0][0] = AlgElem::unit(0);       // unit pivot
    d[0][1] = AlgElem::unit(x);       // x
    d[1][0] = AlgElem::unit(x);       // x
    d[1][1] = AlgElem{};              // 0
    c.diffs = {d};
    c.minimize();
    REQUIRE(c.terms.size() == 2);
    REQUIRE(c.term(0).size() == 1);
    REQUIRE(c.term(1).size() == 1);
    AlgElem surv = c.diffs[0][0][0];
    AlgElem expect = A.mul(AlgElem::unit(x), AlgElem::unit(x)) * Rat(-1);
    REQUIRE(surv == expect);
}

TEST_CASE("cohomology of a resolution complex is the resolved simple") {
    Algebra A = corpus_algebra("square");
    Resolution res = minimal_projective_resolution(simple_rep(A, 0), 8);
    ProjComplex c = res.complex(A);
    auto h = c.cohomology_dims();
    REQUIRE(h.size() == 1);
    REQUIRE(h.count(0) == 1);
    REQUIRE(h[0] == std::vector<int>{1, 0, 0, 0});
}

TEST_CASE("complex isomorphism detects shifts and sign changes") {
    Algebra A = corpus_algebra("a2");
    ProjComplex s0 = stalk_complex(A, 0, {0});
    ProjComplex s0_shift = stalk_complex(A, -1, {0});
    REQUIRE(complexes_isomorphic(s0, s0));
    REQUIRE_FALSE(complexes_isomorphic(s0, s0_shift));
    REQUIRE_FALSE(complexes_isomorphic(s0, stalk_complex(A, 0, {1})));

    // two-term complex P_1 -> P_0 vs its negated differential
    Resolution res = minimal_projective_resolution(simple_rep(A, 0), 4);
    ProjComplex c = res.complex(A);
    ProjComplex neg = c;
    for (auto& dm : neg.diffs)
        for (auto& row : dm)
            for (auto& e : row) e = e * Rat(-1);
    REQUIRE(complexes_isomorphic(c, neg));
    REQUIRE(complexes_isomorphic(c.shifted(3), neg.shifted(3)));
    REQUIRE_FALSE(complexes_isomorphic(c, c.shifted(1)));
}

TEST_CASE("ktheory class of a resolution matches the Cartan relation") {
    Algebra A = corpus_algebra("square");
    for (int v = 0; v < A.nvertices(); ++v) {
        Resolution res = minimal_projective_resolution(simple_rep(A, v), 8);
        ProjComplex c = res.complex(A);
        auto cls = c.ktheory_class();
        // C * cls = dim vector of the simple (resolution is exact)
        IntMatrix C = A.cartan_matrix();
        for (int i = 0; i < A.nvertices(); ++i) {
            Int s = 0;
            for (int j = 0; j < A.nvertices(); ++j) s += C(i, j) * cls[size_t(j)];
            REQUIRE(s == (i == v ? 1 : 0));
        }
    }
}

TEST_CASE("direct sums of complexes") {
    Algebra A = corpus_algebra("a3");
    ProjComplex x = stalk_complex(A, 0, {0});
    ProjComplex y = stalk_complex(A, 2, {1, 2});
    ProjComplex s = direct_sum(x, y);
    REQUIRE(s.lo == 0);
    REQUIRE(s.hi() == 2);
    REQUIRE(s.term(0) == std::vector<int>{0});
    REQUIRE(s.term(1).empty());
    REQUIRE(s.term(2) == std::vector<int>{1, 2});
    s.check_shapes();
}
