#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "serrescope/dsl.hpp"
#include "serrescope/hochschild.hpp"

using namespace serrescope;

static Algebra corpus_algebra(const std::string& name) {
    return build_algebra(corpus_spec(name));
}

static const double kLogRhoK3 = std::log((7.0 + 3.0 * std::sqrt(5.0)) / 2.0);

TEST_CASE("one-vertex dual powers stay one-dimensional") {
    Algebra A = corpus_algebra("a1");
    HochschildTable t = hochschild_table(A, 4);
    REQUIRE(t.rows.size() == 4);
    REQUIRE_FALSE(t.truncated);
    for (const auto& r : t.rows) {
        REQUIRE(r.tdim_homology == 1);
        REQUIRE(r.tdim_cohomology == 1);
        REQUIRE(r.sdim == 1);
        REQUIRE(r.homology == std::map<int, int>{{0, 1}});
        REQUIRE(r.cohomology == std::map<int, int>{{0, 1}});
    }
    DualityCheck dc = hochschild_duality_check(A, 4);
    REQUIRE(dc.all_ok);
    REQUIRE(dc.rows.size() == 3);
}

TEST_CASE("superdimension rows match the trace oracle") {
    for (const char* name : {"a2", "kronecker2", "kronecker3"}) {
        Algebra A = corpus_algebra(name);
        IntMatrix C = A.cartan_matrix();
        HochschildTable t = hochschild_table(A, 4, HochschildVariant::homology);
        REQUIRE(t.rows.size() == 4);
        for (const auto& r : t.rows) {
            REQUIRE(r.sdim == hh_superdimension_trace(C.transpose(), C, r.n - 1));
            REQUIRE(r.sdim == hh_sdim_trace(A, r.n));
        }
    }
}

TEST_CASE("a2 table is periodic and bounded") {
    Algebra A = corpus_algebra("a2");
    HochschildTable t = hochschild_table(A, 4);
    REQUIRE(t.rows[0].tdim_homology == 1);
    REQUIRE(t.rows[1].tdim_homology == 1);
    REQUIRE(t.rows[2].tdim_homology == 2);
    REQUIRE(t.rows[3].tdim_homology == 1);
    REQUIRE(t.rows[0].homology == std::map<int, int>{{0, 1}});
    REQUIRE(t.rows[1].homology == std::map<int, int>{{-1, 1}});
    REQUIRE(t.rows[2].homology == std::map<int, int>{{-1, 2}});
    REQUIRE(t.rows[3].homology == std::map<int, int>{{-1, 1}});
    REQUIRE(t.rows[0].tdim_cohomology == 2);
    REQUIRE(t.rows[1].tdim_cohomology == 1);
    REQUIRE(t.rows[2].tdim_cohomology == 1);
    REQUIRE(t.rows[3].tdim_cohomology == 2);

    std::vector<Int> sdims = {1, -1, -2, -1};
    for (int n = 1; n <= 4; ++n) REQUIRE(t.rows[size_t(n - 1)].sdim == sdims[size_t(n - 1)]);
}

TEST_CASE("kronecker homology grows linearly") {
    Algebra A = corpus_algebra("kronecker2");
    HochschildTable t = hochschild_table(A, 4);
    for (const auto& r : t.rows) {
        REQUIRE(r.tdim_homology == Int(4 * r.n));
        if (r.n > 1) {
            std::map<int, int> want = {{-r.n, 2 * r.n + 1}, {-(r.n - 1), 2 * r.n - 1}};
            REQUIRE(r.homology == want);
        }
    }
    REQUIRE(t.rows[0].homology == std::map<int, int>{{-1, 3}, {0, 1}});
    DualityCheck dc = hochschild_duality_check(A, 4);
    REQUIRE(dc.all_ok);
    for (const auto& r : dc.rows) REQUIRE(r.hom_side == Int(4 * (r.n - 1)));
}

TEST_CASE("duality rows agree exactly across the trio") {
    for (const char* name : {"a2", "kronecker2", "kronecker3"}) {
        DualityCheck dc = hochschild_duality_check(corpus_algebra(name), 4);
        REQUIRE(dc.rows.size() == 3);
        REQUIRE(dc.all_ok);
        REQUIRE_FALSE(dc.truncated);
    }
}

TEST_CASE("three-kronecker growth tracks the spectral radius") {
    Algebra A = corpus_algebra("kronecker3");
    BimodCtx ctx(A);
    HochschildTable t = hochschild_table(ctx, 6, HochschildVariant::homology);
    REQUIRE(t.rows.size() == 6);
    REQUIRE_FALSE(t.truncated);

    std::vector<Int> tdims = {9, 47, 322, 2207, 15127, 103682};
    for (int n = 1; n <= 6; ++n) {
        const auto& r = t.rows[size_t(n - 1)];
        REQUIRE(r.tdim_homology == tdims[size_t(n - 1)]);
        if (n >= 2) {
            REQUIRE(r.homology == std::map<int, int>{{-n, int(tdims[size_t(n - 1)].convert_to<long>())}});
            REQUIRE(r.sdim == (n % 2 == 0 ? tdims[size_t(n - 1)] : -tdims[size_t(n - 1)]));
        }
    }

    HochschildEntropy e = hh_entropy_estimate(t);
    REQUIRE(std::abs(e.final_slope_homology() - kLogRhoK3) < 0.35);
    REQUIRE(std::abs(e.final_ratio_homology() - kLogRhoK3) < 0.05);

    // one-sided lower bound from the dual Coxeter spectral radius
    IntMatrix C = A.cartan_matrix();
    double bound = log_radius_lower_bound(dual_coxeter_matrix(C.transpose(), C));
    REQUIRE(e.final_slope_homology() >= bound - 0.35);
}

TEST_CASE("yomdin direction holds at the final row for the tame cases") {
    for (const char* name : {"a2", "kronecker2"}) {
        Algebra A = corpus_algebra(name);
        IntMatrix C = A.cartan_matrix();
        HochschildTable t = hochschild_table(A, 4, HochschildVariant::homology);
        HochschildEntropy e = hh_entropy_estimate(t);
        double bound = log_radius_lower_bound(dual_coxeter_matrix(C.transpose(), C));
        REQUIRE(bound == 0.0);
        REQUIRE(e.final_slope_homology() >= bound - 0.35);
    }
}

TEST_CASE("a tiny budget truncates the tower but keeps finished rows") {
    Algebra A = corpus_algebra("kronecker3");
    HochschildTable t = hochschild_table(A, 6, HochschildVariant::homology, Int(400));
    REQUIRE(t.truncated);
    REQUIRE_FALSE(t.note.empty());
    REQUIRE(t.rows.size() >= 1);
    REQUIRE(t.rows.size() < 6);
    REQUIRE(t.rows[0].tdim_homology == 9);
}

TEST_CASE("entropy estimator requires three finished rows") {
    Algebra A = corpus_algebra("a2");
    HochschildTable t = hochschild_table(A, 2, HochschildVariant::homology);
    REQUIRE_THROWS_AS(hh_entropy_estimate(t), UndefinedGrowthError);
}
