#pragma once

#include <map>
#include <string>
#include <vector>

#include "bimodule.hpp"
#include "budget.hpp"
#include "ktheory.hpp"

namespace serrescope {

enum class HochschildVariant { homology, cohomology, both };

// Row n holds the derived invariants of the n-th tensor power of the dual
// bimodule: dimensions of A (x)^L_{A^e} T_n per degree (homology variant) and
// of RHom_{A^e}(A, T_n) (cohomology variant).  sdim is the rank-free Euler
// characteristic of the contraction; tensor power n pairs with the trace
// oracle hh_superdimension_trace(C^T, C, n-1).
struct HochschildRow {
    int n = 0;
    std::map<int, int> homology;
    std::map<int, int> cohomology;
    Int tdim_homology = 0;
    Int tdim_cohomology = 0;
    Int sdim = 0;
};

struct HochschildTable {
    std::vector<HochschildRow> rows;
    bool truncated = false;
    std::string note;

    int last_n() const { return rows.empty() ? 0 : rows.back().n; }
};

// Tensor-power tower of the minimal bimodule resolution of DA, reduced after
// each step; every row reads off exact cohomology dimensions.  Budget overrun
// stops the tower and flags the table instead of discarding finished rows.
inline HochschildTable hochschild_table(const BimodCtx& ctx, int n_max,
                                        HochschildVariant variant = HochschildVariant::both,
                                        const Int& cell_cap = default_cell_budget()) {
    if (n_max < 1) throw ShapeError("hochschild_table: n_max must be >= 1");
    const bool want_h = variant != HochschildVariant::cohomology;
    const bool want_c = variant != HochschildVariant::homology;
    HochschildTable out;
    ProjComplex nabla = dual_bimodule_resolution(ctx);
    ProjComplex Q;
    if (want_c) Q = regular_bimodule_resolution(ctx);
    SparseProjComplex T = sparse_from_dense(nabla);
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) {
            try {
                T = tensor_bimodule_reduced(ctx, T, nabla, cell_cap);
            } catch (const BudgetError& e) {
                out.truncated = true;
                out.note = e.what();
                return out;
            }
        }
        HochschildRow row;
        row.n = n;
        if (want_h) {
            VectComplex V = contract_bimodule_complex(ctx, T);
            row.sdim = V.superdimension();
            row.homology = V.cohomology_dims();
            for (const auto& [deg, d] : row.homology) {
                (void)deg;
                row.tdim_homology += d;
            }
        }
        if (want_c) {
            VectComplex H = hom_bimodule_complexes(ctx, Q, T);
            row.cohomology = H.cohomology_dims();
            for (const auto& [deg, d] : row.cohomology) {
                (void)deg;
                row.tdim_cohomology += d;
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

inline HochschildTable hochschild_table(const Algebra& A, int n_max,
                                        HochschildVariant variant = HochschildVariant::both,
                                        const Int& cell_cap = default_cell_budget()) {
    BimodCtx ctx(A);
    return hochschild_table(ctx, n_max, variant, cell_cap);
}

// Growth estimators over a finished table: per-variant (1/n) log tdim slopes
// and successive log-ratios.  Zero total dimension contributes a zero sample
// (the bounded-orbit convention shared with the K-side estimators).
struct HochschildEntropy {
    std::vector<double> slope_homology;
    std::vector<double> ratio_homology;
    std::vector<double> slope_cohomology;
    std::vector<double> ratio_cohomology;
    bool truncated = false;

    static double last(const std::vector<double>& v) {
        if (v.empty()) throw UndefinedGrowthError("hochschild entropy: no samples");
        return v.back();
    }
    double final_slope_homology() const { return last(slope_homology); }
    double final_ratio_homology() const { return last(ratio_homology); }
    double final_slope_cohomology() const { return last(slope_cohomology); }
    double final_ratio_cohomology() const { return last(ratio_cohomology); }
};

namespace detail {

inline void growth_samples(const std::vector<Int>& tdims, std::vector<double>& slope,
                           std::vector<double>& ratio) {
    for (size_t k = 0; k < tdims.size(); ++k) {
        double lg = tdims[k] == 0 ? 0.0 : log_big(tdims[k]);
        slope.push_back(lg / double(k + 1));
        if (k > 0) {
            double prev = tdims[k - 1] == 0 ? 0.0 : log_big(tdims[k - 1]);
            ratio.push_back(lg - prev);
        }
    }
}

}  // namespace detail

inline HochschildEntropy hh_entropy_estimate(const HochschildTable& tab) {
    if (tab.rows.size() < 3)
        throw UndefinedGrowthError("hh_entropy_estimate: need at least 3 rows");
    HochschildEntropy out;
    out.truncated = tab.truncated;
    std::vector<Int> th, tc;
    bool any_c = false;
    for (const auto& r : tab.rows) {
        th.push_back(r.tdim_homology);
        tc.push_back(r.tdim_cohomology);
        if (!r.cohomology.empty()) any_c = true;
    }
    detail::growth_samples(th, out.slope_homology, out.ratio_homology);
    if (any_c) detail::growth_samples(tc, out.slope_cohomology, out.ratio_cohomology);
    return out;
}

// Exact dimension match between the Hom side at power n and the contraction
// side at power n-1, for 2 <= n <= n_max: the two comparison complexes are
// adjoint images of the same tower, so their total cohomology agrees.
struct DualityCheckRow {
    int n = 0;
    Int hom_side = 0;
    Int contraction_side = 0;
    bool ok = false;
};

struct DualityCheck {
    std::vector<DualityCheckRow> rows;
    bool all_ok = false;
    bool truncated = false;
    std::string note;
};

inline DualityCheck hochschild_duality_check(const BimodCtx& ctx, int n_max,
                                             const Int& cell_cap = default_cell_budget()) {
    if (n_max < 2) throw ShapeError("hochschild_duality_check: n_max must be >= 2");
    HochschildTable tab = hochschild_table(ctx, n_max, HochschildVariant::both, cell_cap);
    DualityCheck out;
    out.truncated = tab.truncated;
    out.note = tab.note;
    out.all_ok = !tab.rows.empty();
    for (size_t i = 1; i < tab.rows.size(); ++i) {
        DualityCheckRow row;
        row.n = tab.rows[i].n;
        row.hom_side = tab.rows[i].tdim_cohomology;
        row.contraction_side = tab.rows[i - 1].tdim_homology;
        row.ok = row.hom_side == row.contraction_side;
        if (!row.ok) out.all_ok = false;
        out.rows.push_back(row);
    }
    if (out.rows.empty()) out.all_ok = false;
    return out;
}

inline DualityCheck hochschild_duality_check(const Algebra& A, int n_max,
                                             const Int& cell_cap = default_cell_budget()) {
    BimodCtx ctx(A);
    return hochschild_duality_check(ctx, n_max, cell_cap);
}

}  // namespace serrescope
