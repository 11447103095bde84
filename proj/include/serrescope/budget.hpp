#pragma once

#include <cstdlib>

#include "serrescope/common.hpp"

namespace serrescope {

// Cost of holding a complex in memory, measured in cells: one per projective
// summand plus one per materialized basis vector.  The default cap keeps the
// large tensor towers near two million cells; SERRE_SCOPE_BUDGET overrides it.
inline Int default_cell_budget() {
    const char* env = std::getenv("SERRE_SCOPE_BUDGET");
    if (!env || !*env) return Int(2000000);
    Int v;
    try {
        v = Int(env);
    } catch (const std::exception&) {
        throw BudgetError("SERRE_SCOPE_BUDGET must be a positive integer");
    }
    if (v <= 0) throw BudgetError("SERRE_SCOPE_BUDGET must be a positive integer");
    return v;
}

}  // namespace serrescope
