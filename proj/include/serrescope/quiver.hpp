#pragma once

#include <set>

#include "serrescope/common.hpp"

namespace serrescope {

struct Arrow {
    std::string name;
    int src = -1;
    int tgt = -1;
};

struct Quiver {
    std::string name;
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;

    int nvertices() const { return int(vertices.size()); }
    int narrows() const { return int(arrows.size()); }

    int vertex_index(const std::string& v) const {
        for (int i = 0; i < nvertices(); ++i)
            if (vertices[size_t(i)] == v) return i;
        throw ShapeError("quiver: unknown vertex '" + v + "'");
    }
    int arrow_index(const std::string& a) const {
        for (int i = 0; i < narrows(); ++i)
            if (arrows[size_t(i)].name == a) return i;
        throw ShapeError("quiver: unknown arrow '" + a + "'");
    }

    void validate() const {
        std::set<std::string> names;
        for (const auto& v : vertices)
            if (!names.insert(v).second) throw ShapeError("quiver: duplicate name '" + v + "'");
        for (const auto& a : arrows) {
            if (!names.insert(a.name).second)
                throw ShapeError("quiver: duplicate name '" + a.name + "'");
            if (a.src < 0 || a.src >= nvertices() || a.tgt < 0 || a.tgt >= nvertices())
                throw ShapeError("quiver: arrow '" + a.name + "' has a bad endpoint");
        }
    }

    bool has_cycle() const {
        std::vector<int> state(size_t(nvertices()), 0);  // 0 new, 1 active, 2 done
        std::vector<std::vector<int>> out(static_cast<size_t>(nvertices()));
        for (const auto& a : arrows) out[size_t(a.src)].push_back(a.tgt);
        std::vector<std::pair<int, size_t>> stack;
        for (int start = 0; start < nvertices(); ++start) {
            if (state[size_t(start)]) continue;
            stack.push_back({start, 0});
            state[size_t(start)] = 1;
            while (!stack.empty()) {
                auto& [v, next] = stack.back();
                if (next < out[size_t(v)].size()) {
                    int w = out[size_t(v)][next++];
                    if (state[size_t(w)] == 1) return true;
                    if (state[size_t(w)] == 0) {
                        state[size_t(w)] = 1;
                        stack.push_back({w, 0});
                    }
                } else {
                    state[size_t(v)] = 2;
                    stack.pop_back();
                }
            }
        }
        return false;
    }
};

// One summand of a relation: a scalar times a composable arrow word,
// composition read left to right.
struct PathTerm {
    Rat coeff;
    std::vector<int> arrows;
};
using Relation = std::vector<PathTerm>;

}  // namespace serrescope
