#pragma once

#include <map>
#include <unordered_map>

#include "serrescope/matrix.hpp"
#include "serrescope/quiver.hpp"

namespace serrescope {

// Sparse element of a finite-dimensional algebra: basis index -> coefficient.
struct AlgElem {
    std::map<int, Rat> c;

    bool is_zero() const { return c.empty(); }
    void add(int idx, const Rat& v) {
        if (serrescope::is_zero(v)) return;
        auto it = c.find(idx);
        if (it == c.end()) {
            c.emplace(idx, v);
        } else {
            it->second += v;
            if (serrescope::is_zero(it->second)) c.erase(it);
        }
    }
    Rat coeff(int idx) const {
        auto it = c.find(idx);
        return it == c.end() ? Rat(0) : it->second;
    }
    AlgElem operator+(const AlgElem& o) const {
        AlgElem r = *this;
        for (const auto& [i, v] : o.c) r.add(i, v);
        return r;
    }
    AlgElem operator-(const AlgElem& o) const {
        AlgElem r = *this;
        for (const auto& [i, v] : o.c) r.add(i, -v);
        return r;
    }
    AlgElem operator*(const Rat& s) const {
        if (serrescope::is_zero(s)) return {};
        AlgElem r = *this;
        for (auto& [i, v] : r.c) v *= s;
        return r;
    }
    static AlgElem unit(int idx, Rat v = Rat(1)) {
        AlgElem r;
        r.add(idx, v);
        return r;
    }
    bool operator==(const AlgElem& o) const { return c == o.c; }
};

// Basic finite-dimensional algebra presented by a quiver with an admissible
// ideal generated by length-homogeneous relations.  Basis: the vertex
// idempotents (indices 0..V-1) followed by reduced path words, shorter first.
class Algebra {
   public:
    struct BasisElem {
        int src = -1, tgt = -1, len = 0;
        std::vector<int> word;  // arrow indices, empty for idempotents
        std::string name;
    };

    const Quiver& quiver() const { return quiver_; }
    int dim() const { return int(basis_.size()); }
    int nvertices() const { return quiver_.nvertices(); }
    const BasisElem& basis(int b) const { return basis_[size_t(b)]; }
    int idempotent(int v) const { return v; }

    // Basis indices spanning e_i A e_j (paths from i to j).
    const std::vector<int>& paths(int i, int j) const {
        return paths_[size_t(i) * size_t(nvertices()) + size_t(j)];
    }

    // Basis index of quiver arrow a (not simply nvertices()+a for product
    // algebras, whose basis is ordered by total length).
    int arrow_basis(int a) const { return arrow_basis_[size_t(a)]; }

    // For algebras built by tensor_algebra: basis index -> (left-factor basis,
    // right-factor basis).  Empty otherwise.
    const std::vector<std::pair<int, int>>& tensor_pairs() const { return tensor_pairs_; }

    // Words of length >= this bound are all zero in the quotient.
    int nilpotency_bound() const { return maxlen_ + 1; }

    const AlgElem& mul(int a, int b) const {
        static const AlgElem zero{};
        auto it = table_.find(key(a, b));
        return it == table_.end() ? zero : it->second;
    }
    AlgElem mul(const AlgElem& x, const AlgElem& y) const {
        AlgElem r;
        for (const auto& [a, va] : x.c)
            for (const auto& [b, vb] : y.c) {
                const AlgElem& p = mul(a, b);
                Rat s = va * vb;
                for (const auto& [i, v] : p.c) r.add(i, v * s);
            }
        return r;
    }

    AlgElem identity_element() const {
        AlgElem r;
        for (int v = 0; v < nvertices(); ++v) r.add(v, Rat(1));
        return r;
    }

    // c_ij = dim e_j A e_i (the j-th column is the dimension vector of the
    // projective right module e_j A).
    IntMatrix cartan_matrix() const {
        int n = nvertices();
        IntMatrix c(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) c(i, j) = Int(paths(j, i).size());
        return c;
    }

    std::string describe(const AlgElem& x) const {
        if (x.is_zero()) return "0";
        std::string s;
        for (const auto& [i, v] : x.c) {
            if (!s.empty()) s += " + ";
            s += to_string(v) + "*" + basis_[size_t(i)].name;
        }
        return s;
    }

    static Algebra build(Quiver q, const std::vector<Relation>& relations, int max_dim = 200000);

    friend Algebra opposite(const Algebra& a);
    friend Algebra tensor_algebra(const Algebra& a, const Algebra& b);

   private:
    long long key(int a, int b) const { return (long long)a * dim() + b; }

    void index_paths() {
        paths_.assign(size_t(nvertices()) * size_t(nvertices()), {});
        for (int b = 0; b < dim(); ++b)
            paths_[size_t(basis_[size_t(b)].src) * size_t(nvertices()) +
                   size_t(basis_[size_t(b)].tgt)]
                .push_back(b);
        maxlen_ = 0;
        for (const auto& be : basis_) maxlen_ = std::max(maxlen_, be.len);
    }

    Quiver quiver_;
    std::vector<BasisElem> basis_;
    std::unordered_map<long long, AlgElem> table_;
    std::vector<std::vector<int>> paths_;
    std::vector<int> arrow_basis_;
    std::vector<std::pair<int, int>> tensor_pairs_;
    int maxlen_ = 0;
};

inline Algebra Algebra::build(Quiver q, const std::vector<Relation>& relations, int max_dim) {
    q.validate();
    Algebra A;
    A.quiver_ = q;
    int V = q.nvertices();

    // vertex idempotents then arrows
    for (int v = 0; v < V; ++v)
        A.basis_.push_back({v, v, 0, {}, "e_" + q.vertices[size_t(v)]});

    // Validate relations (composable, length-homogeneous, lengths >= 2) and
    // split them into (source, target) blocks: the ideal contains each
    // component e_i r e_j separately.
    std::map<int, std::vector<Relation>> rels_by_len;
    for (const Relation& r : relations) {
        if (r.empty()) continue;
        int len = -1;
        std::map<std::pair<int, int>, Relation> blocks;
        for (const PathTerm& t : r) {
            if (serrescope::is_zero(t.coeff)) continue;
            if (int(t.arrows.size()) < 2)
                throw AdmissibilityError("relation term shorter than two arrows");
            if (len < 0) len = int(t.arrows.size());
            if (len != int(t.arrows.size()))
                throw AdmissibilityError("relations must be length-homogeneous");
            for (size_t k = 0; k + 1 < t.arrows.size(); ++k)
                if (q.arrows[size_t(t.arrows[k])].tgt != q.arrows[size_t(t.arrows[k + 1])].src)
                    throw AdmissibilityError("relation contains a non-composable word");
            int s = q.arrows[size_t(t.arrows.front())].src;
            int g = q.arrows[size_t(t.arrows.back())].tgt;
            blocks[{s, g}].push_back(t);
        }
        for (auto& [st, block] : blocks) rels_by_len[len].push_back(std::move(block));
    }

    if (q.narrows() == 0) {
        A.index_paths();
        for (int v = 0; v < V; ++v) A.table_[A.key(v, v)] = AlgElem::unit(v);
        return A;
    }

    for (int a = 0; a < q.narrows(); ++a) {
        A.arrow_basis_.push_back(int(A.basis_.size()));
        A.basis_.push_back(
            {q.arrows[size_t(a)].src, q.arrows[size_t(a)].tgt, 1, {a}, q.arrows[size_t(a)].name});
    }

    // step_red[(b, alpha)]: reduction of (basis word b) * alpha, the
    // right-multiplication table by arrows that generates everything else.
    std::map<std::pair<int, int>, AlgElem> step_red;

    // Reduce a composable arrow word to the normal-form basis.
    auto red_word = [&](const std::vector<int>& w) -> AlgElem {
        if (w.empty()) throw ShapeError("empty word");
        AlgElem e = AlgElem::unit(V + w[0]);
        for (size_t k = 1; k < w.size(); ++k) {
            AlgElem next;
            for (const auto& [b, v] : e.c) {
                auto it = step_red.find({b, w[k]});
                if (it == step_red.end()) continue;  // product is zero
                for (const auto& [i, u] : it->second.c) next.add(i, u * v);
            }
            e = std::move(next);
            if (e.is_zero()) break;
        }
        return e;
    };

    // Ideal generators at the current length, kept as formal word
    // combinations so they can be pushed forward by left multiplication.
    using WordCombo = std::vector<std::pair<Rat, std::vector<int>>>;
    std::vector<WordCombo> gens;  // spans (path algebra) * relations at this length

    std::vector<int> prev_nf;  // basis indices of the previous length
    for (int a = 0; a < q.narrows(); ++a) prev_nf.push_back(V + a);

    for (int len = 2;; ++len) {
        // candidates: normal form of length len-1 times one arrow
        std::vector<std::pair<int, int>> cands;
        std::map<std::pair<int, int>, int> cand_index;
        for (int b : prev_nf)
            for (int a = 0; a < q.narrows(); ++a)
                if (A.basis_[size_t(b)].tgt == q.arrows[size_t(a)].src) {
                    cand_index[{b, a}] = int(cands.size());
                    cands.push_back({b, a});
                }
        if (cands.empty()) break;

        // new ideal generators: arrows * previous generators, plus relations
        std::vector<WordCombo> new_gens;
        for (const WordCombo& g : gens)
            for (int a = 0; a < q.narrows(); ++a) {
                WordCombo pushed;
                for (const auto& [cf, w] : g) {
                    if (q.arrows[size_t(a)].tgt != q.arrows[size_t(w[0])].src) continue;
                    std::vector<int> nw{a};
                    nw.insert(nw.end(), w.begin(), w.end());
                    pushed.push_back({cf, std::move(nw)});
                }
                if (!pushed.empty()) new_gens.push_back(std::move(pushed));
            }
        auto rit = rels_by_len.find(len);
        if (rit != rels_by_len.end())
            for (const Relation& r : rit->second) {
                WordCombo g;
                for (const PathTerm& t : r) g.push_back({t.coeff, t.arrows});
                new_gens.push_back(std::move(g));
            }
        gens = new_gens;

        // resolve generators into candidate coordinates and echelonize
        std::vector<std::map<int, Rat>> rows;
        for (const WordCombo& g : gens) {
            std::map<int, Rat> row;
            for (const auto& [cf, w] : g) {
                std::vector<int> prefix(w.begin(), w.end() - 1);
                AlgElem pre = red_word(prefix);
                for (const auto& [b, v] : pre.c) {
                    auto it = cand_index.find({b, w.back()});
                    if (it == cand_index.end()) continue;
                    Rat add = v * cf;
                    auto [rt, fresh] = row.emplace(it->second, add);
                    if (!fresh) {
                        rt->second += add;
                        if (serrescope::is_zero(rt->second)) row.erase(rt);
                    }
                }
            }
            if (!row.empty()) rows.push_back(std::move(row));
        }
        // RREF invariant: every stored pivot-row tail is free of pivot
        // coordinates, so one pass per row suffices.
        std::map<int, std::map<int, Rat>> pivot_rows;  // pivot candidate -> tail
        for (auto& row : rows) {
            for (const auto& [pc0, prow] : pivot_rows) {
                auto hit = row.find(pc0);
                if (hit == row.end()) continue;
                Rat f = hit->second;
                row.erase(hit);
                for (const auto& [ci, v] : prow) {
                    auto [rt, fresh] = row.emplace(ci, -f * v);
                    if (!fresh) {
                        rt->second -= f * v;
                        if (serrescope::is_zero(rt->second)) row.erase(rt);
                    }
                }
            }
            if (row.empty()) continue;
            auto lead = row.begin();
            Rat inv = Rat(1) / lead->second;
            std::map<int, Rat> norm;
            for (const auto& [ci, v] : row) norm.emplace(ci, v * inv);
            int pc = norm.begin()->first;
            norm.erase(norm.begin());
            // back-substitute into earlier pivot rows
            for (auto& [opc, orow] : pivot_rows) {
                auto hit = orow.find(pc);
                if (hit == orow.end()) continue;
                Rat f = hit->second;
                orow.erase(hit);
                for (const auto& [ci, v] : norm) {
                    auto [rt, fresh] = orow.emplace(ci, -f * v);
                    if (!fresh) {
                        rt->second -= f * v;
                        if (serrescope::is_zero(rt->second)) orow.erase(rt);
                    }
                }
            }
            pivot_rows.emplace(pc, std::move(norm));
        }

        // non-pivot candidates become basis elements of this length
        std::vector<int> nf;
        std::map<int, int> cand_to_basis;
        for (int ci = 0; ci < int(cands.size()); ++ci) {
            if (pivot_rows.count(ci)) continue;
            auto [b, a] = cands[size_t(ci)];
            BasisElem be;
            be.src = A.basis_[size_t(b)].src;
            be.tgt = q.arrows[size_t(a)].tgt;
            be.len = len;
            be.word = A.basis_[size_t(b)].word;
            be.word.push_back(a);
            be.name = A.basis_[size_t(b)].name + "*" + q.arrows[size_t(a)].name;
            cand_to_basis[ci] = int(A.basis_.size());
            nf.push_back(int(A.basis_.size()));
            A.basis_.push_back(std::move(be));
            if (int(A.basis_.size()) > max_dim)
                throw BoundError("algebra dimension exceeds the bound", q.has_cycle());
        }
        for (int ci = 0; ci < int(cands.size()); ++ci) {
            AlgElem red;
            auto pr = pivot_rows.find(ci);
            if (pr == pivot_rows.end()) {
                red = AlgElem::unit(cand_to_basis[ci]);
            } else {
                for (const auto& [cj, v] : pr->second) red.add(cand_to_basis.at(cj), -v);
            }
            step_red[cands[size_t(ci)]] = std::move(red);
        }
        if (nf.empty()) break;
        prev_nf = nf;
    }

    // multiplication table from the stored arrow steps
    A.index_paths();
    for (int x = 0; x < A.dim(); ++x) {
        const BasisElem& bx = A.basis_[size_t(x)];
        for (int y = 0; y < A.dim(); ++y) {
            const BasisElem& by = A.basis_[size_t(y)];
            if (bx.tgt != by.src) continue;
            AlgElem prod;
            if (by.len == 0) {
                prod = AlgElem::unit(x);
            } else if (bx.len == 0) {
                prod = AlgElem::unit(y);
            } else {
                AlgElem e = AlgElem::unit(x);
                for (int a : by.word) {
                    AlgElem next;
                    for (const auto& [b, v] : e.c) {
                        auto it = step_red.find({b, a});
                        if (it == step_red.end()) continue;
                        for (const auto& [i, u] : it->second.c) next.add(i, u * v);
                    }
                    e = std::move(next);
                    if (e.is_zero()) break;
                }
                prod = std::move(e);
            }
            if (!prod.is_zero()) A.table_[A.key(x, y)] = std::move(prod);
        }
    }
    return A;
}

inline Algebra opposite(const Algebra& a) {
    Algebra op;
    op.quiver_ = a.quiver_;
    op.quiver_.name = a.quiver_.name + "^op";
    for (auto& ar : op.quiver_.arrows) std::swap(ar.src, ar.tgt);
    op.basis_ = a.basis_;
    op.arrow_basis_ = a.arrow_basis_;
    op.tensor_pairs_ = a.tensor_pairs_;
    for (auto& be : op.basis_) {
        std::swap(be.src, be.tgt);
        std::reverse(be.word.begin(), be.word.end());
        if (be.len >= 2) {
            be.name.clear();
            for (int w : be.word) {
                if (!be.name.empty()) be.name += "*";
                be.name += op.quiver_.arrows[size_t(w)].name;
            }
        }
    }
    for (const auto& [k, v] : a.table_) {
        int x = int(k / a.dim()), y = int(k % a.dim());
        op.table_[op.key(y, x)] = v;
    }
    op.index_paths();
    return op;
}

// A (x) B with multiplication (p (x) q)(p' (x) q') = pp' (x) qq'; the result
// is again basic with vertex set V_A x V_B.  Built directly from the factor
// tables; enumerating reduced words of the product presentation would blow up
// on larger inputs.
inline Algebra tensor_algebra(const Algebra& a, const Algebra& b) {
    Algebra t;
    int da = a.dim(), db = b.dim();
    int va = a.nvertices(), vb = b.nvertices();
    Quiver q;
    q.name = a.quiver_.name + "(x)" + b.quiver_.name;
    for (int i = 0; i < va; ++i)
        for (int j = 0; j < vb; ++j)
            q.vertices.push_back(a.quiver_.vertices[size_t(i)] + "|" +
                                 b.quiver_.vertices[size_t(j)]);
    for (const auto& ar : a.quiver_.arrows)
        for (int j = 0; j < vb; ++j)
            q.arrows.push_back({ar.name + "|" + b.quiver_.vertices[size_t(j)], ar.src * vb + j,
                                ar.tgt * vb + j});
    for (int i = 0; i < va; ++i)
        for (const auto& br : b.quiver_.arrows)
            q.arrows.push_back({a.quiver_.vertices[size_t(i)] + "|" + br.name,
                                i * vb + br.src, i * vb + br.tgt});
    t.quiver_ = q;

    // basis pairs ordered idempotents-first, then by total length
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < va; ++i)
        for (int j = 0; j < vb; ++j) pairs.push_back({i, j});
    std::vector<std::pair<int, int>> rest;
    for (int x = 0; x < da; ++x)
        for (int y = 0; y < db; ++y)
            if (a.basis(x).len + b.basis(y).len > 0) rest.push_back({x, y});
    std::stable_sort(rest.begin(), rest.end(), [&](const auto& l, const auto& r) {
        return a.basis(l.first).len + b.basis(l.second).len <
               a.basis(r.first).len + b.basis(r.second).len;
    });
    pairs.insert(pairs.end(), rest.begin(), rest.end());

    std::unordered_map<long long, int> pair_index;
    for (int k = 0; k < int(pairs.size()); ++k)
        pair_index[(long long)pairs[size_t(k)].first * db + pairs[size_t(k)].second] = k;

    int na = a.quiver_.narrows(), nb = b.quiver_.narrows();
    for (const auto& [x, y] : pairs) {
        Algebra::BasisElem be;
        be.src = a.basis(x).src * vb + b.basis(y).src;
        be.tgt = a.basis(x).tgt * vb + b.basis(y).tgt;
        be.len = a.basis(x).len + b.basis(y).len;
        be.name = "(" + a.basis(x).name + "|" + b.basis(y).name + ")";
        // representative word: x (x) e at the column src(y), then e (x) y at
        // the row tgt(x) -- their product is exactly the pair (x, y)
        for (int w : a.basis(x).word) be.word.push_back(w * vb + b.basis(y).src);
        for (int w : b.basis(y).word) be.word.push_back(na * vb + a.basis(x).tgt * nb + w);
        t.basis_.push_back(std::move(be));
    }
    t.tensor_pairs_ = pairs;
    for (int ar = 0; ar < na; ++ar)
        for (int j = 0; j < vb; ++j)
            t.arrow_basis_.push_back(pair_index.at((long long)a.arrow_basis(ar) * db + j));
    for (int i = 0; i < va; ++i)
        for (int br = 0; br < nb; ++br)
            t.arrow_basis_.push_back(pair_index.at((long long)i * db + b.arrow_basis(br)));
    t.index_paths();

    for (int m = 0; m < int(pairs.size()); ++m) {
        auto [x1, y1] = pairs[size_t(m)];
        for (int n = 0; n < int(pairs.size()); ++n) {
            auto [x2, y2] = pairs[size_t(n)];
            if (t.basis_[size_t(m)].tgt != t.basis_[size_t(n)].src) continue;
            const AlgElem& pa = a.mul(x1, x2);
            if (pa.is_zero()) continue;
            const AlgElem& pb = b.mul(y1, y2);
            if (pb.is_zero()) continue;
            AlgElem prod;
            for (const auto& [i, u] : pa.c)
                for (const auto& [j, v] : pb.c)
                    prod.add(pair_index.at((long long)i * db + j), u * v);
            if (!prod.is_zero()) t.table_[t.key(m, n)] = std::move(prod);
        }
    }
    return t;
}

// A^op (x) A; right modules over it are A-A-bimodules.
inline Algebra enveloping(const Algebra& a) { return tensor_algebra(opposite(a), a); }

}  // namespace serrescope
