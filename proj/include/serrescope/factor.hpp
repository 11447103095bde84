#pragma once

#include <map>

#include "serrescope/polynomial.hpp"

namespace serrescope {

namespace detail {

// ---- F_p[x] arithmetic on small primes (coefficients 0..p-1) ----

using PPoly = std::vector<long long>;

inline void ptrim(PPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int pdeg(const PPoly& a) { return int(a.size()) - 1; }

inline PPoly pmul(const PPoly& a, const PPoly& b, long long p) {
    if (a.empty() || b.empty()) return {};
    PPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    ptrim(r);
    return r;
}

inline PPoly psub(PPoly a, const PPoly& b, long long p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
    ptrim(a);
    return a;
}

inline long long pinv(long long a, long long p) {
    long long t = 0, newt = 1, r = p, newr = ((a % p) + p) % p;
    while (newr) {
        long long q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    return ((t % p) + p) % p;
}

inline PPoly pmonic(PPoly a, long long p) {
    if (a.empty()) return a;
    long long inv = pinv(a.back(), p);
    for (auto& x : a) x = x * inv % p;
    return a;
}

// Remainder of a mod b (b nonzero); optionally writes the quotient.
inline PPoly prem(PPoly a, const PPoly& b, long long p, PPoly* quot = nullptr) {
    PPoly q(a.size() > b.size() ? a.size() - b.size() + 1 : 1, 0);
    long long inv = pinv(b.back(), p);
    while (pdeg(a) >= pdeg(b) && !a.empty()) {
        long long c = a.back() * inv % p;
        int shift = pdeg(a) - pdeg(b);
        q[size_t(shift)] = c;
        for (size_t i = 0; i < b.size(); ++i) {
            size_t k = i + size_t(shift);
            a[k] = ((a[k] - c * b[i]) % p + p) % p;
        }
        ptrim(a);
    }
    if (quot) {
        ptrim(q);
        *quot = std::move(q);
    }
    return a;
}

inline PPoly pgcd(PPoly a, PPoly b, long long p) {
    while (!b.empty()) {
        PPoly r = prem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return pmonic(a, p);
}

inline PPoly ppowmod(PPoly base, Int e, const PPoly& mod, long long p) {
    PPoly r{1};
    base = prem(std::move(base), mod, p);
    while (e > 0) {
        if ((e & 1) != 0) r = prem(pmul(r, base, p), mod, p);
        e >>= 1;
        base = prem(pmul(base, base, p), mod, p);
    }
    return r;
}

inline PPoly pderiv(const PPoly& a, long long p) {
    PPoly r;
    for (size_t k = 1; k < a.size(); ++k) r.push_back(a[k] * (long long)(k % size_t(p)) % p);
    ptrim(r);
    return r;
}

inline PPoly reduce_mod_p(const IntPoly& f, long long p) {
    PPoly r(f.coeffs().size());
    for (size_t k = 0; k < r.size(); ++k) {
        Int c = f.coeffs()[k] % p;
        if (c < 0) c += p;
        r[k] = (long long)c;
    }
    ptrim(r);
    return r;
}

// Berlekamp factorization of a squarefree monic polynomial mod p.
inline std::vector<PPoly> berlekamp(const PPoly& f, long long p) {
    int n = pdeg(f);
    if (n <= 1) return {f};
    // Rows of Q: x^(p*i) mod f.
    std::vector<PPoly> qrows(static_cast<size_t>(n));
    PPoly xp = ppowmod(PPoly{0, 1}, Int(p), f, p);
    qrows[0] = PPoly{1};
    for (int i = 1; i < n; ++i) qrows[size_t(i)] = prem(pmul(qrows[size_t(i - 1)], xp, p), f, p);
    // Nullspace of (Q - I)^T acting on coefficient vectors v: v maps to
    // sum_i v_i * (qrows[i] - e_i).
    std::vector<std::vector<long long>> m(size_t(n), std::vector<long long>(size_t(n), 0));
    for (int i = 0; i < n; ++i) {
        const PPoly& row = qrows[size_t(i)];
        for (int j = 0; j < n; ++j) {
            long long v = j < int(row.size()) ? row[size_t(j)] : 0;
            if (i == j) v = ((v - 1) % p + p) % p;
            m[size_t(j)][size_t(i)] = v;  // column i of the matrix is qrows[i]-e_i
        }
    }
    // Gaussian elimination mod p; collect nullspace basis.
    std::vector<int> pivot_col_of_row(size_t(n), -1);
    int r = 0;
    for (int c = 0; c < n && r < n; ++c) {
        int sel = -1;
        for (int i = r; i < n; ++i)
            if (m[size_t(i)][size_t(c)]) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[size_t(sel)], m[size_t(r)]);
        long long inv = pinv(m[size_t(r)][size_t(c)], p);
        for (int j = 0; j < n; ++j) m[size_t(r)][size_t(j)] = m[size_t(r)][size_t(j)] * inv % p;
        for (int i = 0; i < n; ++i) {
            if (i == r || !m[size_t(i)][size_t(c)]) continue;
            long long fmul = m[size_t(i)][size_t(c)];
            for (int j = 0; j < n; ++j)
                m[size_t(i)][size_t(j)] =
                    ((m[size_t(i)][size_t(j)] - fmul * m[size_t(r)][size_t(j)]) % p + p) % p;
        }
        pivot_col_of_row[size_t(r)] = c;
        ++r;
    }
    std::vector<bool> is_pivot(size_t(n), false);
    for (int i = 0; i < r; ++i) is_pivot[size_t(pivot_col_of_row[size_t(i)])] = true;
    std::vector<PPoly> basis;
    for (int c = 0; c < n; ++c) {
        if (is_pivot[size_t(c)]) continue;
        PPoly v(size_t(n), 0);
        v[size_t(c)] = 1;
        for (int i = 0; i < r; ++i) {
            long long coeff = m[size_t(i)][size_t(c)];
            if (coeff) v[size_t(pivot_col_of_row[size_t(i)])] = (p - coeff) % p;
        }
        ptrim(v);
        basis.push_back(std::move(v));
    }
    size_t nfactors = basis.size() + 1;  // constant vector is always in the kernel
    std::vector<PPoly> factors{pmonic(f, p)};
    for (const PPoly& v : basis) {
        if (factors.size() >= nfactors) break;
        if (pdeg(v) < 1) continue;
        std::vector<PPoly> next;
        for (PPoly& u : factors) {
            if (pdeg(u) <= 1) {
                next.push_back(std::move(u));
                continue;
            }
            PPoly rest = u;
            for (long long s = 0; s < p && pdeg(rest) > 0; ++s) {
                PPoly vs = v;
                if (vs.empty()) vs = PPoly{0};
                vs[0] = ((vs[0] - s) % p + p) % p;
                ptrim(vs);
                PPoly g = pgcd(rest, vs, p);
                if (pdeg(g) > 0 && pdeg(g) < pdeg(rest)) {
                    next.push_back(g);
                    PPoly quot;
                    prem(rest, g, p, &quot);
                    rest = pmonic(std::move(quot), p);
                }
            }
            if (!rest.empty() && pdeg(rest) >= 0) next.push_back(std::move(rest));
        }
        factors = std::move(next);
    }
    std::vector<PPoly> out;
    for (auto& u : factors)
        if (pdeg(u) > 0) out.push_back(pmonic(std::move(u), p));
    return out;
}

// ---- Z/p^k arithmetic via Int coefficients ----

inline IntPoly mod_reduce(const IntPoly& f, const Int& m) {
    std::vector<Int> c = f.coeffs();
    for (auto& x : c) {
        x %= m;
        if (x < 0) x += m;
    }
    return IntPoly(std::move(c));
}

inline IntPoly sym_reduce(const IntPoly& f, const Int& m) {
    std::vector<Int> c = f.coeffs();
    Int half = m / 2;
    for (auto& x : c) {
        x %= m;
        if (x < 0) x += m;
        if (x > half) x -= m;
    }
    return IntPoly(std::move(c));
}

// Division with remainder by a monic divisor, coefficients mod m.
inline IntPoly divmod_monic(const IntPoly& a, const IntPoly& b, const Int& m, IntPoly* quot) {
    std::vector<Int> r = a.coeffs();
    std::vector<Int> q(a.degree() >= b.degree() ? size_t(a.degree() - b.degree()) + 1 : 1, Int(0));
    for (int k = int(r.size()) - 1; k >= b.degree(); --k) {
        Int c = r[size_t(k)] % m;
        if (c < 0) c += m;
        if (c == 0) continue;
        q[size_t(k - b.degree())] = c;
        for (int j = 0; j <= b.degree(); ++j) {
            Int& t = r[size_t(k - b.degree() + j)];
            t = (t - c * b.coeff(j)) % m;
        }
    }
    if (quot) *quot = IntPoly(std::move(q));
    return mod_reduce(IntPoly(std::move(r)), m);
}

inline IntPoly lift_to_int(const PPoly& a) {
    std::vector<Int> c(a.size());
    for (size_t k = 0; k < a.size(); ++k) c[k] = a[k];
    return IntPoly(std::move(c));
}

// Bezout s*g + t*h = 1 in F_p[x] for coprime g, h; returned as Int polys.
inline void bezout_mod_p(const PPoly& g, const PPoly& h, long long p, IntPoly& s, IntPoly& t) {
    PPoly r0 = g, r1 = h;
    PPoly s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        PPoly q;
        PPoly r2 = prem(r0, r1, p, &q);
        PPoly s2 = psub(s0, pmul(q, s1, p), p);
        PPoly t2 = psub(t0, pmul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (pdeg(r0) != 0) throw ShapeError("hensel: factors not coprime mod p");
    long long inv = pinv(r0[0], p);
    for (auto& x : s0) x = x * inv % p;
    for (auto& x : t0) x = x * inv % p;
    s = lift_to_int(s0);
    t = lift_to_int(t0);
}

// Linear Hensel lift: f ≡ g*h (mod p), all monic, lifted to mod p^K.
inline void hensel_pair(const IntPoly& f, IntPoly& g, IntPoly& h, long long p, int K) {
    IntPoly s, t;
    bezout_mod_p(reduce_mod_p(g, p), reduce_mod_p(h, p), p, s, t);
    Int pk = p;  // current modulus p^i, invariant f ≡ g h (mod pk)
    Int pbig(p);
    for (int i = 1; i < K; ++i) {
        IntPoly diff = f - g * h;
        std::vector<Int> ec = diff.coeffs();
        for (auto& x : ec) x /= pk;  // exact by the invariant
        IntPoly e = mod_reduce(IntPoly(std::move(ec)), pbig);
        IntPoly q;
        IntPoly v = divmod_monic(mod_reduce(t * e, pbig), g, pbig, &q);
        IntPoly u = mod_reduce(s * e + q * h, pbig);
        g = g + mod_reduce(v, pbig) * pk;
        h = h + mod_reduce(u, pbig) * pk;
        pk *= p;
        g = mod_reduce(g, pk);
        h = mod_reduce(h, pk);
        // keep monic representatives
        if (g.lc() != 1 || h.lc() != 1) throw ShapeError("hensel: lost monicity");
    }
}

inline Int mignotte_bound(const IntPoly& f) {
    Int H = 0;
    for (const auto& c : f.coeffs()) H = std::max(H, int_abs(c));
    Int b = H + 1;
    for (int i = 0; i < f.degree() + 1; ++i) b *= 2;  // 2^(n+1) * (H+1) covers sqrt(n+1)*2^n*H
    return b;
}

// Factor a primitive squarefree monic polynomial of degree >= 1.
inline std::vector<IntPoly> factor_squarefree_monic(const IntPoly& f) {
    int n = f.degree();
    if (n == 1) return {f};
    static const long long primes[] = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                       43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    long long p = 0;
    PPoly fp;
    for (long long cand : primes) {
        fp = reduce_mod_p(f, cand);
        if (pdeg(fp) != n) continue;  // lc divisible by cand (impossible for monic)
        if (pdeg(pgcd(fp, pderiv(fp, cand), cand)) == 0) {
            p = cand;
            break;
        }
    }
    if (!p) throw ShapeError("factor: no good prime found");
    std::vector<PPoly> modular = berlekamp(pmonic(fp, p), p);
    if (modular.size() == 1) return {f};

    // Lift the whole factorization mod p^K by peeling one factor at a time.
    Int bound = mignotte_bound(f) * 2 + 1;
    int K = 1;
    Int pk = p;
    while (pk < bound) {
        pk *= p;
        ++K;
    }
    std::vector<IntPoly> lifted;
    IntPoly current = mod_reduce(f, pk);
    std::vector<PPoly> rest(modular.begin(), modular.end());
    while (rest.size() > 1) {
        PPoly gs = rest.back();
        rest.pop_back();
        PPoly hs{1};
        for (const auto& u : rest) hs = pmul(hs, u, p);
        IntPoly g = lift_to_int(gs), h = lift_to_int(hs);
        hensel_pair(current, g, h, p, K);
        lifted.push_back(g);
        current = h;
    }
    lifted.push_back(current);

    // Subset recombination by increasing cardinality.
    std::vector<IntPoly> result;
    IntPoly remaining = f;
    std::vector<IntPoly> pool = lifted;
    size_t card = 1;
    while (!pool.empty()) {
        if (card > pool.size() / 2) {
            result.push_back(remaining.primitive());
            break;
        }
        // iterate over subsets of size `card` via index combinations
        std::vector<size_t> idx(card);
        for (size_t i = 0; i < card; ++i) idx[i] = i;
        bool found = false;
        while (true) {
            IntPoly cand = IntPoly::constant(1);
            for (size_t i : idx) cand = mod_reduce(cand * pool[i], pk);
            cand = sym_reduce(cand, pk);
            if (!cand.is_zero() && divides(cand, remaining)) {
                remaining = divide_exact(remaining, cand);
                result.push_back(cand.primitive());
                std::vector<IntPoly> np;
                for (size_t i = 0, j = 0; i < pool.size(); ++i) {
                    if (j < idx.size() && idx[j] == i) {
                        ++j;
                        continue;
                    }
                    np.push_back(pool[i]);
                }
                pool = std::move(np);
                found = true;
                break;
            }
            // next combination
            size_t i = card;
            while (i-- > 0) {
                if (idx[i] + (card - i) < pool.size()) {
                    ++idx[i];
                    for (size_t j = i + 1; j < card; ++j) idx[j] = idx[j - 1] + 1;
                    break;
                }
                if (i == 0) {
                    i = SIZE_MAX;
                    break;
                }
            }
            if (i == SIZE_MAX) break;
        }
        if (!found) ++card;
        if (remaining.degree() == 0) break;
    }
    return result;
}

}  // namespace detail

struct PolyFactor {
    IntPoly poly;  // irreducible, primitive, positive leading coefficient
    int multiplicity = 0;
};

// Yun squarefree decomposition: p (primitive) = prod a_i^i with a_i squarefree
// and pairwise coprime; returns (a_i, i) for nonconstant a_i.
inline std::vector<PolyFactor> squarefree_decomposition(const IntPoly& p0) {
    IntPoly p = p0.primitive();
    std::vector<PolyFactor> out;
    if (p.degree() < 1) return out;
    IntPoly g = poly_gcd(p, p.derivative());
    IntPoly w = divide_exact(p, g);
    IntPoly y = divide_exact(p.derivative(), g);
    IntPoly z = y - w.derivative();
    int i = 1;
    while (w.degree() > 0) {
        IntPoly a = poly_gcd(w, z);
        if (a.degree() > 0) out.push_back({a, i});
        w = divide_exact(w, a);
        y = divide_exact(z, a);
        z = y - w.derivative();
        ++i;
    }
    return out;
}

// Full factorization over Z up to sign: primitive irreducible factors with
// multiplicities (content and sign dropped; x factors included).
inline std::vector<PolyFactor> factor(const IntPoly& p0) {
    if (p0.is_zero()) throw ShapeError("factor: zero polynomial");
    std::vector<PolyFactor> out;
    IntPoly p = p0.primitive();
    int xm = p.x_multiplicity();
    if (xm > 0) {
        out.push_back({IntPoly::x(), xm});
        p = p.strip_x();
    }
    if (p.degree() < 1) return out;
    for (const PolyFactor& sf : squarefree_decomposition(p)) {
        // monic transform: F(x) = lc^(n-1) f(x/lc) is monic with integer coeffs
        IntPoly f = sf.poly;
        Int l = f.lc();
        std::vector<IntPoly> irr;
        if (l == 1) {
            irr = detail::factor_squarefree_monic(f);
        } else {
            int n = f.degree();
            std::vector<Int> c(size_t(n) + 1);
            for (int k = 0; k < n; ++k) c[size_t(k)] = f.coeff(k) * int_pow(l, unsigned(n - 1 - k));
            c[size_t(n)] = 1;
            IntPoly F(std::move(c));
            for (const IntPoly& G : detail::factor_squarefree_monic(F)) {
                // undo: g(x) = primitive(G(l*x))
                std::vector<Int> gc(G.coeffs());
                Int pw = 1;
                for (size_t k = 0; k < gc.size(); ++k) {
                    gc[k] *= pw;
                    pw *= l;
                }
                irr.push_back(IntPoly(std::move(gc)).primitive());
            }
        }
        for (IntPoly& q : irr) out.push_back({q.primitive(), sf.multiplicity});
    }
    return out;
}

inline bool is_irreducible(const IntPoly& p) {
    if (p.degree() < 1) return false;
    auto fs = factor(p);
    return fs.size() == 1 && fs[0].multiplicity == 1 && fs[0].poly.degree() == p.degree();
}

}  // namespace serrescope
