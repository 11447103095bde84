#pragma once

#include <optional>

#include "serrescope/factor.hpp"

namespace serrescope {

inline int rat_sign(const Rat& x) {
    if (x.numerator() > 0) return 1;
    if (x.numerator() < 0) return -1;
    return 0;
}

// Content stripped without touching the sign (Sturm needs true signs).
inline IntPoly primitive_keep_sign(const IntPoly& p) {
    if (p.is_zero()) return p;
    Int g = p.content();
    std::vector<Int> c = p.coeffs();
    for (auto& x : c) x /= g;
    return IntPoly(std::move(c));
}

// Sturm chain of a squarefree polynomial; remainders rescaled by positive
// constants only, so sign variations are preserved.
inline std::vector<IntPoly> sturm_chain(const IntPoly& p) {
    std::vector<IntPoly> chain;
    if (p.is_zero()) return chain;
    chain.push_back(p);
    IntPoly d = p.derivative();
    if (d.is_zero()) return chain;
    chain.push_back(d);
    while (true) {
        const IntPoly& a = chain[chain.size() - 2];
        const IntPoly& b = chain.back();
        IntPoly r = pseudo_rem_signed(a, b);
        if (r.is_zero()) break;
        chain.push_back(primitive_keep_sign(-r));
    }
    return chain;
}

inline int sturm_variations(const std::vector<IntPoly>& chain, const Rat& x) {
    int var = 0, prev = 0;
    for (const IntPoly& q : chain) {
        int s = rat_sign(q.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

// Number of roots in the half-open interval (a, b].
inline int sturm_count(const std::vector<IntPoly>& chain, const Rat& a, const Rat& b) {
    return sturm_variations(chain, a) - sturm_variations(chain, b);
}

// Strict bound: every root z satisfies |z| < bound.
inline Rat cauchy_root_bound(const IntPoly& p) {
    if (p.degree() < 1) return Rat(1);
    Int mx = 0;
    for (int k = 0; k < p.degree(); ++k) mx = std::max(mx, int_abs(p.coeff(k)));
    return Rat(mx, int_abs(p.lc())) + Rat(2);
}

// Isolating open intervals for every real root of a squarefree polynomial,
// sorted increasingly; endpoints are never roots.
inline std::vector<std::pair<Rat, Rat>> isolate_real_roots(const IntPoly& p0) {
    std::vector<std::pair<Rat, Rat>> out;
    if (p0.degree() < 1) return out;
    IntPoly p = primitive_keep_sign(p0);
    std::vector<IntPoly> chain = sturm_chain(p);
    Rat bound = cauchy_root_bound(p);
    struct Seg {
        Rat a, b;
        int count;
    };
    std::vector<Seg> stack{{-bound, bound, sturm_count(chain, -bound, bound)}};
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.count == 0) continue;
        if (s.count == 1) {
            out.emplace_back(s.a, s.b);
            continue;
        }
        Rat mid = (s.a + s.b) / Rat(2);
        if (rat_sign(p.eval(mid)) == 0) {
            // shift the split point off the rational root
            for (int j = 3;; j += 2) {
                Rat cand = s.a + (s.b - s.a) * Rat(Int(j - 1), Int(2 * j));
                if (rat_sign(p.eval(cand)) != 0) {
                    mid = cand;
                    break;
                }
            }
        }
        int left = sturm_count(chain, s.a, mid);
        stack.push_back({mid, s.b, s.count - left});
        stack.push_back({s.a, mid, left});
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

// A real algebraic number: irreducible minimal polynomial plus an isolating
// interval.  Rational numbers are stored exactly (degree-one minpoly).
class AlgebraicReal {
   public:
    AlgebraicReal() : minpoly_(IntPoly::x()), lo_(0), hi_(0) {}

    static AlgebraicReal from_rational(const Rat& v) {
        AlgebraicReal r;
        r.minpoly_ = IntPoly({-v.numerator(), v.denominator()}).primitive();
        r.lo_ = r.hi_ = v;
        return r;
    }

    // q irreducible with exactly one root in (lo, hi), endpoints non-roots.
    AlgebraicReal(IntPoly q, Rat lo, Rat hi)
        : minpoly_(q.primitive()), lo_(std::move(lo)), hi_(std::move(hi)) {
        if (minpoly_.degree() == 1) {
            lo_ = hi_ = Rat(-minpoly_.coeff(0), minpoly_.coeff(1));
        }
    }

    const IntPoly& minpoly() const { return minpoly_; }
    bool is_rational() const { return minpoly_.degree() == 1; }
    Rat rational_value() const {
        if (!is_rational()) throw ShapeError("algebraic: not rational");
        return lo_;
    }
    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }

    void refine() const {
        if (lo_ == hi_) return;
        Rat mid = (lo_ + hi_) / Rat(2);
        if (rat_sign(minpoly_.eval(lo_)) * rat_sign(minpoly_.eval(mid)) < 0)
            hi_ = mid;
        else
            lo_ = mid;
    }

    void refine_below(const Rat& width) const {
        while (hi_ - lo_ > width) refine();
    }

    double to_double() const {
        refine_below(Rat(Int(1), int_pow(Int(2), 80)));
        return serrescope::to_double((lo_ + hi_) / Rat(2));
    }

    // -1 / 0 / +1 against a rational.
    int compare(const Rat& q) const {
        if (lo_ == hi_) return rat_sign(lo_ - q);
        while (lo_ < q && q < hi_) refine();  // q is never the root (deg >= 2)
        if (q <= lo_) return 1;
        return -1;
    }

    int compare(const AlgebraicReal& o) const {
        if (lo_ == hi_) return -o.compare(lo_);
        if (o.lo_ == o.hi_) return compare(o.lo_);
        if (minpoly_ == o.minpoly_) {
            Rat sep = separation_bound(minpoly_);
            refine_below(sep);
            o.refine_below(sep);
            if (!(hi_ < o.lo_ || o.hi_ < lo_)) return 0;
        } else {
            while (!(hi_ < o.lo_ || o.hi_ < lo_)) {
                refine();
                o.refine();
            }
        }
        return hi_ < o.lo_ ? -1 : 1;
    }

    bool is_one() const { return compare(Rat(1)) == 0; }

   private:
    // Crude positive lower bound on the distance between distinct roots,
    // divided by 4 so overlapping refined intervals force equality.
    static Rat separation_bound(const IntPoly& f) {
        int d = std::max(2, f.degree());
        Int h = 1;
        for (const auto& c : f.coeffs()) h = std::max(h, int_abs(c));
        Int den = int_pow(Int(d), unsigned(d + 2)) * int_pow(h + 1, unsigned(2 * d)) * 4;
        return Rat(Int(1), den);
    }

    IntPoly minpoly_;
    mutable Rat lo_, hi_;
};

// Largest real root together with its irreducible minimal polynomial.
inline std::optional<AlgebraicReal> max_real_root(const IntPoly& p) {
    if (p.degree() < 1) return std::nullopt;
    IntPoly sf = squarefree_part(p);
    auto intervals = isolate_real_roots(sf);
    if (intervals.empty()) return std::nullopt;
    auto [a, b] = intervals.back();
    for (const PolyFactor& f : factor(sf)) {
        if (f.poly.degree() < 1) continue;
        if (f.poly == IntPoly::x()) {
            if (rat_sign(a) < 0 && rat_sign(b) > 0) return AlgebraicReal::from_rational(Rat(0));
            continue;
        }
        if (f.poly.degree() == 1) {
            Rat r(-f.poly.coeff(0), f.poly.coeff(1));
            if (a < r && r < b) return AlgebraicReal::from_rational(r);
            continue;
        }
        if (rat_sign(f.poly.eval(a)) * rat_sign(f.poly.eval(b)) < 0)
            return AlgebraicReal(f.poly, a, b);
    }
    throw ShapeError("max_real_root: no factor matches the isolated root");
}

// P(t) with roots {z_i * z_j} for the roots z_i of g (g(0) != 0), computed as
// Res_y(g(y), y^m g(t/y)) by evaluation and interpolation.
inline IntPoly products_poly(const IntPoly& g) {
    int m = g.degree();
    if (m < 1) throw ShapeError("products_poly: constant input");
    if (g.coeff(0) == 0) throw ShapeError("products_poly: zero root present");
    int npts = m * m + 1;
    std::vector<Int> xs(static_cast<size_t>(npts));
    std::vector<Int> ys(static_cast<size_t>(npts));
    for (int j = 0; j < npts; ++j) {
        Int t = Int(j % 2 == 0 ? j / 2 : -(j / 2 + 1));
        std::vector<Int> h(size_t(m) + 1, Int(0));
        Int tp = 1;
        for (int k = 0; k <= m; ++k) {
            h[size_t(m - k)] = g.coeff(k) * tp;
            tp *= t;
        }
        xs[size_t(j)] = t;
        ys[size_t(j)] = resultant(g, IntPoly(std::move(h)));
    }
    return interpolate(xs, ys);
}

struct SpectralData {
    bool nilpotent = false;       // zero spectrum
    AlgebraicReal rho;            // the spectral radius itself
    IntPoly rho_minpoly;          // irreducible minimal polynomial of rho
    IntPoly rho_sq_minpoly;       // irreducible minimal polynomial of rho^2
};

// Spectral radius of an integer matrix, exactly.  rho^2 is the largest real
// root of the pairwise-products polynomial of the squarefree characteristic
// polynomial (rho^2 = z*conj(z) is such a product, and every real product
// z_i*z_j is bounded by rho^2 in absolute value).
inline SpectralData spectral_radius(const IntMatrix& m) {
    SpectralData out;
    IntPoly cp = char_poly(m);
    IntPoly g = cp.strip_x();
    if (g.degree() < 1) {
        out.nilpotent = true;
        out.rho = AlgebraicReal::from_rational(Rat(0));
        out.rho_minpoly = IntPoly::x();
        out.rho_sq_minpoly = IntPoly::x();
        return out;
    }
    g = squarefree_part(g);
    IntPoly prod = products_poly(g);
    auto tau = max_real_root(prod);
    if (!tau) throw ShapeError("spectral_radius: products polynomial has no real root");
    out.rho_sq_minpoly = tau->minpoly();
    // rho is the largest real root of q(x^2); its minpoly is found there.
    auto rho = max_real_root(tau->minpoly().compose_x2());
    if (!rho) throw ShapeError("spectral_radius: square-root extraction failed");
    out.rho = *rho;
    out.rho_minpoly = rho->minpoly();
    return out;
}

}  // namespace serrescope
