#pragma once

#include "serrescope/matrix.hpp"

namespace serrescope {

// Polynomial over Z, coefficients ascending (coeffs[k] is the x^k term).
// Invariant: no trailing zero coefficients; the zero polynomial is {}.
class IntPoly {
   public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Int> c) : c_(std::move(c)) { trim(); }
    static IntPoly constant(Int v) { return IntPoly(std::vector<Int>{std::move(v)}); }
    static IntPoly x() { return IntPoly({0, 1}); }
    // x^n with coefficient c.
    static IntPoly monomial(int n, Int coef = 1) {
        std::vector<Int> c(size_t(n) + 1, Int(0));
        c[size_t(n)] = std::move(coef);
        return IntPoly(std::move(c));
    }

    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const Int& lc() const {
        if (is_zero()) throw ShapeError("poly: lc of zero");
        return c_.back();
    }
    Int coeff(int k) const { return (k >= 0 && k < int(c_.size())) ? c_[size_t(k)] : Int(0); }
    const std::vector<Int>& coeffs() const { return c_; }

    bool operator==(const IntPoly& o) const { return c_ == o.c_; }
    bool operator!=(const IntPoly& o) const { return c_ != o.c_; }

    IntPoly operator+(const IntPoly& o) const {
        std::vector<Int> r(std::max(c_.size(), o.c_.size()), Int(0));
        for (size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
        for (size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
        return IntPoly(std::move(r));
    }
    IntPoly operator-(const IntPoly& o) const {
        std::vector<Int> r(std::max(c_.size(), o.c_.size()), Int(0));
        for (size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
        for (size_t k = 0; k < o.c_.size(); ++k) r[k] -= o.c_[k];
        return IntPoly(std::move(r));
    }
    IntPoly operator-() const {
        std::vector<Int> r = c_;
        for (auto& x : r) x = -x;
        return IntPoly(std::move(r));
    }
    IntPoly operator*(const IntPoly& o) const {
        if (is_zero() || o.is_zero()) return IntPoly();
        std::vector<Int> r(c_.size() + o.c_.size() - 1, Int(0));
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        }
        return IntPoly(std::move(r));
    }
    IntPoly operator*(const Int& s) const {
        if (s == 0) return IntPoly();
        std::vector<Int> r = c_;
        for (auto& x : r) x *= s;
        return IntPoly(std::move(r));
    }

    Int eval(const Int& x) const {
        Int v = 0;
        for (size_t k = c_.size(); k-- > 0;) v = v * x + c_[k];
        return v;
    }
    Rat eval(const Rat& x) const {
        Rat v(0);
        for (size_t k = c_.size(); k-- > 0;) v = v * x + Rat(c_[k]);
        return v;
    }
    double eval_double(double x) const {
        double v = 0;
        for (size_t k = c_.size(); k-- > 0;) v = v * x + double(c_[k]);
        return v;
    }
    IntMatrix eval(const IntMatrix& m) const {
        m.require_square("poly eval");
        IntMatrix v(m.rows(), m.rows());
        for (size_t k = c_.size(); k-- > 0;) {
            v = v * m;
            for (int i = 0; i < m.rows(); ++i) v(i, i) += c_[k];
        }
        return v;
    }

    IntPoly derivative() const {
        if (c_.size() <= 1) return IntPoly();
        std::vector<Int> r(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k) r[k - 1] = c_[k] * Int(k);
        return IntPoly(std::move(r));
    }

    Int content() const {
        Int g = 0;
        for (const auto& x : c_) g = int_gcd(g, x);
        return g;
    }
    // Content stripped, leading coefficient made positive.
    IntPoly primitive() const {
        if (is_zero()) return IntPoly();
        Int g = content();
        if (lc() < 0) g = -g;
        std::vector<Int> r = c_;
        for (auto& x : r) x /= g;
        return IntPoly(std::move(r));
    }

    // x^deg * p(1/x): reverses the coefficient list.
    IntPoly reversal() const {
        std::vector<Int> r(c_.rbegin(), c_.rend());
        return IntPoly(std::move(r));
    }

    // p(x^2) -> substitute, p(c*x) -> dilate.
    IntPoly compose_x2() const {
        if (is_zero()) return IntPoly();
        std::vector<Int> r(2 * c_.size() - 1, Int(0));
        for (size_t k = 0; k < c_.size(); ++k) r[2 * k] = c_[k];
        return IntPoly(std::move(r));
    }
    IntPoly compose_negx() const {
        std::vector<Int> r = c_;
        for (size_t k = 1; k < r.size(); k += 2) r[k] = -r[k];
        return IntPoly(std::move(r));
    }

    // Number of trailing zero coefficients (multiplicity of the root 0).
    int x_multiplicity() const {
        int m = 0;
        while (m < int(c_.size()) && c_[size_t(m)] == 0) ++m;
        return is_zero() ? 0 : m;
    }
    IntPoly strip_x() const {
        int m = x_multiplicity();
        if (m == 0) return *this;
        return IntPoly(std::vector<Int>(c_.begin() + m, c_.end()));
    }

   private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Int> c_;
};

inline std::string to_string(const IntPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (int k = p.degree(); k >= 0; --k) {
        Int c = p.coeff(k);
        if (c == 0) continue;
        if (!s.empty()) s += c > 0 ? " + " : " - ";
        else if (c < 0) s += "-";
        Int a = int_abs(c);
        bool unit = (a == 1) && k > 0;
        if (!unit) s += a.str();
        if (k > 0) {
            if (!unit) s += "*";
            s += "x";
            if (k > 1) s += "^" + std::to_string(k);
        }
    }
    return s;
}

// Quotient of exact division; throws when the division does not come out exact.
inline IntPoly divide_exact(const IntPoly& a, const IntPoly& b) {
    if (b.is_zero()) throw ShapeError("poly: division by zero");
    if (a.is_zero()) return IntPoly();
    int dq = a.degree() - b.degree();
    if (dq < 0) throw ShapeError("poly: inexact division");
    std::vector<Int> rem(a.coeffs());
    std::vector<Int> q(size_t(dq) + 1, Int(0));
    for (int k = dq; k >= 0; --k) {
        Int num = rem[size_t(k + b.degree())];
        if (num % b.lc() != 0) throw ShapeError("poly: inexact division");
        Int c = num / b.lc();
        q[size_t(k)] = c;
        if (c == 0) continue;
        for (int j = 0; j <= b.degree(); ++j) rem[size_t(k + j)] -= c * b.coeff(j);
    }
    for (const auto& x : rem)
        if (x != 0) throw ShapeError("poly: inexact division");
    return IntPoly(std::move(q));
}

inline bool divides(const IntPoly& b, const IntPoly& a) {
    try {
        divide_exact(a, b);
        return true;
    } catch (const ShapeError&) {
        return false;
    }
}

// Pseudo-remainder scaled so the result equals (positive constant) * (a mod b).
inline IntPoly pseudo_rem_signed(IntPoly a, const IntPoly& b) {
    if (b.is_zero()) throw ShapeError("poly: pseudo-division by zero");
    int d = a.degree() - b.degree();
    if (d < 0) return a;
    Int m = int_pow(int_abs(b.lc()), unsigned(d + 1));
    std::vector<Int> r(a.coeffs());
    for (auto& x : r) x *= m;
    a = IntPoly(std::move(r));
    while (!a.is_zero() && a.degree() >= b.degree()) {
        Int c = a.coeff(a.degree()) / b.lc();
        a = a - IntPoly::monomial(a.degree() - b.degree(), c) * b;
    }
    return a;
}

inline IntPoly poly_gcd(IntPoly a, IntPoly b) {
    if (a.is_zero()) return b.is_zero() ? b : b.primitive();
    if (b.is_zero()) return a.primitive();
    a = a.primitive();
    b = b.primitive();
    while (!b.is_zero()) {
        IntPoly r = pseudo_rem_signed(a, b).primitive();
        a = b;
        b = r;
    }
    return a;
}

// Squarefree part over Q (characteristic zero): p / gcd(p, p').
inline IntPoly squarefree_part(const IntPoly& p) {
    if (p.is_zero() || p.degree() == 0) return p.primitive();
    IntPoly g = poly_gcd(p, p.derivative());
    if (g.degree() == 0) return p.primitive();
    return divide_exact(p.primitive() * g.lc(), g).primitive();
}

// Resultant via Sylvester determinant (degrees here stay small).
inline Int resultant(const IntPoly& f, const IntPoly& g) {
    if (f.is_zero() || g.is_zero()) return 0;
    int m = f.degree(), n = g.degree();
    if (m == 0) return int_pow(f.lc(), unsigned(n));
    if (n == 0) return int_pow(g.lc(), unsigned(m));
    IntMatrix s(m + n, m + n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) s(i, i + (m - k)) = f.coeff(k);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) s(n + i, i + (n - k)) = g.coeff(k);
    return det(s);
}

// Lagrange interpolation through integer points (x_i, y_i); entries must
// come out integral.
inline IntPoly interpolate(const std::vector<Int>& xs, const std::vector<Int>& ys) {
    size_t n = xs.size();
    if (ys.size() != n || n == 0) throw ShapeError("interpolate: bad point set");
    // Newton's divided differences over Q, then expand.
    std::vector<Rat> dd(n);
    for (size_t i = 0; i < n; ++i) dd[i] = Rat(ys[i]);
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (Rat(xs[i]) - Rat(xs[i - j]));
            if (i == j) break;
        }
    std::vector<Rat> poly{dd[n - 1]};
    for (size_t i = n - 1; i-- > 0;) {
        std::vector<Rat> next(poly.size() + 1, Rat(0));
        for (size_t k = 0; k < poly.size(); ++k) {
            next[k + 1] += poly[k];
            next[k] -= poly[k] * Rat(xs[i]);
        }
        next[0] += dd[i];
        poly = std::move(next);
    }
    std::vector<Int> out(poly.size());
    for (size_t k = 0; k < poly.size(); ++k) {
        if (poly[k].denominator() != 1)
            throw ShapeError("interpolate: non-integral coefficient");
        out[k] = poly[k].numerator();
    }
    return IntPoly(std::move(out));
}

// Characteristic polynomial det(xI - A) by the Berkowitz scheme
// (division-free, exact over Z).
inline IntPoly char_poly(const IntMatrix& a) {
    a.require_square("char_poly");
    int n = a.rows();
    if (n == 0) return IntPoly::constant(1);
    // vec holds descending coefficients, length r+1 after step r.
    std::vector<Int> vec{Int(1), -a(0, 0)};
    for (int r = 2; r <= n; ++r) {
        // Toeplitz column: [1, -a_rr, -(R C), -(R M C), ...]
        std::vector<Int> t(size_t(r) + 1);
        t[0] = 1;
        t[1] = -a(r - 1, r - 1);
        std::vector<Int> w(size_t(r) - 1);
        for (int i = 0; i < r - 1; ++i) w[size_t(i)] = a(i, r - 1);
        for (int k = 2; k <= r; ++k) {
            Int dot = 0;
            for (int i = 0; i < r - 1; ++i) dot += a(r - 1, i) * w[size_t(i)];
            t[size_t(k)] = -dot;
            if (k == r) break;
            std::vector<Int> w2(size_t(r) - 1, Int(0));
            for (int i = 0; i < r - 1; ++i)
                for (int j = 0; j < r - 1; ++j) w2[size_t(i)] += a(i, j) * w[size_t(j)];
            w = std::move(w2);
        }
        std::vector<Int> next(size_t(r) + 1, Int(0));
        for (int i = 0; i <= r; ++i)
            for (int j = 0; j < r && j <= i; ++j)
                if (i - j <= r) next[size_t(i)] += t[size_t(i - j)] * vec[size_t(j)];
        vec = std::move(next);
    }
    std::vector<Int> asc(vec.rbegin(), vec.rend());
    return IntPoly(std::move(asc));
}

// Smallest M with Euler phi(m) <= d possible only for m <= 2*d^2 + 1 (phi(m)
// >= sqrt(m/2) for m > 6); used to bound the cyclotomic search.
inline int cyclotomic_order_bound(int d) { return 2 * d * d + 7; }

// True when every root of p lies on the unit circle, i.e. p is, up to sign,
// a product of cyclotomic polynomials (integer monic case).
inline bool all_roots_on_unit_circle(const IntPoly& p0) {
    if (p0.is_zero()) return false;
    IntPoly p = p0.primitive();
    if (p.degree() == 0) return true;
    if (p.x_multiplicity() > 0) return false;
    if (int_abs(p.coeff(0)) != int_abs(p.lc())) return false;
    IntPoly g = squarefree_part(p);
    for (int m = 1; m <= cyclotomic_order_bound(g.degree()) && g.degree() > 0; ++m) {
        std::vector<Int> xm(size_t(m) + 1, Int(0));
        xm[0] = -1;
        xm[size_t(m)] = 1;
        IntPoly d = poly_gcd(g, IntPoly(std::move(xm)));
        if (d.degree() > 0) g = divide_exact(g, d).primitive();
    }
    return g.degree() == 0;
}

}  // namespace serrescope
