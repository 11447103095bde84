#pragma once

#include <cmath>

#include "serrescope/algebra.hpp"
#include "serrescope/eigenstructure.hpp"

namespace serrescope {

// All K-theory matrices below act on dimension vectors (coordinates over the
// simple classes); conjugating by the Cartan matrix moves them to projective
// coordinates.

inline IntMatrix unimodular_inverse(const IntMatrix& C) {
    Int d = det(C);
    if (d != 1 && d != -1)
        throw RefusalError("Cartan matrix is not invertible over the integers");
    return int_inverse(C);
}

inline IntMatrix cartan_inverse(const Algebra& A) { return unimodular_inverse(A.cartan_matrix()); }

// Coxeter matrix  Phi = -C^T C^{-1}; the Serre functor acts on dimension
// vectors by -Phi and its d-shifted variant by (-1)^{d+1} Phi.
inline IntMatrix coxeter_matrix(const Algebra& A) {
    IntMatrix C = A.cartan_matrix();
    return (C.transpose() * cartan_inverse(A)) * Int(-1);
}

inline IntMatrix serre_dim_matrix(const Algebra& A) { return coxeter_matrix(A) * Int(-1); }

// Same action written in projective coordinates: C^{-1} (C^T C^{-1}) C.
inline IntMatrix serre_proj_matrix(const Algebra& A) {
    IntMatrix Ci = cartan_inverse(A);
    return Ci * A.cartan_matrix().transpose();
}

// K-theory matrix of - (x)^L_A M for a bimodule with Cartan-type matrix C_M
// (C_M(i,j) = dim e_j M e_i, matching the convention for C_A itself): it sends
// column j of C_A to column j of C_M, hence equals C_M C_A^{-1}.  The dual
// Coxeter matrix is its negative, recovering Phi when M = DA (C_M = C_A^T).
inline IntMatrix dual_coxeter_matrix(const IntMatrix& C_M, const IntMatrix& C_A) {
    return (C_M * unimodular_inverse(C_A)) * Int(-1);
}

inline IntMatrix nu_d_dim_matrix(const Algebra& A, int d) {
    IntMatrix phi = coxeter_matrix(A);
    return (d % 2 == 0) ? phi * Int(-1) : phi;
}

// Euler form <x, y> = sum (-1)^k dim Ext^k between classes with dimension
// vectors x and y (finite global dimension assumed).
inline Rat euler_form(const Algebra& A, const std::vector<Int>& x, const std::vector<Int>& y) {
    int n = A.nvertices();
    if (int(x.size()) != n || int(y.size()) != n) throw ShapeError("euler form: vector length");
    RatMatrix E = inverse(to_rat(A.cartan_matrix())).transpose();
    Rat s(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += rat(x[size_t(i)]) * E(i, j) * rat(y[size_t(j)]);
    return s;
}

inline IntPoly coxeter_polynomial(const Algebra& A) { return char_poly(coxeter_matrix(A)); }

// Coxeter polynomials are self-reciprocal up to sign: x^n p(1/x) = sign * p(x).
inline std::optional<int> reciprocal_sign(const IntPoly& p) {
    IntPoly rev = p.reversal();
    if (rev == p) return 1;
    if (rev == p * Int(-1)) return -1;
    return std::nullopt;
}

// Smallest p <= p_max with S^p a signed permutation, S the Serre action on
// dimension vectors: the K-theoretic shadow of a (twisted) fractional
// Calabi-Yau property  nu^p = twist ∘ [q],  sign = (-1)^q.
struct CyDetection {
    bool found = false;
    int p = 0;
    int sign = 0;
    std::vector<int> perm;

    bool twisted() const {
        for (size_t i = 0; i < perm.size(); ++i)
            if (perm[i] != int(i)) return true;
        return false;
    }
};

inline CyDetection detect_twisted_cy(const Algebra& A, int p_max = 24) {
    IntMatrix S = serre_dim_matrix(A);
    IntMatrix power = IntMatrix::identity(S.rows());
    CyDetection out;
    for (int p = 1; p <= p_max; ++p) {
        power = power * S;
        auto sp = signed_permutation(power);
        if (!sp) continue;
        out.found = true;
        out.p = p;
        out.sign = sp->first;
        out.perm = sp->second;
        break;
    }
    return out;
}

// K-level window checks on the dimension vectors of nu_d^{-n}(P_j), read off
// the columns of M^{-n} C with M = (-1)^{d+1} Phi.  Necessary conditions:
// d-representation infinite needs every entry nonnegative, d-hereditary only
// needs each column concentrated in one sign.
struct KWindow {
    bool holds = true;
    int checked = 0;       // largest n validated
    int first_failure = -1;
};

namespace detail {

template <typename Check>
inline KWindow k_window_scan(const Algebra& A, int d, int n_max, Check&& check) {
    IntMatrix Minv = int_inverse(nu_d_dim_matrix(A, d));
    IntMatrix X = A.cartan_matrix();
    KWindow w;
    for (int n = 0; n <= n_max; ++n) {
        if (!check(X)) {
            w.holds = false;
            w.first_failure = n;
            w.checked = n - 1;
            return w;
        }
        w.checked = n;
        if (n < n_max) X = Minv * X;
    }
    return w;
}

}  // namespace detail

inline KWindow k_window_d_rep_infinite(const Algebra& A, int d, int n_max) {
    return detail::k_window_scan(A, d, n_max, [](const IntMatrix& X) {
        for (int i = 0; i < X.rows(); ++i)
            for (int j = 0; j < X.cols(); ++j)
                if (X(i, j) < 0) return false;
        return true;
    });
}

inline KWindow k_window_d_hereditary(const Algebra& A, int d, int n_max) {
    return detail::k_window_scan(A, d, n_max, [](const IntMatrix& X) {
        for (int j = 0; j < X.cols(); ++j) {
            bool pos = false, neg = false, nonzero = false;
            for (int i = 0; i < X.rows(); ++i) {
                if (X(i, j) > 0) pos = true;
                if (X(i, j) < 0) neg = true;
                if (X(i, j) != 0) nonzero = true;
            }
            if ((pos && neg) || !nonzero) return false;
        }
        return true;
    });
}

// |tr M^n|^{1/n} for n = 1..n_max; converges to the spectral radius when the
// dominant eigenvalues do not cancel in the trace.
inline std::vector<double> trace_radius_estimates(const IntMatrix& M, int n_max) {
    std::vector<double> out;
    std::vector<Int> tr = trace_power_sequence(M, n_max);  // tr[k] = tr(M^{k+1})
    for (int n = 1; n <= n_max; ++n) {
        Int t = int_abs(tr[size_t(n - 1)]);
        out.push_back(t == 0 ? 0.0 : std::exp(log_big(t) / double(n)));
    }
    return out;
}

// Entropy lower bound at t = 0 from the induced K-theory matrix.
inline double log_radius_lower_bound(const IntMatrix& M) {
    SpectralData s = spectral_radius(M);
    if (s.nilpotent) return 0.0;
    double r = s.rho.to_double();
    return r <= 1.0 ? 0.0 : std::log(r);
}

// Supertrace formula: the Euler characteristic of the Hochschild homology of
// the n-fold derived twist by the dual bimodule equals tr(S^n).
inline Int hh_sdim_trace(const Algebra& A, int n) {
    IntMatrix S = serre_dim_matrix(A);
    return S.pow(unsigned(n)).trace();
}

// Euler characteristic of HH_*(A, M^{(x)^L_A n+1}) for a bimodule with
// Cartan-type matrix C_M: tr(C_A^{-1} (C_M C_A^{-1})^n C_M).  With M = DA this
// collapses to tr(S^{n+1}) by cyclicity of the trace.
inline Int hh_superdimension_trace(const IntMatrix& C_M, const IntMatrix& C_A, int n) {
    if (n < 0) throw ShapeError("hh_superdimension_trace: negative tensor index");
    IntMatrix Ci = unimodular_inverse(C_A);
    IntMatrix T = (C_M * Ci).pow(unsigned(n)) * C_M;
    return (Ci * T).trace();
}

// Exact check that rho(M) == rho(M^{-1}); automatic whenever the
// characteristic polynomial is self-reciprocal up to sign.
inline bool radius_matches_inverse(const IntMatrix& M) {
    SpectralData a = spectral_radius(M);
    SpectralData b = spectral_radius(unimodular_inverse(M));
    if (a.nilpotent || b.nilpotent) return a.nilpotent == b.nilpotent;
    return a.rho.compare(b.rho) == 0;
}

// Closed-form entropy line  h_t = slope * t + log(rho)  with the constant part
// carried as an exact algebraic number.
struct EntropyLine {
    Rat slope;
    AlgebraicReal rho;  // >= 1; constant term of the line is log(rho)

    double value(double t) const { return to_double(slope) * t + std::log(rho.to_double()); }
    double constant() const { return std::log(rho.to_double()); }
};

struct EntropyClosedForm {
    EntropyLine serre;          // h_t of the Serre functor
    EntropyLine serre_inverse;  // h_t of the inverse Serre functor
    Rat poly_entropy;           // shared polynomial entropy (both directions)
};

// Fractional Calabi-Yau case  nu^p = twist ∘ [q]:  the n-th power of the Serre
// functor moves any object by ~ (q/p) n shifts and bounded dimension, so
// h_t = (q/p) t, the inverse gets the opposite slope, and both polynomial
// entropies vanish.
inline EntropyClosedForm entropy_closed_form_cy(int p, int q) {
    if (p <= 0) throw ShapeError("entropy_closed_form_cy: period must be positive");
    Rat slope = Rat(q) / Rat(p);
    AlgebraicReal one = AlgebraicReal::from_rational(Rat(1));
    return {{slope, one}, {-slope, one}, Rat(0)};
}

// d-representation infinite case: cohomology of nu^{-n}(A) sits in the single
// degree dn with dimensions growing like rho(Phi)^n, giving h_t(S) = d t +
// log rho(Phi) and h_t(S^{-1}) = -d t + log rho(Phi^{-1}) = -d t + log rho(Phi).
// The polynomial entropy is the nilpotency defect s(Phi) of the eigenvalues on
// the spectral circle.
inline EntropyClosedForm entropy_closed_form_d_ri(const Algebra& A, int d) {
    IntMatrix phi = coxeter_matrix(A);
    if (!reciprocal_sign(char_poly(phi)))
        throw RefusalError("Coxeter polynomial is not self-reciprocal; entropy line undefined");
    Eigenstructure eig = eigenstructure(phi);
    EntropyLine fwd{Rat(d), eig.spectral.rho};
    EntropyLine bwd{Rat(-d), eig.spectral.rho};
    return {fwd, bwd, Rat(eig.growth_exponent())};
}

}  // namespace serrescope
