#pragma once

#include "serrescope/algebraic_real.hpp"

namespace serrescope {

// One Galois class of eigenvalues: an irreducible factor of the
// characteristic polynomial.  Conjugate roots share one Jordan block multiset
// because the invariant factors are rational.
struct EigenClass {
    IntPoly poly;
    int charpoly_multiplicity = 0;     // q^m || charpoly
    int max_block = 0;                 // multiplicity of q in the minimal polynomial
    std::vector<int> jordan_blocks;    // sizes for one root, descending; sum = m
    bool attains_radius = false;       // some root has modulus = spectral radius
};

struct Eigenstructure {
    IntPoly charpoly;
    IntPoly minpoly;
    SpectralData spectral;
    std::vector<EigenClass> classes;
    bool nilpotent = false;

    // Dominant Jordan defect: max block size minus one among classes whose
    // modulus attains the spectral radius.  Governs the polynomial factor
    // n^s * rho^n in the growth of powers.
    int growth_exponent() const {
        if (nilpotent) throw UndefinedGrowthError("growth exponent of a nilpotent matrix");
        int s = 0;
        for (const auto& c : classes)
            if (c.attains_radius) s = std::max(s, c.max_block - 1);
        return s;
    }

    double log_radius() const {
        if (nilpotent) throw UndefinedGrowthError("log of zero spectral radius");
        return std::log(spectral.rho.to_double());
    }
};

inline Eigenstructure eigenstructure(const IntMatrix& m) {
    m.require_square("eigenstructure");
    Eigenstructure out;
    out.charpoly = char_poly(m);
    out.spectral = spectral_radius(m);
    out.nilpotent = out.spectral.nilpotent;
    int n = m.rows();
    out.minpoly = IntPoly::constant(1);
    for (const PolyFactor& f : factor(out.charpoly)) {
        EigenClass cls;
        cls.poly = f.poly;
        cls.charpoly_multiplicity = f.multiplicity;
        int d = f.poly.degree();
        if (f.multiplicity == 1) {
            cls.max_block = 1;
            cls.jordan_blocks = {1};
        } else {
            // rank(q(M)^k) = n - d * sum_blocks min(size, k); the drops give the
            // number of blocks of each size.
            IntMatrix qm = f.poly.eval(m);
            std::vector<int> ranks{n};
            IntMatrix pw = IntMatrix::identity(n);
            for (int k = 1; k <= f.multiplicity; ++k) {
                pw = pw * qm;
                ranks.push_back(rank(pw));
                if (ranks[size_t(k)] == ranks[size_t(k) - 1]) break;
            }
            std::vector<int> ge;  // ge[k] = #blocks of size >= k+1
            for (size_t k = 1; k < ranks.size(); ++k) {
                int drop = ranks[k - 1] - ranks[k];
                if (drop % d != 0) throw ShapeError("eigenstructure: rank drop not divisible by factor degree");
                ge.push_back(drop / d);
            }
            while (!ge.empty() && ge.back() == 0) ge.pop_back();
            for (size_t k = 0; k < ge.size(); ++k) {
                int count = ge[k] - (k + 1 < ge.size() ? ge[k + 1] : 0);
                for (int c = 0; c < count; ++c) cls.jordan_blocks.push_back(int(k) + 1);
            }
            std::sort(cls.jordan_blocks.rbegin(), cls.jordan_blocks.rend());
            cls.max_block = cls.jordan_blocks.empty() ? 1 : cls.jordan_blocks.front();
        }
        if (!out.nilpotent) {
            if (cls.poly == IntPoly::x()) {
                cls.attains_radius = false;  // modulus 0 < radius (radius >= 1 here)
            } else {
                // |z| = rho for a root z of q  <=>  rho^2 = z * conj(z) is a root
                // of the pairwise-products polynomial of q.
                IntPoly pq = products_poly(cls.poly);
                cls.attains_radius = divides(out.spectral.rho_sq_minpoly, pq);
            }
        }
        for (int i = 0; i < cls.max_block; ++i) out.minpoly = out.minpoly * cls.poly;
        out.classes.push_back(std::move(cls));
    }
    return out;
}

// tr(M), tr(M^2), ..., tr(M^N).
inline std::vector<Int> trace_power_sequence(const IntMatrix& m, int N) {
    m.require_square("trace_power_sequence");
    std::vector<Int> out;
    IntMatrix pw = IntMatrix::identity(m.rows());
    for (int k = 1; k <= N; ++k) {
        pw = pw * m;
        out.push_back(pw.trace());
    }
    return out;
}

}  // namespace serrescope
