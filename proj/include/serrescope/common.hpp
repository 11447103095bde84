#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace serrescope {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::rational<Int>;

// Error hierarchy.  Every failure mode the library reports deliberately is one
// of these; anything else escaping is a bug.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
struct ShapeError : Error {
    using Error::Error;
};
struct AdmissibilityError : Error {
    using Error::Error;
};
// Raised when path enumeration hits max_path_length with surviving paths.
struct BoundError : Error {
    explicit BoundError(const std::string& msg, bool has_cycle_)
        : Error(msg), has_cycle(has_cycle_) {}
    bool has_cycle = false;
};
// Growth rate of a nilpotent matrix is undefined.
struct UndefinedGrowthError : Error {
    using Error::Error;
};
// An operation refused to classify/confirm rather than guess.
struct RefusalError : Error {
    using Error::Error;
};
struct ParseError : Error {
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg), line(line_), col(col_) {}
    int line = 0, col = 0;
};
struct BudgetError : Error {
    using Error::Error;
};

inline Int int_abs(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Rat rat(long n) { return Rat(Int(n)); }
inline Rat rat(const Int& n) { return Rat(n); }

inline bool is_zero(const Rat& x) { return x.numerator() == 0; }

inline std::string to_string(const Int& x) { return x.str(); }

inline std::string to_string(const Rat& x) {
    if (x.denominator() == 1) return x.numerator().str();
    return x.numerator().str() + "/" + x.denominator().str();
}

// Natural log of a positive big integer; exact enough for display (the value
// may far exceed double range, so go through the bit length).
inline double log_big(const Int& x) {
    if (x <= 0) throw ShapeError("log_big: argument must be positive");
    if (x == 1) return 0.0;
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(x));
    if (bits <= 900) return std::log(x.convert_to<double>());
    Int top = x >> (bits - 64);
    return std::log(top.convert_to<double>()) + (double)(bits - 64) * std::log(2.0);
}

inline double log_rat(const Rat& x) {
    if (x <= Rat(0)) throw ShapeError("log_rat: argument must be positive");
    return log_big(x.numerator()) - log_big(x.denominator());
}

inline double to_double(const Rat& x) {
    if (x.numerator() == 0) return 0.0;
    double sign = x.numerator() < 0 ? -1.0 : 1.0;
    Rat a = x.numerator() < 0 ? Rat(-x.numerator(), x.denominator()) : x;
    // Avoid overflow for huge numerators/denominators.
    double l = log_rat(a);
    if (l > 700.0) return sign * std::numeric_limits<double>::infinity();
    if (l < -700.0) return 0.0;
    return sign * x.numerator().convert_to<double>() / x.denominator().convert_to<double>();
}

inline Int int_pow(Int base, unsigned long e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Int int_gcd(Int a, Int b) {
    a = int_abs(a);
    b = int_abs(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline Int int_lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return int_abs(a / int_gcd(a, b) * b);
}

// Integer square root (floor); returns false in *exact if not a perfect square.
inline Int int_sqrt_floor(const Int& n, bool* exact = nullptr) {
    if (n < 0) throw ShapeError("int_sqrt_floor: negative argument");
    Int r = boost::multiprecision::sqrt(n);
    if (exact) *exact = (r * r == n);
    return r;
}

// Deterministic 64-bit FNV-1a, used for content hashes and seeded pseudo-randomness.
inline std::uint64_t fnv1a(const std::string& s, std::uint64_t seed = 1469598103934665603ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Small deterministic PRNG (xorshift*) so reruns are byte-identical.
struct DetRng {
    std::uint64_t state;
    explicit DetRng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    std::uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545F4914F6CDD1DULL;
    }
    // Uniform in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return n ? next() % n : 0; }
    long next_int(long lo, long hi) {  // inclusive range
        return lo + static_cast<long>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

}  // namespace serrescope
