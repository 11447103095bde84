#pragma once

#include <optional>
#include <utility>

#include "serrescope/common.hpp"

namespace serrescope {

// Dense exact matrix.  T is Int or Rat; all arithmetic is exact.
// Linear maps act on column vectors: (A*v)[i] = sum_j A(i,j) v[j].
template <class T>
class Matrix {
   public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, T(0)) {
        if (rows < 0 || cols < 0) throw ShapeError("matrix: negative dimensions");
    }
    Matrix(int rows, int cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != size_t(rows) * cols) throw ShapeError("matrix: data size mismatch");
    }
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = int(init.size());
        cols_ = rows_ ? int(init.begin()->size()) : 0;
        data_.reserve(size_t(rows_) * cols_);
        for (const auto& r : init) {
            if (int(r.size()) != cols_) throw ShapeError("matrix: ragged initializer");
            for (const auto& x : r) data_.push_back(x);
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    T& operator()(int i, int j) { return data_[size_t(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return data_[size_t(i) * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o, "+");
        Matrix r = *this;
        for (size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_same_shape(o, "-");
        Matrix r = *this;
        for (size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
        return r;
    }
    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.data_) x = -x;
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw ShapeError("matrix: incompatible shapes for product");
        Matrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == T(0)) continue;
                for (int j = 0; j < o.cols_; ++j) {
                    const T& b = o(k, j);
                    if (b == T(0)) continue;
                    r(i, j) += a * b;
                }
            }
        return r;
    }
    Matrix operator*(const T& c) const {
        Matrix r = *this;
        for (auto& x : r.data_) x *= c;
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    T trace() const {
        require_square("trace");
        T t(0);
        for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    Matrix pow(unsigned long e) const {
        require_square("pow");
        Matrix r = identity(rows_);
        Matrix b = *this;
        while (e) {
            if (e & 1) r = r * b;
            if (e >>= 1) b = b * b;
        }
        return r;
    }

    bool is_zero() const {
        for (const auto& x : data_) {
            if (!(x == T(0))) return false;
        }
        return true;
    }

    std::vector<T> col(int j) const {
        std::vector<T> v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    std::vector<T> row(int i) const {
        std::vector<T> v(cols_);
        for (int j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
        return v;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (int(v.size()) != cols_) throw ShapeError("matrix: vector length mismatch");
        std::vector<T> r(rows_, T(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!(v[j] == T(0))) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    void require_square(const char* what) const {
        if (!is_square()) throw ShapeError(std::string("matrix: ") + what + " needs a square matrix");
    }

   private:
    void check_same_shape(const Matrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw ShapeError(std::string("matrix: shape mismatch in ") + op);
    }

    int rows_, cols_;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

inline RatMatrix to_rat(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

// Requires every entry to be integral.
inline IntMatrix to_int(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (m(i, j).denominator() != 1)
                throw ShapeError("matrix: non-integral entry in to_int");
            r(i, j) = m(i, j).numerator();
        }
    return r;
}

template <class T>
Matrix<T> kronecker(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            if (a(i, j) == T(0)) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
    return r;
}

// Row echelon reduction in place; returns pivot columns.  Used for rank,
// solving and nullspace; exact rational arithmetic throughout.
inline std::vector<int> rref(RatMatrix& m) {
    std::vector<int> pivots;
    int pr = 0;
    for (int pc = 0; pc < m.cols() && pr < m.rows(); ++pc) {
        int sel = -1;
        for (int i = pr; i < m.rows(); ++i) {
            if (!is_zero(m(i, pc))) {
                sel = i;
                break;
            }
        }
        if (sel < 0) continue;
        if (sel != pr)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(pr, j));
        Rat inv = Rat(1) / m(pr, pc);
        for (int j = pc; j < m.cols(); ++j) m(pr, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == pr || is_zero(m(i, pc))) continue;
            Rat f = m(i, pc);
            for (int j = pc; j < m.cols(); ++j) m(i, j) -= f * m(pr, j);
        }
        pivots.push_back(pc);
        ++pr;
    }
    return pivots;
}

inline int rank(RatMatrix m) { return int(rref(m).size()); }
inline int rank(const IntMatrix& m) { return rank(to_rat(m)); }

// Basis of the right nullspace {v : m v = 0}, one column vector each.
inline std::vector<std::vector<Rat>> nullspace(RatMatrix m) {
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Rat>> basis;
    for (int freec = 0; freec < m.cols(); ++freec) {
        if (is_pivot[freec]) continue;
        std::vector<Rat> v(m.cols(), Rat(0));
        v[freec] = Rat(1);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(int(r), freec);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve m x = b; empty optional when inconsistent.
inline std::optional<std::vector<Rat>> solve(const RatMatrix& m, const std::vector<Rat>& b) {
    if (int(b.size()) != m.rows()) throw ShapeError("solve: rhs length mismatch");
    RatMatrix aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    std::vector<int> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    std::vector<Rat> x(m.cols(), Rat(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(int(r), m.cols());
    return x;
}

inline RatMatrix inverse(const RatMatrix& m) {
    m.require_square("inverse");
    int n = m.rows();
    RatMatrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = Rat(1);
    }
    std::vector<int> pivots = rref(aug);
    if (int(pivots.size()) != n || pivots.back() != n - 1)
        throw ShapeError("matrix: inverse of a singular matrix");
    RatMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

// Exact inverse of a unimodular integer matrix.
inline IntMatrix int_inverse(const IntMatrix& m) { return to_int(inverse(to_rat(m))); }

// Fraction-free Bareiss determinant.
inline Int det(const IntMatrix& m0) {
    m0.require_square("det");
    int n = m0.rows();
    if (n == 0) return 1;
    IntMatrix m = m0;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int sel = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, k) != 0) {
                    sel = i;
                    break;
                }
            if (sel < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(sel, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : Int(-m(n - 1, n - 1));
}

inline Rat det(const RatMatrix& m) {
    m.require_square("det");
    Int den = 1;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) den = int_lcm(den, m(i, j).denominator());
    IntMatrix scaled(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            Rat x = m(i, j) * Rat(den);
            scaled(i, j) = x.numerator();
        }
    Rat d(det(scaled));
    Rat scale(int_pow(den, m.rows()));
    return d / scale;
}

// If m = sign * (permutation matrix) with one global sign, return (sign, perm)
// where perm[j] = the row carrying the nonzero of column j.
inline std::optional<std::pair<int, std::vector<int>>> signed_permutation(const IntMatrix& m) {
    if (!m.is_square()) return std::nullopt;
    int n = m.rows();
    std::vector<int> perm(n, -1);
    std::vector<bool> used(n, false);
    int sign = 0;
    for (int j = 0; j < n; ++j) {
        int hit = -1;
        for (int i = 0; i < n; ++i) {
            if (m(i, j) == 0) continue;
            if (hit >= 0) return std::nullopt;
            if (m(i, j) != 1 && m(i, j) != -1) return std::nullopt;
            hit = i;
        }
        if (hit < 0 || used[hit]) return std::nullopt;
        int s = m(hit, j) > 0 ? 1 : -1;
        if (sign == 0)
            sign = s;
        else if (sign != s)
            return std::nullopt;
        used[hit] = true;
        perm[j] = hit;
    }
    return std::make_pair(sign, perm);
}

template <class T>
std::string to_string(const Matrix<T>& m) {
    std::string s = "[";
    for (int i = 0; i < m.rows(); ++i) {
        s += i ? ", [" : "[";
        for (int j = 0; j < m.cols(); ++j) {
            if (j) s += ", ";
            s += to_string(m(i, j));
        }
        s += "]";
    }
    return s + "]";
}

}  // namespace serrescope
