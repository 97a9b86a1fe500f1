#pragma once

// Exact integer linear algebra: dense matrices over arbitrary-precision
// integers, Smith and Hermite normal forms, integer kernels and solves.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace branetile {

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;
using int_vector = std::vector<big_int>;

inline big_int abs_value(const big_int& x) { return x < 0 ? big_int(-x) : x; }

inline big_int gcd(big_int a, big_int b)
{
    a = abs_value(a);
    b = abs_value(b);
    while (b != 0) {
        big_int r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Floor division (cpp_int truncates toward zero).
inline big_int floor_div(const big_int& a, const big_int& b)
{
    big_int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline big_int floor_of(const rational& r)
{
    return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

inline big_int ceil_of(const rational& r) { return -floor_of(-r); }

// Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
inline std::tuple<big_int, big_int, big_int> extended_gcd(const big_int& a, const big_int& b)
{
    big_int r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        big_int q = r0 / r1;
        big_int r2 = r0 - q * r1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        big_int s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        big_int t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    return {r0, s0, t0};
}

inline big_int dot(const int_vector& a, const int_vector& b)
{
    big_int s = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k] * b[k];
    return s;
}

inline bool is_zero(const int_vector& v)
{
    return std::all_of(v.begin(), v.end(), [](const big_int& x) { return x == 0; });
}

inline big_int content(const int_vector& v)
{
    big_int g = 0;
    for (const auto& x : v)
        g = gcd(g, x);
    return g;
}

// Divides by the gcd of the entries; the zero vector is returned unchanged.
inline int_vector primitive(int_vector v)
{
    big_int g = content(v);
    if (g > 1)
        for (auto& x : v)
            x /= g;
    return v;
}

inline int_vector operator+(int_vector a, const int_vector& b)
{
    for (std::size_t k = 0; k < a.size(); ++k)
        a[k] += b[k];
    return a;
}

inline int_vector operator-(int_vector a, const int_vector& b)
{
    for (std::size_t k = 0; k < a.size(); ++k)
        a[k] -= b[k];
    return a;
}

inline int_vector operator*(const big_int& c, int_vector a)
{
    for (auto& x : a)
        x *= c;
    return a;
}

inline int_vector zero_vector(std::size_t n) { return int_vector(n, big_int(0)); }

inline int_vector unit_vector(std::size_t n, std::size_t k)
{
    int_vector v = zero_vector(n);
    v[k] = 1;
    return v;
}

inline std::string to_string(const int_vector& v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k)
            os << ',';
        os << v[k];
    }
    os << ')';
    return os.str();
}

class int_matrix {
public:
    int_matrix() = default;
    int_matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static int_matrix identity(std::size_t n)
    {
        int_matrix m(n, n);
        for (std::size_t k = 0; k < n; ++k)
            m(k, k) = 1;
        return m;
    }

    static int_matrix from_rows(const std::vector<int_vector>& rows, std::size_t cols)
    {
        int_matrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            require(rows[r].size() == cols, error_code::internal, "int_matrix::from_rows: ragged rows");
            for (std::size_t c = 0; c < cols; ++c)
                m(r, c) = rows[r][c];
        }
        return m;
    }

    static int_matrix from_columns(const std::vector<int_vector>& cols, std::size_t rows)
    {
        return from_rows(cols, rows).transposed();
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    big_int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const big_int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] int_vector row(std::size_t r) const
    {
        return int_vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }

    [[nodiscard]] int_vector column(std::size_t c) const
    {
        int_vector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = (*this)(r, c);
        return v;
    }

    [[nodiscard]] int_matrix transposed() const
    {
        int_matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    [[nodiscard]] int_matrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const
    {
        int_matrix b(r1 - r0, c1 - c0);
        for (std::size_t r = r0; r < r1; ++r)
            for (std::size_t c = c0; c < c1; ++c)
                b(r - r0, c - c0) = (*this)(r, c);
        return b;
    }

    [[nodiscard]] int_vector apply(const int_vector& v) const
    {
        require(v.size() == cols_, error_code::internal, "int_matrix::apply: dimension mismatch");
        int_vector out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            big_int s = 0;
            for (std::size_t c = 0; c < cols_; ++c)
                s += (*this)(r, c) * v[c];
            out[r] = s;
        }
        return out;
    }

    // Row vector times matrix.
    [[nodiscard]] int_vector apply_left(const int_vector& v) const { return transposed().apply(v); }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap((*this)(a, c), (*this)(b, c));
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t r = 0; r < rows_; ++r)
            std::swap((*this)(r, a), (*this)(r, b));
    }

    // row[dst] += q * row[src]
    void add_row(std::size_t dst, std::size_t src, const big_int& q)
    {
        if (q == 0)
            return;
        for (std::size_t c = 0; c < cols_; ++c)
            (*this)(dst, c) += q * (*this)(src, c);
    }

    void add_col(std::size_t dst, std::size_t src, const big_int& q)
    {
        if (q == 0)
            return;
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, dst) += q * (*this)(r, src);
    }

    void negate_row(std::size_t r)
    {
        for (std::size_t c = 0; c < cols_; ++c)
            (*this)(r, c) = -(*this)(r, c);
    }

    void negate_col(std::size_t c)
    {
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, c) = -(*this)(r, c);
    }

    [[nodiscard]] bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const big_int& x) { return x == 0; });
    }

    friend bool operator==(const int_matrix& a, const int_matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend int_matrix operator*(const int_matrix& a, const int_matrix& b)
    {
        require(a.cols_ == b.rows_, error_code::internal, "int_matrix product: dimension mismatch");
        int_matrix p(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const big_int& x = a(r, k);
                if (x == 0)
                    continue;
                for (std::size_t c = 0; c < b.cols_; ++c)
                    p(r, c) += x * b(k, c);
            }
        return p;
    }

    friend std::ostream& operator<<(std::ostream& os, const int_matrix& m)
    {
        os << '[';
        for (std::size_t r = 0; r < m.rows_; ++r) {
            if (r)
                os << "; ";
            for (std::size_t c = 0; c < m.cols_; ++c) {
                if (c)
                    os << ' ';
                os << m(r, c);
            }
        }
        return os << ']';
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<big_int> data_;
};

// U * A * V == S, S diagonal with s_0 | s_1 | ..., all s_k > 0 for k < rank.
struct smith_form {
    int_matrix U;
    int_matrix S;
    int_matrix V;
    std::size_t rank = 0;

    [[nodiscard]] std::vector<big_int> invariant_factors() const
    {
        std::vector<big_int> out;
        for (std::size_t k = 0; k < rank; ++k)
            out.push_back(S(k, k));
        return out;
    }

    [[nodiscard]] bool unimodular_factors() const
    {
        for (std::size_t k = 0; k < rank; ++k)
            if (S(k, k) != 1)
                return false;
        return true;
    }
};

inline smith_form smith_normal_form(const int_matrix& A)
{
    const std::size_t m = A.rows(), n = A.cols();
    smith_form f{int_matrix::identity(m), A, int_matrix::identity(n), 0};
    int_matrix& S = f.S;
    int_matrix& U = f.U;
    int_matrix& V = f.V;

    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        // pivot of minimal absolute value in the trailing block
        std::optional<std::pair<std::size_t, std::size_t>> pivot;
        for (std::size_t r = t; r < m; ++r)
            for (std::size_t c = t; c < n; ++c)
                if (S(r, c) != 0 && (!pivot || abs_value(S(r, c)) < abs_value(S(pivot->first, pivot->second))))
                    pivot = std::make_pair(r, c);
        if (!pivot)
            break;
        S.swap_rows(t, pivot->first);
        U.swap_rows(t, pivot->first);
        S.swap_cols(t, pivot->second);
        V.swap_cols(t, pivot->second);

        for (;;) {
            bool clean = true;
            for (std::size_t r = t + 1; r < m; ++r) {
                if (S(r, t) == 0)
                    continue;
                big_int q = S(r, t) / S(t, t);
                S.add_row(r, t, -q);
                U.add_row(r, t, -q);
                if (S(r, t) != 0) {
                    S.swap_rows(r, t);
                    U.swap_rows(r, t);
                    clean = false;
                }
            }
            for (std::size_t c = t + 1; c < n; ++c) {
                if (S(t, c) == 0)
                    continue;
                big_int q = S(t, c) / S(t, t);
                S.add_col(c, t, -q);
                V.add_col(c, t, -q);
                if (S(t, c) != 0) {
                    S.swap_cols(c, t);
                    V.swap_cols(c, t);
                    clean = false;
                }
            }
            if (!clean)
                continue;
            // divisibility: fold an offending row into the pivot row
            bool divides = true;
            for (std::size_t r = t + 1; r < m && divides; ++r)
                for (std::size_t c = t + 1; c < n; ++c)
                    if (S(r, c) % S(t, t) != 0) {
                        S.add_row(t, r, 1);
                        U.add_row(t, r, 1);
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (S(t, t) < 0) {
            S.negate_row(t);
            U.negate_row(t);
        }
    }
    f.rank = t;
    return f;
}

// Row-style Hermite normal form: H = W * A, W unimodular, H in row echelon
// form with positive pivots and entries above each pivot reduced into [0, pivot).
// Zero rows are moved to the bottom.
struct hermite_form {
    int_matrix H;
    int_matrix W;
    std::size_t rank = 0;
};

inline hermite_form hermite_normal_form(const int_matrix& A)
{
    const std::size_t m = A.rows(), n = A.cols();
    hermite_form f{A, int_matrix::identity(m), 0};
    int_matrix& H = f.H;
    int_matrix& W = f.W;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        // gcd-combine column c into row r
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t k = r; k < m; ++k)
                if (H(k, c) != 0 && (!best || abs_value(H(k, c)) < abs_value(H(*best, c))))
                    best = k;
            if (!best)
                break;
            H.swap_rows(r, *best);
            W.swap_rows(r, *best);
            bool done = true;
            for (std::size_t k = r + 1; k < m; ++k) {
                if (H(k, c) == 0)
                    continue;
                big_int q = H(k, c) / H(r, c);
                H.add_row(k, r, -q);
                W.add_row(k, r, -q);
                if (H(k, c) != 0)
                    done = false;
            }
            if (done)
                break;
        }
        if (H(r, c) == 0)
            continue;
        if (H(r, c) < 0) {
            H.negate_row(r);
            W.negate_row(r);
        }
        for (std::size_t k = 0; k < r; ++k) {
            big_int q = floor_div(H(k, c), H(r, c));
            H.add_row(k, r, -q);
            W.add_row(k, r, -q);
        }
        ++r;
    }
    f.rank = r;
    return f;
}

inline std::size_t rank_of(const int_matrix& A) { return smith_normal_form(A).rank; }

inline std::size_t rank_of_vectors(const std::vector<int_vector>& vs, std::size_t dim)
{
    if (vs.empty())
        return 0;
    return rank_of(int_matrix::from_rows(vs, dim));
}

inline big_int determinant(const int_matrix& A)
{
    require(A.rows() == A.cols(), error_code::internal, "determinant of non-square matrix");
    const std::size_t n = A.rows();
    if (n == 0)
        return 1;
    // Bareiss fraction-free elimination
    int_matrix M = A;
    big_int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (M(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && M(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            M.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
        prev = M(k, k);
    }
    return sign * M(n - 1, n - 1);
}

// Basis (as columns) of the integer kernel {x : A x = 0}; saturated, in
// Hermite-reduced form so the result depends only on the kernel lattice.
inline int_matrix integer_kernel(const int_matrix& A)
{
    const auto f = smith_normal_form(A);
    const std::size_t n = A.cols();
    int_matrix K = f.V.block(0, n, f.rank, n);
    if (K.cols() == 0)
        return K;
    return hermite_normal_form(K.transposed()).H.block(0, K.cols(), 0, n).transposed();
}

// Some integer x with A x = b, if one exists.
inline std::optional<int_vector> integer_solve(const int_matrix& A, const int_vector& b)
{
    require(b.size() == A.rows(), error_code::internal, "integer_solve: dimension mismatch");
    const auto f = smith_normal_form(A);
    const int_vector c = f.U.apply(b);
    int_vector y = zero_vector(A.cols());
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k < f.rank) {
            if (c[k] % f.S(k, k) != 0)
                return std::nullopt;
            y[k] = c[k] / f.S(k, k);
        } else if (c[k] != 0) {
            return std::nullopt;
        }
    }
    return f.V.apply(y);
}

// Inverse of a unimodular matrix (exact); throws if det != +-1.
inline int_matrix unimodular_inverse(const int_matrix& A)
{
    const auto f = smith_normal_form(A);
    require(A.rows() == A.cols() && f.rank == A.rows() && f.unimodular_factors(), error_code::internal,
            "unimodular_inverse: matrix is not unimodular");
    // U A V = I  =>  A^{-1} = V U
    return f.V * f.U;
}

// True iff the columns generate all of Z^rows.
inline bool spans_lattice(const int_matrix& A)
{
    const auto f = smith_normal_form(A);
    return f.rank == A.rows() && f.unimodular_factors();
}

} // namespace branetile
