#include <random>

#include <gtest/gtest.h>

#include <branetile/int_matrix.hpp>

using namespace branetile;

namespace {

int_matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi)
{
    std::uniform_int_distribution<int> dist(lo, hi);
    int_matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = dist(rng);
    return m;
}

// Leibniz expansion; independent of the elimination code.
big_int leibniz_det(const int_matrix& A)
{
    const std::size_t n = A.rows();
    std::vector<std::size_t> p(n);
    for (std::size_t k = 0; k < n; ++k)
        p[k] = k;
    big_int total = 0;
    do {
        int sign = 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (p[i] > p[j])
                    sign = -sign;
        big_int term = sign;
        for (std::size_t i = 0; i < n; ++i)
            term *= A(i, p[i]);
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

bool is_diagonal_chain(const smith_form& f)
{
    for (std::size_t r = 0; r < f.S.rows(); ++r)
        for (std::size_t c = 0; c < f.S.cols(); ++c)
            if (r != c && f.S(r, c) != 0)
                return false;
    for (std::size_t k = 0; k < f.rank; ++k) {
        if (f.S(k, k) <= 0)
            return false;
        if (k + 1 < f.rank && f.S(k + 1, k + 1) % f.S(k, k) != 0)
            return false;
    }
    for (std::size_t k = f.rank; k < std::min(f.S.rows(), f.S.cols()); ++k)
        if (f.S(k, k) != 0)
            return false;
    return true;
}

} // namespace

TEST(SmithNormalForm, IdentityIsFixed)
{
    const auto f = smith_normal_form(int_matrix::identity(3));
    EXPECT_EQ(f.S, int_matrix::identity(3));
    EXPECT_EQ(f.rank, 3u);
}

TEST(SmithNormalForm, HandExample)
{
    const auto A = int_matrix::from_rows({{2, 4}, {6, 8}}, 2);
    const auto f = smith_normal_form(A);
    EXPECT_EQ(f.invariant_factors(), (std::vector<big_int>{2, 4}));
    EXPECT_EQ(f.U * A * f.V, f.S);
    EXPECT_EQ(determinant(A), -8);
}

TEST(SmithNormalForm, ZeroMatrix)
{
    const int_matrix Z(3, 2);
    const auto f = smith_normal_form(Z);
    EXPECT_TRUE(f.S.is_zero());
    EXPECT_EQ(f.U, int_matrix::identity(3));
    EXPECT_EQ(f.V, int_matrix::identity(2));
    EXPECT_EQ(f.rank, 0u);
}

TEST(SmithNormalForm, RandomPostconditions)
{
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
        const auto A = random_matrix(rng, r, c, -6, 6);
        const auto f = smith_normal_form(A);
        ASSERT_EQ(f.U * A * f.V, f.S);
        ASSERT_TRUE(is_diagonal_chain(f));
        ASSERT_EQ(abs_value(leibniz_det(f.U)), 1);
        ASSERT_EQ(abs_value(leibniz_det(f.V)), 1);
        if (r == c) {
            big_int prod = 1;
            for (std::size_t k = 0; k < r; ++k)
                prod *= f.S(k, k);
            ASSERT_EQ(abs_value(leibniz_det(A)), prod);
        }
    }
}

TEST(Determinant, AgreesWithLeibniz)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 5;
        const auto A = random_matrix(rng, n, n, -5, 5);
        ASSERT_EQ(determinant(A), leibniz_det(A));
    }
}

TEST(HermiteNormalForm, EchelonAndReduced)
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
        const auto A = random_matrix(rng, r, c, -5, 5);
        const auto h = hermite_normal_form(A);
        ASSERT_EQ(h.W * A, h.H);
        ASSERT_EQ(abs_value(leibniz_det(h.W)), 1);
        std::size_t lastpivot = 0;
        for (std::size_t row = 0; row < h.rank; ++row) {
            std::size_t p = 0;
            while (h.H(row, p) == 0)
                ++p;
            if (row)
                ASSERT_GT(p, lastpivot);
            ASSERT_GT(h.H(row, p), 0);
            for (std::size_t above = 0; above < row; ++above) {
                ASSERT_GE(h.H(above, p), 0);
                ASSERT_LT(h.H(above, p), h.H(row, p));
            }
            lastpivot = p;
        }
        for (std::size_t row = h.rank; row < r; ++row)
            ASSERT_TRUE(is_zero(h.H.row(row)));
    }
}

TEST(IntegerKernel, SaturatedAndComplete)
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t r = 1 + rng() % 3, c = 2 + rng() % 4;
        const auto A = random_matrix(rng, r, c, -4, 4);
        const auto K = integer_kernel(A);
        ASSERT_TRUE((A * K).is_zero());
        ASSERT_EQ(K.cols() + rank_of(A), c);
        // saturated: all invariant factors of the basis are 1
        if (K.cols())
            ASSERT_TRUE(smith_normal_form(K).unimodular_factors());
        // every small integer kernel vector is an integer combination
        std::uniform_int_distribution<int> dist(-2, 2);
        for (int s = 0; s < 20; ++s) {
            int_vector y(K.cols());
            for (auto& x : y)
                x = dist(rng);
            const auto v = K.apply(y);
            ASSERT_TRUE(integer_solve(K, v).has_value());
        }
    }
}

TEST(IntegerSolve, FindsOrRejects)
{
    const auto A = int_matrix::from_rows({{2, 0}, {0, 3}}, 2);
    EXPECT_FALSE(integer_solve(A, {1, 0}).has_value());
    const auto x = integer_solve(A, {4, 9});
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(A.apply(*x), (int_vector{4, 9}));
    // inconsistent over Q
    const auto B = int_matrix::from_rows({{1, 1}, {1, 1}}, 2);
    EXPECT_FALSE(integer_solve(B, {1, 2}).has_value());
}

TEST(UnimodularInverse, Roundtrip)
{
    const auto A = int_matrix::from_rows({{2, 1, 0}, {1, 1, 0}, {5, -3, 1}}, 3);
    const auto Ai = unimodular_inverse(A);
    EXPECT_EQ(A * Ai, int_matrix::identity(3));
    EXPECT_EQ(Ai * A, int_matrix::identity(3));
    EXPECT_THROW(unimodular_inverse(int_matrix::from_rows({{2, 0}, {0, 1}}, 2)), error);
}

TEST(Helpers, GcdAndFloor)
{
    EXPECT_EQ(gcd(12, -18), 6);
    EXPECT_EQ(floor_div(-7, 2), -4);
    EXPECT_EQ(floor_div(7, -2), -4);
    EXPECT_EQ(floor_of(rational(-7, 2)), -4);
    EXPECT_EQ(ceil_of(rational(-7, 2)), -3);
    auto [g, s, t] = extended_gcd(240, 46);
    EXPECT_EQ(g, 2);
    EXPECT_EQ(s * 240 + t * 46, 2);
    EXPECT_EQ(primitive({4, -6, 0}), (int_vector{2, -3, 0}));
}
