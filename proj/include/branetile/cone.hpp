#pragma once

// Exact polyhedral cones: double description in both directions and strict
// feasibility of homogeneous systems by Fourier-Motzkin elimination.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "error.hpp"
#include "int_matrix.hpp"

namespace branetile {

using rational_vector = std::vector<rational>;

// {x : E x = 0} + cone(rays), lineality given as a basis.
struct cone_generators {
    std::vector<int_vector> lineality;
    std::vector<int_vector> rays;
};

// {x : E x = 0, A x >= 0}.
struct cone_constraints {
    std::vector<int_vector> equations;
    std::vector<int_vector> inequalities;
};

namespace detail {

inline std::vector<rational> solve_square(std::vector<std::vector<rational>> A, std::vector<rational> b)
{
    const std::size_t n = A.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && A[p][c] == 0)
            ++p;
        require(p < n, error_code::internal, "singular system in projection");
        std::swap(A[p], A[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || A[r][c] == 0)
                continue;
            const rational f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k)
                A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<rational> x(n);
    for (std::size_t r = 0; r < n; ++r)
        x[r] = b[r] / A[r][r];
    return x;
}

inline int_vector integer_direction(const rational_vector& x)
{
    big_int l = 1;
    for (const auto& v : x) {
        const big_int den = denominator(v);
        l = l / gcd(l, den) * den;
    }
    int_vector out;
    for (const auto& v : x)
        out.push_back(numerator(v) * (l / denominator(v)));
    return primitive(out);
}

// Orthogonal projection of r onto the complement of span(basis), made primitive.
inline int_vector project_off(const int_vector& r, const std::vector<int_vector>& basis)
{
    if (basis.empty())
        return primitive(r);
    const std::size_t k = basis.size();
    std::vector<std::vector<rational>> G(k, std::vector<rational>(k));
    std::vector<rational> rhs(k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b)
            G[a][b] = rational(dot(basis[a], basis[b]));
        rhs[a] = rational(dot(basis[a], r));
    }
    const auto c = solve_square(G, rhs);
    rational_vector out(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        rational v = rational(r[j]);
        for (std::size_t a = 0; a < k; ++a)
            v -= c[a] * rational(basis[a][j]);
        out[j] = v;
    }
    return integer_direction(out);
}

} // namespace detail

// Double description: generators of {x in Q^n : E x = 0, A x >= 0}.
inline cone_generators cone_from_constraints(std::size_t n, const std::vector<int_vector>& inequalities,
                                             const std::vector<int_vector>& equations = {})
{
    std::vector<int_vector> rows;
    for (const auto& e : equations) {
        rows.push_back(e);
        rows.push_back(big_int(-1) * e);
    }
    rows.insert(rows.end(), inequalities.begin(), inequalities.end());
    const std::size_t m = rows.size();
    for (const auto& r : rows)
        require(r.size() == n, error_code::internal, "constraint of wrong length");

    struct ray_t {
        int_vector v;
        boost::dynamic_bitset<> zero;
    };
    std::vector<int_vector> lin;
    for (std::size_t k = 0; k < n; ++k)
        lin.push_back(unit_vector(n, k));
    std::vector<ray_t> rays;

    for (std::size_t k = 0; k < m; ++k) {
        const auto& a = rows[k];
        std::size_t piv = lin.size();
        for (std::size_t j = 0; j < lin.size(); ++j)
            if (dot(a, lin[j]) != 0) {
                piv = j;
                break;
            }
        if (piv < lin.size()) {
            int_vector l = lin[piv];
            big_int al = dot(a, l);
            if (al < 0) {
                l = big_int(-1) * l;
                al = -al;
            }
            std::vector<int_vector> nl;
            for (std::size_t j = 0; j < lin.size(); ++j)
                if (j != piv)
                    nl.push_back(primitive(al * lin[j] - dot(a, lin[j]) * l));
            for (auto& r : rays) {
                r.v = primitive(al * r.v - dot(a, r.v) * l);
                r.zero.set(k);
            }
            ray_t nr{l, boost::dynamic_bitset<>(m)};
            for (std::size_t j = 0; j < k; ++j)
                nr.zero.set(j);
            rays.push_back(std::move(nr));
            lin = std::move(nl);
            continue;
        }

        std::vector<big_int> val(rays.size());
        for (std::size_t j = 0; j < rays.size(); ++j)
            val[j] = dot(a, rays[j].v);
        std::vector<ray_t> next;
        for (std::size_t j = 0; j < rays.size(); ++j)
            if (val[j] > 0)
                next.push_back(rays[j]);
            else if (val[j] == 0) {
                next.push_back(rays[j]);
                next.back().zero.set(k);
            }
        for (std::size_t p = 0; p < rays.size(); ++p) {
            if (val[p] <= 0)
                continue;
            for (std::size_t q = 0; q < rays.size(); ++q) {
                if (val[q] >= 0)
                    continue;
                const auto Z = rays[p].zero & rays[q].zero;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
                    if (r != p && r != q && Z.is_subset_of(rays[r].zero))
                        adjacent = false;
                if (!adjacent)
                    continue;
                ray_t nr{primitive(val[p] * rays[q].v - val[q] * rays[p].v), Z};
                nr.zero.set(k);
                next.push_back(std::move(nr));
            }
        }
        rays = std::move(next);
    }

    cone_generators out;
    out.lineality = lin;
    std::set<int_vector> uniq;
    for (const auto& r : rays)
        uniq.insert(detail::project_off(r.v, lin));
    out.rays.assign(uniq.begin(), uniq.end());
    return out;
}

// Irredundant constraints of cone(rays) + span(lineality); inequalities are
// normalized orthogonal to the equations.
inline cone_constraints cone_from_generators(std::size_t n, const std::vector<int_vector>& rays,
                                             const std::vector<int_vector>& lineality = {})
{
    const auto dual = cone_from_constraints(n, rays, lineality);
    return {dual.lineality, dual.rays};
}

// Primitive extreme rays of a pointed cone given by generators, sorted.
inline std::vector<int_vector> extreme_rays(std::size_t n, const std::vector<int_vector>& gens)
{
    const auto h = cone_from_generators(n, gens);
    const auto g = cone_from_constraints(n, h.inequalities, h.equations);
    require(g.lineality.empty(), error_code::internal, "cone is not pointed");
    return g.rays;
}

inline bool in_cone(const cone_constraints& c, const int_vector& x)
{
    for (const auto& e : c.equations)
        if (dot(e, x) != 0)
            return false;
    for (const auto& a : c.inequalities)
        if (dot(a, x) < 0)
            return false;
    return true;
}

// Only relevant when the cone is given with lineality.
inline std::size_t cone_dimension(std::size_t n, const cone_constraints& c) { return n - c.equations.size(); }

namespace detail {

inline int_vector primitive_row(int_vector r)
{
    const big_int g = content(r);
    if (g > 1)
        for (auto& x : r)
            x /= g;
    return r;
}

} // namespace detail

// A point with rows . x > 0 for all rows, or nothing. Fourier-Motzkin with
// back-substitution picking small values inside each interval.
inline std::optional<rational_vector> strict_interior_point(const std::vector<int_vector>& rows, std::size_t nvars)
{
    std::vector<std::vector<int_vector>> stages;
    std::vector<int_vector> cur;
    {
        std::set<int_vector> uniq;
        for (const auto& r : rows) {
            if (is_zero(r))
                return std::nullopt;
            uniq.insert(detail::primitive_row(r));
        }
        cur.assign(uniq.begin(), uniq.end());
    }
    for (std::size_t j = 0; j < nvars; ++j) {
        stages.push_back(cur);
        std::set<int_vector> next;
        std::vector<const int_vector*> pos, neg;
        for (const auto& r : cur) {
            if (r[j] > 0)
                pos.push_back(&r);
            else if (r[j] < 0)
                neg.push_back(&r);
            else
                next.insert(r);
        }
        for (const auto* p : pos)
            for (const auto* m : neg) {
                int_vector c(nvars);
                for (std::size_t k = 0; k < nvars; ++k)
                    c[k] = (-(*m)[j]) * (*p)[k] + (*p)[j] * (*m)[k];
                if (is_zero(c))
                    return std::nullopt;
                next.insert(detail::primitive_row(c));
            }
        cur.assign(next.begin(), next.end());
    }
    if (!cur.empty())
        return std::nullopt;

    rational_vector x(nvars, rational(0));
    for (std::size_t jj = nvars; jj-- > 0;) {
        std::optional<rational> lo, hi;
        for (const auto& r : stages[jj]) {
            if (r[jj] == 0)
                continue;
            rational rest = 0;
            for (std::size_t k = jj + 1; k < nvars; ++k)
                rest += rational(r[k]) * x[k];
            const rational bound = -rest / rational(r[jj]);
            if (r[jj] > 0) {
                if (!lo || bound > *lo)
                    lo = bound;
            } else if (!hi || bound < *hi) {
                hi = bound;
            }
        }
        rational v = 0;
        if (lo && hi) {
            if (*lo < 0 && *hi > 0)
                v = 0;
            else if (*lo >= 0) {
                const rational c = rational(floor_of(*lo) + 1);
                v = c < *hi ? c : (*lo + *hi) / 2;
            } else {
                const rational c = rational(ceil_of(*hi) - 1);
                v = c > *lo ? c : (*lo + *hi) / 2;
            }
        } else if (lo) {
            v = *lo < 0 ? rational(0) : rational(floor_of(*lo) + 1);
        } else if (hi) {
            v = *hi > 0 ? rational(0) : rational(ceil_of(*hi) - 1);
        }
        x[jj] = v;
    }
    for (const auto& r : rows) {
        rational s = 0;
        for (std::size_t k = 0; k < nvars; ++k)
            s += rational(r[k]) * x[k];
        require(s > 0, error_code::internal, "interior point failed verification");
    }
    return x;
}

} // namespace branetile
