#pragma once

// Line bundles L(u) on the moduli space from weak paths u: divisors over the
// stable matchings, the Picard group, the tilting collection and a count of
// graded sections against path weights.

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "fan.hpp"
#include "int_matrix.hpp"
#include "lattice.hpp"
#include "matchings.hpp"
#include "polyhedra.hpp"
#include "stability.hpp"

namespace branetile {

// Breadth-first from i0; forward arrows before inverses, each in arrow-id order.
inline std::vector<weak_path> default_paths(const quiver_on_torus& q, std::size_t i0)
{
    const std::size_t n = q.num_vertices();
    require(i0 < n, error_code::dangling_reference, "base vertex out of range");
    std::vector<std::size_t> by_id(q.num_arrows());
    for (std::size_t a = 0; a < by_id.size(); ++a)
        by_id[a] = a;
    std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) { return q.arrows[a].id < q.arrows[b].id; });

    std::vector<std::optional<weak_path>> path(n);
    path[i0] = trivial_path(i0);
    std::deque<std::size_t> queue{i0};
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (int exponent : {+1, -1})
            for (auto a : by_id) {
                const auto& ar = q.arrows[a];
                if ((exponent > 0 ? ar.src : ar.tgt) != v)
                    continue;
                const std::size_t w = exponent > 0 ? ar.tgt : ar.src;
                if (path[w])
                    continue;
                weak_path p = *path[v];
                p.steps.push_back({a, exponent});
                path[w] = p;
                queue.push_back(w);
            }
    }
    std::vector<weak_path> out;
    for (std::size_t v = 0; v < n; ++v) {
        require(path[v].has_value(), error_code::unreachable_vertex, "vertex " + q.vertices[v] + " is unreachable");
        out.push_back(*path[v]);
    }
    return out;
}

// coker(chi-bar_theta : M -> Z^rays).
struct picard_presentation {
    std::vector<std::size_t> rays; // stable matching ids
    int_matrix chi_bar;            // rays x 3
    std::size_t rank = 0;          // free rank
    std::vector<big_int> torsion;  // invariant factors > 1
    int_matrix projection;         // (rank + torsion) x rays

    [[nodiscard]] int_vector classify(const int_vector& coefficients) const
    {
        int_vector c = projection.apply(coefficients);
        for (std::size_t k = 0; k < torsion.size(); ++k) {
            auto& x = c[rank + k];
            x = x % torsion[k];
            if (x < 0)
                x += torsion[k];
        }
        return c;
    }

    [[nodiscard]] bool principal(const int_vector& coefficients) const
    {
        return integer_solve(chi_bar, coefficients).has_value();
    }
};

// Free rows in Hermite form; with basis_rays the free projection is further
// normalized to the identity on those rays.
inline picard_presentation make_picard(const std::vector<perfect_matching>& ms, const std::vector<std::size_t>& rays,
                                       const std::vector<std::size_t>& basis_rays = {})
{
    picard_presentation p;
    p.rays = rays;
    std::vector<int_vector> rows;
    for (auto id : rays)
        rows.push_back(ms[id].chi_M);
    const std::size_t n = rays.size();
    p.chi_bar = int_matrix::from_rows(rows, 3);
    const auto snf = smith_normal_form(p.chi_bar);
    p.rank = n - snf.rank;
    std::vector<int_vector> prows;
    if (p.rank > 0) {
        const auto H = hermite_normal_form(snf.U.block(snf.rank, n, 0, n)).H;
        for (std::size_t r = 0; r < p.rank; ++r)
            prows.push_back(H.row(r));
    }
    if (!basis_rays.empty()) {
        require(basis_rays.size() == p.rank, error_code::usage,
                "Pic basis needs " + std::to_string(p.rank) + " rays, got " + std::to_string(basis_rays.size()));
        int_matrix PB(p.rank, p.rank);
        for (std::size_t c = 0; c < p.rank; ++c) {
            const auto it = std::find(rays.begin(), rays.end(), basis_rays[c]);
            require(it != rays.end(), error_code::usage, matching_label(basis_rays[c]) + " is not a ray of this fan");
            const auto col = static_cast<std::size_t>(it - rays.begin());
            for (std::size_t r = 0; r < p.rank; ++r)
                PB(r, c) = prows[r][col];
        }
        const auto snfB = smith_normal_form(PB);
        require(snfB.rank == p.rank && snfB.unimodular_factors(), error_code::usage,
                "the chosen rays do not give a basis of Pic");
        const auto inv = unimodular_inverse(PB);
        const auto P = inv * int_matrix::from_rows(prows, n);
        for (std::size_t r = 0; r < p.rank; ++r)
            prows[r] = P.row(r);
    }
    for (std::size_t k = 0; k < snf.rank; ++k)
        if (abs_value(snf.S(k, k)) > 1) {
            p.torsion.push_back(abs_value(snf.S(k, k)));
            prows.push_back(snf.U.row(k));
        }
    p.projection = prows.empty() ? int_matrix(0, n) : int_matrix::from_rows(prows, n);
    return p;
}

inline picard_presentation picard_presentation_for(const quiver_on_torus& q, const std::vector<perfect_matching>& ms,
                                                   const int_vector& theta,
                                                   const std::vector<std::size_t>& basis_rays = {})
{
    return make_picard(ms, stable_matching_ids(q, theta, ms), basis_rays);
}

struct divisor_class {
    int_vector theta;
    std::vector<std::size_t> rays;
    int_vector coefficients; // chi_I(u) per ray
    int_vector pic_class;
};

inline int_vector divisor_coefficients(const quiver_on_torus& q, const std::vector<perfect_matching>& ms,
                                       const std::vector<std::size_t>& rays, const weak_path& u)
{
    int_vector c;
    for (auto id : rays)
        c.push_back(chi_of_path(q, ms[id], u));
    return c;
}

inline divisor_class path_divisor(const quiver_on_torus& q, const weak_path& u, const int_vector& theta,
                                  const std::vector<perfect_matching>& ms, const picard_presentation& pic)
{
    require_generic(q, theta);
    path_target(q, u);
    divisor_class d;
    d.theta = theta;
    d.rays = pic.rays;
    d.coefficients = divisor_coefficients(q, ms, pic.rays, u);
    d.pic_class = pic.classify(d.coefficients);
    return d;
}

struct tilting_collection {
    std::size_t base = 0;
    std::vector<weak_path> paths; // per vertex
    std::vector<divisor_class> classes;
    picard_presentation pic;
};

inline tilting_collection make_tilting_collection(const lattice_tower& t, const std::vector<perfect_matching>& ms,
                                                  const int_vector& theta, std::size_t i0,
                                                  const std::map<std::size_t, weak_path>& supplied = {},
                                                  const std::vector<std::size_t>& basis_rays = {})
{
    const auto& q = t.quiver;
    require_generic(q, theta);
    tilting_collection c;
    c.base = i0;
    c.paths = default_paths(q, i0);
    for (const auto& [v, u] : supplied) {
        require(v < q.num_vertices(), error_code::dangling_reference, "path for an unknown vertex");
        if (u.source != i0 || path_target(q, u) != v)
            fail(error_code::bad_path_endpoints, "path " + path_to_string(q, u) + " does not run from " +
                                                     q.vertices[i0] + " to " + q.vertices[v]);
        c.paths[v] = u;
    }
    c.pic = picard_presentation_for(q, ms, theta, basis_rays);
    for (const auto& u : c.paths)
        c.classes.push_back(path_divisor(q, u, theta, ms, c.pic));
    return c;
}

struct path_independence {
    bool weight_difference_in_M = false;
    bool divisors_linearly_equivalent = false;

    [[nodiscard]] bool holds() const { return weight_difference_in_M && divisors_linearly_equivalent; }
};

inline path_independence class_path_independence(const lattice_tower& t, const std::vector<perfect_matching>& ms,
                                                 const picard_presentation& pic, const weak_path& u,
                                                 const weak_path& v)
{
    const auto& q = t.quiver;
    if (u.source != v.source || path_target(q, u) != path_target(q, v))
        fail(error_code::bad_path_endpoints, "paths " + path_to_string(q, u) + " and " + path_to_string(q, v) +
                                                 " have different endpoints");
    path_independence r;
    r.weight_difference_in_M = t.in_M(weight_of_path(t, u) - weight_of_path(t, v));
    r.divisors_linearly_equivalent =
        pic.principal(divisor_coefficients(q, ms, pic.rays, u) - divisor_coefficients(q, ms, pic.rays, v));
    return r;
}

// ---------------------------------------------------------------------------
// Graded sections

// Sum of chi_I over all perfect matchings; positive on every arrow of a
// nondegenerate tiling.
inline int_vector height_functional(const std::vector<perfect_matching>& ms, std::size_t rank)
{
    int_vector h = zero_vector(rank);
    for (const auto& m : ms)
        h = h + m.chi;
    return h;
}

struct sections_report {
    std::map<big_int, std::size_t> lattice_counts; // by height
    std::map<big_int, std::size_t> path_counts;
    [[nodiscard]] bool agree() const { return lattice_counts == path_counts; }

    [[nodiscard]] std::size_t total(const std::map<big_int, std::size_t>& c) const
    {
        std::size_t s = 0;
        for (const auto& [_, n] : c)
            s += n;
        return s;
    }
};

// Distinct weights of paths i -> j in Q, by height.
inline std::map<big_int, std::size_t> path_weight_counts(const lattice_tower& t, const std::vector<perfect_matching>& ms,
                                                        std::size_t i, std::size_t j, const big_int& max_height)
{
    const auto& q = t.quiver;
    const auto H = height_functional(ms, t.rank_Lambda);
    std::vector<big_int> ha;
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
        ha.push_back(dot(H, t.weight_of_arrow(a)));
        require(ha.back() > 0, error_code::height_mismatch, "arrow " + q.arrows[a].id + " lies in no perfect matching");
    }
    std::set<std::pair<std::size_t, int_vector>> seen{{i, zero_vector(t.rank_Lambda)}};
    std::deque<std::pair<std::size_t, int_vector>> queue{{i, zero_vector(t.rank_Lambda)}};
    while (!queue.empty()) {
        auto [v, w] = queue.front();
        queue.pop_front();
        const big_int hv = dot(H, w);
        for (std::size_t a = 0; a < q.num_arrows(); ++a) {
            if (q.arrows[a].src != v || hv + ha[a] > max_height)
                continue;
            std::pair<std::size_t, int_vector> next{q.arrows[a].tgt, w + t.weight_of_arrow(a)};
            if (seen.insert(next).second)
                queue.push_back(std::move(next));
        }
    }
    std::map<big_int, std::size_t> out;
    for (const auto& [v, w] : seen)
        if (v == j)
            ++out[dot(H, w)];
    return out;
}

// Lattice points m of M with <m, chi-bar_I> >= -chi_I(u) for every stable ray,
// by height of m + wt(u).
inline std::map<big_int, std::size_t> lattice_section_counts(const lattice_tower& t,
                                                            const std::vector<perfect_matching>& ms,
                                                            const std::vector<std::size_t>& rays, const weak_path& u,
                                                            const big_int& max_height)
{
    const auto& q = t.quiver;
    const auto H = height_functional(ms, t.rank_Lambda);
    const int_vector HM = t.restrict_to_M(H);
    const big_int h0 = dot(H, weight_of_path(t, u));
    std::vector<halfspace> hs;
    for (auto id : rays)
        hs.push_back({ms[id].chi_M, rational(-chi_of_path(q, ms[id], u))});
    hs.push_back({big_int(-1) * HM, rational(h0 - max_height)});
    const auto poly = polyhedron::from_inequalities(3, hs);
    std::map<big_int, std::size_t> out;
    if (poly.empty())
        return out;
    require(poly.rays().empty() && poly.lineality.empty(), error_code::internal, "section polytope is unbounded");
    std::array<big_int, 3> lo, hi;
    bool first = true;
    for (const auto& x : poly.points())
        for (std::size_t k = 0; k < 3; ++k) {
            const big_int f = floor_of(x[k]), c = ceil_of(x[k]);
            if (first || f < lo[k])
                lo[k] = f;
            if (first || c > hi[k])
                hi[k] = c;
            if (k == 2)
                first = false;
        }
    for (big_int a = lo[0]; a <= hi[0]; ++a)
        for (big_int b = lo[1]; b <= hi[1]; ++b)
            for (big_int c = lo[2]; c <= hi[2]; ++c) {
                const int_vector m{a, b, c};
                bool ok = true;
                for (const auto& h : hs)
                    if (rational(dot(h.normal, m)) < h.offset) {
                        ok = false;
                        break;
                    }
                if (ok)
                    ++out[dot(HM, m) + h0];
            }
    return out;
}

inline sections_report graded_sections_count(const lattice_tower& t, const std::vector<perfect_matching>& ms,
                                             const int_vector& theta, const weak_path& u, const big_int& max_height)
{
    const auto& q = t.quiver;
    require_generic(q, theta);
    const auto f = moduli_fan(t, ms, theta);
    require(check_smooth(f), error_code::not_smooth, "fan is not smooth");
    sections_report r;
    r.lattice_counts = lattice_section_counts(t, ms, f.ray_matchings(), u, max_height);
    r.path_counts = path_weight_counts(t, ms, u.source, path_target(q, u), max_height);
    return r;
}

} // namespace branetile
