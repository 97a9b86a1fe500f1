#pragma once

// Rational polyhedra in V- and H-form, their face lattices and normal cones,
// the arrow-weight cone P in Lambda, its shift P^theta and the M-stable faces.

#include <algorithm>
#include <functional>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cone.hpp"
#include "error.hpp"
#include "int_matrix.hpp"
#include "lattice.hpp"

namespace branetile {

// normal . x >= offset
struct halfspace {
    int_vector normal;
    rational offset;
};

// Homogenized: a generator (t, x) is the point x / t when t > 0 and the ray x
// when t = 0; a constraint (beta, a) reads a . x + beta >= 0 (or = 0).
struct polyhedron {
    std::size_t dim = 0;
    std::vector<int_vector> generators;
    std::vector<int_vector> lineality;
    std::vector<int_vector> facets;
    std::vector<int_vector> equations;

    [[nodiscard]] bool empty() const
    {
        return std::none_of(generators.begin(), generators.end(), [](const int_vector& g) { return g[0] > 0; });
    }

    [[nodiscard]] static bool is_point(const int_vector& g) { return g[0] > 0; }

    [[nodiscard]] static rational_vector point_of(const int_vector& g)
    {
        rational_vector x;
        for (std::size_t k = 1; k < g.size(); ++k)
            x.push_back(rational(g[k]) / rational(g[0]));
        return x;
    }

    [[nodiscard]] static int_vector direction_of(const int_vector& g) { return int_vector(g.begin() + 1, g.end()); }

    [[nodiscard]] std::vector<rational_vector> points() const
    {
        std::vector<rational_vector> out;
        for (const auto& g : generators)
            if (is_point(g))
                out.push_back(point_of(g));
        return out;
    }

    [[nodiscard]] std::vector<int_vector> rays() const
    {
        std::vector<int_vector> out;
        for (const auto& g : generators)
            if (!is_point(g))
                out.push_back(direction_of(g));
        return out;
    }

    [[nodiscard]] int_vector facet_normal(std::size_t k) const { return direction_of(facets[k]); }
    [[nodiscard]] rational facet_offset(std::size_t k) const { return rational(-facets[k][0]); }

    [[nodiscard]] bool contains(const rational_vector& x) const
    {
        auto value = [&](const int_vector& c) {
            rational s = rational(c[0]);
            for (std::size_t k = 0; k < dim; ++k)
                s += rational(c[k + 1]) * x[k];
            return s;
        };
        for (const auto& e : equations)
            if (value(e) != 0)
                return false;
        for (const auto& f : facets)
            if (value(f) < 0)
                return false;
        return true;
    }

    static polyhedron from_generators(std::size_t dim, const std::vector<rational_vector>& points,
                                      const std::vector<int_vector>& rays, const std::vector<int_vector>& lineality = {});
    static polyhedron from_inequalities(std::size_t dim, const std::vector<halfspace>& ineqs,
                                        const std::vector<halfspace>& eqs = {});
};

namespace detail {

inline int_vector homogenize_point(const rational_vector& p)
{
    rational_vector h{rational(1)};
    h.insert(h.end(), p.begin(), p.end());
    auto v = integer_direction(h);
    return v;
}

inline int_vector homogenize_direction(const int_vector& r)
{
    int_vector h{0};
    h.insert(h.end(), r.begin(), r.end());
    return h;
}

inline int_vector homogenize_halfspace(const halfspace& h)
{
    rational_vector row{-h.offset};
    for (const auto& a : h.normal)
        row.push_back(rational(a));
    return integer_direction(row);
}

inline bool is_at_infinity(const int_vector& c)
{
    for (std::size_t k = 1; k < c.size(); ++k)
        if (c[k] != 0)
            return false;
    return true;
}

inline void finish_from_cone(polyhedron& p, const cone_generators& g)
{
    p.lineality = g.lineality;
    p.generators = g.rays;
    for (auto& v : p.generators)
        require(v[0] >= 0, error_code::internal, "generator with negative homogenizing coordinate");
    std::sort(p.generators.begin(), p.generators.end());
    const auto c = cone_from_generators(p.dim + 1, p.generators, p.lineality);
    p.equations = c.equations;
    p.facets.clear();
    for (const auto& f : c.inequalities)
        if (!is_at_infinity(f))
            p.facets.push_back(f);
    std::sort(p.facets.begin(), p.facets.end());
}

} // namespace detail

inline polyhedron polyhedron::from_generators(std::size_t dim, const std::vector<rational_vector>& points,
                                              const std::vector<int_vector>& rays,
                                              const std::vector<int_vector>& lineality)
{
    polyhedron p;
    p.dim = dim;
    std::vector<int_vector> gens, lin;
    for (const auto& x : points) {
        require(x.size() == dim, error_code::internal, "point of wrong dimension");
        gens.push_back(detail::homogenize_point(x));
    }
    for (const auto& r : rays) {
        require(r.size() == dim, error_code::internal, "ray of wrong dimension");
        if (!is_zero(r))
            gens.push_back(detail::homogenize_direction(primitive(r)));
    }
    for (const auto& l : lineality)
        lin.push_back(detail::homogenize_direction(l));
    if (gens.empty())
        return p;
    // reduce to minimal generators through the constraints
    const auto c = cone_from_generators(dim + 1, gens, lin);
    auto ineq = c.inequalities;
    ineq.push_back(unit_vector(dim + 1, 0));
    detail::finish_from_cone(p, cone_from_constraints(dim + 1, ineq, c.equations));
    return p;
}

inline polyhedron polyhedron::from_inequalities(std::size_t dim, const std::vector<halfspace>& ineqs,
                                                const std::vector<halfspace>& eqs)
{
    polyhedron p;
    p.dim = dim;
    std::vector<int_vector> rows, erows;
    for (const auto& h : ineqs) {
        require(h.normal.size() == dim, error_code::internal, "halfspace of wrong dimension");
        rows.push_back(detail::homogenize_halfspace(h));
    }
    for (const auto& h : eqs)
        erows.push_back(detail::homogenize_halfspace(h));
    rows.push_back(unit_vector(dim + 1, 0));
    const auto g = cone_from_constraints(dim + 1, rows, erows);
    polyhedron tmp;
    tmp.dim = dim;
    tmp.generators = g.rays;
    if (tmp.empty())
        return p;
    detail::finish_from_cone(p, g);
    return p;
}

// V-form and H-form describe the same set.
inline void check_consistency(const polyhedron& p)
{
    for (const auto& g : p.generators) {
        for (const auto& e : p.equations)
            require(dot(e, g) == 0, error_code::inconsistent_polyhedron, "generator violates an equation");
        for (const auto& f : p.facets)
            require(dot(f, g) >= 0, error_code::inconsistent_polyhedron, "generator violates a facet");
    }
    for (const auto& l : p.lineality)
        for (const auto& f : p.facets)
            require(dot(f, l) == 0, error_code::inconsistent_polyhedron, "lineality not in a facet hyperplane");
    if (p.empty())
        return;
    const auto c = cone_from_generators(p.dim + 1, p.generators, p.lineality);
    std::vector<int_vector> fs;
    for (const auto& f : c.inequalities)
        if (!detail::is_at_infinity(f))
            fs.push_back(f);
    std::sort(fs.begin(), fs.end());
    require(fs == p.facets, error_code::inconsistent_polyhedron, "facets do not match the generators");
}

inline polyhedron translate(const polyhedron& p, const rational_vector& v)
{
    std::vector<rational_vector> pts;
    for (auto x : p.points()) {
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] += v[k];
        pts.push_back(x);
    }
    std::vector<int_vector> lin;
    for (const auto& l : p.lineality)
        lin.push_back(polyhedron::direction_of(l));
    return polyhedron::from_generators(p.dim, pts, p.rays(), lin);
}

// ---------------------------------------------------------------------------
// Faces

struct poly_face {
    std::vector<std::size_t> facets;     // tight facets
    std::vector<std::size_t> generators; // generators lying in the face
    std::size_t dim = 0;
    int_vector supporting; // y with face = face_y(P)
};

inline std::size_t face_dimension(const polyhedron& p, const std::vector<std::size_t>& gens)
{
    std::vector<int_vector> vs;
    for (auto g : gens)
        vs.push_back(p.generators[g]);
    for (const auto& l : p.lineality)
        vs.push_back(l);
    return rank_of_vectors(vs, p.dim + 1) - 1;
}

inline std::vector<std::size_t> tight_facets(const polyhedron& p, const std::vector<std::size_t>& gens)
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < p.facets.size(); ++k)
        if (std::all_of(gens.begin(), gens.end(), [&](std::size_t g) { return dot(p.facets[k], p.generators[g]) == 0; }))
            out.push_back(k);
    return out;
}

inline poly_face make_face(const polyhedron& p, std::vector<std::size_t> gens)
{
    poly_face f;
    f.generators = std::move(gens);
    f.facets = tight_facets(p, f.generators);
    f.dim = face_dimension(p, f.generators);
    f.supporting = zero_vector(p.dim);
    for (auto k : f.facets)
        f.supporting = f.supporting + p.facet_normal(k);
    return f;
}

// Every nonempty face, deterministic order: by decreasing dimension, then tight set.
inline std::vector<poly_face> enumerate_faces(const polyhedron& p)
{
    std::vector<poly_face> out;
    if (p.empty())
        return out;
    std::vector<std::size_t> all(p.generators.size());
    for (std::size_t k = 0; k < all.size(); ++k)
        all[k] = k;
    std::map<std::vector<std::size_t>, poly_face> seen;
    std::vector<std::vector<std::size_t>> queue;
    {
        auto f = make_face(p, all);
        queue.push_back(f.generators);
        seen.emplace(f.generators, std::move(f));
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto gens = queue[head];
        const auto tight = seen.at(gens).facets;
        for (std::size_t k = 0; k < p.facets.size(); ++k) {
            if (std::binary_search(tight.begin(), tight.end(), k))
                continue;
            std::vector<std::size_t> sub;
            for (auto g : gens)
                if (dot(p.facets[k], p.generators[g]) == 0)
                    sub.push_back(g);
            if (std::none_of(sub.begin(), sub.end(), [&](std::size_t g) { return polyhedron::is_point(p.generators[g]); }))
                continue;
            if (seen.count(sub))
                continue;
            auto f = make_face(p, sub);
            queue.push_back(sub);
            seen.emplace(sub, std::move(f));
        }
    }
    for (auto& [_, f] : seen)
        out.push_back(std::move(f));
    std::sort(out.begin(), out.end(), [](const poly_face& a, const poly_face& b) {
        return a.dim != b.dim ? a.dim > b.dim : a.facets < b.facets;
    });
    return out;
}

inline bool is_subface(const poly_face& f, const poly_face& g)
{
    return std::includes(g.generators.begin(), g.generators.end(), f.generators.begin(), f.generators.end());
}

// N_F P = {y : face_y(P) contains F}: generated by the tight facet normals,
// with the equation normals as lineality.
inline cone_generators normal_cone(const polyhedron& p, const poly_face& f)
{
    cone_generators n;
    for (const auto& e : p.equations)
        n.lineality.push_back(polyhedron::direction_of(e));
    for (auto k : f.facets)
        n.rays.push_back(p.facet_normal(k));
    return n;
}

// Linear span of the differences of points of F.
inline std::vector<int_vector> face_span(const polyhedron& p, const poly_face& f)
{
    std::vector<int_vector> vs;
    std::optional<rational_vector> base;
    for (auto g : f.generators) {
        const auto& G = p.generators[g];
        if (!polyhedron::is_point(G)) {
            vs.push_back(polyhedron::direction_of(G));
        } else if (!base) {
            base = polyhedron::point_of(G);
        } else {
            auto x = polyhedron::point_of(G);
            for (std::size_t k = 0; k < x.size(); ++k)
                x[k] -= (*base)[k];
            vs.push_back(detail::integer_direction(x));
        }
    }
    for (const auto& l : p.lineality)
        vs.push_back(polyhedron::direction_of(l));
    return vs;
}

// Brute force: points where dim facets meet nondegenerately and all others hold.
inline std::vector<rational_vector> brute_force_vertices(const polyhedron& p)
{
    std::set<rational_vector> out;
    const std::size_t n = p.dim, m = p.facets.size();
    std::vector<int_vector> rows;
    for (const auto& e : p.equations)
        rows.push_back(e);
    const std::size_t ne = rows.size();
    require(ne <= n, error_code::internal, "too many equations");
    std::vector<std::size_t> pick(n - ne);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t depth) {
        if (depth == pick.size()) {
            std::vector<std::vector<rational>> A;
            std::vector<rational> b;
            for (std::size_t k = 0; k < ne; ++k) {
                A.emplace_back();
                for (std::size_t j = 0; j < n; ++j)
                    A.back().push_back(rational(rows[k][j + 1]));
                b.push_back(rational(-rows[k][0]));
            }
            for (auto k : pick) {
                A.emplace_back();
                for (std::size_t j = 0; j < n; ++j)
                    A.back().push_back(rational(p.facets[k][j + 1]));
                b.push_back(rational(-p.facets[k][0]));
            }
            int_matrix M(n, n);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    M(r, c) = numerator(A[r][c]);
            if (determinant(M) == 0)
                return;
            const auto x = detail::solve_square(A, b);
            if (p.contains(x))
                out.insert(x);
            return;
        }
        for (std::size_t k = from; k < m; ++k) {
            pick[depth] = k;
            rec(k + 1, depth + 1);
        }
    };
    rec(0, 0);
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// The cone P generated by arrow weights, its shifts, and M-stable faces

inline polyhedron arrow_cone(const lattice_tower& t)
{
    std::vector<int_vector> rays;
    for (std::size_t a = 0; a < t.quiver.num_arrows(); ++a)
        rays.push_back(t.weight_of_arrow(a));
    return polyhedron::from_generators(t.rank_Lambda, {rational_vector(t.rank_Lambda, rational(0))}, rays);
}

struct shifted_polyhedron {
    polyhedron shifted; // P - lambda
    int_vector lambda;  // d(lambda) = theta
};

inline shifted_polyhedron shift_by_stability(const polyhedron& P, const lattice_tower& t, const int_vector& theta)
{
    require(theta.size() == t.quiver.num_vertices(), error_code::invalid_theta, "theta has the wrong length");
    const auto lam = integer_solve(t.d, theta);
    require(lam.has_value(), error_code::internal, "theta " + to_string(theta) + " has no preimage under d");
    rational_vector v;
    for (const auto& x : *lam)
        v.push_back(rational(-x));
    return {translate(P, v), *lam};
}

struct m_stable_face {
    std::size_t face = 0;           // index into the face list
    rational_vector interior_point; // in the relative interior of F and in M_Q
    rational_vector m_point;        // the same point in M coordinates
};

// inn(F) meets M_Q = ker d: some strictly positive combination of the face
// generators (lineality free) lies in ker d.
inline std::optional<rational_vector> interior_point_in_M(const polyhedron& p, const poly_face& f, const lattice_tower& t)
{
    const std::size_t r = p.dim;
    std::vector<int_vector> cols;
    for (auto g : f.generators)
        cols.push_back(p.generators[g]);
    const std::size_t ng = cols.size();
    for (const auto& l : p.lineality) {
        cols.push_back(l);
        cols.push_back(big_int(-1) * l);
    }
    int_matrix E(t.d.rows(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto img = t.d.apply(polyhedron::direction_of(cols[c]));
        for (std::size_t k = 0; k < img.size(); ++k)
            E(k, c) = img[k];
    }
    const int_matrix K = integer_kernel(E);
    if (K.cols() == 0)
        return std::nullopt;
    std::vector<int_vector> rows;
    for (std::size_t k = 0; k < ng; ++k)
        rows.push_back(K.row(k));
    const auto y = strict_interior_point(rows, K.cols());
    if (!y)
        return std::nullopt;
    rational_vector h(r + 1, rational(0));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        rational nu = 0;
        for (std::size_t j = 0; j < K.cols(); ++j)
            nu += rational(K(c, j)) * (*y)[j];
        for (std::size_t k = 0; k <= r; ++k)
            h[k] += nu * rational(cols[c][k]);
    }
    require(h[0] > 0, error_code::internal, "interior point at infinity");
    rational_vector x;
    for (std::size_t k = 1; k <= r; ++k)
        x.push_back(h[k] / h[0]);
    return x;
}

inline rational_vector to_M_coordinates(const lattice_tower& t, const rational_vector& x)
{
    big_int l = 1;
    for (const auto& v : x)
        l = l / gcd(l, denominator(v)) * denominator(v);
    int_vector xi;
    for (const auto& v : x)
        xi.push_back(numerator(v) * (l / denominator(v)));
    const auto m = integer_solve(t.i, xi);
    require(m.has_value(), error_code::internal, "point does not lie in M");
    rational_vector out;
    for (const auto& c : *m)
        out.push_back(rational(c) / rational(l));
    return out;
}

inline bool transversal_to_M(const polyhedron& p, const poly_face& f, const lattice_tower& t)
{
    auto vs = face_span(p, f);
    for (std::size_t c = 0; c < t.i.cols(); ++c)
        vs.push_back(t.i.column(c));
    return rank_of_vectors(vs, p.dim) == p.dim;
}

// Faces F with inn(F) meeting M_Q and <F> + M_Q = Lambda_Q.
inline std::vector<m_stable_face> m_stable_faces(const polyhedron& p, const std::vector<poly_face>& faces,
                                                 const lattice_tower& t)
{
    require(p.dim == t.rank_Lambda, error_code::internal, "polyhedron does not live in Lambda");
    std::vector<m_stable_face> out;
    for (std::size_t k = 0; k < faces.size(); ++k) {
        if (!transversal_to_M(p, faces[k], t))
            continue;
        const auto x = interior_point_in_M(p, faces[k], t);
        if (!x)
            continue;
        out.push_back({k, *x, to_M_coordinates(t, *x)});
    }
    return out;
}

// P^theta cut with M_Q, in M coordinates: a . i(m) + beta >= 0.
inline polyhedron slice_by_M(const polyhedron& p, const lattice_tower& t)
{
    std::vector<halfspace> hs, es;
    for (std::size_t k = 0; k < p.facets.size(); ++k)
        hs.push_back({t.restrict_to_M(p.facet_normal(k)), p.facet_offset(k)});
    for (const auto& e : p.equations)
        es.push_back({t.restrict_to_M(polyhedron::direction_of(e)), rational(-e[0])});
    return polyhedron::from_inequalities(3, hs, es);
}

} // namespace branetile
