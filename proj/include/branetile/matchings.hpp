#pragma once

// Perfect matchings, their characteristic functionals, and the toric diagram.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "int_matrix.hpp"
#include "lattice.hpp"
#include "tiling.hpp"

namespace branetile {

// Arrow sets meeting every face exactly once, ordered lexicographically by
// their sorted arrow-id lists.
inline std::vector<index_set> enumerate_matching_sets(const quiver_on_torus& q)
{
    const std::size_t nf = q.num_faces();
    // faces containing each arrow, with multiplicity
    std::vector<std::vector<std::size_t>> faces_of(q.num_arrows());
    for (std::size_t f = 0; f < nf; ++f)
        for (auto a : q.faces[f].cycle)
            if (a < q.num_arrows())
                faces_of[a].push_back(f);

    std::vector<index_set> out;
    std::vector<int> hits(nf, 0);
    index_set chosen(q.num_arrows());

    auto search = [&](auto&& self) -> void {
        std::size_t next = nf;
        for (std::size_t f = 0; f < nf; ++f)
            if (hits[f] == 0) {
                next = f;
                break;
            }
        if (next == nf) {
            out.push_back(chosen);
            return;
        }
        std::vector<std::size_t> tried;
        for (auto a : q.faces[next].cycle) {
            if (a >= q.num_arrows() || chosen.test(a) || std::find(tried.begin(), tried.end(), a) != tried.end())
                continue;
            tried.push_back(a);
            bool ok = true;
            for (auto f : faces_of[a])
                if (++hits[f] > 1)
                    ok = false;
            if (ok) {
                chosen.set(a);
                self(self);
                chosen.reset(a);
            }
            for (auto f : faces_of[a])
                --hits[f];
        }
    };
    if (nf > 0)
        search(search);

    std::vector<std::pair<std::vector<std::string>, index_set>> keyed;
    for (const auto& s : out)
        keyed.emplace_back(q.arrow_ids(s), s);
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    out.clear();
    for (auto& [k, s] : keyed)
        out.push_back(s);
    return out;
}

struct perfect_matching {
    std::size_t id = 0;  // position in the enumeration order
    index_set arrows;
    int_vector chi;      // Lambda-dual coordinates
    int_vector chi_M;    // M-dual coordinates, last entry is the height

    [[nodiscard]] bool contains(std::size_t a) const { return arrows.test(a); }
};

inline std::string matching_label(std::size_t id) { return "I" + std::to_string(id + 1); }

// chi_I on Lambda: the functional (1, [a in I]) on Z + Z^{Q1}, which kills
// every relation (1, -d2 F) because |I cap F| = 1.
inline int_vector matching_functional(const lattice_tower& t, const index_set& arrows)
{
    int_vector phi = zero_vector(1 + t.quiver.num_arrows());
    phi[0] = 1;
    for (auto a = arrows.find_first(); a != index_set::npos; a = arrows.find_next(a))
        phi[1 + a] = 1;
    return t.descend_functional(phi);
}

inline std::vector<perfect_matching> enumerate_perfect_matchings(const lattice_tower& t)
{
    std::vector<perfect_matching> out;
    for (const auto& s : enumerate_matching_sets(t.quiver)) {
        perfect_matching m;
        m.id = out.size();
        m.arrows = s;
        m.chi = matching_functional(t, s);
        m.chi_M = t.restrict_to_M(m.chi);
        out.push_back(std::move(m));
    }
    return out;
}

// chi_I(u) for a weak path: signed count of steps through arrows of I.
inline big_int chi_of_path(const quiver_on_torus& q, const perfect_matching& m, const weak_path& u)
{
    path_target(q, u);
    big_int s = 0;
    for (const auto& st : u.steps)
        if (m.contains(st.arrow))
            s += st.exponent;
    return s;
}

struct point2 {
    big_int x = 0;
    big_int y = 0;

    friend bool operator==(const point2&, const point2&) = default;
    friend bool operator<(const point2& a, const point2& b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); }
};

inline big_int cross(const point2& o, const point2& a, const point2& b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Strict convex hull (no collinear boundary points), counterclockwise,
// starting from the lexicographically smallest point.
inline std::vector<point2> convex_hull(std::vector<point2> pts)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2)
        return pts;
    std::vector<point2> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0)
            --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
        while (k >= lo && cross(h[k - 2], h[k - 1], pts[i]) <= 0)
            --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

// Twice the Euclidean area: the number of unimodular triangles in any
// lattice triangulation.
inline big_int normalized_area(const std::vector<point2>& hull)
{
    big_int s = 0;
    for (std::size_t k = 0; k < hull.size(); ++k) {
        const auto& a = hull[k];
        const auto& b = hull[(k + 1) % hull.size()];
        s += a.x * b.y - a.y * b.x;
    }
    return abs_value(s);
}

// Lattice points of the closed region bounded by a counterclockwise strict hull.
inline std::vector<point2> hull_lattice_points(const std::vector<point2>& hull)
{
    std::vector<point2> out;
    if (hull.empty())
        return out;
    big_int x0 = hull[0].x, x1 = hull[0].x, y0 = hull[0].y, y1 = hull[0].y;
    for (const auto& p : hull) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    for (big_int x = x0; x <= x1; ++x)
        for (big_int y = y0; y <= y1; ++y) {
            const point2 p{x, y};
            bool inside = true;
            if (hull.size() == 1) {
                inside = p == hull[0];
            } else if (hull.size() == 2) {
                inside = cross(hull[0], hull[1], p) == 0;
            } else {
                for (std::size_t k = 0; k < hull.size() && inside; ++k)
                    inside = cross(hull[k], hull[(k + 1) % hull.size()], p) >= 0;
            }
            if (inside)
                out.push_back(p);
        }
    return out;
}

// x -> A x + b on Z^2.
struct affine2 {
    big_int a = 1, b = 0, c = 0, d = 1;
    big_int tx = 0, ty = 0;

    [[nodiscard]] point2 operator()(const point2& p) const { return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty}; }

    // this after other
    [[nodiscard]] affine2 after(const affine2& o) const
    {
        affine2 r;
        r.a = a * o.a + b * o.c;
        r.b = a * o.b + b * o.d;
        r.c = c * o.a + d * o.c;
        r.d = c * o.b + d * o.d;
        r.tx = a * o.tx + b * o.ty + tx;
        r.ty = c * o.tx + d * o.ty + ty;
        return r;
    }

    [[nodiscard]] big_int det() const { return a * d - b * c; }
};

struct weighted_point {
    point2 p;
    std::size_t multiplicity = 0;

    friend bool operator==(const weighted_point&, const weighted_point&) = default;
    friend bool operator<(const weighted_point& u, const weighted_point& v)
    {
        return std::tie(u.p, u.multiplicity) < std::tie(v.p, v.multiplicity);
    }
};

using canonical_key = std::vector<weighted_point>;

struct canonical_result {
    canonical_key key;
    std::vector<affine2> transforms; // every unimodular affine map achieving key
};

namespace detail {

inline canonical_key apply_key(const affine2& T, const std::map<point2, std::size_t>& support)
{
    canonical_key k;
    for (const auto& [p, m] : support)
        k.push_back({T(p), m});
    std::sort(k.begin(), k.end());
    return k;
}

inline affine2 translate_min_to_origin(const affine2& T, const std::map<point2, std::size_t>& support)
{
    std::optional<point2> best;
    for (const auto& [p, m] : support) {
        const auto q = T(p);
        if (!best || q < *best)
            best = q;
    }
    affine2 S;
    S.tx = -best->x;
    S.ty = -best->y;
    return S.after(T);
}

// Unimodular linear map sending primitive e to (1, 0).
inline affine2 align_to_x_axis(const point2& e)
{
    auto [g, s, t] = extended_gcd(e.x, e.y);
    require(g == 1, error_code::internal, "align_to_x_axis: direction is not primitive");
    affine2 A;
    A.a = s;
    A.b = t;
    A.c = -e.y;
    A.d = e.x;
    return A;
}

inline point2 primitive_direction(const point2& from, const point2& to)
{
    point2 e{to.x - from.x, to.y - from.y};
    const big_int g = gcd(e.x, e.y);
    return {e.x / g, e.y / g};
}

} // namespace detail

// Canonical representative of a weighted point multiset under the affine
// unimodular group GL(2,Z) |x Z^2.
inline canonical_result canonical_form(const std::map<point2, std::size_t>& support)
{
    using namespace detail;
    require(!support.empty(), error_code::empty_diagram, "empty toric diagram");
    std::vector<point2> pts;
    for (const auto& [p, m] : support)
        pts.push_back(p);
    const auto hull = convex_hull(pts);

    std::vector<affine2> candidates;
    if (hull.size() == 1) {
        candidates.push_back(affine2{});
    } else if (hull.size() == 2) {
        for (int dir = 0; dir < 2; ++dir)
            candidates.push_back(align_to_x_axis(primitive_direction(hull[dir], hull[1 - dir])));
    } else {
        for (std::size_t k = 0; k < hull.size(); ++k)
            for (int dir = 0; dir < 2; ++dir) {
                const point2 p = hull[(k + dir) % hull.size()];
                const point2 q = hull[(k + 1 - dir) % hull.size()];
                affine2 A = align_to_x_axis(primitive_direction(p, q));
                affine2 Tr;
                const point2 pa = A(p);
                Tr.tx = -pa.x;
                Tr.ty = -pa.y;
                A = Tr.after(A);
                // hull on the side y >= 0
                bool below = false;
                for (const auto& h : hull)
                    below = below || A(h).y < 0;
                if (below) {
                    affine2 F;
                    F.d = -1;
                    A = F.after(A);
                }
                std::optional<big_int> ymin;
                for (const auto& h : pts) {
                    const auto y = A(h).y;
                    if (y > 0 && (!ymin || y < *ymin))
                        ymin = y;
                }
                for (const auto& h : pts) {
                    const auto ph = A(h);
                    if (ph.y != *ymin)
                        continue;
                    affine2 Sh;
                    Sh.b = -floor_div(ph.x, *ymin);
                    candidates.push_back(Sh.after(A));
                }
            }
    }

    canonical_result best;
    for (const auto& c0 : candidates) {
        const affine2 c = translate_min_to_origin(c0, support);
        const auto key = apply_key(c, support);
        if (best.transforms.empty() || key < best.key) {
            best.key = key;
            best.transforms = {c};
        } else if (key == best.key) {
            best.transforms.push_back(c);
        }
    }
    return best;
}

inline canonical_result canonical_form(const std::vector<point2>& points)
{
    std::map<point2, std::size_t> support;
    for (const auto& p : points)
        ++support[p];
    return canonical_form(support);
}

struct toric_diagram {
    std::vector<point2> raw_points; // height-1 slice of chi_M, indexed by matching id
    std::vector<point2> points;     // canonical coordinates, indexed by matching id
    affine2 transform;              // raw -> canonical
    canonical_key key;
    std::vector<point2> hull;       // canonical coordinates, counterclockwise
    std::vector<std::size_t> extremal_ids;

    [[nodiscard]] std::map<point2, std::vector<std::size_t>> support() const
    {
        std::map<point2, std::vector<std::size_t>> s;
        for (std::size_t k = 0; k < points.size(); ++k)
            s[points[k]].push_back(k);
        return s;
    }
};

inline std::vector<std::size_t> extremal_matchings(const toric_diagram& d)
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < d.points.size(); ++k)
        if (std::find(d.hull.begin(), d.hull.end(), d.points[k]) != d.hull.end())
            out.push_back(k);
    return out;
}

inline toric_diagram make_toric_diagram(const std::vector<perfect_matching>& ms)
{
    require(!ms.empty(), error_code::empty_diagram, "tiling has no perfect matchings");
    toric_diagram d;
    for (const auto& m : ms) {
        require(m.chi_M.size() == 3 && m.chi_M[2] == 1, error_code::internal,
                "matching " + matching_label(m.id) + " does not lie at height 1");
        d.raw_points.push_back({m.chi_M[0], m.chi_M[1]});
    }
    const auto cf = canonical_form(d.raw_points);
    d.key = cf.key;
    d.transform = cf.transforms.front();
    for (const auto& p : d.raw_points)
        d.points.push_back(d.transform(p));
    d.hull = convex_hull(d.points);
    d.extremal_ids = extremal_matchings(d);
    return d;
}

} // namespace branetile
