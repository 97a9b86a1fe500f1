#pragma once

// Fans in M^vee with rays labeled by perfect matchings: the fan of the moduli
// space from stable subsets, fan axioms, smoothness and the triangulation of
// the toric diagram.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cone.hpp"
#include "error.hpp"
#include "matchings.hpp"
#include "polyhedra.hpp"
#include "stability.hpp"

namespace branetile {

struct fan_ray {
    std::size_t matching = 0;
    int_vector generator;
};

struct fan_cone {
    std::vector<std::size_t> rays; // sorted indices into fan::rays
};

struct fan {
    std::vector<fan_ray> rays; // sorted by matching id
    std::vector<fan_cone> cones;

    [[nodiscard]] std::vector<std::size_t> labels(const fan_cone& c) const
    {
        std::vector<std::size_t> out;
        for (auto r : c.rays)
            out.push_back(rays[r].matching);
        return out;
    }

    // Cones as sets of matching ids.
    [[nodiscard]] std::set<std::vector<std::size_t>> labeled_cones() const
    {
        std::set<std::vector<std::size_t>> out;
        for (const auto& c : cones)
            out.insert(labels(c));
        return out;
    }

    [[nodiscard]] std::vector<std::size_t> ray_matchings() const
    {
        std::vector<std::size_t> out;
        for (const auto& r : rays)
            out.push_back(r.matching);
        return out;
    }

    [[nodiscard]] std::vector<int_vector> generators(const fan_cone& c) const
    {
        std::vector<int_vector> out;
        for (auto r : c.rays)
            out.push_back(rays[r].generator);
        return out;
    }

    [[nodiscard]] std::size_t dimension(const fan_cone& c) const { return rank_of_vectors(generators(c), 3); }

    [[nodiscard]] std::vector<std::size_t> maximal_cones() const
    {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < cones.size(); ++k) {
            bool maximal = true;
            for (std::size_t j = 0; j < cones.size() && maximal; ++j)
                if (j != k && cones[j].rays.size() > cones[k].rays.size() &&
                    std::includes(cones[j].rays.begin(), cones[j].rays.end(), cones[k].rays.begin(),
                                  cones[k].rays.end()))
                    maximal = false;
            if (maximal)
                out.push_back(k);
        }
        return out;
    }
};

// Normalizes orderings: rays by matching id, cones by (size, rays).
inline fan make_fan(std::map<std::size_t, int_vector> rays, const std::set<std::vector<std::size_t>>& cones)
{
    fan f;
    std::map<std::size_t, std::size_t> index;
    for (auto& [m, g] : rays) {
        index[m] = f.rays.size();
        f.rays.push_back({m, std::move(g)});
    }
    std::vector<std::vector<std::size_t>> cs;
    for (const auto& c : cones) {
        std::vector<std::size_t> idx;
        for (auto m : c) {
            auto it = index.find(m);
            require(it != index.end(), error_code::fan_axiom, "cone uses " + matching_label(m) + ", which is not a ray");
            idx.push_back(it->second);
        }
        std::sort(idx.begin(), idx.end());
        cs.push_back(idx);
    }
    std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    for (auto& c : cs)
        f.cones.push_back({std::move(c)});
    return f;
}

inline std::string cone_name(const fan& f, const fan_cone& c)
{
    std::string s = "{";
    for (auto m : f.labels(c)) {
        if (s.size() > 1)
            s += ",";
        s += matching_label(m);
    }
    return s + "}";
}

// Ray subsets of c spanning its faces (including the apex).
inline std::set<std::vector<std::size_t>> cone_faces(const fan& f, const fan_cone& c)
{
    std::set<std::vector<std::size_t>> out;
    const auto p = polyhedron::from_generators(3, {rational_vector(3, rational(0))}, f.generators(c));
    for (const auto& fc : enumerate_faces(p)) {
        std::vector<std::size_t> rs;
        for (auto r : c.rays) {
            const auto h = detail::homogenize_direction(f.rays[r].generator);
            if (std::all_of(fc.facets.begin(), fc.facets.end(), [&](std::size_t k) { return dot(p.facets[k], h) == 0; }))
                rs.push_back(r);
        }
        out.insert(rs);
    }
    return out;
}

// First fan-axiom violation found, if any.
inline std::optional<std::string> fan_violation(const fan& f)
{
    for (std::size_t a = 0; a < f.rays.size(); ++a) {
        if (f.rays[a].generator.size() != 3 || is_zero(f.rays[a].generator))
            return "ray " + matching_label(f.rays[a].matching) + " is not a nonzero vector in M^vee";
        for (std::size_t b = a + 1; b < f.rays.size(); ++b)
            if (primitive(f.rays[a].generator) == primitive(f.rays[b].generator))
                return "rays " + matching_label(f.rays[a].matching) + " and " + matching_label(f.rays[b].matching) +
                       " coincide";
    }
    std::set<std::vector<std::size_t>> present;
    for (const auto& c : f.cones)
        present.insert(c.rays);
    std::vector<std::set<std::vector<std::size_t>>> faces;
    std::vector<cone_constraints> hs;
    for (const auto& c : f.cones) {
        auto fs = cone_faces(f, c);
        for (auto r : c.rays)
            if (!fs.count({r}))
                return "ray " + matching_label(f.rays[r].matching) + " is not extremal in cone " + cone_name(f, c);
        for (const auto& s : fs)
            if (!present.count(s))
                return "a face of cone " + cone_name(f, c) + " is missing from the fan";
        faces.push_back(std::move(fs));
        hs.push_back(cone_from_generators(3, f.generators(c)));
    }
    for (std::size_t a = 0; a < f.cones.size(); ++a)
        for (std::size_t b = a + 1; b < f.cones.size(); ++b) {
            std::vector<std::size_t> common;
            std::set_intersection(f.cones[a].rays.begin(), f.cones[a].rays.end(), f.cones[b].rays.begin(),
                                  f.cones[b].rays.end(), std::back_inserter(common));
            const std::string pair = "cones " + cone_name(f, f.cones[a]) + " and " + cone_name(f, f.cones[b]);
            if (!faces[a].count(common) || !faces[b].count(common))
                return pair + " share rays that do not span a common face";
            auto ineq = hs[a].inequalities;
            ineq.insert(ineq.end(), hs[b].inequalities.begin(), hs[b].inequalities.end());
            auto eqs = hs[a].equations;
            eqs.insert(eqs.end(), hs[b].equations.begin(), hs[b].equations.end());
            const auto meet = cone_from_constraints(3, ineq, eqs);
            std::vector<int_vector> cg;
            for (auto r : common)
                cg.push_back(f.rays[r].generator);
            const auto ch = cone_from_generators(3, cg);
            if (!meet.lineality.empty())
                return pair + " meet in a non-pointed set";
            for (const auto& r : meet.rays)
                if (!in_cone(ch, r))
                    return pair + " intersect in a set that is not a common face";
        }
    return std::nullopt;
}

inline void verify_fan(const fan& f)
{
    if (auto v = fan_violation(f))
        fail(error_code::fan_axiom, *v);
}

// Every maximal cone is generated by part of a Z-basis of M^vee.
inline bool check_smooth(const fan& f)
{
    for (auto k : f.maximal_cones()) {
        const auto gens = f.generators(f.cones[k]);
        if (gens.empty())
            continue;
        const auto snf = smith_normal_form(int_matrix::from_rows(gens, 3));
        if (snf.rank != gens.size() || !snf.unimodular_factors())
            return false;
    }
    return true;
}

// Rays from the stable matchings, cones from W-compatible stable unions.
inline fan moduli_fan(const lattice_tower& t, const std::vector<perfect_matching>& ms, const int_vector& theta)
{
    const auto& q = t.quiver;
    const auto subsets = enumerate_stable_subsets(q, theta, ms);
    const auto stable = stable_matching_ids(q, theta, ms);
    std::map<std::size_t, int_vector> rays;
    for (auto id : stable) {
        const auto& g = ms[id].chi_M;
        if (content(g) != 1)
            fail(error_code::non_primitive_ray, "ray " + matching_label(id) + " = " + to_string(g) + " is not primitive");
        require(dot(g, t.omega_M) == 1, error_code::internal, "ray " + matching_label(id) + " is not at height 1");
        rays[id] = g;
    }
    std::set<std::vector<std::size_t>> cones;
    for (const auto& s : subsets) {
        for (auto id : s.matchings_contained)
            require(std::binary_search(stable.begin(), stable.end(), id), error_code::fan_axiom,
                    "stable subset contains the unstable matching " + matching_label(id));
        cones.insert(s.matchings_contained);
    }
    auto f = make_fan(std::move(rays), cones);
    verify_fan(f);
    return f;
}

// The single cone over the toric diagram and its faces (Spec C[M+]).
inline fan affine_fan(const std::vector<perfect_matching>& ms, const toric_diagram& d)
{
    std::map<std::size_t, int_vector> rays;
    std::set<point2> used;
    for (auto id : d.extremal_ids)
        if (used.insert(d.points[id]).second)
            rays[id] = ms[id].chi_M;
    std::vector<std::size_t> all;
    for (const auto& [id, _] : rays)
        all.push_back(id);
    fan tmp = make_fan(rays, {all});
    std::set<std::vector<std::size_t>> cones;
    for (const auto& fs : cone_faces(tmp, tmp.cones.front()))
        cones.insert(tmp.labels({fs}));
    return make_fan(rays, cones);
}

// ---------------------------------------------------------------------------
// Triangulations

struct triangulation {
    std::vector<std::array<std::size_t, 3>> triangles; // matching ids
    std::vector<std::array<std::size_t, 2>> edges;
    std::map<std::size_t, point2> vertices; // raw diagram coordinates
};

inline triangulation make_triangulation(const fan& f)
{
    require(check_smooth(f), error_code::not_smooth, "fan is not smooth");
    triangulation t;
    for (const auto& r : f.rays)
        t.vertices[r.matching] = {r.generator[0], r.generator[1]};
    for (const auto& c : f.cones) {
        const auto ls = f.labels(c);
        if (ls.size() == 3)
            t.triangles.push_back({ls[0], ls[1], ls[2]});
        else if (ls.size() == 2)
            t.edges.push_back({ls[0], ls[1]});
    }
    std::sort(t.triangles.begin(), t.triangles.end());
    std::sort(t.edges.begin(), t.edges.end());
    return t;
}

struct triangulation_report {
    bool ok = true;
    std::vector<std::string> problems;
    big_int hull_area = 0;
};

inline triangulation_report check_triangulation(const triangulation& T, const toric_diagram& d)
{
    triangulation_report rep;
    auto problem = [&](std::string s) {
        rep.ok = false;
        rep.problems.push_back(std::move(s));
    };
    const auto hull = convex_hull(d.raw_points);
    rep.hull_area = normalized_area(hull);
    const auto lattice = hull_lattice_points(hull);
    std::set<point2> used;
    for (const auto& [_, p] : T.vertices)
        used.insert(p);
    if (used != std::set<point2>(lattice.begin(), lattice.end()))
        problem("triangle vertices differ from the lattice points of the hull");
    if (T.vertices.size() != used.size())
        problem("two vertices share a point");
    if (big_int(T.triangles.size()) != rep.hull_area)
        problem("triangle count " + std::to_string(T.triangles.size()) + " differs from the normalized area");

    std::map<std::array<std::size_t, 2>, int> edge_use;
    for (const auto& tr : T.triangles) {
        const auto a = T.vertices.at(tr[0]), b = T.vertices.at(tr[1]), c = T.vertices.at(tr[2]);
        if (abs_value(cross(a, b, c)) != 1)
            problem("triangle is not unimodular");
        for (auto [u, v] : {std::pair{tr[0], tr[1]}, std::pair{tr[0], tr[2]}, std::pair{tr[1], tr[2]}})
            ++edge_use[{std::min(u, v), std::max(u, v)}];
    }
    auto on_boundary = [&](const point2& p, const point2& q) {
        for (std::size_t k = 0; k < hull.size(); ++k) {
            const auto& h0 = hull[k];
            const auto& h1 = hull[(k + 1) % hull.size()];
            if (cross(h0, h1, p) == 0 && cross(h0, h1, q) == 0)
                return true;
        }
        return hull.size() < 3;
    };
    for (const auto& [e, n] : edge_use) {
        if (n > 2)
            problem("an edge lies in more than two triangles");
        if (n == 1 && !on_boundary(T.vertices.at(e[0]), T.vertices.at(e[1])))
            problem("an interior edge lies in only one triangle");
    }
    std::set<std::array<std::size_t, 2>> e1(T.edges.begin(), T.edges.end()), e2;
    for (const auto& [e, _] : edge_use)
        e2.insert(e);
    if (e1 != e2)
        problem("edges of the fan differ from the triangle edges");
    return rep;
}

using triangulation_key = std::vector<std::array<point2, 3>>;

// Triangles in canonical diagram coordinates, minimized over the symmetries
// of the diagram; equal keys mean equivalent triangulations.
inline triangulation_key canonical_triangulation(const triangulation& T, const toric_diagram& d)
{
    const auto cf = canonical_form(d.raw_points);
    std::optional<triangulation_key> best;
    for (const auto& A : cf.transforms) {
        triangulation_key k;
        for (const auto& tr : T.triangles) {
            std::array<point2, 3> t{A(T.vertices.at(tr[0])), A(T.vertices.at(tr[1])), A(T.vertices.at(tr[2]))};
            std::sort(t.begin(), t.end());
            k.push_back(t);
        }
        std::sort(k.begin(), k.end());
        if (!best || k < *best)
            best = k;
    }
    return best.value_or(triangulation_key{});
}

// Triangles as raw point triples; identifies triangulations without symmetry.
inline triangulation_key raw_triangulation(const triangulation& T)
{
    triangulation_key k;
    for (const auto& tr : T.triangles) {
        std::array<point2, 3> t{T.vertices.at(tr[0]), T.vertices.at(tr[1]), T.vertices.at(tr[2])};
        std::sort(t.begin(), t.end());
        k.push_back(t);
    }
    std::sort(k.begin(), k.end());
    return k;
}

} // namespace branetile
