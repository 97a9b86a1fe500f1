#pragma once

// King stability for the dimension vector (1, ..., 1): genericity,
// W-compatible cosupports, stable subsets and the chamber decomposition.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cone.hpp"
#include "error.hpp"
#include "int_matrix.hpp"
#include "matchings.hpp"
#include "tiling.hpp"

namespace branetile {

using vertex_mask = std::uint64_t;

inline vertex_mask full_mask(std::size_t n) { return n >= 64 ? ~vertex_mask{0} : (vertex_mask{1} << n) - 1; }

inline bool in_mask(vertex_mask s, std::size_t v) { return (s >> v) & 1u; }

inline big_int theta_of(const int_vector& theta, vertex_mask s)
{
    big_int t = 0;
    for (std::size_t v = 0; v < theta.size(); ++v)
        if (in_mask(s, v))
            t += theta[v];
    return t;
}

inline void check_theta(const quiver_on_torus& q, const int_vector& theta)
{
    require(theta.size() == q.num_vertices(), error_code::invalid_theta,
            "theta has " + std::to_string(theta.size()) + " entries, expected " + std::to_string(q.num_vertices()));
    big_int s = 0;
    for (const auto& x : theta)
        s += x;
    require(s == 0, error_code::invalid_theta, "theta entries must sum to zero");
}

// theta(S) != 0 for every proper nonempty S; vacuous for a single vertex.
inline bool is_generic(const int_vector& theta)
{
    const std::size_t n = theta.size();
    require(n < 63, error_code::invalid_theta, "too many vertices");
    for (vertex_mask s = 1; s < full_mask(n); ++s)
        if (theta_of(theta, s) == 0)
            return false;
    return true;
}

inline void require_generic(const quiver_on_torus& q, const int_vector& theta)
{
    check_theta(q, theta);
    require(is_generic(theta), error_code::nongeneric_theta, "theta " + to_string(theta) + " is not generic");
}

namespace detail {

// Arrows of face f other than one occurrence of a.
inline std::vector<std::size_t> face_complement(const quiver_on_torus& q, std::size_t f, std::size_t a)
{
    std::vector<std::size_t> out = q.faces[f].cycle;
    auto it = std::find(out.begin(), out.end(), a);
    if (it != out.end())
        out.erase(it);
    return out;
}

} // namespace detail

// The 0/1 representation with X_b = 0 exactly for b in I satisfies every
// relation dW/da: the two face-complement paths at a either both meet I or
// neither does.
inline bool is_w_compatible(const quiver_on_torus& q, const index_set& I)
{
    const auto af = q.arrow_faces();
    auto meets = [&](const std::vector<std::size_t>& p) {
        return std::any_of(p.begin(), p.end(), [&](std::size_t b) { return I.test(b); });
    };
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
        const auto [fp, fm] = af[a];
        require(fp < q.num_faces() && fm < q.num_faces(), error_code::invalid_tiling,
                "arrow '" + q.arrows[a].id + "' is not in one face of each sign");
        if (meets(detail::face_complement(q, fp, a)) != meets(detail::face_complement(q, fm, a)))
            return false;
    }
    return true;
}

// Vertex sets reachable from v along arrows not in I.
inline std::vector<vertex_mask> forward_closures(const quiver_on_torus& q, const index_set& I)
{
    const std::size_t n = q.num_vertices();
    std::vector<vertex_mask> cl(n);
    for (std::size_t v = 0; v < n; ++v) {
        vertex_mask s = vertex_mask{1} << v;
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t a = 0; a < q.num_arrows(); ++a)
                if (!I.test(a) && in_mask(s, q.arrows[a].src) && !in_mask(s, q.arrows[a].tgt)) {
                    s |= vertex_mask{1} << q.arrows[a].tgt;
                    grew = true;
                }
        }
        cl[v] = s;
    }
    return cl;
}

// Supports of proper nonzero submodules of X_I: proper nonempty vertex sets
// closed under arrows not in I (unions of forward closures). Sorted.
inline std::vector<vertex_mask> submodule_supports(const quiver_on_torus& q, const index_set& I)
{
    const std::size_t n = q.num_vertices();
    require(n < 63, error_code::invalid_tiling, "too many vertices");
    const auto cl = forward_closures(q, I);
    std::set<vertex_mask> closed{0};
    for (const auto c : cl) {
        std::set<vertex_mask> add;
        for (const auto s : closed)
            add.insert(s | c);
        closed.insert(add.begin(), add.end());
    }
    closed.erase(0);
    closed.erase(full_mask(n));
    return {closed.begin(), closed.end()};
}

inline bool is_theta_stable(const quiver_on_torus& q, const index_set& I, const int_vector& theta)
{
    require_generic(q, theta);
    for (const auto s : submodule_supports(q, I))
        if (theta_of(theta, s) <= 0)
            return false;
    return true;
}

struct stable_subset {
    index_set arrows;
    std::vector<std::size_t> generators;          // matchings whose union this is
    std::vector<std::size_t> matchings_contained; // every perfect matching J with J subset of I
    std::vector<std::size_t> rays;                // stable matchings contained
    std::size_t cone_dim = 0;
};

inline std::vector<std::size_t> stable_matching_ids(const quiver_on_torus& q, const int_vector& theta,
                                                    const std::vector<perfect_matching>& ms)
{
    require_generic(q, theta);
    std::vector<std::size_t> out;
    for (const auto& m : ms)
        if (is_theta_stable(q, m.arrows, theta))
            out.push_back(m.id);
    return out;
}

// The empty set, every stable matching, and every W-compatible stable union
// of two or three stable matchings; deduplicated by arrow set.
inline std::vector<stable_subset> enumerate_stable_subsets(const quiver_on_torus& q, const int_vector& theta,
                                                           const std::vector<perfect_matching>& ms)
{
    const auto st = stable_matching_ids(q, theta, ms);
    std::vector<stable_subset> out;
    std::set<index_set> seen;

    auto consider = [&](const std::vector<std::size_t>& gens) {
        index_set I(q.num_arrows());
        for (auto g : gens)
            I |= ms[g].arrows;
        if (seen.count(I))
            return;
        if (!is_w_compatible(q, I) || !is_theta_stable(q, I, theta))
            return;
        seen.insert(I);
        stable_subset s;
        s.arrows = I;
        s.generators = gens;
        std::vector<int_vector> pts;
        for (const auto& m : ms)
            if (m.arrows.is_subset_of(I)) {
                s.matchings_contained.push_back(m.id);
                if (std::find(st.begin(), st.end(), m.id) != st.end()) {
                    s.rays.push_back(m.id);
                    pts.push_back(m.chi_M);
                }
            }
        s.cone_dim = rank_of_vectors(pts, 3);
        out.push_back(std::move(s));
    };

    consider({});
    for (std::size_t i = 0; i < st.size(); ++i)
        consider({st[i]});
    for (std::size_t i = 0; i < st.size(); ++i)
        for (std::size_t j = i + 1; j < st.size(); ++j)
            consider({st[i], st[j]});
    for (std::size_t i = 0; i < st.size(); ++i)
        for (std::size_t j = i + 1; j < st.size(); ++j)
            for (std::size_t k = j + 1; k < st.size(); ++k)
                consider({st[i], st[j], st[k]});
    return out;
}

// ---------------------------------------------------------------------------
// Chambers

struct chamber {
    int_vector representative;        // theta in Z^{Q0}
    std::vector<int> sign_vector;     // sign of theta(S) for each hyperplane subset
    std::vector<std::size_t> stable_matchings;
    std::vector<std::vector<std::size_t>> stable_pairs;
    std::vector<std::vector<std::size_t>> stable_triples;
    std::vector<stable_subset> stable_subsets;
    bool representative_minimal = true; // false when the search cap forced the fallback point
};

struct chamber_report {
    std::vector<vertex_mask> hyperplanes; // subsets S of all vertices but the last
    std::vector<chamber> chambers;
    std::vector<std::vector<std::size_t>> classes; // chambers with identical stable structure
    bool trivial = false; // a single vertex: B = 0 and the quotient is unique
};

inline std::vector<vertex_mask> stability_hyperplanes(std::size_t n)
{
    std::vector<vertex_mask> hs;
    if (n <= 1)
        return hs;
    for (vertex_mask s = 1; s <= full_mask(n - 1); ++s)
        hs.push_back(s);
    return hs;
}

inline std::vector<int> sign_vector_of(const int_vector& theta, const std::vector<vertex_mask>& hs)
{
    std::vector<int> sv;
    for (const auto s : hs) {
        const big_int v = theta_of(theta, s);
        sv.push_back(v > 0 ? 1 : (v < 0 ? -1 : 0));
    }
    return sv;
}

// Integer point of the open chamber with smallest L1 norm (ties: lexicographic),
// searched in the box bounded by a known interior point.
inline std::pair<int_vector, bool> minimal_representative(const std::vector<vertex_mask>& hs, const std::vector<int>& sv,
                                                           const int_vector& start, std::size_t n,
                                                           std::size_t cap = 2000000)
{
    const std::size_t m = n - 1;
    big_int R = 0;
    for (const auto& x : start)
        R = std::max(R, abs_value(x));
    big_int volume = 1;
    for (std::size_t k = 0; k < m; ++k)
        volume *= 2 * R + 1;
    if (volume > cap)
        return {start, false};
    const long long r = R.convert_to<long long>();
    std::vector<long long> cur(m, -r);
    std::optional<int_vector> best;
    big_int best_l1 = 0;
    for (;;) {
        int_vector theta(n);
        big_int last = 0, l1 = 0;
        for (std::size_t k = 0; k < m; ++k) {
            theta[k] = cur[k];
            last -= cur[k];
            l1 += abs_value(theta[k]);
        }
        theta[m] = last;
        l1 += abs_value(last);
        if (sign_vector_of(theta, hs) == sv && (!best || l1 < best_l1 || (l1 == best_l1 && theta < *best))) {
            best = theta;
            best_l1 = l1;
        }
        std::size_t k = 0;
        while (k < m && cur[k] == r)
            cur[k++] = -r;
        if (k == m)
            break;
        ++cur[k];
    }
    require(best.has_value(), error_code::internal, "chamber search lost its interior point");
    return {*best, true};
}

inline void fill_stable_structure(const quiver_on_torus& q, const std::vector<perfect_matching>& ms, chamber& c)
{
    c.stable_matchings = stable_matching_ids(q, c.representative, ms);
    c.stable_subsets = enumerate_stable_subsets(q, c.representative, ms);
    for (const auto& s : c.stable_subsets) {
        if (s.generators.size() == 2)
            c.stable_pairs.push_back(s.generators);
        else if (s.generators.size() == 3)
            c.stable_triples.push_back(s.generators);
    }
}

inline chamber_report chamber_decomposition(const quiver_on_torus& q, const std::vector<perfect_matching>& ms)
{
    chamber_report rep;
    const std::size_t n = q.num_vertices();
    require(n >= 1 && n < 20, error_code::invalid_tiling, "chamber decomposition supports 1..19 vertices");
    if (n == 1) {
        rep.trivial = true;
        return rep;
    }
    rep.hyperplanes = stability_hyperplanes(n);
    const std::size_t m = n - 1;
    std::vector<int_vector> hrows;
    for (const auto s : rep.hyperplanes) {
        int_vector r(m);
        for (std::size_t k = 0; k < m; ++k)
            r[k] = in_mask(s, k) ? 1 : 0;
        hrows.push_back(r);
    }

    std::vector<std::vector<int>> partial{{}};
    for (std::size_t h = 0; h < hrows.size(); ++h) {
        std::vector<std::vector<int>> next;
        for (const auto& sv : partial)
            for (int sg : {+1, -1}) {
                std::vector<int_vector> rows;
                for (std::size_t k = 0; k < sv.size(); ++k)
                    rows.push_back(sv[k] > 0 ? hrows[k] : big_int(-1) * hrows[k]);
                rows.push_back(sg > 0 ? hrows[h] : big_int(-1) * hrows[h]);
                if (strict_interior_point(rows, m)) {
                    auto s2 = sv;
                    s2.push_back(sg);
                    next.push_back(std::move(s2));
                }
            }
        partial = std::move(next);
    }

    for (const auto& sv : partial) {
        std::vector<int_vector> rows;
        for (std::size_t k = 0; k < sv.size(); ++k)
            rows.push_back(sv[k] > 0 ? hrows[k] : big_int(-1) * hrows[k]);
        const auto x = strict_interior_point(rows, m);
        require(x.has_value(), error_code::internal, "chamber lost feasibility");
        int_vector red = detail::integer_direction(*x);
        int_vector start(n);
        big_int last = 0;
        for (std::size_t k = 0; k < m; ++k) {
            start[k] = red[k];
            last -= red[k];
        }
        start[m] = last;
        chamber c;
        auto [theta, minimal] = minimal_representative(rep.hyperplanes, sv, start, n);
        c.representative = theta;
        c.representative_minimal = minimal;
        c.sign_vector = sv;
        fill_stable_structure(q, ms, c);
        rep.chambers.push_back(std::move(c));
    }

    std::map<std::set<index_set>, std::size_t> cls;
    for (std::size_t k = 0; k < rep.chambers.size(); ++k) {
        std::set<index_set> key;
        for (const auto& s : rep.chambers[k].stable_subsets)
            key.insert(s.arrows);
        auto it = cls.find(key);
        if (it == cls.end()) {
            cls.emplace(key, rep.classes.size());
            rep.classes.push_back({k});
        } else {
            rep.classes[it->second].push_back(k);
        }
    }
    return rep;
}

} // namespace branetile
