#pragma once

// The toric quotient route: the fan of X(M, P^theta cut with M_Q) from the
// M-stable faces of P^theta, and descent of support functions along it.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "fan.hpp"
#include "lattice.hpp"
#include "matchings.hpp"
#include "polyhedra.hpp"

namespace branetile {

struct quotient_result {
    polyhedron P_theta;
    polyhedron P_M;                        // P^theta cut with M_Q, in M coordinates
    std::vector<poly_face> faces;               // of P^theta
    std::vector<poly_face> faces_M;             // of P_M
    std::vector<std::size_t> facet_matching; // facet of P^theta -> matching id
    std::vector<m_stable_face> stable;
    std::vector<std::vector<std::size_t>> cone_matchings; // per stable face: tight matchings
    std::vector<std::size_t> stable_face_M;                // per stable face: F_M in faces_M
    fan quotient;
};

namespace detail {

inline std::vector<std::size_t> tight_at(const polyhedron& p, const rational_vector& x)
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < p.facets.size(); ++k) {
        rational s = rational(p.facets[k][0]);
        for (std::size_t j = 0; j < p.dim; ++j)
            s += rational(p.facets[k][j + 1]) * x[j];
        if (s == 0)
            out.push_back(k);
    }
    return out;
}

} // namespace detail

inline std::vector<std::size_t> facet_matchings(const polyhedron& p, const std::vector<perfect_matching>& ms)
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < p.facets.size(); ++k) {
        const auto n = p.facet_normal(k);
        std::size_t found = ms.size();
        for (const auto& m : ms)
            if (m.chi == n)
                found = m.id;
        require(found < ms.size(), error_code::internal,
                "facet normal " + to_string(n) + " is not the functional of a perfect matching");
        out.push_back(found);
    }
    return out;
}

// N^s(P_M) = {N_{F_M} P_M : F M-stable}, each cone checked to be the
// bijective image of N_F P under i^*.
inline quotient_result quotient_fan(const polyhedron& P_theta, const lattice_tower& t,
                                    const std::vector<perfect_matching>& ms)
{
    quotient_result r;
    r.P_theta = P_theta;
    r.facet_matching = facet_matchings(P_theta, ms);
    r.faces = enumerate_faces(P_theta);
    r.stable = m_stable_faces(P_theta, r.faces, t);
    r.P_M = slice_by_M(P_theta, t);
    r.faces_M = enumerate_faces(r.P_M);
    std::map<std::vector<std::size_t>, std::size_t> by_tight;
    for (std::size_t k = 0; k < r.faces_M.size(); ++k)
        by_tight[r.faces_M[k].facets] = k;

    std::map<std::size_t, int_vector> rays;
    std::set<std::vector<std::size_t>> cones;
    for (const auto& s : r.stable) {
        const auto& F = r.faces[s.face];
        std::vector<std::size_t> labels;
        std::vector<int_vector> nf, image;
        for (auto k : F.facets) {
            labels.push_back(r.facet_matching[k]);
            nf.push_back(P_theta.facet_normal(k));
            image.push_back(t.restrict_to_M(P_theta.facet_normal(k)));
        }
        std::sort(labels.begin(), labels.end());
        auto it = by_tight.find(detail::tight_at(r.P_M, s.m_point));
        if (it == by_tight.end())
            fail(error_code::bijection_failure, "F cut with M_Q is not a face of P_M");
        const auto& FM = r.faces_M[it->second];
        std::vector<int_vector> nfm;
        for (auto k : FM.facets)
            nfm.push_back(r.P_M.facet_normal(k));
        if (rank_of_vectors(nf, t.rank_Lambda) != rank_of_vectors(image, 3))
            fail(error_code::bijection_failure, "i^* is not injective on a normal cone");
        if (extreme_rays(3, image) != extreme_rays(3, nfm))
            fail(error_code::bijection_failure, "i^*(N_F) differs from N_{F_M}");
        r.cone_matchings.push_back(labels);
        r.stable_face_M.push_back(it->second);
        cones.insert(labels);
        for (auto id : labels)
            rays[id] = ms[id].chi_M;
    }
    r.quotient = make_fan(std::move(rays), cones);
    verify_fan(r.quotient);
    return r;
}

inline quotient_result quotient_route(const lattice_tower& t, const std::vector<perfect_matching>& ms,
                                      const int_vector& theta)
{
    const auto P = arrow_cone(t);
    return quotient_fan(shift_by_stability(P, t, theta).shifted, t, ms);
}

// ---------------------------------------------------------------------------
// Support functions

// Linear on each cone of N(P^theta), keyed by the cone's tight matchings.
struct support_function {
    std::map<std::vector<std::size_t>, int_vector> linear;
};

inline support_function support_function_of_weight(const quotient_result& r, const int_vector& l)
{
    support_function h;
    for (const auto& F : r.faces) {
        std::vector<std::size_t> key;
        for (auto k : F.facets)
            key.push_back(r.facet_matching[k]);
        std::sort(key.begin(), key.end());
        h.linear[key] = l;
    }
    return h;
}

// From values on the rays chi_I of N(P^theta); fails if not Cartier.
inline support_function support_function_from_divisor(const quotient_result& r, const std::vector<perfect_matching>& ms,
                                                      const std::map<std::size_t, big_int>& values)
{
    support_function h;
    const std::size_t n = r.P_theta.dim;
    for (const auto& F : r.faces) {
        std::vector<std::size_t> key;
        for (auto k : F.facets)
            key.push_back(r.facet_matching[k]);
        std::sort(key.begin(), key.end());
        int_matrix A(key.size(), n);
        int_vector b;
        for (std::size_t j = 0; j < key.size(); ++j) {
            for (std::size_t c = 0; c < n; ++c)
                A(j, c) = ms[key[j]].chi[c];
            b.push_back(values.at(key[j]));
        }
        const auto l = key.empty() ? std::optional<int_vector>(zero_vector(n)) : integer_solve(A, b);
        require(l.has_value(), error_code::internal, "divisor is not Cartier on a cone of N(P)");
        h.linear[key] = *l;
    }
    return h;
}

struct descended_support {
    std::map<std::vector<std::size_t>, int_vector> m; // per quotient cone, m_sigma in M
    std::map<std::size_t, big_int> ray_values;        // h'(chi-bar_I) per ray
};

// h'(y) = h((i^*_F)^{-1} y): on N_{F_M}, m_sigma in M with l_sigma - m_sigma in sigma^perp.
inline descended_support descend_support_function(const support_function& h, const quotient_result& r,
                                                  const lattice_tower& t, const std::vector<perfect_matching>& ms)
{
    descended_support out;
    const std::size_t n = t.rank_Lambda;
    for (std::size_t s = 0; s < r.stable.size(); ++s) {
        const auto& key = r.cone_matchings[s];
        const auto it = h.linear.find(key);
        require(it != h.linear.end(), error_code::internal, "support function misses a cone");
        int_matrix N(key.size(), n);
        for (std::size_t j = 0; j < key.size(); ++j)
            for (std::size_t c = 0; c < n; ++c)
                N(j, c) = ms[key[j]].chi[c];
        const int_matrix K = key.empty() ? int_matrix::identity(n) : integer_kernel(N);
        int_matrix A(n, 3 + K.cols());
        for (std::size_t row = 0; row < n; ++row) {
            for (std::size_t c = 0; c < 3; ++c)
                A(row, c) = t.i(row, c);
            for (std::size_t c = 0; c < K.cols(); ++c)
                A(row, 3 + c) = K(row, c);
        }
        if (!spans_lattice(A))
            fail(error_code::free_action, "(sigma^perp cut with Lambda) + M is a proper sublattice of Lambda");
        const auto z = integer_solve(A, it->second);
        require(z.has_value(), error_code::internal, "no m_sigma found");
        const int_vector m(z->begin(), z->begin() + 3);
        out.m[key] = m;
        for (auto id : key) {
            const big_int v = dot(m, ms[id].chi_M);
            auto [pos, inserted] = out.ray_values.emplace(id, v);
            require(inserted || pos->second == v, error_code::internal,
                    "descended support function disagrees on ray " + matching_label(id));
        }
    }
    return out;
}

} // namespace branetile
