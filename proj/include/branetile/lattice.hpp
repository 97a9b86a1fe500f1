#pragma once

// The exact sequence 0 -> M -> Lambda -> B -> 0 attached to a quiver on a
// torus, and weak paths (words in arrows and their inverses).

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "int_matrix.hpp"
#include "tiling.hpp"

namespace branetile {

struct path_step {
    std::size_t arrow = 0;
    int exponent = +1;

    friend bool operator==(const path_step&, const path_step&) = default;
};

struct weak_path {
    std::size_t source = 0;
    std::vector<path_step> steps;

    [[nodiscard]] bool trivial() const noexcept { return steps.empty(); }

    friend bool operator==(const weak_path&, const weak_path&) = default;
};

inline weak_path trivial_path(std::size_t v) { return {v, {}}; }

inline std::size_t step_tail(const quiver_on_torus& q, const path_step& s)
{
    return s.exponent > 0 ? q.arrows[s.arrow].src : q.arrows[s.arrow].tgt;
}

inline std::size_t step_head(const quiver_on_torus& q, const path_step& s)
{
    return s.exponent > 0 ? q.arrows[s.arrow].tgt : q.arrows[s.arrow].src;
}

// Endpoint of u; throws if consecutive steps do not compose.
inline std::size_t path_target(const quiver_on_torus& q, const weak_path& u)
{
    std::size_t at = u.source;
    for (std::size_t k = 0; k < u.steps.size(); ++k) {
        const auto& s = u.steps[k];
        require(s.arrow < q.num_arrows(), error_code::noncomposable_path, "path step refers to an unknown arrow");
        require(s.exponent == 1 || s.exponent == -1, error_code::noncomposable_path, "path exponent must be +1 or -1");
        require(step_tail(q, s) == at, error_code::noncomposable_path,
                "path step " + std::to_string(k + 1) + " (" + q.arrows[s.arrow].id + (s.exponent < 0 ? "^-1" : "") +
                    ") does not start at vertex " + q.vertices[at]);
        at = step_head(q, s);
    }
    return at;
}

inline weak_path concatenate(const quiver_on_torus& q, const weak_path& u, const weak_path& v)
{
    require(path_target(q, u) == v.source, error_code::noncomposable_path, "paths do not compose");
    weak_path w = u;
    w.steps.insert(w.steps.end(), v.steps.begin(), v.steps.end());
    return w;
}

inline weak_path inverse_path(const quiver_on_torus& q, const weak_path& u)
{
    weak_path w{path_target(q, u), {}};
    for (auto it = u.steps.rbegin(); it != u.steps.rend(); ++it)
        w.steps.push_back({it->arrow, -it->exponent});
    return w;
}

// Signed arrow content |u| in Z^{Q1}.
inline int_vector path_content(const quiver_on_torus& q, const weak_path& u)
{
    path_target(q, u);
    int_vector c = zero_vector(q.num_arrows());
    for (const auto& s : u.steps)
        c[s.arrow] += s.exponent;
    return c;
}

// Accepted syntax: "e:<vertex>" for a trivial path, otherwise a comma or
// whitespace separated list of arrow ids, each optionally suffixed "^-1".
inline weak_path parse_path(const quiver_on_torus& q, const std::string& text)
{
    std::string t;
    for (char ch : text)
        if (ch != ' ' && ch != '\t')
            t += ch;
    require(!t.empty(), error_code::usage, "empty path");
    if (t.rfind("e:", 0) == 0)
        return trivial_path(q.vertex_index(t.substr(2)));
    weak_path u;
    std::stringstream ss(t);
    std::string tok;
    bool first = true;
    while (std::getline(ss, tok, ',')) {
        require(!tok.empty(), error_code::usage, "empty step in path '" + text + "'");
        int e = +1;
        if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
            e = -1;
            tok.resize(tok.size() - 3);
        }
        path_step s{q.arrow_index(tok), e};
        if (first)
            u.source = step_tail(q, s);
        first = false;
        u.steps.push_back(s);
    }
    path_target(q, u);
    return u;
}

inline std::string path_to_string(const quiver_on_torus& q, const weak_path& u)
{
    if (u.trivial())
        return "e:" + q.vertices[u.source];
    std::string out;
    for (std::size_t k = 0; k < u.steps.size(); ++k) {
        if (k)
            out += ',';
        out += q.arrows[u.steps[k].arrow].id;
        if (u.steps[k].exponent < 0)
            out += "^-1";
    }
    return out;
}

// Face cycle as a path starting at its first arrow.
inline weak_path face_path(const quiver_on_torus& q, std::size_t f)
{
    weak_path u{q.arrows[q.faces[f].cycle.front()].src, {}};
    for (auto a : q.faces[f].cycle)
        u.steps.push_back({a, +1});
    return u;
}

struct lattice_tower {
    quiver_on_torus quiver;
    std::size_t rank_Lambda = 0;
    std::size_t rank_M = 0;
    std::size_t rank_B = 0;

    // coordinates on Z + Z^{Q1} -> Lambda, and a section of it
    int_matrix pi;   // rank_Lambda x (1 + |Q1|)
    int_matrix lift; // (1 + |Q1|) x rank_Lambda, pi * lift = I

    int_matrix wt;          // rank_Lambda x |Q1|
    int_vector omega_bar;   // omega_Lambda(1)
    int_matrix d;           // |Q0| x rank_Lambda
    int_matrix i;           // rank_Lambda x 3, last column is omega_bar
    int_vector omega_M;     // (0, 0, 1)
    int_matrix proj_B;      // (|Q0|-1) x |Q0|

    [[nodiscard]] int_vector weight_of_arrow(std::size_t a) const { return wt.column(a); }

    // Lambda-dual coordinates of the functional on Z + Z^{Q1} given by phi.
    [[nodiscard]] int_vector descend_functional(const int_vector& phi) const { return lift.apply_left(phi); }

    // Restriction i^* of a functional on Lambda to M.
    [[nodiscard]] int_vector restrict_to_M(const int_vector& chi) const { return i.apply_left(chi); }

    // Coordinates in M of an element of Lambda lying in M, if it does.
    [[nodiscard]] std::optional<int_vector> to_M(const int_vector& lam) const { return integer_solve(i, lam); }

    [[nodiscard]] bool in_M(const int_vector& lam) const { return is_zero(d.apply(lam)); }
};

inline lattice_tower build_lattice_tower(const quiver_on_torus& q)
{
    const std::size_t n0 = q.num_vertices(), n1 = q.num_arrows(), n2 = q.num_faces();
    require(n0 > 0 && n1 > 0 && n2 > 0, error_code::invalid_tiling, "empty quiver");
    lattice_tower t;
    t.quiver = q;

    // relations F -> (1, -d2 F)
    int_matrix R(1 + n1, n2);
    for (std::size_t f = 0; f < n2; ++f) {
        R(0, f) = 1;
        for (auto a : q.faces[f].cycle)
            R(1 + a, f) -= 1;
    }
    const auto snf = smith_normal_form(R);
    require(snf.unimodular_factors(), error_code::torsion, "Lambda has torsion (invariant factors > 1)");
    const std::size_t r = snf.rank, N = 1 + n1;
    t.rank_Lambda = N - r;

    const int_matrix Uinv = unimodular_inverse(snf.U);
    const auto h = hermite_normal_form(snf.U.block(r, N, 0, N));
    t.pi = h.H;
    t.lift = Uinv.block(0, N, r, N) * unimodular_inverse(h.W);

    t.wt = t.pi.block(0, t.rank_Lambda, 1, N);
    t.omega_bar = t.pi.column(0);

    int_matrix D(n0, N);
    for (std::size_t a = 0; a < n1; ++a) {
        D(q.arrows[a].tgt, 1 + a) += 1;
        D(q.arrows[a].src, 1 + a) -= 1;
    }
    t.d = D * t.lift;

    const auto dsnf = smith_normal_form(t.d);
    require(dsnf.rank + 1 == n0 && dsnf.unimodular_factors(), error_code::invalid_tiling,
            "image of d is not the degree-zero lattice B");
    t.rank_B = n0 - 1;

    const int_matrix K = integer_kernel(t.d);
    t.rank_M = K.cols();
    require(t.rank_M == 3 && t.rank_Lambda == n0 + 2, error_code::invalid_tiling,
            "unexpected lattice ranks: rank Lambda = " + std::to_string(t.rank_Lambda) +
                ", rank M = " + std::to_string(t.rank_M));

    // re-basis M so that omega_M = (0,0,1)
    const auto x = integer_solve(K, t.omega_bar);
    require(x.has_value(), error_code::internal, "omega_bar does not lie in M");
    require(content(*x) == 1, error_code::internal, "omega_bar is not primitive in M");
    const auto xs = smith_normal_form(int_matrix::from_columns({*x}, 3));
    const int_matrix C0 = unimodular_inverse(xs.U);
    const big_int sgn = xs.V(0, 0);
    int_matrix C(3, 3);
    for (std::size_t k = 0; k < 3; ++k) {
        C(k, 0) = C0(k, 1);
        C(k, 1) = C0(k, 2);
        C(k, 2) = sgn * C0(k, 0);
    }
    t.i = K * C;
    t.omega_M = {0, 0, 1};
    require(t.i.column(2) == t.omega_bar, error_code::internal, "omega_M re-basis failed");

    t.proj_B = int_matrix(t.rank_B, n0);
    for (std::size_t k = 0; k < t.rank_B; ++k)
        t.proj_B(k, k) = 1;
    return t;
}

inline int_vector weight_of_path(const lattice_tower& t, const weak_path& u)
{
    return t.wt.apply(path_content(t.quiver, u));
}

namespace detail {

inline nlohmann::json matrix_json(const int_matrix& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c).convert_to<long long>());
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json vector_json(const int_vector& v)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& x : v)
        out.push_back(x.convert_to<long long>());
    return out;
}

} // namespace detail

inline std::string lattice_dump(const lattice_tower& t)
{
    nlohmann::ordered_json doc;
    doc["rank_Lambda"] = t.rank_Lambda;
    doc["rank_M"] = t.rank_M;
    doc["rank_B"] = t.rank_B;
    nlohmann::ordered_json wt;
    for (std::size_t a = 0; a < t.quiver.num_arrows(); ++a)
        wt[t.quiver.arrows[a].id] = detail::vector_json(t.wt.column(a));
    doc["wt"] = wt;
    doc["omega_Lambda"] = detail::vector_json(t.omega_bar);
    doc["d"] = detail::matrix_json(t.d);
    doc["i"] = detail::matrix_json(t.i);
    doc["omega_M"] = detail::vector_json(t.omega_M);
    doc["proj_B"] = detail::matrix_json(t.proj_B);
    return doc.dump(2) + "\n";
}

} // namespace branetile
