#pragma once

// Necessary conditions for a quiver with faces to be a brane tiling.
// Consistency in the full sense is not checked.

#include <cstddef>
#include <string>
#include <vector>

#include "matchings.hpp"
#include "tiling.hpp"

namespace branetile {

struct violation {
    std::string rule;
    std::string detail;
};

struct validation_report {
    bool ok = true;
    std::vector<violation> violations;
    bool nondegenerate = false;
    std::vector<std::string> unmatched_arrows; // arrows in no perfect matching

    [[nodiscard]] bool has(const std::string& rule) const
    {
        for (const auto& v : violations)
            if (v.rule == rule)
                return true;
        return false;
    }
};

inline validation_report validate(const quiver_on_torus& q)
{
    validation_report r;
    auto add = [&](std::string rule, std::string detail) { r.violations.push_back({std::move(rule), std::move(detail)}); };
    const std::size_t n0 = q.num_vertices(), n1 = q.num_arrows(), n2 = q.num_faces();

    bool refs_ok = true;
    for (const auto& a : q.arrows)
        if (a.src >= n0 || a.tgt >= n0) {
            add("vertex-reference", "arrow " + a.id + " refers to a missing vertex");
            refs_ok = false;
        }
    for (std::size_t f = 0; f < n2; ++f)
        for (auto a : q.faces[f].cycle)
            if (a >= n1) {
                add("arrow-reference", "face #" + std::to_string(f) + " refers to a missing arrow");
                refs_ok = false;
            }
    if (n0 == 0)
        add("nonempty", "quiver has no vertices");
    if (!refs_ok) {
        r.ok = false;
        return r;
    }

    std::vector<int> plus(n1, 0), minus(n1, 0);
    std::size_t total_length = 0;
    for (std::size_t f = 0; f < n2; ++f) {
        const auto& F = q.faces[f];
        const std::string name = "face #" + std::to_string(f);
        if (F.sign != 1 && F.sign != -1)
            add("face-sign", name + " has sign " + std::to_string(F.sign));
        if (F.cycle.empty()) {
            add("face-nonempty", name + " is empty");
            continue;
        }
        total_length += F.cycle.size();
        for (std::size_t k = 0; k < F.cycle.size(); ++k) {
            const auto& a = q.arrows[F.cycle[k]];
            const auto& b = q.arrows[F.cycle[(k + 1) % F.cycle.size()]];
            if (a.tgt != b.src) {
                add("face-cycle", name + ": arrow " + a.id + " ends at " + q.vertices[a.tgt] + " but " + b.id +
                                      " starts at " + q.vertices[b.src]);
            }
        }
        for (auto a : F.cycle)
            ++(F.sign > 0 ? plus : minus)[a];
    }
    for (std::size_t a = 0; a < n1; ++a)
        if (plus[a] != 1 || minus[a] != 1)
            add("arrow-faces", "arrow " + q.arrows[a].id + " lies in " + std::to_string(plus[a]) + " positive and " +
                                   std::to_string(minus[a]) + " negative faces");
    if (total_length != 2 * n1)
        add("face-length-sum", "total face length " + std::to_string(total_length) + " differs from 2|Q1| = " +
                                   std::to_string(2 * n1));
    const long long euler = static_cast<long long>(n0) - static_cast<long long>(n1) + static_cast<long long>(n2);
    if (euler != 0)
        add("euler", "|Q0| - |Q1| + |Q2| = " + std::to_string(euler) + ", expected 0");

    if (n0 > 0) {
        std::vector<bool> seen(n0, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (const auto& a : q.arrows)
                for (auto [x, y] : {std::pair{a.src, a.tgt}, std::pair{a.tgt, a.src}})
                    if (x == v && !seen[y]) {
                        seen[y] = true;
                        stack.push_back(y);
                    }
        }
        for (std::size_t v = 0; v < n0; ++v)
            if (!seen[v]) {
                add("connected", "vertex " + q.vertices[v] + " is not connected to vertex " + q.vertices[0]);
                break;
            }
    }

    r.ok = r.violations.empty();
    if (n2 > 0) {
        index_set covered(n1);
        for (const auto& s : enumerate_matching_sets(q))
            covered |= s;
        for (std::size_t a = 0; a < n1; ++a)
            if (!covered.test(a))
                r.unmatched_arrows.push_back(q.arrows[a].id);
        r.nondegenerate = r.unmatched_arrows.empty() && n1 > 0;
    }
    return r;
}

} // namespace branetile
