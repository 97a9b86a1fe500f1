#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace branetile {

// Numeric values double as CLI exit codes; keep them stable.
enum class error_code : int {
    usage = 2,
    io = 3,
    syntax = 10,
    schema = 11,
    dangling_reference = 12,
    duplicate_id = 13,
    invalid_tiling = 14,
    not_toroidal = 20,
    not_bipartite = 21,
    torsion = 30,
    noncomposable_path = 31,
    empty_diagram = 32,
    height_mismatch = 33,
    nongeneric_theta = 40,
    invalid_theta = 41,
    fan_axiom = 50,
    not_smooth = 51,
    non_primitive_ray = 52,
    bijection_failure = 60,
    free_action = 61,
    no_preimage = 62,
    inconsistent_polyhedron = 63,
    bad_path_endpoints = 70,
    unreachable_vertex = 71,
    internal = 99,
};

inline std::string_view error_code_name(error_code c)
{
    switch (c) {
    case error_code::usage: return "usage";
    case error_code::io: return "io";
    case error_code::syntax: return "syntax";
    case error_code::schema: return "schema";
    case error_code::dangling_reference: return "dangling-reference";
    case error_code::duplicate_id: return "duplicate-id";
    case error_code::invalid_tiling: return "invalid-tiling";
    case error_code::not_toroidal: return "not-toroidal";
    case error_code::not_bipartite: return "not-bipartite";
    case error_code::torsion: return "torsion";
    case error_code::noncomposable_path: return "noncomposable-path";
    case error_code::empty_diagram: return "empty-diagram";
    case error_code::height_mismatch: return "height-mismatch";
    case error_code::nongeneric_theta: return "nongeneric-theta";
    case error_code::invalid_theta: return "invalid-theta";
    case error_code::fan_axiom: return "fan-axiom";
    case error_code::not_smooth: return "not-smooth";
    case error_code::non_primitive_ray: return "non-primitive-ray";
    case error_code::bijection_failure: return "bijection-failure";
    case error_code::free_action: return "free-action";
    case error_code::no_preimage: return "no-preimage";
    case error_code::inconsistent_polyhedron: return "inconsistent-polyhedron";
    case error_code::bad_path_endpoints: return "bad-path-endpoints";
    case error_code::unreachable_vertex: return "unreachable-vertex";
    case error_code::internal: return "internal";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(error_code code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] error_code code() const noexcept { return code_; }

private:
    error_code code_;
};

[[noreturn]] inline void fail(error_code code, const std::string& what)
{
    throw error(code, what);
}

inline void require(bool cond, error_code code, const std::string& what)
{
    if (!cond)
        fail(code, what);
}

} // namespace branetile
