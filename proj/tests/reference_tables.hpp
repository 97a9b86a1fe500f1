#pragma once

// Published matchings and stabilities, indexed as printed (I1 is entry 0).

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <branetile/matchings.hpp>

namespace reference {

using id_set = std::set<std::string>;

inline const std::vector<id_set> spp_matchings{{"12", "31"}, {"21", "13"}, {"32", "11"},
                                               {"23", "11"}, {"12", "13"}, {"21", "31"}};

// Table of chamber representatives, theta_1 .. theta_6.
inline const std::vector<branetile::int_vector> spp_thetas{{-2, 1, 1}, {1, -2, 1}, {1, 1, -2},
                                                           {2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}};

// Points of the toric diagram in the printed basis, I1 .. I6.
inline const std::vector<std::pair<int, int>> spp_points{{0, 0}, {2, 0}, {1, 1}, {0, 1}, {1, 0}, {1, 0}};

// Divisor classes of the non-trivial bundles in the printed Pic basis.
inline const std::vector<branetile::int_vector> spp_pic_rows{{1, 0, 1, -1, -1}, {0, 1, -1, 1, -1}};

inline const std::vector<id_set> z2z2_matchings{
    {"cb", "0a", "0b", "ca"}, {"cb", "0a", "bc", "a0"}, {"cb", "ab", "c0", "a0"},
    {"ac", "b0", "0b", "ca"}, {"ac", "b0", "bc", "a0"}, {"ac", "ab", "0b", "0c"},
    {"ba", "b0", "c0", "ca"}, {"ba", "0a", "bc", "0c"}, {"ba", "ab", "c0", "0c"}};

// 4 * chi-bar column, I1 .. I9.
inline const std::vector<branetile::int_vector> z2z2_column{{2, 2, 0}, {4, 0, 0}, {2, 0, 2}, {0, 4, 0}, {2, 2, 0},
                                                            {0, 2, 2}, {0, 2, 2}, {2, 0, 2}, {0, 0, 4}};

// Vertex order 0, a, b, c.
inline const std::vector<branetile::int_vector> z2z2_thetas{{-3, 1, 1, 1}, {-3, -1, 2, 2}, {-2, 3, 1, -2}};

inline std::size_t find_matching(const branetile::quiver_on_torus& q, const std::vector<branetile::perfect_matching>& ms,
                                 const id_set& ids)
{
    for (const auto& m : ms) {
        auto v = q.arrow_ids(m.arrows);
        if (id_set(v.begin(), v.end()) == ids)
            return m.id;
    }
    throw std::runtime_error("matching not found");
}

// Computed matching id of each printed label.
inline std::vector<std::size_t> label_map(const branetile::quiver_on_torus& q,
                                          const std::vector<branetile::perfect_matching>& ms,
                                          const std::vector<id_set>& table)
{
    std::vector<std::size_t> out;
    for (const auto& t : table)
        out.push_back(find_matching(q, ms, t));
    return out;
}

} // namespace reference
