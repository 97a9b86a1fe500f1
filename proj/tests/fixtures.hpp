#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <branetile/dimer.hpp>
#include <branetile/tiling.hpp>

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(BRANETILE_DATA_DIR) + "/" + name; }

inline std::string read(const std::string& name)
{
    std::ifstream in(path(name));
    if (!in)
        throw std::runtime_error("cannot open fixture " + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline branetile::quiver_on_torus load(const std::string& name) { return branetile::load_tiling(read(name)); }

inline branetile::quiver_on_torus honeycomb() { return load("honeycomb.json"); }
inline branetile::quiver_on_torus conifold() { return load("conifold.json"); }
inline branetile::quiver_on_torus spp() { return load("spp.json"); }
inline branetile::quiver_on_torus z2z2() { return load("z2z2.json"); }

inline const std::vector<std::string>& names()
{
    static const std::vector<std::string> n{"honeycomb", "conifold", "spp", "z2z2"};
    return n;
}

inline branetile::quiver_on_torus by_name(const std::string& n) { return load(n + ".json"); }

// Cyclic rotation bringing the smallest element first.
inline std::vector<std::string> normalize_cycle(std::vector<std::string> c)
{
    auto it = std::min_element(c.begin(), c.end());
    std::rotate(c.begin(), it, c.end());
    return c;
}

// Same arrow ids, and some vertex bijection carries arrows and faces of a onto b.
inline bool isomorphic_fixing_arrows(const branetile::quiver_on_torus& a, const branetile::quiver_on_torus& b)
{
    if (a.num_vertices() != b.num_vertices() || a.num_arrows() != b.num_arrows() || a.num_faces() != b.num_faces())
        return false;
    std::vector<std::size_t> perm(a.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    auto face_set = [](const branetile::quiver_on_torus& q) {
        std::multiset<std::pair<int, std::vector<std::string>>> out;
        for (const auto& f : q.faces) {
            std::vector<std::string> ids;
            for (auto x : f.cycle)
                ids.push_back(q.arrows[x].id);
            out.insert({f.sign, normalize_cycle(ids)});
        }
        return out;
    };
    if (face_set(a) != face_set(b))
        return false;
    do {
        bool ok = true;
        for (const auto& arr : a.arrows) {
            auto k = b.find_arrow(arr.id);
            if (!k || b.arrows[*k].src != perm[arr.src] || b.arrows[*k].tgt != perm[arr.tgt]) {
                ok = false;
                break;
            }
        }
        if (ok)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// Same edge ids; node renaming induced by edges preserves colors and rotations.
inline bool dimer_isomorphic_fixing_edges(const branetile::dimer_graph& a, const branetile::dimer_graph& b)
{
    if (a.edges.size() != b.edges.size() || a.white_nodes.size() != b.white_nodes.size() ||
        a.black_nodes.size() != b.black_nodes.size())
        return false;
    std::map<std::string, std::string> ren;
    auto bind = [&](const std::string& x, const std::string& y) {
        auto [it, fresh] = ren.emplace(x, y);
        return fresh || it->second == y;
    };
    for (const auto& e : a.edges) {
        auto it = std::find_if(b.edges.begin(), b.edges.end(), [&](const auto& f) { return f.id == e.id; });
        if (it == b.edges.end() || !bind(e.white, it->white) || !bind(e.black, it->black))
            return false;
    }
    std::set<std::string> image;
    for (const auto& [x, y] : ren)
        image.insert(y);
    if (image.size() != ren.size())
        return false;
    for (const auto& [x, y] : ren) {
        auto ra = a.rotation.at(x), rb = b.rotation.at(y);
        if (normalize_cycle(ra) != normalize_cycle(rb))
            return false;
    }
    return true;
}

} // namespace fixtures
