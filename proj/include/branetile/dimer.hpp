#pragma once

// Bipartite graph on a torus (dimer) and its dual quiver with faces.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "tiling.hpp"

namespace branetile {

struct dimer_edge {
    std::string id;
    std::string white;
    std::string black;

    friend bool operator==(const dimer_edge&, const dimer_edge&) = default;
};

struct dimer_graph {
    std::vector<std::string> white_nodes;
    std::vector<std::string> black_nodes;
    std::vector<dimer_edge> edges;
    // counterclockwise cyclic order of incident edge ids around each node
    std::map<std::string, std::vector<std::string>> rotation;

    friend bool operator==(const dimer_graph&, const dimer_graph&) = default;
};

namespace detail {

struct corner_structure {
    std::vector<std::string> nodes; // white then black
    std::map<std::string, std::size_t> node_index;
    std::vector<std::vector<std::size_t>> rot; // per node, edge indices
    std::vector<std::size_t> corner_base; // first corner index per node
    std::vector<std::size_t> corner_face;
    std::size_t num_faces = 0;
};

inline std::size_t position_in(const std::vector<std::size_t>& rot, std::size_t e)
{
    auto it = std::find(rot.begin(), rot.end(), e);
    require(it != rot.end(), error_code::internal, "edge missing from rotation");
    return static_cast<std::size_t>(it - rot.begin());
}

inline corner_structure trace_corners(const dimer_graph& g)
{
    corner_structure cs;
    std::set<std::string> whites(g.white_nodes.begin(), g.white_nodes.end());
    std::set<std::string> blacks(g.black_nodes.begin(), g.black_nodes.end());
    require(whites.size() == g.white_nodes.size() && blacks.size() == g.black_nodes.size(), error_code::duplicate_id,
            "duplicate node id");
    for (const auto& w : whites)
        require(!blacks.count(w), error_code::not_bipartite, "node '" + w + "' is both white and black");

    for (const auto& n : g.white_nodes) {
        cs.node_index[n] = cs.nodes.size();
        cs.nodes.push_back(n);
    }
    for (const auto& n : g.black_nodes) {
        cs.node_index[n] = cs.nodes.size();
        cs.nodes.push_back(n);
    }

    std::map<std::string, std::size_t> eidx;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& e = g.edges[k];
        require(eidx.emplace(e.id, k).second, error_code::duplicate_id, "duplicate edge id '" + e.id + "'");
        require(cs.node_index.count(e.white), error_code::dangling_reference,
                "edge '" + e.id + "': unknown node '" + e.white + "'");
        require(cs.node_index.count(e.black), error_code::dangling_reference,
                "edge '" + e.id + "': unknown node '" + e.black + "'");
        require(whites.count(e.white) && blacks.count(e.black), error_code::not_bipartite,
                "edge '" + e.id + "' does not join a white node to a black node");
    }

    cs.rot.resize(cs.nodes.size());
    for (std::size_t v = 0; v < cs.nodes.size(); ++v) {
        auto it = g.rotation.find(cs.nodes[v]);
        require(it != g.rotation.end(), error_code::schema, "no rotation given for node '" + cs.nodes[v] + "'");
        std::multiset<std::size_t> expected, got;
        for (std::size_t k = 0; k < g.edges.size(); ++k)
            if (g.edges[k].white == cs.nodes[v] || g.edges[k].black == cs.nodes[v])
                expected.insert(k);
        for (const auto& id : it->second) {
            auto e = eidx.find(id);
            require(e != eidx.end(), error_code::dangling_reference,
                    "rotation of '" + cs.nodes[v] + "': unknown edge '" + id + "'");
            cs.rot[v].push_back(e->second);
            got.insert(e->second);
        }
        require(expected == got, error_code::invalid_tiling,
                "rotation of '" + cs.nodes[v] + "' must list each incident edge exactly once");
        require(cs.rot[v].size() >= 2, error_code::invalid_tiling, "node '" + cs.nodes[v] + "' has degree < 2");
    }
    for (const auto& [node, _] : g.rotation)
        require(cs.node_index.count(node), error_code::dangling_reference, "rotation for unknown node '" + node + "'");

    auto other_end = [&](std::size_t e, std::size_t v) {
        const auto& ed = g.edges[e];
        std::size_t a = cs.node_index.at(ed.white), b = cs.node_index.at(ed.black);
        return a == v ? b : a;
    };

    std::size_t total = 0;
    for (const auto& r : cs.rot) {
        cs.corner_base.push_back(total);
        total += r.size();
    }
    const std::size_t unset = total;
    cs.corner_face.assign(total, unset);
    for (std::size_t v = 0; v < cs.nodes.size(); ++v)
        for (std::size_t i = 0; i < cs.rot[v].size(); ++i) {
            if (cs.corner_face[cs.corner_base[v] + i] != unset)
                continue;
            std::size_t cv = v, ci = i;
            while (cs.corner_face[cs.corner_base[cv] + ci] == unset) {
                cs.corner_face[cs.corner_base[cv] + ci] = cs.num_faces;
                const std::size_t e = cs.rot[cv][(ci + 1) % cs.rot[cv].size()];
                const std::size_t w = other_end(e, cv);
                ci = position_in(cs.rot[w], e);
                cv = w;
            }
            ++cs.num_faces;
        }
    return cs;
}

} // namespace detail

// Faces of the embedded graph become quiver vertices "1", "2", ... in the
// order they are first met; edges become arrows with the same ids.
inline quiver_on_torus dualize_dimer(const dimer_graph& g)
{
    const auto cs = detail::trace_corners(g);

    // connectivity of the graph
    {
        std::vector<std::size_t> parent(cs.nodes.size());
        for (std::size_t k = 0; k < parent.size(); ++k)
            parent[k] = k;
        auto find = [&](std::size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& e : g.edges)
            parent[find(cs.node_index.at(e.white))] = find(cs.node_index.at(e.black));
        for (std::size_t k = 0; k < parent.size(); ++k)
            require(find(k) == find(0), error_code::invalid_tiling, "dimer graph is not connected");
    }

    const long long euler = static_cast<long long>(cs.nodes.size()) - static_cast<long long>(g.edges.size()) +
                            static_cast<long long>(cs.num_faces);
    require(euler == 0, error_code::not_toroidal,
            "rotation system has Euler characteristic " + std::to_string(euler) + ", expected 0");

    quiver_on_torus q;
    for (std::size_t f = 0; f < cs.num_faces; ++f)
        q.vertices.push_back(std::to_string(f + 1));
    q.arrows.resize(g.edges.size());
    for (std::size_t w = 0; w < g.white_nodes.size(); ++w) {
        const auto& r = cs.rot[w];
        for (std::size_t i = 0; i < r.size(); ++i) {
            const std::size_t prev = (i + r.size() - 1) % r.size();
            q.arrows[r[i]] = {g.edges[r[i]].id, cs.corner_face[cs.corner_base[w] + prev],
                              cs.corner_face[cs.corner_base[w] + i]};
        }
    }
    for (std::size_t w = 0; w < g.white_nodes.size(); ++w)
        q.faces.push_back({+1, cs.rot[w]});
    for (std::size_t b = g.white_nodes.size(); b < cs.nodes.size(); ++b) {
        std::vector<std::size_t> cyc(cs.rot[b].rbegin(), cs.rot[b].rend());
        q.faces.push_back({-1, cyc});
    }
    return q;
}

// Inverse construction: +faces become white nodes, -faces black nodes.
inline dimer_graph extract_dimer(const quiver_on_torus& q)
{
    dimer_graph g;
    std::vector<std::string> name(q.num_faces());
    std::size_t nw = 0, nb = 0;
    for (std::size_t f = 0; f < q.num_faces(); ++f) {
        if (q.faces[f].sign > 0) {
            name[f] = "w" + std::to_string(++nw);
            g.white_nodes.push_back(name[f]);
        } else {
            name[f] = "b" + std::to_string(++nb);
            g.black_nodes.push_back(name[f]);
        }
        std::vector<std::string> ids;
        for (auto a : q.faces[f].cycle)
            ids.push_back(q.arrows[a].id);
        if (q.faces[f].sign < 0)
            std::reverse(ids.begin(), ids.end());
        g.rotation[name[f]] = ids;
    }
    const auto af = q.arrow_faces();
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
        require(af[a].first < q.num_faces() && af[a].second < q.num_faces(), error_code::invalid_tiling,
                "arrow '" + q.arrows[a].id + "' is not in one face of each sign");
        g.edges.push_back({q.arrows[a].id, name[af[a].first], name[af[a].second]});
    }
    return g;
}

inline bool is_dimer_document(const nlohmann::json& doc)
{
    return doc.is_object() && (doc.contains("dimer") || (doc.contains("white") && doc.contains("black")));
}

inline dimer_graph parse_dimer_json(const nlohmann::json& doc0)
{
    using detail::array_member;
    using detail::id_string;
    using detail::member;
    const nlohmann::json& doc = doc0.contains("dimer") ? doc0.at("dimer") : doc0;
    dimer_graph g;
    for (const auto& n : array_member(doc, "white", "dimer"))
        g.white_nodes.push_back(id_string(n, "white"));
    for (const auto& n : array_member(doc, "black", "dimer"))
        g.black_nodes.push_back(id_string(n, "black"));
    for (const auto& e : array_member(doc, "edges", "dimer")) {
        auto id = id_string(member(e, "id", "edge"), "edge id");
        g.edges.push_back({id, id_string(member(e, "white", "edge " + id), "edge " + id),
                           id_string(member(e, "black", "edge " + id), "edge " + id)});
    }
    const auto& rot = member(doc, "rotation", "dimer");
    require(rot.is_object(), error_code::schema, "dimer: 'rotation' must be a map");
    for (auto it = rot.begin(); it != rot.end(); ++it) {
        require(it.value().is_array(), error_code::schema, "rotation of '" + it.key() + "' must be a list");
        std::vector<std::string> ids;
        for (const auto& x : it.value())
            ids.push_back(id_string(x, "rotation"));
        g.rotation[it.key()] = ids;
    }
    return g;
}

inline nlohmann::json dimer_to_json(const dimer_graph& g)
{
    nlohmann::json doc;
    doc["white"] = g.white_nodes;
    doc["black"] = g.black_nodes;
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges)
        doc["edges"].push_back({{"id", e.id}, {"white", e.white}, {"black", e.black}});
    doc["rotation"] = nlohmann::json::object();
    for (const auto& [n, r] : g.rotation)
        doc["rotation"][n] = r;
    return nlohmann::json{{"dimer", doc}};
}

// Reads either document form; a dimer document is dualized.
inline quiver_on_torus load_tiling(const std::string& text)
{
    const auto doc = detail::parse_document(text);
    if (is_dimer_document(doc))
        return dualize_dimer(parse_dimer_json(doc));
    return parse_tiling_json(doc);
}

} // namespace branetile
