#pragma once

// Quiver with potential on a torus: vertices, arrows and signed faces, plus
// the structured-document reader/writer for it.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "error.hpp"
#include <nlohmann/json.hpp>

namespace branetile {

using index_set = boost::dynamic_bitset<>;

struct arrow {
    std::string id;
    std::size_t src = 0;
    std::size_t tgt = 0;

    friend bool operator==(const arrow&, const arrow&) = default;
};

struct face {
    int sign = +1; // +1 or -1
    std::vector<std::size_t> cycle; // arrow indices, cyclically ordered

    friend bool operator==(const face&, const face&) = default;
};

struct quiver_on_torus {
    std::vector<std::string> vertices;
    std::vector<arrow> arrows;
    std::vector<face> faces;

    [[nodiscard]] std::size_t num_vertices() const noexcept { return vertices.size(); }
    [[nodiscard]] std::size_t num_arrows() const noexcept { return arrows.size(); }
    [[nodiscard]] std::size_t num_faces() const noexcept { return faces.size(); }

    [[nodiscard]] std::optional<std::size_t> find_vertex(const std::string& id) const
    {
        for (std::size_t k = 0; k < vertices.size(); ++k)
            if (vertices[k] == id)
                return k;
        return std::nullopt;
    }

    [[nodiscard]] std::optional<std::size_t> find_arrow(const std::string& id) const
    {
        for (std::size_t k = 0; k < arrows.size(); ++k)
            if (arrows[k].id == id)
                return k;
        return std::nullopt;
    }

    [[nodiscard]] std::size_t vertex_index(const std::string& id) const
    {
        auto k = find_vertex(id);
        require(k.has_value(), error_code::dangling_reference, "unknown vertex '" + id + "'");
        return *k;
    }

    [[nodiscard]] std::size_t arrow_index(const std::string& id) const
    {
        auto k = find_arrow(id);
        require(k.has_value(), error_code::dangling_reference, "unknown arrow '" + id + "'");
        return *k;
    }

    [[nodiscard]] index_set empty_arrow_set() const { return index_set(arrows.size()); }

    [[nodiscard]] index_set arrow_set(const std::vector<std::string>& ids) const
    {
        index_set s = empty_arrow_set();
        for (const auto& id : ids)
            s.set(arrow_index(id));
        return s;
    }

    // Arrow ids of a set, sorted as strings.
    [[nodiscard]] std::vector<std::string> arrow_ids(const index_set& s) const
    {
        std::vector<std::string> out;
        for (auto k = s.find_first(); k != index_set::npos; k = s.find_next(k))
            out.push_back(arrows[k].id);
        std::sort(out.begin(), out.end());
        return out;
    }

    // The (+face, -face) pair containing each arrow; only meaningful for valid quivers.
    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> arrow_faces() const
    {
        std::vector<std::pair<std::size_t, std::size_t>> out(arrows.size(), {faces.size(), faces.size()});
        for (std::size_t f = 0; f < faces.size(); ++f)
            for (auto a : faces[f].cycle)
                (faces[f].sign > 0 ? out[a].first : out[a].second) = f;
        return out;
    }

    friend bool operator==(const quiver_on_torus&, const quiver_on_torus&) = default;
};

namespace detail {

inline std::string id_string(const nlohmann::json& j, const std::string& where)
{
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_number_integer())
        return std::to_string(j.get<long long>());
    fail(error_code::schema, where + ": expected a string id");
}

inline const nlohmann::json& member(const nlohmann::json& j, const char* key, const std::string& where)
{
    require(j.is_object(), error_code::schema, where + ": expected an object");
    auto it = j.find(key);
    require(it != j.end(), error_code::schema, where + ": missing key '" + key + "'");
    return *it;
}

inline const nlohmann::json& array_member(const nlohmann::json& j, const char* key, const std::string& where)
{
    const auto& v = member(j, key, where);
    require(v.is_array(), error_code::schema, where + ": '" + key + "' must be a list");
    return v;
}

inline nlohmann::json parse_document(const std::string& text)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail(error_code::syntax, "syntax error at line " + std::to_string(line) + ", column " +
                                     std::to_string(col) + " (byte " + std::to_string(e.byte) + ")");
    }
}

} // namespace detail

inline quiver_on_torus parse_tiling_json(const nlohmann::json& doc)
{
    using detail::array_member;
    using detail::id_string;
    using detail::member;

    quiver_on_torus q;
    std::map<std::string, std::size_t> vidx, aidx;

    for (const auto& v : array_member(doc, "vertices", "document")) {
        auto id = id_string(v, "vertices");
        require(vidx.emplace(id, q.vertices.size()).second, error_code::duplicate_id, "duplicate vertex id '" + id + "'");
        q.vertices.push_back(id);
    }
    for (const auto& a : array_member(doc, "arrows", "document")) {
        auto id = id_string(member(a, "id", "arrow"), "arrow id");
        auto src = id_string(member(a, "src", "arrow " + id), "arrow " + id + " src");
        auto tgt = id_string(member(a, "tgt", "arrow " + id), "arrow " + id + " tgt");
        auto s = vidx.find(src), t = vidx.find(tgt);
        require(s != vidx.end(), error_code::dangling_reference, "arrow '" + id + "': unknown src vertex '" + src + "'");
        require(t != vidx.end(), error_code::dangling_reference, "arrow '" + id + "': unknown tgt vertex '" + tgt + "'");
        require(aidx.emplace(id, q.arrows.size()).second, error_code::duplicate_id, "duplicate arrow id '" + id + "'");
        q.arrows.push_back({id, s->second, t->second});
    }
    std::size_t fno = 0;
    for (const auto& f : array_member(doc, "faces", "document")) {
        const std::string where = "face #" + std::to_string(fno++);
        const auto& sj = member(f, "sign", where);
        int sign = 0;
        if (sj.is_string() && sj.get<std::string>() == "+")
            sign = +1;
        else if (sj.is_string() && sj.get<std::string>() == "-")
            sign = -1;
        else if (sj.is_number_integer() && (sj.get<int>() == 1 || sj.get<int>() == -1))
            sign = sj.get<int>();
        require(sign != 0, error_code::schema, where + ": sign must be \"+\" or \"-\"");
        face fc{sign, {}};
        for (const auto& a : array_member(f, "cycle", where)) {
            auto id = id_string(a, where);
            auto it = aidx.find(id);
            require(it != aidx.end(), error_code::dangling_reference, where + ": unknown arrow '" + id + "'");
            fc.cycle.push_back(it->second);
        }
        q.faces.push_back(std::move(fc));
    }
    return q;
}

inline quiver_on_torus parse_tiling(const std::string& text)
{
    return parse_tiling_json(detail::parse_document(text));
}

inline nlohmann::json tiling_to_json(const quiver_on_torus& q)
{
    nlohmann::json doc;
    doc["vertices"] = q.vertices;
    doc["arrows"] = nlohmann::json::array();
    for (const auto& a : q.arrows)
        doc["arrows"].push_back({{"id", a.id}, {"src", q.vertices[a.src]}, {"tgt", q.vertices[a.tgt]}});
    doc["faces"] = nlohmann::json::array();
    for (const auto& f : q.faces) {
        std::vector<std::string> cyc;
        for (auto a : f.cycle)
            cyc.push_back(q.arrows[a].id);
        doc["faces"].push_back({{"sign", f.sign > 0 ? "+" : "-"}, {"cycle", cyc}});
    }
    return doc;
}

inline std::string serialize_tiling(const quiver_on_torus& q) { return tiling_to_json(q).dump(2) + "\n"; }

} // namespace branetile
