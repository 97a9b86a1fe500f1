#pragma once

// SVG 1.1 drawing of a toric diagram in canonical coordinates, optionally
// with triangulation edges and per-matching annotations. Output depends only
// on the inputs.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fan.hpp"
#include "matchings.hpp"

namespace branetile {

struct svg_overlay {
    std::optional<triangulation> triangles;
    std::map<std::size_t, std::string> annotations; // matching id -> text
};

namespace detail {

inline std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

inline std::string render_svg(const toric_diagram& d, const svg_overlay& overlay = {})
{
    constexpr long long unit = 80, margin = 60;
    const auto support = d.support();
    long long x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool first = true;
    for (const auto& [p, _] : support) {
        const auto x = p.x.convert_to<long long>(), y = p.y.convert_to<long long>();
        if (first) {
            x0 = x1 = x;
            y0 = y1 = y;
            first = false;
        }
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    const long long w = (x1 - x0) * unit + 2 * margin, h = (y1 - y0) * unit + 2 * margin;
    auto px = [&](const big_int& x) { return (x.convert_to<long long>() - x0) * unit + margin; };
    auto py = [&](const big_int& y) { return (y1 - y.convert_to<long long>()) * unit + margin; };

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";

    s << "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    for (long long x = x0; x <= x1; ++x)
        s << "<line x1=\"" << px(x) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(x) << "\" y2=\"" << py(y1)
          << "\"/>\n";
    for (long long y = y0; y <= y1; ++y)
        s << "<line x1=\"" << px(x0) << "\" y1=\"" << py(y) << "\" x2=\"" << px(x1) << "\" y2=\"" << py(y) << "\"/>\n";
    s << "</g>\n";

    s << "<polygon fill=\"#eef4ff\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < d.hull.size(); ++k)
        s << (k ? " " : "") << px(d.hull[k].x) << ',' << py(d.hull[k].y);
    s << "\"/>\n";

    if (overlay.triangles) {
        s << "<g stroke=\"#c0392b\" stroke-width=\"2\">\n";
        for (const auto& e : overlay.triangles->edges) {
            const auto a = d.transform(overlay.triangles->vertices.at(e[0]));
            const auto b = d.transform(overlay.triangles->vertices.at(e[1]));
            s << "<line x1=\"" << px(a.x) << "\" y1=\"" << py(a.y) << "\" x2=\"" << px(b.x) << "\" y2=\"" << py(b.y)
              << "\"/>\n";
        }
        s << "</g>\n";
    }

    s << "<g font-family=\"sans-serif\" font-size=\"14\">\n";
    for (const auto& [p, ids] : support) {
        std::string label;
        for (auto id : ids)
            label += (label.empty() ? "" : ",") + matching_label(id);
        if (ids.size() > 1)
            label += " (" + std::to_string(ids.size()) + ")";
        s << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\"6\" fill=\"black\"/>\n"
          << "<text x=\"" << px(p.x) + 8 << "\" y=\"" << py(p.y) - 8 << "\">" << detail::xml_escape(label)
          << "</text>\n";
        std::string note;
        for (auto id : ids) {
            const auto it = overlay.annotations.find(id);
            if (it != overlay.annotations.end())
                note += (note.empty() ? "" : " ") + it->second;
        }
        if (!note.empty())
            s << "<text x=\"" << px(p.x) + 8 << "\" y=\"" << py(p.y) + 22 << "\" fill=\"#c0392b\">"
              << detail::xml_escape(note) << "</text>\n";
    }
    s << "</g>\n</svg>\n";
    return s.str();
}

} // namespace branetile
