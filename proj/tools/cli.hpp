#pragma once

// Command dispatch for the branetile tool. run() never throws; errors become
// one "error[<code>] <verb>: <message>" line on err and a nonzero status.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <branetile/dimer.hpp>
#include <branetile/error.hpp>
#include <branetile/fan.hpp>
#include <branetile/lattice.hpp>
#include <branetile/matchings.hpp>
#include <branetile/stability.hpp>
#include <branetile/svg.hpp>
#include <branetile/tilting.hpp>
#include <branetile/validate.hpp>

namespace branetile::cli {

// Aligned columns; the header line starts with '#'.
class table {
public:
    explicit table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& out) const
    {
        std::vector<std::size_t> w(header_.size(), 0);
        auto widen = [&](const std::vector<std::string>& r, std::size_t extra) {
            for (std::size_t k = 0; k < r.size() && k < w.size(); ++k)
                w[k] = std::max(w[k], display_width(r[k]) + (k == 0 ? extra : 0));
        };
        widen(header_, 2);
        for (const auto& r : rows_)
            widen(r, 0);
        auto line = [&](const std::vector<std::string>& r, bool head) {
            std::string s = head ? "# " : "";
            for (std::size_t k = 0; k < r.size(); ++k) {
                s += r[k];
                if (k + 1 < r.size())
                    s += std::string(w[k] - display_width(r[k]) - (head && k == 0 ? 2 : 0) + 2, ' ');
            }
            out << s << '\n';
        };
        line(header_, true);
        for (const auto& r : rows_)
            line(r, false);
    }

private:
    // UTF-8 code points
    static std::size_t display_width(const std::string& s)
    {
        return static_cast<std::size_t>(
            std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct options {
    std::string input;
    std::string theta;
    std::string vertex_order;
    std::string base;
    std::string paths;
    std::string pic_basis;
    std::string svg;
    std::string annotate_path;
    std::string path;
    int max_height = 4;
};

inline std::string read_file(const std::string& p)
{
    std::ifstream in(p);
    require(static_cast<bool>(in), error_code::io, "cannot open '" + p + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& p, const std::string& text)
{
    std::ofstream out(p);
    require(static_cast<bool>(out), error_code::io, "cannot write '" + p + "'");
    out << text;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep))
        out.push_back(cur);
    return out;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep)
{
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k)
        out += (k ? sep : "") + v[k];
    return out;
}

inline std::string signed_text(const big_int& x)
{
    return x < 0 ? "−" + big_int(-x).str() : x.str();
}

inline std::string bundle_text(const int_vector& c)
{
    if (is_zero(c))
        return "\U0001D4DE";
    std::vector<std::string> parts;
    for (const auto& x : c)
        parts.push_back(signed_text(x));
    return "\U0001D4DE(" + join(parts, ",") + ")";
}

inline std::string labels_text(const std::vector<std::size_t>& ids)
{
    std::vector<std::string> v;
    for (auto id : ids)
        v.push_back(matching_label(id));
    return v.empty() ? "-" : join(v, ",");
}

inline std::string theta_text(const std::vector<std::size_t>& order, const int_vector& theta)
{
    std::vector<std::string> v;
    for (auto k : order)
        v.push_back(theta[k].str());
    return "(" + join(v, ",") + ")";
}

// Vertex indices in the order theta is written.
inline std::vector<std::size_t> vertex_order(const quiver_on_torus& q, const options& o)
{
    std::vector<std::size_t> order;
    if (o.vertex_order.empty()) {
        for (std::size_t k = 0; k < q.num_vertices(); ++k)
            order.push_back(k);
        return order;
    }
    for (const auto& id : split(o.vertex_order, ','))
        order.push_back(q.vertex_index(id));
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    require(sorted.size() == q.num_vertices() && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            error_code::usage, "--vertex-order must list every vertex once");
    return order;
}

inline int_vector parse_theta(const quiver_on_torus& q, const options& o)
{
    if (o.theta.empty()) {
        require(q.num_vertices() == 1, error_code::usage, "--theta is required");
        return {0};
    }
    const auto order = vertex_order(q, o);
    const auto parts = split(o.theta, ',');
    require(parts.size() == q.num_vertices(), error_code::invalid_theta,
            "theta has " + std::to_string(parts.size()) + " entries, expected " + std::to_string(q.num_vertices()));
    int_vector theta(q.num_vertices());
    for (std::size_t k = 0; k < parts.size(); ++k) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(parts[k], &used);
            require(used == parts[k].size(), error_code::usage, "bad theta entry '" + parts[k] + "'");
            theta[order[k]] = v;
        } catch (const std::logic_error&) {
            fail(error_code::usage, "bad theta entry '" + parts[k] + "'");
        }
    }
    check_theta(q, theta);
    return theta;
}

inline std::size_t parse_label(const std::string& s, std::size_t count)
{
    require(s.size() > 1 && s[0] == 'I', error_code::usage, "expected a matching label like I3, got '" + s + "'");
    std::size_t k = 0;
    try {
        k = std::stoul(s.substr(1));
    } catch (const std::logic_error&) {
        fail(error_code::usage, "bad matching label '" + s + "'");
    }
    require(k >= 1 && k <= count, error_code::usage, "no matching " + s);
    return k - 1;
}

struct loaded {
    lattice_tower t;
    std::vector<perfect_matching> ms;
};

inline loaded load(const options& o)
{
    auto q = load_tiling(read_file(o.input));
    const auto rep = validate(q);
    if (!rep.ok)
        fail(error_code::invalid_tiling, rep.violations.front().rule + ": " + rep.violations.front().detail);
    auto t = build_lattice_tower(q);
    auto ms = enumerate_perfect_matchings(t);
    return {std::move(t), std::move(ms)};
}

inline svg_overlay annotations_for(const loaded& L, const int_vector& theta, const options& o)
{
    svg_overlay ov;
    if (o.annotate_path.empty())
        return ov;
    const auto& q = L.t.quiver;
    const auto u = parse_path(q, o.annotate_path);
    for (auto id : stable_matching_ids(q, theta, L.ms))
        ov.annotations[id] = signed_text(chi_of_path(q, L.ms[id], u));
    return ov;
}

// ---------------------------------------------------------------------------
// Verbs

inline int cmd_validate(const options& o, std::ostream& out)
{
    const auto q = load_tiling(read_file(o.input));
    const auto rep = validate(q);
    table tb({"rule", "detail"});
    for (const auto& v : rep.violations)
        tb.add({v.rule, v.detail});
    tb.print(out);
    out << "vertices " << q.num_vertices() << ", arrows " << q.num_arrows() << ", faces " << q.num_faces() << '\n';
    out << "valid: " << (rep.ok ? "yes" : "no") << '\n';
    if (rep.ok)
        out << "nondegenerate: " << (rep.nondegenerate ? "yes" : "no") << '\n';
    if (!rep.ok)
        fail(error_code::invalid_tiling, std::to_string(rep.violations.size()) + " violation(s)");
    return 0;
}

inline int cmd_matchings(const options& o, std::ostream& out)
{
    const auto L = load(o);
    const auto& q = L.t.quiver;
    const auto d = make_toric_diagram(L.ms);
    std::vector<std::pair<std::vector<std::string>, std::size_t>> rows;
    for (const auto& m : L.ms)
        rows.push_back({q.arrow_ids(m.arrows), m.id});
    std::sort(rows.begin(), rows.end());
    table tb({"label", "arrows", "chi_M", "point"});
    for (const auto& [ids, id] : rows)
        tb.add({matching_label(id), join(ids, ","), to_string(L.ms[id].chi_M),
                "(" + d.points[id].x.str() + "," + d.points[id].y.str() + ")"});
    tb.print(out);
    out << L.ms.size() << " perfect matchings\n";
    return 0;
}

inline int cmd_diagram(const options& o, std::ostream& out)
{
    const auto L = load(o);
    const auto d = make_toric_diagram(L.ms);
    table tb({"point", "multiplicity", "matchings", "extremal"});
    for (const auto& [p, ids] : d.support())
        tb.add({"(" + p.x.str() + "," + p.y.str() + ")", std::to_string(ids.size()), labels_text(ids),
                std::find(d.hull.begin(), d.hull.end(), p) != d.hull.end() ? "yes" : "no"});
    tb.print(out);
    out << d.support().size() << " points, " << d.extremal_ids.size() << " extremal matchings, normalized area "
        << normalized_area(d.hull) << '\n';
    if (!o.svg.empty())
        write_file(o.svg, render_svg(d));
    return 0;
}

inline int cmd_chambers(const options& o, std::ostream& out)
{
    const auto L = load(o);
    const auto& q = L.t.quiver;
    const auto rep = chamber_decomposition(q, L.ms);
    const auto order = vertex_order(q, o);
    const auto d = make_toric_diagram(L.ms);
    table tb({"chamber", "theta", "stable", "non-extremal", "stable pairs"});
    for (std::size_t k = 0; k < rep.chambers.size(); ++k) {
        const auto& c = rep.chambers[k];
        std::vector<std::size_t> inner;
        for (auto id : c.stable_matchings)
            if (std::find(d.extremal_ids.begin(), d.extremal_ids.end(), id) == d.extremal_ids.end())
                inner.push_back(id);
        std::vector<std::string> pairs;
        for (const auto& p : c.stable_pairs)
            pairs.push_back("{" + labels_text(p) + "}");
        tb.add({std::to_string(k + 1), theta_text(order, c.representative), labels_text(c.stable_matchings),
                labels_text(inner), pairs.empty() ? "-" : join(pairs, " ")});
    }
    tb.print(out);
    out << rep.chambers.size() << " chambers\n";
    if (rep.trivial)
        out << "single vertex: theta = (0) is the only stability\n";
    else
        out << rep.classes.size() << " distinct stable structures\n";
    return 0;
}

inline int cmd_fan(const options& o, std::ostream& out)
{
    const auto L = load(o);
    const auto theta = parse_theta(L.t.quiver, o);
    require_generic(L.t.quiver, theta);
    const auto f = moduli_fan(L.t, L.ms, theta);
    table rays({"ray", "generator"});
    for (const auto& r : f.rays)
        rays.add({matching_label(r.matching), to_string(r.generator)});
    rays.print(out);
    table cones({"cone", "dimension"});
    for (auto k : f.maximal_cones())
        cones.add({cone_name(f, f.cones[k]), std::to_string(f.dimension(f.cones[k]))});
    cones.print(out);
    const bool smooth = check_smooth(f);
    out << f.rays.size() << " rays, " << f.maximal_cones().size() << " maximal cones, smooth: " << (smooth ? "yes" : "no")
        << '\n';
    const auto d = make_toric_diagram(L.ms);
    svg_overlay ov = annotations_for(L, theta, o);
    if (smooth) {
        ov.triangles = make_triangulation(f);
        const auto rep = check_triangulation(*ov.triangles, d);
        out << "triangulation: " << ov.triangles->triangles.size() << " triangles, " << (rep.ok ? "crepant" : "invalid")
            << '\n';
    }
    if (!o.svg.empty())
        write_file(o.svg, render_svg(d, ov));
    return 0;
}

inline int cmd_tilting(const options& o, std::ostream& out)
{
    const auto L = load(o);
    const auto& q = L.t.quiver;
    const auto theta = parse_theta(q, o);
    const std::size_t base = o.base.empty() ? 0 : q.vertex_index(o.base);
    std::map<std::size_t, weak_path> supplied;
    if (!o.paths.empty())
        for (const auto& item : split(o.paths, ';')) {
            const auto eq = item.find('=');
            require(eq != std::string::npos, error_code::usage, "path spec '" + item + "' lacks '='");
            supplied[q.vertex_index(item.substr(0, eq))] = parse_path(q, item.substr(eq + 1));
        }
    std::vector<std::size_t> basis;
    if (!o.pic_basis.empty())
        for (const auto& s : split(o.pic_basis, ','))
            basis.push_back(parse_label(s, L.ms.size()));
    const auto c = make_tilting_collection(L.t, L.ms, theta, base, supplied, basis);

    out << "# rays " << labels_text(c.pic.rays) << '\n';
    table tb({"vertex", "path", "divisor", "class"});
    std::vector<std::string> bundles;
    for (std::size_t v = 0; v < q.num_vertices(); ++v) {
        tb.add({q.vertices[v], path_to_string(q, c.paths[v]), to_string(c.classes[v].coefficients),
                to_string(c.classes[v].pic_class)});
    }
    tb.print(out);
    // base vertex first, then the others in file order
    bundles.push_back(bundle_text(c.classes[base].pic_class));
    for (std::size_t v = 0; v < q.num_vertices(); ++v)
        if (v != base)
            bundles.push_back(bundle_text(c.classes[v].pic_class));
    out << "Pic rank " << c.pic.rank;
    if (!c.pic.torsion.empty()) {
        std::vector<std::string> t;
        for (const auto& x : c.pic.torsion)
            t.push_back("Z/" + x.str());
        out << ", torsion " << join(t, " + ");
    }
    out << '\n' << "bundle " << join(bundles, " ⊕ ") << '\n';
    if (!o.svg.empty()) {
        svg_overlay ov = annotations_for(L, theta, o);
        const auto f = moduli_fan(L.t, L.ms, theta);
        if (check_smooth(f))
            ov.triangles = make_triangulation(f);
        write_file(o.svg, render_svg(make_toric_diagram(L.ms), ov));
    }
    return 0;
}

inline int cmd_sections(const options& o, std::ostream& out)
{
    const auto L = load(o);
    const auto& q = L.t.quiver;
    const auto theta = parse_theta(q, o);
    require(!o.path.empty(), error_code::usage, "--path is required");
    require(o.max_height >= 0, error_code::usage, "--max-height must be nonnegative");
    const auto u = parse_path(q, o.path);
    const auto rep = graded_sections_count(L.t, L.ms, theta, u, o.max_height);
    std::set<big_int> heights;
    for (const auto& [h, _] : rep.lattice_counts)
        heights.insert(h);
    for (const auto& [h, _] : rep.path_counts)
        heights.insert(h);
    table tb({"height", "lattice", "paths"});
    auto at = [](const std::map<big_int, std::size_t>& m, const big_int& h) {
        const auto it = m.find(h);
        return std::to_string(it == m.end() ? 0 : it->second);
    };
    for (const auto& h : heights)
        tb.add({h.str(), at(rep.lattice_counts, h), at(rep.path_counts, h)});
    tb.print(out);
    out << "total " << rep.total(rep.lattice_counts) << " lattice, " << rep.total(rep.path_counts) << " paths\n";
    out << "agree: " << (rep.agree() ? "yes" : "no") << '\n';
    if (!rep.agree())
        fail(error_code::height_mismatch, "section count differs from the path-weight count");
    return 0;
}

inline int cmd_dump_lattice(const options& o, std::ostream& out)
{
    const auto L = load(o);
    out << lattice_dump(L.t);
    return 0;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Brane tilings: perfect matchings, stability chambers, fans and tilting bundles", "branetile"};
    app.require_subcommand(1);
    options o;
    std::map<std::string, int (*)(const options&, std::ostream&)> verbs{
        {"validate", cmd_validate},   {"matchings", cmd_matchings}, {"diagram", cmd_diagram},
        {"chambers", cmd_chambers},   {"fan", cmd_fan},             {"tilting", cmd_tilting},
        {"sections", cmd_sections},   {"dump-lattice", cmd_dump_lattice},
    };
    const std::map<std::string, std::string> help{
        {"validate", "check the tiling axioms"},
        {"matchings", "list perfect matchings"},
        {"diagram", "toric diagram points and multiplicities"},
        {"chambers", "chambers of generic stability parameters"},
        {"fan", "fan of the moduli space for --theta"},
        {"tilting", "divisors and Picard classes of the tilting bundle"},
        {"sections", "graded sections of L(u) against path weights"},
        {"dump-lattice", "lattice maps as JSON"},
    };
    for (const auto& [name, _] : verbs) {
        auto* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("input", o.input, "tiling or dimer JSON file")->required();
        if (name == "chambers" || name == "fan" || name == "tilting" || name == "sections")
            sub->add_option("--vertex-order", o.vertex_order, "comma-separated vertex ids giving the theta order");
        if (name == "fan" || name == "tilting" || name == "sections")
            sub->add_option("--theta", o.theta, "comma-separated integers");
        if (name == "diagram" || name == "fan" || name == "tilting")
            sub->add_option("--svg", o.svg, "write an SVG drawing");
        if (name == "fan" || name == "tilting")
            sub->add_option("--annotate-path", o.annotate_path, "label stable rays with chi_I of this path");
        if (name == "tilting") {
            sub->add_option("--base", o.base, "base vertex id");
            sub->add_option("--paths", o.paths, "override paths, e.g. \"2=13,32;3=12,23\"");
            sub->add_option("--pic-basis", o.pic_basis, "rays whose classes form the Pic basis, e.g. I4,I5");
        }
        if (name == "sections") {
            sub->add_option("--path", o.path, "weak path, e.g. 12,23 or e:1");
            sub->add_option("--max-height", o.max_height, "height bound")->capture_default_str();
        }
    }

    std::string verb = "branetile";
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        for (auto* s : app.get_subcommands())
            verb = s->get_name();
        err << "error[" << error_code_name(error_code::usage) << "] " << verb << ": " << e.what() << '\n';
        return static_cast<int>(error_code::usage);
    }
    for (auto* s : app.get_subcommands())
        verb = s->get_name();
    std::ostringstream buffer;
    try {
        const int rc = verbs.at(verb)(o, buffer);
        out << buffer.str();
        return rc;
    } catch (const error& e) {
        out << buffer.str();
        err << "error[" << error_code_name(e.code()) << "] " << verb << ": " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        out << buffer.str();
        err << "error[" << error_code_name(error_code::internal) << "] " << verb << ": " << e.what() << '\n';
        return static_cast<int>(error_code::internal);
    }
}

} // namespace branetile::cli
