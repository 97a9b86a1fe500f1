#include <future>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include <branetile/dimer.hpp>
#include <branetile/stability.hpp>

#include "fixtures.hpp"
#include "reference_tables.hpp"

using namespace branetile;

namespace {

struct setup {
    quiver_on_torus q;
    lattice_tower t;
    std::vector<perfect_matching> ms;
};

setup make(const quiver_on_torus& q)
{
    auto t = build_lattice_tower(q);
    auto ms = enumerate_perfect_matchings(t);
    return {q, std::move(t), std::move(ms)};
}

index_set subset_of(std::size_t n, unsigned long bits)
{
    index_set s(n);
    for (std::size_t k = 0; k < n; ++k)
        if ((bits >> k) & 1ul)
            s.set(k);
    return s;
}

// dW/da evaluated on X_I: each face term is the product of X_b over the face minus a.
bool w_compatible_oracle(const quiver_on_torus& q, const index_set& I)
{
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
        int value = 0;
        for (const auto& f : q.faces)
            for (std::size_t pos = 0; pos < f.cycle.size(); ++pos) {
                if (f.cycle[pos] != a)
                    continue;
                int prod = 1;
                for (std::size_t k = 1; k < f.cycle.size(); ++k)
                    prod *= I.test(f.cycle[(pos + k) % f.cycle.size()]) ? 0 : 1;
                value += f.sign * prod;
            }
        if (value != 0)
            return false;
    }
    return true;
}

std::vector<vertex_mask> supports_oracle(const quiver_on_torus& q, const index_set& I)
{
    std::vector<vertex_mask> out;
    const std::size_t n = q.num_vertices();
    for (vertex_mask s = 1; s + 1 < (vertex_mask{1} << n); ++s) {
        bool closed = true;
        for (std::size_t a = 0; a < q.num_arrows(); ++a)
            if (!I.test(a) && in_mask(s, q.arrows[a].src) && !in_mask(s, q.arrows[a].tgt))
                closed = false;
        if (closed)
            out.push_back(s);
    }
    return out;
}

index_set union_of(const std::vector<perfect_matching>& ms, const std::vector<std::size_t>& ids)
{
    index_set I(ms.front().arrows.size());
    for (auto k : ids)
        I |= ms[k].arrows;
    return I;
}

bool is_stable_union(const setup& s, const int_vector& theta, std::vector<std::size_t> ids)
{
    const auto I = union_of(s.ms, ids);
    return is_w_compatible(s.q, I) && is_theta_stable(s.q, I, theta);
}

} // namespace

TEST(Genericity, Examples)
{
    EXPECT_TRUE(is_generic({-2, 1, 1}));
    EXPECT_FALSE(is_generic({0, 0, 0}));
    EXPECT_FALSE(is_generic({-1, 1, 0}));
    EXPECT_TRUE(is_generic({0}));
    const auto q = fixtures::spp();
    EXPECT_THROW(
        {
            try {
                check_theta(q, {1, 1, 1});
            } catch (const error& e) {
                EXPECT_EQ(e.code(), error_code::invalid_theta);
                throw;
            }
        },
        error);
    EXPECT_THROW(check_theta(q, {1, -1}), error);
}

TEST(Genericity, NongenericThetaIsRejected)
{
    const auto s = make(fixtures::spp());
    try {
        is_theta_stable(s.q, s.ms[0].arrows, {-1, 1, 0});
        FAIL() << "expected an error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), error_code::nongeneric_theta);
    }
}

TEST(WCompatibility, EmptyAndMatchings)
{
    for (const auto& name : fixtures::names()) {
        const auto s = make(fixtures::by_name(name));
        EXPECT_TRUE(is_w_compatible(s.q, s.q.empty_arrow_set())) << name;
        for (const auto& m : s.ms)
            EXPECT_TRUE(is_w_compatible(s.q, m.arrows)) << name << " " << matching_label(m.id);
    }
}

TEST(WCompatibility, SppSingleArrow)
{
    const auto q = fixtures::spp();
    const auto I = q.arrow_set({"12"});
    EXPECT_EQ(is_w_compatible(q, I), w_compatible_oracle(q, I));
    // 12 lies in the face 11,12,21 and in 12,23,32,21; at arrow 11 one complement meets I, the other not
    EXPECT_FALSE(is_w_compatible(q, I));
}

class StabilityOracles : public ::testing::TestWithParam<std::string> {};

TEST_P(StabilityOracles, WCompatibilityBruteForce)
{
    const auto q = fixtures::by_name(GetParam());
    ASSERT_LE(q.num_arrows(), 16u);
    for (unsigned long bits = 0; bits < (1ul << q.num_arrows()); ++bits) {
        const auto I = subset_of(q.num_arrows(), bits);
        ASSERT_EQ(is_w_compatible(q, I), w_compatible_oracle(q, I)) << bits;
    }
}

TEST_P(StabilityOracles, SubmoduleSupportsBruteForce)
{
    const auto q = fixtures::by_name(GetParam());
    ASSERT_LE(q.num_arrows(), 16u);
    for (unsigned long bits = 0; bits < (1ul << q.num_arrows()); ++bits) {
        const auto I = subset_of(q.num_arrows(), bits);
        ASSERT_EQ(submodule_supports(q, I), supports_oracle(q, I)) << bits;
    }
}

TEST_P(StabilityOracles, ExtremalMatchingsStableInEveryChamber)
{
    const auto s = make(fixtures::by_name(GetParam()));
    const auto d = make_toric_diagram(s.ms);
    const auto rep = chamber_decomposition(s.q, s.ms);
    for (const auto& c : rep.chambers)
        for (auto e : d.extremal_ids)
            EXPECT_TRUE(is_theta_stable(s.q, s.ms[e].arrows, c.representative))
                << matching_label(e) << " at " << to_string(c.representative);
}

TEST_P(StabilityOracles, RepresentativesReproduceSignVectors)
{
    const auto s = make(fixtures::by_name(GetParam()));
    const auto rep = chamber_decomposition(s.q, s.ms);
    std::set<std::vector<int>> seen;
    for (const auto& c : rep.chambers) {
        EXPECT_TRUE(is_generic(c.representative));
        EXPECT_EQ(sign_vector_of(c.representative, rep.hyperplanes), c.sign_vector);
        EXPECT_TRUE(seen.insert(c.sign_vector).second);
        EXPECT_TRUE(c.representative_minimal);
    }
    std::size_t grouped = 0;
    for (const auto& cl : rep.classes)
        grouped += cl.size();
    EXPECT_EQ(grouped, rep.chambers.size());
}

// Unions of stable matchings in every chamber: the union graph on the dimer
// has one non-trivial component, a cycle for pairs and a graph with two
// trivalent nodes of opposite colors for triples.
TEST_P(StabilityOracles, StableUnionsHaveExpectedShape)
{
    const auto s = make(fixtures::by_name(GetParam()));
    const auto g = extract_dimer(s.q);
    std::map<std::string, bool> white;
    for (const auto& w : g.white_nodes)
        white[w] = true;
    for (const auto& b : g.black_nodes)
        white[b] = false;

    const auto rep = chamber_decomposition(s.q, s.ms);
    for (const auto& c : rep.chambers)
        for (const auto& sub : c.stable_subsets) {
            if (sub.generators.size() < 2)
                continue;
            // components of the subgraph spanned by edges in the union
            std::map<std::string, std::string> parent;
            std::function<std::string(const std::string&)> root = [&](const std::string& x) {
                auto it = parent.find(x);
                if (it == parent.end() || it->second == x)
                    return x;
                return it->second = root(it->second);
            };
            std::map<std::string, int> valence;
            for (std::size_t a = 0; a < g.edges.size(); ++a)
                if (sub.arrows.test(a)) {
                    const auto& e = g.edges[a];
                    parent.emplace(e.white, e.white);
                    parent.emplace(e.black, e.black);
                    ++valence[e.white];
                    ++valence[e.black];
                    parent[root(e.white)] = root(e.black);
                }
            std::map<std::string, std::vector<std::string>> comps;
            for (const auto& [v, _] : valence)
                comps[root(v)].push_back(v);
            // a component with more than one edge; valence sum is twice the edge count
            std::vector<std::vector<std::string>> big;
            for (const auto& [_, vs] : comps) {
                int deg = 0;
                for (const auto& v : vs)
                    deg += valence[v];
                if (deg > 2)
                    big.push_back(vs);
            }
            ASSERT_EQ(big.size(), 1u) << to_string(c.representative);
            std::vector<std::string> tri;
            for (const auto& v : big[0]) {
                EXPECT_TRUE(valence[v] == 2 || valence[v] == 3);
                if (valence[v] == 3)
                    tri.push_back(v);
            }
            if (sub.generators.size() == 2) {
                EXPECT_TRUE(tri.empty());
            } else {
                ASSERT_EQ(tri.size(), 2u);
                EXPECT_NE(white[tri[0]], white[tri[1]]);
            }
        }
}

TEST_P(StabilityOracles, RelabelingVertices)
{
    const auto s = make(fixtures::by_name(GetParam()));
    const std::size_t n = s.q.num_vertices();
    std::mt19937 rng(7);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    quiver_on_torus p = s.q;
    for (std::size_t v = 0; v < n; ++v)
        p.vertices[perm[v]] = s.q.vertices[v];
    for (auto& a : p.arrows) {
        a.src = perm[a.src];
        a.tgt = perm[a.tgt];
    }
    const auto rep = chamber_decomposition(s.q, s.ms);
    for (const auto& c : rep.chambers) {
        int_vector pt(n);
        for (std::size_t v = 0; v < n; ++v)
            pt[perm[v]] = c.representative[v];
        for (const auto& m : s.ms)
            EXPECT_EQ(is_theta_stable(s.q, m.arrows, c.representative), is_theta_stable(p, m.arrows, pt));
    }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, StabilityOracles, ::testing::ValuesIn(fixtures::names()));

TEST(Supports, Examples)
{
    const auto q = fixtures::spp();
    EXPECT_TRUE(submodule_supports(q, q.empty_arrow_set()).empty());
    index_set all(q.num_arrows());
    all.set();
    EXPECT_EQ(submodule_supports(q, all).size(), 6u);
    const auto I5 = q.arrow_set({"12", "13"});
    // 12: 1->2 and 13: 1->3 are dropped; 2 and 3 each reach 1 and the other
    const auto sup = submodule_supports(q, I5);
    EXPECT_EQ(sup, supports_oracle(q, I5));
    const std::size_t v1 = q.vertex_index("1");
    for (auto m : sup)
        EXPECT_TRUE(in_mask(m, v1));
}

TEST(Stability, MonotoneUnderInclusion)
{
    const auto q = fixtures::spp();
    const std::size_t n1 = q.num_arrows();
    for (const auto& theta : reference::spp_thetas)
        for (unsigned long j = 0; j < (1ul << n1); ++j) {
            const auto J = subset_of(n1, j);
            if (!is_theta_stable(q, J, theta))
                continue;
            for (unsigned long i = j;; i = (i - 1) & j) {
                EXPECT_TRUE(is_theta_stable(q, subset_of(n1, i), theta));
                if (i == 0)
                    break;
            }
        }
}

TEST(Stability, SppFacts)
{
    const auto s = make(fixtures::spp());
    const auto L = reference::label_map(s.q, s.ms, reference::spp_matchings);
    const auto& th = reference::spp_thetas;
    for (std::size_t k = 0; k < 6; ++k) {
        const bool i5 = is_theta_stable(s.q, s.ms[L[4]].arrows, th[k]);
        const bool i6 = is_theta_stable(s.q, s.ms[L[5]].arrows, th[k]);
        EXPECT_EQ(i5, k == 1 || k == 2 || k == 3) << k;
        EXPECT_EQ(i6, k == 0 || k == 4 || k == 5) << k;
        EXPECT_EQ(stable_matching_ids(s.q, th[k], s.ms).size(), 5u);
        EXPECT_EQ(is_stable_union(s, th[k], {L[0], L[2]}), k == 1 || k == 5) << k;
        EXPECT_EQ(is_stable_union(s, th[k], {L[1], L[3]}), k == 2 || k == 4) << k;
    }
}

TEST(Stability, Z2Z2ReachabilityCriterion)
{
    const auto s = make(fixtures::z2z2());
    const int_vector theta = reference::z2z2_thetas[0];
    const std::size_t v0 = s.q.vertex_index("0");
    for (unsigned long bits = 0; bits < (1ul << s.q.num_arrows()); ++bits) {
        const auto I = subset_of(s.q.num_arrows(), bits);
        const auto cl = forward_closures(s.q, I);
        EXPECT_EQ(is_theta_stable(s.q, I, theta), cl[v0] == full_mask(4)) << bits;
    }
}

TEST(Stability, Z2Z2Facts)
{
    const auto s = make(fixtures::z2z2());
    const auto L = reference::label_map(s.q, s.ms, reference::z2z2_matchings);
    const auto d = make_toric_diagram(s.ms);
    auto non_extremal_stable = [&](const int_vector& theta) {
        std::set<std::size_t> out;
        for (auto id : stable_matching_ids(s.q, theta, s.ms))
            if (std::find(d.extremal_ids.begin(), d.extremal_ids.end(), id) == d.extremal_ids.end())
                out.insert(id);
        return out;
    };
    const auto& th = reference::z2z2_thetas;
    const std::set<std::size_t> i357{L[2], L[4], L[6]}, i356{L[2], L[4], L[5]};
    EXPECT_EQ(non_extremal_stable(th[0]), i357);
    EXPECT_EQ(non_extremal_stable(th[1]), i357);
    EXPECT_EQ(non_extremal_stable(th[2]), i356);
    EXPECT_TRUE(is_stable_union(s, th[0], {L[2], L[4]}));
    EXPECT_TRUE(is_stable_union(s, th[0], {L[4], L[6]}));
    EXPECT_TRUE(is_stable_union(s, th[0], {L[2], L[6]}));
    EXPECT_FALSE(is_stable_union(s, th[1], {L[2], L[4]}));
    EXPECT_FALSE(is_stable_union(s, th[2], {L[2], L[5]}));
}

TEST(Chambers, SppMatchesTable)
{
    const auto s = make(fixtures::spp());
    const auto rep = chamber_decomposition(s.q, s.ms);
    ASSERT_EQ(rep.chambers.size(), 6u);
    std::set<int_vector> reps, table(reference::spp_thetas.begin(), reference::spp_thetas.end());
    for (const auto& c : rep.chambers) {
        reps.insert(c.representative);
        int hits = 0;
        for (const auto& th : reference::spp_thetas)
            hits += sign_vector_of(th, rep.hyperplanes) == c.sign_vector ? 1 : 0;
        EXPECT_EQ(hits, 1);
        EXPECT_EQ(c.stable_matchings.size(), 5u);
    }
    EXPECT_EQ(reps, table);
}

TEST(Chambers, SmallCases)
{
    auto run = [](const quiver_on_torus& q) {
        auto s = make(q);
        return chamber_decomposition(s.q, s.ms);
    };
    auto h = std::async(std::launch::async, run, fixtures::honeycomb());
    auto c = std::async(std::launch::async, run, fixtures::conifold());
    auto z = std::async(std::launch::async, run, fixtures::z2z2());

    const auto hr = h.get();
    EXPECT_TRUE(hr.trivial);
    EXPECT_TRUE(hr.chambers.empty());

    const auto cr = c.get();
    ASSERT_EQ(cr.chambers.size(), 2u);
    std::set<int_vector> reps{cr.chambers[0].representative, cr.chambers[1].representative};
    EXPECT_EQ(reps, (std::set<int_vector>{{1, -1}, {-1, 1}}));

    const auto zr = z.get();
    for (const auto& th : reference::z2z2_thetas) {
        int hits = 0;
        for (const auto& ch : zr.chambers)
            hits += sign_vector_of(th, zr.hyperplanes) == ch.sign_vector ? 1 : 0;
        EXPECT_EQ(hits, 1) << to_string(th);
    }
}
