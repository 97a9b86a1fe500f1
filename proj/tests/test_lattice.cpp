#include <random>

#include <gtest/gtest.h>

#include <branetile/lattice.hpp>

#include "fixtures.hpp"

using namespace branetile;

namespace {

int_vector vertex_difference(const quiver_on_torus& q, std::size_t from, std::size_t to)
{
    int_vector v = zero_vector(q.num_vertices());
    v[to] += 1;
    v[from] -= 1;
    return v;
}

weak_path random_walk(const quiver_on_torus& q, std::mt19937& rng, std::size_t start, std::size_t len)
{
    weak_path u = trivial_path(start);
    std::size_t at = start;
    for (std::size_t k = 0; k < len; ++k) {
        std::vector<path_step> options;
        for (std::size_t a = 0; a < q.num_arrows(); ++a) {
            if (q.arrows[a].src == at)
                options.push_back({a, +1});
            if (q.arrows[a].tgt == at)
                options.push_back({a, -1});
        }
        const auto s = options[rng() % options.size()];
        u.steps.push_back(s);
        at = step_head(q, s);
    }
    return u;
}

} // namespace

TEST(LatticeTower, RanksOfFixtures)
{
    const auto spp = build_lattice_tower(fixtures::spp());
    EXPECT_EQ(spp.rank_Lambda, 5u);
    EXPECT_EQ(spp.rank_M, 3u);
    EXPECT_EQ(spp.rank_B, 2u);

    const auto hc = build_lattice_tower(fixtures::honeycomb());
    EXPECT_EQ(hc.rank_B, 0u);
    EXPECT_EQ(hc.rank_Lambda, 3u);
    EXPECT_EQ(hc.rank_M, 3u);

    const auto z = build_lattice_tower(fixtures::z2z2());
    EXPECT_EQ(z.rank_Lambda, 6u);
    EXPECT_EQ(z.rank_B, 3u);
    EXPECT_EQ(z.rank_M, 3u);
}

class TowerInvariants : public ::testing::TestWithParam<std::string> {};

TEST_P(TowerInvariants, Hold)
{
    const auto q = fixtures::by_name(GetParam());
    const auto t = build_lattice_tower(q);

    EXPECT_EQ(t.pi * t.lift, int_matrix::identity(t.rank_Lambda));
    EXPECT_TRUE((t.d * t.i).is_zero());
    EXPECT_EQ(t.rank_M + t.rank_B, t.rank_Lambda);
    EXPECT_EQ(rank_of(t.i), 3u);
    // M saturated in Lambda and equal to ker d
    EXPECT_TRUE(smith_normal_form(t.i).unimodular_factors());
    EXPECT_EQ(integer_kernel(t.d).cols(), 3u);
    EXPECT_EQ(rank_of(t.d), t.rank_B);
    EXPECT_TRUE(smith_normal_form(t.d).unimodular_factors());

    for (std::size_t a = 0; a < q.num_arrows(); ++a)
        EXPECT_EQ(t.d.apply(t.weight_of_arrow(a)), vertex_difference(q, q.arrows[a].src, q.arrows[a].tgt));
    for (std::size_t f = 0; f < q.num_faces(); ++f)
        EXPECT_EQ(weight_of_path(t, face_path(q, f)), t.omega_bar);

    EXPECT_EQ(t.omega_M, (int_vector{0, 0, 1}));
    EXPECT_EQ(t.i.apply(t.omega_M), t.omega_bar);
    EXPECT_EQ(t.proj_B.rows(), t.rank_B);
}

TEST_P(TowerInvariants, RandomWeakCyclesLieInM)
{
    const auto q = fixtures::by_name(GetParam());
    const auto t = build_lattice_tower(q);
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t start = rng() % q.num_vertices();
        auto u = random_walk(q, rng, start, 1 + rng() % 10);
        const std::size_t end = path_target(q, u);
        // close the walk along a path back to the start
        std::vector<std::size_t> parent(q.num_vertices(), q.num_arrows());
        std::vector<int> pexp(q.num_vertices(), 0);
        std::vector<bool> seen(q.num_vertices(), false);
        std::vector<std::size_t> queue{end};
        seen[end] = true;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const std::size_t v = queue[h];
            for (std::size_t a = 0; a < q.num_arrows(); ++a)
                for (int e : {+1, -1}) {
                    path_step s{a, e};
                    if (step_tail(q, s) != v || seen[step_head(q, s)])
                        continue;
                    seen[step_head(q, s)] = true;
                    parent[step_head(q, s)] = a;
                    pexp[step_head(q, s)] = e;
                    queue.push_back(step_head(q, s));
                }
        }
        std::vector<path_step> back;
        for (std::size_t v = start; v != end;) {
            path_step s{parent[v], pexp[v]};
            back.push_back(s);
            v = step_tail(q, s);
        }
        u.steps.insert(u.steps.end(), back.rbegin(), back.rend());
        ASSERT_EQ(path_target(q, u), start);
        const auto w = weight_of_path(t, u);
        ASSERT_TRUE(t.in_M(w));
        ASSERT_TRUE(t.to_M(w).has_value());
    }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, TowerInvariants, ::testing::ValuesIn(fixtures::names()));

TEST(WeakPath, WeightBasics)
{
    const auto q = fixtures::spp();
    const auto t = build_lattice_tower(q);
    EXPECT_TRUE(is_zero(weight_of_path(t, trivial_path(0))));
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
        weak_path u{q.arrows[a].src, {{a, +1}, {a, -1}}};
        EXPECT_TRUE(is_zero(weight_of_path(t, u)));
    }
    const auto u = parse_path(q, "13,32");
    EXPECT_EQ(q.vertices[u.source], "1");
    EXPECT_EQ(q.vertices[path_target(q, u)], "2");
    EXPECT_EQ(path_to_string(q, u), "13,32");
    EXPECT_EQ(path_to_string(q, parse_path(q, "e:2")), "e:2");
    const auto v = parse_path(q, "12, 23, 13^-1");
    EXPECT_EQ(path_target(q, v), q.vertex_index("1"));
    EXPECT_EQ(t.d.apply(weight_of_path(t, u)), vertex_difference(q, u.source, path_target(q, u)));
}

TEST(WeakPath, NonComposableIsRejected)
{
    const auto q = fixtures::spp();
    try {
        parse_path(q, "12,13");
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), error_code::noncomposable_path);
    }
    const auto t = build_lattice_tower(q);
    weak_path bad{0, {{q.arrow_index("23"), +1}}};
    EXPECT_THROW(weight_of_path(t, bad), error);
}

TEST(LatticeTower, DumpIsStable)
{
    const auto t = build_lattice_tower(fixtures::spp());
    EXPECT_EQ(lattice_dump(t), lattice_dump(build_lattice_tower(fixtures::spp())));
    const auto doc = nlohmann::json::parse(lattice_dump(t));
    EXPECT_EQ(doc["rank_Lambda"], 5);
}
