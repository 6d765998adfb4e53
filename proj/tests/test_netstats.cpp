#include "support.hpp"

#include "ionet/error.hpp"
#include "ionet/netstats.hpp"

#include <doctest.h>

#include <numeric>

using namespace ionet;
using namespace ionet::testing;

namespace {

IONetwork permuted(const IONetwork& net, const std::vector<std::size_t>& p) {
    const std::size_t s = net.size();
    Matrix w(s, s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) w(p[i], p[j]) = net.weights()(i, j);
    return IONetwork(w);
}

const Matrix kFourNode{{0, 3, 1, 0}, {2, 0, 4, 1}, {0, 1, 0, 5}, {1, 0, 2, 0}};

} // namespace

TEST_SUITE("netstats") {

TEST_CASE("density") {
    CHECK(density(network_view(complete_table())) == 1.0);
    CHECK(density(network_view(cycle_table())) == 0.5);
    CHECK(density(IONetwork(Matrix{{5, 0}, {0, 5}})) == 0.0);
}

TEST_CASE("bilateral density") {
    CHECK(bilateral_density(IONetwork(Matrix{{0, 1}, {2, 0}})) == 1.0);
    CHECK(bilateral_density(network_view(cycle_table())) == 0.0);
    CHECK(bilateral_density(IONetwork(Matrix{{1, 0}, {0, 1}})) == 0.0);
    CHECK(bilateral_density(IONetwork(Matrix{{0, 1, 1}, {1, 0, 0}, {0, 0, 0}})) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("shortest paths") {
    SUBCASE("complete digraph") {
        const auto p = shortest_path_stats(network_view(complete_table()));
        CHECK(p.diameter == 1);
        CHECK(p.average_path_length == 1.0);
    }
    SUBCASE("one-way cycle") {
        const auto p = shortest_path_stats(network_view(cycle_table()));
        CHECK(p.diameter == 2);
        CHECK(p.average_path_length == 1.5);
        CHECK(p.reachable_pairs == 6);
        const auto u = shortest_path_stats(network_view(cycle_table()), PathMode::undirected);
        CHECK(u.diameter == 1);
        CHECK(u.average_path_length == 1.0);
    }
    SUBCASE("unreachable pairs are left out") {
        // A -> B -> C only: pairs (A,B)=1, (B,C)=1, (A,C)=2.
        const auto p = shortest_path_stats(IONetwork(Matrix{{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
        CHECK(p.diameter == 2);
        CHECK(p.average_path_length == doctest::Approx(4.0 / 3.0));
        CHECK(p.reachable_pairs == 3);
    }
    SUBCASE("isolated sector does not break the statistics") {
        const auto p = shortest_path_stats(network_view(load_fixture("isolated")));
        CHECK(p.reachable_pairs == 6);
    }
    SUBCASE("no reachable pair") {
        CHECK_THROWS_AS(shortest_path_stats(IONetwork(Matrix{{3, 0}, {0, 0}})), DataError);
    }
}

TEST_CASE("degree and strength profiles") {
    SUBCASE("star hub") {
        const auto p = degree_strength_profiles(network_view(one_way_star_table()));
        CHECK(p.out_degree[0] == 1.0);
        CHECK(p.in_degree[1] == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("cycle") {
        const auto p = degree_strength_profiles(network_view(cycle_table()));
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(p.in_degree[i] == 0.5);
            CHECK(p.out_degree[i] == 0.5);
        }
    }
    SUBCASE("self loops count in strength only") {
        const auto p = degree_strength_profiles(IONetwork(Matrix{{2, 10}, {5, 3}}));
        CHECK(p.out_strength == Vector{12, 8});
        CHECK(p.in_strength == Vector{7, 13});
        CHECK(p.out_degree == Vector{1, 1});
    }
}

TEST_CASE("ANND and ANNS") {
    SUBCASE("regular graph") {
        const auto nn = annd_anns(network_view(cycle_table()));
        for (const auto& v : nn.annd) CHECK(v == 2.0);
        CHECK_FALSE(nn.degree_annd.has_value());
        CHECK_FALSE(nn.strength_anns.has_value());
    }
    SUBCASE("star") {
        const auto net = network_view(star_table());
        const Vector k = total_degree(net);
        const auto nn = annd_anns(net);
        CHECK(nn.annd[0] == k[1]);
        for (std::size_t leaf = 1; leaf < 4; ++leaf) CHECK(nn.annd[leaf] == k[0]);
        REQUIRE(nn.degree_annd.has_value());
        CHECK(*nn.degree_annd == doctest::Approx(-1.0));
        REQUIRE(nn.strength_anns.has_value());
        CHECK(*nn.strength_anns == doctest::Approx(-1.0));
    }
    SUBCASE("nodes without neighbours have no average") {
        const auto nn = annd_anns(network_view(load_fixture("isolated")));
        CHECK_FALSE(nn.annd[3].has_value());
        CHECK(nn.annd[0].has_value());
    }
}

TEST_CASE("link-wise assortativity") {
    SUBCASE("complete digraph is undefined") {
        const auto a = linkwise_assortativity(network_view(complete_table()));
        CHECK_FALSE(a.binary.has_value());
        CHECK_FALSE(a.weighted.has_value());
    }
    SUBCASE("reciprocated star is disassortative") {
        const auto a = linkwise_assortativity(network_view(star_table()));
        REQUIRE(a.binary.has_value());
        CHECK(*a.binary == doctest::Approx(-1.0));
        REQUIRE(a.weighted.has_value());
        CHECK(*a.weighted < 0.0);
    }
    SUBCASE("one-way star has no source-side variance") {
        CHECK_FALSE(linkwise_assortativity(network_view(one_way_star_table())).binary.has_value());
    }
    SUBCASE("random 6-node tables match an explicit edge list") {
        std::mt19937_64 rng(31);
        int compared = 0;
        for (int trial = 0; trial < 40; ++trial) {
            const auto t = random_integer_table(rng, 6, 0.45);
            const Matrix& z = t.flows();
            std::vector<double> kd(6, 0.0), sd(6, 0.0);
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < 6; ++j) {
                    sd[i] += z(i, j);
                    sd[j] += z(i, j);
                    if (i != j && z(i, j) > 0) {
                        kd[i] += 1;
                        kd[j] += 1;
                    }
                }
            std::vector<double> ks, kt, ss, st;
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < 6; ++j)
                    if (i != j && z(i, j) > 0) {
                        ks.push_back(kd[i]);
                        kt.push_back(kd[j]);
                        ss.push_back(sd[i]);
                        st.push_back(sd[j]);
                    }
            const auto a = linkwise_assortativity(network_view(t));
            if (a.binary) {
                CHECK(*a.binary == doctest::Approx(reference_pearson(ks, kt)).epsilon(1e-12));
                ++compared;
            }
            if (a.weighted) CHECK(*a.weighted == doctest::Approx(reference_pearson(ss, st)).epsilon(1e-12));
        }
        CHECK(compared > 30);
    }
}

TEST_CASE("pearson") {
    CHECK(*pearson(Vector{1, 2, 3}, Vector{2, 4, 6}) == doctest::Approx(1.0));
    CHECK(*pearson(Vector{1, 2, 3}, Vector{3, 2, 1}) == doctest::Approx(-1.0));
    CHECK_FALSE(pearson(Vector{1, 1, 1}, Vector{1, 2, 3}).has_value());
    CHECK_FALSE(pearson(Vector{1}, Vector{1}).has_value());
}

TEST_CASE("HITS") {
    SUBCASE("mutual pair") {
        const auto h = hits_scores(IONetwork(Matrix{{0, 1}, {1, 0}}));
        for (double v : h.hub) CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0)));
        for (double v : h.authority) CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0)));
    }
    SUBCASE("one-way edge") {
        const auto h = hits_scores(IONetwork(Matrix{{0, 1}, {0, 0}}));
        CHECK(h.hub[0] == doctest::Approx(1.0));
        CHECK(h.hub[1] == doctest::Approx(0.0));
        CHECK(h.authority[1] == doctest::Approx(1.0));
        CHECK(h.authority[0] == doctest::Approx(0.0));
    }
    SUBCASE("4-node fixture against an eigensolver") {
        const IONetwork net(kFourNode);
        const auto h = hits_scores(net);
        const Vector auth = dominant_eigenvector(kFourNode.transposed() * kFourNode);
        const Vector hub = dominant_eigenvector(kFourNode * kFourNode.transposed());
        CHECK(max_abs_diff(h.authority, auth) <= 1e-9);
        CHECK(max_abs_diff(h.hub, hub) <= 1e-9);
    }
    SUBCASE("vectors are unit length and nonnegative") {
        std::mt19937_64 rng(32);
        for (int trial = 0; trial < 20; ++trial) {
            const auto h = hits_scores(network_view(random_integer_table(rng, 3 + trial % 12, 0.5)));
            double nh = 0, na = 0;
            for (std::size_t i = 0; i < h.hub.size(); ++i) {
                CHECK(h.hub[i] >= 0.0);
                CHECK(h.authority[i] >= 0.0);
                nh += h.hub[i] * h.hub[i];
                na += h.authority[i] * h.authority[i];
            }
            CHECK(nh == doctest::Approx(1.0));
            CHECK(na == doctest::Approx(1.0));
        }
    }
    SUBCASE("non-convergence is reported") {
        CHECK_THROWS_AS(hits_scores(IONetwork(kFourNode), 1e-15, 2), ConvergenceError);
    }
}

TEST_CASE("property: relabeling leaves densities unchanged") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 30; ++trial) {
        const auto net = network_view(random_integer_table(rng, 3 + trial % 8, 0.4));
        std::vector<std::size_t> p(net.size());
        std::iota(p.begin(), p.end(), std::size_t{0});
        std::shuffle(p.begin(), p.end(), rng);
        const auto q = permuted(net, p);
        CHECK(density(q) == density(net));
        CHECK(bilateral_density(q) == bilateral_density(net));
    }
}

TEST_CASE("property: transposition swaps in and out strength") {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = random_integer_table(rng, 2 + trial % 10, 0.5);
        const auto a = degree_strength_profiles(IONetwork(t.flows()));
        const auto b = degree_strength_profiles(IONetwork(t.flows().transposed()));
        CHECK(a.in_strength == b.out_strength);
        CHECK(a.out_strength == b.in_strength);
    }
}

TEST_CASE("property: authorities of Z are hubs of Z transposed") {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = random_integer_table(rng, 3 + trial % 10, 0.5);
        const auto a = hits_scores(IONetwork(t.flows()));
        const auto b = hits_scores(IONetwork(t.flows().transposed()));
        CHECK(max_abs_diff(a.authority, b.hub) <= 1e-9);
    }
}

TEST_CASE("property: APL never exceeds the diameter") {
    std::mt19937_64 rng(36);
    for (int trial = 0; trial < 60; ++trial) {
        const auto net = network_view(random_integer_table(rng, 2 + trial % 12, 0.1 + 0.01 * trial));
        if (net.edge_count() == 0) continue;
        for (auto mode : {PathMode::directed, PathMode::undirected}) {
            const auto p = shortest_path_stats(net, mode);
            CHECK(p.average_path_length <= p.diameter);
            CHECK(p.average_path_length >= 1.0);
        }
    }
}

TEST_CASE("topology summary") {
    const auto t = topology_summary(network_view(star_table()));
    CHECK(t.density == 0.5);
    CHECK(t.bilateral_density == 1.0);
    CHECK(t.diameter == 2);
    CHECK(t.average_path_length == 1.5);
    CHECK(t.isolated_count == 0);
    CHECK(t.edge_count == 6);
}

}
