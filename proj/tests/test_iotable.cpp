#include "support.hpp"

#include "ionet/error.hpp"
#include "ionet/iotable.hpp"
#include "ionet/synthetic.hpp"

#include <doctest.h>

#include <sstream>

using namespace ionet;
using namespace ionet::testing;

namespace {

IOTable parse(const std::string& text) {
    std::istringstream in(text);
    return parse_io_table(in, "XX", 2005);
}

template <class Fn>
DataError capture_data_error(Fn&& fn) {
    try {
        fn();
    } catch (const DataError& e) {
        return e;
    }
    FAIL("expected DataError");
    return DataError("unreachable");
}

} // namespace

TEST_SUITE("iotable") {

TEST_CASE("two-sector file derives production") {
    const auto t = parse("sector,A,B,final_demand\nA,0,10,20\nB,5,0,10\n");
    CHECK(t.size() == 2);
    CHECK(t.production() == Vector{30, 15});
    CHECK(t.country() == "XX");
    CHECK(t.year() == 2005);
}

TEST_CASE("stated production that disagrees is rejected with its position") {
    const auto e = capture_data_error([] {
        parse("sector,A,B,final_demand,production\nA,0,10,20,30\nB,5,0,10,15.5\n");
    });
    CHECK(e.row() == 3u);
    CHECK(e.column() == 5u);
}

TEST_CASE("stated production within tolerance is kept verbatim") {
    const auto t = parse("sector,A,B,final_demand,production\nA,0,10,20,30.000001\nB,5,0,10,15\n");
    CHECK(t.production()[0] == 30.000001);
}

TEST_CASE("59-sector table") {
    SyntheticOptions opts;
    const auto t = synthetic_table("AT", 2005, opts);
    std::ostringstream os;
    write_io_table(os, t);
    const auto back = parse(os.str());
    CHECK(back.size() == 59);
}

TEST_CASE("malformed input is reported with row and column") {
    SUBCASE("negative flow") {
        const auto e = capture_data_error([] { parse("sector,A,B,final_demand\nA,0,10,20\nB,-5,0,10\n"); });
        CHECK(e.row() == 3u);
        CHECK(e.column() == 2u);
    }
    SUBCASE("non-numeric cell") {
        const auto e = capture_data_error([] { parse("sector,A,B,final_demand\nA,0,x,20\nB,5,0,10\n"); });
        CHECK(e.row() == 2u);
        CHECK(e.column() == 3u);
    }
    SUBCASE("short row") {
        const auto e = capture_data_error([] { parse("sector,A,B,final_demand\nA,0,10\nB,5,0,10\n"); });
        CHECK(e.row() == 2u);
    }
    SUBCASE("missing row") {
        CHECK_THROWS_AS(parse("sector,A,B,final_demand\nA,0,10,20\n"), DataError);
    }
    SUBCASE("extra row") {
        CHECK_THROWS_AS(parse("sector,A,B,final_demand\nA,0,10,20\nB,5,0,10\nC,1,1,1\n"), DataError);
    }
    SUBCASE("single sector") {
        CHECK_THROWS_AS(parse("sector,A,final_demand\nA,0,20\n"), DataError);
    }
    SUBCASE("row label out of order") {
        const auto e = capture_data_error([] { parse("sector,A,B,final_demand\nB,0,10,20\nA,5,0,10\n"); });
        CHECK(e.row() == 2u);
        CHECK(e.column() == 1u);
    }
    SUBCASE("missing final demand column") {
        const auto e = capture_data_error([] { parse("sector,A,B\nA,0,10\nB,5,0\n"); });
        CHECK(std::string(e.what()).find("final_demand") != std::string::npos);
    }
    SUBCASE("duplicate label") {
        CHECK_THROWS_AS(parse("sector,A,A,final_demand\nA,0,10,20\nA,5,0,10\n"), DataError);
    }
    SUBCASE("infinite value") {
        CHECK_THROWS_AS(parse("sector,A,B,final_demand\nA,0,inf,20\nB,5,0,10\n"), DataError);
    }
}

TEST_CASE("quoted labels, BOM, blank lines and CRLF") {
    const auto t = parse("\xEF\xBB\xBFsector,\"Food, beverages\",B,final_demand\r\n\r\n"
                         "\"Food, beverages\",1,2,3\r\nB,4,5,6\r\n");
    CHECK(t.labels()[0] == "Food, beverages");
    CHECK(t.production() == Vector{6, 15});
}

TEST_CASE("production") {
    CHECK(production(Matrix(3, 3), Vector{1, 2, 3}) == Vector{1, 2, 3});
    CHECK(production(Matrix{{0, 10}, {5, 0}}, Vector{20, 10}) == Vector{30, 15});
    CHECK(production(cycle_table().flows(), Vector{5, 5, 5}) == Vector{15, 15, 15});
    CHECK_THROWS_AS(production(Matrix(2, 2), Vector{1, 2, 3}), DataError);
}

TEST_CASE("constructor invariants") {
    CHECK_THROWS_AS(make_table(Matrix{{0, -1}, {0, 0}}, {1, 1}), DataError);
    CHECK_THROWS_AS(make_table(Matrix{{0, 1}, {0, 0}}, {-1, 1}), DataError);
    CHECK_THROWS_AS(make_table(Matrix(2, 3), {1, 1}), DataError);
    CHECK_THROWS_AS(IOTable("X", 1, {"A", "B"}, Matrix(2, 2), {1, 1}, Vector{1, 2}), DataError);
    CHECK_NOTHROW(IOTable("X", 1, {"A", "B"}, Matrix(2, 2), {1, 2}, Vector{1, 2}));
}

TEST_CASE("network view") {
    SUBCASE("self loops only") {
        const IONetwork net(Matrix{{1, 0}, {0, 2}});
        CHECK(net.adjacency() == Matrix(2, 2));
        CHECK(net.has_self_loop(0));
        CHECK(net.has_self_loop(1));
        CHECK(net.edge_count() == 0);
    }
    SUBCASE("mutual pair") {
        const IONetwork net(Matrix{{0, 10}, {5, 0}});
        CHECK(net.adjacency() == Matrix{{0, 1}, {1, 0}});
        CHECK_FALSE(net.has_self_loop(0));
    }
    SUBCASE("all-zero sector is isolated") {
        const auto t = load_fixture("isolated");
        const auto net = network_view(t);
        CHECK(net.isolated(3));
        CHECK_FALSE(net.isolated(0));
        CHECK(net.isolated_count() == 1);
    }
}

TEST_CASE("manifest supplies country and year") {
    const auto t = load_fixture("cycle");
    CHECK(t.country() == "CYC");
    CHECK(t.year() == 2005);
}

TEST_CASE("manifest fallback uses the file stem") {
    const auto dir = std::filesystem::temp_directory_path() / "ionet_manifest_fallback";
    std::filesystem::create_directories(dir);
    std::filesystem::copy_file(fixture_path("two_sector.csv"), dir / "ZZ.csv",
                               std::filesystem::copy_options::overwrite_existing);
    const auto t = load_io_table(dir / "ZZ.csv");
    CHECK(t.country() == "ZZ");
    CHECK(t.year() == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("property: parse, write, parse is bit-exact") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1e6);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t s = 2 + trial % 9;
        Matrix z(s, s);
        Vector d(s);
        for (std::size_t i = 0; i < s; ++i) {
            for (double& v : z.row(i)) v = (rng() % 3 == 0) ? 0.0 : u(rng) / 7.0;
            d[i] = u(rng) / 3.0;
        }
        const auto t = make_table(z, d, "RT");
        for (bool with_x : {true, false}) {
            std::ostringstream os;
            write_io_table(os, t, with_x);
            std::istringstream in(os.str());
            const auto back = parse_io_table(in, "RT", 2005);
            CHECK(back == t);
        }
    }
}

TEST_CASE("property: residuals stay within tolerance and no phantom edges") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = random_integer_table(rng, 2 + trial % 10, 0.4);
        for (double r : t.production_residuals()) CHECK(r <= kProductionTolerance);
        const auto net = network_view(t);
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = 0; j < t.size(); ++j)
                if (t.flows()(i, j) == 0.0) CHECK_FALSE(net.has_edge(i, j));
    }
}

TEST_CASE("save and load round trip through the manifest") {
    const auto dir = std::filesystem::temp_directory_path() / "ionet_save_load";
    const auto t = star_table();
    const auto csv = save_io_table(dir, t);
    CHECK(csv.filename() == "STR_2005.csv");
    CHECK(load_io_table(csv) == t);
    std::filesystem::remove_all(dir);
}

}
