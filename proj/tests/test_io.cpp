#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dtflop/io.hpp>

#include "test_common.hpp"

using namespace dtflop;
using dtflop::testing::cls;
using dtflop::testing::conifold_ptr;
using dtflop::testing::Gen;

namespace
{

const Truncation box84{8, 4};

SupportSet tx()
{
    return SupportSet::t_x(conifold_ptr());
}

SupportSet nc()
{
    return SupportSet::p_t(conifold_ptr(), 0);
}

} // namespace

TEST_CASE("series JSON layout")
{
    ConeSeries s{tx(), box84};
    s.add_term({0, cls(0)}, 1);
    s.add_term({1, cls(1)}, make_rational(-3, 4));
    const auto j = series_to_json(s);
    REQUIRE(j.size() == 2);
    CHECK(j[0]["n"] == 0);
    CHECK(j[1]["beta"] == Json::array({1}));
    CHECK(j[1]["num"] == -3);
    CHECK(j[1]["den"] == 4);
    CHECK(j[1].begin().key() == "n");
}

TEST_CASE("series JSON and CSV round trips are byte-identical")
{
    Gen g(dtflop::testing::seed_from_env() + 11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = g.series(trial % 2 ? tx() : nc(), box84, 0.5);
        const auto text = write_series_json(s);
        const auto back = read_series_json(text, s.support(), s.truncation());
        CHECK(back == s);
        CHECK(write_series_json(back) == text);

        const auto csv = write_series_csv(s);
        const auto back_csv = read_series_csv(csv, s.support(), s.truncation());
        CHECK(back_csv == s);
        CHECK(write_series_csv(back_csv) == csv);
    }
}

TEST_CASE("large coefficients are written as strings")
{
    ConeSeries s{tx(), box84};
    Rational huge(mpz_class("123456789012345678901234567890"), mpz_class(11));
    huge.canonicalize();
    s.add_term({2, cls(1)}, huge);
    const auto text = write_series_json(s);
    CHECK(text.find("\"123456789012345678901234567890\"") != std::string::npos);
    CHECK(read_series_json(text, tx(), box84) == s);
}

TEST_CASE("malformed series input is rejected")
{
    CHECK_THROWS(read_series_json("{}", tx(), box84));
    CHECK_THROWS(read_series_json(R"([{"n": 1, "beta": [1], "num": 1, "den": 0}])", tx(), box84));
    CHECK_THROWS(read_series_json(R"([{"n": 99, "beta": [1], "num": 1, "den": 1}])", tx(), box84));
    CHECK_THROWS(read_series_json(R"([{"n": 1, "beta": [1, 2], "num": 1, "den": 1}])", tx(), box84));
    CHECK_THROWS(read_series_csv("a,b\n", tx(), box84));
    CHECK_THROWS(read_series_csv("n,beta,num,den\n1,1,1\n", tx(), box84));
}

TEST_CASE("CSV layout")
{
    const auto s = euler_product(1, -1, cls(1), 1, tx(), {1, 1});
    CHECK(write_series_csv(s) == "n,beta,num,den\n0,0,1,1\n1,1,1,1\n");
}

TEST_CASE("wall and report JSON")
{
    const WallEvent e{make_rational(3, 2), {1, cls(1)}, {{1, cls(1)}, {2, cls(2)}}, 1};
    const auto j = walls_to_json({e});
    CHECK(j[0]["t_num"] == 3);
    CHECK(j[0]["t_den"] == 2);
    CHECK(j[0]["classes"].size() == 2);
    CHECK(j[0]["epsilon"] == 1);
    CHECK(write_walls_csv({e}) == "t_num,t_den,n,beta,epsilon\n3,2,1,1,1\n3,2,2,2,1\n");

    ScenarioReport r;
    r.scenario = "demo";
    r.box = {2, 1};
    r.checks.push_back({"ok", true, std::nullopt, ""});
    r.checks.push_back({"bad", false, Monomial{1, cls(0)}, "engine 1, expected 2"});
    r.pass = false;
    r.series = ConeSeries::one(tx(), {2, 1});
    const auto rj = report_to_json(r);
    CHECK(rj["status"] == "fail");
    CHECK(rj["first_mismatch"]["n"] == 1);
    CHECK(rj["box"] == Json::array({2, 1}));
    CHECK(rj["series"].size() == 1);
    CHECK(rj["checks"][1]["detail"] == "engine 1, expected 2");
}

TEST_CASE("oracle tables")
{
    CHECK(plane_counts_csv({1, 1, 3}) == "n,count\n0,1\n1,1\n2,3\n");
    CHECK(pyramid_counts_csv({{{0, 0}, 1}, {{1, 0}, 1}}) == "w,b,count\n0,0,1\n1,0,1\n");
    CHECK(plane_counts_json({1, 1})[1]["count"] == 1);
    CHECK(pyramid_counts_json({{{1, 1}, 2}})[0]["b"] == 1);
}
