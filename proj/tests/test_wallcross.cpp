#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dtflop/wallcross.hpp>

#include <algorithm>
#include <numeric>
#include <set>

#include "test_common.hpp"

using namespace dtflop;
using dtflop::testing::cls;
using dtflop::testing::conifold_ptr;
using dtflop::testing::Gen;

namespace
{

Rational q(std::int64_t a, std::int64_t b = 1)
{
    return make_rational(a, b);
}

const Truncation box84{8, 4};

ChargePath ray(const Rational &b = q(-1, 2))
{
    return ChargePath::omega_ray(CentralCharge::large_volume(*conifold_ptr(), b, 1, {-1, 1}));
}

ChargePath xi()
{
    const auto &m = *conifold_ptr();
    return ChargePath::linear_xi(CentralCharge::nc_point(m, q(-1, 2), {-1, 0}, {-1, 1}),
                                 CentralCharge::nc_point(m, q(-1, 2), {-1, 2}, {-1, 1}));
}

ClassBox key_box(std::int64_t n, std::int64_t m)
{
    return ClassBox::symmetric({n, m}, 1);
}

bool primitive(std::int64_t n, std::int64_t m)
{
    return std::gcd(std::llabs(n), std::llabs(m)) == 1;
}

} // namespace

TEST_CASE("omega ray wall census")
{
    const auto events = detect_walls(ray(), *conifold_ptr(), key_box(6, 4));
    std::set<Monomial> seen;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto &e = events[i];
        const auto n = e.primitive.n, m = e.primitive.beta[0];
        CHECK(m > 0);
        CHECK(Rational(n) + q(m, 2) > 0);
        CHECK(primitive(n, m));
        CHECK(e.t_star == (Rational(n) + q(m, 2)) / m);
        CHECK(e.epsilon == 1);
        CHECK(seen.insert(e.primitive).second);
        if (i > 0) {
            CHECK(events[i - 1].t_star <= e.t_star);
        }
        for (const auto &k : e.multiples) {
            CHECK(k.n * m == k.beta[0] * n);
        }
    }
    std::size_t expected = 0;
    for (std::int64_t n = -6; n <= 6; ++n) {
        for (std::int64_t m = 1; m <= 4; ++m) {
            if (2 * n + m > 0 && primitive(n, m)) {
                ++expected;
                CHECK(seen.contains(Monomial{n, cls(m)}));
            }
        }
    }
    CHECK(seen.size() == expected);

    const auto first = std::find_if(events.begin(), events.end(),
                                    [](const WallEvent &e) { return e.primitive == Monomial{1, cls(1)}; });
    REQUIRE(first != events.end());
    CHECK(first->t_star == q(3, 2));
    CHECK(first->multiples == std::vector<Monomial>{{1, cls(1)}, {2, cls(2)}, {3, cls(3)}, {4, cls(4)}});
}

TEST_CASE("empty boxes have no walls")
{
    CHECK(detect_walls(ray(), *conifold_ptr(), key_box(0, 0)).empty());
}

TEST_CASE("linear_xi crosses one wall")
{
    const auto events = detect_walls(xi(), *conifold_ptr(), key_box(4, 4));
    REQUIRE_FALSE(events.empty());
    for (const auto &e : events) {
        CHECK(e.t_star == q(1, 2));
        CHECK(e.epsilon == 1);
        CHECK(Rational(e.primitive.n) + q(e.primitive.beta[0], 2) > 0);
    }
}

TEST_CASE("non-good paths are rejected with the offending class")
{
    const auto lv = CentralCharge::large_volume(*conifold_ptr(), 0, 1, {0, 1});
    try {
        detect_walls(ChargePath::omega_ray(lv), *conifold_ptr(), key_box(2, 2));
        FAIL("expected an error");
    } catch (const NonGoodPathError &e) {
        CHECK(e.offending.has_value());
    }
}

TEST_CASE("apply_crossing basics")
{
    const auto s = SupportSet::t_x(conifold_ptr());
    const auto one = ConeSeries::one(s, box84);
    CHECK(apply_crossing(one, {}, conifold_provider()) == one);

    const WallEvent e{1, {1, cls(0)}, {{1, cls(0)}}, 1};
    const auto ex = apply_crossing(one, {e}, table_provider({{Monomial{1, cls(0)}, 1}}));
    CHECK(ex == exp_monomial({1, cls(0)}, 1, s, box84));
    CHECK(ex.coefficient(3, cls(0)) == q(1, 6));

    CHECK_THROWS_AS(apply_crossing(one, {e}, table_provider({})), DomainError);
    const WallEvent neg{1, {-1, cls(2)}, {{-1, cls(2)}}, 1};
    CHECK_THROWS_AS(apply_crossing(one, {neg}, table_provider({}, Rational(1))), DomainError);
    // Zero weight never consults the provider.
    const WallEvent zero{1, {0, cls(1)}, {{0, cls(1)}}, 1};
    CHECK(apply_crossing(one, {zero}, table_provider({})) == one);
}

TEST_CASE("conifold walls multiply up to the PT series")
{
    const auto s = SupportSet::t_x(conifold_ptr());
    const auto events = detect_walls(ray(), *conifold_ptr(), class_box(s, box84));
    const auto out = apply_crossing(ConeSeries::one(s, box84), events, conifold_provider());
    CHECK(out == pt_closed_form(conifold_ptr(), box84));
    CHECK(out.coefficient(1, cls(1)) == 1);
}

TEST_CASE("scenario examples")
{
    const auto pt = run_scenario("pt_from_nc", conifold_ptr(), {6, 4});
    CHECK(pt.pass);
    CHECK(pt.series->coefficient(1, cls(1)) == 1);

    const auto nc = run_scenario("ncdt_product", conifold_ptr(), box84);
    CHECK(nc.pass);
    CHECK(nc.series->constant_term() == 1);
    CHECK(nc.series->coefficient(1, cls(0)) == -2);

    CHECK(run_scenario("pt_from_nc", conifold_ptr(), {0, 0}).pass);
    CHECK_THROWS_AS(run_scenario("no_such", conifold_ptr(), box84), ConfigurationError);
    ScenarioOptions outside;
    outside.b = q(-3, 2);
    CHECK_THROWS_AS(run_scenario("pt_from_nc", conifold_ptr(), box84, outside), ConfigurationError);
}

TEST_CASE("every scenario passes on the default box")
{
    for (const auto &name : scenario_names()) {
        const auto rep = run_scenario(name, conifold_ptr(), box84);
        INFO(name);
        for (const auto &c : rep.checks) {
            INFO(c.label << " " << c.detail);
            CHECK(c.pass);
        }
        CHECK(rep.pass);
        CHECK(rep.scenario == name);
    }
}

TEST_CASE("scenario outputs do not depend on B")
{
    ScenarioOptions third;
    third.b = q(-1, 3);
    const auto a = run_scenario("pt_from_nc", conifold_ptr(), box84);
    const auto b = run_scenario("pt_from_nc", conifold_ptr(), box84, third);
    CHECK(*a.series == *b.series);
}

TEST_CASE("log extraction matches the conifold provider on the walls")
{
    const auto s = SupportSet::p_t(conifold_ptr(), 0);
    const auto events = detect_walls(xi(), *conifold_ptr(), class_box(s, box84));
    const auto out = apply_crossing(ConeSeries::one(s, box84), events, conifold_provider());
    const auto n = extract_N(out);
    for (const auto &[k, v] : n) {
        if (Rational(k.n) + q(k.beta[0], 2) > 0) {
            CHECK(v == conifold_N(k.n, k.beta[0]));
        }
    }
    const auto hat = apply_crossing(ConeSeries::one(s, box84), events, hatted(conifold_provider()), CountingMode::euler);
    for (const auto &[k, v] : extract_N(hat, CountingMode::euler)) {
        if (Rational(k.n) + q(k.beta[0], 2) > 0) {
            CHECK(v == *hatted(conifold_provider())(k.n, k.beta));
        }
    }
}

TEST_CASE("property: random N round trip, telescoping and order independence")
{
    Gen g(dtflop::testing::seed_from_env() + 7);
    // |m| <= 3n holds every class the table touches.
    const auto s = SupportSet::custom(conifold_ptr(), {LinearForm{1, {0}}, LinearForm{3, {1}}, LinearForm{3, {-1}}});
    const Truncation t{6, 3};
    const auto &m0 = *conifold_ptr();
    const auto path = ChargePath::linear_xi(CentralCharge::nc_point(m0, q(-1, 100), {-1, 0}, {-1, 1}),
                                            CentralCharge::nc_point(m0, q(-1, 100), {-1, 2}, {-1, 1}));
    const auto events = detect_walls(path, m0, class_box(s, t));
    for (int trial = 0; trial < 20; ++trial) {
        std::map<Monomial, Rational> table;
        for (std::int64_t n = 1; n <= 6; ++n) {
            for (std::int64_t m = 0; m <= 3; ++m) {
                const auto v = g.rational();
                for (const auto sn : {n, -n}) {
                    table[{sn, cls(m)}] = v;
                    table[{sn, cls(-m)}] = v;
                }
            }
        }
        const auto provider = table_provider(table, Rational(0));
        const auto one = ConeSeries::one(s, t);
        const auto out = apply_crossing(one, events, provider);
        for (const auto &[k, v] : extract_N(out)) {
            CHECK(v == *provider(k.n, k.beta));
        }

        auto back = events;
        std::reverse(back.begin(), back.end());
        for (auto &e : back) {
            e.epsilon = -e.epsilon;
        }
        CHECK(apply_crossing(out, back, provider) == one);

        auto shuffled = events;
        std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
        CHECK(apply_crossing(one, shuffled, provider) == out);
    }
}
