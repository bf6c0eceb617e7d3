#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dtflop/oracles.hpp>

#include "test_common.hpp"

using namespace dtflop;
using dtflop::testing::cls;
using dtflop::testing::conifold_ptr;

namespace
{

Rational q(std::int64_t a, std::int64_t b = 1)
{
    return make_rational(a, b);
}

SupportSet nc()
{
    return SupportSet::p_t(conifold_ptr(), 0);
}

// M(-x)^2 prod (1 - (-x)^k y)^k (1 - (-x)^k y^-1)^k.
ConeSeries ncdt_closed_form(const Truncation &t)
{
    const auto s = nc();
    return macmahon(2, s, t) * euler_product(t.n_max, -1, cls(1), 1, s, t)
           * euler_product(t.n_max, -1, cls(-1), 1, s, t);
}

} // namespace

TEST_CASE("plane partition counts")
{
    const std::vector<std::int64_t> expected{1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500, 859, 1479};
    CHECK(plane_partition_counts(12) == expected);
    CHECK(count_plane_partitions(0) == 1);
    CHECK(count_plane_partitions(1) == 1);
    CHECK(count_plane_partitions(4) == 13);
    CHECK(plane_partition_counts(0) == std::vector<std::int64_t>{1});
    CHECK(plane_partition_counts_baseline(12) == expected);
    CHECK_THROWS_AS(plane_partition_counts(15), LimitError);
    CHECK_THROWS_AS(plane_partition_counts(-1), std::invalid_argument);
    CHECK(plane_partition_counts(16, OracleLimits{16, 12}).size() == 17);
}

TEST_CASE("plane partitions against the MacMahon series")
{
    const auto tx = SupportSet::t_x(conifold_ptr());
    const Truncation t{14, 0};
    const auto m = euler_product(14, 1, cls(0), -1, tx, t);
    const auto counts = plane_partition_counts(14);
    for (int n = 0; n <= 14; ++n) {
        CHECK(m.coefficient(n, cls(0)) == Rational(counts[static_cast<std::size_t>(n)]));
    }
}

TEST_CASE("pyramid partition counts")
{
    const auto table = count_pyramid_partitions(6);
    const std::map<StoneCounts, std::int64_t> known{{{0, 0}, 1}, {{1, 0}, 1}, {{1, 1}, 2}, {{1, 2}, 1},
                                                    {{2, 1}, 4}, {{2, 2}, 8}, {{2, 3}, 4}, {{3, 1}, 2},
                                                    {{3, 2}, 14}, {{3, 3}, 24}, {{4, 2}, 8}};
    for (const auto &[k, v] : known) {
        CHECK(table.at(k) == v);
    }
    // No black stone without the top white one.
    for (const auto &[k, v] : table) {
        CHECK((k.first >= 1 || k.second == 0));
        CHECK(k.first + k.second <= 6);
    }
    CHECK(count_pyramid_partitions(0) == PyramidTable{{{0, 0}, 1}});
    CHECK(count_pyramid_partitions(2) == PyramidTable{{{0, 0}, 1}, {{1, 0}, 1}, {{1, 1}, 2}});
    CHECK_THROWS_AS(count_pyramid_partitions(13), LimitError);
}

TEST_CASE("pyramid reverse search agrees with the set-based baseline")
{
    CHECK(count_pyramid_partitions(9) == count_pyramid_partitions_baseline(9));
}

TEST_CASE("pyramid buckets are stable under growth")
{
    const auto small = count_pyramid_partitions(7);
    const auto large = count_pyramid_partitions(10);
    for (const auto &[k, v] : small) {
        CHECK(large.at(k) == v);
    }
}

TEST_CASE("variable map fit")
{
    const Truncation t{10, 10};
    const auto reference = ncdt_closed_form(t);
    const auto counts = count_pyramid_partitions(10);
    const auto map = fit_variable_map(counts, reference, 8);
    // Dimension vector (n, n + m) = (w, b).
    CHECK(map.alpha == std::array<int, 6>{1, 0, 0, -1, 1, 0});
    CHECK(map.apply(1, 0) == Monomial{1, cls(-1)});
    CHECK(map.apply(1, 1) == Monomial{1, cls(0)});
    CHECK(reference.coefficient(1, cls(-1)) == 1);
    CHECK(reference.coefficient(1, cls(0)) == -2);
    CHECK(map.sign(Monomial{0, cls(0)}) == 1);
    CHECK(map_holds(map, counts, reference, 10));
    MESSAGE(map.describe());

    // Against the constant series nothing fits.
    CHECK_THROWS_AS(fit_variable_map(counts, ConeSeries::one(nc(), t), 8), DomainError);
}

TEST_CASE("the fitted map keeps holding at higher order")
{
    const Truncation t{12, 12};
    const auto reference = ncdt_closed_form(t);
    const auto counts = count_pyramid_partitions(12);
    const auto map = fit_variable_map(count_pyramid_partitions(8), ncdt_closed_form({10, 10}), 8);
    CHECK(map_holds(map, counts, reference, 12));
}

TEST_CASE("N values")
{
    CHECK(conifold_N(1, 1) == 1);
    CHECK(conifold_N(2, 1) == 1);
    CHECK(conifold_N(3, 2) == 0);
    CHECK(conifold_N(2, 2) == q(1, 4));
    CHECK(conifold_N(0, 3) == q(1, 9));
    CHECK(point_N(2, 1) == -2);
    CHECK(point_N(2, 2) == q(-5, 2));
    CHECK(point_N(0, 7) == 0);
    CHECK(conifold_N(3, 0) == point_N(2, 3));
    CHECK_THROWS_AS(point_N(2, 0), DomainError);

    for (std::int64_t n = -8; n <= 8; ++n) {
        for (std::int64_t m = -4; m <= 4; ++m) {
            CHECK(conifold_N(n, m) == conifold_N(-n, m));
            CHECK(conifold_N(n, m) == conifold_N(n, -m));
        }
    }

    const auto p = conifold_provider(2);
    CHECK(p(2, cls(2)) == q(1, 4));
    CHECK(p(2, CurveClass{1, 0}) == 1);
    CHECK_FALSE(p(2, CurveClass{1, 1}).has_value());
    const auto h = hatted(p);
    CHECK(h(1, cls(1)) == 1);
    CHECK(h(1, cls(2)) == 0);
    CHECK(h(2, cls(2)) == q(-1, 4));
    CHECK(h(3, cls(0)) == -point_N(2, 3));

    const auto tab = table_provider({{Monomial{1, cls(1)}, q(3)}});
    CHECK(tab(1, cls(1)) == 3);
    CHECK_FALSE(tab(2, cls(1)).has_value());
    CHECK(table_provider({}, Rational(0))(5, cls(2)) == 0);
}

TEST_CASE("closed-form N values match log extraction")
{
    const auto s = nc();
    const Truncation t{8, 4};
    const auto pt = euler_product(8, -1, cls(1), 1, s, t);
    const auto pt_inv = euler_product(8, -1, cls(-1), 1, s, t);
    const auto m2 = macmahon(2, s, t);
    const auto l = log(pt * pt_inv * m2);
    for (const auto &k : s.window(t)) {
        if (k.n <= 0) {
            continue;
        }
        const Rational weight = Rational(parity_sign(k.n - 1) * k.n);
        CHECK(l.coefficient(k) == weight * conifold_N(k.n, k.beta[0]));
    }
}
