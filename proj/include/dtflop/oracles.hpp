#ifndef DTFLOP_ORACLES_HPP
#define DTFLOP_ORACLES_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <dtflop/errors.hpp>
#include <dtflop/lattice.hpp>
#include <dtflop/rational.hpp>
#include <dtflop/series.hpp>

namespace dtflop
{

struct OracleLimits {
    int plane = 14;
    int pyramid = 12;
};

// Plane partitions of each size 0..n_max by reverse search on height matrices.
std::vector<std::int64_t> plane_partition_counts(int n_max, const OracleLimits &limits = {});
// Same table from breadth-first growth of explicit cell sets.
std::vector<std::int64_t> plane_partition_counts_baseline(int n_max, const OracleLimits &limits = {});
std::int64_t count_plane_partitions(int n, const OracleLimits &limits = {});

// (white, black) stone counts.
using StoneCounts = std::pair<int, int>;
using PyramidTable = std::map<StoneCounts, std::int64_t>;

// Pyramid partitions of the length-one arrangement with w + b <= max_stones.
PyramidTable count_pyramid_partitions(int max_stones, const OracleLimits &limits = {});
PyramidTable count_pyramid_partitions_baseline(int max_stones, const OracleLimits &limits = {});

// (n, m) = (a0 w + a1 b + a2, a3 w + a4 b + a5) with sign (-1)^(s0 n + s1 m + s2).
struct VariableMap {
    std::array<int, 6> alpha{};
    std::array<int, 3> sign_rule{};

    Monomial apply(int w, int b) const;
    int sign(const Monomial &key) const;
    std::string describe() const;

    friend bool operator==(const VariableMap &, const VariableMap &) = default;
};

// Unique integer-affine dictionary with coefficients in [-2, 2] and parity sign
// rule under which signed counts equal the reference coefficients on every
// bucket with w + b <= total, empty buckets included. The reference is
// symmetric under m -> -m, so fits are returned with a4 > 0.
VariableMap fit_variable_map(const PyramidTable &counts, const ConeSeries &reference, int total);
// Candidates before the uniqueness check, for diagnostics.
std::vector<VariableMap> variable_map_candidates(const PyramidTable &counts, const ConeSeries &reference, int total);
bool map_holds(const VariableMap &map, const PyramidTable &counts, const ConeSeries &reference, int total);

// N_{n,0} = -chi sum_{d | n} d^2 / n^2, extended by n -> -n.
Rational point_N(std::int64_t chi, std::int64_t n);
// Conifold values: 1/m^2 when |m| divides n, point_N on m = 0.
Rational conifold_N(std::int64_t n, std::int64_t m, std::int64_t chi = 2);

// nullopt marks an undefined value.
using NProvider = std::function<std::optional<Rational>(std::int64_t n, const CurveClass &beta)>;

// conifold_N of the first coordinate; undefined when another coordinate is nonzero.
NProvider conifold_provider(std::int64_t chi = 2);
// Values for the unsigned series: (-1)^(|beta| + 1) N.
NProvider hatted(NProvider base);
// Fixed table; off the table the fallback, or undefined without one.
NProvider table_provider(std::map<Monomial, Rational> values, std::optional<Rational> fallback = std::nullopt);

} // namespace dtflop

#endif
