#ifndef DTFLOP_WALLCROSS_HPP
#define DTFLOP_WALLCROSS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <dtflop/charges.hpp>
#include <dtflop/errors.hpp>
#include <dtflop/lattice.hpp>
#include <dtflop/oracles.hpp>
#include <dtflop/series.hpp>

namespace dtflop
{

// One ray of classes crossing at t_star. Keys are the monomials (n, beta) of
// heart classes -(n, beta, 0).
struct WallEvent {
    Rational t_star;
    Monomial primitive;
    std::vector<Monomial> multiples;
    int epsilon = 1;

    friend bool operator==(const WallEvent &, const WallEvent &) = default;
};

struct NonGoodPathError : DomainError {
    NonGoodPathError(const std::string &what, std::optional<GammaClass> offending)
        : DomainError(what), offending(std::move(offending))
    {
    }
    std::optional<GammaClass> offending;
};

// Classes -(n, beta) for every key (n, beta) of the window.
ClassBox class_box(const SupportSet &support, const Truncation &trunc);

// Events sorted by t, one per primitive ray; throws NonGoodPathError.
std::vector<WallEvent> detect_walls(const ChargePath &path, const FlopModel &model, const ClassBox &box);

// signed_count: factor exp(eps (-1)^(n-1) n N x^n y^beta); euler: exp(eps n N x^n y^beta).
enum class CountingMode { signed_count, euler };

Rational crossing_weight(const Monomial &key, CountingMode mode);

ConeSeries apply_crossing(const ConeSeries &start, const std::vector<WallEvent> &events, const NProvider &big_n,
                          CountingMode mode = CountingMode::signed_count);

// N on every key with n > 0, read off log(series) / crossing_weight.
std::map<Monomial, Rational> extract_N(const ConeSeries &series, CountingMode mode = CountingMode::signed_count);

struct ScenarioOptions {
    Rational b = make_rational(-1, 2);
    Complex z{-1, 1};
    // Buckets w + b <= pyramid_total are compared with the pyramid oracle.
    int pyramid_total = 10;
};

struct ScenarioCheck {
    std::string label;
    bool pass = false;
    std::optional<Monomial> first_mismatch;
    std::string detail;
};

struct ScenarioReport {
    std::string scenario;
    Truncation box;
    bool pass = false;
    std::vector<ScenarioCheck> checks;
    // Engine output of the main check.
    std::optional<ConeSeries> series;

    const ScenarioCheck *first_failure() const;
};

const std::vector<std::string> &scenario_names();

// pt_from_nc, ncdt_product, flop_symmetry, global_quotient or euler_hat.
ScenarioReport run_scenario(const std::string &name, const ModelPtr &model, const Truncation &box,
                            const ScenarioOptions &options = {});

// Seeded random N, symmetric under n -> -n and m -> -m, on 1 <= n <= 6, |m| <= 3
// and 0 elsewhere, crossed along a linear_xi path on the cone |m| <= 3n; every
// value must come back from log extraction.
ScenarioCheck n_round_trip(std::uint64_t seed, int trials);
// Plane partition counts against M(x) up to n_max.
ScenarioCheck plane_partition_check(int n_max);
// Pyramid dictionary fitted at total <= 8 and checked up to `total`.
ScenarioCheck pyramid_fit_check(int total);
// The three checks above as one report named "oracles".
ScenarioReport run_oracle_checks(std::uint64_t seed);

// Closed forms on the model's single exceptional class C.
// M(-x)^chi prod (1 - (-x)^k y)^k: DT(X/Y).
ConeSeries dt_closed_form(const ModelPtr &model, const Truncation &trunc);
// prod (1 - (-x)^k y)^k: PT(X/Y).
ConeSeries pt_closed_form(const ModelPtr &model, const Truncation &trunc);
// M(-x)^chi prod (1 - (-x)^k y)^k (1 - (-x)^k y^-1)^k on the perverse cone p = 0.
ConeSeries ncdt_closed_form(const ModelPtr &model, const Truncation &trunc);

} // namespace dtflop

#endif
