#ifndef DTFLOP_TEST_COMMON_HPP
#define DTFLOP_TEST_COMMON_HPP

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <random>
#include <vector>

#include <dtflop/lattice.hpp>
#include <dtflop/rational.hpp>
#include <dtflop/series.hpp>

namespace dtflop::testing
{

inline std::uint64_t seed_from_env(std::uint64_t fallback = 20240611)
{
    if (const char *s = std::getenv("DTFLOP_SEED")) {
        return std::strtoull(s, nullptr, 10);
    }
    return fallback;
}

// Seeded value generators for property tests.
class Gen
{
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::int64_t integer(std::int64_t lo, std::int64_t hi)
    {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    bool coin()
    {
        return integer(0, 1) == 1;
    }
    Rational rational(std::int64_t span = 9, std::int64_t den_max = 6)
    {
        return make_rational(integer(-span, span), integer(1, den_max));
    }
    Rational nonzero_rational(std::int64_t span = 9, std::int64_t den_max = 6)
    {
        Rational q;
        do {
            q = rational(span, den_max);
        } while (q == 0);
        return q;
    }
    // Random series on the window with roughly `density` of the keys populated.
    ConeSeries series(const SupportSet &s, const Truncation &t, double density = 0.4, bool unit_constant = false)
    {
        ConeSeries out{s, t};
        const auto zero = Monomial{0, s.model().zero_class()};
        for (const auto &k : s.window(t)) {
            if (k == zero) {
                continue;
            }
            if (std::uniform_real_distribution<double>(0, 1)(rng_) < density) {
                out.add_term(k, rational());
            }
        }
        out.add_term(zero, unit_constant ? Rational(1) : rational());
        return out;
    }
    std::mt19937_64 &engine()
    {
        return rng_;
    }

private:
    std::mt19937_64 rng_;
};

// Dense bivariate truncated polynomial in x, y^(+-1) for rank-1 models, used
// as an independent reference: sum c[n][m + n_max] x^n y^m, 0 <= n <= n_max,
// |m| <= n_max. Factors built here never have |m| > n, so truncating by n alone
// is exact.
class DensePoly
{
public:
    explicit DensePoly(std::int64_t n_max)
        : n_max_(n_max), c_(n_max + 1, std::vector<Rational>(2 * n_max + 1, Rational(0)))
    {
        c_[0][n_max_] = 1;
    }

    Rational at(std::int64_t n, std::int64_t m) const
    {
        if (n < 0 || n > n_max_ || m < -n_max_ || m > n_max_) {
            return 0;
        }
        return c_[n][m + n_max_];
    }

    // *this *= (1 + c x^k y^e)
    void mul_binomial(const Rational &c, std::int64_t k, std::int64_t e)
    {
        for (std::int64_t n = n_max_; n >= k; --n) {
            for (std::int64_t m = -n_max_; m <= n_max_; ++m) {
                const auto src = at(n - k, m - e);
                if (src != 0) {
                    c_[n][m + n_max_] += c * src;
                }
            }
        }
    }

    // *this /= (1 + c x^k y^e), i.e. multiply by the geometric series.
    void div_binomial(const Rational &c, std::int64_t k, std::int64_t e)
    {
        for (std::int64_t n = k; n <= n_max_; ++n) {
            for (std::int64_t m = -n_max_; m <= n_max_; ++m) {
                const auto src = at(n - k, m - e);
                if (src != 0) {
                    c_[n][m + n_max_] -= c * src;
                }
            }
        }
    }

    // *this *= prod_{k=1..n_max} (1 - (sign x)^k y^e)^(exponent k)
    void mul_euler(int sign, std::int64_t e, std::int64_t exponent)
    {
        for (std::int64_t k = 1; k <= n_max_; ++k) {
            const Rational c = -Rational((k % 2 == 1 && sign < 0) ? -1 : 1);
            const auto reps = std::abs(exponent * k);
            for (std::int64_t r = 0; r < reps; ++r) {
                if (exponent > 0) {
                    mul_binomial(c, k, e);
                } else {
                    div_binomial(c, k, e);
                }
            }
        }
    }

    std::int64_t n_max() const
    {
        return n_max_;
    }

private:
    std::int64_t n_max_;
    std::vector<std::vector<Rational>> c_;
};

// Compare a rank-1 series against the dense reference on its box.
inline bool agrees_on_box(const ConeSeries &s, const DensePoly &d)
{
    const auto &t = s.truncation();
    for (std::int64_t n = 0; n <= std::min(t.n_max, d.n_max()); ++n) {
        for (std::int64_t m = -t.m_max; m <= t.m_max; ++m) {
            const Monomial k{n, CurveClass{m}};
            if (s.coefficient(k) != d.at(n, m)) {
                return false;
            }
        }
    }
    return true;
}

inline ModelPtr conifold_ptr()
{
    static const auto m = std::make_shared<const FlopModel>(FlopModel::conifold());
    return m;
}

inline CurveClass cls(std::int64_t m)
{
    return CurveClass{m};
}

} // namespace dtflop::testing

#endif
