#ifndef DTFLOP_SERIES_HPP
#define DTFLOP_SERIES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <dtflop/errors.hpp>
#include <dtflop/lattice.hpp>
#include <dtflop/rational.hpp>

namespace dtflop
{

// Truncated formal series sum a_{n,beta} x^n y^beta over exact rationals.
// Keys live in support() ∩ support().window(truncation()); everything there
// is known exactly, everything outside is unknown.
class ConeSeries
{
public:
    using Terms = std::map<Monomial, Rational>;

    ConeSeries(SupportSet support, Truncation trunc);

    static ConeSeries zero(const SupportSet &support, const Truncation &trunc);
    static ConeSeries one(const SupportSet &support, const Truncation &trunc);
    static ConeSeries monomial(const SupportSet &support, const Truncation &trunc, const Monomial &key, const Rational &c);

    const SupportSet &support() const
    {
        return support_;
    }
    const FlopModel &model() const
    {
        return support_.model();
    }
    const Truncation &truncation() const
    {
        return trunc_;
    }
    const Terms &terms() const
    {
        return terms_;
    }
    std::size_t size() const
    {
        return terms_.size();
    }

    // Coefficient at a key of the box or window; out_of_range where unknown.
    Rational coefficient(std::int64_t n, const CurveClass &beta) const;
    Rational coefficient(const Monomial &key) const;
    Rational constant_term() const;
    bool is_known(const Monomial &key) const;

    // Adds c to the coefficient at key. Keys outside the support throw,
    // keys outside the window are dropped (returns false).
    bool add_term(const Monomial &key, const Rational &c);

    ConeSeries &operator+=(const ConeSeries &o);
    ConeSeries &operator-=(const ConeSeries &o);
    ConeSeries &operator*=(const Rational &c);
    ConeSeries &operator*=(const ConeSeries &o);

    friend ConeSeries operator+(ConeSeries a, const ConeSeries &b)
    {
        return a += b;
    }
    friend ConeSeries operator-(ConeSeries a, const ConeSeries &b)
    {
        return a -= b;
    }
    friend ConeSeries operator*(ConeSeries a, const Rational &c)
    {
        return a *= c;
    }
    friend ConeSeries operator*(const ConeSeries &a, const ConeSeries &b);
    friend ConeSeries operator-(ConeSeries a)
    {
        return a *= Rational(-1);
    }

    // Same model, truncation and coefficients; the supports must describe the same set.
    friend bool operator==(const ConeSeries &a, const ConeSeries &b);

    // Terms with keys in the truncation box, lexicographic order.
    std::vector<std::pair<Monomial, Rational>> box_terms() const;

private:
    void require_compatible(const ConeSeries &o, const char *op) const;

    SupportSet support_;
    Truncation trunc_;
    Terms terms_;
};

// Sum of the gradings of the support; additive and positive away from 0 on T-type sets.
std::int64_t total_grading(const SupportSet &support, const Monomial &key);

ConeSeries inverse(const ConeSeries &a);
ConeSeries divide(const ConeSeries &a, const ConeSeries &b);
ConeSeries log(const ConeSeries &a);
ConeSeries exp(const ConeSeries &a);
ConeSeries pow(const ConeSeries &a, std::int64_t k);

// Re-index through flop_pushforward; the support follows to the flopped geometry.
ConeSeries substitute(const ConeSeries &a, FlopMode mode);

// (x, y) -> (-x, -y): coefficient times (-1)^(n + sum beta).
ConeSeries sign_twist(const ConeSeries &a);

// Same coefficients viewed in another support and/or truncation. Throws when a
// stored key leaves the target support or a target coefficient is unknown.
ConeSeries recast(const ConeSeries &a, const SupportSet &support, const Truncation &trunc);

// First key (lexicographic) where a and b differ on the box.
std::optional<Monomial> first_mismatch(const ConeSeries &a, const ConeSeries &b);

// exp(c x^n y^beta) on the window.
ConeSeries exp_monomial(const Monomial &key, const Rational &c, const SupportSet &support, const Truncation &trunc);

// exp((-1)^(n-1) n N x^n y^beta)^eps.
ConeSeries exp_factor(std::int64_t n, const CurveClass &beta, const Rational &big_n, int eps, const SupportSet &support,
                      const Truncation &trunc);

// prod_{k=1..k_max} (1 - (sign x)^k y^y_exp)^(exponent * k).
ConeSeries euler_product(std::int64_t k_max, int sign, const CurveClass &y_exp, std::int64_t exponent,
                         const SupportSet &support, const Truncation &trunc);

// M(-x)^chi = prod (1 - (-x)^k)^(-k chi).
ConeSeries macmahon(std::int64_t chi, const SupportSet &support, const Truncation &trunc);

} // namespace dtflop

#endif
