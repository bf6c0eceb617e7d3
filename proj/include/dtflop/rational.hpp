#ifndef DTFLOP_RATIONAL_HPP
#define DTFLOP_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dtflop
{

// Exact rational scalar used by every coefficient and every wall time.
using Rational = mpq_class;

// Builds num/den in canonical form. Throws std::invalid_argument on den == 0.
Rational make_rational(std::int64_t num, std::int64_t den = 1);

// Accepts "p", "-p", "p/q". Whitespace around the token is ignored.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational &q);

inline int sign(const Rational &q)
{
    return sgn(q);
}

// (-1)^k for any integer k.
inline int parity_sign(std::int64_t k)
{
    return (k % 2 == 0) ? 1 : -1;
}

} // namespace dtflop

#endif
