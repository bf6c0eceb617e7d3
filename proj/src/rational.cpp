#include <dtflop/rational.hpp>

#include <cctype>
#include <stdexcept>

namespace dtflop
{

Rational make_rational(std::int64_t num, std::int64_t den)
{
    if (den == 0) {
        throw std::invalid_argument("rational with zero denominator");
    }
    Rational q{mpz_class{std::to_string(num)}, mpz_class{std::to_string(den)}};
    q.canonicalize();
    return q;
}

Rational parse_rational(std::string_view text)
{
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!text.empty() && is_space(text.front())) {
        text.remove_prefix(1);
    }
    while (!text.empty() && is_space(text.back())) {
        text.remove_suffix(1);
    }
    if (text.empty()) {
        throw std::invalid_argument("empty rational literal");
    }
    auto valid_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
            s.remove_prefix(1);
        }
        if (s.empty()) {
            return false;
        }
        for (char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                return false;
            }
        }
        return true;
    };
    const auto slash = text.find('/');
    std::string num{text.substr(0, slash)};
    std::string den = slash == std::string_view::npos ? std::string{"1"} : std::string{text.substr(slash + 1)};
    if (!num.empty() && num.front() == '+') {
        num.erase(0, 1);
    }
    if (!valid_int(num) || !valid_int(den) || den.front() == '-') {
        throw std::invalid_argument("malformed rational literal: " + std::string{text});
    }
    if (den.front() == '+') {
        den.erase(0, 1);
    }
    mpz_class d{den};
    if (d == 0) {
        throw std::invalid_argument("rational with zero denominator: " + std::string{text});
    }
    Rational q{mpz_class{num}, d};
    q.canonicalize();
    return q;
}

std::string to_string(const Rational &q)
{
    return q.get_str();
}

} // namespace dtflop
