#ifndef DTFLOP_CONFIG_HPP
#define DTFLOP_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <dtflop/rational.hpp>

namespace dtflop
{

// Plain-text "key = value" configuration. '#' starts a comment; keys may
// repeat, in which case every value is kept in file order.
class Config
{
public:
    static Config parse(std::string_view text);
    static Config load(const std::string &path);

    bool has(const std::string &key) const;
    // Last value for key; throws std::out_of_range when absent.
    const std::string &get(const std::string &key) const;
    std::optional<std::string> find(const std::string &key) const;
    std::vector<std::string> get_all(const std::string &key) const;
    std::vector<std::string> keys() const;

    std::int64_t get_int(const std::string &key) const;
    Rational get_rational(const std::string &key) const;

    void set(const std::string &key, std::string value);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

// "1, -2,3" -> {1, -2, 3}
std::vector<std::int64_t> parse_int_list(std::string_view text);
std::vector<Rational> parse_rational_list(std::string_view text);
std::int64_t parse_int(std::string_view text);

} // namespace dtflop

#endif
