#include <dtflop/config.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dtflop
{

namespace
{

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T, typename F>
std::vector<T> split_list(std::string_view text, F &&convert)
{
    std::vector<T> out;
    text = trim(text);
    if (text.empty()) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(convert(trim(text.substr(start, comma - start))));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

} // namespace

Config Config::parse(std::string_view text)
{
    Config cfg;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        }
        cfg.entries_.emplace_back(std::string{key}, std::string{trim(line.substr(eq + 1))});
    }
    return cfg;
}

Config Config::load(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool Config::has(const std::string &key) const
{
    return find(key).has_value();
}

const std::string &Config::get(const std::string &key) const
{
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        if (it->first == key) {
            return it->second;
        }
    }
    throw std::out_of_range("missing config key: " + key);
}

std::optional<std::string> Config::find(const std::string &key) const
{
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        if (it->first == key) {
            return it->second;
        }
    }
    return std::nullopt;
}

std::vector<std::string> Config::get_all(const std::string &key) const
{
    std::vector<std::string> out;
    for (const auto &[k, v] : entries_) {
        if (k == key) {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<std::string> Config::keys() const
{
    std::vector<std::string> out;
    for (const auto &[k, v] : entries_) {
        if (std::find(out.begin(), out.end(), k) == out.end()) {
            out.push_back(k);
        }
    }
    return out;
}

std::int64_t Config::get_int(const std::string &key) const
{
    return parse_int(get(key));
}

Rational Config::get_rational(const std::string &key) const
{
    return parse_rational(get(key));
}

void Config::set(const std::string &key, std::string value)
{
    entries_.emplace_back(key, std::move(value));
}

std::int64_t parse_int(std::string_view text)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("malformed integer: '" + std::string{text} + "'");
    }
    return value;
}

std::vector<std::int64_t> parse_int_list(std::string_view text)
{
    return split_list<std::int64_t>(text, [](std::string_view s) { return parse_int(s); });
}

std::vector<Rational> parse_rational_list(std::string_view text)
{
    return split_list<Rational>(text, [](std::string_view s) { return parse_rational(s); });
}

} // namespace dtflop
