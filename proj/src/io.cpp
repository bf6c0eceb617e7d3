#include <dtflop/io.hpp>

#include <sstream>

namespace dtflop
{

namespace
{

Json big_int(const mpz_class &z)
{
    if (z.fits_slong_p()) {
        return static_cast<std::int64_t>(z.get_si());
    }
    return z.get_str();
}

mpz_class read_int(const Json &j)
{
    if (j.is_number_integer()) {
        return mpz_class(std::to_string(j.get<std::int64_t>()));
    }
    if (j.is_string()) {
        return mpz_class(j.get<std::string>());
    }
    throw std::invalid_argument("expected an integer, got " + j.dump());
}

Json beta_to_json(const CurveClass &beta)
{
    Json a = Json::array();
    for (const auto c : beta.coords()) {
        a.push_back(c);
    }
    return a;
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        out.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

void add_or_throw(ConeSeries &out, const Monomial &k, const Rational &c)
{
    if (k.beta.rank() != out.model().rank()) {
        throw std::invalid_argument("class " + to_string(k) + " has the wrong rank");
    }
    if (!out.add_term(k, c)) {
        throw std::invalid_argument("term at " + to_string(k) + " is outside the truncation");
    }
}

std::string beta_csv(const CurveClass &beta)
{
    std::string out;
    for (std::size_t i = 0; i < beta.rank(); ++i) {
        out += (i ? ";" : "") + std::to_string(beta[i]);
    }
    return out;
}

} // namespace

Json series_to_json(const ConeSeries &s)
{
    Json a = Json::array();
    for (const auto &[k, c] : s.terms()) {
        Json t;
        t["n"] = k.n;
        t["beta"] = beta_to_json(k.beta);
        t["num"] = big_int(c.get_num());
        t["den"] = big_int(c.get_den());
        a.push_back(std::move(t));
    }
    return a;
}

ConeSeries series_from_json(const Json &j, const SupportSet &support, const Truncation &trunc)
{
    if (!j.is_array()) {
        throw std::invalid_argument("a series is a JSON array of terms");
    }
    ConeSeries out{support, trunc};
    for (const auto &t : j) {
        std::vector<std::int64_t> beta = t.at("beta").get<std::vector<std::int64_t>>();
        Rational c(read_int(t.at("num")), read_int(t.at("den")));
        if (c.get_den() == 0) {
            throw std::invalid_argument("zero denominator");
        }
        c.canonicalize();
        add_or_throw(out, Monomial{t.at("n").get<std::int64_t>(), CurveClass(std::move(beta))}, c);
    }
    return out;
}

std::string write_series_json(const ConeSeries &s)
{
    return series_to_json(s).dump(2) + "\n";
}

ConeSeries read_series_json(const std::string &text, const SupportSet &support, const Truncation &trunc)
{
    return series_from_json(Json::parse(text), support, trunc);
}

std::string write_series_csv(const ConeSeries &s)
{
    std::ostringstream os;
    os << "n,beta,num,den\n";
    for (const auto &[k, c] : s.terms()) {
        os << k.n << ',' << beta_csv(k.beta) << ',' << c.get_num().get_str() << ',' << c.get_den().get_str() << '\n';
    }
    return os.str();
}

ConeSeries read_series_csv(const std::string &text, const SupportSet &support, const Truncation &trunc)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "n,beta,num,den") {
        throw std::invalid_argument("series CSV must start with the header n,beta,num,den");
    }
    ConeSeries out{support, trunc};
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 4) {
            throw std::invalid_argument("bad CSV row '" + line + "'");
        }
        std::vector<std::int64_t> beta;
        for (const auto &b : split(f[1], ';')) {
            beta.push_back(std::stoll(b));
        }
        Rational c{mpz_class{f[2]}, mpz_class{f[3]}};
        if (c.get_den() == 0) {
            throw std::invalid_argument("zero denominator");
        }
        c.canonicalize();
        add_or_throw(out, Monomial{std::stoll(f[0]), CurveClass(std::move(beta))}, c);
    }
    return out;
}

Json monomial_to_json(const Monomial &k)
{
    Json j;
    j["n"] = k.n;
    j["beta"] = beta_to_json(k.beta);
    return j;
}

Json walls_to_json(const std::vector<WallEvent> &events)
{
    Json a = Json::array();
    for (const auto &e : events) {
        Json j;
        j["t_num"] = big_int(e.t_star.get_num());
        j["t_den"] = big_int(e.t_star.get_den());
        Json classes = Json::array();
        for (const auto &k : e.multiples) {
            classes.push_back(monomial_to_json(k));
        }
        j["classes"] = std::move(classes);
        j["epsilon"] = e.epsilon;
        a.push_back(std::move(j));
    }
    return a;
}

std::string write_walls_csv(const std::vector<WallEvent> &events)
{
    std::ostringstream os;
    os << "t_num,t_den,n,beta,epsilon\n";
    for (const auto &e : events) {
        for (const auto &k : e.multiples) {
            os << e.t_star.get_num().get_str() << ',' << e.t_star.get_den().get_str() << ',' << k.n << ','
               << beta_csv(k.beta) << ',' << e.epsilon << '\n';
        }
    }
    return os.str();
}

Json report_to_json(const ScenarioReport &report)
{
    Json j;
    j["scenario"] = report.scenario;
    j["box"] = Json::array({report.box.n_max, report.box.m_max});
    j["status"] = report.pass ? "pass" : "fail";
    Json checks = Json::array();
    for (const auto &c : report.checks) {
        Json cj;
        cj["label"] = c.label;
        cj["status"] = c.pass ? "pass" : "fail";
        if (c.first_mismatch) {
            cj["first_mismatch"] = monomial_to_json(*c.first_mismatch);
        }
        if (!c.detail.empty()) {
            cj["detail"] = c.detail;
        }
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    if (const auto *f = report.first_failure(); f && f->first_mismatch) {
        j["first_mismatch"] = monomial_to_json(*f->first_mismatch);
    }
    j["series"] = report.series ? series_to_json(*report.series) : Json::array();
    return j;
}

std::string plane_counts_csv(const std::vector<std::int64_t> &counts)
{
    std::ostringstream os;
    os << "n,count\n";
    for (std::size_t n = 0; n < counts.size(); ++n) {
        os << n << ',' << counts[n] << '\n';
    }
    return os.str();
}

std::string pyramid_counts_csv(const PyramidTable &table)
{
    std::ostringstream os;
    os << "w,b,count\n";
    for (const auto &[k, c] : table) {
        os << k.first << ',' << k.second << ',' << c << '\n';
    }
    return os.str();
}

Json plane_counts_json(const std::vector<std::int64_t> &counts)
{
    Json a = Json::array();
    for (std::size_t n = 0; n < counts.size(); ++n) {
        a.push_back(Json{{"n", n}, {"count", counts[n]}});
    }
    return a;
}

Json pyramid_counts_json(const PyramidTable &table)
{
    Json a = Json::array();
    for (const auto &[k, c] : table) {
        a.push_back(Json{{"w", k.first}, {"b", k.second}, {"count", c}});
    }
    return a;
}

} // namespace dtflop
