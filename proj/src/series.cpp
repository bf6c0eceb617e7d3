#include <dtflop/series.hpp>

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace dtflop
{

namespace
{

// Window keys ordered by total grading, ties broken lexicographically.
std::vector<Monomial> window_by_grading(const SupportSet &s, const Truncation &t)
{
    auto keys = s.window(t);
    std::vector<std::pair<std::int64_t, Monomial>> tagged;
    tagged.reserve(keys.size());
    for (auto &k : keys) {
        tagged.emplace_back(total_grading(s, k), std::move(k));
    }
    std::sort(tagged.begin(), tagged.end());
    std::vector<Monomial> out;
    out.reserve(tagged.size());
    for (auto &[g, k] : tagged) {
        out.push_back(std::move(k));
    }
    return out;
}

void require_monoid(const SupportSet &s, const char *op)
{
    if (!s.is_monoid()) {
        throw ConfigurationError(std::string(op) + ": needs a T-type support, got " + s.describe());
    }
}

bool all_leq(const std::vector<std::int64_t> &g, const std::vector<std::int64_t> &caps)
{
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] > caps[i]) {
            return false;
        }
    }
    return true;
}

} // namespace

ConeSeries::ConeSeries(SupportSet support, Truncation trunc) : support_(std::move(support)), trunc_(trunc)
{
    if (trunc_.n_max < 0 || trunc_.m_max < 0) {
        throw ConfigurationError("truncation bounds must be non-negative");
    }
}

ConeSeries ConeSeries::zero(const SupportSet &support, const Truncation &trunc)
{
    return ConeSeries{support, trunc};
}

ConeSeries ConeSeries::one(const SupportSet &support, const Truncation &trunc)
{
    return monomial(support, trunc, Monomial{0, support.model().zero_class()}, Rational(1));
}

ConeSeries ConeSeries::monomial(const SupportSet &support, const Truncation &trunc, const Monomial &key, const Rational &c)
{
    ConeSeries s{support, trunc};
    s.add_term(key, c);
    return s;
}

bool ConeSeries::is_known(const Monomial &key) const
{
    if (key.beta.rank() != model().rank()) {
        return false;
    }
    return support_.in_window(key, trunc_) || (trunc_.in_box(key) && !support_.contains(key));
}

Rational ConeSeries::coefficient(const Monomial &key) const
{
    if (!is_known(key)) {
        throw std::out_of_range("coefficient at " + to_string(key) + " is outside the truncation");
    }
    const auto it = terms_.find(key);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational ConeSeries::coefficient(std::int64_t n, const CurveClass &beta) const
{
    return coefficient(Monomial{n, beta});
}

Rational ConeSeries::constant_term() const
{
    return coefficient(Monomial{0, model().zero_class()});
}

bool ConeSeries::add_term(const Monomial &key, const Rational &c)
{
    if (!support_.contains(key)) {
        throw ConfigurationError("key " + to_string(key) + " is outside the support " + support_.describe());
    }
    if (!support_.in_window(key, trunc_)) {
        return false;
    }
    if (c == 0) {
        return true;
    }
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
    return true;
}

void ConeSeries::require_compatible(const ConeSeries &o, const char *op) const
{
    if (!(trunc_ == o.trunc_)) {
        throw ConfigurationError(std::string(op) + ": truncations differ");
    }
    if (!(model() == o.model())) {
        throw ConfigurationError(std::string(op) + ": models differ");
    }
}

ConeSeries &ConeSeries::operator+=(const ConeSeries &o)
{
    require_compatible(o, "add");
    if (!(support_ == o.support_)) {
        throw ConfigurationError("add: supports differ (" + support_.describe() + " vs " + o.support_.describe() + ")");
    }
    for (const auto &[k, c] : o.terms_) {
        add_term(k, c);
    }
    return *this;
}

ConeSeries &ConeSeries::operator-=(const ConeSeries &o)
{
    return *this += -o;
}

ConeSeries &ConeSeries::operator*=(const Rational &c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto &[k, v] : terms_) {
        v *= c;
    }
    return *this;
}

ConeSeries &ConeSeries::operator*=(const ConeSeries &o)
{
    return *this = *this * o;
}

ConeSeries operator*(const ConeSeries &a, const ConeSeries &b)
{
    a.require_compatible(b, "mul");
    const ConeSeries *s_part = nullptr;
    const ConeSeries *t_part = nullptr;
    if (a.support_ == b.support_ && a.support_.is_monoid()) {
        s_part = &a;
        t_part = &b;
    } else if (!a.support_.is_monoid() && b.support_ == a.support_.companion()) {
        s_part = &a;
        t_part = &b;
    } else if (!b.support_.is_monoid() && a.support_ == b.support_.companion()) {
        s_part = &b;
        t_part = &a;
    } else {
        throw ConfigurationError("mul: supports " + a.support_.describe() + " and " + b.support_.describe()
                                 + " do not form a ring or module pair");
    }
    const auto &out_support = s_part->support_;
    const auto caps = out_support.caps(a.trunc_);

    struct Term {
        const Monomial *key;
        const Rational *c;
        std::vector<std::int64_t> g;
    };
    auto tag = [&](const ConeSeries &x) {
        std::vector<Term> v;
        v.reserve(x.terms_.size());
        for (const auto &[k, c] : x.terms_) {
            v.push_back({&k, &c, out_support.gradings(k)});
        }
        return v;
    };
    const auto ts = tag(*s_part);
    const auto tt = tag(*t_part);

    if (!out_support.is_monoid()) {
        // The T-factor of a product landing in the window must itself be in
        // the window; that needs every stored S-grading to be >= 0.
        for (const auto &x : ts) {
            if (std::any_of(x.g.begin(), x.g.end(), [](std::int64_t v) { return v < 0; })) {
                throw ConfigurationError("mul: S-type operand has a term " + to_string(*x.key)
                                         + " with negative grading, product is not exact on the window");
            }
        }
    }

    ConeSeries out{out_support, a.trunc_};
    std::vector<std::int64_t> g;
    for (const auto &x : ts) {
        for (const auto &y : tt) {
            g = x.g;
            for (std::size_t i = 0; i < g.size(); ++i) {
                g[i] += y.g[i];
            }
            if (!all_leq(g, caps)) {
                continue;
            }
            Rational c = *x.c * *y.c;
            auto [it, inserted] = out.terms_.try_emplace(*x.key + *y.key, std::move(c));
            if (!inserted) {
                it->second += *x.c * *y.c;
            }
        }
    }
    std::erase_if(out.terms_, [](const auto &kv) { return kv.second == 0; });
    return out;
}

bool operator==(const ConeSeries &a, const ConeSeries &b)
{
    return a.trunc_ == b.trunc_ && a.support_ == b.support_ && a.terms_ == b.terms_;
}

std::vector<std::pair<Monomial, Rational>> ConeSeries::box_terms() const
{
    std::vector<std::pair<Monomial, Rational>> out;
    for (const auto &[k, c] : terms_) {
        if (trunc_.in_box(k)) {
            out.emplace_back(k, c);
        }
    }
    return out;
}

std::int64_t total_grading(const SupportSet &support, const Monomial &key)
{
    const auto g = support.gradings(key);
    return std::accumulate(g.begin(), g.end(), std::int64_t{0});
}

ConeSeries inverse(const ConeSeries &a)
{
    require_monoid(a.support(), "inverse");
    const Rational c0 = a.constant_term();
    if (c0 == 0) {
        throw DomainError("inverse: constant term is zero");
    }
    const Rational inv0 = 1 / c0;
    ConeSeries b = ConeSeries::zero(a.support(), a.truncation());
    std::map<Monomial, Rational> acc;
    const auto zero = Monomial{0, a.model().zero_class()};
    std::vector<std::pair<Monomial, Rational>> rest;
    for (const auto &[k, c] : a.terms()) {
        if (!(k == zero)) {
            rest.emplace_back(k, c);
        }
    }
    for (const auto &p : window_by_grading(a.support(), a.truncation())) {
        Rational v;
        if (p == zero) {
            v = inv0;
        } else {
            Rational s = 0;
            for (const auto &[y, ay] : rest) {
                const auto it = acc.find(p - y);
                if (it != acc.end()) {
                    s += ay * it->second;
                }
            }
            v = -s * inv0;
        }
        if (v != 0) {
            acc.emplace(p, v);
            b.add_term(p, v);
        }
    }
    return b;
}

ConeSeries divide(const ConeSeries &a, const ConeSeries &b)
{
    if (b.constant_term() != 1) {
        throw DomainError("divide: divisor must have constant term 1");
    }
    return a * inverse(b);
}

ConeSeries log(const ConeSeries &a)
{
    require_monoid(a.support(), "log");
    if (a.constant_term() != 1) {
        throw DomainError("log: constant term must be 1");
    }
    // log(a) = sum_p (D a / a)_p / g(p), D the grading derivation.
    ConeSeries da = ConeSeries::zero(a.support(), a.truncation());
    for (const auto &[k, c] : a.terms()) {
        da.add_term(k, c * total_grading(a.support(), k));
    }
    const ConeSeries q = da * inverse(a);
    ConeSeries out = ConeSeries::zero(a.support(), a.truncation());
    for (const auto &[k, c] : q.terms()) {
        out.add_term(k, c / total_grading(a.support(), k));
    }
    return out;
}

ConeSeries exp(const ConeSeries &f)
{
    require_monoid(f.support(), "exp");
    if (f.constant_term() != 0) {
        throw DomainError("exp: constant term must be 0");
    }
    // D e = (D f) e, solved in grading order.
    std::vector<std::pair<Monomial, Rational>> df;
    for (const auto &[k, c] : f.terms()) {
        df.emplace_back(k, c * total_grading(f.support(), k));
    }
    const auto zero = Monomial{0, f.model().zero_class()};
    std::map<Monomial, Rational> acc;
    ConeSeries e = ConeSeries::zero(f.support(), f.truncation());
    for (const auto &p : window_by_grading(f.support(), f.truncation())) {
        Rational v;
        if (p == zero) {
            v = 1;
        } else {
            Rational s = 0;
            for (const auto &[y, dy] : df) {
                const auto it = acc.find(p - y);
                if (it != acc.end()) {
                    s += dy * it->second;
                }
            }
            v = s / total_grading(f.support(), p);
        }
        if (v != 0) {
            acc.emplace(p, v);
            e.add_term(p, v);
        }
    }
    return e;
}

ConeSeries pow(const ConeSeries &a, std::int64_t k)
{
    if (k < 0) {
        return pow(inverse(a), -k);
    }
    ConeSeries result = ConeSeries::one(a.support(), a.truncation());
    ConeSeries base = a;
    while (k > 0) {
        if (k & 1) {
            result = result * base;
        }
        k >>= 1;
        if (k > 0) {
            base = base * base;
        }
    }
    return result;
}

ConeSeries substitute(const ConeSeries &a, FlopMode mode)
{
    ConeSeries out{a.support().pushed_forward(mode), a.truncation()};
    for (const auto &[k, c] : a.terms()) {
        if (!out.add_term(flop_pushforward(k, mode, a.model()), c)) {
            throw std::logic_error("substitute: image of " + to_string(k) + " left the window");
        }
    }
    return out;
}

ConeSeries sign_twist(const ConeSeries &a)
{
    ConeSeries out{a.support(), a.truncation()};
    for (const auto &[k, c] : a.terms()) {
        std::int64_t deg = k.n;
        for (auto b : k.beta.coords()) {
            deg += b;
        }
        out.add_term(k, parity_sign(deg) * c);
    }
    return out;
}

ConeSeries recast(const ConeSeries &a, const SupportSet &support, const Truncation &trunc)
{
    if (!(a.model() == support.model())) {
        throw ConfigurationError("recast: models differ");
    }
    ConeSeries out{support, trunc};
    for (const auto &[k, c] : a.terms()) {
        if (!support.contains(k)) {
            throw ConfigurationError("recast: key " + to_string(k) + " is not in " + support.describe());
        }
        out.add_term(k, c);
    }
    for (const auto &p : support.window(trunc)) {
        if (a.support().contains(p) && !a.support().in_window(p, a.truncation())) {
            throw ConfigurationError("recast: coefficient at " + to_string(p) + " is unknown in the source");
        }
    }
    return out;
}

std::optional<Monomial> first_mismatch(const ConeSeries &a, const ConeSeries &b)
{
    std::vector<Monomial> keys;
    for (const auto &[k, c] : a.box_terms()) {
        keys.push_back(k);
    }
    for (const auto &[k, c] : b.box_terms()) {
        keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (const auto &k : keys) {
        if (!a.is_known(k) || !b.is_known(k) || a.coefficient(k) != b.coefficient(k)) {
            return k;
        }
    }
    return std::nullopt;
}

ConeSeries exp_monomial(const Monomial &key, const Rational &c, const SupportSet &support, const Truncation &trunc)
{
    require_monoid(support, "exp_monomial");
    ConeSeries out = ConeSeries::one(support, trunc);
    if (c == 0) {
        return out;
    }
    if (key == Monomial{0, support.model().zero_class()}) {
        throw DomainError("exp_monomial: constant exponent");
    }
    // Gradings of key are >= 0 and not all zero, so multiples leave the
    // window for good once they leave it.
    Rational term = 1;
    Monomial p = Monomial{0, support.model().zero_class()};
    for (std::int64_t k = 1;; ++k) {
        p = p + key;
        term *= c;
        term /= k;
        if (!out.add_term(p, term)) {
            break;
        }
    }
    return out;
}

ConeSeries exp_factor(std::int64_t n, const CurveClass &beta, const Rational &big_n, int eps, const SupportSet &support,
                      const Truncation &trunc)
{
    if (n <= 0) {
        throw DomainError("exp_factor: n must be positive");
    }
    if (eps != 1 && eps != -1) {
        throw DomainError("exp_factor: eps must be +1 or -1");
    }
    const Rational c = eps * parity_sign(n - 1) * n * big_n;
    return exp_monomial(Monomial{n, beta}, c, support, trunc);
}

ConeSeries euler_product(std::int64_t k_max, int sign, const CurveClass &y_exp, std::int64_t exponent,
                         const SupportSet &support, const Truncation &trunc)
{
    require_monoid(support, "euler_product");
    if (sign != 1 && sign != -1) {
        throw DomainError("euler_product: sign must be +1 or -1");
    }
    ConeSeries out = ConeSeries::one(support, trunc);
    for (std::int64_t k = 1; k <= k_max; ++k) {
        const Monomial u{k, y_exp};
        if (!support.contains(u)) {
            throw ConfigurationError("euler_product: factor monomial " + to_string(u) + " is outside the support");
        }
        if (!support.in_window(u, trunc)) {
            continue;
        }
        // (1 - s^k u)^E = sum_j binom(E, j) (-s^k)^j u^j
        const std::int64_t e = exponent * k;
        const int step = -(k % 2 == 0 ? 1 : sign);
        ConeSeries factor = ConeSeries::one(support, trunc);
        Rational binom = 1;
        Monomial p = Monomial{0, support.model().zero_class()};
        for (std::int64_t j = 1;; ++j) {
            binom *= Rational(e - j + 1);
            binom /= j;
            if (binom == 0) {
                break;
            }
            p = p + u;
            const Rational c = (step == -1 && j % 2 == 1) ? Rational(-binom) : binom;
            if (!factor.add_term(p, c)) {
                break;
            }
        }
        out = out * factor;
    }
    return out;
}

ConeSeries macmahon(std::int64_t chi, const SupportSet &support, const Truncation &trunc)
{
    return euler_product(trunc.n_max, -1, support.model().zero_class(), -chi, support, trunc);
}

} // namespace dtflop
