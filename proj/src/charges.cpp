#include <dtflop/charges.hpp>

#include <dtflop/config.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>

namespace dtflop
{

Rational cross(const Complex &a, const Complex &b)
{
    return a.re * b.im - a.im * b.re;
}

Rational dot(const Complex &a, const Complex &b)
{
    return a.re * b.re + a.im * b.im;
}

bool same_ray(const Complex &a, const Complex &b)
{
    return cross(a, b) == 0 && dot(a, b) > 0;
}

std::string to_string(const Complex &z)
{
    return "(" + to_string(z.re) + ", " + to_string(z.im) + ")";
}

namespace
{

std::vector<Rational> scaled_h(const FlopModel &model, const Rational &s)
{
    std::vector<Rational> out;
    for (std::size_t i = 0; i < model.exceptional_rank(); ++i) {
        out.push_back(s * model.h_pairing()[i]);
    }
    return out;
}

std::vector<Rational> default_omega_prime(const FlopModel &model)
{
    std::vector<Rational> out;
    for (std::size_t j = model.exceptional_rank(); j < model.rank(); ++j) {
        const auto y = model.y_pairing()[j];
        out.emplace_back(y > 0 ? y : 1);
    }
    return out;
}

bool upper_quadrant_open(const Complex &z)
{
    return z.re < 0 && z.im > 0;
}

// arg in (pi/2, pi]
bool upper_quadrant_half_open(const Complex &z)
{
    return z.re < 0 && z.im >= 0;
}

// Level-0 classes of the box, zero excluded.
void for_each_level0(const FlopModel &model, const ClassBox &box, const std::function<void(const GammaClass &)> &fn)
{
    const auto r = model.rank();
    if (box.beta_lo.size() != r) {
        throw ConfigurationError("class box rank does not match the model");
    }
    GammaClass v{0, CurveClass(r), 0};
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == r) {
            if (v.n != 0 || !v.beta.is_zero()) {
                fn(v);
            }
            return;
        }
        if (!model.is_exceptional(i)) {
            if (box.beta_lo[i] <= 0 && 0 <= box.beta_hi[i]) {
                v.beta[i] = 0;
                rec(i + 1);
            }
            return;
        }
        for (auto c = box.beta_lo[i]; c <= box.beta_hi[i]; ++c) {
            v.beta[i] = c;
            rec(i + 1);
        }
    };
    for (auto n = box.n_lo; n <= box.n_hi; ++n) {
        v.n = n;
        rec(0);
    }
}

void require_level0(const GammaClass &v, const FlopModel &model)
{
    if (filtration_level(v, model) != 0) {
        throw std::invalid_argument("wall computations take level-0 classes only");
    }
}

} // namespace

std::vector<GammaClass> level0_classes(const FlopModel &model, const ClassBox &box)
{
    std::vector<GammaClass> out;
    for_each_level0(model, box, [&](const GammaClass &v) { out.push_back(v); });
    return out;
}

CentralCharge CentralCharge::large_volume(const FlopModel &model, const Rational &b_h, const Rational &omega,
                                          const Complex &z)
{
    CentralCharge c;
    c.family = ChargeFamily::large_volume;
    c.b = scaled_h(model, b_h);
    c.omega = omega;
    c.omega_prime = default_omega_prime(model);
    c.z = z;
    return c;
}

CentralCharge CentralCharge::nc_point(const FlopModel &model, const Rational &b_h, const Complex &z0, const Complex &z1)
{
    CentralCharge c;
    c.family = ChargeFamily::nc_point;
    c.b = scaled_h(model, b_h);
    c.omega_prime = default_omega_prime(model);
    c.z0 = z0;
    c.z = z1;
    return c;
}

bool CentralCharge::admissible() const
{
    const bool wprime = std::all_of(omega_prime.begin(), omega_prime.end(), [](const Rational &w) { return w > 0; });
    if (family == ChargeFamily::large_volume) {
        return omega > 0 && wprime && upper_quadrant_open(z);
    }
    return wprime && upper_quadrant_half_open(z0) && upper_quadrant_half_open(z) && !(z == Complex{-1, 0});
}

Complex evaluate(const CentralCharge &z, const GammaClass &v, const FlopModel &model)
{
    if (v.beta.rank() != model.rank()) {
        throw std::invalid_argument("class rank does not match the model");
    }
    if (z.b.size() != model.exceptional_rank() || z.omega_prime.size() != model.rank() - model.exceptional_rank()) {
        throw ConfigurationError("central charge data does not match the model");
    }
    switch (filtration_level(v, model)) {
        case 2:
            return Rational(v.r) * z.z;
        case 1: {
            Rational w = 0;
            for (std::size_t j = model.exceptional_rank(); j < model.rank(); ++j) {
                w += z.omega_prime[j - model.exceptional_rank()] * v.beta[j];
            }
            return {0, -w};
        }
        default:
            break;
    }
    Rational bl = 0, hl = 0;
    for (std::size_t i = 0; i < model.exceptional_rank(); ++i) {
        bl += z.b[i] * v.beta[i];
        hl += model.h_pairing()[i] * v.beta[i];
    }
    if (z.family == ChargeFamily::large_volume) {
        return {Rational(v.n) - bl, -z.omega * hl};
    }
    return Rational(bl - v.n) * z.z0;
}

double phase(const Complex &w)
{
    if (w.re == 0 && w.im == 0) {
        throw DomainError("phase of zero");
    }
    if (w.im < 0 || (w.im == 0 && w.re > 0)) {
        throw DomainError("value " + to_string(w) + " is outside the upper half plane");
    }
    if (w.im == 0) {
        return 1.0;
    }
    if (w.re == 0) {
        return 0.5;
    }
    return std::atan2(w.im.get_d(), w.re.get_d()) / std::numbers::pi;
}

double phase(const CentralCharge &z, const GammaClass &v, const FlopModel &model)
{
    return phase(evaluate(z, v, model));
}

bool b_in_pV(const std::vector<Rational> &b, int p, const FlopModel &model)
{
    if (b.size() != model.exceptional_rank()) {
        throw ConfigurationError("B must have one entry per exceptional class");
    }
    const int s = p == 0 ? 1 : -1;
    for (const auto &bi : b) {
        if (!(s * bi < 0)) {
            return false;
        }
    }
    for (const auto &zy : model.fundamental_cycles()) {
        Rational bz = 0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            bz += b[i] * zy[i];
        }
        if (!(s * bz > -1)) {
            return false;
        }
    }
    return true;
}

bool in_region(const CentralCharge &z, const RegionSpec &region, const FlopModel &model)
{
    using K = RegionSpec::Kind;
    switch (region.kind) {
        case K::U_X:
            return z.family == ChargeFamily::large_volume && z.admissible();
        case K::U_X_B:
            return z.family == ChargeFamily::large_volume && z.admissible() && z.b == region.b0;
        case K::pU:
            return z.family == ChargeFamily::nc_point && z.admissible() && b_in_pV(z.b, region.p, model);
        case K::pV:
            return z.family == ChargeFamily::nc_point && z.admissible() && b_in_pV(z.b, region.p, model)
                   && z.z0 == Complex{-1, 0};
    }
    return false;
}

std::vector<GammaClass> wall_set(const CentralCharge &z, const FlopModel &model, const ClassBox &box)
{
    const Complex o = evaluate(z, GammaClass{0, model.zero_class(), 1}, model);
    std::vector<GammaClass> out;
    for_each_level0(model, box, [&](const GammaClass &v) {
        if (same_ray(evaluate(z, v, model), o)) {
            out.push_back(v);
        }
    });
    return out;
}

std::string to_string(PathKind kind)
{
    switch (kind) {
        case PathKind::omega_ray:
            return "omega_ray";
        case PathKind::linear_xi:
            return "linear_xi";
        case PathKind::flop_ray:
            return "flop_ray";
    }
    return "?";
}

ChargePath ChargePath::omega_ray(const CentralCharge &base)
{
    if (base.family != ChargeFamily::large_volume) {
        throw ConfigurationError("omega_ray needs large-volume data");
    }
    return ChargePath{PathKind::omega_ray, base, base};
}

ChargePath ChargePath::flop_ray(const CentralCharge &base)
{
    if (base.family != ChargeFamily::large_volume) {
        throw ConfigurationError("flop_ray needs large-volume data");
    }
    return ChargePath{PathKind::flop_ray, base, base};
}

ChargePath ChargePath::linear_xi(const CentralCharge &from, const CentralCharge &to)
{
    if (from.family != ChargeFamily::nc_point || to.family != ChargeFamily::nc_point) {
        throw ConfigurationError("linear_xi interpolates nc-point data");
    }
    if (!(from.b == to.b) || !(from.omega_prime == to.omega_prime) || !(from.z == to.z)) {
        throw ConfigurationError("linear_xi endpoints may differ in z0 only");
    }
    return ChargePath{PathKind::linear_xi, to, from};
}

ChargePath ChargePath::from_config(const Config &cfg, const FlopModel &model)
{
    const auto kind = cfg.find("path").value_or("omega_ray");
    const Rational b = cfg.has("b") ? cfg.get_rational("b") : make_rational(-1, 2);
    auto complex_key = [&](const std::string &key, Complex fallback) {
        if (!cfg.has(key)) {
            return fallback;
        }
        const auto parts = parse_rational_list(cfg.get(key));
        if (parts.size() != 2) {
            throw ConfigurationError(key + " must be 're, im'");
        }
        return Complex{parts[0], parts[1]};
    };
    const Complex z = complex_key("z", {-1, 1});
    auto apply_common = [&](CentralCharge c) {
        if (cfg.has("omega_prime")) {
            c.omega_prime = parse_rational_list(cfg.get("omega_prime"));
        }
        return c;
    };
    if (kind == "omega_ray" || kind == "flop_ray") {
        const auto c = apply_common(CentralCharge::large_volume(model, b, 1, z));
        return kind == "omega_ray" ? omega_ray(c) : flop_ray(c);
    }
    if (kind == "linear_xi") {
        const auto from = apply_common(CentralCharge::nc_point(model, b, complex_key("z0_start", {-1, 0}), z));
        const auto to = apply_common(CentralCharge::nc_point(model, b, complex_key("z0", {-1, 2}), z));
        return linear_xi(from, to);
    }
    throw ConfigurationError("unknown path kind '" + kind + "'");
}

CentralCharge ChargePath::at(const Rational &t) const
{
    CentralCharge c = base;
    if (kind == PathKind::linear_xi) {
        c.z0 = t * base.z0 + Rational(1 - t) * start.z0;
    } else {
        c.omega = t;
    }
    return c;
}

std::optional<Rational> ChargePath::lower() const
{
    if (kind == PathKind::flop_ray) {
        return std::nullopt;
    }
    return Rational(0);
}

std::optional<Rational> ChargePath::upper() const
{
    switch (kind) {
        case PathKind::omega_ray:
            return std::nullopt;
        case PathKind::flop_ray:
            return Rational(0);
        case PathKind::linear_xi:
            return Rational(1);
    }
    return std::nullopt;
}

bool ChargePath::in_domain(const Rational &t) const
{
    const auto lo = lower();
    const auto hi = upper();
    return (!lo || t > *lo) && (!hi || t < *hi);
}

AffineCharge affine_charge(const ChargePath &path, const GammaClass &v, const FlopModel &model)
{
    require_level0(v, model);
    Rational bl = 0, hl = 0;
    for (std::size_t i = 0; i < model.exceptional_rank(); ++i) {
        bl += path.base.b[i] * v.beta[i];
        hl += model.h_pairing()[i] * v.beta[i];
    }
    if (path.kind == PathKind::linear_xi) {
        const Rational w = bl - v.n;
        return {w * path.start.z0, w * (path.base.z0 - path.start.z0)};
    }
    return {{Rational(v.n) - bl, 0}, {0, -hl}};
}

Complex structure_sheaf_charge(const ChargePath &path)
{
    return path.base.z;
}

Crossing find_crossing(const ChargePath &path, const GammaClass &v, const FlopModel &model)
{
    const auto [p, q] = affine_charge(path, v, model);
    const Complex o = structure_sheaf_charge(path);
    const Rational cp = cross(p, o);
    const Rational cq = cross(q, o);
    if (cq == 0) {
        if (cp != 0) {
            return {};
        }
        // Aligned with the real line through Z(O_X) for every t.
        const Rational dp = dot(p, o), dq = dot(q, o);
        if (dp > 0 || dq != 0) {
            return {Crossing::Kind::tangential, 0};
        }
        return {};
    }
    const Rational t = -cp / cq;
    if (!path.in_domain(t)) {
        return {};
    }
    if (dot(p + t * q, o) <= 0) {
        return {};
    }
    return {Crossing::Kind::point, t};
}

std::optional<Rational> solve_wall_time(const ChargePath &path, const GammaClass &v, const FlopModel &model)
{
    const auto c = find_crossing(path, v, model);
    if (c.kind == Crossing::Kind::tangential) {
        throw DomainError("class " + to_string(Monomial{v.n, v.beta}) + " stays on the wall along the path");
    }
    if (c.kind == Crossing::Kind::none) {
        return std::nullopt;
    }
    return c.t;
}

GoodPathReport is_good_path(const ChargePath &path, const FlopModel &model, const ClassBox &box)
{
    GoodPathReport report;
    if (path.kind == PathKind::linear_xi && path.start.z0 == path.base.z0) {
        report.good = false;
        report.reason = "constant path";
        return report;
    }
    std::vector<std::pair<GammaClass, Rational>> hits;
    for_each_level0(model, box, [&](const GammaClass &v) {
        if (!report.good) {
            return;
        }
        const auto c = find_crossing(path, v, model);
        if (c.kind == Crossing::Kind::tangential) {
            report.good = false;
            report.offending = v;
            report.reason = "tangential crossing";
        } else if (c.kind == Crossing::Kind::point) {
            hits.emplace_back(v, c.t);
        }
    });
    if (!report.good) {
        return report;
    }

    // delta: half the smallest gap between distinct wall times and to the domain ends.
    std::set<Rational> times;
    for (const auto &[v, t] : hits) {
        times.insert(t);
    }
    std::optional<Rational> gap;
    auto consider = [&](const Rational &g) {
        if (!gap || g < *gap) {
            gap = g;
        }
    };
    for (auto it = times.begin(); it != times.end() && std::next(it) != times.end(); ++it) {
        consider(*std::next(it) - *it);
    }
    if (!times.empty()) {
        if (const auto lo = path.lower()) {
            consider(*times.begin() - *lo);
        }
        if (const auto hi = path.upper()) {
            consider(*hi - *times.rbegin());
        }
    }
    const Rational delta = gap ? Rational(*gap / 2) : Rational(1);

    const Complex o = structure_sheaf_charge(path);
    for (const auto &[v, t] : hits) {
        const auto [p, q] = affine_charge(path, v, model);
        const int before = sign(cross(p + Rational(t - delta) * q, o));
        const int after = sign(cross(p + Rational(t + delta) * q, o));
        int eps = 0;
        if (after > 0 && before < 0) {
            eps = 1;
        } else if (after < 0 && before > 0) {
            eps = -1;
        } else {
            report.good = false;
            report.offending = v;
            report.reason = "class does not cross the wall transversally";
            return report;
        }
        const auto [it, inserted] = report.epsilon.emplace(t, eps);
        if (!inserted && it->second != eps) {
            report.good = false;
            report.offending = v;
            report.reason = "classes on one wall cross in opposite directions";
            return report;
        }
    }
    return report;
}

double support_constant(const CentralCharge &z, const FlopModel &model, const ClassBox &box)
{
    double best = 0;
    for_each_level0(model, box, [&](const GammaClass &v) {
        // Generators of the heart have class -(n, beta) with beta effective.
        if (!model.is_effective(-v.beta)) {
            return;
        }
        const Complex w = evaluate(z, v, model);
        if (w.im < 0 || (w.im == 0 && w.re >= 0)) {
            return;
        }
        double norm2 = static_cast<double>(v.n) * static_cast<double>(v.n);
        for (auto c : v.beta.coords()) {
            norm2 += static_cast<double>(c) * static_cast<double>(c);
        }
        const double abs_z = std::hypot(w.re.get_d(), w.im.get_d());
        best = std::max(best, std::sqrt(norm2) / abs_z);
    });
    return best;
}

} // namespace dtflop
