#include <dtflop/lattice.hpp>

#include <dtflop/config.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dtflop
{

// ---------------------------------------------------------------------------
// CurveClass / GammaClass / Monomial

bool CurveClass::is_zero() const
{
    return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t c) { return c == 0; });
}

CurveClass &CurveClass::operator+=(const CurveClass &other)
{
    if (other.rank() != rank()) {
        throw std::invalid_argument("curve class rank mismatch");
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        coords_[i] += other.coords_[i];
    }
    return *this;
}

CurveClass &CurveClass::operator-=(const CurveClass &other)
{
    if (other.rank() != rank()) {
        throw std::invalid_argument("curve class rank mismatch");
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        coords_[i] -= other.coords_[i];
    }
    return *this;
}

CurveClass operator-(CurveClass a)
{
    for (auto &c : a.coords_) {
        c = -c;
    }
    return a;
}

CurveClass operator*(std::int64_t k, CurveClass a)
{
    for (auto &c : a.coords_) {
        c *= k;
    }
    return a;
}

std::string to_string(const CurveClass &beta)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < beta.rank(); ++i) {
        os << (i ? "," : "") << beta[i];
    }
    os << ']';
    return os.str();
}

GammaClass operator+(const GammaClass &a, const GammaClass &b)
{
    return {a.n + b.n, a.beta + b.beta, a.r + b.r};
}

GammaClass operator-(const GammaClass &a)
{
    return {-a.n, -a.beta, -a.r};
}

GammaClass operator*(std::int64_t k, const GammaClass &a)
{
    return {k * a.n, k * a.beta, k * a.r};
}

std::string to_string(const Monomial &m)
{
    return "(" + std::to_string(m.n) + "," + to_string(m.beta) + ")";
}

bool Truncation::in_box(const Monomial &m) const
{
    if (m.n > n_max) {
        return false;
    }
    for (auto c : m.beta.coords()) {
        if (std::llabs(c) > m_max) {
            return false;
        }
    }
    return true;
}

ClassBox ClassBox::symmetric(const Truncation &t, std::size_t rank)
{
    ClassBox box;
    box.n_lo = -t.n_max;
    box.n_hi = t.n_max;
    box.beta_lo.assign(rank, -t.m_max);
    box.beta_hi.assign(rank, t.m_max);
    return box;
}

bool ClassBox::contains(const Monomial &m) const
{
    if (m.n < n_lo || m.n > n_hi || m.beta.rank() != beta_lo.size()) {
        return false;
    }
    for (std::size_t i = 0; i < beta_lo.size(); ++i) {
        if (m.beta[i] < beta_lo[i] || m.beta[i] > beta_hi[i]) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// FlopModel

FlopModel::FlopModel(Spec spec) : spec_(std::move(spec))
{
    const auto r = spec_.rank;
    auto fill = [r](std::vector<std::int64_t> &v) {
        if (v.empty()) {
            v.assign(r, 0);
        }
    };
    if (spec_.h_pairing.empty()) {
        spec_.h_pairing.assign(r, 1);
    }
    fill(spec_.y_pairing);
    if (spec_.l_pairing.empty()) {
        spec_.l_pairing = spec_.h_pairing;
    }
    if (spec_.fundamental_cycles.empty() && !spec_.exceptional_coords.empty()) {
        CurveClass z(r);
        for (auto i : spec_.exceptional_coords) {
            z[i] = 1;
        }
        spec_.fundamental_cycles.push_back(z);
    }
    validate();
    orthant_cone_ = true;
    for (std::size_t i = 0; i < r; ++i) {
        const auto e = basis_class(i);
        orthant_cone_ = orthant_cone_
                        && std::find(spec_.effective_generators.begin(), spec_.effective_generators.end(), e)
                               != spec_.effective_generators.end();
    }
}

void FlopModel::validate() const
{
    const auto r = spec_.rank;
    if (r == 0) {
        throw std::invalid_argument("flop model: rank must be positive");
    }
    if (spec_.name.empty()) {
        throw std::invalid_argument("flop model: empty name");
    }
    // Exceptional classes occupy the leading coordinates of the basis.
    for (std::size_t i = 0; i < spec_.exceptional_coords.size(); ++i) {
        if (spec_.exceptional_coords[i] != i) {
            throw std::invalid_argument("flop model: exceptional coordinates must be the leading basis indices 0..e-1");
        }
    }
    if (spec_.exceptional_coords.size() > r) {
        throw std::invalid_argument("flop model: more exceptional coordinates than rank");
    }
    if (spec_.effective_generators.empty()) {
        throw std::invalid_argument("flop model: no effective generators");
    }
    for (const auto &g : spec_.effective_generators) {
        if (g.rank() != r) {
            throw std::invalid_argument("flop model: generator rank mismatch " + to_string(g));
        }
        if (g.is_zero()) {
            throw std::invalid_argument("flop model: zero generator");
        }
        for (auto c : g.coords()) {
            if (c < 0) {
                throw std::invalid_argument("flop model: generators must have non-negative coordinates " + to_string(g));
            }
        }
    }
    for (const auto *v : {&spec_.h_pairing, &spec_.y_pairing, &spec_.l_pairing}) {
        if (v->size() != r) {
            throw std::invalid_argument("flop model: pairing vector has wrong length");
        }
    }
    for (auto i : spec_.exceptional_coords) {
        if (spec_.y_pairing[i] != 0) {
            throw std::invalid_argument("flop model: y_pairing must vanish on exceptional classes");
        }
    }
    for (const auto &g : spec_.effective_generators) {
        if (contracted(g) && pairing(spec_.h_pairing, g) <= 0) {
            throw std::invalid_argument("flop model: H must be positive on exceptional generator " + to_string(g));
        }
    }
    for (const auto &z : spec_.fundamental_cycles) {
        if (z.rank() != r) {
            throw std::invalid_argument("flop model: fundamental cycle rank mismatch");
        }
    }
    if (spec_.perverse_rank <= 0) {
        throw std::invalid_argument("flop model: perverse_rank must be positive");
    }
    if (spec_.n_min_scale < 0) {
        throw std::invalid_argument("flop model: n_min_scale must be non-negative");
    }
    for (const auto &[beta, value] : spec_.n_min_table) {
        if (beta.rank() != r) {
            throw std::invalid_argument("flop model: n_min entry rank mismatch");
        }
        if (value > 0) {
            // T_X ⊂ S_X needs n_min <= 0.
            throw std::invalid_argument("flop model: n_min entries must be <= 0");
        }
        if (beta.is_zero() && value != 0) {
            throw std::invalid_argument("flop model: n_min(0) must be 0");
        }
    }
}

FlopModel FlopModel::conifold()
{
    Spec s;
    s.name = "conifold";
    s.rank = 1;
    s.exceptional_coords = {0};
    s.effective_generators = {CurveClass{1}};
    s.euler_char = 2;
    s.h_pairing = {1};
    s.y_pairing = {0};
    s.l_pairing = {1};
    s.perverse_rank = 1;
    s.fundamental_cycles = {CurveClass{1}};
    s.n_min_scale = 2;
    return FlopModel{std::move(s)};
}

FlopModel FlopModel::from_config(const Config &cfg)
{
    Spec s;
    s.name = cfg.find("name").value_or("custom");
    s.rank = static_cast<std::size_t>(cfg.get_int("rank"));
    if (auto exc = cfg.find("exceptional")) {
        for (auto i : parse_int_list(*exc)) {
            if (i < 0) {
                throw std::invalid_argument("flop model: negative exceptional index");
            }
            s.exceptional_coords.push_back(static_cast<std::size_t>(i));
        }
    }
    for (const auto &g : cfg.get_all("generator")) {
        s.effective_generators.emplace_back(parse_int_list(g));
    }
    if (auto v = cfg.find("euler_char")) {
        s.euler_char = parse_int(*v);
    }
    if (auto v = cfg.find("h_pairing")) {
        s.h_pairing = parse_int_list(*v);
    }
    if (auto v = cfg.find("y_pairing")) {
        s.y_pairing = parse_int_list(*v);
    }
    if (auto v = cfg.find("l_pairing")) {
        s.l_pairing = parse_int_list(*v);
    }
    if (auto v = cfg.find("perverse_rank")) {
        s.perverse_rank = parse_int(*v);
    }
    for (const auto &z : cfg.get_all("fundamental_cycle")) {
        s.fundamental_cycles.emplace_back(parse_int_list(z));
    }
    if (auto v = cfg.find("n_min_scale")) {
        s.n_min_scale = parse_int(*v);
    }
    // n_min(1,0) = -3
    for (const auto &key : cfg.keys()) {
        if (key.rfind("n_min(", 0) == 0 && key.back() == ')') {
            const auto inner = key.substr(6, key.size() - 7);
            s.n_min_table[CurveClass{parse_int_list(inner)}] = cfg.get_int(key);
        }
    }
    if (auto v = cfg.find("flopped")) {
        s.flopped = (*v == "true" || *v == "1");
    }
    return FlopModel{std::move(s)};
}

FlopModel FlopModel::load(const std::string &path)
{
    return from_config(Config::load(path));
}

FlopModel FlopModel::named_or_file(const std::string &name_or_path)
{
    if (name_or_path == "conifold") {
        return conifold();
    }
    if (name_or_path == "conifold+") {
        return conifold().flopped();
    }
    return load(name_or_path);
}

bool FlopModel::is_exceptional(std::size_t coord) const
{
    return coord < spec_.exceptional_coords.size();
}

CurveClass FlopModel::basis_class(std::size_t i) const
{
    if (i >= spec_.rank) {
        throw std::out_of_range("basis index out of range");
    }
    CurveClass b(spec_.rank);
    b[i] = 1;
    return b;
}

CurveClass FlopModel::pushforward(const CurveClass &beta) const
{
    CurveClass out = beta;
    for (std::size_t i = 0; i < exceptional_rank(); ++i) {
        out[i] = 0;
    }
    return out;
}

bool FlopModel::is_effective(const CurveClass &beta) const
{
    if (beta.rank() != spec_.rank) {
        throw std::invalid_argument("curve class rank mismatch");
    }
    for (auto c : beta.coords()) {
        if (c < 0) {
            return false;
        }
    }
    if (orthant_cone_) {
        return true;
    }
    // Generators have non-negative coordinates, so the search below only
    // visits classes dominated by beta.
    std::map<CurveClass, bool> memo;
    std::function<bool(const CurveClass &)> reach = [&](const CurveClass &b) -> bool {
        if (b.is_zero()) {
            return true;
        }
        if (auto it = memo.find(b); it != memo.end()) {
            return it->second;
        }
        bool ok = false;
        for (const auto &g : spec_.effective_generators) {
            bool fits = true;
            for (std::size_t i = 0; i < b.rank(); ++i) {
                if (g[i] > b[i]) {
                    fits = false;
                    break;
                }
            }
            if (fits && reach(b - g)) {
                ok = true;
                break;
            }
        }
        memo.emplace(b, ok);
        return ok;
    };
    return reach(beta);
}

bool FlopModel::leq(const CurveClass &lower, const CurveClass &upper) const
{
    return is_effective(upper - lower);
}

std::int64_t FlopModel::pairing(std::span<const std::int64_t> form, const CurveClass &beta) const
{
    if (form.size() != beta.rank()) {
        throw std::invalid_argument("pairing rank mismatch");
    }
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < form.size(); ++i) {
        acc += form[i] * beta[i];
    }
    return acc;
}

std::int64_t FlopModel::n_min(const CurveClass &beta) const
{
    if (auto it = spec_.n_min_table.find(beta); it != spec_.n_min_table.end()) {
        return it->second;
    }
    std::int64_t size = 0;
    for (auto c : beta.coords()) {
        size += std::llabs(c);
    }
    return -spec_.n_min_scale * size * size;
}

FlopModel FlopModel::flopped() const
{
    Spec s = spec_;
    s.flopped = !s.flopped;
    if (!s.name.empty() && s.name.back() == '+') {
        s.name.pop_back();
    } else {
        s.name.push_back('+');
    }
    return FlopModel{std::move(s)};
}

bool operator==(const FlopModel &a, const FlopModel &b)
{
    const auto &x = a.spec_;
    const auto &y = b.spec_;
    return x.name == y.name && x.rank == y.rank && x.exceptional_coords == y.exceptional_coords
           && x.effective_generators == y.effective_generators && x.euler_char == y.euler_char
           && x.h_pairing == y.h_pairing && x.y_pairing == y.y_pairing && x.l_pairing == y.l_pairing
           && x.perverse_rank == y.perverse_rank && x.fundamental_cycles == y.fundamental_cycles
           && x.n_min_scale == y.n_min_scale && x.n_min_table == y.n_min_table && x.flopped == y.flopped;
}

int filtration_level(const GammaClass &v, const FlopModel &model)
{
    if (v.r != 0) {
        return 2;
    }
    return model.contracted(v.beta) ? 0 : 1;
}

namespace
{

CurveClass apply_flop(CurveClass beta, FlopMode mode, const FlopModel &model)
{
    for (std::size_t i = 0; i < beta.rank(); ++i) {
        const bool exc = model.is_exceptional(i);
        if ((mode == FlopMode::phi_star && exc) || (mode == FlopMode::i_circ_phi_star && !exc)) {
            beta[i] = -beta[i];
        }
    }
    return beta;
}

} // namespace

GammaClass flop_pushforward(const GammaClass &v, FlopMode mode, const FlopModel &model)
{
    if (v.r != 0) {
        throw std::invalid_argument("flop_pushforward acts on the r = 0 slice only");
    }
    return {v.n, apply_flop(v.beta, mode, model), 0};
}

Monomial flop_pushforward(const Monomial &m, FlopMode mode, const FlopModel &model)
{
    return {m.n, apply_flop(m.beta, mode, model)};
}

// ---------------------------------------------------------------------------
// SupportSet

std::string to_string(SupportKind kind)
{
    switch (kind) {
        case SupportKind::S_X:
            return "S_X";
        case SupportKind::T_X:
            return "T_X";
        case SupportKind::pS:
            return "pS";
        case SupportKind::pT:
            return "pT";
        case SupportKind::custom:
            return "custom";
    }
    return "?";
}

std::int64_t LinearForm::operator()(const Monomial &m) const
{
    if (beta_coeffs.size() != m.beta.rank()) {
        throw std::invalid_argument("linear form rank mismatch");
    }
    std::int64_t acc = n_coeff * m.n;
    for (std::size_t i = 0; i < beta_coeffs.size(); ++i) {
        acc += beta_coeffs[i] * m.beta[i];
    }
    return acc;
}

SupportSet::SupportSet(SupportKind kind, ModelPtr model, int p) : kind_(kind), model_(std::move(model)), p_(p)
{
    if (!model_) {
        throw std::invalid_argument("support set without a model");
    }
    if (kind_ == SupportKind::pS || kind_ == SupportKind::pT) {
        if (p_ != 0 && p_ != -1) {
            throw std::invalid_argument("perversity must be 0 or -1");
        }
        // With several exceptional curves a single chi-pairing does not bound
        // the exceptional coordinates and decompositions stop being finite.
        if (model_->exceptional_rank() != 1) {
            throw std::invalid_argument("pS/pT supports need exactly one exceptional coordinate");
        }
        if (model_->l_pairing()[0] == 0) {
            throw std::invalid_argument("pS/pT supports need L . C != 0");
        }
    }
}

SupportSet SupportSet::s_x(ModelPtr model)
{
    return SupportSet{SupportKind::S_X, std::move(model), 0};
}

SupportSet SupportSet::t_x(ModelPtr model)
{
    return SupportSet{SupportKind::T_X, std::move(model), 0};
}

SupportSet SupportSet::p_s(ModelPtr model, int p)
{
    return SupportSet{SupportKind::pS, std::move(model), p};
}

SupportSet SupportSet::p_t(ModelPtr model, int p)
{
    return SupportSet{SupportKind::pT, std::move(model), p};
}

SupportSet SupportSet::custom(ModelPtr model, std::vector<LinearForm> forms)
{
    SupportSet s{SupportKind::custom, std::move(model), 0};
    const auto r = s.model_->rank();
    const auto dim = r + 1;
    bool has_n = false;
    for (const auto &f : forms) {
        if (f.beta_coeffs.size() != r) {
            throw std::invalid_argument("custom support: form rank mismatch");
        }
        const bool pure_n = std::all_of(f.beta_coeffs.begin(), f.beta_coeffs.end(), [](std::int64_t c) { return c == 0; });
        has_n = has_n || (pure_n && f.n_coeff > 0);
    }
    if (!has_n) {
        throw std::invalid_argument("custom support: one form must be a positive multiple of n");
    }
    auto as_row = [](const LinearForm &f) {
        std::vector<Rational> row{Rational(f.n_coeff)};
        for (auto c : f.beta_coeffs) {
            row.emplace_back(c);
        }
        return row;
    };

    // Pick dim independent forms by incremental elimination.
    std::vector<std::vector<Rational>> echelon;
    std::vector<std::size_t> pivots;
    for (std::size_t i = 0; i < forms.size() && s.basis_forms_.size() < dim; ++i) {
        auto row = as_row(forms[i]);
        for (std::size_t k = 0; k < echelon.size(); ++k) {
            if (row[pivots[k]] != 0) {
                const Rational c = row[pivots[k]] / echelon[k][pivots[k]];
                for (std::size_t j = 0; j < dim; ++j) {
                    row[j] -= c * echelon[k][j];
                }
            }
        }
        const auto it = std::find_if(row.begin(), row.end(), [](const Rational &q) { return q != 0; });
        if (it == row.end()) {
            continue;
        }
        pivots.push_back(static_cast<std::size_t>(it - row.begin()));
        echelon.push_back(std::move(row));
        s.basis_forms_.push_back(i);
    }
    if (s.basis_forms_.size() < dim) {
        throw std::invalid_argument("custom support: forms do not cut out a pointed cone");
    }

    // Gauss-Jordan on [A | I], rows of A are the basis forms.
    std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(2 * dim));
    for (std::size_t i = 0; i < dim; ++i) {
        auto row = as_row(forms[s.basis_forms_[i]]);
        for (std::size_t j = 0; j < dim; ++j) {
            a[i][j] = row[j];
        }
        a[i][dim + i] = 1;
    }
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t piv = col;
        while (a[piv][col] == 0) {
            ++piv;
        }
        std::swap(a[piv], a[col]);
        const Rational inv = 1 / a[col][col];
        for (auto &q : a[col]) {
            q *= inv;
        }
        for (std::size_t i = 0; i < dim; ++i) {
            if (i != col && a[i][col] != 0) {
                const Rational c = a[i][col];
                for (std::size_t j = 0; j < 2 * dim; ++j) {
                    a[i][j] -= c * a[col][j];
                }
            }
        }
    }
    // coordinate j = sum_f inv[j][f] * form_f
    s.coord_in_forms_.assign(dim, std::vector<Rational>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t f = 0; f < dim; ++f) {
            s.coord_in_forms_[j][f] = a[j][dim + f];
        }
    }
    s.forms_ = std::move(forms);
    return s;
}

Monomial SupportSet::reflect(const Monomial &m) const
{
    if (m.beta.rank() != model_->rank()) {
        throw std::invalid_argument("monomial rank does not match the model");
    }
    Monomial k = m;
    for (std::size_t i = 0; i < k.beta.rank(); ++i) {
        k.beta[i] *= model_->is_exceptional(i) ? exc_sign_ : rest_sign_;
    }
    return k;
}

std::int64_t SupportSet::perverse_chi(const Monomial &k) const
{
    const auto l = model_->pairing(model_->l_pairing(), k.beta);
    return model_->perverse_rank() * k.n + (p_ == 0 ? l : -l);
}

bool SupportSet::contains(const Monomial &m) const
{
    const auto k = reflect(m);
    const auto &model = *model_;
    switch (kind_) {
        case SupportKind::T_X:
            return k.n >= 0 && model.contracted(k.beta) && model.is_effective(k.beta);
        case SupportKind::S_X:
            return model.is_effective(k.beta) && k.n >= model.n_min(k.beta);
        case SupportKind::pT: {
            const auto fb = model.pushforward(k.beta);
            return k.n >= 0 && model.is_effective(fb) && perverse_chi(k) >= 0;
        }
        case SupportKind::pS: {
            const auto fb = model.pushforward(k.beta);
            return model.is_effective(fb) && k.n >= model.n_min(fb)
                   && perverse_chi(k) >= model.n_min(model.perverse_rank() * fb);
        }
        case SupportKind::custom:
            return std::all_of(forms_.begin(), forms_.end(), [&](const LinearForm &f) { return f(k) >= 0; });
    }
    return false;
}

bool SupportSet::is_monoid() const
{
    return kind_ == SupportKind::T_X || kind_ == SupportKind::pT || kind_ == SupportKind::custom;
}

SupportSet SupportSet::companion() const
{
    SupportSet s = *this;
    if (kind_ == SupportKind::S_X) {
        s.kind_ = SupportKind::T_X;
    } else if (kind_ == SupportKind::pS) {
        s.kind_ = SupportKind::pT;
    }
    return s;
}

std::vector<std::int64_t> SupportSet::gradings(const Monomial &m) const
{
    const auto k = reflect(m);
    std::vector<std::int64_t> g;
    switch (kind_) {
        case SupportKind::T_X:
        case SupportKind::S_X:
            g.push_back(k.n);
            for (auto c : k.beta.coords()) {
                g.push_back(c);
            }
            break;
        case SupportKind::pT:
        case SupportKind::pS:
            g.push_back(k.n);
            g.push_back(perverse_chi(k));
            for (std::size_t i = model_->exceptional_rank(); i < k.beta.rank(); ++i) {
                g.push_back(k.beta[i]);
            }
            break;
        case SupportKind::custom:
            for (const auto &f : forms_) {
                g.push_back(f(k));
            }
            break;
    }
    return g;
}

std::vector<std::int64_t> SupportSet::caps(const Truncation &t) const
{
    const auto r = model_->rank();
    std::vector<std::int64_t> c;
    switch (kind_) {
        case SupportKind::T_X:
        case SupportKind::S_X:
            c.push_back(t.n_max);
            c.insert(c.end(), r, t.m_max);
            break;
        case SupportKind::pT:
        case SupportKind::pS: {
            std::int64_t l_abs = 0;
            for (auto l : model_->l_pairing()) {
                l_abs += std::llabs(l);
            }
            c.push_back(t.n_max);
            c.push_back(model_->perverse_rank() * t.n_max + t.m_max * l_abs);
            c.insert(c.end(), r - model_->exceptional_rank(), t.m_max);
            break;
        }
        case SupportKind::custom:
            // Largest value of each form on the box part of the cone (n >= 0 there).
            for (const auto &f : forms_) {
                std::int64_t cap = std::max<std::int64_t>(f.n_coeff, 0) * t.n_max;
                for (auto b : f.beta_coeffs) {
                    cap += std::llabs(b) * t.m_max;
                }
                c.push_back(cap);
            }
            break;
    }
    return c;
}

bool SupportSet::in_window(const Monomial &m, const Truncation &t) const
{
    if (!contains(m)) {
        return false;
    }
    const auto g = gradings(m);
    const auto c = caps(t);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] > c[i]) {
            return false;
        }
    }
    return true;
}

std::int64_t SupportSet::min_n_min(const Truncation &t, std::int64_t scale) const
{
    const auto r = model_->rank();
    std::int64_t lo = 0;
    CurveClass beta(r);
    std::function<void(std::size_t)> scan = [&](std::size_t i) {
        if (i == r) {
            const auto b = kind_ == SupportKind::pS ? model_->pushforward(beta) : beta;
            lo = std::min(lo, model_->n_min(scale * b));
            return;
        }
        for (std::int64_t v = 0; v <= t.m_max; ++v) {
            beta[i] = v;
            scan(i + 1);
        }
        beta[i] = 0;
    };
    scan(0);
    return lo;
}

ClassBox SupportSet::window_bounds(const Truncation &t) const
{
    const auto r = model_->rank();
    ClassBox box;
    box.n_hi = t.n_max;
    box.beta_lo.assign(r, 0);
    box.beta_hi.assign(r, t.m_max);
    switch (kind_) {
        case SupportKind::T_X:
        case SupportKind::pT:
            box.n_lo = 0;
            break;
        case SupportKind::S_X:
        case SupportKind::pS:
            box.n_lo = min_n_min(t, 1);
            break;
        case SupportKind::custom:
            box.n_lo = 0;
            break;
    }

    if (kind_ == SupportKind::pT || kind_ == SupportKind::pS) {
        // chi = r n +- L.beta with chi and n bounded gives a bound on the
        // single exceptional coordinate.
        const auto c = caps(t);
        const auto chi_lo = kind_ == SupportKind::pS ? min_n_min(t, model_->perverse_rank()) : 0;
        std::int64_t rest = 0;
        for (std::size_t j = model_->exceptional_rank(); j < r; ++j) {
            rest += std::llabs(model_->l_pairing()[j]) * t.m_max;
        }
        const auto n_abs = std::max(std::llabs(box.n_lo), std::llabs(box.n_hi));
        const auto span = std::max(c[1], -chi_lo) + model_->perverse_rank() * n_abs + rest;
        const auto l0 = std::llabs(model_->l_pairing()[0]);
        box.beta_lo[0] = -(span / l0) - 1;
        box.beta_hi[0] = span / l0 + 1;
    } else if (kind_ == SupportKind::custom) {
        const auto c = caps(t);
        std::vector<std::int64_t> lo(r + 1), hi(r + 1);
        for (std::size_t j = 0; j <= r; ++j) {
            Rational l = 0, h = 0;
            for (std::size_t f = 0; f < basis_forms_.size(); ++f) {
                const Rational v = coord_in_forms_[j][f] * c[basis_forms_[f]];
                (v < 0 ? l : h) += v;
            }
            mpz_class fl, ce;
            mpz_fdiv_q(fl.get_mpz_t(), l.get_num_mpz_t(), l.get_den_mpz_t());
            mpz_cdiv_q(ce.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
            lo[j] = fl.get_si();
            hi[j] = ce.get_si();
        }
        box.n_lo = std::max<std::int64_t>(lo[0], 0);
        box.n_hi = std::min(hi[0], t.n_max);
        for (std::size_t i = 0; i < r; ++i) {
            box.beta_lo[i] = lo[i + 1];
            box.beta_hi[i] = hi[i + 1];
        }
    }

    // The bounds above are for reflected keys.
    for (std::size_t i = 0; i < r; ++i) {
        const int s = model_->is_exceptional(i) ? exc_sign_ : rest_sign_;
        if (s < 0) {
            const auto lo = box.beta_lo[i];
            box.beta_lo[i] = -box.beta_hi[i];
            box.beta_hi[i] = -lo;
        }
    }
    return box;
}

std::vector<Monomial> SupportSet::window(const Truncation &t) const
{
    const auto box = window_bounds(t);
    const auto r = model_->rank();
    std::vector<Monomial> out;
    Monomial m{0, CurveClass(r)};
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == r) {
            if (in_window(m, t)) {
                out.push_back(m);
            }
            return;
        }
        for (auto v = box.beta_lo[i]; v <= box.beta_hi[i]; ++v) {
            m.beta[i] = v;
            rec(i + 1);
        }
    };
    for (auto n = box.n_lo; n <= box.n_hi; ++n) {
        m.n = n;
        rec(0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SupportSet SupportSet::pushed_forward(FlopMode mode) const
{
    SupportSet s = *this;
    s.model_ = std::make_shared<const FlopModel>(model_->flopped());
    // A sign on an empty block of coordinates is kept at +1 so equal sets compare equal.
    if (mode == FlopMode::phi_star) {
        if (model_->exceptional_rank() > 0) {
            s.exc_sign_ = -exc_sign_;
        }
    } else if (model_->exceptional_rank() < model_->rank()) {
        s.rest_sign_ = -rest_sign_;
    }
    return s;
}

bool operator==(const SupportSet &a, const SupportSet &b)
{
    return a.kind_ == b.kind_ && a.p_ == b.p_ && a.exc_sign_ == b.exc_sign_ && a.rest_sign_ == b.rest_sign_
           && a.forms_ == b.forms_ && *a.model_ == *b.model_;
}

std::string SupportSet::describe() const
{
    std::string s = to_string(kind_);
    if (kind_ == SupportKind::pS || kind_ == SupportKind::pT) {
        s = std::to_string(p_) + s.substr(1);
    }
    s += "(" + model_->name();
    if (exc_sign_ < 0) {
        s += ", exceptional reflected";
    }
    if (rest_sign_ < 0) {
        s += ", base reflected";
    }
    return s + ")";
}

} // namespace dtflop
