#ifndef DTFLOP_LATTICE_HPP
#define DTFLOP_LATTICE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <dtflop/rational.hpp>

namespace dtflop
{

class Config;

// Curve class in N_1(X), written in a fixed integer basis whose exceptional
// classes come first.
class CurveClass
{
public:
    CurveClass() = default;
    explicit CurveClass(std::size_t rank) : coords_(rank, 0) {}
    CurveClass(std::initializer_list<std::int64_t> coords) : coords_(coords) {}
    explicit CurveClass(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}

    std::size_t rank() const
    {
        return coords_.size();
    }
    std::int64_t operator[](std::size_t i) const
    {
        return coords_[i];
    }
    std::int64_t &operator[](std::size_t i)
    {
        return coords_[i];
    }
    std::span<const std::int64_t> coords() const
    {
        return coords_;
    }

    bool is_zero() const;

    CurveClass &operator+=(const CurveClass &other);
    CurveClass &operator-=(const CurveClass &other);
    friend CurveClass operator+(CurveClass a, const CurveClass &b)
    {
        return a += b;
    }
    friend CurveClass operator-(CurveClass a, const CurveClass &b)
    {
        return a -= b;
    }
    friend CurveClass operator-(CurveClass a);
    friend CurveClass operator*(std::int64_t k, CurveClass a);

    friend bool operator==(const CurveClass &, const CurveClass &) = default;
    friend auto operator<=>(const CurveClass &, const CurveClass &) = default;

private:
    std::vector<std::int64_t> coords_;
};

std::string to_string(const CurveClass &beta);

// An element (n, beta, r) of Gamma = Z + N_1(X) + Z, i.e. (ch_3, ch_2, ch_0).
struct GammaClass {
    std::int64_t n = 0;
    CurveClass beta;
    std::int64_t r = 0;

    friend bool operator==(const GammaClass &, const GammaClass &) = default;
    friend auto operator<=>(const GammaClass &, const GammaClass &) = default;
};

GammaClass operator+(const GammaClass &a, const GammaClass &b);
GammaClass operator-(const GammaClass &a);
GammaClass operator*(std::int64_t k, const GammaClass &a);

// Exponent (n, beta) of a monomial x^n y^beta. Ordered lexicographically by (n, beta).
struct Monomial {
    std::int64_t n = 0;
    CurveClass beta;

    Monomial operator+(const Monomial &o) const
    {
        return {n + o.n, beta + o.beta};
    }
    Monomial operator-(const Monomial &o) const
    {
        return {n - o.n, beta - o.beta};
    }

    friend bool operator==(const Monomial &, const Monomial &) = default;
    friend auto operator<=>(const Monomial &, const Monomial &) = default;
};

std::string to_string(const Monomial &m);

// Truncation box: n <= n_max and |beta_i| <= m_max for every coordinate.
struct Truncation {
    std::int64_t n_max = 8;
    std::int64_t m_max = 4;

    bool in_box(const Monomial &m) const;
    friend bool operator==(const Truncation &, const Truncation &) = default;
};

// Box of level-0 classes scanned for walls: |n| <= n_max, |beta_i| <= m_max.
struct ClassBox {
    std::int64_t n_lo = 0, n_hi = 0;
    std::vector<std::int64_t> beta_lo, beta_hi;

    static ClassBox symmetric(const Truncation &t, std::size_t rank);
    bool contains(const Monomial &m) const;
};

enum class FlopMode { phi_star, i_circ_phi_star };

// Numerical shadow of a flopping contraction f: X -> Y.
class FlopModel
{
public:
    struct Spec {
        std::string name;
        std::size_t rank = 1;
        std::vector<std::size_t> exceptional_coords;
        std::vector<CurveClass> effective_generators;
        std::int64_t euler_char = 0;
        std::vector<std::int64_t> h_pairing;
        std::vector<std::int64_t> y_pairing;
        // c_1(L) . basis class for the line bundle defining the perverse tilting bundle.
        std::vector<std::int64_t> l_pairing;
        // rank r(p) of the non-trivial summand of the tilting bundle.
        std::int64_t perverse_rank = 1;
        std::vector<CurveClass> fundamental_cycles;
        // n_min(beta) = -n_min_scale * |beta|^2 unless overridden by the table.
        std::int64_t n_min_scale = 2;
        std::map<CurveClass, std::int64_t> n_min_table;
        bool flopped = false;
    };

    explicit FlopModel(Spec spec);

    static FlopModel conifold();
    static FlopModel from_config(const Config &cfg);
    static FlopModel load(const std::string &path);
    // "conifold" or a path to a key = value file.
    static FlopModel named_or_file(const std::string &name_or_path);

    const std::string &name() const
    {
        return spec_.name;
    }
    std::size_t rank() const
    {
        return spec_.rank;
    }
    std::span<const std::size_t> exceptional_coords() const
    {
        return spec_.exceptional_coords;
    }
    std::span<const CurveClass> effective_generators() const
    {
        return spec_.effective_generators;
    }
    std::int64_t euler_char() const
    {
        return spec_.euler_char;
    }
    std::span<const std::int64_t> h_pairing() const
    {
        return spec_.h_pairing;
    }
    std::span<const std::int64_t> y_pairing() const
    {
        return spec_.y_pairing;
    }
    std::span<const std::int64_t> l_pairing() const
    {
        return spec_.l_pairing;
    }
    std::int64_t perverse_rank() const
    {
        return spec_.perverse_rank;
    }
    std::span<const CurveClass> fundamental_cycles() const
    {
        return spec_.fundamental_cycles;
    }
    bool is_flopped() const
    {
        return spec_.flopped;
    }
    const Spec &spec() const
    {
        return spec_;
    }

    bool is_exceptional(std::size_t coord) const;
    std::size_t exceptional_rank() const
    {
        return spec_.exceptional_coords.size();
    }

    CurveClass zero_class() const
    {
        return CurveClass(spec_.rank);
    }
    // Basis class with a 1 at coordinate i.
    CurveClass basis_class(std::size_t i) const;

    // f_* beta: the non-exceptional part of beta.
    CurveClass pushforward(const CurveClass &beta) const;
    bool contracted(const CurveClass &beta) const
    {
        return pushforward(beta).is_zero();
    }

    // Membership of beta in the non-negative integer span of the effective generators.
    bool is_effective(const CurveClass &beta) const;
    // beta' <= beta, i.e. beta - beta' is effective.
    bool leq(const CurveClass &lower, const CurveClass &upper) const;

    std::int64_t pairing(std::span<const std::int64_t> form, const CurveClass &beta) const;
    std::int64_t n_min(const CurveClass &beta) const;

    // Model of X^+ for the same contraction; flopped().flopped() == *this.
    FlopModel flopped() const;

    friend bool operator==(const FlopModel &a, const FlopModel &b);

private:
    void validate() const;

    Spec spec_;
    // Every basis class is a generator, so effectivity is coordinatewise.
    bool orthant_cone_ = false;
};

using ModelPtr = std::shared_ptr<const FlopModel>;

int filtration_level(const GammaClass &v, const FlopModel &model);

// Variable change on the r = 0 slice. phi_star negates the exceptional
// coordinates; i_circ_phi_star fixes them and negates the rest.
GammaClass flop_pushforward(const GammaClass &v, FlopMode mode, const FlopModel &model);
Monomial flop_pushforward(const Monomial &m, FlopMode mode, const FlopModel &model);

enum class SupportKind { S_X, T_X, pS, pT, custom };

std::string to_string(SupportKind kind);

// Integer linear functional a*n + <b, beta>.
struct LinearForm {
    std::int64_t n_coeff = 0;
    std::vector<std::int64_t> beta_coeffs;

    std::int64_t operator()(const Monomial &m) const;
    friend bool operator==(const LinearForm &, const LinearForm &) = default;
};

// Cone-closed index set carrying the series. Stored coefficients of a series
// live in support() ∩ window(truncation); the window is cut out by additive
// gradings, so its complement inside a T-type set is an ideal and products
// are exact on the window.
class SupportSet
{
public:
    static SupportSet s_x(ModelPtr model);
    static SupportSet t_x(ModelPtr model);
    static SupportSet p_s(ModelPtr model, int p);
    static SupportSet p_t(ModelPtr model, int p);
    // Pointed cone {forms >= 0}. One form must be a positive multiple of n and
    // the forms must span the dual lattice; the forms double as gradings.
    static SupportSet custom(ModelPtr model, std::vector<LinearForm> forms);

    SupportKind kind() const
    {
        return kind_;
    }
    int perversity() const
    {
        return p_;
    }
    const FlopModel &model() const
    {
        return *model_;
    }
    const ModelPtr &model_ptr() const
    {
        return model_;
    }
    int exceptional_sign() const
    {
        return exc_sign_;
    }
    int rest_sign() const
    {
        return rest_sign_;
    }

    bool contains(const Monomial &m) const;

    // T-type sets are closed under addition and carry the ring structure.
    bool is_monoid() const;
    // T-type companion of an S-type set (T + T ⊂ T, S + T ⊂ S); identity on T-types.
    SupportSet companion() const;
    std::vector<std::int64_t> gradings(const Monomial &m) const;
    std::vector<std::int64_t> caps(const Truncation &t) const;
    bool in_window(const Monomial &m, const Truncation &t) const;
    // All support points of the window, in lexicographic order.
    std::vector<Monomial> window(const Truncation &t) const;
    // Smallest class box containing the window.
    ClassBox window_bounds(const Truncation &t) const;

    // Image of the set under a flop variable change; the target model is
    // the flopped geometry.
    SupportSet pushed_forward(FlopMode mode) const;

    friend bool operator==(const SupportSet &a, const SupportSet &b);

    std::string describe() const;

private:
    SupportSet(SupportKind kind, ModelPtr model, int p);

    Monomial reflect(const Monomial &m) const;
    std::int64_t perverse_chi(const Monomial &reflected) const;
    // Smallest n_min(scale * beta) over effective-looking classes of the box.
    std::int64_t min_n_min(const Truncation &t, std::int64_t scale) const;

    SupportKind kind_;
    ModelPtr model_;
    int p_ = 0;
    int exc_sign_ = 1;
    int rest_sign_ = 1;
    std::vector<LinearForm> forms_;
    // Coordinates (n, beta) as rational combinations of a basis of forms.
    std::vector<std::vector<Rational>> coord_in_forms_;
    std::vector<std::size_t> basis_forms_;
};

} // namespace dtflop

#endif
