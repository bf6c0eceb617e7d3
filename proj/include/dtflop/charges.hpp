#ifndef DTFLOP_CHARGES_HPP
#define DTFLOP_CHARGES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <dtflop/errors.hpp>
#include <dtflop/lattice.hpp>
#include <dtflop/rational.hpp>

namespace dtflop
{

class Config;

// Complex number with exact rational parts.
struct Complex {
    Rational re = 0;
    Rational im = 0;

    friend Complex operator+(const Complex &a, const Complex &b)
    {
        return {a.re + b.re, a.im + b.im};
    }
    friend Complex operator-(const Complex &a, const Complex &b)
    {
        return {a.re - b.re, a.im - b.im};
    }
    friend Complex operator*(const Complex &a, const Complex &b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Rational &s, const Complex &a)
    {
        return {s * a.re, s * a.im};
    }
    friend bool operator==(const Complex &a, const Complex &b)
    {
        return a.re == b.re && a.im == b.im;
    }
};

// Im(conj(a) b): positive iff arg a < arg b for a, b in the upper half plane.
Rational cross(const Complex &a, const Complex &b);
Rational dot(const Complex &a, const Complex &b);
// a is a positive real multiple of b.
bool same_ray(const Complex &a, const Complex &b);
std::string to_string(const Complex &z);

enum class ChargeFamily { large_volume, nc_point };

// Central charge data. large_volume: Z0(s, l) = s - (B + i omega H) l;
// nc_point: Z0(s, l) = z0 (-s + B l). Both: Z1(l') = -i omega'.l', Z2(r) = z r.
struct CentralCharge {
    ChargeFamily family = ChargeFamily::large_volume;
    // B . C_i on the exceptional basis classes.
    std::vector<Rational> b;
    Rational omega = 1;
    // omega' . D_j on the non-exceptional basis classes.
    std::vector<Rational> omega_prime;
    Complex z0{-1, 0};
    // z for large_volume, z1 for nc_point.
    Complex z{-1, 1};

    // B = b H restricted to the exceptional classes.
    static CentralCharge large_volume(const FlopModel &model, const Rational &b_h, const Rational &omega, const Complex &z);
    static CentralCharge nc_point(const FlopModel &model, const Rational &b_h, const Complex &z0, const Complex &z1);

    // Family-specific admissibility of omega, z0 and z.
    bool admissible() const;

    friend bool operator==(const CentralCharge &, const CentralCharge &) = default;
};

Complex evaluate(const CentralCharge &z, const GammaClass &v, const FlopModel &model);
// phi in (0, 1] with Z(v) = |Z(v)| exp(i pi phi).
double phase(const CentralCharge &z, const GammaClass &v, const FlopModel &model);
double phase(const Complex &w);

struct RegionSpec {
    enum class Kind { U_X, U_X_B, pV, pU } kind = Kind::U_X;
    int p = 0;
    // Fixed B for U_X_B.
    std::vector<Rational> b0;
};

// B in pV(X/Y): (-1)^p B.C_i < 0 and (-1)^p B.Z_y > -1.
bool b_in_pV(const std::vector<Rational> &b, int p, const FlopModel &model);
bool in_region(const CentralCharge &z, const RegionSpec &region, const FlopModel &model);

// Nonzero level-0 classes (n, beta, 0) of the box, beta contracted.
std::vector<GammaClass> level0_classes(const FlopModel &model, const ClassBox &box);

// Classes v = (n, beta, 0) in the box with Z(v) in R_{>0} Z(O_X).
std::vector<GammaClass> wall_set(const CentralCharge &z, const FlopModel &model, const ClassBox &box);

enum class PathKind { omega_ray, linear_xi, flop_ray };
std::string to_string(PathKind kind);

// omega_ray: omega = t on t in (0, inf); flop_ray: the same formula on
// t in (-inf, 0); linear_xi: xi(t) = t xi + (1 - t) xi' on (0, 1), moving z0 only.
struct ChargePath {
    PathKind kind = PathKind::omega_ray;
    CentralCharge base;  // rays: omega is replaced by t; linear_xi: xi at t = 1
    CentralCharge start; // linear_xi: xi' at t = 0

    static ChargePath omega_ray(const CentralCharge &base);
    static ChargePath flop_ray(const CentralCharge &base);
    static ChargePath linear_xi(const CentralCharge &from, const CentralCharge &to);
    // Keys: path, b, z, omega_prime, z0, z0_start.
    static ChargePath from_config(const Config &cfg, const FlopModel &model);

    CentralCharge at(const Rational &t) const;
    bool in_domain(const Rational &t) const;
    std::optional<Rational> lower() const;
    std::optional<Rational> upper() const;
};

// Z_t(v) = p + t q for level-0 v; Z_t(O_X) is constant along every path.
struct AffineCharge {
    Complex p, q;
};
AffineCharge affine_charge(const ChargePath &path, const GammaClass &v, const FlopModel &model);
Complex structure_sheaf_charge(const ChargePath &path);

struct Crossing {
    enum class Kind { none, point, tangential } kind = Kind::none;
    Rational t;
};
Crossing find_crossing(const ChargePath &path, const GammaClass &v, const FlopModel &model);

// Unique t in the path domain where v meets the ray of O_X; rejects v of level != 0.
std::optional<Rational> solve_wall_time(const ChargePath &path, const GammaClass &v, const FlopModel &model);

struct GoodPathReport {
    bool good = true;
    // Wall time -> sign, +1 for the pattern arg Z(v) < arg Z(O_X) after t.
    std::map<Rational, int> epsilon;
    std::optional<GammaClass> offending;
    std::string reason;
};

GoodPathReport is_good_path(const ChargePath &path, const FlopModel &model, const ClassBox &box);

// max ||v|| / |Z(v)| over effective level-0 classes -(n, beta) of the box with Z(v) != 0.
double support_constant(const CentralCharge &z, const FlopModel &model, const ClassBox &box);

} // namespace dtflop

#endif
