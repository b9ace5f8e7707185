#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>

#include "thetaforge/error.hpp"
#include "thetaforge/precision.hpp"

namespace thetaforge {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Exact rational number with a positive denominator, always reduced.
class Rational {
public:
    constexpr Rational() = default;
    Rational(long num, long den = 1);

    long num() const noexcept { return num_; }
    long den() const noexcept { return den_; }
    bool is_integer() const noexcept { return den_ == 1; }
    double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator/(Rational a, Rational b);
    friend Rational operator-(Rational a) { return Rational(-a.num_, a.den_); }
    friend bool operator==(Rational a, Rational b) = default;

    std::string str() const;

private:
    long num_ = 0;
    long den_ = 1;
};

// A point tau of the upper half-plane together with its nome q = exp(2 pi i tau)
// and the principal-branch root q^(1/24) = exp(pi i tau / 12). Every fractional
// power of q used by the library is an integer power of that root.
class ModularPoint {
public:
    // Throws DomainError when Im tau <= 0.
    static ModularPoint from_tau(cplx tau);

    cplx tau() const noexcept { return tau_; }
    cplx q() const noexcept { return q_; }
    cplx q24() const noexcept { return q24_; }

    // q^(grains/24) on the principal branch.
    cplx q_grains(long grains) const;
    // q^(1/8)
    cplx q8() const { return q_grains(3); }

    // The point scale * tau (scale must be positive).
    ModularPoint scaled(Rational scale) const;
    ModularPoint scaled(double scale) const;

private:
    ModularPoint(cplx tau, cplx q, cplx q24) : tau_(tau), q_(q), q24_(q24) {}

    cplx tau_;
    cplx q_;
    cplx q24_;
};

inline ModularPoint nome_from_tau(cplx tau) { return ModularPoint::from_tau(tau); }

// Length of a q-shifted factorial; std::nullopt means the infinite product.
using PochhammerLength = std::optional<long>;
inline constexpr std::nullopt_t kInfiniteLength = std::nullopt;

// (a; q)_n for any integer n, or (a; q)_inf. The infinite product stops once
// |a q^k| < eps_tail * (1 - |q|).
cplx q_pochhammer(cplx a, cplx q, PochhammerLength n);

// (a_1, ..., a_m; q)_n
cplx multi_pochhammer(std::span<const cplx> a_list, cplx q, PochhammerLength n);

// Jacobi symbol (n / m) for odd m >= 1.
int jacobi_symbol(long n, long m);

// w = reduced + m pi + n pi tau with reduced = x pi + y pi tau, 0 <= x, y < 1.
struct LatticeCoord {
    cplx reduced;
    long m = 0;
    long n = 0;
    double x = 0.0;  // fractional coordinate along pi
    double y = 0.0;  // fractional coordinate along pi tau
};

LatticeCoord lattice_reduce(cplx w, cplx tau);

// Distance of w from the lattice pi Z + pi tau Z measured in reduced coordinates.
double lattice_distance(cplx w, cplx tau);

bool is_equivalent(cplx w1, cplx w2, cplx tau, double tol = kEquivalenceTolerance);

}  // namespace thetaforge
