#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thetaforge/functions.hpp"

namespace thetaforge {

// Exact Gaussian integer re + i*im.
struct GaussInt {
    mpz_class re;
    mpz_class im;

    GaussInt() = default;
    GaussInt(long r, long i = 0) : re(r), im(i) {}
    GaussInt(mpz_class r, mpz_class i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    GaussInt conj() const { return {re, -im}; }

    friend GaussInt operator+(const GaussInt& a, const GaussInt& b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussInt operator-(const GaussInt& a, const GaussInt& b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussInt operator-(const GaussInt& a) { return {-a.re, -a.im}; }
    friend GaussInt operator*(const GaussInt& a, const GaussInt& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussInt& a, const GaussInt& b) { return a.re == b.re && a.im == b.im; }

    cplx to_complex() const { return {re.get_d(), im.get_d()}; }
    std::string str() const;
};

// Laurent polynomial in a fixed number of unit-circle variables with
// Gaussian-integer coefficients. Zero terms are never stored.
class LaurentPoly {
public:
    using Monomial = std::vector<int>;

    explicit LaurentPoly(std::size_t arity = 0) : arity_(arity) {}
    static LaurentPoly constant(std::size_t arity, const GaussInt& c);
    static LaurentPoly monomial(const Monomial& exps, const GaussInt& c);

    std::size_t arity() const noexcept { return arity_; }
    const std::map<Monomial, GaussInt>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    // The constant polynomial c (for c a unit this is what fs_invert needs).
    std::optional<GaussInt> as_constant() const;

    void add_term(const Monomial& exps, const GaussInt& c);
    LaurentPoly& operator+=(const LaurentPoly& other);
    LaurentPoly& operator-=(const LaurentPoly& other);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    LaurentPoly operator-() const;
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.arity_ == b.arity_ && a.terms_ == b.terms_;
    }

    // Value with variable j set to values[j].
    cplx evaluate(const std::vector<cplx>& values) const;
    std::string str(const std::vector<std::string>& vars) const;

private:
    std::size_t arity_;
    std::map<Monomial, GaussInt> terms_;
};

// Truncated series sum_e c_e q^(e/24) with Laurent-polynomial coefficients.
// Exponents at or beyond truncation_order are unknown, never implicitly zero.
class FormalSeries {
public:
    FormalSeries(std::vector<std::string> vars, long truncation_order);

    static FormalSeries one(std::vector<std::string> vars, long truncation_order);
    static FormalSeries constant(std::vector<std::string> vars, const GaussInt& c, long truncation_order);
    // c * q^(grain/24) * monomial
    static FormalSeries term(std::vector<std::string> vars, long grain, const LaurentPoly& coeff, long truncation_order);

    const std::vector<std::string>& vars() const noexcept { return vars_; }
    long truncation_order() const noexcept { return truncation_; }
    const std::map<long, LaurentPoly>& coeffs() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    // Lowest stored exponent, or the truncation order for the zero series.
    long valuation() const noexcept { return coeffs_.empty() ? truncation_ : coeffs_.begin()->first; }

    void add_term(long grain, const LaurentPoly& c);
    FormalSeries shifted(long grains) const;
    FormalSeries scaled(const GaussInt& c) const;
    FormalSeries negated() const { return scaled(GaussInt(-1)); }
    FormalSeries truncated(long order) const;

    std::string str(std::size_t max_terms = 12) const;

private:
    std::vector<std::string> vars_;
    long truncation_;
    std::map<long, LaurentPoly> coeffs_;
};

inline constexpr long kGrainsPerQ = 24;

FormalSeries fs_add(const FormalSeries& a, const FormalSeries& b);
FormalSeries fs_sub(const FormalSeries& a, const FormalSeries& b);

// Cauchy product. Output exponents are distributed over OpenMP threads;
// fs_mul_serial is the single-threaded reference with identical results.
FormalSeries fs_mul(const FormalSeries& a, const FormalSeries& b);
FormalSeries fs_mul_serial(const FormalSeries& a, const FormalSeries& b);

FormalSeries fs_pow(const FormalSeries& a, unsigned exponent);

// Inverse of a series whose lowest coefficient is the constant +1 or -1.
FormalSeries fs_invert(const FormalSeries& a);

// eta(scale * tau) = q^(scale/24) prod (1 - q^(scale n)), valid below q^order.
FormalSeries fs_eta(long scale, long order);

// Expansion of a Lambert series, valid below q^order. Without trig the result
// has no variables. With a trig factor the coefficients are Laurent
// polynomials in x = e^{iz} and the returned series is TWICE the Lambert sum
// (2 sin 2nz = -i (x^{2n} - x^{-2n}) keeps every coefficient integral).
FormalSeries fs_lambert(const LambertSpec& spec, long order, const std::optional<std::string>& z_var = std::nullopt);

// Argument sum_j alphas[j]*z_j + beta*pi + gamma*pi*tau, where the z_j are the
// series variables (x_j = e^{i z_j}).
struct FormalThetaArg {
    std::vector<long> alphas;  // coefficient of each series variable
    Rational beta{0};
    Rational gamma{0};
};

// d^deriv/dw^deriv theta_kind(w | tau_scale * tau) at w = the given argument,
// as a series in q^(1/24) with coefficients in x = e^{iz}. Throws FormalError
// if a coefficient would leave the Gaussian integers or a grain is fractional.
FormalSeries fs_theta(ThetaKind kind, const FormalThetaArg& arg, long tau_scale, int deriv, long order,
                      const std::vector<std::string>& vars);

// theta_kind(z_scale * z | tau_scale * tau) in the single variable "x".
FormalSeries fs_theta_x(ThetaKind kind, long z_scale, long tau_scale, long order);

// Coefficient of q^(grain/24). Throws FormalError beyond the truncation order.
LaurentPoly fs_coefficient(const FormalSeries& a, long grain);

struct FormalMismatch {
    long grain = 0;
    LaurentPoly lhs;
    LaurentPoly rhs;
};

struct FormalComparison {
    bool equal = true;
    std::optional<FormalMismatch> first_mismatch;
};

// Exact comparison of all exponents below `order` (grains). Refuses orders
// beyond either truncation order.
FormalComparison fs_equal_through(const FormalSeries& a, const FormalSeries& b, long order);

}  // namespace thetaforge
