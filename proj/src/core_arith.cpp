#include "thetaforge/core_arith.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

namespace thetaforge {

double tail_tolerance() {
    static const double tol = [] {
        if (const char* env = std::getenv("THETA_FORGE_PRECISION")) {
            char* end = nullptr;
            double v = std::strtod(env, &end);
            if (end != env && v > 0.0 && v < 1e-6) return v;
        }
        return 1e-17;
    }();
    return tol;
}

Rational::Rational(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long g = std::gcd(num, den);
    if (g == 0) g = 1;
    num_ = num / g;
    den_ = den / g;
}

Rational operator+(Rational a, Rational b) { return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_); }
Rational operator-(Rational a, Rational b) { return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_); }
Rational operator*(Rational a, Rational b) { return Rational(a.num_ * b.num_, a.den_ * b.den_); }
Rational operator/(Rational a, Rational b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::string Rational::str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

ModularPoint ModularPoint::from_tau(cplx tau) {
    if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
        throw DomainError("modular point requires Im tau > 0");
    const cplx q = std::exp(2.0 * kPi * kI * tau);
    const cplx q24 = std::exp(kPi * kI * tau / 12.0);
    return ModularPoint(tau, q, q24);
}

cplx ModularPoint::q_grains(long grains) const {
    // exp of the exact exponent is more accurate than repeated powers of q24.
    return std::exp(kPi * kI * tau_ * (static_cast<double>(grains) / 12.0));
}

ModularPoint ModularPoint::scaled(Rational scale) const {
    if (scale.num() <= 0) throw DomainError("tau scale must be positive");
    return from_tau(tau_ * scale.value());
}

ModularPoint ModularPoint::scaled(double scale) const {
    if (!(scale > 0.0)) throw DomainError("tau scale must be positive");
    return from_tau(tau_ * scale);
}

cplx q_pochhammer(cplx a, cplx q, PochhammerLength n) {
    if (!n) {
        const double aq = std::abs(q);
        if (!(aq < 1.0)) throw ConvergenceError("(a;q)_inf requires |q| < 1");
        const double stop = tail_tolerance() * (1.0 - aq);
        cplx prod = 1.0;
        cplx term = a;
        for (long k = 0; k < kMaxSeriesTerms; ++k) {
            if (std::abs(term) < stop) return prod;
            prod *= 1.0 - term;
            term *= q;
        }
        throw ConvergenceError("(a;q)_inf did not reach its tail bound");
    }
    cplx prod = 1.0;
    if (*n >= 0) {
        cplx term = a;
        for (long k = 0; k < *n; ++k) {
            prod *= 1.0 - term;
            term *= q;
        }
        return prod;
    }
    if (q == 0.0) throw DomainError("(a;q)_n with n < 0 requires q != 0");
    // (a;q)_{-j} = 1 / prod_{k=1}^{j} (1 - a q^{-k})
    const cplx qinv = 1.0 / q;
    cplx term = a * qinv;
    for (long k = 1; k <= -*n; ++k) {
        const cplx f = 1.0 - term;
        if (std::abs(f) == 0.0) throw PoleError("(a;q)_n denominator vanishes");
        prod *= f;
        term *= qinv;
    }
    return 1.0 / prod;
}

cplx multi_pochhammer(std::span<const cplx> a_list, cplx q, PochhammerLength n) {
    cplx prod = 1.0;
    for (cplx a : a_list) prod *= q_pochhammer(a, q, n);
    return prod;
}

int jacobi_symbol(long n, long m) {
    if (m < 1 || m % 2 == 0) throw DomainError("jacobi symbol needs an odd positive modulus");
    n %= m;
    if (n < 0) n += m;
    int result = 1;
    while (n != 0) {
        while (n % 2 == 0) {
            n /= 2;
            const long r = m % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(n, m);
        if (n % 4 == 3 && m % 4 == 3) result = -result;
        n %= m;
    }
    return m == 1 ? result : 0;
}

namespace {

double snap(double v) {
    const double r = std::round(v);
    return std::abs(v - r) < 1e-12 ? r : v;
}

}  // namespace

LatticeCoord lattice_reduce(cplx w, cplx tau) {
    if (!(tau.imag() > 0.0)) throw DomainError("lattice_reduce requires Im tau > 0");
    const double yc = snap(w.imag() / (kPi * tau.imag()));
    const double xc = snap((w.real() - yc * kPi * tau.real()) / kPi);
    LatticeCoord out;
    out.m = static_cast<long>(std::floor(xc));
    out.n = static_cast<long>(std::floor(yc));
    out.x = xc - static_cast<double>(out.m);
    out.y = yc - static_cast<double>(out.n);
    out.reduced = w - static_cast<double>(out.m) * kPi - static_cast<double>(out.n) * kPi * tau;
    return out;
}

double lattice_distance(cplx w, cplx tau) {
    const LatticeCoord c = lattice_reduce(w, tau);
    const double dx = std::min(c.x, 1.0 - c.x);
    const double dy = std::min(c.y, 1.0 - c.y);
    return std::hypot(dx, dy);
}

bool is_equivalent(cplx w1, cplx w2, cplx tau, double tol) {
    const LatticeCoord c = lattice_reduce(w1 - w2, tau);
    const bool x_ok = c.x < tol || 1.0 - c.x < tol;
    const bool y_ok = c.y < tol || 1.0 - c.y < tol;
    return x_ok && y_ok;
}

}  // namespace thetaforge
