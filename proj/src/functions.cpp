#include "thetaforge/functions.hpp"

#include <array>
#include <cmath>

namespace thetaforge {

namespace {

void require_off_lattice(cplx w, const ModularPoint& mp, const char* what) {
    if (is_equivalent(w, 0.0, mp.tau()))
        throw PoleError(std::string(what) + " is equivalent to 0 modulo the period lattice");
}

// Shared stopping rule for one-sided geometric tails.
bool tail_negligible(double term, double ratio, double sum_scale) {
    if (!(ratio < 1.0)) return false;
    return term * ratio / (1.0 - ratio) < tail_tolerance() * sum_scale;
}

}  // namespace

cplx kronecker_K(cplx y, cplx z, const ModularPoint& mp) {
    require_off_lattice(z, mp, "K_y(z): z");
    require_off_lattice(y, mp, "K_y(z): y");
    return theta1_prime0(mp) * theta(1, z + y, mp) / (theta(1, z, mp) * theta(1, y, mp));
}

cplx kronecker_bilateral(cplx y, cplx z, const ModularPoint& mp) {
    const cplx Y = std::exp(2.0 * kI * y);
    const cplx X = std::exp(2.0 * kI * z);
    const cplx q = mp.q();
    const double aY = std::abs(Y), aq = std::abs(q);
    if (!(aq < aY && aY < 1.0))
        throw DomainError("bilateral Kronecker sum needs |q| < |e^{2iy}| < 1");
    require_off_lattice(z, mp, "bilateral Kronecker sum: z");

    const double up_ratio = aY;
    const double down_ratio = aq / aY;
    cplx sum = 1.0 / (1.0 - X);
    double scale = std::abs(sum);
    bool up_done = false, down_done = false;
    cplx Yk = 1.0, Ymk = 1.0, qk = 1.0, qmk = 1.0;
    for (long k = 1; k < kMaxSeriesTerms; ++k) {
        Yk *= Y;
        Ymk /= Y;
        qk *= q;
        qmk /= q;
        if (!up_done) {
            const cplx t = Yk / (1.0 - qk * X);
            sum += t;
            scale = std::max(scale, std::abs(t));
            up_done = std::abs(qk * X) < 0.5 && tail_negligible(std::abs(t), 2.0 * up_ratio / (1.0 + up_ratio), scale);
        }
        if (!down_done) {
            // Y^{-k} / (1 - q^{-k} X) = -Y^{-k} q^k X^{-1} / (1 - q^k X^{-1})
            const cplx t = -Ymk * qk / X / (1.0 - qk / X);
            sum += t;
            scale = std::max(scale, std::abs(t));
            down_done = std::abs(qk / X) < 0.5 &&
                        tail_negligible(std::abs(t), 2.0 * down_ratio / (1.0 + down_ratio), scale);
        }
        if (up_done && down_done) return sum;
    }
    throw ConvergenceError("bilateral Kronecker sum did not reach its tail bound");
}

Psi11Sides ramanujan_1psi1(cplx a, cplx b, cplx z, cplx q) {
    const double aq = std::abs(q);
    if (!(aq < 1.0)) throw DomainError("1psi1 requires |q| < 1");
    if (a == 0.0) throw DomainError("1psi1 requires a != 0");
    if (!(std::abs(b / a) < std::abs(z) && std::abs(z) < 1.0))
        throw DomainError("1psi1 requires |b/a| < |z| < 1");
    if (q == 0.0) {
        if (std::abs(a - 1.0) < 1e-12) throw DomainError("1psi1: a is an integral power of q");
    } else {
        cplx qj = 1.0;
        for (int j = 0; j <= 60; ++j, qj *= q)
            if (std::abs(a - qj) < 1e-12 * std::max(1.0, std::abs(a)))
                throw DomainError("1psi1: a is an integral power of q");
        qj = 1.0 / q;
        for (int j = 1; j <= 60 && std::isfinite(std::abs(qj)); ++j, qj /= q)
            if (std::abs(a - qj) < 1e-12 * std::abs(a)) throw DomainError("1psi1: a is an integral power of q");
    }

    // k >= 0: t_k = t_{k-1} (1 - a q^{k-1}) / (1 - b q^{k-1}) z
    cplx sum = 1.0;
    double scale = 1.0;
    cplx t = 1.0;
    cplx qk = 1.0;
    bool done = false;
    for (long k = 1; k < kMaxSeriesTerms; ++k) {
        const cplx den = 1.0 - b * qk;
        if (std::abs(den) == 0.0) throw PoleError("1psi1: (b;q)_k vanishes");
        const cplx factor = (1.0 - a * qk) / den * z;
        t *= factor;
        sum += t;
        scale = std::max(scale, std::abs(t));
        qk *= q;
        const double rho = std::abs(factor);
        if (std::abs(qk) * std::max(std::abs(a), std::abs(b)) < 0.25 &&
            tail_negligible(std::abs(t), std::max(rho, std::abs(z)) * 1.01, scale)) {
            done = true;
            break;
        }
    }
    if (!done) throw ConvergenceError("1psi1 positive tail did not converge");

    // k = -j: t_{-j} = t_{-(j-1)} (q^j - b) / ((q^j - a) z)
    t = 1.0;
    qk = 1.0;
    const double limit_ratio = std::abs(b / a) / std::abs(z);
    done = false;
    for (long j = 1; j < kMaxSeriesTerms; ++j) {
        qk *= q;
        const cplx den = (qk - a) * z;
        if (std::abs(den) == 0.0) throw PoleError("1psi1: (a;q)_k vanishes");
        const cplx factor = (qk - b) / den;
        t *= factor;
        sum += t;
        scale = std::max(scale, std::abs(t));
        const double rho = std::abs(factor);
        if (std::abs(qk) < 0.25 * std::min(1.0, std::abs(a)) &&
            tail_negligible(std::abs(t), std::max(rho, limit_ratio) * 1.01, scale)) {
            done = true;
            break;
        }
    }
    if (!done) throw ConvergenceError("1psi1 negative tail did not converge");

    const std::array<cplx, 4> num{q, b / a, a * z, q / (a * z)};
    const std::array<cplx, 4> den{b, q / a, z, b / (a * z)};
    const cplx rhs = multi_pochhammer(num, q, kInfiniteLength) / multi_pochhammer(den, q, kInfiniteLength);
    return {sum, rhs};
}

cplx weierstrass_p(cplx z, const ModularPoint& mp) {
    require_off_lattice(z, mp, "weierstrass_p: z");
    const cplx t0 = theta(1, z, mp);
    const cplx t1 = theta(1, z, mp, 1);
    const cplx t2 = theta(1, z, mp, 2);
    const cplx c = theta(1, 0.0, mp, 3) / (3.0 * theta(1, 0.0, mp, 1));
    return (t1 * t1 - t0 * t2) / (t0 * t0) + c;
}

cplx logderiv_theta(int kind, cplx z, const ModularPoint& mp) {
    LambertSpec spec;
    spec.trig = LambertTrig::sin2n;
    if (kind == 1) {
        if (is_equivalent(z, 0.0, mp.tau())) throw PoleError("theta1'/theta1 at a zero of theta1");
        return 1.0 / std::tan(z) + 4.0 * lambert_sum(spec, z, mp);
    }
    if (kind == 4) {
        if (is_equivalent(z, kPi * mp.tau() / 2.0, mp.tau())) throw PoleError("theta4'/theta4 at a zero of theta4");
        // q^(n/2)/(1 - q^n) is q'^n/(1 - q'^(2n)) for the nome q' of tau/2.
        spec.den_exponent = 2;
        return 4.0 * lambert_sum(spec, z, mp.scaled(Rational(1, 2)));
    }
    throw DomainError("logderiv_theta supports kinds 1 and 4");
}

void LambertSpec::validate() const {
    if (modulus < 1 || modulus % 2 == 0) throw DomainError("lambert modulus must be odd and positive");
    if (num_exponent < 1 || den_exponent < 1) throw DomainError("lambert exponents must be >= 1");
    if (den_sign != 1 && den_sign != -1) throw DomainError("lambert den_sign must be +1 or -1");
    if (weight < 0 || weight > 8) throw DomainError("lambert weight must lie in 0..8");
}

long LambertSpec::coefficient(long n) const {
    if (odd_only && n % 2 == 0) return 0;
    long c = 1;
    if (modulus > 1) c = use_jacobi_symbol ? jacobi_symbol(n, modulus) : (n % modulus == 0 ? 0 : 1);
    switch (sign_twist) {
        case SignTwist::none: break;
        case SignTwist::alternating:
            if (n % 2 != 0) c = -c;
            break;
        case SignTwist::chi4:
            if (n % 2 == 0) return 0;
            if (n % 4 == 3) c = -c;
            break;
    }
    for (int i = 0; i < weight; ++i) c *= n;
    return c;
}

std::string to_string(SignTwist t) {
    switch (t) {
        case SignTwist::none: return "none";
        case SignTwist::alternating: return "alt";
        case SignTwist::chi4: return "chi4";
    }
    return "none";
}

std::string to_string(LambertTrig t) {
    switch (t) {
        case LambertTrig::none: return "none";
        case LambertTrig::sin2n: return "sin2n";
        case LambertTrig::cos2n: return "cos2n";
        case LambertTrig::sin_n: return "sinn";
    }
    return "none";
}

cplx lambert_sum(const LambertSpec& spec, cplx z, const ModularPoint& mp) {
    spec.validate();
    const cplx q = mp.q();
    const double aq = std::abs(q);
    double freq = 0.0;
    switch (spec.trig) {
        case LambertTrig::none: freq = 0.0; break;
        case LambertTrig::sin2n:
        case LambertTrig::cos2n: freq = 2.0; break;
        case LambertTrig::sin_n: freq = 1.0; break;
    }
    const double ratio = std::pow(aq, spec.num_exponent) * std::exp(freq * std::abs(z.imag()));
    if (!(ratio < 1.0)) throw ConvergenceError("lambert series diverges for this z (|Im z| too large)");

    const cplx qa = std::pow(q, spec.num_exponent);
    const cplx qb = std::pow(q, spec.den_exponent);
    cplx qan = 1.0, qbn = 1.0;
    cplx sum = 0.0;
    double scale = 0.0;
    for (long n = 1; n < kMaxSeriesTerms; ++n) {
        qan *= qa;
        qbn *= qb;
        const double aqbn = std::abs(qbn);
        const double bound_base = std::abs(qan) * std::exp(freq * n * std::abs(z.imag())) / std::abs(1.0 - aqbn);
        const long c = spec.coefficient(n);
        if (c != 0) {
            const cplx den = 1.0 - static_cast<double>(spec.den_sign) * qbn;
            if (std::abs(den) == 0.0) throw PoleError("lambert denominator vanishes");
            cplx trig = 1.0;
            switch (spec.trig) {
                case LambertTrig::none: break;
                case LambertTrig::sin2n: trig = std::sin(2.0 * static_cast<double>(n) * z); break;
                case LambertTrig::cos2n: trig = std::cos(2.0 * static_cast<double>(n) * z); break;
                case LambertTrig::sin_n: trig = std::sin(static_cast<double>(n) * z); break;
            }
            sum += static_cast<double>(c) * qan / den * trig;
        }
        const double bound = std::pow(static_cast<double>(n), spec.weight) * bound_base;
        scale = std::max({scale, std::abs(sum), bound});
        const double growth = std::pow(static_cast<double>(n + 1) / n, spec.weight) * ratio;
        if (growth < 1.0 && bound * growth / (1.0 - growth) < tail_tolerance() * scale) return sum;
    }
    throw ConvergenceError("lambert series did not reach its tail bound");
}

cplx eisenstein_a(const ModularPoint& mp) {
    LambertSpec spec;
    spec.modulus = 3;
    spec.use_jacobi_symbol = true;
    return 1.0 + 6.0 * lambert_sum(spec, 0.0, mp);
}

}  // namespace thetaforge
