#include "thetaforge/theta.hpp"

#include <cmath>

namespace thetaforge {

namespace {

using lcplx = std::complex<long double>;
constexpr long double kPiL = std::numbers::pi_v<long double>;

struct Characteristic {
    long double shift;  // a
    int alternating;    // s = -1 or +1
    lcplx prefactor;    // C
};

Characteristic characteristic(ThetaKind kind) {
    switch (kind.index()) {
        case 1: return {0.5L, -1, lcplx(0.0L, -1.0L)};
        case 2: return {0.5L, 1, lcplx(1.0L, 0.0L)};
        case 3: return {0.0L, 1, lcplx(1.0L, 0.0L)};
        default: return {0.0L, -1, lcplx(1.0L, 0.0L)};
    }
}

// Neumaier-compensated complex accumulator.
struct Accumulator {
    long double re = 0, im = 0, cre = 0, cim = 0;

    static void add(long double& s, long double& c, long double v) {
        const long double t = s + v;
        if (std::fabs(s) >= std::fabs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    void add(lcplx v) {
        add(re, cre, v.real());
        add(im, cim, v.imag());
    }
    lcplx value() const { return {re + cre, im + cim}; }
};

}  // namespace

lcplx theta_ld(ThetaKind kind, lcplx zz, lcplx tau, int deriv_order) {
    if (deriv_order < 0 || deriv_order > kMaxThetaDerivative)
        throw DomainError("theta derivative order must lie in 0..4");
    if (!(tau.imag() > 0.0L)) throw DomainError("Im tau must be positive");
    const Characteristic ch = characteristic(kind);
    const long double t = tau.imag();
    const long double center = -zz.imag() / (kPiL * t) - ch.shift;
    const long n0 = std::lround(static_cast<double>(center));
    const long double log_tol = std::log(static_cast<long double>(tail_tolerance()));

    auto log_magnitude = [&](long n) {
        const long double m = static_cast<long double>(n) + ch.shift;
        long double lm = -kPiL * t * m * m - 2.0L * m * zz.imag();
        if (deriv_order > 0 && m != 0.0L) lm += deriv_order * std::log(2.0L * std::fabs(m));
        return lm;
    };
    auto term = [&](long n) {
        const long double m = static_cast<long double>(n) + ch.shift;
        const lcplx iL(0.0L, 1.0L);
        lcplx v = std::exp(iL * kPiL * tau * m * m + 2.0L * iL * m * zz);
        if (n % 2 != 0 && ch.alternating < 0) v = -v;
        for (int k = 0; k < deriv_order; ++k) v *= 2.0L * iL * m;
        return v;
    };

    Accumulator acc;
    long double max_log = -INFINITY;
    long up = n0, down = n0 - 1;
    bool up_done = false, down_done = false;
    int up_small = 0, down_small = 0;
    for (long iter = 0; iter < kMaxSeriesTerms; ++iter) {
        if (!up_done) {
            const long double lm = log_magnitude(up);
            max_log = std::max(max_log, lm);
            acc.add(term(up));
            if (lm < max_log + log_tol && static_cast<long double>(up) > center) {
                if (++up_small >= 2) up_done = true;
            } else {
                up_small = 0;
            }
            ++up;
        }
        if (!down_done) {
            const long double lm = log_magnitude(down);
            max_log = std::max(max_log, lm);
            acc.add(term(down));
            if (lm < max_log + log_tol && static_cast<long double>(down) < center) {
                if (++down_small >= 2) down_done = true;
            } else {
                down_small = 0;
            }
            --down;
        }
        if (up_done && down_done) return ch.prefactor * acc.value();
    }
    throw ConvergenceError("theta series did not reach its tail bound; lattice-reduce z first");
}

cplx theta(ThetaKind kind, cplx z, const ModularPoint& mp, int deriv_order) {
    const lcplx v = theta_ld(kind, lcplx(z.real(), z.imag()), lcplx(mp.tau().real(), mp.tau().imag()), deriv_order);
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

cplx theta_product(ThetaKind kind, cplx z, const ModularPoint& mp) {
    const lcplx q(mp.q().real(), mp.q().imag());
    const lcplx iL(0.0L, 1.0L);
    const lcplx zz(z.real(), z.imag());
    const lcplx e2p = std::exp(2.0L * iL * zz);
    const lcplx e2m = 1.0L / e2p;
    const cplx qh = mp.q_grains(12);
    const lcplx q_half(qh.real(), qh.imag());
    const long double growth = std::max(std::abs(e2p), std::abs(e2m));
    const long double aq = std::abs(q);
    const long double stop = static_cast<long double>(tail_tolerance()) * (1.0L - aq);

    const int k = kind.index();
    const long double sign = (k == 1 || k == 4) ? -1.0L : 1.0L;
    lcplx prod = 1.0L;
    lcplx qn = q;
    for (long n = 1; n < kMaxSeriesTerms; ++n) {
        // (k = 3, 4) use q^(n - 1/2)
        const lcplx base = (k <= 2) ? qn : qn / q_half;
        prod *= (1.0L - qn) * (1.0L + sign * base * e2p) * (1.0L + sign * base * e2m);
        if (std::abs(base) * growth < stop && std::abs(qn) < stop) {
            lcplx lead = 1.0L;
            if (k <= 2) {
                const cplx q8 = mp.q8();
                const lcplx trig = (k == 1) ? std::sin(zz) : std::cos(zz);
                lead = 2.0L * lcplx(q8.real(), q8.imag()) * trig;
            }
            const lcplx v = lead * prod;
            return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
        }
        qn *= q;
    }
    throw ConvergenceError("theta product did not reach its tail bound");
}

cplx theta1_prime0(const ModularPoint& mp) {
    const cplx p = q_pochhammer(mp.q(), mp.q(), kInfiniteLength);
    return 2.0 * mp.q8() * p * p * p;
}

cplx eta(const ModularPoint& mp, Rational scale) {
    const ModularPoint s = scale == Rational(1) ? mp : mp.scaled(scale);
    return s.q24() * q_pochhammer(s.q(), s.q(), kInfiniteLength);
}

}  // namespace thetaforge
