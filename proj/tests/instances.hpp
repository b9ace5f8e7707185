#pragma once

// Random F/G theta products for the decomposition engine.
//
// G = prod_j theta1(z - a_j), n = 2..4 factors with known simple zeros a_j.
// F = prod_j theta_{k_j}(z - b_j) with the same count, kinds chosen so that
// F/G has the sign pattern of the requested kernel. Every theta carries the
// same q^(1/2) e^{2iz} factor along pi tau, so F/G picks up e^{2iy} with
// y = sum a_j - sum b_j.

#include <algorithm>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "thetaforge/decompose.hpp"

namespace instances {

using thetaforge::cplx;

struct Instance {
    cplx tau;
    std::vector<int> f_kinds;
    std::vector<cplx> f_shifts;
    std::vector<cplx> zeros;
    thetaforge::FunctionalEquationPattern f_pattern, g_pattern;
    thetaforge::ModularPoint mp = thetaforge::nome_from_tau({0.0, 1.0});

    cplx F(cplx z) const {
        cplx p = 1.0;
        for (std::size_t j = 0; j < f_kinds.size(); ++j) p *= thetaforge::theta(f_kinds[j], z - f_shifts[j], mp);
        return p;
    }
    cplx G(cplx z) const {
        cplx p = 1.0;
        for (cplx a : zeros) p *= thetaforge::theta(1, z - a, mp);
        return p;
    }
    cplx f(cplx z) const {
        const cplx g = G(z);
        if (g == 0.0) throw thetaforge::PoleError("G vanishes");
        return F(z) / g;
    }
    thetaforge::FunctionalEquationPattern pattern() const { return f_pattern.over(g_pattern); }
};

// theta_k(z + pi) = pi_sign theta_k(z), theta_k(z) = tau_sign q^(1/2) e^{2iz} theta_k(z + pi tau)
inline int pi_sign(int k) { return (k == 1 || k == 2) ? -1 : 1; }
inline int tau_sign(int k) { return (k == 1 || k == 4) ? -1 : 1; }

inline int kind_with_signs(int ps, int ts) {
    for (int k = 1; k <= 4; ++k)
        if (pi_sign(k) == ps && tau_sign(k) == ts) return k;
    return 1;
}

// theta3 = false: F/G obeys f(z) = f(z + pi) = e^{2iy} f(z + pi tau)
// theta3 = true:  f(z) = -f(z + pi) = -e^{2iy} f(z + pi tau)
inline Instance make(std::mt19937_64& g, bool theta3) {
    using namespace thetaforge;
    std::uniform_int_distribution<int> count(2, 4), kind(1, 4);
    for (;;) {
        Instance in;
        in.tau = oracle::random_tau(g);
        in.mp = nome_from_tau(in.tau);
        const int n = count(g);
        bool spread = true;
        for (int j = 0; j < n; ++j) {
            const cplx a = oracle::random_point(g, in.tau, 0.0, 1.0);
            for (cplx b : in.zeros)
                if (lattice_distance(a - b, in.tau) < 0.15) spread = false;
            in.zeros.push_back(a);
        }
        if (!spread) continue;
        int ps = 1, ts = 1;
        for (int j = 0; j + 1 < n; ++j) {
            const int k = kind(g);
            in.f_kinds.push_back(k);
            ps *= pi_sign(k);
            ts *= tau_sign(k);
        }
        const int target = (n % 2 ? -1 : 1) * (theta3 ? -1 : 1);
        in.f_kinds.push_back(kind_with_signs(ps * target, ts * target));
        cplx sa = 0.0, sb = 0.0;
        for (int j = 0; j < n; ++j) {
            in.f_shifts.push_back(oracle::random_point(g, in.tau, 0.0, 1.0));
            sb += in.f_shifts.back();
            sa += in.zeros[static_cast<std::size_t>(j)];
        }
        const int sign_n = n % 2 ? -1 : 1;
        int fps = 1, fts = 1;
        for (int k : in.f_kinds) {
            fps *= pi_sign(k);
            fts *= tau_sign(k);
        }
        in.f_pattern = {fps, fts, n, -sb};
        in.g_pattern = {sign_n, sign_n, n, -sa};

        // generic y: stay clear of the excluded powers of q and of the lattice
        const cplx y = in.pattern().y_shift;
        const cplx e = std::exp(2.0 * kI * y);
        bool generic = lattice_distance(y, in.tau) > 0.05;
        for (long k = -10; k <= 10 && generic; ++k) {
            const cplx bad = theta3 ? -in.mp.q_grains(24 * k + 12) : in.mp.q_grains(24 * k);
            if (std::abs(e - bad) < 1e-3 * std::max(1.0, std::abs(bad))) generic = false;
        }
        // F must not vanish at a zero of G
        for (cplx a : in.zeros)
            if (std::abs(in.F(a)) < 1e-6) generic = false;
        if (generic) return in;
    }
}

// Worst relative reconstruction error at `points` random z away from the zeros.
inline double reconstruction_error(const Instance& in, const thetaforge::Decomposition& d, std::mt19937_64& g,
                                   int points) {
    double worst = 0.0;
    int done = 0;
    while (done < points) {
        const cplx z = oracle::random_point(g, in.tau, 0.0, 1.0);
        bool near = false;
        for (cplx a : in.zeros)
            if (thetaforge::lattice_distance(z - a, in.tau) < 0.05) near = true;
        if (near) continue;
        worst = std::max(worst, oracle::rel(in.f(z), d.evaluate(z, in.mp)));
        ++done;
    }
    return worst;
}

}  // namespace instances
