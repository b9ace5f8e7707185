#include "thetaforge/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thetaforge/sampling.hpp"

namespace thetaforge {

namespace {

constexpr int kContourPoints = 64;
constexpr double kPoleMargin = 2e-2;
constexpr int kMaxDraws = 200;

double rel_diff(cplx a, cplx b, double scale = 0.0) {
    const double d = std::max({std::abs(a), std::abs(b), scale, std::numeric_limits<double>::min()});
    return std::abs(a - b) / d;
}

bool near_any(cplx z, std::span<const cplx> poles, cplx tau) {
    return std::any_of(poles.begin(), poles.end(),
                       [&](cplx p) { return lattice_distance(z - p, tau) < kPoleMargin; });
}

// Draws points of the (slightly shrunk) fundamental parallelogram at which
// `probe` succeeds, skipping declared poles and anything that throws PoleError.
template <typename Probe>
void for_each_sample(Rng& rng, const ModularPoint& mp, std::span<const cplx> poles, int samples, Probe&& probe) {
    int done = 0;
    int draws = 0;
    while (done < samples) {
        if (++draws > kMaxDraws + samples)
            throw DecompositionError("could not draw a sample away from the poles");
        const cplx z = rng.lattice_point(mp.tau(), 0.05, 0.95, 0.05, 0.95);
        if (near_any(z, poles, mp.tau())) continue;
        try {
            if (!probe(z)) return;
        } catch (const PoleError&) {
            continue;
        }
        ++done;
    }
}

void check_pairwise_inequivalent(std::span<const cplx> poles, cplx tau) {
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (std::size_t j = i + 1; j < poles.size(); ++j)
            if (is_equivalent(poles[i], poles[j], tau))
                throw DecompositionError("poles " + std::to_string(i) + " and " + std::to_string(j) +
                                         " are equivalent modulo the lattice");
}

KernelKind kernel_for(const FunctionalEquationPattern& p) {
    if (p.q_power == 0 && p.pi_sign == 1 && p.pitau_sign == 1) return KernelKind::kronecker;
    if (p.q_power == 0 && p.pi_sign == -1 && p.pitau_sign == -1) return KernelKind::theta3;
    throw DecompositionError("functional equations do not match a supported decomposition kernel");
}

void check_nondegenerate(KernelKind kind, cplx y, const ModularPoint& mp) {
    const cplx e = std::exp(2.0 * kI * y);
    for (long k = -10; k <= 10; ++k) {
        const cplx bad = kind == KernelKind::kronecker ? mp.q_grains(24 * k) : -mp.q_grains(24 * k + 12);
        if (std::abs(e - bad) < 1e-6) throw DecompositionError("degenerate y: e^{2iy} hits an excluded power of q");
    }
}

void verify_reconstruction(const Evaluable& f, const Decomposition& d, std::span<const cplx> poles,
                           const ModularPoint& mp, const DecomposeOptions& opts) {
    Rng rng(opts.seed ^ 0x5eed'0f'dec0ULL);
    double worst = 0.0;
    for_each_sample(rng, mp, poles, opts.verify_samples, [&](cplx z) {
        const cplx lhs = f(z);
        double scale = 0.0;
        for (const auto& t : d.terms) scale = std::max(scale, std::abs(t.residue * kernel_value(d.kernel, d.y, z - t.pole, mp)));
        if (d.constant) scale = std::max(scale, std::abs(*d.constant));
        worst = std::max(worst, rel_diff(lhs, d.evaluate(z, mp), scale));
        return true;
    });
    if (worst > opts.tol)
        throw DecompositionError("reconstruction mismatch (relative error " + std::to_string(worst) +
                                 "): missed pole, non-simple pole or degenerate parameter");
}

// Radius keeping the circle around a clear of every other singularity.
double contour_radius(cplx a, std::span<const cplx> others, cplx tau) {
    double d = std::numeric_limits<double>::infinity();
    for (long m = -2; m <= 2; ++m)
        for (long n = -2; n <= 2; ++n)
            if (m != 0 || n != 0) d = std::min(d, std::abs(kPi * static_cast<double>(m) + kPi * static_cast<double>(n) * tau));
    for (cplx p : others) {
        const LatticeCoord c = lattice_reduce(p - a, tau);
        for (long m = -1; m <= 1; ++m)
            for (long n = -1; n <= 1; ++n) {
                const double dist = std::abs(c.reduced + kPi * static_cast<double>(m) + kPi * static_cast<double>(n) * tau);
                if (dist > 1e-12) d = std::min(d, dist);
            }
    }
    return std::min(0.05, d / 2.0);
}

struct ContourMeans {
    cplx first;   // mean of (z - a) f
    cplx second;  // mean of (z - a)^2 f
    double scale; // max |(z - a) f| * rho
};

ContourMeans contour_means(const Evaluable& f, cplx a, double rho) {
    ContourMeans out{0.0, 0.0, 0.0};
    for (int j = 0; j < kContourPoints; ++j) {
        const cplx d = std::polar(rho, 2.0 * kPi * j / kContourPoints);
        const cplx v = d * f(a + d);
        out.first += v;
        out.second += d * v;
        out.scale = std::max(out.scale, std::abs(v) * rho);
    }
    out.first /= static_cast<double>(kContourPoints);
    out.second /= static_cast<double>(kContourPoints);
    return out;
}

// g'(a) from the Cauchy integral over a circle of radius rho (g entire).
// The trapezoid rule converges geometrically; finite differences lose about
// h^4 times the fifth derivative, which is visible at 1e-9 for larger |a|.
cplx cauchy_derivative(const Evaluable& g, cplx a, double rho) {
    cplx sum = 0.0;
    for (int j = 0; j < kContourPoints; ++j) {
        const cplx d = std::polar(rho, 2.0 * kPi * j / kContourPoints);
        sum += g(a + d) / d;
    }
    return sum / static_cast<double>(kContourPoints);
}

}  // namespace

FunctionalEquationPattern FunctionalEquationPattern::over(const FunctionalEquationPattern& d) const {
    return {pi_sign * d.pi_sign, pitau_sign * d.pitau_sign, q_power - d.q_power, y_shift - d.y_shift};
}

cplx kernel_value(KernelKind kind, cplx y, cplx w, const ModularPoint& mp) {
    switch (kind) {
        case KernelKind::kronecker: return kronecker_K(y, w, mp);
        case KernelKind::theta3: {
            const cplx t1 = theta(1, w, mp);
            if (t1 == 0.0) throw PoleError("theta3 kernel evaluated at a lattice point");
            return theta1_prime0(mp) / theta(3, y, mp) * theta(3, w + y, mp) / t1;
        }
        case KernelKind::elliptic_logderiv: {
            const cplx t1 = theta(1, w, mp);
            if (t1 == 0.0) throw PoleError("logarithmic derivative evaluated at a lattice point");
            return theta(1, w, mp, 1) / t1;
        }
    }
    throw DomainError("unknown kernel kind");
}

cplx Decomposition::evaluate(cplx z, const ModularPoint& mp) const {
    cplx sum = constant.value_or(0.0);
    for (const auto& t : terms) sum += t.residue * kernel_value(kernel, y, z - t.pole, mp);
    return sum;
}

bool check_functional_equations(const Evaluable& f, const FunctionalEquationPattern& p, const ModularPoint& mp,
                                int samples, std::span<const cplx> poles, std::uint64_t seed, double tol) {
    Rng rng(seed);
    bool ok = true;
    for_each_sample(rng, mp, poles, samples, [&](cplx z) {
        const cplx fz = f(z);
        const cplx by_pi = static_cast<double>(p.pi_sign) * f(z + kPi);
        const cplx factor = static_cast<double>(p.pitau_sign) * mp.q_grains(12 * p.q_power) *
                            std::exp(2.0 * kI * (static_cast<double>(p.q_power) * z + p.y_shift));
        const cplx by_pitau = factor * f(z + kPi * mp.tau());
        ok = rel_diff(fz, by_pi) <= tol && rel_diff(fz, by_pitau) <= tol;
        return ok;
    });
    return ok;
}

cplx residue_at(const Evaluable& f, cplx a, const ModularPoint& mp, std::span<const cplx> other_poles) {
    const double rho = contour_radius(a, other_poles, mp.tau());
    const ContourMeans big = contour_means(f, a, rho);
    const ContourMeans small = contour_means(f, a, rho / 2.0);
    if (std::abs(big.second) > 1e-6 * std::max(big.scale, std::numeric_limits<double>::min()))
        throw NonSimplePoleError("pole is not simple: (z - a)^2 f(z) has a nonzero mean on the contour");
    const double scale = std::max(big.scale, small.scale) / rho;
    if (std::abs(big.first - small.first) > 1e-9 * std::max({std::abs(big.first), scale, 1e-300}))
        throw NonSimplePoleError("contour residues at rho and rho/2 disagree");
    return small.first;
}

cplx residue_limit(const Evaluable& f, cplx a, double h) {
    auto g = [&](double s) {
        cplx sum = 0.0;
        for (cplx d : {cplx(s, 0), cplx(-s, 0), cplx(0, s), cplx(0, -s)}) sum += d * f(a + d);
        return sum / 4.0;
    };
    return (16.0 * g(h / 2.0) - g(h)) / 15.0;
}

Decomposition decompose_simple_poles(const Evaluable& f, std::span<const cplx> poles,
                                     const FunctionalEquationPattern& pattern, const ModularPoint& mp,
                                     const DecomposeOptions& opts) {
    const KernelKind kind = kernel_for(pattern);
    check_nondegenerate(kind, pattern.y_shift, mp);
    check_pairwise_inequivalent(poles, mp.tau());
    Decomposition d;
    d.kernel = kind;
    d.y = pattern.y_shift;
    for (std::size_t k = 0; k < poles.size(); ++k) {
        std::vector<cplx> others(poles.begin(), poles.end());
        others.erase(others.begin() + static_cast<long>(k));
        d.terms.push_back({poles[k], residue_at(f, poles[k], mp, others)});
    }
    verify_reconstruction(f, d, poles, mp, opts);
    return d;
}

Decomposition decompose_FG(const Evaluable& F, const Evaluable& G, std::span<const cplx> G_zeros,
                           const FunctionalEquationPattern& F_pattern, const FunctionalEquationPattern& G_pattern,
                           const ModularPoint& mp, const DecomposeOptions& opts) {
    const FunctionalEquationPattern pattern = F_pattern.over(G_pattern);
    const KernelKind kind = kernel_for(pattern);
    check_nondegenerate(kind, pattern.y_shift, mp);
    check_pairwise_inequivalent(G_zeros, mp.tau());

    Decomposition d;
    d.kernel = kind;
    d.y = pattern.y_shift;
    std::vector<cplx> zeros;
    for (cplx a : G_zeros) {
        const double rho = opts.derivative_radius;
        // Newton polish on G from the supplied location.
        for (int it = 0; it < 5; ++it) {
            const cplx g = G(a);
            if (g == 0.0) break;
            const cplx step = g / cauchy_derivative(G, a, rho);
            if (!std::isfinite(std::abs(step)) || std::abs(G(a - step)) >= std::abs(g)) break;
            a -= step;
        }
        const cplx dG = cauchy_derivative(G, a, rho);
        const cplx Fa = F(a);
        if (std::abs(Fa) < 1e-12 * std::max(1.0, std::abs(dG)))
            throw DecompositionError("F and G have a common zero");
        d.terms.push_back({a, Fa / dG});
        zeros.push_back(a);
    }
    const Evaluable f = [&](cplx z) {
        const cplx g = G(z);
        if (g == 0.0) throw PoleError("G vanishes");
        return F(z) / g;
    };
    verify_reconstruction(f, d, zeros, mp, opts);
    return d;
}

Decomposition elliptic_decompose(const Evaluable& f, std::span<const cplx> poles, const ModularPoint& mp,
                                 const DecomposeOptions& opts) {
    check_pairwise_inequivalent(poles, mp.tau());
    if (!check_functional_equations(f, FunctionalEquationPattern::elliptic(), mp, 4, poles, opts.seed, 1e-8))
        throw DecompositionError("function is not elliptic with periods pi and pi tau");
    Decomposition d;
    d.kernel = KernelKind::elliptic_logderiv;
    cplx sum = 0.0;
    double size = 0.0;
    for (std::size_t k = 0; k < poles.size(); ++k) {
        std::vector<cplx> others(poles.begin(), poles.end());
        others.erase(others.begin() + static_cast<long>(k));
        const cplx r = residue_at(f, poles[k], mp, others);
        d.terms.push_back({poles[k], r});
        sum += r;
        size = std::max(size, std::abs(r));
    }
    if (std::abs(sum) > 1e-8 * std::max(size, 1.0)) throw DecompositionError("residues do not sum to zero");
    Rng rng(opts.seed ^ 0xc0'57a'47ULL);
    for_each_sample(rng, mp, poles, 1, [&](cplx z) {
        d.constant = 0.0;
        d.constant = f(z) - d.evaluate(z, mp);
        return true;
    });
    verify_reconstruction(f, d, poles, mp, opts);
    return d;
}

cplx addition_constant(const Evaluable& F, const Evaluable& G, cplx alpha, const ModularPoint& mp, cplx x_probe) {
    struct Estimate {
        cplx value;
        double scale;  // size of the individual products, for the agreement test
    };
    const cplx ta = theta(1, alpha, mp);
    const cplx x2 = 0.61 * x_probe + 0.23 + 0.17 * mp.tau();
    auto single = [&](cplx x) {
        const cplx t2x = theta(1, 2.0 * x, mp);
        if (std::abs(t2x) < 1e-8) throw DecompositionError("probe point is degenerate: theta1(2x) vanishes");
        const cplx a = F(x) * G(-x);
        const cplx b = G(x) * F(-x);
        const cplx den = t2x * ta;
        return Estimate{(a - b) / den, std::max(std::abs(a), std::abs(b)) / std::abs(den)};
    };
    // Two-point form, used when theta1(alpha) vanishes.
    auto paired = [&](cplx x, cplx y) {
        const cplx den = theta(1, x + y + alpha, mp) * theta(1, x - y, mp);
        if (std::abs(den) < 1e-8) throw DecompositionError("probe points are degenerate");
        const cplx a = F(x) * G(y);
        const cplx b = G(x) * F(y);
        return Estimate{(a - b) / den, std::max(std::abs(a), std::abs(b)) / std::abs(den)};
    };
    Estimate c1;
    Estimate c2;
    if (std::abs(ta) > 1e-8) {
        c1 = single(x_probe);
        c2 = single(x2);
    } else {
        c1 = paired(x_probe, x2);
        c2 = paired(x2 + 0.11, x_probe - 0.07 * mp.tau());
    }
    if (std::abs(c1.value - c2.value) > 1e-8 * std::max({c1.scale, c2.scale, 1e-300}))
        throw DecompositionError("addition constant differs between probes: F, G violate the functional equations");
    return c1.value;
}

}  // namespace thetaforge
