#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "thetaforge/functions.hpp"

namespace thetaforge {

// A function of z that may throw PoleError. Must be safe to call concurrently.
using Evaluable = std::function<cplx(cplx)>;

// f(z) = pi_sign f(z + pi) = pitau_sign q^(n/2) e^{2inz + 2iy} f(z + pi tau)
// with n = q_power. A product of n factors theta1(z - a_j) with sum a_j = 0
// has pi_sign = pitau_sign = (-1)^n and q_power = n.
struct FunctionalEquationPattern {
    int pi_sign = 1;
    int pitau_sign = 1;
    long q_power = 0;
    cplx y_shift{0.0, 0.0};

    // f(z) = f(z + pi) = e^{2iy} f(z + pi tau)
    static FunctionalEquationPattern kronecker(cplx y) { return {1, 1, 0, y}; }
    // f(z) = -f(z + pi) = -e^{2iy} f(z + pi tau)
    static FunctionalEquationPattern theta3(cplx y) { return {-1, -1, 0, y}; }
    // periods pi and pi tau
    static FunctionalEquationPattern elliptic() { return {1, 1, 0, 0.0}; }

    // Pattern obeyed by F/G when F obeys *this and G obeys denominator.
    FunctionalEquationPattern over(const FunctionalEquationPattern& denominator) const;
};

enum class KernelKind {
    kronecker,          // K_y(w)
    theta3,             // (theta1'(0) / theta3(y)) theta3(w + y) / theta1(w)
    elliptic_logderiv,  // theta1'(w) / theta1(w)
};

struct PoleTerm {
    cplx pole;
    cplx residue;
};

struct Decomposition {
    KernelKind kernel = KernelKind::kronecker;
    cplx y{0.0, 0.0};
    std::vector<PoleTerm> terms;
    std::optional<cplx> constant;

    // constant + sum residue_k * kernel(z - pole_k)
    cplx evaluate(cplx z, const ModularPoint& mp) const;
};

cplx kernel_value(KernelKind kind, cplx y, cplx w, const ModularPoint& mp);

struct DecomposeOptions {
    int verify_samples = 8;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    // Radius of the circle used for G' at its zeros.
    double derivative_radius = 0.05;
};

// Samples z in the fundamental parallelogram away from `poles` and checks
// both relations of the pattern. Throws DecompositionError when no usable
// sample can be drawn.
bool check_functional_equations(const Evaluable& f, const FunctionalEquationPattern& pattern, const ModularPoint& mp,
                                int samples, std::span<const cplx> poles = {}, std::uint64_t seed = 0,
                                double tol = 1e-9);

// Residue at a simple pole: mean of (z - a) f(z) over M = 64 points of a
// circle of radius rho, repeated at rho/2. Throws NonSimplePoleError when the
// two estimates disagree or the contour sees a higher-order pole.
cplx residue_at(const Evaluable& f, cplx a, const ModularPoint& mp, std::span<const cplx> other_poles = {});

// Limit of (z - a) f(z) from four points on a cross of size h, with one
// Richardson step. Independent of residue_at; used to cross-check it.
cplx residue_limit(const Evaluable& f, cplx a, double h = 1e-2);

// Kronecker-basis (pattern kronecker) or theta3-basis (pattern theta3)
// decomposition of f from its inequivalent simple poles, verified by
// reconstruction before returning.
Decomposition decompose_simple_poles(const Evaluable& f, std::span<const cplx> poles,
                                     const FunctionalEquationPattern& pattern, const ModularPoint& mp,
                                     const DecomposeOptions& opts = {});

// F/G decomposed over the zeros of G with residues F(a_k)/G'(a_k).
Decomposition decompose_FG(const Evaluable& F, const Evaluable& G, std::span<const cplx> G_zeros,
                           const FunctionalEquationPattern& F_pattern, const FunctionalEquationPattern& G_pattern,
                           const ModularPoint& mp, const DecomposeOptions& opts = {});

// f = C + sum Res(f; a_k) theta1'(z - a_k)/theta1(z - a_k) for elliptic f.
Decomposition elliptic_decompose(const Evaluable& f, std::span<const cplx> poles, const ModularPoint& mp,
                                 const DecomposeOptions& opts = {});

// The constant C with F(x)G(y) - G(x)F(y) = C theta1(x+y+alpha) theta1(x-y),
// for F, G obeying f(z) = f(z+pi) = q e^{(2 alpha + 4) i z} f(z + pi tau).
// Evaluated at x_probe and cross-checked at a second probe.
cplx addition_constant(const Evaluable& F, const Evaluable& G, cplx alpha, const ModularPoint& mp, cplx x_probe);

}  // namespace thetaforge
