#include <random>

#include "doctest.h"
#include "instances.hpp"
#include "thetaforge/decompose.hpp"

using namespace thetaforge;

TEST_CASE("random theta products obey their functional equations") {
    std::mt19937_64 g(1);
    for (int i = 0; i < 20; ++i) {
        const instances::Instance in = instances::make(g, i % 2 == 1);
        const Evaluable F = [&](cplx z) { return in.F(z); };
        const Evaluable G = [&](cplx z) { return in.G(z); };
        const Evaluable f = [&](cplx z) { return in.f(z); };
        CHECK(check_functional_equations(F, in.f_pattern, in.mp, 6, {}, 1, 1e-10));
        CHECK(check_functional_equations(G, in.g_pattern, in.mp, 6, {}, 2, 1e-10));
        CHECK(check_functional_equations(f, in.pattern(), in.mp, 6, in.zeros, 3, 1e-9));
        // a wrong y is caught
        auto wrong = in.pattern();
        wrong.y_shift += 0.3;
        CHECK_FALSE(check_functional_equations(f, wrong, in.mp, 6, in.zeros, 3, 1e-9));
    }
}

TEST_CASE("F/G reconstruction with both kernels") {
    std::mt19937_64 g(2);
    for (int i = 0; i < 20; ++i) {
        const bool t3 = i % 2 == 1;
        const instances::Instance in = instances::make(g, t3);
        const Decomposition d = decompose_FG([&](cplx z) { return in.F(z); }, [&](cplx z) { return in.G(z); },
                                             in.zeros, in.f_pattern, in.g_pattern, in.mp);
        CHECK(d.kernel == (t3 ? KernelKind::theta3 : KernelKind::kronecker));
        CHECK(instances::reconstruction_error(in, d, g, 20) < 1e-9);
    }
}

TEST_CASE("simple-pole reconstruction from contour residues") {
    std::mt19937_64 g(3);
    for (int i = 0; i < 10; ++i) {
        const bool t3 = i % 2 == 1;
        const instances::Instance in = instances::make(g, t3);
        const Evaluable f = [&](cplx z) { return in.f(z); };
        const Decomposition d = decompose_simple_poles(f, in.zeros, in.pattern(), in.mp);
        CHECK(instances::reconstruction_error(in, d, g, 20) < 1e-9);
    }
}

TEST_CASE("kernels have residue 1 at the origin") {
    const ModularPoint mp = nome_from_tau({0.1, 0.9});
    const cplx y(0.4, 0.3);
    for (KernelKind k : {KernelKind::kronecker, KernelKind::theta3, KernelKind::elliptic_logderiv}) {
        const Evaluable f = [&](cplx w) { return kernel_value(k, y, w, mp); };
        CHECK(std::abs(residue_at(f, 0.0, mp) - 1.0) < 1e-9);
        CHECK(std::abs(residue_limit(f, 0.0) - 1.0) < 1e-9);
    }
}

TEST_CASE("contour residue agrees with the limit") {
    std::mt19937_64 g(4);
    for (int i = 0; i < 10; ++i) {
        const instances::Instance in = instances::make(g, false);
        const Evaluable f = [&](cplx z) { return in.f(z); };
        for (std::size_t k = 0; k < in.zeros.size(); ++k) {
            std::vector<cplx> others = in.zeros;
            others.erase(others.begin() + static_cast<long>(k));
            const cplx a = residue_at(f, in.zeros[k], in.mp, others);
            const cplx b = residue_limit(f, in.zeros[k], 1e-3);
            CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("double poles are rejected") {
    const ModularPoint mp = nome_from_tau({0.0, 1.0});
    const Evaluable f = [&](cplx z) {
        const cplx t = theta(1, z, mp);
        return 1.0 / (t * t);
    };
    CHECK_THROWS_AS(residue_at(f, 0.0, mp), NonSimplePoleError);
}

TEST_CASE("a missed pole fails reconstruction") {
    std::mt19937_64 g(5);
    instances::Instance in = instances::make(g, false);
    while (in.zeros.size() < 3) in = instances::make(g, false);
    const Evaluable F = [&](cplx z) { return in.F(z); };
    const Evaluable G = [&](cplx z) { return in.G(z); };
    std::vector<cplx> partial(in.zeros.begin(), in.zeros.end() - 1);
    CHECK_THROWS_AS(decompose_FG(F, G, partial, in.f_pattern, in.g_pattern, in.mp), DecompositionError);
}

TEST_CASE("degenerate y and unsupported patterns") {
    const ModularPoint mp = nome_from_tau({0.0, 1.0});
    const Evaluable f = [&](cplx z) { return kronecker_K(0.3, z, mp); };
    const std::vector<cplx> poles{0.0};
    CHECK_THROWS_AS(decompose_simple_poles(f, poles, FunctionalEquationPattern::kronecker(0.0), mp), DecompositionError);
    CHECK_THROWS_AS(decompose_simple_poles(f, poles, {1, 1, 2, 0.3}, mp), DecompositionError);
    const std::vector<cplx> twice{0.0, kPi};
    CHECK_THROWS_AS(decompose_simple_poles(f, twice, FunctionalEquationPattern::kronecker(0.3), mp), DecompositionError);
    const Decomposition d = decompose_simple_poles(f, poles, FunctionalEquationPattern::kronecker(0.3), mp);
    CHECK(std::abs(d.terms.at(0).residue - 1.0) < 1e-9);
}

TEST_CASE("elliptic decomposition of a difference of logarithmic derivatives") {
    const ModularPoint mp = nome_from_tau({0.2, 1.1});
    const cplx u(0.9, 0.4);
    const Evaluable f = [&](cplx z) {
        return theta(1, z - u, mp, 1) / theta(1, z - u, mp) - theta(1, z, mp, 1) / theta(1, z, mp) + 0.25;
    };
    const std::vector<cplx> poles{0.0, u};
    const Decomposition d = elliptic_decompose(f, poles, mp);
    REQUIRE(d.constant.has_value());
    CHECK(std::abs(*d.constant - 0.25) < 1e-9);
    CHECK(std::abs(d.terms[0].residue + 1.0) < 1e-9);
    CHECK(std::abs(d.terms[1].residue - 1.0) < 1e-9);
}

TEST_CASE("addition constant is symmetric") {
    // theta1(z + u) theta1(z + v) = q e^{4iz + 2i(u + v)} theta1(z + pi tau + u) theta1(z + pi tau + v),
    // so F and G below share alpha = u + v
    const ModularPoint mp = nome_from_tau({0.1, 0.95});
    const cplx u(0.3, 0.1), v(0.7, -0.05), s(1.1, 0.2), t = u + v - s;
    const Evaluable F = [&](cplx z) { return theta(1, z + u, mp) * theta(1, z + v, mp); };
    const Evaluable G = [&](cplx z) { return theta(1, z + s, mp) * theta(1, z + t, mp); };
    const cplx alpha = u + v;
    const cplx x1(0.41, 0.12), x2(0.83, -0.2);
    const cplx c1 = addition_constant(F, G, alpha, mp, x1);
    const cplx c2 = addition_constant(F, G, alpha, mp, x2);
    CHECK(std::abs(c1 - c2) < 1e-10 * std::max(1.0, std::abs(c1)));
    CHECK(std::abs(c1 - addition_constant(F, G, alpha, mp, -x1)) < 1e-10 * std::max(1.0, std::abs(c1)));
    // direct check of F(x)G(y) - G(x)F(y) = C theta1(x+y+alpha) theta1(x-y)
    const cplx x(0.5, 0.1), y(1.3, -0.2);
    const cplx lhs = F(x) * G(y) - G(x) * F(y);
    CHECK(std::abs(lhs - c1 * theta(1, x + y + alpha, mp) * theta(1, x - y, mp)) < 1e-10 * std::max(1.0, std::abs(lhs)));
}
