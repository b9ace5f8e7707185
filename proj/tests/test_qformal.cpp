#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "thetaforge/qformal.hpp"

using namespace thetaforge;

namespace {

const std::vector<std::string> kNoVars;
const std::vector<std::string> kX{"x"};

// Random series in x with small Gaussian coefficients, grains 0..n.
FormalSeries random_series(std::mt19937_64& g, long n, long trunc) {
    std::uniform_int_distribution<int> c(-3, 3), e(-2, 2), keep(0, 2);
    FormalSeries s(kX, trunc);
    for (long k = 0; k <= n; ++k) {
        if (keep(g) == 0) continue;
        LaurentPoly p(1);
        p.add_term({e(g)}, GaussInt(c(g), c(g)));
        p.add_term({e(g)}, GaussInt(c(g), 0));
        s.add_term(k, p);
    }
    return s;
}

bool same(const FormalSeries& a, const FormalSeries& b) {
    return a.truncation_order() == b.truncation_order() && a.coeffs() == b.coeffs();
}

long integer_coefficient(const FormalSeries& s, long grain) {
    const LaurentPoly p = fs_coefficient(s, grain);
    if (p.is_zero()) return 0;
    const auto c = p.as_constant();
    REQUIRE(c.has_value());
    REQUIRE(c->im == 0);
    return c->re.get_si();
}

// Value of a one-variable series at x, with q^(1/24) = q24.
cplx evaluate(const FormalSeries& s, cplx q24, std::vector<cplx> x) {
    cplx sum = 0.0;
    for (const auto& [grain, p] : s.coeffs()) sum += std::pow(q24, static_cast<double>(grain)) * p.evaluate(x);
    return sum;
}

}  // namespace

TEST_CASE("Gaussian integers") {
    const GaussInt a(2, 3), b(-1, 4);
    CHECK(a * b == GaussInt(-14, 5));
    CHECK(a + b == GaussInt(1, 7));
    CHECK(a.conj() == GaussInt(2, -3));
    CHECK(GaussInt(0, 0).is_zero());
}

TEST_CASE("ring laws on random series") {
    std::mt19937_64 g(17);
    for (int trial = 0; trial < 30; ++trial) {
        const FormalSeries a = random_series(g, 12, 30), b = random_series(g, 12, 30), c = random_series(g, 12, 25);
        CHECK(same(fs_add(a, b), fs_add(b, a)));
        CHECK(same(fs_mul(a, b), fs_mul(b, a)));
        CHECK(same(fs_add(fs_add(a, b), c), fs_add(a, fs_add(b, c))));
        CHECK(same(fs_mul(fs_mul(a, b), c), fs_mul(a, fs_mul(b, c))));
        CHECK(same(fs_mul(a, fs_add(b, c)), fs_add(fs_mul(a, b), fs_mul(a, c))));
        CHECK(same(fs_sub(a, a), FormalSeries(kX, 30)));
        CHECK(same(fs_mul(a, b), fs_mul_serial(a, b)));
        CHECK(same(fs_pow(a, 3), fs_mul(a, fs_mul(a, a))));
    }
}

TEST_CASE("truncation is the minimum of the inputs") {
    FormalSeries a = FormalSeries::one(kNoVars, 50);
    FormalSeries b = FormalSeries::one(kNoVars, 20);
    CHECK(fs_add(a, b).truncation_order() == 20);
    CHECK(fs_mul(a.shifted(3), b).truncation_order() == 23);
    CHECK_THROWS_AS(fs_coefficient(b, 20), FormalError);
    CHECK_THROWS_AS(fs_equal_through(a, b, 21), FormalError);
    CHECK(fs_equal_through(a, b, 20).equal);
}

TEST_CASE("first mismatch is reported") {
    FormalSeries a = fs_eta(1, 5);
    FormalSeries b = fs_add(a, FormalSeries::term(kNoVars, 49, LaurentPoly::constant(0, GaussInt(2)), 120));
    const FormalComparison cmp = fs_equal_through(a, b, 100);
    CHECK_FALSE(cmp.equal);
    REQUIRE(cmp.first_mismatch.has_value());
    CHECK(cmp.first_mismatch->grain == 49);
}

TEST_CASE("eta is the pentagonal-number series through q^60") {
    const FormalSeries e = fs_eta(1, 61);
    const oracle::Series direct = oracle::euler_product(1, 61);
    // eta = q^(1/24) * prod, so grain 24 n + 1 carries the q^n coefficient
    for (long n = 0; n <= 60; ++n) CHECK(integer_coefficient(e, 24 * n + 1) == direct[static_cast<std::size_t>(n)]);
    for (long n = 0; n <= 60; ++n) {
        long expected = 0;
        for (long k = -10; k <= 10; ++k)
            if (k * (3 * k - 1) / 2 == n) expected = (k % 2 == 0) ? 1 : -1;
        CHECK(direct[static_cast<std::size_t>(n)] == expected);
    }
}

TEST_CASE("inverse of eta quotients") {
    const long order = 30;
    const long trunc = 24 * order;
    const std::vector<std::pair<long, unsigned>> factors{{1, 5}, {5, 1}, {2, 3}, {3, 2}, {10, 2}};
    for (const auto& [scale, power] : factors) {
        const FormalSeries e = fs_pow(fs_eta(scale, order), power);
        const FormalSeries prod = fs_mul(e, fs_invert(e));
        CHECK(fs_equal_through(prod, FormalSeries::one(kNoVars, trunc), prod.truncation_order()).equal);
    }
    FormalSeries two = FormalSeries::constant(kNoVars, GaussInt(2), 10);
    CHECK_THROWS_AS(fs_invert(two), FormalError);
}

TEST_CASE("eta^5(tau)/eta(5 tau) against integer products") {
    const long order = 40;
    const FormalSeries q = fs_mul(fs_pow(fs_eta(1, order), 5), fs_invert(fs_eta(5, order)));
    const std::size_t len = order;
    oracle::Series e1 = oracle::euler_product(1, len);
    const oracle::Series e1_5 = oracle::series_mul(oracle::series_mul(oracle::series_mul(e1, e1), oracle::series_mul(e1, e1)), e1);
    const oracle::Series expect = oracle::series_mul(e1_5, oracle::series_inverse(oracle::euler_product(5, len)));
    // q^(5/24 - 5/24) = q^0
    for (long n = 0; n < order; ++n) CHECK(integer_coefficient(q, 24 * n) == expect[static_cast<std::size_t>(n)]);
}

TEST_CASE("formal Lambert series match the numeric evaluator") {
    const cplx tau(0.1, 1.2);
    const ModularPoint mp = nome_from_tau(tau);
    for (const auto trig : {LambertTrig::none, LambertTrig::sin2n, LambertTrig::cos2n}) {
        LambertSpec s;
        s.modulus = 5;
        s.use_jacobi_symbol = true;
        s.weight = 1;
        s.trig = trig;
        const double z = 0.37;
        const FormalSeries f = trig == LambertTrig::none ? fs_lambert(s, 40) : fs_lambert(s, 40, std::string("z"));
        std::vector<cplx> x;
        if (trig != LambertTrig::none) x.push_back(std::exp(kI * z));
        const cplx formal = evaluate(f, mp.q24(), x);
        const cplx numeric = lambert_sum(s, z, mp);
        const double factor = trig == LambertTrig::none ? 1.0 : 2.0;
        CHECK(std::abs(formal - factor * numeric) < 1e-12);
    }
}

TEST_CASE("formal theta matches the numeric series on the unit circle") {
    const cplx tau(-0.2, 0.9);
    const ModularPoint mp = nome_from_tau(tau);
    for (int k = 1; k <= 4; ++k)
        for (long zs : {1L, 2L, 3L})
            for (long ts : {1L, 3L}) {
                const FormalSeries f = fs_theta_x(ThetaKind(k), zs, ts, 30);
                const double z = 0.71;
                const cplx v = evaluate(f, mp.q24(), {std::exp(kI * z)});
                CHECK(oracle::rel(v, theta(k, static_cast<double>(zs) * z, mp.scaled(Rational(ts)))) < 1e-12);
            }
}

TEST_CASE("formal theta with shifts") {
    const cplx tau(0.05, 1.0);
    const ModularPoint mp = nome_from_tau(tau);
    const double z = 0.4;
    // theta1(2z + pi/2 + pi tau/2 | 3 tau)
    FormalThetaArg arg{{2}, Rational(1, 2), Rational(1, 2)};
    const FormalSeries f = fs_theta(ThetaKind(1), arg, 3, 0, 20, kX);
    const cplx w = 2.0 * z + kPi / 2.0 + kPi * tau / 2.0;
    CHECK(oracle::rel(evaluate(f, mp.q24(), {std::exp(kI * z)}), theta(1, w, mp.scaled(Rational(3)))) < 1e-12);
    // a pi/3 shift leaves the Gaussian integers
    FormalThetaArg bad{{1}, Rational(1, 3), Rational(0)};
    CHECK_THROWS_AS(fs_theta(ThetaKind(1), bad, 1, 0, 10, kX), FormalError);
}
