#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "thetaforge/theta.hpp"

using namespace thetaforge;

namespace {

// tau with Im tau in [0.5, 1.5], z in the parallelogram scaled by 0.9
struct Point {
    cplx tau, z;
};

std::vector<Point> points(std::uint64_t seed, int n) {
    std::mt19937_64 g(seed);
    std::vector<Point> out;
    for (int i = 0; i < n; ++i) {
        const cplx tau = oracle::random_tau(g);
        out.push_back({tau, oracle::random_point(g, tau)});
    }
    return out;
}

}  // namespace

TEST_CASE("series agrees with the sine/cosine definition") {
    for (const auto& p : points(1, 100)) {
        const ModularPoint mp = nome_from_tau(p.tau);
        for (int k = 1; k <= 4; ++k) CHECK(oracle::rel(theta(k, p.z, mp), oracle::theta(k, p.z, p.tau)) < 1e-12);
    }
}

TEST_CASE("series agrees with the triple product") {
    for (const auto& p : points(2, 100)) {
        const ModularPoint mp = nome_from_tau(p.tau);
        for (int k = 1; k <= 4; ++k) CHECK(oracle::rel(theta(k, p.z, mp), theta_product(ThetaKind(k), p.z, mp)) < 1e-12);
    }
}

TEST_CASE("quasi-periods pi and pi tau") {
    const int pi_sign[5] = {0, -1, -1, 1, 1};
    const int tau_sign[5] = {0, -1, 1, 1, -1};
    for (const auto& p : points(3, 100)) {
        const ModularPoint mp = nome_from_tau(p.tau);
        const cplx factor = mp.q_grains(12) * std::exp(2.0 * kI * p.z);
        for (int k = 1; k <= 4; ++k) {
            const cplx t = theta(k, p.z, mp);
            CHECK(oracle::rel(t, static_cast<double>(pi_sign[k]) * theta(k, p.z + kPi, mp)) < 1e-10);
            CHECK(oracle::rel(t, static_cast<double>(tau_sign[k]) * factor * theta(k, p.z + kPi * p.tau, mp)) < 1e-10);
        }
    }
}

TEST_CASE("half-period shifts") {
    for (const auto& p : points(4, 100)) {
        const ModularPoint mp = nome_from_tau(p.tau);
        const cplx z = p.z;
        const cplx f = mp.q_grains(-3) * std::exp(-kI * z);  // q^(-1/8) e^{-iz}
        auto th = [&](int k, cplx w) { return theta(k, w, mp); };
        CHECK(oracle::rel(th(1, z + kPi / 2.0), th(2, z)) < 1e-10);
        CHECK(oracle::rel(th(2, z + kPi / 2.0), -th(1, z)) < 1e-10);
        CHECK(oracle::rel(th(3, z + kPi / 2.0), th(4, z)) < 1e-10);
        CHECK(oracle::rel(th(4, z + kPi / 2.0), th(3, z)) < 1e-10);
        CHECK(oracle::rel(th(1, z + kPi * p.tau / 2.0), kI * f * th(4, z)) < 1e-10);
        CHECK(oracle::rel(th(2, z + kPi * p.tau / 2.0), f * th(3, z)) < 1e-10);
        CHECK(oracle::rel(th(3, z + kPi * p.tau / 2.0), f * th(2, z)) < 1e-10);
        CHECK(oracle::rel(th(4, z + kPi * p.tau / 2.0), kI * f * th(1, z)) < 1e-10);
        CHECK(oracle::rel(th(3, z + (kPi + kPi * p.tau) / 2.0), kI * f * th(1, z)) < 1e-10);
    }
}

TEST_CASE("parity") {
    for (const auto& p : points(5, 100)) {
        const ModularPoint mp = nome_from_tau(p.tau);
        const double s = std::max(1.0, std::abs(theta(1, p.z, mp)));
        CHECK(std::abs(theta(1, p.z, mp) + theta(1, -p.z, mp)) < 1e-12 * s);
        for (int k = 2; k <= 4; ++k) {
            const double sk = std::max(1.0, std::abs(theta(k, p.z, mp)));
            CHECK(std::abs(theta(k, p.z, mp) - theta(k, -p.z, mp)) < 1e-12 * sk);
        }
    }
}

TEST_CASE("theta1(z)/z approaches theta1'(0) quadratically") {
    const ModularPoint mp = nome_from_tau({0.1, 0.8});
    const cplx d0 = theta1_prime0(mp);
    double prev = 0.0;
    for (double h : {0.2, 0.1, 0.05, 0.025}) {
        const cplx z = h * cplx(0.6, 0.8);
        const double err = std::abs(theta(1, z, mp) / z - d0);
        if (prev > 0.0) {
            CHECK(prev / err > 3.8);
            CHECK(prev / err < 4.2);
        }
        prev = err;
    }
}

TEST_CASE("derivatives") {
    for (const auto& p : points(6, 30)) {
        const ModularPoint mp = nome_from_tau(p.tau);
        CHECK(oracle::rel(theta(1, 0.0, mp, 1), oracle::theta1_prime0(p.tau)) < 1e-12);
        CHECK(oracle::rel(theta1_prime0(mp), oracle::theta1_prime0(p.tau)) < 1e-12);
        for (int k = 1; k <= 4; ++k)
            for (int d = 1; d <= 3; ++d) {
                const double h = 1e-3;
                const cplx fd = (theta(k, p.z + h, mp, d - 1) - theta(k, p.z - h, mp, d - 1)) / (2.0 * h);
                const cplx fd2 = (theta(k, p.z + h / 2, mp, d - 1) - theta(k, p.z - h / 2, mp, d - 1)) / h;
                const cplx rich = (4.0 * fd2 - fd) / 3.0;
                const cplx exact = theta(k, p.z, mp, d);
                CHECK(std::abs(rich - exact) < 1e-8 * std::max(1.0, std::abs(exact)));
            }
    }
    const ModularPoint mp = nome_from_tau({0.0, 1.0});
    CHECK_THROWS_AS(theta(1, 0.0, mp, 5), DomainError);
    CHECK_THROWS_AS(theta(1, 0.0, mp, -1), DomainError);
    CHECK_THROWS_AS(ThetaKind(5), DomainError);
}

TEST_CASE("theta1'(0) is 2 eta^3") {
    for (const auto& p : points(7, 20)) {
        const ModularPoint mp = nome_from_tau(p.tau);
        const cplx e = oracle::eta(p.tau);
        CHECK(oracle::rel(theta1_prime0(mp), 2.0 * e * e * e) < 1e-12);
    }
}

TEST_CASE("eta against the direct product") {
    for (const auto& p : points(8, 20)) {
        const ModularPoint mp = nome_from_tau(p.tau);
        CHECK(oracle::rel(eta(mp), oracle::eta(p.tau)) < 1e-13);
        CHECK(oracle::rel(eta(mp, Rational(5)), oracle::eta(5.0 * p.tau)) < 1e-13);
        CHECK(oracle::rel(eta(mp, Rational(1, 2)), oracle::eta(p.tau / 2.0)) < 1e-12);
    }
}

TEST_CASE("large imaginary parts of z") {
    const cplx tau(0.3, 0.7);
    const ModularPoint mp = nome_from_tau(tau);
    const cplx z(0.4, 0.2);
    // theta3(z + n pi tau) = q^(-n^2/2) e^{-2inz} theta3(z)
    for (int n : {-6, -3, 3, 6}) {
        const double nn = n;
        const cplx factor = oracle::qpow(tau, -nn * nn / 2.0) * std::exp(-2.0 * kI * nn * z);
        CHECK(oracle::rel(theta(3, z + nn * kPi * tau, mp), factor * theta(3, z, mp)) < 1e-11);
    }
}

TEST_CASE("long double entry point agrees") {
    for (const auto& p : points(9, 20)) {
        const ModularPoint mp = nome_from_tau(p.tau);
        for (int k = 1; k <= 4; ++k) {
            const auto v = theta_ld(ThetaKind(k), {p.z.real(), p.z.imag()}, {p.tau.real(), p.tau.imag()});
            CHECK(oracle::rel(cplx(double(v.real()), double(v.imag())), theta(k, p.z, mp)) < 1e-15);
        }
    }
}
