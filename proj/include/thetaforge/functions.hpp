#pragma once

#include <string>

#include "thetaforge/theta.hpp"

namespace thetaforge {

// K_y(z | tau) = theta1'(0) theta1(z + y) / (theta1(z) theta1(y)).
cplx kronecker_K(cplx y, cplx z, const ModularPoint& mp);

// sum_{k in Z} e^{2kiy} / (1 - q^k e^{2iz}); converges for |q| < |e^{2iy}| < 1.
// Equals (i/2) K_y(z | tau) there. Throws DomainError outside that strip.
cplx kronecker_bilateral(cplx y, cplx z, const ModularPoint& mp);

struct Psi11Sides {
    cplx lhs;  // bilateral series
    cplx rhs;  // closed product
};

// Both sides of the 1psi1 summation for |q| < 1, |b/a| < |z| < 1.
Psi11Sides ramanujan_1psi1(cplx a, cplx b, cplx z, cplx q);

// Weierstrass p for the lattice pi Z + pi tau Z, from the second logarithmic
// derivative of theta1 with the constant fixed so that p(z) = 1/z^2 + O(z^2).
cplx weierstrass_p(cplx z, const ModularPoint& mp);

// theta_k'(z) / theta_k(z) for k = 1 (cot z + 4 sum q^n/(1-q^n) sin 2nz)
// or k = 4 (4 sum q^(n/2)/(1-q^n) sin 2nz).
cplx logderiv_theta(int kind, cplx z, const ModularPoint& mp);

enum class SignTwist {
    none,
    alternating,  // (-1)^n
    chi4,         // (-1)^((n-1)/2) on odd n, 0 on even n
};

enum class LambertTrig {
    none,
    sin2n,  // sin(2 n z)
    cos2n,  // cos(2 n z)
    sin_n,  // sin(n z)
};

// Summand chi(n) * twist(n) * n^weight * q^(a n) / (1 - den_sign q^(b n)) * trig(n, z).
struct LambertSpec {
    long modulus = 1;  // odd; 1 means the trivial character
    bool use_jacobi_symbol = false;
    SignTwist sign_twist = SignTwist::none;
    bool odd_only = false;
    int weight = 0;
    int num_exponent = 1;
    int den_exponent = 1;
    int den_sign = 1;
    LambertTrig trig = LambertTrig::none;

    // Throws DomainError for an invalid combination.
    void validate() const;
    // chi(n) * twist(n) * n^weight, without the q part.
    long coefficient(long n) const;

    friend bool operator==(const LambertSpec&, const LambertSpec&) = default;
};

std::string to_string(SignTwist t);
std::string to_string(LambertTrig t);

cplx lambert_sum(const LambertSpec& spec, cplx z, const ModularPoint& mp);

// a(tau) = 1 + 6 sum (n/3) q^n / (1 - q^n).
cplx eisenstein_a(const ModularPoint& mp);

}  // namespace thetaforge
