#pragma once

#include "thetaforge/core_arith.hpp"

namespace thetaforge {

// Index of a Jacobi theta function, 1..4.
class ThetaKind {
public:
    constexpr explicit ThetaKind(int index) : index_(index) {
        if (index < 1 || index > 4) throw DomainError("theta kind must be 1, 2, 3 or 4");
    }
    constexpr int index() const noexcept { return index_; }
    friend constexpr bool operator==(ThetaKind, ThetaKind) = default;

private:
    int index_;
};

inline constexpr int kMaxThetaDerivative = 4;

// d^k/dz^k theta_kind(z | tau) from the Fourier series.
//
// The series is summed in its bilateral form
//   C * sum_n s^n q^((n+a)^2/2) e^{2i(n+a)z}
// starting from the dominant index and walking outward, which is the same
// bookkeeping as shifting z by multiples of pi*tau and multiplying back the
// quasi-period factors. Sums accumulate in long double.
cplx theta(ThetaKind kind, cplx z, const ModularPoint& mp, int deriv_order = 0);

// Same series with long double input and output, for callers that need to
// keep cancellation between several theta values below double rounding.
std::complex<long double> theta_ld(ThetaKind kind, std::complex<long double> z, std::complex<long double> tau,
                                   int deriv_order = 0);

inline cplx theta(int kind, cplx z, const ModularPoint& mp, int deriv_order = 0) {
    return theta(ThetaKind(kind), z, mp, deriv_order);
}

// Triple-product form of theta_kind(z | tau).
cplx theta_product(ThetaKind kind, cplx z, const ModularPoint& mp);

// theta_1'(0 | tau) = 2 q^(1/8) prod (1 - q^n)^3.
cplx theta1_prime0(const ModularPoint& mp);

// Dedekind eta(scale * tau).
cplx eta(const ModularPoint& mp, Rational scale = Rational(1));

}  // namespace thetaforge
