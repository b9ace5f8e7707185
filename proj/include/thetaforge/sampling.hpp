#pragma once

#include <cstdint>
#include <random>

#include "thetaforge/core_arith.hpp"

namespace thetaforge {

// Seeded generator with a platform-independent mapping to doubles, so that
// the same seed draws the same points under any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) from the top 53 bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    std::uint64_t bits() { return engine_(); }

    // s*pi + t*pi*tau with (s, t) uniform in [s0, s1) x [t0, t1).
    cplx lattice_point(cplx tau, double s0, double s1, double t0, double t1) {
        const double s = uniform(s0, s1);
        const double t = uniform(t0, t1);
        return kPi * s + kPi * t * tau;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace thetaforge
