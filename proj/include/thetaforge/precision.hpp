#pragma once

namespace thetaforge {

// Relative size below which series and product tails are dropped.
// THETA_FORGE_PRECISION (e.g. "1e-20") overrides the default of 1e-17.
double tail_tolerance();

// Equivalence tolerance modulo the period lattice, in reduced coordinates.
inline constexpr double kEquivalenceTolerance = 1e-9;

// Hard cap on terms summed by any series evaluator.
inline constexpr long kMaxSeriesTerms = 200000;

}  // namespace thetaforge
