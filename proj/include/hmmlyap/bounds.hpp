#pragma once

#include <vector>

#include "hmmlyap/cocycle.hpp"
#include "hmmlyap/memloss.hpp"
#include "hmmlyap/model.hpp"

namespace hmmlyap {

struct BoundsReport {
    double lyap_gap = 0.0;              // lambda2_hat - lambda1_hat (distinct exponents)
    double prop_lower_bound = 0.0;      // (1/(k-1)) log|det p| - (k/(k-1)) log R
    double det_identity_residual = 0.0; // |sum of exponents - expected_log_det|
    std::vector<Triple> theorem1_violations;  // triples with tau_hat > gap + tol
    bool theorem2_attained = false;     // best tau_hat within tol of the gap
};

// Closed-form lower bound on the gap. Requires k >= 2 and det p != 0
// (DegenerateDeterminant otherwise).
double proposition_lower_bound(const HmmModel& model);

// Pure reducer combining the spectrum and the rate estimates for one window.
// The gap uses the second distinct exponent (gap clustering); when every
// exponent lies in a single cluster the gap is 0 and nothing is violated or
// attained. theorem2_attained is false when H2 fails (rank-deficient q or
// singular p): the attainment statement does not apply there.
BoundsReport verify_all(const HmmModel& model, const LyapunovEstimate& lyap,
                        const std::vector<RateEstimate>& rates, double tol);

} // namespace hmmlyap
