#pragma once

#include <cstdint>
#include <vector>

#include "hmmlyap/model.hpp"
#include "hmmlyap/simulate.hpp"

namespace hmmlyap {

// Two-state chain P = [[p0, 1-p0], [p1, 1-p1]] observed through a binary
// channel that flips the state with probability epsilon. Symbols are {0, 1}
// inside this module; the adapter to the 1-indexed HmmModel is explicit.
//
// Letter decomposition L_{z,eps} = M_z + eps A_z with rank-one M_z x =
// x_[z] e_z, e_z the z-th column of P, f_z the rotation of e_z with
// M_z^T f_z = 0. The projective coordinate h of the invariant direction
// g = e_{z1} + eps h f_{z1} solves a depth recursion whose one-step map is a
// Moebius transform in h with coefficients from (z1, z2).
struct PerturbModel {
    double p0 = 0.0;
    double p1 = 0.0;
    double epsilon = 0.0;
    double beta = 0.0;     // min{p0, p1, 1-p0, 1-p1}
    double D = 0.0;        // 16 beta^-5, the invariant-ball radius for h
    double eps0 = 0.0;     // rigorous validity threshold (bisected from the proof bounds)
    Eigen::Vector2d pi;    // stationary law of P
    Eigen::Matrix2d M[2];
    Eigen::Matrix2d A[2];
    Eigen::Vector2d e[2];
    Eigen::Vector2d f[2];
};

// epsilon in [0,1), epsilon != 1/2; p0 != p1 and beta > 0 required.
// epsilon = 0 is admitted (the unperturbed chain) because every zeroth-order
// identity is evaluated there.
PerturbModel build_perturb(double p0, double p1, double epsilon);

// Equivalent general model: q = [[1-eps, eps], [eps, 1-eps]].
HmmModel to_hmm(const PerturbModel& pm);

// 1-indexed observation symbols {1,2} -> {0,1}.
std::vector<int> to_binary(const std::vector<int>& symbols);

struct FixedPointResult {
    double h_value = 0.0;
    int iterations = 0;            // recursion depth m
    double error_bound = 0.0;      // D 2^-m rigorous; D contr^m empirical
    int window_used = 0;           // forward symbols consumed (m+1)
    double contraction_estimate = 0.0;  // max successive-difference ratio
};

// h at the start of the forward window (symbols at times 1..m+1 at least),
// truncated at depth m: the recursion runs from a terminal 0 at depth m+1
// back to position 1. Successive-depth differences estimate the contraction
// factor; rigorous mode additionally requires epsilon <= eps0
// (OutsideValidity) while empirical mode requires the observed estimate < 1
// (ContractionFailure).
FixedPointResult solve_h(const PerturbModel& pm, const ObservationWindow& forward, int m,
                         bool rigorous = false);

// The eigenvalue coordinate: rho(eps, z1 z2...) given h of the shifted
// sequence. Four-term bracket over ||e_{z1}||^2, exact in eps.
double rho_eval(const PerturbModel& pm, int z1, int z2, double h_next);

// Residual ||L g' - rho g|| of the invariant-direction relation, with h
// solved independently at the window start and at its shift (window must
// supply m+2 symbols).
double verify_eigenrelation(const PerturbModel& pm, const ObservationWindow& forward, int m);

struct BirkhoffEstimate {
    double lambda1 = 0.0;
    double std_error = 0.0;
    long long n_terms = 0;
};

// Top exponent as the Birkhoff average of log rho along a sampled stationary
// observation path, h truncated at depth m. NonPositiveRho if any sampled
// rho fails to be positive.
BirkhoffEstimate lambda1_birkhoff(const PerturbModel& pm, long long N, std::uint64_t seed,
                                  int m = 40, int batches = 50);

struct RateBound {
    double bound = 0.0;  // log eps + log|det P| - 2 [pi(0) H(p0) + pi(1) H(p1)]
    double ledet = 0.0;  // exact exponent sum: log eps + log(1-eps) + log|det P|
};

// Closed-form leading term of the gap bound plus the exact determinant
// identity value, both for cross-checks against sampled spectra.
RateBound binary_rate_bound(const PerturbModel& pm);

// Largest epsilon satisfying both proof inequalities (invariance of the
// h-ball of radius D and contraction factor <= 1/2), by bisection.
double eps0_bound(double beta, double D);

} // namespace hmmlyap
