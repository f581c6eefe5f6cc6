#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hmmlyap/model.hpp"
#include "hmmlyap/simulate.hpp"

namespace hmmlyap {

// Observation matrix of symbol z0: entry (i,j) = q(z0|j) p(j|i), i.e.
// p * diag(q(.|z0) column). det = (prod_i q(z0|i)) det p.
Eigen::MatrixXd observation_matrix(const HmmModel& model, int z0);

// Benettin accumulator: orthonormal frame plus accumulated log scale factors.
struct CocycleState {
    Eigen::MatrixXd frame;      // k x r, orthonormal columns
    Eigen::VectorXd log_norms;  // accumulated log of the r diagonal factors
    long long steps = 0;
};

struct LyapunovEstimate {
    Eigen::VectorXd lambdas;           // descending
    long long n_steps = 0;
    Eigen::VectorXd std_errors;        // batch-means SE per exponent
    std::vector<bool> underflow_flags; // exponent collapsed to -inf
    double sum_std_error = 0.0;        // batch-means SE of the exponent sum
};

struct LyapunovOptions {
    int r = 0;               // 0 -> min(k, 2)
    long long warmup = 200;  // steps discarded before accumulation starts
    int batches = 50;
    // Admit models with zero entries in p or q; collapsed exponents are then
    // reported as -inf with a flag instead of rejecting the model.
    bool permissive = false;
    // Optional initial frame (k x r); orthonormalized internally. Empty means
    // the leading identity columns.
    Eigen::MatrixXd initial_frame;
    // Optional running record of (n, lambda1_hat, lambda2_hat) every
    // running_stride accumulated steps.
    std::vector<std::array<double, 3>>* running = nullptr;
    long long running_stride = 1000;
};

// One orthonormalization step: frame <- orthonormalize(L * frame), appending
// log diagonal factors to log_norms. Modified Gram-Schmidt; a collapsed
// column (scale <= collapse_tol * leading scale) is replaced by a
// deterministic orthonormal completion and its factor reported as 0.
// Returns the r diagonal scale factors of this step.
Eigen::VectorXd cocycle_step(CocycleState& state, const Eigen::MatrixXd& L,
                             double collapse_tol = 1e-13);

// Lyapunov spectrum over a symbol stream given in application order. For
// past-ordered data (the shift used throughout is the inverse shift) the
// n-th applied matrix is the one of the symbol at time -n, so a sampled
// path is consumed through past_order().
LyapunovEstimate lyapunov_spectrum(const HmmModel& model, const std::vector<int>& stream,
                                   const LyapunovOptions& opt = {});

// Stream adapter: symbols of a sampled path ordered newest to oldest, so that
// feeding them to lyapunov_spectrum applies the matrix of z_{-n} at step n.
std::vector<int> past_order(const SamplePath& path);

// E[log |det L_Z|] under the stationary observation law, in closed form:
// log|det p| + sum_m P(Z=m) sum_i log q(m|i). Returns -inf when det p = 0
// or some contributing emission probability is 0.
double expected_log_det(const HmmModel& model);

// Distinct exponents by gap clustering with threshold max(tol0, se_mult*SE):
// (value, multiplicity) pairs, descending. Collapsed (-inf) exponents form
// their own final cluster.
std::vector<std::pair<double, int>> cluster_exponents(const LyapunovEstimate& est,
                                                      double tol0 = 0.05,
                                                      double se_mult = 5.0);

// Unit vector spanning the orthogonal complement of the codimension-1 slow
// space estimated over the window: leading right-singular direction of the
// renormalized product, accumulated through QR factors only. Sign fixed by
// making the largest-magnitude component positive.
Eigen::VectorXd estimate_codim1_direction(const HmmModel& model,
                                          const ObservationWindow& window);

struct ProjectiveRatios {
    std::vector<double> gamma;  // max_i (M w1)_i / (M w2)_i, n = 1.. factors
    std::vector<double> delta;  // min_i of the same ratios
};

// Componentwise ratio envelope of two positive vectors propagated through the
// window (consumed newest to oldest, shared per-step normalization). gamma is
// non-increasing, delta non-decreasing, gamma/delta >= 1.
ProjectiveRatios projective_ratio_curve(const HmmModel& model, const Eigen::VectorXd& w1,
                                        const Eigen::VectorXd& w2,
                                        const ObservationWindow& window);

} // namespace hmmlyap
