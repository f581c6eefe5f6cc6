#pragma once

#include <Eigen/Dense>

#include "hmmlyap/errors.hpp"

namespace hmmlyap {

// Hidden chain on k states, observations on l symbols. Symbols are 1-indexed
// in every public argument and result; matrices are stored 0-based, so
// p(i-1, j-1) is the transition probability i -> j and q(i-1, b-1) the
// emission probability of symbol b in state i.
struct HmmModel {
    int k = 0;
    int l = 0;
    Eigen::MatrixXd p;   // k x k row-stochastic
    Eigen::MatrixXd q;   // k x l row-stochastic
    Eigen::VectorXd pi;  // stationary row of p, normalized to sum 1
};

struct HypothesisReport {
    bool h1_holds = false;   // all entries of p and q strictly positive
    bool h2_holds = false;   // p invertible and q of full column-relevant rank
    double min_p = 0.0;
    double min_q = 0.0;
    double det_p = 0.0;
    double sigma_min_q = 0.0;  // smallest singular value of q
    double R = 0.0;            // 1 / min_q, +inf when some emission is 0
    double phi = 0.0;          // uniform cross-ratio bound of the letter maps
    double alpha = 0.0;        // (1 - sqrt(phi)) / (1 + sqrt(phi)), Birkhoff contraction
};

// Validates shapes and stochasticity (row sums within 1e-9 of 1, entries
// >= 0), requires l >= k, and computes the stationary distribution.
// Throws Error kinds DimensionMismatch, NonStochastic, NotIrreducible.
HmmModel build_model(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q);

// Unique stationary distribution of a row-stochastic matrix. Linear solve
// with a replaced normalization row; falls back to power iteration when the
// solve is singular beyond the uniqueness the chain guarantees.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& p);

HypothesisReport check_hypotheses(const HmmModel& model, double rank_tol = 1e-10);

// Law of a single observation under stationarity: pi^T q, length l.
Eigen::VectorXd observation_marginal(const HmmModel& model);

} // namespace hmmlyap
