#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hmmlyap/model.hpp"
#include "hmmlyap/simulate.hpp"

namespace hmmlyap {

// (theta_b)_i = pi(i) q(b|i); (psi_a)_i = p(a|i). Sum_b theta_b = pi and
// Sum_a psi_a = 1 componentwise.
struct FilterVectors {
    Eigen::MatrixXd theta;  // k x l, column b-1 is theta_b
    Eigen::MatrixXd psi;    // k x k, column a-1 is psi_a
};

FilterVectors filter_vectors(const HmmModel& model);

// (a, b, c): hidden state a with observation pair b, c for the Delta curves;
// observation triple (e, b, c) reuses the same struct with a = e.
struct Triple {
    int a = 1;
    int b = 1;
    int c = 1;
};

struct DecayCurve {
    Triple triple;
    std::vector<double> values;    // signed Delta[n], n = n_range.first..second
    std::vector<double> log_abs;   // log|Delta[n]|, -inf when censored
    std::vector<bool> censored;    // |Delta[n]| below floor (or exactly 0)
    std::pair<long long, long long> n_range{1, 0};
};

struct RateEstimate {
    Triple triple;
    double tau_hat = 0.0;
    std::pair<long long, long long> window{0, 0};  // [n_min, n_max] requested
    double r_squared = 0.0;
    std::string method;
};

namespace detail {

// Test surfaces of the curve engine. rescale(n) multiplies every propagated
// object at step n (Delta must be invariant); observe(n, u, w) sees the
// normalized forward vectors after step n (u from psi_a, w from the all-ones
// vector).
struct CurveHooks {
    std::function<double(long long)> rescale;
    std::function<void(long long, const Eigen::VectorXd&, const Eigen::VectorXd&)> observe;
};

std::vector<DecayCurve> delta_curves_impl(const HmmModel& model,
                                          const ObservationWindow& window,
                                          const std::vector<Triple>& triples,
                                          long long n_max, double floor, bool tilde,
                                          const CurveHooks* hooks);

} // namespace detail

// Delta_{a,b,c}[n]: difference of the conditional laws of the state at time 0
// given the observations at times -n+1..-1 and an exchanged observation (b vs
// c) at time -n. Propagated in log scale through the second exterior power,
// which carries the cancellation of the two conditional ratios exactly, so
// the curve stays meaningful far below double cancellation depth. The window
// must supply at least n_max - 1 symbols ending at time -1; its newest
// n_max - 1 symbols are consumed, newest first.
std::vector<DecayCurve> delta_curve(const HmmModel& model, const ObservationWindow& window,
                                    const std::vector<Triple>& triples, long long n_max,
                                    double floor = 1e-290);

// Same decay object for the observation at time 0: Delta-tilde_{e,b,c}[n] =
// sum_a q(e|a) Delta_{a,b,c}[n], evaluated through the same engine with the
// q-weighted initial vector (exact linearity, no summation error).
std::vector<DecayCurve> delta_tilde_curve(const HmmModel& model,
                                          const ObservationWindow& window,
                                          const std::vector<Triple>& triples, long long n_max,
                                          double floor = 1e-290);

// Oracle: full path enumeration of the defining conditional probabilities in
// extended precision. n <= 14 (cost k^n). The window must end at time -1 and
// supply at least n-1 symbols.
double delta_bruteforce(const HmmModel& model, const ObservationWindow& window, Triple t,
                        long long n);

// Oracle for the observation version: conditional law of Z_0 enumerated
// directly (independent of the weighted-sum route).
double delta_tilde_bruteforce(const HmmModel& model, const ObservationWindow& window,
                              Triple t, long long n);

// Slope of log|Delta[n]| over uncensored n in [n_min, n_max]. method
// "regression": least-squares slope with r^2; method "tail-max": max over
// uncensored n > n0 of (log|D[n]| - log|D[n0]|)/(n - n0), n0 the first
// uncensored point >= n_min. All points censored -> tau_hat = -inf (flagged
// by the infinity itself); 1..4 uncensored points -> TooFewPoints.
RateEstimate estimate_rate(const DecayCurve& curve, long long n_min, long long n_max,
                           const std::string& method = "regression");

// Splitting of psi_a along span{1} and the estimated slow space: u_a =
// <f, psi_a>/<f, 1> and xi_a = psi_a - u_a 1, so <f, xi_a> = 0.
// DegenerateDirection when <f, 1> vanishes.
std::pair<double, Eigen::VectorXd> decompose_psi(const HmmModel& model, int a,
                                                 const Eigen::VectorXd& f);

// Full ordered triple enumeration (lexicographic): a over states, b and c
// over observations, b = c included (those curves are identically zero).
std::vector<Triple> all_triples(const HmmModel& model);

// (e, b, c) with e over observations.
std::vector<Triple> all_observation_triples(const HmmModel& model);

// Largest tau_hat; ties broken by enumeration order (first maximum wins).
// Entries with tau_hat = -inf never win unless all are -inf, in which case
// the first entry is returned.
const RateEstimate& best_rate(const std::vector<RateEstimate>& rates);

} // namespace hmmlyap
