#include <doctest.h>

#include <cmath>
#include <limits>

#include "hmmlyap/bounds.hpp"

using namespace hmmlyap;

namespace {

HmmModel reference_model() {
    Eigen::MatrixXd p(2, 2), q(2, 2);
    p << 0.9, 0.1, 0.2, 0.8;
    q << 0.9, 0.1, 0.1, 0.9;
    return build_model(p, q);
}

LyapunovEstimate fake_estimate(double l1, double l2) {
    LyapunovEstimate est;
    est.lambdas = Eigen::VectorXd(2);
    est.lambdas << l1, l2;
    est.std_errors = Eigen::VectorXd::Constant(2, 1e-4);
    est.underflow_flags = {false, false};
    est.sum_std_error = 1e-4;
    est.n_steps = 1000000;
    return est;
}

RateEstimate rate_of(Triple t, double tau) {
    RateEstimate r;
    r.triple = t;
    r.tau_hat = tau;
    r.window = {20, 400};
    r.r_squared = 0.999;
    r.method = "regression";
    return r;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

TEST_CASE("proposition bound closed form") {
    const HmmModel m = reference_model();
    // log(0.7) - 2 log(10) for k = 2, R = 10.
    CHECK(proposition_lower_bound(m) ==
          doctest::Approx(std::log(0.7) - 2.0 * std::log(10.0)).epsilon(1e-13));

    Eigen::MatrixXd ps(2, 2), q(2, 2);
    ps << 0.5, 0.5, 0.5, 0.5;
    q << 0.9, 0.1, 0.1, 0.9;
    try {
        proposition_lower_bound(build_model(ps, q));
        FAIL("expected DegenerateDeterminant");
    } catch (const Error& e) {
        CHECK(e.kind() == std::string("DegenerateDeterminant"));
    }
}

TEST_CASE("verify_all flags violations and attainment") {
    const HmmModel m = reference_model();
    const LyapunovEstimate est = fake_estimate(-0.5532, -2.2115);
    const double gap = -2.2115 - (-0.5532);

    std::vector<RateEstimate> rates;
    rates.push_back(rate_of({1, 1, 1}, -kInf));
    rates.push_back(rate_of({1, 1, 2}, gap + 0.01));   // attains within 0.05
    rates.push_back(rate_of({1, 2, 1}, gap - 0.30));   // slow, fine
    const BoundsReport rep = verify_all(m, est, rates, 0.05);
    CHECK(rep.lyap_gap == doctest::Approx(gap).epsilon(1e-12));
    CHECK(rep.theorem1_violations.empty());
    CHECK(rep.theorem2_attained);
    CHECK(rep.prop_lower_bound ==
          doctest::Approx(std::log(0.7) - 2.0 * std::log(10.0)).epsilon(1e-12));
    CHECK(rep.det_identity_residual ==
          doctest::Approx(std::abs((-0.5532 - 2.2115) - std::log(0.063))).epsilon(1e-9));

    std::vector<RateEstimate> bad = rates;
    bad.push_back(rate_of({2, 1, 2}, gap + 0.2));      // decays too slowly
    const BoundsReport rep2 = verify_all(m, est, bad, 0.05);
    REQUIRE(rep2.theorem1_violations.size() == 1);
    CHECK(rep2.theorem1_violations[0].a == 2);
    CHECK(rep2.theorem1_violations[0].b == 1);
    CHECK(rep2.theorem1_violations[0].c == 2);

    std::vector<RateEstimate> slow;
    slow.push_back(rate_of({1, 1, 2}, gap - 0.2));     // bounded but not attained
    const BoundsReport rep3 = verify_all(m, est, slow, 0.05);
    CHECK(rep3.theorem1_violations.empty());
    CHECK_FALSE(rep3.theorem2_attained);
}

TEST_CASE("verify_all under hypothesis failure") {
    // Rank-deficient q: the attainment statement does not apply, and the
    // proposition bound is still finite (det p != 0).
    Eigen::MatrixXd p(2, 2), q(2, 2);
    p << 0.9, 0.1, 0.2, 0.8;
    q << 0.5, 0.5, 0.5, 0.5;
    const HmmModel flat = build_model(p, q);
    const LyapunovEstimate est = fake_estimate(std::log(0.5), std::log(0.35));
    std::vector<RateEstimate> rates;
    rates.push_back(rate_of({1, 1, 2}, std::log(0.35) - std::log(0.5)));
    const BoundsReport rep = verify_all(flat, est, rates, 0.05);
    CHECK_FALSE(rep.theorem2_attained);

    // Singular p: the closed-form bound is vacuous, reported as -inf
    // rather than an error.
    Eigen::MatrixXd ps(2, 2), q2(2, 2);
    ps << 0.5, 0.5, 0.5, 0.5;
    q2 << 0.9, 0.1, 0.1, 0.9;
    const HmmModel sing = build_model(ps, q2);
    const BoundsReport rep2 = verify_all(sing, est, rates, 0.05);
    CHECK(rep2.prop_lower_bound == -kInf);
}

TEST_CASE("verify_all with a single exponent cluster") {
    const HmmModel m = reference_model();
    const LyapunovEstimate est = fake_estimate(-1.0, -1.01);
    std::vector<RateEstimate> rates;
    rates.push_back(rate_of({1, 1, 2}, -0.02));
    const BoundsReport rep = verify_all(m, est, rates, 0.05);
    CHECK(rep.lyap_gap == 0.0);
}
