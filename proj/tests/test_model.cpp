#include <doctest.h>

#include <cmath>
#include <limits>

#include "hmmlyap/model.hpp"

using namespace hmmlyap;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, c, d;
    return m;
}

HmmModel reference_model() {
    return build_model(mat2(0.9, 0.1, 0.2, 0.8), mat2(0.9, 0.1, 0.1, 0.9));
}

} // namespace

TEST_CASE("build_model validates shapes") {
    Eigen::MatrixXd p23(2, 3);
    p23.setConstant(1.0 / 3.0);
    CHECK_THROWS_WITH_AS(build_model(p23, mat2(0.5, 0.5, 0.5, 0.5)),
                         doctest::Contains("square"), Error);

    Eigen::MatrixXd q32(3, 2);
    q32.setConstant(0.5);
    CHECK_THROWS_AS(build_model(mat2(0.9, 0.1, 0.2, 0.8), q32), Error);

    // l < k is rejected: fewer symbols than states leaves the rank
    // hypothesis unsatisfiable.
    Eigen::MatrixXd q31(3, 1);
    q31.setOnes();
    Eigen::MatrixXd p3(3, 3);
    p3.setConstant(1.0 / 3.0);
    try {
        build_model(p3, q31);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == std::string("DimensionMismatch"));
    }
}

TEST_CASE("build_model validates stochasticity") {
    try {
        build_model(mat2(0.9, 0.2, 0.2, 0.8), mat2(0.9, 0.1, 0.1, 0.9));
        FAIL("expected NonStochastic");
    } catch (const Error& e) {
        CHECK(e.kind() == std::string("NonStochastic"));
    }
    try {
        build_model(mat2(1.1, -0.1, 0.2, 0.8), mat2(0.9, 0.1, 0.1, 0.9));
        FAIL("expected NonStochastic");
    } catch (const Error& e) {
        CHECK(e.kind() == std::string("NonStochastic"));
    }
}

TEST_CASE("build_model rejects reducible chains") {
    try {
        build_model(mat2(1.0, 0.0, 0.0, 1.0), mat2(0.9, 0.1, 0.1, 0.9));
        FAIL("expected NotIrreducible");
    } catch (const Error& e) {
        CHECK(e.kind() == std::string("NotIrreducible"));
    }
}

TEST_CASE("stationary distribution of the reference model") {
    const HmmModel m = reference_model();
    CHECK(m.pi(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(m.pi(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    // Periodic but irreducible chains still have a unique stationary row.
    const Eigen::VectorXd swap_pi = stationary_distribution(mat2(0.0, 1.0, 1.0, 0.0));
    CHECK(swap_pi(0) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("hypothesis constants of the reference model") {
    const HmmModel m = reference_model();
    const HypothesisReport rep = check_hypotheses(m);
    CHECK(rep.h1_holds);
    CHECK(rep.h2_holds);
    CHECK(rep.min_p == doctest::Approx(0.1));
    CHECK(rep.min_q == doctest::Approx(0.1));
    CHECK(rep.R == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(rep.det_p == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(rep.phi == doctest::Approx(1.0 / 36.0).epsilon(1e-12));
    CHECK(rep.alpha == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("phi is invariant under state relabeling") {
    const HmmModel m = reference_model();
    // Swap the two hidden states consistently in p, q.
    Eigen::MatrixXd p2 = mat2(0.8, 0.2, 0.1, 0.9);
    Eigen::MatrixXd q2 = mat2(0.1, 0.9, 0.9, 0.1);
    const HmmModel ms = build_model(p2, q2);
    const HypothesisReport a = check_hypotheses(m);
    const HypothesisReport b = check_hypotheses(ms);
    CHECK(a.phi == doctest::Approx(b.phi).epsilon(1e-12));
    CHECK(a.alpha == doctest::Approx(b.alpha).epsilon(1e-12));
}

TEST_CASE("hypothesis failures are reported, not thrown") {
    // A zero emission breaks positivity: R = +inf, h1 false.
    const HmmModel zeroq =
        build_model(mat2(0.9, 0.1, 0.2, 0.8), mat2(1.0, 0.0, 0.1, 0.9));
    const HypothesisReport r1 = check_hypotheses(zeroq);
    CHECK_FALSE(r1.h1_holds);
    CHECK(std::isinf(r1.R));

    // Identical emission rows collapse the column rank: h2 false.
    const HmmModel flatq =
        build_model(mat2(0.9, 0.1, 0.2, 0.8), mat2(0.5, 0.5, 0.5, 0.5));
    const HypothesisReport r2 = check_hypotheses(flatq);
    CHECK(r2.h1_holds);
    CHECK_FALSE(r2.h2_holds);
    CHECK(r2.sigma_min_q < 1e-12);
}

TEST_CASE("observation marginal") {
    const HmmModel m = reference_model();
    const Eigen::VectorXd mu = observation_marginal(m);
    CHECK(mu(0) == doctest::Approx(19.0 / 30.0).epsilon(1e-13));
    CHECK(mu(1) == doctest::Approx(11.0 / 30.0).epsilon(1e-13));
    CHECK(mu.sum() == doctest::Approx(1.0).epsilon(1e-13));
}
