#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hmmlyap/memloss.hpp"
#include "hmmlyap/rng.hpp"

using namespace hmmlyap;

namespace {

HmmModel reference_model() {
    Eigen::MatrixXd p(2, 2), q(2, 2);
    p << 0.9, 0.1, 0.2, 0.8;
    q << 0.9, 0.1, 0.1, 0.9;
    return build_model(p, q);
}

HmmModel three_state_model() {
    Eigen::MatrixXd p(3, 3), q(3, 3);
    p << 0.70, 0.20, 0.10,
         0.15, 0.70, 0.15,
         0.10, 0.30, 0.60;
    q << 0.80, 0.10, 0.10,
         0.10, 0.80, 0.10,
         0.20, 0.20, 0.60;
    return build_model(p, q);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative gap between a curve value and the oracle at the same n.
double rel_err(double got, double want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

} // namespace

TEST_CASE("filter vectors of the reference model") {
    const HmmModel m = reference_model();
    const FilterVectors fv = filter_vectors(m);
    CHECK(fv.theta(0, 0) == doctest::Approx(0.6).epsilon(1e-13));
    CHECK(fv.theta(1, 0) == doctest::Approx(1.0 / 30.0).epsilon(1e-13));
    CHECK(fv.theta(0, 1) == doctest::Approx(1.0 / 15.0).epsilon(1e-13));
    CHECK(fv.theta(1, 1) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(fv.psi(0, 0) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(fv.psi(1, 0) == doctest::Approx(0.2).epsilon(1e-15));
    // Sum rules: columns of theta add to pi, columns of psi add to ones.
    CHECK(((fv.theta.rowwise().sum() - m.pi).cwiseAbs().maxCoeff()) < 1e-14);
    CHECK(((fv.psi.rowwise().sum() - Eigen::VectorXd::Ones(2)).cwiseAbs().maxCoeff()) < 1e-14);
}

TEST_CASE("Delta[1] closed-form value") {
    // With an empty interior window, Delta_{1,1,2}[1] depends on the model
    // constants only; the reference value 112/209 was computed by hand from
    // the defining conditional laws.
    const HmmModel m = reference_model();
    ObservationWindow w;
    w.origin = -1;
    w.symbols = {};
    const std::vector<Triple> ts = {{1, 1, 2}};
    const auto curves = delta_curve(m, w, ts, 1);
    REQUIRE(curves.size() == 1);
    REQUIRE(curves[0].values.size() == 1);
    CHECK_FALSE(curves[0].censored[0]);
    CHECK(rel_err(curves[0].values[0], 112.0 / 209.0) < 1e-12);
}

TEST_CASE("curve engine agrees with the enumeration oracle") {
    const HmmModel m = reference_model();
    const SamplePath path = sample_path(m, 64, rng::substream(14728, 100));
    const ObservationWindow w = past_window(path, 16);
    const auto triples = all_triples(m);
    const auto curves = delta_curve(m, w, triples, 10);
    REQUIRE(curves.size() == triples.size());
    for (std::size_t t = 0; t < curves.size(); ++t) {
        for (long long n = 1; n <= 10; ++n) {
            const double oracle = delta_bruteforce(m, w, curves[t].triple, n);
            const double got = curves[t].values[static_cast<std::size_t>(n - 1)];
            if (curves[t].triple.b == curves[t].triple.c) {
                CHECK(got == 0.0);
                CHECK(std::abs(oracle) < 1e-30);
            } else {
                CHECK(rel_err(got, oracle) < 1e-10);
            }
        }
    }
}

TEST_CASE("curve engine matches the oracle on a three-state model") {
    const HmmModel m = three_state_model();
    const SamplePath path = sample_path(m, 32, 4242);
    const ObservationWindow w = past_window(path, 9);
    const std::vector<Triple> ts = {{1, 1, 2}, {2, 1, 3}, {3, 2, 3}, {1, 3, 1}};
    const auto curves = delta_curve(m, w, ts, 8);
    for (const auto& c : curves) {
        for (long long n = 1; n <= 8; ++n) {
            const double oracle = delta_bruteforce(m, w, c.triple, n);
            CHECK(rel_err(c.values[static_cast<std::size_t>(n - 1)], oracle) < 1e-10);
        }
    }
}

TEST_CASE("observation curves agree with their own oracle") {
    const HmmModel m = reference_model();
    const SamplePath path = sample_path(m, 64, rng::substream(14728, 100));
    const ObservationWindow w = past_window(path, 16);
    const auto triples = all_observation_triples(m);
    const auto curves = delta_tilde_curve(m, w, triples, 10);
    for (const auto& c : curves) {
        for (long long n = 1; n <= 10; ++n) {
            const double oracle = delta_tilde_bruteforce(m, w, c.triple, n);
            if (c.triple.b == c.triple.c) {
                CHECK(c.values[static_cast<std::size_t>(n - 1)] == 0.0);
            } else {
                CHECK(rel_err(c.values[static_cast<std::size_t>(n - 1)], oracle) < 1e-10);
            }
        }
    }
}

TEST_CASE("oracle guards its range") {
    const HmmModel m = reference_model();
    const SamplePath path = sample_path(m, 64, 5);
    const ObservationWindow w = past_window(path, 20);
    CHECK_THROWS_AS(delta_bruteforce(m, w, {1, 1, 2}, 15), Error);
    CHECK_THROWS_AS(delta_bruteforce(m, w, {1, 1, 2}, 0), Error);
}

TEST_CASE("curves are invariant under injected rescaling") {
    // The engine renormalizes its forward and wedge vectors; multiplying all
    // of them by wild scales at chosen steps must not move the result.
    const HmmModel m = reference_model();
    const SamplePath path = sample_path(m, 200, 31);
    const ObservationWindow w = past_window(path, 150);
    const std::vector<Triple> ts = {{1, 1, 2}, {2, 2, 1}};
    const auto plain = delta_curve(m, w, ts, 120);

    detail::CurveHooks hooks;
    hooks.rescale = [](long long n) {
        if (n % 3 == 0) return 1e120;
        if (n % 3 == 1) return 1e-80;
        return 1.0;
    };
    const auto scaled =
        detail::delta_curves_impl(m, w, ts, 120, 1e-290, false, &hooks);
    REQUIRE(scaled.size() == plain.size());
    for (std::size_t t = 0; t < plain.size(); ++t) {
        for (std::size_t i = 0; i < plain[t].log_abs.size(); ++i) {
            CHECK(plain[t].censored[i] == scaled[t].censored[i]);
            if (!plain[t].censored[i]) {
                CHECK(plain[t].log_abs[i] ==
                      doctest::Approx(scaled[t].log_abs[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("conditional weights stay inside the emission ratio band") {
    // <theta_b, w>/<pi, w> is a q(b|.)-weighted mean over states, so it lies
    // in [min_q, max_q] and a fortiori in [1/R, R] for every window depth.
    const HmmModel m = reference_model();
    const FilterVectors fv = filter_vectors(m);
    const SamplePath path = sample_path(m, 300, 32);
    const ObservationWindow w = past_window(path, 250);
    const std::vector<Triple> ts = {{1, 1, 2}};

    detail::CurveHooks hooks;
    bool saw = false;
    hooks.observe = [&](long long, const Eigen::VectorXd& u, const Eigen::VectorXd& wv) {
        saw = true;
        for (int b = 0; b < 2; ++b) {
            const double num = fv.theta.col(b).dot(wv);
            const double den = m.pi.dot(wv);
            REQUIRE(den > 0.0);
            const double g = num / den;
            CHECK(g >= 0.1 - 1e-12);
            CHECK(g <= 10.0 + 1e-12);
        }
        CHECK(u.cwiseAbs().maxCoeff() > 0.0);
    };
    detail::delta_curves_impl(m, w, ts, 200, 1e-290, false, &hooks);
    CHECK(saw);
}

TEST_CASE("rate estimation on a synthetic geometric curve") {
    DecayCurve c;
    c.triple = {1, 1, 2};
    c.n_range = {1, 60};
    for (long long n = 1; n <= 60; ++n) {
        const double la = static_cast<double>(n) * std::log(0.7);
        c.log_abs.push_back(la);
        c.values.push_back(std::exp(la));
        c.censored.push_back(false);
    }
    const RateEstimate reg = estimate_rate(c, 2, 60, "regression");
    CHECK(reg.tau_hat == doctest::Approx(std::log(0.7)).epsilon(1e-12));
    CHECK(reg.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reg.method == "regression");

    const RateEstimate tm = estimate_rate(c, 2, 60, "tail-max");
    CHECK(tm.tau_hat == doctest::Approx(std::log(0.7)).epsilon(1e-12));
    CHECK(std::isnan(tm.r_squared));
    CHECK(tm.method == "tail-max");
}

TEST_CASE("rate estimation handles degenerate curves") {
    DecayCurve zero;
    zero.triple = {1, 1, 1};
    zero.n_range = {1, 30};
    for (long long n = 1; n <= 30; ++n) {
        zero.values.push_back(0.0);
        zero.log_abs.push_back(-kInf);
        zero.censored.push_back(true);
    }
    const RateEstimate est = estimate_rate(zero, 2, 30);
    CHECK(est.tau_hat == -kInf);
    CHECK(est.r_squared == 0.0);

    DecayCurve few = zero;
    for (int i = 0; i < 3; ++i) {
        few.censored[static_cast<std::size_t>(5 + i)] = false;
        few.log_abs[static_cast<std::size_t>(5 + i)] = -1.0 * i;
        few.values[static_cast<std::size_t>(5 + i)] = std::exp(-1.0 * i);
    }
    try {
        estimate_rate(few, 2, 30);
        FAIL("expected TooFewPoints");
    } catch (const Error& e) {
        CHECK(e.kind() == std::string("TooFewPoints"));
    }
}

TEST_CASE("rate estimation validates its window and method") {
    DecayCurve c;
    c.triple = {1, 1, 2};
    c.n_range = {1, 10};
    for (long long n = 1; n <= 10; ++n) {
        c.values.push_back(0.5);
        c.log_abs.push_back(std::log(0.5));
        c.censored.push_back(false);
    }
    CHECK_THROWS_AS(estimate_rate(c, 1, 10), Error);            // n_min < 2
    CHECK_THROWS_AS(estimate_rate(c, 2, 11), Error);            // beyond curve
    CHECK_THROWS_AS(estimate_rate(c, 2, 10, "spline"), Error);  // unknown method
}

TEST_CASE("psi decomposition against a direction") {
    const HmmModel m = reference_model();
    Eigen::VectorXd f(2);
    f << 0.8, 0.6;
    const auto [u1, xi1] = decompose_psi(m, 1, f);
    CHECK(u1 == doctest::Approx((0.8 * 0.9 + 0.6 * 0.2) / 1.4).epsilon(1e-13));
    CHECK(std::abs(f.dot(xi1)) < 1e-15);
    CHECK((xi1 + Eigen::VectorXd::Constant(2, u1) -
           m.p.col(0)).cwiseAbs().maxCoeff() < 1e-14);

    // psi proportional to the ones vector splits exactly: u = 1/2, xi = 0.
    Eigen::MatrixXd pu(2, 2), q(2, 2);
    pu << 0.5, 0.5, 0.5, 0.5;
    q << 0.9, 0.1, 0.1, 0.9;
    const HmmModel mu = build_model(pu, q);
    const auto [uu, xiu] = decompose_psi(mu, 2, f);
    CHECK(uu == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(xiu.cwiseAbs().maxCoeff() < 1e-15);

    Eigen::VectorXd bad(2);
    bad << 1.0, -1.0;
    try {
        decompose_psi(m, 1, bad);
        FAIL("expected DegenerateDirection");
    } catch (const Error& e) {
        CHECK(e.kind() == std::string("DegenerateDirection"));
    }
}

TEST_CASE("triple enumerations") {
    const HmmModel m = reference_model();
    const auto ts = all_triples(m);
    REQUIRE(ts.size() == 8);
    CHECK(ts[0].a == 1);
    CHECK(ts[0].b == 1);
    CHECK(ts[0].c == 1);
    CHECK(ts[1].b == 1);
    CHECK(ts[1].c == 2);
    CHECK(ts[7].a == 2);
    CHECK(ts[7].b == 2);
    CHECK(ts[7].c == 2);
    const auto obs = all_observation_triples(m);
    REQUIRE(obs.size() == 8);
}

TEST_CASE("best_rate tie-breaking and -inf handling") {
    std::vector<RateEstimate> rates(3);
    rates[0].triple = {1, 1, 1};
    rates[0].tau_hat = -kInf;
    rates[1].triple = {1, 1, 2};
    rates[1].tau_hat = -1.66;
    rates[2].triple = {1, 2, 1};
    rates[2].tau_hat = -1.66;
    const RateEstimate& best = best_rate(rates);
    CHECK(best.triple.b == 1);
    CHECK(best.triple.c == 2);

    std::vector<RateEstimate> all_inf(2);
    all_inf[0].tau_hat = -kInf;
    all_inf[1].tau_hat = -kInf;
    CHECK(best_rate(all_inf).tau_hat == -kInf);
    CHECK(&best_rate(all_inf) == &all_inf[0]);
}

TEST_CASE("frozen window rates replay") {
    // End-to-end pins: path of length 400, past window of 399 symbols,
    // regression over n in [20, 400] for the (1,1,2) curve. Uncensored
    // windows replay to twelve digits; windows whose curves dip below the
    // floor near n = 400 keep the slope within the censoring shift.
    const HmmModel m = reference_model();
    const auto tau_of = [&](std::uint64_t widx) {
        const SamplePath path = sample_path(m, 400, rng::substream(14728, widx));
        const ObservationWindow w = past_window(path, 399);
        const std::vector<Triple> ts = {{1, 1, 2}};
        const auto curves = delta_curve(m, w, ts, 400);
        return estimate_rate(curves[0], 20, 400).tau_hat;
    };
    CHECK(tau_of(0) == doctest::Approx(-1.660316846660).epsilon(1e-9));
    CHECK(tau_of(1) == doctest::Approx(-1.624511694456).epsilon(1e-9));
    CHECK(tau_of(4) == doctest::Approx(-1.616841707853).epsilon(1e-9));
    CHECK(tau_of(11) == doctest::Approx(-1.693235398283).epsilon(0.02));
    CHECK(tau_of(14) == doctest::Approx(-1.773747741940).epsilon(0.02));
}
